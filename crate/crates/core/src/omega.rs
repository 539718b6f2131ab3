//! Selection of the GSOR relaxation factor before the outer loop.

use crate::driver::{newton_iterative, OmegaMode, SolverConfig};
use crate::error::{Error, Result};
use crate::inner::{InnerMethod, MethodKind};
use crate::linalg::{spectral_radius_estimate, BandedSplitting, Vector};
use crate::problems::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmegaStrategy {
    /// Full Newton-GSOR solve per candidate; minimize total inner iterations.
    #[default]
    GridByInnerCount,
    /// Minimize the estimated spectral radius of the GSOR operator at `H(x0)`.
    SpectralRadiusAtStart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSearchSpec {
    pub strategy: OmegaStrategy,
    /// Strictly increasing candidates in `(0, 2]`.
    pub grid: Vec<f64>,
}

impl Default for OmegaSearchSpec {
    fn default() -> Self {
        Self {
            strategy: OmegaStrategy::GridByInnerCount,
            grid: default_grid(),
        }
    }
}

/// `1.00, 1.05, …, 2.00`
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|k| (100 + 5 * k) as f64 / 100.0).collect()
}

impl OmegaSearchSpec {
    pub fn with_strategy(strategy: OmegaStrategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig("omega grid is empty".into()));
        }
        if let Some(w) = self.grid.iter().find(|w| !(**w > 0.0 && **w <= 2.0)) {
            return Err(Error::InvalidConfig(format!(
                "omega grid value {w} outside (0, 2]"
            )));
        }
        if self.grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidConfig(
                "omega grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Score of one grid candidate; `None` when the candidate failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaScore {
    pub omega: f64,
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaChoice {
    pub omega: f64,
    pub strategy: OmegaStrategy,
    pub scores: Vec<OmegaScore>,
}

/// Picks the grid value with the lowest score; ties go to the smallest ω.
pub fn tune_omega(
    problem: &dyn Objective,
    x0: &Vector,
    config: &SolverConfig,
    spec: &OmegaSearchSpec,
) -> Result<OmegaChoice> {
    spec.validate()?;
    x0.check_len(problem.dim())?;

    let scores = match spec.strategy {
        OmegaStrategy::GridByInnerCount => {
            let mut scores = Vec::with_capacity(spec.grid.len());
            for &omega in &spec.grid {
                let candidate = SolverConfig {
                    method: MethodKind::GeneralizedSor,
                    omega: OmegaMode::Fixed(omega),
                    ..config.clone()
                };
                let report = newton_iterative(problem, x0, &candidate)?;
                let score = report.converged().then_some(report.inner_total as f64);
                scores.push(OmegaScore { omega, score });
            }
            scores
        }
        OmegaStrategy::SpectralRadiusAtStart => {
            let h = problem.hessian(x0);
            let splitting = BandedSplitting::split(&h, config.bandwidth);
            spec.grid
                .iter()
                .map(|&omega| {
                    let score = InnerMethod::new(MethodKind::GeneralizedSor, omega)
                        .and_then(|m| spectral_radius_estimate(&splitting, m, config.seed))
                        .ok()
                        .map(|e| e.radius)
                        .filter(|r| r.is_finite());
                    OmegaScore { omega, score }
                })
                .collect()
        }
    };

    let best = scores
        .iter()
        .filter_map(|s| s.score.map(|v| (s.omega, v)))
        .fold(None, |best: Option<(f64, f64)>, cur| match best {
            Some(b) if b.1 <= cur.1 => Some(b),
            _ => Some(cur),
        });
    match best {
        Some((omega, _)) => Ok(OmegaChoice {
            omega,
            strategy: spec.strategy,
            scores,
        }),
        None => Err(Error::AllCandidatesFailed),
    }
}
