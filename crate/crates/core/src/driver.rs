//! Outer Newton loop with unit steps and an exchangeable inner solver.

use std::time::{Duration, Instant};

use log::{debug, warn};

use crate::error::{Error, Result};
use crate::inner::{inner_solve_from, InnerMethod, InnerOptions, MethodKind, StepNorm};
use crate::linalg::Vector;
use crate::omega::{tune_omega, OmegaChoice, OmegaSearchSpec};
use crate::problems::Objective;

/// Iterates with `‖x‖∞` above this are treated as divergent.
pub const ITERATE_DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuterCriterion {
    /// `‖∇f(x)‖₂ < ε₁`
    #[default]
    GradientNorm,
    /// `|f(x)| < ε₁`
    FunctionValue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OmegaMode {
    Fixed(f64),
    /// Tuned once before the outer loop.
    Auto(OmegaSearchSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub bandwidth: usize,
    pub method: MethodKind,
    pub omega: OmegaMode,
    pub max_outer: usize,
    pub max_inner: usize,
    pub criterion: OuterCriterion,
    pub step_norm: StepNorm,
    /// Start each inner solve from the previous direction instead of zero.
    pub warm_start: bool,
    /// Seed for the power-iteration start vector.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps1: 1e-6,
            eps2: 1e-8,
            bandwidth: 0,
            method: MethodKind::GeneralizedSor,
            omega: OmegaMode::Fixed(1.0),
            max_outer: 200,
            max_inner: 10_000,
            criterion: OuterCriterion::GradientNorm,
            step_norm: StepNorm::Euclidean,
            warm_start: false,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_method(mut self, method: MethodKind) -> Self {
        self.method = method;
        self
    }

    pub fn with_bandwidth(mut self, m: usize) -> Self {
        self.bandwidth = m;
        self
    }

    pub fn with_omega(mut self, omega: OmegaMode) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps1.is_nan() || self.eps1 <= 0.0 || self.eps2.is_nan() || self.eps2 <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive (eps1 = {}, eps2 = {})",
                self.eps1, self.eps2
            )));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(Error::InvalidConfig(
                "max_outer and max_inner must be at least 1".into(),
            ));
        }
        match &self.omega {
            OmegaMode::Fixed(w) if self.method.uses_omega() => {
                InnerMethod::new(self.method, *w)?;
            }
            OmegaMode::Auto(spec) => spec.validate()?,
            _ => {}
        }
        Ok(())
    }

    pub(crate) fn inner_options(&self) -> InnerOptions {
        InnerOptions {
            eps2: self.eps2,
            max_inner: self.max_inner,
            norm: self.step_norm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxOuterReached,
    InnerFailure,
    Diverged,
}

/// Where and why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub outer_index: usize,
    pub error: Option<Error>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub outer_iterations: usize,
    pub inner_total: usize,
    pub inner_per_outer: Vec<usize>,
    pub status: RunStatus,
    pub x_final: Vector,
    pub f_final: f64,
    pub grad_norm_final: f64,
    /// `None` for methods without a relaxation factor (GJ, direct).
    pub omega_used: Option<f64>,
    /// Outer loop only; omega tuning is excluded.
    pub wall_time: Duration,
    /// `f(x⁽ᵏ⁺¹⁾) < f(x⁽ᵏ⁾)` for each accepted step.
    pub descent: Vec<bool>,
    pub failure: Option<RunFailure>,
    pub omega_tuning: Option<OmegaChoice>,
}

impl RunReport {
    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }
}

/// True iff `f(x_next) < f(x_prev)`.
pub fn descent_check(problem: &dyn Objective, x_prev: &Vector, x_next: &Vector) -> bool {
    problem.value(x_next) < problem.value(x_prev)
}

/// Newton's method with dense direct solves of `H d = −∇f`.
pub fn newton_direct(
    problem: &dyn Objective,
    x0: &Vector,
    config: &SolverConfig,
) -> Result<RunReport> {
    let config = SolverConfig {
        method: MethodKind::Direct,
        ..config.clone()
    };
    newton_iterative(problem, x0, &config)
}

/// Newton's method whose direction comes from the configured inner method.
///
/// Invalid input is an `Err`; numerical failures during the run are reported
/// through [`RunReport::status`] and [`RunReport::failure`].
pub fn newton_iterative(
    problem: &dyn Objective,
    x0: &Vector,
    config: &SolverConfig,
) -> Result<RunReport> {
    config.validate()?;
    x0.check_len(problem.dim())?;

    let (omega, omega_tuning) = match (&config.omega, config.method) {
        (OmegaMode::Auto(spec), MethodKind::GeneralizedSor) => {
            let choice = tune_omega(problem, x0, config, spec)?;
            (choice.omega, Some(choice))
        }
        (OmegaMode::Fixed(w), MethodKind::GeneralizedSor) => (*w, None),
        _ => (1.0, None),
    };
    let method = InnerMethod::new(config.method, omega)?;
    let omega_used = match config.method {
        MethodKind::GeneralizedSor => Some(omega),
        MethodKind::GeneralizedGaussSeidel => Some(1.0),
        _ => None,
    };

    let mut run = OuterRun::new(problem, x0.clone());
    run.report.omega_used = omega_used;
    run.report.omega_tuning = omega_tuning;
    let start = Instant::now();
    run.iterate(config, method);
    run.report.wall_time = start.elapsed();
    Ok(run.report)
}

struct OuterRun<'p> {
    problem: &'p dyn Objective,
    x: Vector,
    report: RunReport,
}

impl<'p> OuterRun<'p> {
    fn new(problem: &'p dyn Objective, x: Vector) -> Self {
        let report = RunReport {
            outer_iterations: 0,
            inner_total: 0,
            inner_per_outer: Vec::new(),
            status: RunStatus::MaxOuterReached,
            x_final: x.clone(),
            f_final: f64::NAN,
            grad_norm_final: f64::NAN,
            omega_used: None,
            wall_time: Duration::ZERO,
            descent: Vec::new(),
            failure: None,
            omega_tuning: None,
        };
        Self { problem, x, report }
    }

    fn criterion_value(criterion: OuterCriterion, f: f64, grad_norm: f64) -> f64 {
        match criterion {
            OuterCriterion::GradientNorm => grad_norm,
            OuterCriterion::FunctionValue => f.abs(),
        }
    }

    fn finish(&mut self, status: RunStatus, f: f64, grad_norm: f64) {
        self.report.status = status;
        self.report.x_final = self.x.clone();
        self.report.f_final = f;
        self.report.grad_norm_final = grad_norm;
    }

    fn fail(&mut self, status: RunStatus, outer_index: usize, error: Option<Error>, message: String) {
        warn!("outer step {outer_index}: {message}");
        self.report.failure = Some(RunFailure {
            outer_index,
            error,
            message,
        });
        self.report.status = status;
    }

    fn iterate(&mut self, config: &SolverConfig, method: InnerMethod) {
        let options = config.inner_options();
        let mut best: Option<(f64, Vector, f64, f64)> = None;
        let mut previous_direction: Option<Vector> = None;

        for k in 0..=config.max_outer {
            let f = self.problem.value(&self.x);
            let gradient = self.problem.gradient(&self.x);
            let grad_norm = gradient.norm2();
            if !f.is_finite() || !gradient.is_finite() {
                self.fail(RunStatus::Diverged, k, None, "non-finite objective or gradient".into());
                self.finish(RunStatus::Diverged, f, grad_norm);
                return;
            }
            let score = Self::criterion_value(config.criterion, f, grad_norm);
            debug!("outer {k}: f = {f:e}, ‖∇f‖ = {grad_norm:e}");
            if score < config.eps1 {
                self.finish(RunStatus::Converged, f, grad_norm);
                return;
            }
            if best.as_ref().is_none_or(|b| score < b.0) {
                best = Some((score, self.x.clone(), f, grad_norm));
            }
            if k == config.max_outer {
                break;
            }

            let hessian = self.problem.hessian(&self.x);
            let fhat = gradient.scaled(-1.0);
            let initial = if config.warm_start {
                previous_direction.as_ref()
            } else {
                None
            };
            let inner = match inner_solve_from(
                &hessian,
                &fhat,
                method,
                config.bandwidth,
                &options,
                initial,
            ) {
                Ok(r) => r,
                Err(e) => {
                    let status = match e {
                        Error::Diverged { .. } => RunStatus::Diverged,
                        _ => RunStatus::InnerFailure,
                    };
                    self.fail(status, k, Some(e.clone()), e.to_string());
                    self.finish(status, f, grad_norm);
                    return;
                }
            };
            self.report.inner_per_outer.push(inner.iterations);
            self.report.inner_total += inner.iterations;
            if !inner.converged {
                let msg = format!(
                    "inner solve did not converge in {} steps (last step norm {:e})",
                    inner.iterations, inner.final_step_norm
                );
                self.fail(RunStatus::InnerFailure, k, None, msg);
                self.finish(RunStatus::InnerFailure, f, grad_norm);
                return;
            }

            let next = self.x.add(&inner.d);
            if !next.is_finite() || next.norm_inf() > ITERATE_DIVERGENCE_THRESHOLD {
                self.fail(RunStatus::Diverged, k, None, "iterate left the finite range".into());
                self.finish(RunStatus::Diverged, f, grad_norm);
                return;
            }
            let decreased = descent_check(self.problem, &self.x, &next);
            if !decreased {
                warn!("outer step {k} did not decrease the objective");
            }
            self.report.descent.push(decreased);
            self.report.outer_iterations += 1;
            previous_direction = Some(inner.d);
            self.x = next;
        }

        let (_, x, f, g) = best.expect("at least one outer evaluation");
        self.x = x;
        self.finish(RunStatus::MaxOuterReached, f, g);
    }
}
