use std::fmt;
use std::str::FromStr;

use newton_gsor::problems::problem_by_name;
use newton_gsor::{MethodKind, OmegaStrategy, OuterCriterion};
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Methods addressable from the command line. `Sor` is GSOR at bandwidth 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Sor,
    Gsor,
    Gj,
    Ggs,
    Direct,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 5] = [
        BenchMethod::Sor,
        BenchMethod::Gsor,
        BenchMethod::Gj,
        BenchMethod::Ggs,
        BenchMethod::Direct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchMethod::Sor => "sor",
            BenchMethod::Gsor => "gsor",
            BenchMethod::Gj => "gj",
            BenchMethod::Ggs => "ggs",
            BenchMethod::Direct => "direct",
        }
    }

    /// Heading used in markdown tables.
    pub fn label(self) -> &'static str {
        match self {
            BenchMethod::Sor => "Newton-SOR",
            BenchMethod::Gsor => "Newton-GSOR",
            BenchMethod::Gj => "Newton-GJ",
            BenchMethod::Ggs => "Newton-GGS",
            BenchMethod::Direct => "Newton (direct)",
        }
    }

    pub fn kind(self) -> MethodKind {
        match self {
            BenchMethod::Sor | BenchMethod::Gsor => MethodKind::GeneralizedSor,
            BenchMethod::Gj => MethodKind::GeneralizedJacobi,
            BenchMethod::Ggs => MethodKind::GeneralizedGaussSeidel,
            BenchMethod::Direct => MethodKind::Direct,
        }
    }

    /// SOR and direct ignore the plan's bandwidth list.
    pub fn uses_bandwidth(self) -> bool {
        matches!(self, BenchMethod::Gsor | BenchMethod::Gj | BenchMethod::Ggs)
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchMethod {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        BenchMethod::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BenchError::Parse(format!("unknown method {s:?}")))
    }
}

/// A bandwidth given either explicitly or relative to the dimension (`n-5`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandwidthSpec {
    Explicit(usize),
    NMinus(usize),
}

impl BandwidthSpec {
    pub fn resolve(self, n: usize) -> Result<usize, BenchError> {
        let m = match self {
            BandwidthSpec::Explicit(m) => Some(m),
            BandwidthSpec::NMinus(k) => n.checked_sub(k),
        };
        match m {
            Some(m) if m < n => Ok(m),
            _ => Err(BenchError::Plan(format!(
                "bandwidth {self} is out of range for n = {n}"
            ))),
        }
    }
}

impl fmt::Display for BandwidthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandwidthSpec::Explicit(m) => write!(f, "{m}"),
            BandwidthSpec::NMinus(k) => write!(f, "n-{k}"),
        }
    }
}

impl FromStr for BandwidthSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        let s = s.trim();
        let bad = || BenchError::Parse(format!("invalid bandwidth {s:?}; expected an integer or n-K"));
        if let Some(rest) = s.strip_prefix('n') {
            let rest = rest.trim_start();
            if rest.is_empty() {
                return Ok(BandwidthSpec::NMinus(0));
            }
            let k = rest.strip_prefix('-').ok_or_else(bad)?;
            return k.trim().parse().map(BandwidthSpec::NMinus).map_err(|_| bad());
        }
        s.parse().map(BandwidthSpec::Explicit).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaSetting {
    Fixed(f64),
    Auto(OmegaStrategy),
}

impl FromStr for OmegaSetting {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(OmegaSetting::Auto(OmegaStrategy::GridByInnerCount));
        }
        let w: f64 = s
            .parse()
            .map_err(|_| BenchError::Parse(format!("invalid omega {s:?}")))?;
        if !(w > 0.0 && w <= 2.0) {
            return Err(BenchError::Parse(format!("omega {w} outside (0, 2]")));
        }
        Ok(OmegaSetting::Fixed(w))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub problems: Vec<String>,
    pub dims: Vec<usize>,
    pub bandwidths: Vec<BandwidthSpec>,
    pub methods: Vec<BenchMethod>,
    pub starts: Vec<f64>,
    pub eps1: f64,
    pub eps2: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub criterion: OuterCriterion,
    pub omega: OmegaSetting,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for BenchPlan {
    fn default() -> Self {
        Self {
            problems: vec!["liarwhd".into()],
            dims: vec![20],
            bandwidths: vec![BandwidthSpec::NMinus(5)],
            methods: vec![BenchMethod::Gsor],
            starts: vec![4.0],
            eps1: 1e-6,
            eps2: 1e-8,
            max_outer: 200,
            max_inner: 10_000,
            criterion: OuterCriterion::GradientNorm,
            omega: OmegaSetting::Auto(OmegaStrategy::GridByInnerCount),
            repetitions: 1,
            seed: 0,
        }
    }
}

/// One resolved plan cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub problem: String,
    pub n: usize,
    /// Bandwidth passed to the solver; `None` for the direct method.
    pub m: Option<usize>,
    pub method: BenchMethod,
    pub x0: f64,
}

impl BenchPlan {
    /// Resolves the cross product in output order: problem, start, n, method, m.
    /// SOR and direct appear once per (problem, start, n).
    pub fn cells(&self) -> Result<Vec<BenchCell>, BenchError> {
        self.validate()?;
        let mut cells = Vec::new();
        for problem in &self.problems {
            for &x0 in &self.starts {
                for &n in &self.dims {
                    let resolved: Vec<usize> = self
                        .bandwidths
                        .iter()
                        .map(|b| b.resolve(n))
                        .collect::<Result<_, _>>()?;
                    for &method in &self.methods {
                        let ms: Vec<Option<usize>> = match method {
                            BenchMethod::Sor => vec![Some(0)],
                            BenchMethod::Direct => vec![None],
                            _ => {
                                let mut seen = Vec::new();
                                for &m in &resolved {
                                    if !seen.contains(&m) {
                                        seen.push(m);
                                    }
                                }
                                seen.into_iter().map(Some).collect()
                            }
                        };
                        for m in ms {
                            cells.push(BenchCell {
                                problem: problem.clone(),
                                n,
                                m,
                                method,
                                x0,
                            });
                        }
                    }
                }
            }
        }
        Ok(cells)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let empty = |what: &str| Err(BenchError::Plan(format!("{what} list is empty")));
        if self.problems.is_empty() {
            return empty("problem");
        }
        if self.dims.is_empty() {
            return empty("dimension");
        }
        if self.methods.is_empty() {
            return empty("method");
        }
        if self.starts.is_empty() {
            return empty("start value");
        }
        if self.bandwidths.is_empty() && self.methods.iter().any(|m| m.uses_bandwidth()) {
            return empty("bandwidth");
        }
        if self.repetitions == 0 {
            return Err(BenchError::Plan("repetitions must be at least 1".into()));
        }
        if !(self.eps1 > 0.0 && self.eps2 > 0.0) {
            return Err(BenchError::Plan("tolerances must be positive".into()));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(BenchError::Plan("iteration caps must be at least 1".into()));
        }
        if let Some(x0) = self.starts.iter().find(|v| !v.is_finite()) {
            return Err(BenchError::Plan(format!("start value {x0} is not finite")));
        }
        for problem in &self.problems {
            for &n in &self.dims {
                problem_by_name(problem, n)?;
                if self.methods.iter().any(|m| m.uses_bandwidth()) {
                    for b in &self.bandwidths {
                        b.resolve(n)?;
                    }
                }
            }
        }
        Ok(())
    }
}
