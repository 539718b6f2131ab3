//! Stationary inner solvers for the Newton system `H d = f̂`.
//!
//! Every method is a splitting `H = M - N` iterated as `M d' = N d + c f̂`:
//!
//! | method | `M`            | `N`                        | `c` |
//! |--------|----------------|----------------------------|-----|
//! | GJ     | `T_m`          | `E_m + F_m`                | 1   |
//! | GGS    | `T_m - E_m`    | `F_m`                      | 1   |
//! | GSOR   | `T_m - ω E_m`  | `ω F_m + (1 - ω) T_m`      | ω   |
//!
//! With `m = 0` these are the classical Jacobi, Gauss-Seidel and SOR sweeps.

use crate::error::{Error, Result};
use crate::linalg::{BandedSplitting, DenseMatrix, LowerSystemFactorization, Vector};

/// Step norm above which an inner iteration is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    GeneralizedJacobi,
    GeneralizedGaussSeidel,
    GeneralizedSor,
    Direct,
}

impl MethodKind {
    pub fn uses_omega(self) -> bool {
        self == MethodKind::GeneralizedSor
    }
}

/// An inner method together with its relaxation factor. `omega` only affects
/// [`MethodKind::GeneralizedSor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerMethod {
    pub kind: MethodKind,
    pub omega: f64,
}

impl InnerMethod {
    pub fn new(kind: MethodKind, omega: f64) -> Result<Self> {
        if kind.uses_omega() && !(omega > 0.0 && omega <= 2.0) {
            return Err(Error::InvalidConfig(format!(
                "relaxation factor {omega} outside (0, 2]"
            )));
        }
        Ok(Self { kind, omega })
    }

    pub fn jacobi() -> Self {
        Self {
            kind: MethodKind::GeneralizedJacobi,
            omega: 1.0,
        }
    }

    pub fn gauss_seidel() -> Self {
        Self {
            kind: MethodKind::GeneralizedGaussSeidel,
            omega: 1.0,
        }
    }

    /// Panics if `omega` is outside `(0, 2]`; use [`InnerMethod::new`] for
    /// untrusted input.
    pub fn sor(omega: f64) -> Self {
        Self::new(MethodKind::GeneralizedSor, omega).expect("invalid relaxation factor")
    }

    pub fn direct() -> Self {
        Self {
            kind: MethodKind::Direct,
            omega: 1.0,
        }
    }

    /// Over-relaxation in `(1, 2]` is the usual regime; anything else is
    /// accepted but non-default.
    pub fn is_over_relaxed(&self) -> bool {
        self.omega > 1.0 && self.omega <= 2.0
    }
}

/// Norm used for the inner stopping test `‖d⁽ᵏ⁺¹⁾ - d⁽ᵏ⁾‖ < ε₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepNorm {
    #[default]
    Euclidean,
    Max,
}

impl StepNorm {
    pub fn measure(self, v: &Vector) -> f64 {
        match self {
            StepNorm::Euclidean => v.norm2(),
            StepNorm::Max => v.norm_inf(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerOptions {
    pub eps2: f64,
    pub max_inner: usize,
    pub norm: StepNorm,
}

impl Default for InnerOptions {
    fn default() -> Self {
        Self {
            eps2: 1e-8,
            max_inner: 10_000,
            norm: StepNorm::Euclidean,
        }
    }
}

impl InnerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.eps2.is_nan() || self.eps2 <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "inner tolerance must be positive, got {}",
                self.eps2
            )));
        }
        if self.max_inner == 0 {
            return Err(Error::InvalidConfig("max_inner must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerResult {
    pub d: Vector,
    pub iterations: usize,
    pub converged: bool,
    pub final_step_norm: f64,
}

/// A splitting iteration with `M` factored once, ready for repeated steps.
#[derive(Debug, Clone)]
pub struct SplittingIteration<'a> {
    splitting: &'a BandedSplitting,
    method: InnerMethod,
    factor: LowerSystemFactorization,
}

impl<'a> SplittingIteration<'a> {
    pub fn new(splitting: &'a BandedSplitting, method: InnerMethod) -> Result<Self> {
        let factor_omega = match method.kind {
            MethodKind::GeneralizedJacobi => 0.0,
            MethodKind::GeneralizedGaussSeidel => 1.0,
            MethodKind::GeneralizedSor => method.omega,
            MethodKind::Direct => {
                return Err(Error::InvalidConfig(
                    "direct solve has no splitting iteration".into(),
                ))
            }
        };
        let factor = splitting.factor_lower_system(factor_omega)?;
        Ok(Self {
            splitting,
            method,
            factor,
        })
    }

    pub fn method(&self) -> InnerMethod {
        self.method
    }

    fn right_operator(&self, d: &Vector) -> Result<Vector> {
        match self.method.kind {
            MethodKind::GeneralizedJacobi => self.splitting.apply_outside_band(d),
            MethodKind::GeneralizedGaussSeidel => self.splitting.apply_upper(d),
            MethodKind::GeneralizedSor => self.splitting.apply_rhs_operator(self.method.omega, d),
            MethodKind::Direct => unreachable!("rejected in SplittingIteration::new"),
        }
    }

    /// One update `d' = M⁻¹ (N d + c f̂)`.
    pub fn step(&self, d: &Vector, fhat: &Vector) -> Result<Vector> {
        fhat.check_len(self.splitting.n())?;
        let mut rhs = self.right_operator(d)?;
        let c = match self.method.kind {
            MethodKind::GeneralizedSor => self.method.omega,
            _ => 1.0,
        };
        rhs.axpy(c, fhat);
        self.factor.solve_factored(&rhs)
    }

    /// The iteration matrix applied to `d`: `M⁻¹ N d`.
    pub fn apply_homogeneous(&self, d: &Vector) -> Result<Vector> {
        let rhs = self.right_operator(d)?;
        self.factor.solve_factored(&rhs)
    }
}

/// Generalized Jacobi step: `T_m d' = (E_m + F_m) d + f̂`.
pub fn gj_step(s: &BandedSplitting, d: &Vector, fhat: &Vector) -> Result<Vector> {
    SplittingIteration::new(s, InnerMethod::jacobi())?.step(d, fhat)
}

/// Generalized Gauss-Seidel step: `(T_m - E_m) d' = F_m d + f̂`.
pub fn ggs_step(s: &BandedSplitting, d: &Vector, fhat: &Vector) -> Result<Vector> {
    SplittingIteration::new(s, InnerMethod::gauss_seidel())?.step(d, fhat)
}

/// GSOR step: `(T_m - ω E_m) d' = (ω F_m + (1 - ω) T_m) d + ω f̂`.
pub fn gsor_step(s: &BandedSplitting, omega: f64, d: &Vector, fhat: &Vector) -> Result<Vector> {
    let method = InnerMethod::new(MethodKind::GeneralizedSor, omega)?;
    SplittingIteration::new(s, method)?.step(d, fhat)
}

/// Solves `h d = fhat` starting from `d = 0`.
pub fn inner_solve(
    h: &DenseMatrix,
    fhat: &Vector,
    method: InnerMethod,
    m: usize,
    options: &InnerOptions,
) -> Result<InnerResult> {
    inner_solve_from(h, fhat, method, m, options, None)
}

/// Like [`inner_solve`], optionally warm-started from `initial`.
pub fn inner_solve_from(
    h: &DenseMatrix,
    fhat: &Vector,
    method: InnerMethod,
    m: usize,
    options: &InnerOptions,
    initial: Option<&Vector>,
) -> Result<InnerResult> {
    options.validate()?;
    fhat.check_len(h.n())?;

    if method.kind == MethodKind::Direct {
        let d = h.solve(fhat)?;
        return Ok(InnerResult {
            d,
            iterations: 1,
            converged: true,
            final_step_norm: 0.0,
        });
    }

    let splitting = BandedSplitting::split(h, m);
    let iteration = SplittingIteration::new(&splitting, method)?;

    let mut d = match initial {
        Some(d0) => {
            d0.check_len(h.n())?;
            d0.clone()
        }
        None => Vector::zeros(h.n()),
    };
    let mut step_norm = f64::INFINITY;
    for k in 1..=options.max_inner {
        let next = iteration.step(&d, fhat)?;
        step_norm = options.norm.measure(&next.sub(&d));
        if !step_norm.is_finite() || step_norm > DIVERGENCE_THRESHOLD || !next.is_finite() {
            return Err(Error::Diverged {
                iterations: k,
                step_norm,
            });
        }
        d = next;
        if step_norm < options.eps2 {
            return Ok(InnerResult {
                d,
                iterations: k,
                converged: true,
                final_step_norm: step_norm,
            });
        }
    }
    Ok(InnerResult {
        d,
        iterations: options.max_inner,
        converged: false,
        final_step_norm: step_norm,
    })
}
