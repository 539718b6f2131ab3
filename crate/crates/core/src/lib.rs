//! Newton's method for smooth unconstrained minimization, with the Newton
//! system `H d = −∇f` solved by stationary iterations built on a banded
//! splitting of the Hessian.
//!
//! The Hessian is split as `H = T_m − E_m − F_m`, where `T_m` keeps the
//! `2m + 1` central diagonals. On top of that splitting the crate provides
//! generalized Jacobi (GJ), generalized Gauss-Seidel (GGS) and generalized SOR
//! (GSOR) inner solvers, a dense direct baseline, relaxation-factor tuning and
//! the LIARWHD and DIAG-AUP1 benchmark objectives.
//!
//! ```
//! use newton_gsor::{newton_iterative, problems::Liarwhd, MethodKind, OmegaMode, SolverConfig, Vector};
//!
//! let problem = Liarwhd::new(10).unwrap();
//! let config = SolverConfig::default()
//!     .with_method(MethodKind::GeneralizedSor)
//!     .with_bandwidth(5)
//!     .with_omega(OmegaMode::Fixed(1.2));
//! let report = newton_iterative(&problem, &Vector::filled(10, 4.0), &config).unwrap();
//! assert!(report.converged());
//! ```

pub mod driver;
pub mod error;
pub mod inner;
pub mod linalg;
pub mod omega;
pub mod problems;

pub use driver::{
    descent_check, newton_direct, newton_iterative, OmegaMode, OuterCriterion, RunFailure,
    RunReport, RunStatus, SolverConfig,
};
pub use error::{Error, Result};
pub use inner::{
    ggs_step, gj_step, gsor_step, inner_solve, inner_solve_from, InnerMethod, InnerOptions,
    InnerResult, MethodKind, SplittingIteration, StepNorm,
};
pub use linalg::{BandedSplitting, DenseMatrix, LowerSystemFactorization, Vector};
pub use omega::{tune_omega, OmegaChoice, OmegaScore, OmegaSearchSpec, OmegaStrategy};
pub use problems::Objective;
