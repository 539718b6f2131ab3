//! Dense primitives, the banded splitting and its factor/solve machinery.

mod matrix;
mod spectral;
mod splitting;
mod vector;

pub use matrix::{DenseMatrix, LuFactorization, PIVOT_TOLERANCE};
pub use spectral::{
    spectral_radius_estimate, SpectralEstimate, POWER_MAX_ITERATIONS, POWER_TOLERANCE,
};
pub use splitting::{split_strict, BandedSplitting, Entry, LowerSystemFactorization};
pub use vector::Vector;
