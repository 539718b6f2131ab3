//! Power-iteration estimate of the spectral radius of an iteration matrix `M⁻¹N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::inner::{InnerMethod, MethodKind, SplittingIteration};
use crate::linalg::{BandedSplitting, Vector};

pub const POWER_TOLERANCE: f64 = 1e-8;
pub const POWER_MAX_ITERATIONS: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub radius: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Estimates `ρ(M⁻¹N)` for the splitting that `method` induces on `s`.
///
/// The estimate is the geometric mean of two consecutive growth ratios
/// `‖A v‖ / ‖v‖`, which also settles when the dominant eigenvalues come as a
/// `±λ` pair. Complex dominant pairs may fail to settle; the last estimate is
/// returned with `converged = false`.
pub fn spectral_radius_estimate(
    s: &BandedSplitting,
    method: InnerMethod,
    seed: u64,
) -> Result<SpectralEstimate> {
    if method.kind == MethodKind::Direct {
        return Ok(SpectralEstimate {
            radius: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let iteration = SplittingIteration::new(s, method)?;
    let n = s.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vector::from_raw((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let norm = v.norm2();
    v = v.scaled(1.0 / norm);

    let mut previous_ratio: Option<f64> = None;
    let mut previous_estimate = f64::NAN;
    let mut estimate = 0.0;
    for iteration_count in 1..=POWER_MAX_ITERATIONS {
        let w = iteration.apply_homogeneous(&v)?;
        let ratio = w.norm2();
        if ratio == 0.0 {
            return Ok(SpectralEstimate {
                radius: 0.0,
                iterations: iteration_count,
                converged: true,
            });
        }
        estimate = match previous_ratio {
            Some(prev) => (prev * ratio).sqrt(),
            None => ratio,
        };
        if previous_ratio.is_some()
            && (estimate - previous_estimate).abs() <= POWER_TOLERANCE * estimate
        {
            return Ok(SpectralEstimate {
                radius: estimate,
                iterations: iteration_count,
                converged: true,
            });
        }
        previous_ratio = Some(ratio);
        previous_estimate = estimate;
        v = w.scaled(1.0 / ratio);
    }
    Ok(SpectralEstimate {
        radius: estimate,
        iterations: POWER_MAX_ITERATIONS,
        converged: false,
    })
}
