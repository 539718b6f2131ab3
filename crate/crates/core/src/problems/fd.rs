//! Central finite-difference oracles for checking analytic derivatives.

use super::Objective;
use crate::linalg::{DenseMatrix, Vector};

/// `1e-6 · (1 + ‖x‖∞)`
pub fn default_fd_step(x: &Vector) -> f64 {
    1e-6 * (1.0 + x.norm_inf())
}

/// Central differences of `f`: `(f(x + h eᵢ) − f(x − h eᵢ)) / 2h`.
pub fn fd_gradient(problem: &dyn Objective, x: &Vector, h: Option<f64>) -> Vector {
    let h = h.unwrap_or_else(|| default_fd_step(x));
    let mut probe = x.clone();
    let g = (0..x.len())
        .map(|i| {
            let xi = x[i];
            probe[i] = xi + h;
            let fp = problem.value(&probe);
            probe[i] = xi - h;
            let fm = problem.value(&probe);
            probe[i] = xi;
            (fp - fm) / (2.0 * h)
        })
        .collect();
    Vector::from_raw(g)
}

/// Central differences of the analytic gradient, symmetrized as `(A + Aᵀ) / 2`.
pub fn fd_hessian(problem: &dyn Objective, x: &Vector, h: Option<f64>) -> DenseMatrix {
    let h = h.unwrap_or_else(|| default_fd_step(x));
    let n = x.len();
    let mut raw = DenseMatrix::zeros(n);
    let mut probe = x.clone();
    for j in 0..n {
        let xj = x[j];
        probe[j] = xj + h;
        let gp = problem.gradient(&probe);
        probe[j] = xj - h;
        let gm = problem.gradient(&probe);
        probe[j] = xj;
        for i in 0..n {
            raw.set(i, j, (gp[i] - gm[i]) / (2.0 * h));
        }
    }
    let mut out = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, 0.5 * (raw.get(i, j) + raw.get(j, i)));
        }
    }
    out
}
