//! Benchmark objectives with analytic derivatives.
//!
//! Both objectives share the coupling term `Σᵢ 4 (xᵢ² − x₁)²`, which produces
//! an arrowhead Hessian: dense first row and column, diagonal elsewhere.

mod fd;

pub use fd::{default_fd_step, fd_gradient, fd_hessian};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

/// A twice-differentiable objective `f: ℝⁿ → ℝ`.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn value(&self, x: &Vector) -> f64;

    fn gradient(&self, x: &Vector) -> Vector;

    fn hessian(&self, x: &Vector) -> DenseMatrix;

    fn known_optimum(&self) -> Option<Vector> {
        None
    }

    fn known_min_value(&self) -> Option<f64> {
        None
    }
}

/// Contribution of the shared term `Σᵢ 4 (xᵢ² − x₁)²` to value, gradient and Hessian.
fn coupling_term(x: &Vector, grad: &mut [f64], hess: &mut DenseMatrix) -> f64 {
    let n = x.len();
    let x1 = x[0];
    let mut value = 0.0;
    let mut residual_sum = 0.0;
    for i in 0..n {
        let xi = x[i];
        let r = xi * xi - x1;
        value += 4.0 * r * r;
        residual_sum += r;
        grad[i] += 16.0 * xi * r;
        hess.add_to(i, i, 32.0 * xi * xi + 16.0 * r);
        hess.add_to(0, i, -16.0 * xi);
        hess.add_to(i, 0, -16.0 * xi);
    }
    grad[0] -= 8.0 * residual_sum;
    hess.add_to(0, 0, 8.0 * n as f64);
    value
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidConfig("problem dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// LIARWHD: `Σᵢ 4 (xᵢ² − x₁)² + Σᵢ (xᵢ − 1)²`, minimum 0 at `(1, …, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Liarwhd {
    n: usize,
}

impl Liarwhd {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n })
    }

    fn evaluate(&self, x: &Vector) -> (f64, Vec<f64>, DenseMatrix) {
        let n = self.n;
        let mut grad = vec![0.0; n];
        let mut hess = DenseMatrix::zeros(n);
        let mut value = coupling_term(x, &mut grad, &mut hess);
        for i in 0..n {
            let e = x[i] - 1.0;
            value += e * e;
            grad[i] += 2.0 * e;
            hess.add_to(i, i, 2.0);
        }
        (value, grad, hess)
    }
}

impl Objective for Liarwhd {
    fn name(&self) -> &str {
        "liarwhd"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Vector) -> f64 {
        let x1 = x[0];
        x.iter()
            .map(|&xi| {
                let r = xi * xi - x1;
                4.0 * r * r + (xi - 1.0) * (xi - 1.0)
            })
            .sum()
    }

    fn gradient(&self, x: &Vector) -> Vector {
        Vector::from_raw(self.evaluate(x).1)
    }

    fn hessian(&self, x: &Vector) -> DenseMatrix {
        self.evaluate(x).2
    }

    fn known_optimum(&self) -> Option<Vector> {
        Some(Vector::filled(self.n, 1.0))
    }

    fn known_min_value(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// DIAG-AUP1: `Σᵢ 4 (xᵢ² − x₁)² + Σᵢ (xᵢ² − 1)²`, minimum 0 at `(1, …, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagAup1 {
    n: usize,
}

impl DiagAup1 {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n })
    }

    fn evaluate(&self, x: &Vector) -> (f64, Vec<f64>, DenseMatrix) {
        let n = self.n;
        let mut grad = vec![0.0; n];
        let mut hess = DenseMatrix::zeros(n);
        let mut value = coupling_term(x, &mut grad, &mut hess);
        for i in 0..n {
            let xi = x[i];
            let e = xi * xi - 1.0;
            value += e * e;
            grad[i] += 4.0 * xi * e;
            hess.add_to(i, i, 12.0 * xi * xi - 4.0);
        }
        (value, grad, hess)
    }
}

impl Objective for DiagAup1 {
    fn name(&self) -> &str {
        "diag-aup1"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Vector) -> f64 {
        let x1 = x[0];
        x.iter()
            .map(|&xi| {
                let r = xi * xi - x1;
                let e = xi * xi - 1.0;
                4.0 * r * r + e * e
            })
            .sum()
    }

    fn gradient(&self, x: &Vector) -> Vector {
        Vector::from_raw(self.evaluate(x).1)
    }

    fn hessian(&self, x: &Vector) -> DenseMatrix {
        self.evaluate(x).2
    }

    fn known_optimum(&self) -> Option<Vector> {
        Some(Vector::filled(self.n, 1.0))
    }

    fn known_min_value(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `½ xᵀ A x − bᵀ x` for symmetric `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    a: DenseMatrix,
    b: Vector,
}

impl Quadratic {
    pub fn new(a: DenseMatrix, b: Vector) -> Result<Self> {
        b.check_len(a.n())?;
        if !a.is_symmetric() {
            return Err(Error::InvalidConfig("quadratic form must be symmetric".into()));
        }
        Ok(Self { a, b })
    }
}

impl Objective for Quadratic {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn dim(&self) -> usize {
        self.a.n()
    }

    fn value(&self, x: &Vector) -> f64 {
        let ax = self.a.mul_vec(x).expect("dimension checked by caller");
        0.5 * x.dot(&ax) - self.b.dot(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.a.mul_vec(x).expect("dimension checked by caller").sub(&self.b)
    }

    fn hessian(&self, _x: &Vector) -> DenseMatrix {
        self.a.clone()
    }

    fn known_optimum(&self) -> Option<Vector> {
        self.a.solve(&self.b).ok()
    }

    fn known_min_value(&self) -> Option<f64> {
        self.known_optimum().map(|x| self.value(&x))
    }
}

/// Names accepted by [`problem_by_name`].
pub const PROBLEM_NAMES: &[&str] = &["liarwhd", "diag-aup1"];

/// Looks up a registered benchmark problem.
pub fn problem_by_name(name: &str, n: usize) -> Result<Box<dyn Objective>> {
    match name.to_ascii_lowercase().as_str() {
        "liarwhd" => Ok(Box::new(Liarwhd::new(n)?)),
        "diag-aup1" | "diag_aup1" | "diagaup1" => Ok(Box::new(DiagAup1::new(n)?)),
        other => Err(Error::InvalidConfig(format!(
            "unknown problem {other:?}; expected one of {PROBLEM_NAMES:?}"
        ))),
    }
}
