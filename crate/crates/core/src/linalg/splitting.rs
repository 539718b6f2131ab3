//! Banded three-way splitting `H = T_m - E_m - F_m`.
//!
//! `T_m` keeps the `2m + 1` central diagonals of `H`. `E_m` and `F_m` hold the
//! *negated* entries of `H` strictly below and strictly above the band, so the
//! reconstruction `T_m - E_m - F_m == H` holds entry for entry.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, LuFactorization, Vector};

/// One stored off-band entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandedSplitting {
    n: usize,
    m: usize,
    /// `diagonals[k]` holds offset `k - m` (negative = below the main diagonal).
    /// Diagonal with offset `o` has `n - |o|` entries, indexed by the smaller of
    /// the row and column.
    diagonals: Vec<Vec<f64>>,
    lower: Vec<Entry>,
    upper: Vec<Entry>,
}

impl BandedSplitting {
    /// Splits `h` at bandwidth `m`. Any `m >= n - 1` keeps the whole matrix in
    /// the band.
    pub fn split(h: &DenseMatrix, m: usize) -> Self {
        let n = h.n();
        let m = m.min(n - 1);
        let diagonals = (0..=2 * m)
            .map(|k| {
                let offset = k as isize - m as isize;
                let len = n - offset.unsigned_abs();
                (0..len)
                    .map(|p| {
                        let (i, j) = diag_position(offset, p);
                        h.get(i, j)
                    })
                    .collect()
            })
            .collect();

        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = h.get(i, j);
                if v == 0.0 {
                    continue;
                }
                if i > j + m {
                    lower.push(Entry {
                        row: i,
                        col: j,
                        value: -v,
                    });
                } else if j > i + m {
                    upper.push(Entry {
                        row: i,
                        col: j,
                        value: -v,
                    });
                }
            }
        }
        Self {
            n,
            m,
            diagonals,
            lower,
            upper,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Effective bandwidth after clamping to `n - 1`.
    pub fn bandwidth(&self) -> usize {
        self.m
    }

    /// Entry `(i, j)` of `T_m`.
    pub fn band_entry(&self, i: usize, j: usize) -> f64 {
        let offset = j as isize - i as isize;
        if offset.unsigned_abs() > self.m {
            return 0.0;
        }
        self.diagonals[(offset + self.m as isize) as usize][i.min(j)]
    }

    /// Stored entries of `E_m` (already negated).
    pub fn lower_entries(&self) -> &[Entry] {
        &self.lower
    }

    /// Stored entries of `F_m` (already negated).
    pub fn upper_entries(&self) -> &[Entry] {
        &self.upper
    }

    pub fn outside_band_nnz(&self) -> usize {
        self.lower.len() + self.upper.len()
    }

    pub fn band_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n);
        for (k, diag) in self.diagonals.iter().enumerate() {
            let offset = k as isize - self.m as isize;
            for (p, v) in diag.iter().enumerate() {
                let (i, j) = diag_position(offset, p);
                out.set(i, j, *v);
            }
        }
        out
    }

    pub fn lower_dense(&self) -> DenseMatrix {
        entries_dense(self.n, &self.lower)
    }

    pub fn upper_dense(&self) -> DenseMatrix {
        entries_dense(self.n, &self.upper)
    }

    /// `T_m d`, touching only the band.
    pub fn apply_band(&self, d: &Vector) -> Result<Vector> {
        d.check_len(self.n)?;
        let mut out = vec![0.0; self.n];
        for (k, diag) in self.diagonals.iter().enumerate() {
            let offset = k as isize - self.m as isize;
            for (p, v) in diag.iter().enumerate() {
                let (i, j) = diag_position(offset, p);
                out[i] += v * d[j];
            }
        }
        Ok(Vector::from_raw(out))
    }

    /// `E_m d`
    pub fn apply_lower(&self, d: &Vector) -> Result<Vector> {
        d.check_len(self.n)?;
        Ok(apply_entries(self.n, &self.lower, d))
    }

    /// `F_m d`
    pub fn apply_upper(&self, d: &Vector) -> Result<Vector> {
        d.check_len(self.n)?;
        Ok(apply_entries(self.n, &self.upper, d))
    }

    /// `(E_m + F_m) d`, the right operator of generalized Jacobi.
    pub fn apply_outside_band(&self, d: &Vector) -> Result<Vector> {
        d.check_len(self.n)?;
        let mut out = apply_entries(self.n, &self.lower, d);
        accumulate_entries(&mut out, &self.upper, d, 1.0);
        Ok(out)
    }

    /// `(omega F_m + (1 - omega) T_m) d`, the right operator of GSOR.
    pub fn apply_rhs_operator(&self, omega: f64, d: &Vector) -> Result<Vector> {
        let mut out = self.apply_band(d)?.scaled(1.0 - omega);
        accumulate_entries(&mut out, &self.upper, d, omega);
        Ok(out)
    }

    /// Dense `M(omega) = T_m - omega E_m`.
    pub fn lower_system_dense(&self, omega: f64) -> DenseMatrix {
        let mut out = self.band_dense();
        for e in &self.lower {
            out.add_to(e.row, e.col, -omega * e.value);
        }
        out
    }

    /// Factors `M(omega) = T_m - omega E_m` once for repeated solves.
    /// `omega = 0` gives the generalized Jacobi matrix `T_m`, `omega = 1` the
    /// generalized Gauss-Seidel matrix `T_m - E_m`.
    pub fn factor_lower_system(&self, omega: f64) -> Result<LowerSystemFactorization> {
        let lu = self.lower_system_dense(omega).lu()?;
        Ok(LowerSystemFactorization { omega, lu })
    }
}

/// Factored `M(omega) = T_m - omega E_m`.
#[derive(Debug, Clone)]
pub struct LowerSystemFactorization {
    omega: f64,
    lu: LuFactorization,
}

impl LowerSystemFactorization {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n(&self) -> usize {
        self.lu.n()
    }

    pub fn permutation(&self) -> &[usize] {
        self.lu.permutation()
    }

    /// Returns `y` with `M(omega) y = b`.
    pub fn solve_factored(&self, b: &Vector) -> Result<Vector> {
        self.lu.solve(b)
    }
}

fn diag_position(offset: isize, p: usize) -> (usize, usize) {
    if offset >= 0 {
        (p, p + offset as usize)
    } else {
        (p + offset.unsigned_abs(), p)
    }
}

fn entries_dense(n: usize, entries: &[Entry]) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(n);
    for e in entries {
        out.set(e.row, e.col, e.value);
    }
    out
}

fn apply_entries(n: usize, entries: &[Entry], d: &Vector) -> Vector {
    let mut out = Vector::zeros(n);
    accumulate_entries(&mut out, entries, d, 1.0);
    out
}

fn accumulate_entries(out: &mut Vector, entries: &[Entry], d: &Vector, factor: f64) {
    for e in entries {
        out[e.row] += factor * e.value * d[e.col];
    }
}

/// Convenience wrapper over [`BandedSplitting::split`] that validates `m`
/// strictly, for callers that want an error instead of clamping.
pub fn split_strict(h: &DenseMatrix, m: usize) -> Result<BandedSplitting> {
    if m >= h.n() {
        return Err(Error::InvalidConfig(format!(
            "bandwidth {m} out of range for dimension {}",
            h.n()
        )));
    }
    Ok(BandedSplitting::split(h, m))
}
