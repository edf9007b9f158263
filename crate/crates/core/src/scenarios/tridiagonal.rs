//! Symmetric tridiagonal eigenpairs by Sturm-sequence bisection and
//! inverse iteration.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal shape: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::Eigensolver(format!(
                "index {k} out of range for size {}",
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Unit eigenvector for a (simple) eigenvalue by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let norm_t = self
            .diag
            .iter()
            .map(|d| d.abs())
            .chain(self.off.iter().map(|o| 2.0 * o.abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let lu = ShiftedLu::factor(self, lambda, norm_t * f64::EPSILON);
        // deterministic start with no special symmetry
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::Eigensolver("inverse iteration diverged".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(x)
    }

    /// `‖T x − λ x‖₂`.
    pub fn residual(&self, lambda: f64, x: &[f64]) -> f64 {
        self.apply(x)
            .iter()
            .zip(x)
            .map(|(tx, xi)| (tx - lambda * xi).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// LU with partial pivoting of `T − shift·1`, LAPACK `gttrf` layout.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, shift: f64, pivot_floor: f64) -> Self {
        let n = t.len();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = pivot_floor;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = pivot_floor;
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
