//! Symmetric tridiagonal eigenproblems.
//!
//! The lowest eigenvalues are located by Sturm-sequence bisection and their
//! eigenvectors by inverse iteration with a pivoted tridiagonal solve. A dense
//! path through `nalgebra` is kept for cross-checking on small matrices.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// A real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Lowest eigenvalues with their unit eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖T v − λ v‖ / ‖T‖` for each pair.
    pub residuals: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Usage(format!(
                "tridiagonal shape mismatch: {} diagonal and {} off-diagonal entries",
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

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let guard = f64::EPSILON * self.norm_bound();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let q_safe = if q.abs() < guard { guard.copysign(q) } else { q };
            q = (self.diag[i] - x) - self.off[i - 1] * self.off[i - 1] / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` smallest eigenvalues in increasing order, by bisection.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(Error::Usage(format!(
                "asked for {k} eigenvalues of a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let (lo0, hi0) = self.gershgorin();
        let floor = 2.0 * f64::EPSILON * self.norm_bound();
        let mut values = Vec::with_capacity(k);
        let mut lower = lo0;
        for i in 0..k {
            let (mut lo, mut hi) = (lower, hi0);
            for _ in 0..200 {
                if hi - lo <= floor.max(2.0 * f64::EPSILON * lo.abs().max(hi.abs())) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.sturm_count(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let value = 0.5 * (lo + hi);
            values.push(value);
            lower = lo;
        }
        Ok(values)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Lowest `k` eigenpairs. Eigenvalues come from bisection, eigenvectors
    /// from inverse iteration; a pair whose residual exceeds `1e-8‖T‖` is an error.
    pub fn lowest_eigenpairs(&self, k: usize) -> Result<EigenPairs> {
        let values = self.lowest_eigenvalues(k)?;
        let norm = self.norm_bound();
        let n = self.len();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        for (idx, &lambda) in values.iter().enumerate() {
            let mut v: Vec<f64> = (0..n)
                .map(|j| 1.0 + 0.5 * ((j * (idx + 3)) as f64 * 0.618).sin())
                .collect();
            let mut residual = f64::INFINITY;
            for _ in 0..6 {
                v = solve_shifted(self, lambda, &v);
                for prev in &vectors {
                    project_out(&mut v, prev);
                }
                normalize(&mut v);
                let tv = self.mul_vec(&v);
                residual = tv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - lambda * b).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    / norm;
                if residual < 1e-12 {
                    break;
                }
            }
            vectors.push(v);
            residuals.push(residual);
        }
        if residuals.iter().any(|r| r.is_nan() || *r > 1e-8) {
            return Err(Error::NonConvergence {
                message: "inverse iteration did not converge".into(),
                residuals,
            });
        }
        Ok(EigenPairs {
            values,
            vectors,
            residuals,
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.off[i];
                m[(i + 1, i)] = self.off[i];
            }
        }
        m
    }

    /// The `k` smallest eigenvalues from a full dense decomposition.
    pub fn lowest_eigenvalues_dense(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(Error::Usage(format!(
                "asked for {k} eigenvalues of a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let eig = SymmetricEigen::new(self.to_dense());
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values.truncate(k);
        Ok(values)
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn project_out(v: &mut [f64], unit: &[f64]) {
    let dot: f64 = v.iter().zip(unit).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(unit).for_each(|(a, b)| *a -= dot * b);
}

/// Solves `(T − σI) x = rhs` by Gaussian elimination with partial pivoting.
/// Exactly singular pivots are nudged to `ε‖T‖`, which is what inverse
/// iteration wants.
fn solve_shifted(t: &SymTridiagonal, sigma: f64, rhs: &[f64]) -> Vec<f64> {
    let n = t.len();
    let tiny = f64::EPSILON * t.norm_bound();
    if n == 1 {
        let d = t.diag[0] - sigma;
        return vec![rhs[0] / if d.abs() < tiny { tiny } else { d }];
    }
    let mut d: Vec<f64> = t.diag.iter().map(|x| x - sigma).collect();
    let mut du = t.off.clone();
    let mut dl = t.off.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            swapped[i] = true;
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
        }
    }

    let mut x = rhs.to_vec();
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = temp - dl[i] * x[i];
        } else {
            x[i + 1] -= dl[i] * x[i];
        }
    }
    let pivot = |v: f64| if v.abs() < tiny { tiny.copysign(v) } else { v };
    x[n - 1] /= pivot(d[n - 1]);
    x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / pivot(d[n - 2]);
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / pivot(d[i]);
    }
    x
}
