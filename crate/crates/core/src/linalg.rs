//! Small dense linear algebra: fixed-size matrix products with renormalisation,
//! singular values, and Perron roots of non-negative matrices.

#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest cocycle dimension supported.
pub const MAX_DIM: usize = 4;

/// A `dim × dim` real matrix stored row-major in a fixed buffer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallMatrix {
    dim: usize,
    a: [f64; MAX_DIM * MAX_DIM],
}

impl SmallMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut a = [0.0; MAX_DIM * MAX_DIM];
        for i in 0..dim {
            a[i * dim + i] = 1.0;
        }
        Self { dim, a }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidPotential(alloc::format!(
                "matrix dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        let mut a = [0.0; MAX_DIM * MAX_DIM];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidPotential("matrix is not square".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidPotential("non-finite matrix entry".into()));
                }
                a[i * dim + j] = v;
            }
        }
        Ok(Self { dim, a })
    }

    pub fn diag(entries: &[f64]) -> Self {
        let dim = entries.len();
        let mut m = Self::identity(dim);
        for (i, &d) in entries.iter().enumerate() {
            m.a[i * dim + i] = d;
        }
        m
    }

    /// `r · R(α)`, a scaled planar rotation.
    pub fn scaled_rotation(r: f64, alpha: f64) -> Self {
        let (s, c) = (alpha.sin(), alpha.cos());
        let mut m = Self::identity(2);
        m.a[0] = r * c;
        m.a[1] = -r * s;
        m.a[2] = r * s;
        m.a[3] = r * c;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &SmallMatrix) -> SmallMatrix {
        let d = self.dim;
        let mut out = [0.0; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for k in 0..d {
                let x = self.a[i * d + k];
                if x == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += x * rhs.a[k * d + j];
                }
            }
        }
        SmallMatrix { dim: d, a: out }
    }

    pub fn max_abs(&self) -> f64 {
        self.a[..self.dim * self.dim]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    fn scale(&mut self, c: f64) {
        for v in &mut self.a[..self.dim * self.dim] {
            *v *= c;
        }
    }

    pub fn det(&self) -> f64 {
        let d = self.dim;
        let mut m = self.a;
        let mut det = 1.0;
        for col in 0..d {
            let piv = (col..d)
                .max_by(|&r, &s| m[r * d + col].abs().total_cmp(&m[s * d + col].abs()))
                .unwrap();
            if m[piv * d + col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..d {
                    m.swap(piv * d + j, col * d + j);
                }
                det = -det;
            }
            let p = m[col * d + col];
            det *= p;
            for r in col + 1..d {
                let f = m[r * d + col] / p;
                for j in col..d {
                    m[r * d + j] -= f * m[col * d + j];
                }
            }
        }
        det
    }

    /// Eigenvalues of the symmetric matrix `AᵀA`, descending (cyclic Jacobi).
    fn gram_eigenvalues(&self) -> [f64; MAX_DIM] {
        let d = self.dim;
        let mut g = [0.0; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.a[k * d + i] * self.a[k * d + j];
                }
                g[i * d + j] = s;
            }
        }
        for _sweep in 0..64 {
            let mut off = 0.0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        off += g[i * d + j] * g[i * d + j];
                    }
                }
            }
            let diag: f64 = (0..d).map(|i| g[i * d + i] * g[i * d + i]).sum();
            if off <= 1e-30 * diag {
                break;
            }
            for p in 0..d {
                for q in p + 1..d {
                    let apq = g[p * d + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (g[q * d + q] - g[p * d + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..d {
                        let gkp = g[k * d + p];
                        let gkq = g[k * d + q];
                        g[k * d + p] = c * gkp - s * gkq;
                        g[k * d + q] = s * gkp + c * gkq;
                    }
                    for k in 0..d {
                        let gpk = g[p * d + k];
                        let gqk = g[q * d + k];
                        g[p * d + k] = c * gpk - s * gqk;
                        g[q * d + k] = s * gpk + c * gqk;
                    }
                }
            }
        }
        let mut ev = [0.0; MAX_DIM];
        for i in 0..d {
            ev[i] = g[i * d + i].max(0.0);
        }
        ev[..d].sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `(log σ_max, log σ_min)` of the matrix.
    ///
    /// σ_min is recovered from `|det| = Π σ_i` rather than from the smallest
    /// Gram eigenvalue, which loses all relative precision once the product
    /// is badly conditioned.
    pub fn log_singular_extremes(&self) -> (f64, f64) {
        self.log_singular_extremes_given_det(self.det().abs().ln())
    }

    fn log_singular_extremes_given_det(&self, log_det: f64) -> (f64, f64) {
        let d = self.dim;
        if d == 1 {
            return (log_det, log_det);
        }
        let ev = self.gram_eigenvalues();
        let log_smax = 0.5 * ev[0].ln();
        let log_smin = if d == 2 {
            log_det - log_smax
        } else {
            let middle: f64 = ev[1..d - 1].iter().map(|e| 0.5 * e.ln()).sum();
            log_det - log_smax - middle
        };
        (log_smax, log_smin)
    }
}

/// A matrix product `A_{n-1} ⋯ A_0` kept as `exp(log_scale) · M` with `M` normalised.
///
/// `log |det|` is accumulated factor by factor: the normalised `M` of a long
/// product is numerically rank one, so its own determinant is useless.
#[derive(Debug, Clone, Copy)]
pub struct LogProduct {
    m: SmallMatrix,
    log_scale: f64,
    log_det: f64,
}

impl LogProduct {
    pub fn identity(dim: usize) -> Self {
        Self {
            m: SmallMatrix::identity(dim),
            log_scale: 0.0,
            log_det: 0.0,
        }
    }

    /// Multiply on the left: `self ← A · self`.
    pub fn push_left(&mut self, a: &SmallMatrix) {
        self.m = a.mul(&self.m);
        self.log_det += a.det().abs().ln();
        let big = self.m.max_abs();
        if !(1e-50..=1e50).contains(&big) && big > 0.0 {
            self.m.scale(1.0 / big);
            self.log_scale += big.ln();
        }
    }

    pub fn log_singular_extremes(&self) -> (f64, f64) {
        let d = self.m.dim() as f64;
        let (a, b) = self
            .m
            .log_singular_extremes_given_det(self.log_det - d * self.log_scale);
        (a + self.log_scale, b + self.log_scale)
    }

    pub fn log_abs_det(&self) -> f64 {
        self.log_det
    }
}

/// Perron root of a non-negative square matrix given row-major, plus its
/// normalised right and left eigenvectors.
///
/// Power iteration on `(I + A)`, which is primitive whenever `A` is
/// irreducible and has the same Perron vector.
pub fn perron(a: &[f64], dim: usize, tol: f64) -> Result<PerronData> {
    if dim == 0 || a.len() != dim * dim {
        return Err(Error::InvalidArgument("perron: bad matrix shape".into()));
    }
    let right = power_iterate(dim, tol, |v, out| {
        for i in 0..dim {
            let mut s = v[i];
            for j in 0..dim {
                s += a[i * dim + j] * v[j];
            }
            out[i] = s;
        }
    })?;
    let left = power_iterate(dim, tol, |v, out| {
        for j in 0..dim {
            let mut s = v[j];
            for i in 0..dim {
                s += a[i * dim + j] * v[i];
            }
            out[j] = s;
        }
    })?;
    // Rayleigh-style estimate of the root from the converged right vector.
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..dim {
        let mut s = 0.0;
        for j in 0..dim {
            s += a[i * dim + j] * right[j];
        }
        num += left[i] * s;
        den += left[i] * right[i];
    }
    Ok(PerronData {
        root: num / den,
        right,
        left,
    })
}

#[derive(Debug, Clone)]
pub struct PerronData {
    pub root: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

fn power_iterate(
    dim: usize,
    tol: f64,
    apply: impl Fn(&[f64], &mut [f64]),
) -> Result<Vec<f64>> {
    let mut v = vec![1.0 / dim as f64; dim];
    let mut w = vec![0.0; dim];
    for _ in 0..200_000 {
        apply(&v, &mut w);
        let norm: f64 = w.iter().sum();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument("perron: degenerate iteration".into()));
        }
        let mut diff = 0.0f64;
        for i in 0..dim {
            let x = w[i] / norm;
            diff = diff.max((x - v[i]).abs());
            v[i] = x;
        }
        if diff < tol {
            return Ok(v);
        }
    }
    Ok(v)
}

/// True when the directed graph with edges `i → j` for `adj[i·dim + j]` is strongly connected.
pub fn strongly_connected(adj: &[bool], dim: usize) -> bool {
    let reach = |forward: bool| {
        let mut seen = vec![false; dim];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..dim {
                let e = if forward { adj[i * dim + j] } else { adj[j * dim + i] };
                if e && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    dim > 0 && reach(true) && reach(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_product_singular_values() {
        let a = SmallMatrix::diag(&[2.0, 0.5]);
        let mut p = LogProduct::identity(2);
        for _ in 0..4 {
            p.push_left(&a);
        }
        let (hi, lo) = p.log_singular_extremes();
        assert!((hi - 16f64.ln()).abs() < 1e-12);
        assert!((lo + 16f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn long_products_renormalise() {
        let a = SmallMatrix::diag(&[3.0, 0.25]);
        let mut p = LogProduct::identity(2);
        for _ in 0..2000 {
            p.push_left(&a);
        }
        let (hi, lo) = p.log_singular_extremes();
        assert!((hi / 2000.0 - 3f64.ln()).abs() < 1e-9);
        assert!((lo / 2000.0 - 0.25f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn three_dim_singular_values_of_diag() {
        let a = SmallMatrix::diag(&[5.0, -0.5, 2.0]);
        let (hi, lo) = a.log_singular_extremes();
        assert!((hi - 5f64.ln()).abs() < 1e-12);
        assert!((lo - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_conformal() {
        let a = SmallMatrix::scaled_rotation(1.5, 0.7);
        let (hi, lo) = a.log_singular_extremes();
        assert!((hi - lo).abs() < 1e-12);
        assert!((hi - 1.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn golden_mean_perron_root() {
        let p = perron(&[1.0, 1.0, 1.0, 0.0], 2, 1e-14).unwrap();
        assert!((p.root - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn connectivity() {
        assert!(strongly_connected(&[true, true, true, false], 2));
        assert!(!strongly_connected(&[true, false, false, true], 2));
    }
}
