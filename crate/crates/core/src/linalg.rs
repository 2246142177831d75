//! Symmetric tridiagonal kernels: QL eigenvalues and an LDLᵀ solve.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `off` (`off.len() == diag.len() - 1`), in ascending order.
///
/// Implicit QL with Wilkinson shifts; eigenvectors are not accumulated.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::InvalidArgument("off-diagonal must have n - 1 entries"));
    }
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Internal("tridiagonal QL did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// LDLᵀ factorization of a symmetric positive definite tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagonalLdl {
    // pivots d_i and multipliers l_i (sub-diagonal of L)
    pivots: Vec<f64>,
    multipliers: Vec<f64>,
}

impl TridiagonalLdl {
    /// Factors the matrix; fails on a non-positive pivot.
    pub fn factor(diag: &[f64], off: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n > 0 && off.len() + 1 != n {
            return Err(Error::InvalidArgument("off-diagonal must have n - 1 entries"));
        }
        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            let mut p = diag[i];
            if i > 0 {
                let l = off[i - 1] / pivots[i - 1];
                p -= l * off[i - 1];
                multipliers.push(l);
            }
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::Internal("non-positive pivot in tridiagonal Cholesky"));
            }
            pivots.push(p);
        }
        Ok(Self { pivots, multipliers })
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.pivots.len();
        for i in 1..n {
            b[i] -= self.multipliers[i - 1] * b[i - 1];
        }
        for i in 0..n {
            b[i] /= self.pivots[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            b[i] -= self.multipliers[i] * b[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn eigenvalues_of_discrete_laplacian() {
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let ev = tridiagonal_eigenvalues(&diag, &off).unwrap();
        for (j, v) in ev.iter().enumerate() {
            let theta = (j + 1) as f64 * core::f64::consts::PI / (n + 1) as f64;
            let exact = 2.0 - 2.0 * theta.cos();
            assert!((v - exact).abs() < 1e-13, "{j}: {v} vs {exact}");
        }
    }

    #[test]
    fn ldl_solves_spd_system() {
        let diag = [4.0, 5.0, 6.0, 7.0];
        let off = [1.0, -2.0, 0.5];
        let x = [1.0, -1.0, 2.0, 0.25];
        let mut b = [0.0; 4];
        for i in 0..4 {
            b[i] = diag[i] * x[i];
            if i > 0 {
                b[i] += off[i - 1] * x[i - 1];
            }
            if i < 3 {
                b[i] += off[i] * x[i + 1];
            }
        }
        let f = TridiagonalLdl::factor(&diag, &off).unwrap();
        f.solve_in_place(&mut b);
        for i in 0..4 {
            assert!((b[i] - x[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn ldl_rejects_indefinite() {
        assert!(TridiagonalLdl::factor(&[1.0, 1.0], &[2.0]).is_err());
    }
}
