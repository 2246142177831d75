//! Hermite-Galerkin discretization of `−u″ + γu = f` on the real line.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::basis::{ComplexCoeffs, ScaledBasis, SpectralCoeffs};
use crate::error::{Error, Result};
use crate::fourier::TestFunction;
use crate::linalg::TridiagonalLdl;
use crate::operators::residual_norm;
use crate::quadrature::{analysis, synthesis, CollocationGrid};

/// Right-hand side `f` as a plain function of `x`.
pub type Rhs = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `−u″ + γu = f` with optional known solution.
#[derive(Clone)]
pub struct ModelProblem {
    gamma: f64,
    rhs: Rhs,
    exact: Option<TestFunction>,
}

impl fmt::Debug for ModelProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelProblem")
            .field("gamma", &self.gamma)
            .field("exact", &self.exact.as_ref().map(|u| u.id()))
            .finish_non_exhaustive()
    }
}

impl ModelProblem {
    pub fn new(gamma: f64, rhs: Rhs) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            gamma,
            rhs,
            exact: None,
        })
    }

    /// Manufactured problem whose solution is the real catalog function `exact`.
    pub fn manufactured(exact: TestFunction, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !exact.is_real() || exact.derivative_order() != 0 {
            return Err(Error::InvalidArgument(
                "manufactured solution must be a real catalog function",
            ));
        }
        let second = exact.derivative()?.derivative()?;
        let u = exact.clone();
        let rhs: Rhs = Arc::new(move |x| -second.eval(x) + gamma * u.eval(x));
        Ok(Self {
            gamma,
            rhs,
            exact: Some(exact),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rhs(&self, x: f64) -> f64 {
        (self.rhs)(x)
    }

    pub fn exact(&self) -> Option<&TestFunction> {
        self.exact.as_ref()
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument("gamma must be positive and finite"));
    }
    Ok(())
}

/// Stiffness plus mass matrix in the scaled basis. Couplings only occur at
/// `|m − n| ∈ {0, 2}`, so even and odd indices decouple.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinSystem {
    basis: ScaledBasis,
    gamma: f64,
    diag: Vec<f64>,
    offdiag2: Vec<f64>,
}

impl GalerkinSystem {
    /// `diag_n = β²(2n+1)/2 + γ`, `offdiag2_n = −β²√((n+1)(n+2))/2`.
    pub fn assemble(basis: &ScaledBasis, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let b2 = basis.beta() * basis.beta();
        let n = basis.n_max();
        let diag = (0..=n).map(|j| b2 * (2 * j + 1) as f64 / 2.0 + gamma).collect();
        let offdiag2 = (0..n.saturating_sub(1))
            .map(|j| -b2 * (((j + 1) * (j + 2)) as f64).sqrt() / 2.0)
            .collect();
        Ok(Self {
            basis: *basis,
            gamma,
            diag,
            offdiag2,
        })
    }

    pub fn basis(&self) -> &ScaledBasis {
        &self.basis
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag2(&self) -> &[f64] {
        &self.offdiag2
    }

    pub fn entry(&self, m: usize, n: usize) -> f64 {
        if m == n {
            self.diag[m]
        } else if m.abs_diff(n) == 2 {
            self.offdiag2[m.min(n)]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let len = self.diag.len();
        (0..len).map(|m| (0..len).map(|n| self.entry(m, n)).collect()).collect()
    }

    /// `A c`.
    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        let len = self.diag.len();
        let mut out: Vec<f64> = self.diag.iter().zip(c).map(|(d, c)| d * c).collect();
        for j in 0..len.saturating_sub(2) {
            out[j] += self.offdiag2[j] * c[j + 2];
            out[j + 2] += self.offdiag2[j] * c[j];
        }
        out
    }

    /// Solves `A c = b` as two tridiagonal SPD systems (even and odd indices).
    pub fn solve_coefficients(&self, b: &[f64]) -> Result<Vec<f64>> {
        let len = self.diag.len();
        if b.len() != len {
            return Err(Error::InvalidArgument("right-hand side length must equal n_max + 1"));
        }
        let mut c = vec![0.0; len];
        for parity in 0..2 {
            let idx: Vec<usize> = (parity..len).step_by(2).collect();
            if idx.is_empty() {
                continue;
            }
            let d: Vec<f64> = idx.iter().map(|&i| self.diag[i]).collect();
            let off: Vec<f64> = idx[..idx.len() - 1].iter().map(|&i| self.offdiag2[i]).collect();
            let ldl = TridiagonalLdl::factor(&d, &off)?;
            let mut x: Vec<f64> = idx.iter().map(|&i| b[i]).collect();
            ldl.solve_in_place(&mut x);
            for (i, v) in idx.iter().zip(x) {
                c[*i] = v;
            }
        }
        let r = self.apply(&c);
        let scale = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let res = r.iter().zip(b).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if res > 1e-10 * scale {
            return Err(Error::Internal("Galerkin residual check failed"));
        }
        Ok(c)
    }
}

/// Galerkin solution `u_N` with right-hand side `Î_N^β f`.
pub fn solve(problem: &ModelProblem, basis: &ScaledBasis, grid: &CollocationGrid) -> Result<SpectralCoeffs> {
    if grid.n_max() != basis.n_max() {
        return Err(Error::InvalidArgument("grid and basis sizes differ"));
    }
    let beta = basis.beta();
    let values: Vec<f64> = grid.scaled_nodes(beta).iter().map(|x| problem.rhs(*x)).collect();
    let b = analysis(grid, &values, beta)?;
    let system = GalerkinSystem::assemble(basis, problem.gamma)?;
    let c = system.solve_coefficients(b.values())?;
    SpectralCoeffs::new(*basis, c)
}

/// L² and H¹ errors of a discrete solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionError {
    pub l2: f64,
    pub h1: f64,
}

/// `‖u − u_N‖` and `(‖u − u_N‖² + ‖∂u − ∂u_N‖²)^{1/2}` by adaptive quadrature.
pub fn solution_error(coeffs: &SpectralCoeffs, exact: &TestFunction) -> Result<SolutionError> {
    let tol = 1e-12;
    let l2 = residual_norm(exact, &ComplexCoeffs::from(coeffs.clone()), tol)?;
    let du = exact.derivative()?;
    let d = residual_norm(&du, &ComplexCoeffs::from(coeffs.derivative()), tol)?;
    Ok(SolutionError {
        l2,
        h1: (l2 * l2 + d * d).sqrt(),
    })
}

/// Discrete L² error at the scaled nodes, `(Σ_j ŵ_j/β (u − u_N)²(x_j/β))^{1/2}`.
pub fn nodal_error(coeffs: &SpectralCoeffs, exact: &TestFunction, grid: &CollocationGrid) -> Result<f64> {
    let beta = coeffs.basis().beta();
    let approx = synthesis(grid, coeffs)?;
    let sum: f64 = grid
        .scaled_nodes(beta)
        .iter()
        .zip(grid.weights())
        .zip(&approx)
        .map(|((x, w), a)| {
            let d = exact.eval(*x) - a;
            w / beta * d * d
        })
        .sum();
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PI_POW_M_QUARTER;
    use crate::quadrature::compute_grid;

    #[test]
    fn assembly_examples() {
        let s = GalerkinSystem::assemble(&ScaledBasis::new(0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(s.diag(), &[1.5]);
        assert!(s.offdiag2().is_empty());
        let s = GalerkinSystem::assemble(&ScaledBasis::new(4, 1.0).unwrap(), 1.0).unwrap();
        assert!((s.offdiag2()[0] + 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(GalerkinSystem::assemble(&ScaledBasis::new(4, 1.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn recovers_h0() {
        let rhs: Rhs = Arc::new(|x: f64| (2.0 - x * x) * PI_POW_M_QUARTER * (-x * x / 2.0).exp());
        let p = ModelProblem::new(1.0, rhs).unwrap();
        for n in [2usize, 5, 12] {
            let b = ScaledBasis::new(n, 1.0).unwrap();
            let c = solve(&p, &b, &compute_grid(n).unwrap()).unwrap();
            for (j, v) in c.values().iter().enumerate() {
                let e = if j == 0 { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-12, "N={n} j={j}: {v}");
            }
        }
    }

    #[test]
    fn manufactured_gaussian_at_sqrt_two() {
        let u = TestFunction::plain_gaussian(1.0 / 2f64.sqrt()).unwrap();
        let p = ModelProblem::manufactured(u.clone(), 1.0).unwrap();
        let beta = 2f64.sqrt();
        let b = ScaledBasis::new(6, beta).unwrap();
        let c = solve(&p, &b, &compute_grid(6).unwrap()).unwrap();
        // e^{-x²} = π^{1/4} 2^{-1/4} φ_0 at β = √2
        let c0 = core::f64::consts::PI.powf(0.25) * 2f64.powf(-0.25);
        assert!((c.values()[0] - c0).abs() < 1e-10);
        assert!(c.values()[1..].iter().all(|v| v.abs() < 1e-10));
        let e = solution_error(&c, &u).unwrap();
        assert!(e.l2 < 1e-10 && e.h1 >= e.l2);
    }

    #[test]
    fn nodal_error_vanishes_for_exact_solution() {
        let u = TestFunction::plain_gaussian(1.0).unwrap();
        let p = ModelProblem::manufactured(u.clone(), 2.0).unwrap();
        let b = ScaledBasis::new(8, 1.0).unwrap();
        let g = compute_grid(8).unwrap();
        let c = solve(&p, &b, &g).unwrap();
        assert!(nodal_error(&c, &u, &g).unwrap() < 1e-13);
    }
}
