//! Collocation grids at the roots of `Ĥ_{N+1}` and the discrete transforms
//! between nodal values and coefficients.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::basis::{hermite_functions_into, hermite_pair_unnormalized, ScaledBasis, SpectralCoeffs};
use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalues;

/// Largest grid size accepted by [`compute_grid`].
pub const MAX_GRID_DEGREE: usize = 10_000;

/// Roots `x_0 < … < x_N` of `Ĥ_{N+1}` with modified weights
/// `ŵ_j = 1 / Σ_{n≤N} Ĥ_n(x_j)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    n_max: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CollocationGrid {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes mapped to the physical variable, `x_j / β`.
    pub fn scaled_nodes(&self, beta: f64) -> Vec<f64> {
        self.nodes.iter().map(|x| x / beta).collect()
    }

    /// `Σ_j ŵ_j f(x_j)`: exact for `f = Ĥ_a Ĥ_b` whenever `a + b ≤ 2N + 1`.
    pub fn sum<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    fn check_basis(&self, basis: &ScaledBasis) -> Result<()> {
        if basis.n_max() != self.n_max {
            return Err(Error::InvalidArgument("grid and basis sizes differ"));
        }
        Ok(())
    }
}

/// Builds the grid for `N = n_max`.
///
/// Nodes are the eigenvalues of the Jacobi matrix with off-diagonal
/// `√((j+1)/2)`, polished by one Newton step on `Ĥ_{N+1}` and symmetrized.
pub fn compute_grid(n_max: usize) -> Result<CollocationGrid> {
    if n_max > MAX_GRID_DEGREE {
        return Err(Error::InvalidArgument("grid degree exceeds MAX_GRID_DEGREE"));
    }
    let size = n_max + 1;
    let diag = vec![0.0; size];
    let off: Vec<f64> = (0..n_max).map(|j| ((j + 1) as f64 / 2.0).sqrt()).collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off)?;

    // Newton: Ĥ'_{N+1}(x_j) = √(2(N+1)) Ĥ_N(x_j) at a root.
    let np1 = size;
    let slope = (2.0 * np1 as f64).sqrt();
    for x in nodes.iter_mut() {
        let (h_n, h_np1) = hermite_pair_unnormalized(*x, np1);
        if h_n != 0.0 {
            *x -= h_np1 / (slope * h_n);
        }
    }
    for j in 0..size / 2 {
        let m = 0.5 * (nodes[size - 1 - j] - nodes[j]);
        nodes[j] = -m;
        nodes[size - 1 - j] = m;
    }
    if size % 2 == 1 {
        nodes[size / 2] = 0.0;
    }
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Internal("collocation nodes are not strictly increasing"));
    }

    let mut buf = vec![0.0; size];
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            hermite_functions_into(x, &mut buf);
            1.0 / buf.iter().map(|h| h * h).sum::<f64>()
        })
        .collect();
    for j in 0..size / 2 {
        let w = 0.5 * (weights[j] + weights[size - 1 - j]);
        weights[j] = w;
        weights[size - 1 - j] = w;
    }
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::Internal("non-positive collocation weight"));
    }
    Ok(CollocationGrid { n_max, nodes, weights })
}

/// Coefficients of the interpolant through `values` sampled at `x_j / β`:
/// `c_n = Σ_j ŵ_j v_j Ĥ_n(x_j) / √β`.
pub fn analysis(grid: &CollocationGrid, values: &[f64], beta: f64) -> Result<SpectralCoeffs> {
    if values.len() != grid.len() {
        return Err(Error::InvalidArgument("value count must equal grid size"));
    }
    let basis = ScaledBasis::new(grid.n_max, beta)?;
    let mut coeffs = vec![0.0; grid.len()];
    let mut buf = vec![0.0; grid.len()];
    for ((x, w), v) in grid.nodes.iter().zip(&grid.weights).zip(values) {
        hermite_functions_into(*x, &mut buf);
        let wv = w * v;
        for (c, h) in coeffs.iter_mut().zip(&buf) {
            *c += wv * h;
        }
    }
    let s = 1.0 / beta.sqrt();
    coeffs.iter_mut().for_each(|c| *c *= s);
    SpectralCoeffs::new(basis, coeffs)
}

/// Values of `Σ c_n φ_n` at the scaled nodes `x_j / β`.
pub fn synthesis(grid: &CollocationGrid, coeffs: &SpectralCoeffs) -> Result<Vec<f64>> {
    grid.check_basis(coeffs.basis())?;
    let s = coeffs.basis().beta().sqrt();
    let mut buf = vec![0.0; grid.len()];
    Ok(grid
        .nodes
        .iter()
        .map(|x| {
            hermite_functions_into(*x, &mut buf);
            s * buf.iter().zip(coeffs.values()).map(|(h, c)| h * c).sum::<f64>()
        })
        .collect())
}
