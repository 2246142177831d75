//! Hermite functions, the scaled basis `φ_n(x) = √β Ĥ_n(βx)` and the
//! coefficient-space operators that act on it.
//!
//! Hermite functions are always evaluated through the normalized three-term
//! recurrence, never as `H_n(x) e^{-x²/2}`. The recurrence is run on a
//! rescaled state with the Gaussian factor applied at the end, so values
//! far outside `[-38, 38]` (where `e^{-x²/2}` alone underflows) stay exact.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest index accepted by any basis constructor.
pub const MAX_DEGREE: usize = 100_000;

/// π^{-1/4}
pub const PI_POW_M_QUARTER: f64 = 0.751_125_544_464_942_5;

const RESCALE: f64 = 1e150;
const LN_RESCALE: f64 = 345.387_763_949_106_84;

/// The approximation space spanned by `φ_0 … φ_N` with scaling factor β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBasis {
    n_max: usize,
    beta: f64,
}

impl ScaledBasis {
    pub fn new(n_max: usize, beta: f64) -> Result<Self> {
        if n_max > MAX_DEGREE {
            return Err(Error::InvalidArgument("n_max exceeds MAX_DEGREE"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument("beta must be positive and finite"));
        }
        Ok(Self { n_max, beta })
    }

    /// The unscaled basis `Ĥ_0 … Ĥ_N`.
    pub fn unscaled(n_max: usize) -> Result<Self> {
        Self::new(n_max, 1.0)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Number of basis elements, `N + 1`.
    pub fn len(&self) -> usize {
        self.n_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same degree, scale `1/β`: the space holding Fourier images.
    pub fn dual(&self) -> Self {
        Self {
            n_max: self.n_max,
            beta: 1.0 / self.beta,
        }
    }

    /// Fills `out` (length `N + 1`) with `φ_n(x)`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        hermite_functions_into(self.beta * x, out);
        let s = self.beta.sqrt();
        out.iter_mut().for_each(|v| *v *= s);
    }
}

/// Parameters `(k, s)` of `g_{k,s}(x) = exp(-(x - s)²/2 + ikx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub freq: f64,
    pub shift: f64,
}

impl GaussianParams {
    pub fn new(freq: f64, shift: f64) -> Result<Self> {
        if !freq.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidArgument("Gaussian parameters must be finite"));
        }
        Ok(Self { freq, shift })
    }

    /// `z = k - i s`
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.freq, -self.shift)
    }
}

/// Writes `Ĥ_0(x) … Ĥ_{n-1}(x)` into `out` (`n = out.len()`).
///
/// Non-finite `x` yields NaN entries; use [`eval_hermite_functions`] for the
/// checked version.
pub fn hermite_functions_into(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let half_sq = 0.5 * x * x;
    let mut log_scale = 0.0;
    let mut factor = (-half_sq).exp();
    let mut prev = 0.0;
    let mut cur = PI_POW_M_QUARTER;
    out[0] = cur * factor;
    for k in 1..n {
        let kf = k as f64;
        let next = x * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LN_RESCALE;
            factor = (log_scale - half_sq).exp();
        }
        out[k] = cur * factor;
    }
}

/// `(Ĥ_{n-1}(x), Ĥ_n(x))` up to a common positive factor, for root polishing.
pub(crate) fn hermite_pair_unnormalized(x: f64, n: usize) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        let next = x * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
        }
    }
    (prev, cur)
}

/// `[Ĥ_0(x), …, Ĥ_{n_max}(x)]` by the normalized three-term recurrence.
pub fn eval_hermite_functions(x: f64, n_max: usize) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument("x must be finite"));
    }
    if n_max > MAX_DEGREE {
        return Err(Error::InvalidArgument("n_max exceeds MAX_DEGREE"));
    }
    let mut out = vec![0.0; n_max + 1];
    hermite_functions_into(x, &mut out);
    Ok(out)
}

/// `[φ_0(x), …, φ_N(x)]` with `φ_n(x) = √β Ĥ_n(βx)`.
pub fn eval_scaled_basis(basis: &ScaledBasis, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument("x must be finite"));
    }
    let mut out = vec![0.0; basis.len()];
    basis.eval_into(x, &mut out);
    Ok(out)
}

/// Real coefficient vector of a function in a [`ScaledBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    basis: ScaledBasis,
    values: Vec<f64>,
}

impl SpectralCoeffs {
    pub fn new(basis: ScaledBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::InvalidArgument("coefficient count must equal n_max + 1"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite"));
        }
        Ok(Self { basis, values })
    }

    pub fn zeros(basis: ScaledBasis) -> Self {
        Self {
            basis,
            values: vec![0.0; basis.len()],
        }
    }

    /// Unit vector `e_n`.
    pub fn unit(basis: ScaledBasis, n: usize) -> Result<Self> {
        if n > basis.n_max() {
            return Err(Error::InvalidArgument("unit index out of range"));
        }
        let mut c = Self::zeros(basis);
        c.values[n] = 1.0;
        Ok(c)
    }

    pub fn basis(&self) -> &ScaledBasis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Coefficient 2-norm, equal to the L² norm of the represented function.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Evaluates `Σ c_n φ_n(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut buf = vec![0.0; self.basis.len()];
        self.eval_with(x, &mut buf)
    }

    /// Same as [`eval`](Self::eval) with a caller-provided buffer of length `N + 1`.
    pub fn eval_with(&self, x: f64, buf: &mut [f64]) -> f64 {
        self.basis.eval_into(x, buf);
        buf.iter().zip(&self.values).map(|(p, c)| p * c).sum()
    }

    /// Coefficients of the derivative, in the same-β basis of degree `N + 1`.
    pub fn derivative(&self) -> Self {
        let d = derivative_matrix(&self.basis);
        d.apply(self)
    }
}

/// Complex coefficient vector; used for Gaussian expansions and Fourier duality.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCoeffs {
    basis: ScaledBasis,
    values: Vec<Complex64>,
}

impl ComplexCoeffs {
    pub fn new(basis: ScaledBasis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::InvalidArgument("coefficient count must equal n_max + 1"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite"));
        }
        Ok(Self { basis, values })
    }

    pub fn basis(&self) -> &ScaledBasis {
        &self.basis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Evaluates `Σ c_n φ_n(x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let mut buf = vec![0.0; self.basis.len()];
        self.basis.eval_into(x, &mut buf);
        buf.iter().zip(&self.values).map(|(p, c)| c * *p).sum()
    }

    /// Real and imaginary parts as separate real expansions.
    pub fn split(&self) -> (SpectralCoeffs, SpectralCoeffs) {
        let re = self.values.iter().map(|c| c.re).collect();
        let im = self.values.iter().map(|c| c.im).collect();
        (
            SpectralCoeffs {
                basis: self.basis,
                values: re,
            },
            SpectralCoeffs {
                basis: self.basis,
                values: im,
            },
        )
    }
}

impl From<SpectralCoeffs> for ComplexCoeffs {
    fn from(c: SpectralCoeffs) -> Self {
        Self {
            basis: c.basis,
            values: c.values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// Coefficient-space derivative operator for a [`ScaledBasis`].
///
/// Column `n` holds `β√(n/2)` in row `n - 1` and `-β√((n+1)/2)` in row
/// `n + 1`; the matrix is `(N + 2) × (N + 1)` and exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeMatrix {
    basis: ScaledBasis,
}

pub fn derivative_matrix(basis: &ScaledBasis) -> DerivativeMatrix {
    DerivativeMatrix { basis: *basis }
}

impl DerivativeMatrix {
    pub fn rows(&self) -> usize {
        self.basis.n_max() + 2
    }

    pub fn cols(&self) -> usize {
        self.basis.n_max() + 1
    }

    /// Entry `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let beta = self.basis.beta();
        if col + 1 == row {
            -beta * ((col + 1) as f64 / 2.0).sqrt()
        } else if row + 1 == col {
            beta * (col as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Maps coefficients to the coefficients of the derivative (degree `N + 1`).
    pub fn apply(&self, coeffs: &SpectralCoeffs) -> SpectralCoeffs {
        let n = self.basis.n_max();
        let beta = self.basis.beta();
        let c = coeffs.values();
        let mut out = vec![0.0; n + 2];
        for (m, o) in out.iter_mut().enumerate() {
            let mut v = 0.0;
            if m < n {
                v += beta * ((m + 1) as f64 / 2.0).sqrt() * c[m + 1];
            }
            if m >= 1 {
                v -= beta * (m as f64 / 2.0).sqrt() * c[m - 1];
            }
            *o = v;
        }
        SpectralCoeffs {
            basis: ScaledBasis { n_max: n + 1, beta },
            values: out,
        }
    }

    /// Largest singular value, from the eigenvalues of `DᵀD`.
    ///
    /// `DᵀD` only couples indices of equal parity at distance 2, so it splits
    /// into two symmetric tridiagonal blocks.
    pub fn sigma_max(&self) -> Result<f64> {
        let n = self.basis.n_max();
        let b2 = self.basis.beta() * self.basis.beta();
        let mut lambda_max: f64 = 0.0;
        for parity in 0..2 {
            let idx: Vec<usize> = (parity..=n).step_by(2).collect();
            if idx.is_empty() {
                continue;
            }
            let diag: Vec<f64> = idx.iter().map(|&j| b2 * (2 * j + 1) as f64 / 2.0).collect();
            let off: Vec<f64> = idx
                .windows(2)
                .map(|w| -b2 * (((w[0] + 1) * (w[0] + 2)) as f64).sqrt() / 2.0)
                .collect();
            let ev = crate::linalg::tridiagonal_eigenvalues(&diag, &off)?;
            if let Some(&top) = ev.last() {
                lambda_max = lambda_max.max(top);
            }
        }
        Ok(lambda_max.sqrt())
    }
}

/// Closed-form coefficients of `g_{k,s}` in the unscaled basis:
/// `c_n = π^{1/4} exp(-z²/4 - s²/2) (iz)^n / √(2^n n!)`, `z = k - is`.
pub fn gaussian_coefficients(params: &GaussianParams, n_max: usize) -> Vec<Complex64> {
    let z = params.z();
    let s = params.shift;
    let prefactor = PI.powf(0.25) * (-z * z / 4.0 - s * s / 2.0).exp();
    let iz = Complex64::i() * z;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..=n_max {
        out.push(prefactor * term);
        term = term * iz / (2.0 * (n + 1) as f64).sqrt();
    }
    out
}

/// Expansion coefficients of `exp(-m x²) exp(ikx)` from the three-term
/// recurrence seeded with `c_0`, `c_1`:
///
/// `c_{n+1} = ik/(2m+1) √(2/(n+1)) c_n - (2m-1)/(2m+1) √(n/(n+1)) c_{n-1}`.
pub fn gaussian_coefficients_recurrence(
    m: f64,
    k: f64,
    n_max: usize,
    c0: Complex64,
    c1: Complex64,
) -> Result<Vec<Complex64>> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("recurrence needs n_max >= 1"));
    }
    if !(m >= 0.0) || !m.is_finite() || !k.is_finite() {
        return Err(Error::InvalidArgument("m must be >= 0 and finite, k finite"));
    }
    let denom = 2.0 * m + 1.0;
    let lead = Complex64::new(0.0, k / denom);
    let trail = (2.0 * m - 1.0) / denom;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(c0);
    out.push(c1);
    for n in 1..n_max {
        let nf = n as f64;
        let next = lead * (2.0 / (nf + 1.0)).sqrt() * out[n] - out[n - 1] * (trail * (nf / (nf + 1.0)).sqrt());
        out.push(next);
    }
    Ok(out)
}

/// Fourier image of an expansion: coefficient `n` is multiplied by `(-i)^n`
/// and the scale becomes `1/β`.
pub fn fourier_dual_coeffs(coeffs: &ComplexCoeffs) -> ComplexCoeffs {
    const PHASES: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    let values = coeffs
        .values
        .iter()
        .enumerate()
        .map(|(n, c)| c * PHASES[n % 4])
        .collect();
    ComplexCoeffs {
        basis: coeffs.basis.dual(),
        values,
    }
}
