//! Test-function catalog with Fourier transforms and tail norms, plus the
//! numerical oracles used to validate it.
//!
//! The Fourier transform is the unitary one,
//! `F[u](k) = (2π)^{-1/2} ∫ u(x) e^{-ikx} dx`, everywhere in the crate.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::integrate::{uniform_breaks, wynn_epsilon, Integrator};
use crate::special::{bessel_k, erfc, gamma, ln_gamma};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Highest derivative order the catalog provides in closed form.
pub const MAX_DERIVATIVE: u8 = 2;

// relative accuracy requested from adaptive tail integrals
const TAIL_REL_TOL: f64 = 1e-11;

/// Decay law of a function or of its transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayKind {
    /// `exp(-rate |x|^power)`; `rate` is `None` when only the exponent is known.
    Exponential { rate: Option<f64>, power: f64 },
    /// `|x|^{-order}`
    Algebraic { order: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayMeta {
    pub spatial: DecayKind,
    pub frequency: DecayKind,
}

/// Catalog families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `exp(-x^{2n})`
    GaussianPower { n: u32 },
    /// `(1 + x²)^{-h}`
    Algebraic { h: f64 },
    /// `g_{k,s}(x) = exp(-(x - s)²/2 + ikx)`
    Gaussian { freq: f64, shift: f64 },
    /// `exp(-x² / (2σ²))`
    PlainGaussian { sigma: f64 },
}

/// Samples of `F[exp(-x^{2n})]` and its derivative on a uniform k-grid,
/// evaluated by cubic Hermite interpolation.
#[derive(Debug)]
struct TransformTable {
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TransformTable {
    const STEP: f64 = 0.025;
    const K_CAP: f64 = 400.0;

    /// Samples are produced a chunk of k values at a time with one
    /// vector-valued quadrature of `e^{-x^{2n}} cos(kx)` and `x e^{-x^{2n}} sin(kx)`
    /// over `[0, X]`, where `e^{-X^{2n}}` underflows.
    fn build(n: u32) -> Result<Self> {
        const CHUNK: usize = 200;
        let p = 2 * n as i32;
        let step = Self::STEP;
        let x_end = 745f64.powf(1.0 / p as f64);
        let q = Integrator::new(1e-19, 1e-13).with_max_panels(100_000);
        let mut values = Vec::new();
        let mut slopes = Vec::new();
        let mut quiet = 0;
        let scale = 2.0 / SQRT_2PI;
        'chunks: loop {
            let first = values.len();
            let ks: Vec<f64> = (first..first + CHUNK).map(|i| i as f64 * step).collect();
            let k_top = *ks.last().unwrap();
            let width = (PI / (2.0 * k_top.max(1.0))).min(0.05);
            let panels = (x_end / width).ceil() as usize;
            let breaks = uniform_breaks(0.0, x_end, panels);
            let (v, _) = q.integrate_vec(2 * CHUNK, &breaks, |x, out| {
                let e = (-x.powi(p)).exp();
                for (j, k) in ks.iter().enumerate() {
                    let (sn, cs) = (k * x).sin_cos();
                    out[2 * j] = e * cs;
                    out[2 * j + 1] = x * e * sn;
                }
            })?;
            for (j, k) in ks.iter().enumerate() {
                let value = scale * v[2 * j];
                let slope = -scale * v[2 * j + 1];
                values.push(value);
                slopes.push(slope);
                if value.abs() < 1e-15 && slope.abs() < 1e-15 {
                    quiet += 1;
                } else {
                    quiet = 0;
                }
                if quiet >= 40 || *k >= Self::K_CAP {
                    break 'chunks;
                }
            }
        }
        Ok(Self { step, values, slopes })
    }

    fn k_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    fn eval(&self, k: f64) -> f64 {
        let k = k.abs();
        let t = k / self.step;
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return 0.0;
        }
        let s = t - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * self.step, self.slopes[i + 1] * self.step);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1
    }
}

/// A catalog function (or one of its first two derivatives) together with
/// its transform, norm, tail evaluators and decay metadata.
#[derive(Debug, Clone)]
pub struct TestFunction {
    family: Family,
    order: u8,
    norm: f64,
    table: Option<Arc<TransformTable>>,
}

impl TestFunction {
    /// `u = exp(-x^{2n})`, `n ≥ 1`. For `n ≥ 2` the transform is tabulated
    /// from the numerical Fourier oracle at construction.
    pub fn gaussian_power(n: u32) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidArgument("gaussian_power needs 1 <= n <= 16"));
        }
        let table = if n >= 2 {
            Some(Arc::new(TransformTable::build(n)?))
        } else {
            None
        };
        let q = 1.0 / (2.0 * n as f64);
        // ∫ exp(-2 x^{2n}) dx = 2 Γ(1 + 1/(2n)) 2^{-1/(2n)}
        let norm = (2.0 * gamma(1.0 + q) * 2f64.powf(-q)).sqrt();
        Ok(Self {
            family: Family::GaussianPower { n },
            order: 0,
            norm,
            table,
        })
    }

    /// `u = (1 + x²)^{-h}`, `h > 1/2`.
    pub fn algebraic(h: f64) -> Result<Self> {
        if !(h > 0.5) || !h.is_finite() || h > 50.0 {
            return Err(Error::Domain("algebraic decay needs 1/2 < h <= 50"));
        }
        // ∫ (1+x²)^{-2h} dx = √π Γ(2h - 1/2) / Γ(2h)
        let norm = (PI.sqrt() * (ln_gamma(2.0 * h - 0.5) - ln_gamma(2.0 * h)).exp()).sqrt();
        Ok(Self {
            family: Family::Algebraic { h },
            order: 0,
            norm,
            table: None,
        })
    }

    /// `g_{k,s}(x) = exp(-(x - s)²/2 + ikx)`; complex unless `k = 0`.
    pub fn gaussian(freq: f64, shift: f64) -> Result<Self> {
        if !freq.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidArgument("Gaussian parameters must be finite"));
        }
        Ok(Self {
            family: Family::Gaussian { freq, shift },
            order: 0,
            norm: PI.sqrt().sqrt(),
            table: None,
        })
    }

    /// `u = exp(-x² / (2σ²))`, `σ > 0`.
    pub fn plain_gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument("sigma must be positive and finite"));
        }
        Ok(Self {
            family: Family::PlainGaussian { sigma },
            order: 0,
            norm: (sigma * PI.sqrt()).sqrt(),
            table: None,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Derivative order of this entry relative to its catalog function.
    pub fn derivative_order(&self) -> u8 {
        self.order
    }

    /// Human-readable identifier, e.g. `algebraic(h=1)` or `d2/dx2 gaussian_power(n=4)`.
    pub fn id(&self) -> String {
        let base = match self.family {
            Family::GaussianPower { n } => format!("gaussian_power(n={n})"),
            Family::Algebraic { h } => format!("algebraic(h={h})"),
            Family::Gaussian { freq, shift } => format!("gaussian(k={freq},s={shift})"),
            Family::PlainGaussian { sigma } => format!("plain_gaussian(sigma={sigma})"),
        };
        match self.order {
            0 => base,
            1 => format!("d/dx {base}"),
            o => format!("d{o}/dx{o} {base}"),
        }
    }

    /// The next derivative, supplied in closed form.
    pub fn derivative(&self) -> Result<Self> {
        if self.order >= MAX_DERIVATIVE {
            return Err(Error::InvalidArgument("only the first two derivatives are available"));
        }
        let mut d = Self {
            family: self.family,
            order: self.order + 1,
            norm: 0.0,
            table: self.table.clone(),
        };
        d.norm = d.derivative_norm()?;
        Ok(d)
    }

    fn derivative_norm(&self) -> Result<f64> {
        let l = self.order as usize;
        match self.family {
            Family::PlainGaussian { sigma } => {
                let p = plain_poly(l);
                Ok((2.0 * sigma.powi(1 - 2 * l as i32) * gauss_poly_tail(&p, 0.0)).sqrt())
            }
            Family::Gaussian { freq, .. } => Ok(gauss_poly_full(&shifted_gaussian_poly(l, freq)).sqrt()),
            _ => self.spatial_tail(0.0),
        }
    }

    /// Whether `u` is real valued.
    pub fn is_real(&self) -> bool {
        !matches!(self.family, Family::Gaussian { freq, .. } if freq != 0.0)
    }

    /// Whether `u` is even (all catalog entries except shifted/modulated Gaussians).
    pub fn is_even(&self) -> bool {
        match self.family {
            Family::Gaussian { freq, shift } => freq == 0.0 && shift == 0.0 && self.order.is_multiple_of(2),
            _ => self.order.is_multiple_of(2),
        }
    }

    /// Real part of `u(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.family {
            Family::Gaussian { .. } => self.eval_complex(x).re,
            _ => self.eval_real(x),
        }
    }

    fn eval_real(&self, x: f64) -> f64 {
        match self.family {
            Family::GaussianPower { n } => {
                let n = n as i32;
                let x2n = x.powi(2 * n);
                let e = (-x2n).exp();
                match self.order {
                    0 => e,
                    1 => -2.0 * n as f64 * x.powi(2 * n - 1) * e,
                    _ => {
                        let nf = n as f64;
                        (4.0 * nf * nf * x.powi(4 * n - 2) - 2.0 * nf * (2.0 * nf - 1.0) * x.powi(2 * n - 2)) * e
                    }
                }
            }
            Family::Algebraic { h } => {
                let q = 1.0 + x * x;
                match self.order {
                    0 => q.powf(-h),
                    1 => -2.0 * h * x * q.powf(-h - 1.0),
                    _ => -2.0 * h * q.powf(-h - 1.0) + 4.0 * h * (h + 1.0) * x * x * q.powf(-h - 2.0),
                }
            }
            Family::PlainGaussian { sigma } => {
                let s2 = sigma * sigma;
                let e = (-x * x / (2.0 * s2)).exp();
                match self.order {
                    0 => e,
                    1 => -x / s2 * e,
                    _ => (x * x / (s2 * s2) - 1.0 / s2) * e,
                }
            }
            Family::Gaussian { .. } => self.eval_complex(x).re,
        }
    }

    /// `u(x)` as a complex number.
    pub fn eval_complex(&self, x: f64) -> Complex64 {
        match self.family {
            Family::Gaussian { freq, shift } => {
                let y = x - shift;
                let g = Complex64::from_polar((-0.5 * y * y).exp(), freq * x);
                let a = Complex64::new(-y, freq);
                match self.order {
                    0 => g,
                    1 => a * g,
                    _ => (a * a - 1.0) * g,
                }
            }
            _ => Complex64::new(self.eval_real(x), 0.0),
        }
    }

    /// Analytic (or tabulated) `F[u](k)`.
    pub fn fourier(&self, k: f64) -> Result<Complex64> {
        let base = match self.family {
            Family::GaussianPower { n } => {
                let v = match &self.table {
                    Some(t) => t.eval(k),
                    None => {
                        debug_assert_eq!(n, 1);
                        (-k * k / 4.0).exp() / 2f64.sqrt()
                    }
                };
                Complex64::new(v, 0.0)
            }
            Family::Algebraic { h } => Complex64::new(algebraic_transform(h, k)?, 0.0),
            Family::PlainGaussian { sigma } => Complex64::new(sigma * (-0.5 * sigma * sigma * k * k).exp(), 0.0),
            Family::Gaussian { freq, shift } => {
                let d = k - freq;
                Complex64::from_polar((-0.5 * d * d).exp(), -d * shift)
            }
        };
        // F[u^{(l)}] = (ik)^l F[u]
        let ik = Complex64::new(0.0, k);
        Ok(match self.order {
            0 => base,
            1 => ik * base,
            _ => ik * ik * base,
        })
    }

    /// `|F[u](k)|`.
    pub fn fourier_abs(&self, k: f64) -> Result<f64> {
        Ok(self.fourier(k)?.norm())
    }

    /// `‖u‖` in L².
    pub fn l2_norm(&self) -> f64 {
        self.norm
    }

    /// `‖u · 1_{|x| > M}‖`.
    pub fn spatial_tail(&self, cutoff: f64) -> Result<f64> {
        if !(cutoff >= 0.0) {
            return Err(Error::InvalidArgument("tail cutoff must be >= 0"));
        }
        let l = self.order as usize;
        match self.family {
            Family::PlainGaussian { sigma } => {
                let p = plain_poly(l);
                let v = 2.0 * sigma.powi(1 - 2 * l as i32) * gauss_poly_tail(&p, cutoff / sigma);
                Ok(v.max(0.0).sqrt())
            }
            Family::Gaussian { freq, shift } => {
                let p = shifted_gaussian_poly(l, freq);
                let v = gauss_poly_tail(&p, cutoff - shift) + gauss_poly_tail(&p, cutoff + shift);
                Ok(v.max(0.0).sqrt())
            }
            Family::Algebraic { h } if l == 0 && algebraic_closed_form(h) => {
                Ok((2.0 * algebraic_tail_integral((2.0 * h) as u32, cutoff)).sqrt())
            }
            _ => relative_tail_norm(|x| self.eval_real(x), cutoff, true),
        }
    }

    /// `‖F[u] · 1_{|k| > K}‖`.
    pub fn frequency_tail(&self, cutoff: f64) -> Result<f64> {
        if !(cutoff >= 0.0) {
            return Err(Error::InvalidArgument("tail cutoff must be >= 0"));
        }
        let l = self.order as usize;
        match self.family {
            Family::PlainGaussian { sigma } => {
                let mut p = [0.0; 5];
                p[2 * l] = 1.0;
                let v = 2.0 * sigma.powi(1 - 2 * l as i32) * gauss_poly_tail(&p[..=2 * l], sigma * cutoff);
                Ok(v.max(0.0).sqrt())
            }
            Family::Gaussian { freq, .. } => {
                let up = binomial_shift_poly(l, freq);
                let down = binomial_shift_poly(l, -freq);
                let v = gauss_poly_tail(&up, cutoff - freq) + gauss_poly_tail(&down, cutoff + freq);
                Ok(v.max(0.0).sqrt())
            }
            Family::Algebraic { h } if l == 0 && h == 1.0 => {
                // F[u] = √(π/2) e^{-|k|}
                Ok((PI / 2.0).sqrt() * (-cutoff).exp())
            }
            Family::GaussianPower { .. } if self.table.is_some() => {
                let table = self.table.as_ref().unwrap();
                let k_max = table.k_max();
                if cutoff >= k_max {
                    return Ok(0.0);
                }
                let first = (cutoff / table.step).floor() as usize + 1;
                let mut breaks = Vec::with_capacity(table.values.len() + 1);
                breaks.push(cutoff);
                let mut i = first;
                while (i as f64) * table.step < k_max {
                    let k = i as f64 * table.step;
                    if k > cutoff {
                        breaks.push(k);
                    }
                    i += 1;
                }
                breaks.push(k_max);
                breaks.dedup();
                if breaks.len() < 2 {
                    return Ok(0.0);
                }
                let q = Integrator::new(1e-300, TAIL_REL_TOL);
                let r = q.integrate_breaks(&breaks, |k| {
                    let v = table.eval(k) * k.powi(l as i32);
                    v * v
                })?;
                Ok((2.0 * r.value).max(0.0).sqrt())
            }
            _ => relative_tail_norm(|k| self.fourier_abs(k).unwrap_or(f64::NAN), cutoff, true),
        }
    }

    pub fn decay(&self) -> DecayMeta {
        match self.family {
            Family::GaussianPower { n } => {
                let p = 2.0 * n as f64;
                DecayMeta {
                    spatial: DecayKind::Exponential {
                        rate: Some(1.0),
                        power: p,
                    },
                    frequency: DecayKind::Exponential {
                        rate: if n == 1 { Some(0.25) } else { None },
                        power: p / (p - 1.0),
                    },
                }
            }
            Family::Algebraic { h } => DecayMeta {
                spatial: DecayKind::Algebraic { order: 2.0 * h },
                frequency: DecayKind::Exponential {
                    rate: Some(1.0),
                    power: 1.0,
                },
            },
            Family::Gaussian { .. } => DecayMeta {
                spatial: DecayKind::Exponential {
                    rate: Some(0.5),
                    power: 2.0,
                },
                frequency: DecayKind::Exponential {
                    rate: Some(0.5),
                    power: 2.0,
                },
            },
            Family::PlainGaussian { sigma } => DecayMeta {
                spatial: DecayKind::Exponential {
                    rate: Some(0.5 / (sigma * sigma)),
                    power: 2.0,
                },
                frequency: DecayKind::Exponential {
                    rate: Some(0.5 * sigma * sigma),
                    power: 2.0,
                },
            },
        }
    }

    /// Half-width beyond which `|u|` is negligible (or, for algebraic decay,
    /// a width that captures the bulk); used to place quadrature panels.
    pub fn bulk_radius(&self) -> f64 {
        match self.family {
            Family::GaussianPower { n } => 80f64.powf(1.0 / (2.0 * n as f64)) + 0.5,
            Family::Algebraic { .. } => 30.0,
            Family::Gaussian { shift, .. } => shift.abs() + 14.0,
            Family::PlainGaussian { sigma } => 14.0 * sigma,
        }
    }

    /// Largest `|k|` where the transform has noticeable oscillation/variation;
    /// used to size quadrature panels for the function itself.
    pub fn characteristic_frequency(&self) -> f64 {
        match self.family {
            Family::GaussianPower { n } => 2.0 * n as f64,
            Family::Algebraic { .. } => 1.0,
            Family::Gaussian { freq, .. } => freq.abs() + 1.0,
            Family::PlainGaussian { sigma } => 1.0 / sigma,
        }
    }
}

fn algebraic_closed_form(h: f64) -> bool {
    [1.0, 1.5, 2.0, 2.5, 3.0].contains(&h)
}

/// `∫_M^∞ (1 + x²)^{-m} dx` for integer `m ≥ 1`.
///
/// Upward recurrence from `π/2 - atan M` for `M ≤ 2`; binomial series in
/// `1/M²` beyond, where the recurrence cancels.
fn algebraic_tail_integral(m: u32, cutoff: f64) -> f64 {
    let mf = m as f64;
    if cutoff <= 2.0 {
        let q = 1.0 + cutoff * cutoff;
        let mut i = PI / 2.0 - cutoff.atan();
        for j in 1..m {
            let jf = j as f64;
            i = ((2.0 * jf - 1.0) * i - cutoff * q.powi(-(j as i32))) / (2.0 * jf);
        }
        i
    } else {
        let t = 1.0 / (cutoff * cutoff);
        // term_j = C(-m, j) M^{1 - 2m - 2j} / (2m + 2j - 1)
        let mut coef = 1.0;
        let mut power = cutoff.powf(1.0 - 2.0 * mf);
        let mut sum = 0.0;
        for j in 0..400 {
            let jf = j as f64;
            let term = coef * power / (2.0 * mf + 2.0 * jf - 1.0);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            coef *= -(mf + jf) / (jf + 1.0);
            power *= t;
        }
        sum
    }
}

// |u^{(l)}|² for the plain Gaussian in units y = x/σ (times σ^{2l-1}).
fn plain_poly(l: usize) -> Vec<f64> {
    match l {
        0 => alloc::vec![1.0],
        1 => alloc::vec![0.0, 0.0, 1.0],
        _ => alloc::vec![1.0, 0.0, -2.0, 0.0, 1.0],
    }
}

// |g^{(l)}|² as a polynomial in y = x - s (times e^{-y²}).
fn shifted_gaussian_poly(l: usize, k: f64) -> Vec<f64> {
    let k2 = k * k;
    match l {
        0 => alloc::vec![1.0],
        1 => alloc::vec![k2, 0.0, 1.0],
        _ => alloc::vec![(k2 + 1.0) * (k2 + 1.0), 0.0, 2.0 * (k2 - 1.0), 0.0, 1.0],
    }
}

// (η + k)^{2l}
fn binomial_shift_poly(l: usize, k: f64) -> Vec<f64> {
    match l {
        0 => alloc::vec![1.0],
        1 => alloc::vec![k * k, 2.0 * k, 1.0],
        _ => alloc::vec![k.powi(4), 4.0 * k.powi(3), 6.0 * k * k, 4.0 * k, 1.0],
    }
}

/// `∫_c^∞ P(y) e^{-y²} dy` for a polynomial with coefficients `poly[j] y^j`.
fn gauss_poly_tail(poly: &[f64], c: f64) -> f64 {
    let e = (-c * c).exp();
    let mut moments = [0.0; 8];
    moments[0] = 0.5 * PI.sqrt() * erfc(c);
    moments[1] = 0.5 * e;
    for p in 2..poly.len().max(2) {
        moments[p] = 0.5 * c.powi(p as i32 - 1) * e + 0.5 * (p as f64 - 1.0) * moments[p - 2];
    }
    poly.iter().zip(moments.iter()).map(|(a, m)| a * m).sum()
}

/// `∫_ℝ P(y) e^{-y²} dy`.
fn gauss_poly_full(poly: &[f64]) -> f64 {
    poly.iter()
        .enumerate()
        .filter(|(j, _)| j % 2 == 0)
        .map(|(j, a)| a * gamma((j as f64 + 1.0) / 2.0))
        .sum()
}

/// Two-sided tail norm with relative error control, used by the catalog.
fn relative_tail_norm<F: Fn(f64) -> f64>(f: F, cutoff: f64, even: bool) -> Result<f64> {
    let q = Integrator::new(1e-300, TAIL_REL_TOL).with_max_panels(50_000);
    tail_norm_with(&q, &f, cutoff, even)
}

fn tail_norm_with<F: Fn(f64) -> f64>(q: &Integrator, f: &F, cutoff: f64, even: bool) -> Result<f64> {
    let breaks = uniform_breaks(0.0, 1.0, 16);
    let dim = if even { 1 } else { 2 };
    let (v, _) = q.integrate_vec_to_infinity(dim, cutoff, &breaks, |x, out| {
        let a = f(x);
        out[0] = a * a;
        if !even {
            let b = f(-x);
            out[1] = b * b;
        }
    })?;
    let total = if even { 2.0 * v[0] } else { v[0] + v[1] };
    if !total.is_finite() {
        return Err(Error::Accuracy {
            what: "tail norm integrand is not finite",
            estimate: total,
            error: f64::NAN,
        });
    }
    Ok(total.max(0.0).sqrt())
}

/// `(∫_{|x|>cutoff} f(x)² dx)^{1/2}` by adaptive quadrature on both tails
/// after mapping `[cutoff, ∞)` onto `[0, 1)`.
///
/// `tol` is an absolute tolerance on the returned norm.
pub fn tail_norm<F: Fn(f64) -> f64>(f: F, cutoff: f64, tol: f64) -> Result<f64> {
    if !(cutoff >= 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidArgument("tail cutoff must be finite and >= 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let q = Integrator::new((tol * tol).max(1e-300), 1e-12).with_max_panels(50_000);
    tail_norm_with(&q, &f, cutoff, false)
}

/// `∫_0^∞ g(x) cos(kx) dx` (or `sin`) to absolute tolerance `tol`.
///
/// For `k ≠ 0` the half-line is cut into half periods `[jπ/|k|, (j+1)π/|k|]`;
/// the partial sums are extrapolated with Wynn's epsilon algorithm once the
/// cycle contributions alternate with decreasing size.
fn oscillatory_half_line<G: Fn(f64) -> f64>(g: G, k: f64, sine: bool, tol: f64) -> Result<f64> {
    const MAX_CYCLES: usize = 200_000;
    let k_abs = k.abs();
    if k_abs < 1e-300 {
        if sine {
            return Ok(0.0);
        }
        let q = Integrator::new(tol * 1e-2, 1e-12).with_max_panels(50_000);
        let (v, _) = q.integrate_vec_to_infinity(1, 0.0, &uniform_breaks(0.0, 1.0, 32), |x, out| out[0] = g(x))?;
        return Ok(v[0]);
    }
    let sign = if sine && k < 0.0 { -1.0 } else { 1.0 };
    let weight = |x: f64| if sine { (k_abs * x).sin() } else { (k_abs * x).cos() };
    let period = PI / k_abs;
    let q = Integrator::new(tol * 1e-2, 1e-12).with_max_panels(5_000);

    let mut sums: Vec<f64> = Vec::new();
    let mut terms: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let mut prev_limit = f64::NAN;
    let mut agreements = 0;
    for j in 0..MAX_CYCLES {
        let a = j as f64 * period;
        let b = a + period;
        let r = q.integrate(a, b, |x| g(x) * weight(x))?;
        total += r.value;
        sums.push(total);
        terms.push(r.value);

        let n = terms.len();
        if n >= 4 {
            let quiet = terms[n - 3..].iter().all(|t| t.abs() < tol * 1e-3) && (g(b).abs() * period) < tol * 1e-3;
            if quiet {
                return Ok(sign * total);
            }
        }
        if n >= 8 {
            let alternating = terms[n - 6..]
                .windows(2)
                .all(|w| w[0] * w[1] < 0.0 && w[1].abs() <= w[0].abs() * (1.0 + 1e-12));
            if alternating {
                let start = sums.len().saturating_sub(40);
                let (limit, _) = wynn_epsilon(&sums[start..]);
                if (limit - prev_limit).abs() < 0.1 * tol {
                    agreements += 1;
                    if agreements >= 3 {
                        return Ok(sign * limit);
                    }
                } else {
                    agreements = 0;
                }
                prev_limit = limit;
            } else {
                agreements = 0;
            }
        }
    }
    Err(Error::Accuracy {
        what: "numerical Fourier transform",
        estimate: sign * total,
        error: terms.last().copied().unwrap_or(f64::NAN).abs(),
    })
}

/// `F[u](k) = (2π)^{-1/2} ∫ u(x) e^{-ikx} dx` by oscillatory quadrature.
///
/// `u` must be absolutely integrable; `tol ≥ 1e-12` is an absolute target.
pub fn numerical_fourier<F: Fn(f64) -> f64>(u: F, k: f64, tol: f64) -> Result<Complex64> {
    if !(tol >= 1e-12) {
        return Err(Error::InvalidArgument("numerical_fourier tolerance must be >= 1e-12"));
    }
    if !k.is_finite() {
        return Err(Error::InvalidArgument("frequency must be finite"));
    }
    let inner = tol * SQRT_2PI / 2.0;
    let re = oscillatory_half_line(|x| u(x) + u(-x), k, false, inner)?;
    let im = oscillatory_half_line(|x| u(x) - u(-x), k, true, inner)?;
    Ok(Complex64::new(re, -im) / SQRT_2PI)
}

/// `F[(1 + x²)^{-h}](k) = 2^{1-h} |k|^{h-1/2} K_{h-1/2}(|k|) / Γ(h)`, with the
/// finite limit `Γ(h - 1/2) / (√2 Γ(h))` at `k = 0`.
pub fn algebraic_transform(h: f64, k: f64) -> Result<f64> {
    if !(h > 0.5) || !h.is_finite() {
        return Err(Error::Domain("algebraic_transform requires h > 1/2"));
    }
    let ka = k.abs();
    if ka < 1e-10 {
        return Ok((ln_gamma(h - 0.5) - ln_gamma(h)).exp() / 2f64.sqrt());
    }
    let nu = h - 0.5;
    let log_pref = (1.0 - h) * 2f64.ln() + nu * ka.ln() - ln_gamma(h);
    Ok(log_pref.exp() * bessel_k(nu, ka)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_norm_examples() {
        let f = |x: f64| 1.0 / (1.0 + x * x);
        let got = tail_norm(f, 1.0, 1e-12).unwrap();
        let exact = (PI / 2.0 - PI / 4.0 - 0.5f64).sqrt();
        assert!((got - exact).abs() < 1e-11, "{got} vs {exact}");

        let g = |x: f64| (-x * x / 2.0).exp();
        let got = tail_norm(g, 0.0, 1e-12).unwrap();
        assert!((got - PI.powf(0.25)).abs() < 1e-11);

        let e = |k: f64| (PI / 2.0).sqrt() * (-k.abs()).exp();
        let got = tail_norm(e, 2.0, 1e-12).unwrap();
        assert!((got - (PI / 2.0).sqrt() * (-2.0f64).exp()).abs() < 1e-12);
        assert!(tail_norm(e, -1.0, 1e-12).is_err());
    }

    #[test]
    fn numerical_fourier_examples() {
        let g = |x: f64| (-x * x / 2.0).exp();
        let v = numerical_fourier(g, 0.0, 1e-12).unwrap();
        assert!((v.re - 1.0).abs() < 1e-11 && v.im.abs() < 1e-14);
        let v = numerical_fourier(g, 1.0, 1e-12).unwrap();
        assert!((v.re - (-0.5f64).exp()).abs() < 1e-11);
        let a = |x: f64| 1.0 / (1.0 + x * x);
        let v = numerical_fourier(a, 3.0, 1e-10).unwrap();
        assert!((v.re - (PI / 2.0).sqrt() * (-3.0f64).exp()).abs() < 1e-9, "{}", v.re);
    }

    #[test]
    fn numerical_fourier_of_shifted_gaussian_has_phase() {
        // F[e^{-(x-1)²/2}](k) = e^{-ik} e^{-k²/2}
        let g = |x: f64| (-(x - 1.0) * (x - 1.0) / 2.0).exp();
        let v = numerical_fourier(g, 2.0, 1e-12).unwrap();
        let exact = Complex64::from_polar((-2.0f64).exp(), -2.0);
        assert!((v - exact).norm() < 1e-11);
    }

    #[test]
    fn algebraic_transform_examples() {
        let v = algebraic_transform(1.0, 2.0).unwrap();
        assert!((v - (PI / 2.0).sqrt() * (-2.0f64).exp()).abs() < 1e-12);
        assert_eq!(
            algebraic_transform(2.0, 1.3).unwrap(),
            algebraic_transform(2.0, -1.3).unwrap()
        );
        let oracle = numerical_fourier(|x| (1.0 + x * x).powi(-2), 1.0, 1e-12).unwrap();
        assert!((algebraic_transform(2.0, 1.0).unwrap() - oracle.re).abs() < 1e-7);
        assert!(matches!(algebraic_transform(0.5, 1.0), Err(Error::Domain(_))));
        // k = 0 limit: ∫(1+x²)^{-1} dx / √(2π) = √(π/2)
        assert!((algebraic_transform(1.0, 0.0).unwrap() - (PI / 2.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn algebraic_tail_closed_form_matches_quadrature() {
        for m in 2..=6u32 {
            for &c in &[0.0, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 6.0, 40.0] {
                let closed = algebraic_tail_integral(m, c);
                let q = Integrator::new(1e-300, 1e-13);
                let quad = q
                    .integrate_to_infinity(c, |x| (1.0 + x * x).powi(-(m as i32)))
                    .unwrap()
                    .value;
                assert!((closed / quad - 1.0).abs() < 1e-9, "m={m} c={c}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn gaussian_moment_tails_match_quadrature() {
        let q = Integrator::new(1e-300, 1e-13);
        let poly = [1.5, -0.5, 2.0, 0.25, 1.0];
        for &c in &[-2.0, -0.3, 0.0, 0.7, 3.0] {
            let quad = q
                .integrate_to_infinity(c, |y| {
                    let p: f64 = poly.iter().enumerate().map(|(j, a)| a * y.powi(j as i32)).sum();
                    p * (-y * y).exp()
                })
                .unwrap()
                .value;
            assert!(
                (gauss_poly_tail(&poly, c) - quad).abs() < 1e-12 * quad.abs().max(1.0),
                "c={c}"
            );
        }
    }

    #[test]
    fn constructors_validate_parameters() {
        assert!(TestFunction::gaussian_power(0).is_err());
        assert!(TestFunction::algebraic(0.5).is_err());
        assert!(TestFunction::plain_gaussian(-1.0).is_err());
        assert!(TestFunction::gaussian(f64::NAN, 0.0).is_err());
        let u = TestFunction::plain_gaussian(1.0).unwrap();
        assert!(u.derivative().unwrap().derivative().unwrap().derivative().is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let fns = [
            TestFunction::gaussian_power(3).unwrap(),
            TestFunction::algebraic(1.4).unwrap(),
            TestFunction::plain_gaussian(0.7).unwrap(),
            TestFunction::gaussian(1.5, -0.5).unwrap(),
        ];
        let h = 1e-5;
        for u in &fns {
            let d1 = u.derivative().unwrap();
            let d2 = d1.derivative().unwrap();
            for &x in &[-1.3, -0.2, 0.4, 0.9, 2.2] {
                let fd1 = (u.eval_complex(x + h) - u.eval_complex(x - h)) / (2.0 * h);
                let fd2 = (d1.eval_complex(x + h) - d1.eval_complex(x - h)) / (2.0 * h);
                assert!((fd1 - d1.eval_complex(x)).norm() < 1e-6, "{} at {x}", d1.id());
                assert!((fd2 - d2.eval_complex(x)).norm() < 1e-5, "{} at {x}", d2.id());
            }
        }
    }

    #[test]
    fn tabulated_transform_matches_oracle() {
        let u = TestFunction::gaussian_power(2).unwrap();
        for &k in &[0.0, 0.3, 1.7, 4.05, 9.0] {
            let oracle = numerical_fourier(|x| (-x.powi(4)).exp(), k, 1e-12).unwrap();
            let got = u.fourier(k).unwrap();
            assert!((got - oracle).norm() < 1e-8, "k={k}: {got} vs {oracle}");
        }
        // F[e^{-x⁴}](0) = 2 Γ(5/4) / √(2π)
        assert!((u.fourier(0.0).unwrap().re - 2.0 * gamma(1.25) / SQRT_2PI).abs() < 1e-13);
    }

    #[test]
    fn ids_are_descriptive() {
        let u = TestFunction::algebraic(1.0).unwrap();
        assert_eq!(u.id(), "algebraic(h=1)");
        assert_eq!(u.derivative().unwrap().id(), "d/dx algebraic(h=1)");
    }
}
