//! Projection and interpolation onto a scaled basis, the three-part error
//! indicator, the scaling balancer and the transition-point solver.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::basis::{ComplexCoeffs, ScaledBasis, SpectralCoeffs};
use crate::error::{Error, Result};
use crate::fourier::TestFunction;
use crate::integrate::{uniform_breaks, Integrator};
use crate::quadrature::{analysis, CollocationGrid};
use crate::roots::bisect;

/// Indicator constants: cutoffs `a√N/β`, `b√Nβ` and the decay `e^{-cN}`.
pub const CUTOFF_A: f64 = 0.353_553_390_593_273_8;
pub const CUTOFF_B: f64 = 0.353_553_390_593_273_8;
pub const HERMITE_RATE: f64 = 1.0 / 16.0;

/// Support window and panel layout for integrals of `u · φ_n`.
fn window(u: &TestFunction, basis: &ScaledBasis) -> (f64, Vec<f64>) {
    let beta = basis.beta();
    let n = basis.n_max() as f64;
    let x = ((2.0 * n + 2.0).sqrt() + 10.0) / beta;
    let x = x.max(u.bulk_radius());
    let k = beta * (2.0 * n + 2.0).sqrt() + u.characteristic_frequency();
    let width = 2.0 * core::f64::consts::PI / k;
    let panels = ((2.0 * x / width).ceil() as usize).clamp(8, 20_000);
    (x, uniform_breaks(-x, x, panels))
}

/// Integrates a vector integrand over the window and both mapped tails.
fn integrate_line<F>(q: &Integrator, dim: usize, x: f64, breaks: &[f64], mut f: F) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]),
{
    let (mut total, _) = q.integrate_vec(dim, breaks, &mut f)?;
    let t_breaks = uniform_breaks(0.0, 1.0, 4);
    let (right, _) = q.integrate_vec_to_infinity(dim, x, &t_breaks, &mut f)?;
    let (left, _) = q.integrate_vec_to_infinity(dim, x, &t_breaks, |t, out| f(-t, out))?;
    for i in 0..dim {
        total[i] += right[i] + left[i];
    }
    Ok(total)
}

fn project_parts(u: &TestFunction, basis: &ScaledBasis, tol: f64) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    if !(tol >= 1e-12) {
        return Err(Error::InvalidArgument("projection tolerance must be >= 1e-12"));
    }
    let len = basis.len();
    let complex = !u.is_real();
    let dim = if complex { 2 * len } else { len };
    let (x, breaks) = window(u, basis);
    let q = Integrator::new(tol, 1e-13).with_max_panels(200_000);
    let mut phi = vec![0.0; len];
    let v = integrate_line(&q, dim, x, &breaks, |t, out| {
        basis.eval_into(t, &mut phi);
        if complex {
            let w = u.eval_complex(t);
            for n in 0..len {
                out[n] = w.re * phi[n];
                out[len + n] = w.im * phi[n];
            }
        } else {
            let w = u.eval(t);
            for n in 0..len {
                out[n] = w * phi[n];
            }
        }
    })
    .map_err(|e| match e {
        Error::Accuracy { estimate, error, .. } => Error::Accuracy {
            what: "projection coefficient",
            estimate,
            error,
        },
        other => other,
    })?;
    if complex {
        let im = v[len..].to_vec();
        let mut re = v;
        re.truncate(len);
        Ok((re, Some(im)))
    } else {
        Ok((v, None))
    }
}

/// `Π̂_N^β u` for real `u` (the real part for complex `u`): coefficient `n` is
/// `∫ u φ_n` by adaptive quadrature to absolute tolerance `tol`.
pub fn project(u: &TestFunction, basis: &ScaledBasis, tol: f64) -> Result<SpectralCoeffs> {
    let (re, _) = project_parts(u, basis, tol)?;
    SpectralCoeffs::new(*basis, re)
}

/// `Π̂_N^β u` with complex coefficients.
pub fn project_complex(u: &TestFunction, basis: &ScaledBasis, tol: f64) -> Result<ComplexCoeffs> {
    let (re, im) = project_parts(u, basis, tol)?;
    let values = match im {
        Some(im) => re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect(),
        None => re.iter().map(|a| Complex64::new(*a, 0.0)).collect(),
    };
    ComplexCoeffs::new(*basis, values)
}

/// `‖u − Σ c_n φ_n‖` by adaptive quadrature of the pointwise residual.
///
/// The residual is a difference of much larger terms, so its square carries
/// relative rounding noise that a 1e-10 target cannot beat once the error
/// is small against `u`. In that case the target drops to 1e-7 on the
/// squared norm (about 5e-8 on the norm) before giving up.
pub fn residual_norm(u: &TestFunction, coeffs: &ComplexCoeffs, tol: f64) -> Result<f64> {
    let basis = *coeffs.basis();
    let (x, breaks) = window(u, &basis);
    let mut phi = vec![0.0; basis.len()];
    let c = coeffs.values();
    let mut attempt = |rel: f64| {
        let q = Integrator::new((tol * tol).max(1e-300), rel).with_max_panels(200_000);
        integrate_line(&q, 1, x, &breaks, |t, out| {
            basis.eval_into(t, &mut phi);
            let s: Complex64 = phi.iter().zip(c).map(|(p, c)| c * *p).sum();
            out[0] = (u.eval_complex(t) - s).norm_sqr();
        })
    };
    let v = match attempt(1e-10) {
        Err(Error::Accuracy { .. }) => attempt(1e-7)?,
        other => other?,
    };
    Ok(v[0].max(0.0).sqrt())
}

/// `‖u − Π̂_N^β u‖`.
pub fn projection_error(u: &TestFunction, basis: &ScaledBasis, tol: f64) -> Result<f64> {
    let c = project_complex(u, basis, tol)?;
    residual_norm(u, &c, tol)
}

/// `Î_N^β u`: the member of the space matching `u` (its real part) at the
/// scaled nodes `x_j / β`.
pub fn interpolate(u: &TestFunction, basis: &ScaledBasis, grid: &CollocationGrid) -> Result<SpectralCoeffs> {
    if grid.n_max() != basis.n_max() {
        return Err(Error::InvalidArgument("grid and basis sizes differ"));
    }
    let values: Vec<f64> = grid.scaled_nodes(basis.beta()).iter().map(|x| u.eval(*x)).collect();
    analysis(grid, &values, basis.beta())
}

/// Components of the truncation indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBreakdown {
    pub spatial: f64,
    pub frequency: f64,
    pub hermite: f64,
    pub total: f64,
}

impl ErrorBreakdown {
    fn new(spatial: f64, frequency: f64, hermite: f64) -> Self {
        Self {
            spatial,
            frequency,
            hermite,
            total: spatial + frequency + hermite,
        }
    }
}

/// Spatial cutoff `√N / (2√2 β)`.
pub fn spatial_cutoff(n_max: usize, beta: f64) -> f64 {
    CUTOFF_A * (n_max as f64).sqrt() / beta
}

/// Frequency cutoff `√N β / (2√2)`.
pub fn frequency_cutoff(n_max: usize, beta: f64) -> f64 {
    CUTOFF_B * (n_max as f64).sqrt() * beta
}

/// Spatial tail, frequency tail and `‖u‖e^{-N/16}` for the given basis.
pub fn error_breakdown(u: &TestFunction, basis: &ScaledBasis) -> Result<ErrorBreakdown> {
    let (n, beta) = (basis.n_max(), basis.beta());
    let spatial = u.spatial_tail(spatial_cutoff(n, beta))?;
    let frequency = u.frequency_tail(frequency_cutoff(n, beta))?;
    let hermite = u.l2_norm() * (-HERMITE_RATE * n as f64).exp();
    Ok(ErrorBreakdown::new(spatial, frequency, hermite))
}

/// Derivative-level indicator.
///
/// * level 0: `E(u)`
/// * level 1: `E(∂u) + β√N E(u)`
/// * level 2: `E(∂²u) + β E(∂u) + β²N E(u)`
///
/// `derivatives[0]` is `∂u`, `derivatives[1]` is `∂²u`.
pub fn indicator_sum(u: &TestFunction, derivatives: &[TestFunction], basis: &ScaledBasis, level: u8) -> Result<f64> {
    if level > 2 {
        return Err(Error::InvalidArgument("indicator level must be 0, 1 or 2"));
    }
    if derivatives.len() < level as usize {
        return Err(Error::InvalidArgument("missing derivative for the requested level"));
    }
    let (n, beta) = (basis.n_max() as f64, basis.beta());
    let e0 = error_breakdown(u, basis)?.total;
    Ok(match level {
        0 => e0,
        1 => error_breakdown(&derivatives[0], basis)?.total + beta * n.sqrt() * e0,
        _ => {
            let e1 = error_breakdown(&derivatives[0], basis)?.total;
            let e2 = error_breakdown(&derivatives[1], basis)?.total;
            e2 + beta * e1 + beta * beta * n * e0
        }
    })
}

/// Balanced scaling factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Balance {
    pub beta: f64,
    /// One tail underflowed to zero, so `beta` is clamped rather than a root.
    pub saturated: bool,
}

/// β equating the spatial and frequency tails for degree `n_max`, by
/// bisection in `ln β` on `ln E_s − ln E_f` (non-decreasing in β).
pub fn balance_scaling(u: &TestFunction, n_max: usize, bracket: (f64, f64)) -> Result<Balance> {
    let (lo, hi) = bracket;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidArgument("scaling bracket must satisfy 0 < lo < hi"));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("balancing needs n_max >= 1"));
    }
    let gap = |log_beta: f64| -> Result<f64> {
        let beta = log_beta.exp();
        let s = u.spatial_tail(spatial_cutoff(n_max, beta))?;
        let f = u.frequency_tail(frequency_cutoff(n_max, beta))?;
        Ok(match (s > 0.0, f > 0.0) {
            (true, true) => s.ln() - f.ln(),
            (false, true) => f64::NEG_INFINITY,
            (true, false) => f64::INFINITY,
            (false, false) => f64::NAN,
        })
    };
    let (a, b) = (lo.ln(), hi.ln());
    let (ga, gb) = (gap(a)?, gap(b)?);
    if ga.is_nan() || gb.is_nan() {
        return Err(Error::Degenerate("both tails vanish at a bracket endpoint"));
    }
    if ga > 0.0 && gb > 0.0 {
        if ga.is_infinite() {
            return Ok(Balance {
                beta: lo,
                saturated: true,
            });
        }
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: ga,
            f_hi: gb,
        });
    }
    if ga < 0.0 && gb < 0.0 {
        if gb.is_infinite() {
            return Ok(Balance {
                beta: hi,
                saturated: true,
            });
        }
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: ga,
            f_hi: gb,
        });
    }
    let root = bisect(gap, a, b, 1e-15, 1e-6)?;
    let g = gap(root)?;
    Ok(Balance {
        beta: root.exp(),
        saturated: !(g.abs() < 1e-6),
    })
}

/// Root of `f(X) = ‖u·1_{|x|>X}‖ − ‖F[u]·1_{|k|>X}‖` in the collocation
/// half-width `X = √(2N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// `X*`
    pub cutoff: f64,
    /// `N* = X*² / 2`
    pub n: f64,
}

/// Solves `f(X) = 0` on `bracket` (values of `X`) by bisection to
/// `|ΔN| < 1e-3`. Self-dual inputs, where `|f| < 1e-12` across the whole
/// bracket, are rejected as degenerate.
pub fn transition_point(u: &TestFunction, bracket: (f64, f64)) -> Result<Transition> {
    let (lo, hi) = bracket;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidArgument("transition bracket must satisfy 0 < lo < hi"));
    }
    let f = |x: f64| -> Result<f64> { Ok(u.spatial_tail(x)? - u.frequency_tail(x)?) };
    let mut flat = true;
    for j in 0..=32 {
        let x = lo + (hi - lo) * j as f64 / 32.0;
        if f(x)?.abs() >= 1e-12 {
            flat = false;
            break;
        }
    }
    if flat {
        return Err(Error::Degenerate("spatial and frequency tails coincide on the bracket"));
    }
    // ΔN = X ΔX, so ΔX < 1e-3 / X_hi suffices.
    let x = bisect(f, lo, hi, 1e-3 / hi, 0.0)?;
    Ok(Transition {
        cutoff: x,
        n: 0.5 * x * x,
    })
}
