//! Bracketed bisection.

use crate::error::{Error, Result};

/// Root of `f` on `[lo, hi]` by bisection.
///
/// Stops when the bracket is narrower than `x_tol` or `|f(mid)| <= f_tol`.
/// `f` may return `±∞`; only its sign is used. A bracket without a sign
/// change is reported with both endpoint values.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, x_tol: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument("bisection needs a finite bracket lo < hi"));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Domain("function is NaN at a bracket endpoint"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let sign_a = fa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= x_tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm.is_nan() {
            return Err(Error::Domain("function is NaN inside the bracket"));
        }
        if fm.abs() <= f_tol {
            return Ok(mid);
        }
        if fm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
