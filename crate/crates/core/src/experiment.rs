//! Convergence sweeps: scaling schedules, error measures, order fits and
//! slope-change detection. IO lives in the CLI crate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::basis::ScaledBasis;
use crate::error::{Error, Result};
use crate::fourier::TestFunction;
use crate::galerkin::{nodal_error, solution_error, solve, ModelProblem};
use crate::operators::{error_breakdown, projection_error, ErrorBreakdown};
use crate::quadrature::compute_grid;
use crate::roots::bisect;

/// Errors at or below this level are treated as rounding noise by the fits.
pub const ERROR_FLOOR: f64 = 1e-12;

/// A catalog function by name and parameters, e.g. `algebraic:h=1.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionSpec {
    GaussianPower { n: u32 },
    Algebraic { h: f64 },
    Gaussian { k: f64, s: f64 },
    PlainGaussian { sigma: f64 },
}

impl FunctionSpec {
    pub fn build(&self) -> Result<TestFunction> {
        match *self {
            Self::GaussianPower { n } => TestFunction::gaussian_power(n),
            Self::Algebraic { h } => TestFunction::algebraic(h),
            Self::Gaussian { k, s } => TestFunction::gaussian(k, s),
            Self::PlainGaussian { sigma } => TestFunction::plain_gaussian(sigma),
        }
    }

    /// `h` for the algebraic family.
    pub fn algebraic_order(&self) -> Option<f64> {
        match *self {
            Self::Algebraic { h } => Some(h),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GaussianPower { n } => write!(f, "gaussian_power:n={n}"),
            Self::Algebraic { h } => write!(f, "algebraic:h={h}"),
            Self::Gaussian { k, s } => write!(f, "gaussian:k={k},s={s}"),
            Self::PlainGaussian { sigma } => write!(f, "plain_gaussian:sigma={sigma}"),
        }
    }
}

fn param(params: &str, key: &str) -> Result<f64> {
    for item in params.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or(Error::InvalidArgument("parameters must be key=value"))?;
        if k.trim() == key {
            return v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument("parameter is not a number"));
        }
    }
    Err(Error::InvalidArgument("missing function parameter"))
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        match name {
            "gaussian_power" => {
                let n = param(params, "n")?;
                if n.fract() != 0.0 || !(1.0..=16.0).contains(&n) {
                    return Err(Error::InvalidArgument("gaussian_power needs integer n in 1..=16"));
                }
                Ok(Self::GaussianPower { n: n as u32 })
            }
            "algebraic" => Ok(Self::Algebraic { h: param(params, "h")? }),
            "gaussian" => Ok(Self::Gaussian {
                k: param(params, "k")?,
                s: param(params, "s")?,
            }),
            "plain_gaussian" => Ok(Self::PlainGaussian {
                sigma: param(params, "sigma")?,
            }),
            _ => Err(Error::InvalidArgument("unknown catalog function")),
        }
    }
}

/// Scaling factor as a function of `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `β = c`
    Constant(f64),
    /// `β = c N^p`
    Power { c: f64, p: f64 },
    /// `β = c / √N`
    LogSqrt(f64),
    /// `β = c h ln N / √N`, algebraic inputs only
    HLog(f64),
}

impl Schedule {
    pub fn beta(&self, n: usize, h: Option<f64>) -> Result<f64> {
        let nf = n as f64;
        let beta = match *self {
            Self::Constant(c) => c,
            Self::Power { c, p } => c * nf.powf(p),
            Self::LogSqrt(c) => c / nf.sqrt(),
            Self::HLog(c) => {
                let h = h.ok_or(Error::InvalidArgument("hlog schedule needs an algebraic function"))?;
                c * h * nf.ln() / nf.sqrt()
            }
        };
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument("schedule produced a non-positive beta"));
        }
        Ok(beta)
    }

    fn params_positive(&self) -> bool {
        match *self {
            Self::Constant(c) | Self::LogSqrt(c) | Self::HLog(c) => c > 0.0 && c.is_finite(),
            Self::Power { c, p } => c > 0.0 && c.is_finite() && p.is_finite(),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "constant({c})"),
            Self::Power { c, p } => write!(f, "power({c},{p})"),
            Self::LogSqrt(c) => write!(f, "logsqrt({c})"),
            Self::HLog(c) => write!(f, "hlog({c})"),
        }
    }
}

// "name(a,b)" -> ("name", [a, b])
fn call_syntax(s: &str) -> Result<(&str, Vec<f64>)> {
    let s = s.trim();
    let Some((name, rest)) = s.split_once('(') else {
        return Ok((s, Vec::new()));
    };
    let inner = rest
        .strip_suffix(')')
        .ok_or(Error::InvalidArgument("missing closing parenthesis"))?;
    let mut args = Vec::new();
    for a in inner.split(',') {
        args.push(parse_number(a)?);
    }
    Ok((name.trim(), args))
}

// accepts plain numbers and simple fractions such as 3/8
fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = Error::InvalidArgument("not a number");
    if let Some((a, b)) = s.split_once('/') {
        let a: f64 = a.trim().parse().map_err(|_| bad.clone())?;
        let b: f64 = b.trim().parse().map_err(|_| bad.clone())?;
        return Ok(a / b);
    }
    s.parse().map_err(|_| bad)
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = call_syntax(s)?;
        let sched = match (name, args.as_slice()) {
            ("constant", [c]) => Self::Constant(*c),
            ("power", [c, p]) => Self::Power { c: *c, p: *p },
            ("logsqrt", [c]) => Self::LogSqrt(*c),
            ("hlog", [c]) => Self::HLog(*c),
            _ => return Err(Error::InvalidArgument("unknown schedule")),
        };
        if !sched.params_positive() {
            return Err(Error::InvalidArgument("schedule parameters must be positive"));
        }
        Ok(sched)
    }
}

/// What a sweep measures at each `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `‖u − u_N‖` of the Galerkin solution, by quadrature
    L2Solution,
    /// Discrete L² error of the Galerkin solution at the scaled nodes
    L2Nodal,
    /// `‖u − Π̂_N^β u‖`
    L2Projection,
    /// H¹ error of the Galerkin solution
    H1Solution,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::L2Solution => "l2_solution",
            Self::L2Nodal => "l2_nodal",
            Self::L2Projection => "l2_projection",
            Self::H1Solution => "h1_solution",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "l2_solution" => Ok(Self::L2Solution),
            "l2_nodal" => Ok(Self::L2Nodal),
            "l2_projection" => Ok(Self::L2Projection),
            "h1_solution" => Ok(Self::H1Solution),
            _ => Err(Error::InvalidArgument("unknown measure")),
        }
    }
}

/// Parses `200:400:20` (inclusive range with step) or `32,64,128`.
pub fn parse_n_values(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let bad = || Error::InvalidArgument("N list must be `a,b,c` or `start:stop:step`");
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let start: usize = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: usize = parts[1].trim().parse().map_err(|_| bad())?;
        let step: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if step == 0 {
            return Err(bad());
        }
        return Ok((start..=stop).step_by(step).collect());
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    s.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

/// Comma-separated form accepted by [`parse_n_values`].
pub fn format_n_values(n: &[usize]) -> String {
    let mut out = String::new();
    for (i, v) in n.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{v}"));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub function: FunctionSpec,
    pub gamma: f64,
    pub n_values: Vec<usize>,
    pub schedule: Schedule,
    pub measure: Measure,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::InvalidArgument("at least one N is required"));
        }
        if self.n_values.iter().any(|n| *n < 2) {
            return Err(Error::InvalidArgument("every N must be >= 2"));
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("N values must be strictly increasing"));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidArgument("gamma must be positive"));
        }
        if !self.schedule.params_positive() {
            return Err(Error::InvalidArgument("schedule parameters must be positive"));
        }
        if matches!(self.schedule, Schedule::HLog(_)) && self.function.algebraic_order().is_none() {
            return Err(Error::InvalidArgument("hlog schedule needs an algebraic function"));
        }
        Ok(())
    }
}

/// One sweep point. A failed point keeps `error = NaN` and the cause.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub beta: f64,
    pub error: f64,
    pub breakdown: ErrorBreakdown,
    pub failure: Option<Error>,
}

fn measure_error(config: &SweepConfig, u: &TestFunction, basis: &ScaledBasis) -> Result<f64> {
    if config.measure == Measure::L2Projection {
        return projection_error(u, basis, 1e-12);
    }
    let grid = compute_grid(basis.n_max())?;
    let problem = ModelProblem::manufactured(u.clone(), config.gamma)?;
    let c = solve(&problem, basis, &grid)?;
    match config.measure {
        Measure::L2Solution => Ok(solution_error(&c, u)?.l2),
        Measure::H1Solution => Ok(solution_error(&c, u)?.h1),
        Measure::L2Nodal => nodal_error(&c, u, &grid),
        Measure::L2Projection => unreachable!(),
    }
}

/// Evaluates a single `N` of a sweep; `u` is `config.function` built once.
pub fn run_point(config: &SweepConfig, u: &TestFunction, n: usize) -> ConvergenceRecord {
    let nan = ErrorBreakdown {
        spatial: f64::NAN,
        frequency: f64::NAN,
        hermite: f64::NAN,
        total: f64::NAN,
    };
    let beta = match config.schedule.beta(n, config.function.algebraic_order()) {
        Ok(b) => b,
        Err(e) => {
            return ConvergenceRecord {
                n,
                beta: f64::NAN,
                error: f64::NAN,
                breakdown: nan,
                failure: Some(e),
            }
        }
    };
    let outcome = ScaledBasis::new(n, beta).and_then(|basis| {
        let breakdown = error_breakdown(u, &basis)?;
        let error = measure_error(config, u, &basis)?;
        Ok((error, breakdown))
    });
    match outcome {
        Ok((error, breakdown)) => ConvergenceRecord {
            n,
            beta,
            error,
            breakdown,
            failure: None,
        },
        Err(e) => ConvergenceRecord {
            n,
            beta,
            error: f64::NAN,
            breakdown: nan,
            failure: Some(e),
        },
    }
}

/// Runs every `N` in order. Point failures are recorded, not propagated.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ConvergenceRecord>> {
    config.validate()?;
    let u = config.function.build()?;
    Ok(config.n_values.iter().map(|&n| run_point(config, &u, n)).collect())
}

/// Convergence model for [`fit_order`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitModel {
    /// `e ~ N^{-rate}`
    Algebraic,
    /// `e ~ exp(-rate N^γ)`
    ExpPower(f64),
}

impl FitModel {
    fn abscissa(&self, n: f64) -> f64 {
        match *self {
            Self::Algebraic => n.ln(),
            Self::ExpPower(g) => n.powf(g),
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Algebraic => f.write_str("algebraic"),
            Self::ExpPower(g) => write!(f, "exp_power({g})"),
        }
    }
}

impl FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match call_syntax(s)? {
            ("algebraic", a) if a.is_empty() => Ok(Self::Algebraic),
            ("exp_power", a) if a.len() == 1 && a[0] > 0.0 => Ok(Self::ExpPower(a[0])),
            _ => Err(Error::InvalidArgument("model must be algebraic or exp_power(g)")),
        }
    }
}

/// Least-squares fit `ln e = intercept − rate · x(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub rate: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Points used after dropping failed and floor-level errors.
    pub points: usize,
}

impl Fit {
    /// Fitted `ln e` at `N`.
    pub fn predict_log(&self, model: FitModel, n: f64) -> f64 {
        self.intercept - self.rate * model.abscissa(n)
    }
}

fn usable(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    points
        .iter()
        .copied()
        .filter(|(n, e)| *n > 0.0 && e.is_finite() && *e > ERROR_FLOOR)
        .collect()
}

fn least_squares(model: FitModel, pts: &[(f64, f64)]) -> Result<(Fit, f64)> {
    if pts.len() < 4 {
        return Err(Error::InvalidArgument(
            "at least four usable points are needed for a fit",
        ));
    }
    regress(model, pts)
}

// ordinary least squares of ln e against x(N); returns the fit and its SSR
fn regress(model: FitModel, pts: &[(f64, f64)]) -> Result<(Fit, f64)> {
    let m = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|(n, _)| model.abscissa(*n)).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, e)| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("fit abscissae must not all coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok((
        Fit {
            rate: -slope,
            intercept,
            r2,
            points: pts.len(),
        },
        ssr,
    ))
}

/// Fits `(N, error)` pairs; errors that are non-finite or `<= ERROR_FLOOR`
/// are dropped and at least four must remain.
pub fn fit_order(points: &[(f64, f64)], model: FitModel) -> Result<Fit> {
    Ok(least_squares(model, &usable(points))?.0)
}

/// [`fit_order`] on sweep records.
pub fn fit_records(records: &[ConvergenceRecord], model: FitModel) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.error)).collect();
    fit_order(&pts, model)
}

/// Two-segment fit: `exp_power(1/2)` on small `N`, algebraic on large `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeChange {
    /// First `N` of the algebraic segment.
    pub split_n: f64,
    /// Crossing of the two fitted curves near the split, when it exists.
    pub intersection: Option<f64>,
    pub early: Fit,
    pub late: Fit,
}

impl SlopeChange {
    pub const EARLY: FitModel = FitModel::ExpPower(0.5);
    pub const LATE: FitModel = FitModel::Algebraic;

    /// Intersection if found, otherwise the split.
    pub fn location(&self) -> f64 {
        self.intersection.unwrap_or(self.split_n)
    }
}

/// Chooses the split minimizing the total squared residual (at least three
/// points per segment) and intersects the fitted curves near it.
pub fn detect_slope_change(points: &[(f64, f64)]) -> Result<SlopeChange> {
    let mut pts = usable(points);
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 6 {
        return Err(Error::InvalidArgument(
            "slope-change detection needs at least six usable points",
        ));
    }
    let mut best: Option<(f64, usize, Fit, Fit)> = None;
    for k in 3..=pts.len() - 3 {
        let early = regress(SlopeChange::EARLY, &pts[..k])?;
        let late = regress(SlopeChange::LATE, &pts[k..])?;
        let ssr = early.1 + late.1;
        if best.as_ref().is_none_or(|b| ssr < b.0) {
            best = Some((ssr, k, early.0, late.0));
        }
    }
    let (_, k, early, late) = best.expect("at least one split");
    let gap = |n: f64| -> Result<f64> {
        Ok(early.predict_log(SlopeChange::EARLY, n) - late.predict_log(SlopeChange::LATE, n))
    };
    let lo = pts[k.saturating_sub(3)].0;
    let hi = pts[(k + 2).min(pts.len() - 1)].0;
    let intersection = bisect(gap, lo, hi, 1e-9 * hi, 0.0).ok();
    Ok(SlopeChange {
        split_n: pts[k].0,
        intersection,
        early,
        late,
    })
}
