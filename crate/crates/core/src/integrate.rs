//! Adaptive Gauss-Kronrod quadrature.
//!
//! Every routine here is built on the 21-point Kronrod extension of the
//! 10-point Gauss-Legendre rule. Integration is globally adaptive: the panel
//! with the largest error estimate is bisected until every component of the
//! (possibly vector-valued) integral meets `max(abs_tol, rel_tol * |I|)`, or
//! until every remaining panel is limited by rounding alone.
//! Semi-infinite ranges are mapped onto `[0, 1)` with `x = a + t / (1 - t)`.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

// Kronrod abscissae; odd entries are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_977_211_494,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const SCRATCH_PER_DIM: usize = 23;

/// Number of integrand evaluations per panel.
pub const POINTS_PER_PANEL: usize = 21;

/// Value and absolute error estimate of a scalar integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Tolerances and budget of the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of live panels before giving up.
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_panels: 20_000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    // max component error, heap key
    key: f64,
    // offset into the value/error arenas
    slot: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.key.total_cmp(&other.key) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key)
    }
}

/// Applies the 21-point Kronrod rule on `[a, b]` to a vector integrand.
///
/// `f(x, out)` must fill `out` (length `dim`). Results go to `value`/`error`;
/// `scratch` needs `SCRATCH_PER_DIM * dim` entries. Returns true when every
/// component's error sits at the rounding floor, so splitting cannot help.
fn kronrod_panel<F>(f: &mut F, a: f64, b: f64, value: &mut [f64], error: &mut [f64], scratch: &mut [f64]) -> bool
where
    F: FnMut(f64, &mut [f64]),
{
    let dim = value.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (fx, rest) = scratch.split_at_mut(dim);
    let (gauss, rest) = rest.split_at_mut(dim);
    let (abs_sum, samples) = rest.split_at_mut(dim);

    f(center, fx);
    for i in 0..dim {
        value[i] = WGK[10] * fx[i];
        gauss[i] = 0.0;
        abs_sum[i] = WGK[10] * fx[i].abs();
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let (lo, hi) = samples[2 * j * dim..(2 * j + 2) * dim].split_at_mut(dim);
        f(center - dx, lo);
        f(center + dx, hi);
        for i in 0..dim {
            let pair = lo[i] + hi[i];
            value[i] += WGK[j] * pair;
            abs_sum[i] += WGK[j] * (lo[i].abs() + hi[i].abs());
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * pair;
            }
        }
    }
    let mut settled = true;
    for i in 0..dim {
        let mean = 0.5 * value[i];
        let mut asc = WGK[10] * (fx[i] - mean).abs();
        for j in 0..10 {
            let lo = samples[2 * j * dim + i];
            let hi = samples[(2 * j + 1) * dim + i];
            asc += WGK[j] * ((lo - mean).abs() + (hi - mean).abs());
        }
        let res = value[i] * half;
        let resabs = abs_sum[i] * half.abs();
        let resasc = asc * half.abs();
        let mut err = ((value[i] - gauss[i]) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        let floor = 50.0 * f64::EPSILON * resabs;
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(floor);
        }
        if err > floor {
            settled = false;
        }
        value[i] = res;
        error[i] = err;
    }
    settled
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    /// Integrates a vector-valued function over consecutive panels given by
    /// `breaks` (strictly increasing, at least two points).
    ///
    /// Returns per-component values and error estimates.
    pub fn integrate_vec<F>(&self, dim: usize, breaks: &[f64], mut f: F) -> Result<(Vec<f64>, Vec<f64>)>
    where
        F: FnMut(f64, &mut [f64]),
    {
        if breaks.len() < 2 {
            return Err(Error::InvalidArgument("at least two break points are required"));
        }
        if dim == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let mut values: Vec<f64> = Vec::new();
        let mut errors: Vec<f64> = Vec::new();
        let mut free: Vec<usize> = Vec::new();
        let mut heap = BinaryHeap::new();
        let mut total = vec![0.0; dim];
        let mut total_err = vec![0.0; dim];
        let mut scratch = vec![0.0; SCRATCH_PER_DIM * dim];
        let mut val = vec![0.0; dim];
        let mut err = vec![0.0; dim];

        // panels whose error is pure rounding never return to the heap
        let mut settled: Vec<usize> = Vec::new();
        let push = |a: f64,
                    b: f64,
                    at_floor: bool,
                    val: &[f64],
                    err: &[f64],
                    values: &mut Vec<f64>,
                    errors: &mut Vec<f64>,
                    free: &mut Vec<usize>,
                    heap: &mut BinaryHeap<Panel>,
                    settled: &mut Vec<usize>| {
            let slot = match free.pop() {
                Some(s) => s,
                None => {
                    values.extend_from_slice(val);
                    errors.extend_from_slice(err);
                    values.len() / dim - 1
                }
            };
            values[slot * dim..(slot + 1) * dim].copy_from_slice(val);
            errors[slot * dim..(slot + 1) * dim].copy_from_slice(err);
            if at_floor {
                settled.push(slot);
                return;
            }
            let key = err.iter().fold(0.0_f64, |m, &e| m.max(e));
            heap.push(Panel { a, b, key, slot });
        };

        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                return Err(Error::InvalidArgument("break points must be strictly increasing"));
            }
            let at_floor = kronrod_panel(&mut f, a, b, &mut val, &mut err, &mut scratch);
            for i in 0..dim {
                total[i] += val[i];
                total_err[i] += err[i];
            }
            push(
                a,
                b,
                at_floor,
                &val,
                &err,
                &mut values,
                &mut errors,
                &mut free,
                &mut heap,
                &mut settled,
            );
        }

        let converged = |total: &[f64], total_err: &[f64]| {
            total
                .iter()
                .zip(total_err)
                .all(|(t, e)| *e <= self.abs_tol.max(self.rel_tol * t.abs()))
        };

        let mut left_val = vec![0.0; dim];
        let mut left_err = vec![0.0; dim];
        while !converged(&total, &total_err) {
            if heap.len() + settled.len() >= self.max_panels {
                let worst = total_err
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                return Err(Error::Accuracy {
                    what: "adaptive quadrature",
                    estimate: total[worst],
                    error: total_err[worst],
                });
            }
            let panel = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            let mid = 0.5 * (panel.a + panel.b);
            if !(mid > panel.a && mid < panel.b) {
                // Panel cannot be split further in floating point.
                return Err(Error::Accuracy {
                    what: "adaptive quadrature (panel collapsed)",
                    estimate: total[0],
                    error: total_err[0],
                });
            }
            let s = panel.slot;
            for i in 0..dim {
                total[i] -= values[s * dim + i];
                total_err[i] -= errors[s * dim + i];
            }
            free.push(s);
            let left_floor = kronrod_panel(&mut f, panel.a, mid, &mut left_val, &mut left_err, &mut scratch);
            let right_floor = kronrod_panel(&mut f, mid, panel.b, &mut val, &mut err, &mut scratch);
            for i in 0..dim {
                total[i] += left_val[i] + val[i];
                total_err[i] += left_err[i] + err[i];
            }
            push(
                panel.a,
                mid,
                left_floor,
                &left_val,
                &left_err,
                &mut values,
                &mut errors,
                &mut free,
                &mut heap,
                &mut settled,
            );
            push(
                mid,
                panel.b,
                right_floor,
                &val,
                &err,
                &mut values,
                &mut errors,
                &mut free,
                &mut heap,
                &mut settled,
            );
        }
        // Re-sum from the live panels to shed accumulated cancellation.
        let mut sum = vec![0.0; dim];
        let mut sum_err = vec![0.0; dim];
        for slot in heap.iter().map(|p| p.slot).chain(settled.iter().copied()) {
            for i in 0..dim {
                sum[i] += values[slot * dim + i];
                sum_err[i] += errors[slot * dim + i];
            }
        }
        Ok((sum, sum_err))
    }

    /// Scalar integral over consecutive panels given by `breaks`.
    pub fn integrate_breaks<F>(&self, breaks: &[f64], mut f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> f64,
    {
        let (v, e) = self.integrate_vec(1, breaks, |x, out| out[0] = f(x))?;
        Ok(Estimate {
            value: v[0],
            error: e[0],
        })
    }

    /// Scalar integral over `[a, b]`.
    pub fn integrate<F>(&self, a: f64, b: f64, f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> f64,
    {
        if a == b {
            return Ok(Estimate { value: 0.0, error: 0.0 });
        }
        if b < a {
            let r = self.integrate_breaks(&[b, a], f)?;
            return Ok(Estimate {
                value: -r.value,
                error: r.error,
            });
        }
        self.integrate_breaks(&[a, b], f)
    }

    /// Vector integral over `[a, ∞)` through `x = a + t / (1 - t)`.
    ///
    /// `t_breaks` gives an initial subdivision of `[0, 1]` and must start at 0
    /// and end at 1.
    pub fn integrate_vec_to_infinity<F>(
        &self,
        dim: usize,
        a: f64,
        t_breaks: &[f64],
        mut f: F,
    ) -> Result<(Vec<f64>, Vec<f64>)>
    where
        F: FnMut(f64, &mut [f64]),
    {
        self.integrate_vec(dim, t_breaks, |t, out| {
            let s = 1.0 - t;
            let x = a + t / s;
            f(x, out);
            let jac = 1.0 / (s * s);
            for o in out.iter_mut() {
                // 0 * inf guard at the far end of the map
                *o = if *o == 0.0 { 0.0 } else { *o * jac };
            }
        })
    }

    /// Scalar integral over `[a, ∞)`.
    pub fn integrate_to_infinity<F>(&self, a: f64, mut f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> f64,
    {
        let (v, e) = self.integrate_vec_to_infinity(1, a, &uniform_breaks(0.0, 1.0, 8), |x, out| out[0] = f(x))?;
        Ok(Estimate {
            value: v[0],
            error: e[0],
        })
    }
}

/// `n + 1` equispaced break points on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut v: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    v.push(b);
    v
}

/// Limit of a slowly converging sequence by Wynn's epsilon algorithm.
///
/// Returns the extrapolated value and the size of its last correction. With
/// fewer than three terms the last partial sum is returned unchanged.
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    if n < 3 {
        let last = partial_sums.last().copied().unwrap_or(0.0);
        let prev = if n == 2 { partial_sums[0] } else { 0.0 };
        return (last, (last - prev).abs());
    }
    // eps_{-1} = 0, eps_0 = s; columns with even index approximate the limit.
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = partial_sums[n - 1];
    let mut best_delta = (partial_sums[n - 1] - partial_sums[n - 2]).abs();
    let mut column = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            if diff == 0.0 || !diff.is_finite() {
                return (best, best_delta);
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        column += 1;
        if column.is_multiple_of(2) {
            let m = next.len();
            let last = next[m - 1];
            if !last.is_finite() {
                break;
            }
            let delta = if m >= 2 { (last - next[m - 2]).abs() } else { best_delta };
            best = last;
            best_delta = delta;
        }
        prev = cur;
        cur = next;
    }
    (best, best_delta)
}
