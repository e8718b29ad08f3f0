//! Globally adaptive Gauss–Kronrod quadrature on finite and (semi-)infinite
//! intervals, a cosine-weighted tail integrator accelerated by Wynn's epsilon
//! algorithm, and Gauss–Legendre rules.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use libm::{cos, fabs};

use crate::error::{Error, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 20_000;

/// Tolerances, budget and forced breakpoints for one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of live subintervals.
    pub max_subdivisions: usize,
    /// Sorted, finite breakpoints. The integrator never places an interval
    /// across one of these.
    pub split_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: DEFAULT_REL_TOL,
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
            split_points: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    /// Replaces the breakpoints, sorting them and dropping duplicates and
    /// non-finite entries.
    pub fn with_splits<I: IntoIterator<Item = f64>>(mut self, points: I) -> Self {
        let mut pts: Vec<f64> = points.into_iter().filter(|p| p.is_finite()).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        self.split_points = pts;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("max_subdivisions must be positive"));
        }
        if self.split_points.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("split points must be sorted"));
        }
        Ok(())
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * fabs(value))
    }
}

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl Estimate {
    fn zero() -> Self {
        Self { value: 0.0, error: 0.0, evaluations: 0 }
    }
}

/// How a segment parameter `t` maps onto the real line.
#[derive(Debug, Clone, Copy)]
enum Chart {
    Plain,
    /// `x = a + (1 - t) / t`, `t` in (0, 1], covering `[a, inf)`.
    Above(f64),
    /// `x = b - (1 - t) / t`, covering `(-inf, b]`.
    Below(f64),
}

impl Chart {
    #[inline]
    fn eval<F: Fn(f64) -> f64>(self, f: &F, t: f64) -> f64 {
        match self {
            Chart::Plain => f(t),
            Chart::Above(a) => {
                let x = a + (1.0 - t) / t;
                if x.is_finite() { f(x) / (t * t) } else { 0.0 }
            }
            Chart::Below(b) => {
                let x = b - (1.0 - t) / t;
                if x.is_finite() { f(x) / (t * t) } else { 0.0 }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    chart: Chart,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod rule with the embedded 10-point Gauss rule; error
/// estimate scaled as in QUADPACK.
// Index layout follows QUADPACK.
#[allow(clippy::needless_range_loop)]
fn gk21<F: Fn(f64) -> f64>(f: &F, chart: Chart, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = chart.eval(f, center);

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = fabs(res_kronrod);

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = chart.eval(f, center - dx);
        let f2 = chart.eval(f, center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (fabs(f1) + fabs(f2));
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = chart.eval(f, center - dx);
        let f2 = chart.eval(f, center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (fabs(f1) + fabs(f2));
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * fabs(f_center - mean);
    for j in 0..10 {
        res_asc += WGK[j] * (fabs(fv1[j] - mean) + fabs(fv2[j] - mean));
    }

    let width = fabs(half);
    let value = res_kronrod * half;
    res_abs *= width;
    res_asc *= width;

    let mut error = fabs((res_kronrod - res_gauss) * half);
    if res_asc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / res_asc, 1.5);
        error = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }

    Segment { lo, hi, chart, value, error }
}

const GK21_EVALS: usize = 21;

/// Integrates `f` over `(lo, hi)`; either bound may be infinite. Breakpoints
/// from `spec` that fall strictly inside the interval are honoured.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::InvalidParameter("integration bounds must not be NaN"));
    }
    if lo == hi {
        return Ok(Estimate::zero());
    }
    if lo > hi {
        let est = integrate_interval(f, hi, lo, spec)?;
        return Ok(Estimate { value: -est.value, ..est });
    }

    let mut points: Vec<f64> = spec
        .split_points
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    if lo.is_finite() {
        points.insert(0, lo);
    }
    if hi.is_finite() {
        points.push(hi);
    }
    if points.is_empty() {
        points.push(0.0);
    }

    let mut initial = Vec::with_capacity(points.len() + 1);
    if lo == f64::NEG_INFINITY {
        initial.push((0.0, 1.0, Chart::Below(points[0])));
    }
    for w in points.windows(2) {
        initial.push((w[0], w[1], Chart::Plain));
    }
    if hi == f64::INFINITY {
        initial.push((0.0, 1.0, Chart::Above(points[points.len() - 1])));
    }
    adapt(&f, &initial, spec)
}

/// Integrates `f` over the whole real line.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_interval(f, f64::NEG_INFINITY, f64::INFINITY, spec)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    initial: &[(f64, f64, Chart)],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if initial.len() > spec.max_subdivisions {
        return Err(Error::InvalidParameter("more breakpoints than max_subdivisions"));
    }
    let mut heap = BinaryHeap::with_capacity(initial.len() * 2);
    let mut frozen: Vec<Segment> = Vec::new();
    let mut evaluations = 0usize;
    let mut value = 0.0;
    let mut error = 0.0;
    for &(lo, hi, chart) in initial {
        let seg = gk21(f, chart, lo, hi);
        evaluations += GK21_EVALS;
        value += seg.value;
        error += seg.error;
        heap.push(seg);
    }

    loop {
        if error <= spec.tolerance_for(value) {
            // Running sums drift; confirm with an exact recount.
            let (v, e) = heap
                .iter()
                .chain(frozen.iter())
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            value = v;
            error = e;
            if error <= spec.tolerance_for(value) {
                break;
            }
        }
        if heap.len() + frozen.len() >= spec.max_subdivisions {
            return Err(Error::NoConvergence {
                value,
                error,
                tolerance: spec.tolerance_for(value),
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NoConvergence {
                value,
                error,
                tolerance: spec.tolerance_for(value),
            });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        let too_narrow = !(mid > worst.lo && mid < worst.hi)
            || (worst.hi - worst.lo) <= 1e3 * f64::EPSILON * (fabs(worst.lo) + fabs(worst.hi));
        if too_narrow || !worst.error.is_finite() {
            if !worst.error.is_finite() {
                return Err(Error::NoConvergence {
                    value,
                    error,
                    tolerance: spec.tolerance_for(value),
                });
            }
            frozen.push(worst);
            continue;
        }
        let left = gk21(f, worst.chart, worst.lo, mid);
        let right = gk21(f, worst.chart, mid, worst.hi);
        evaluations += 2 * GK21_EVALS;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    Ok(Estimate { value, error, evaluations })
}

const MAX_CYCLES: usize = 4000;
const EPSILON_WINDOW: usize = 40;

/// `∫_start^∞ f(x) cos(freq (x − start)) dx` for a smooth, decaying `f`.
///
/// The integral is split at the zeros of the cosine into half-period cycles
/// whose contributions alternate in sign; the partial sums are extrapolated
/// with Wynn's epsilon algorithm.
pub fn integrate_cosine_tail<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    freq: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(freq > 0.0 && freq.is_finite() && start.is_finite()) {
        return Err(Error::InvalidParameter("cosine tail needs finite start and positive frequency"));
    }
    let half = PI / freq;
    let g = |x: f64| f(x) * cos(freq * (x - start));
    let local = QuadratureSpec {
        abs_tol: spec.abs_tol * 1e-2,
        rel_tol: spec.rel_tol * 1e-2,
        ..spec.clone()
    };

    // The first quarter period has no cancellation partner; integrate it on
    // its own so the cycles start at a cosine zero.
    let quarter = 0.5 * half;
    let mut total = integrate_interval(g, start, start + quarter, &local)?;
    let head = total.value;

    let mut sums: Vec<f64> = Vec::new();
    let mut running = 0.0;
    let mut estimates: Vec<(f64, f64)> = Vec::new();
    let mut small_streak = 0;

    for k in 0..MAX_CYCLES {
        let a = start + quarter + k as f64 * half;
        let cycle = integrate_interval(g, a, a + half, &local)?;
        total.error += cycle.error;
        total.evaluations += cycle.evaluations;
        running += cycle.value;
        sums.push(running);

        let scale = fabs(head + running);
        if fabs(cycle.value) <= 1e-3 * spec.tolerance_for(scale) {
            small_streak += 1;
            if small_streak >= 2 {
                total.value = head + running;
                return Ok(total);
            }
        } else {
            small_streak = 0;
        }

        if sums.len() >= 4 {
            let window = &sums[sums.len().saturating_sub(EPSILON_WINDOW)..];
            let (est, est_err) = wynn_epsilon(window);
            estimates.push((est, est_err));
            let n = estimates.len();
            if n >= 3 {
                let e0 = estimates[n - 1].0;
                let spread = fabs(e0 - estimates[n - 2].0) + fabs(e0 - estimates[n - 3].0);
                let err = spread.max(estimates[n - 1].1);
                if err <= spec.tolerance_for(head + e0) {
                    total.value = head + e0;
                    total.error += err;
                    return Ok(total);
                }
            }
        }
    }
    let value = head + running;
    Err(Error::NoConvergence { value, error: total.error, tolerance: spec.tolerance_for(value) })
}

/// Wynn's epsilon algorithm on a sequence of partial sums. Returns the best
/// estimate of the limit and the spread of its neighbours in the table.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (sums[0], f64::INFINITY),
        _ => {}
    }
    let mut best = sums[n - 1];
    let mut best_err = fabs(sums[n - 1] - sums[n - 2]);

    let mut prev: Vec<f64> = alloc::vec![0.0; n + 1];
    let mut curr: Vec<f64> = sums.to_vec();
    for k in 1..n {
        let len = curr.len() - 1;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let diff = curr[i + 1] - curr[i];
            if diff == 0.0 {
                // Exact stagnation: the sequence has converged.
                return (curr[i + 1], best_err.min(fabs(curr[i + 1] - best)));
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if k % 2 == 0 && next.len() >= 2 {
            let last = next[next.len() - 1];
            let err = fabs(last - next[next.len() - 2]);
            if err.is_finite() && err < best_err {
                best = last;
                best_err = err;
            }
        }
        prev = curr;
        curr = next;
        if curr.len() < 2 {
            break;
        }
    }
    (best, best_err)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if fabs(dx) <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{exp, sqrt};

    #[test]
    fn gaussian_normalization() {
        let spec = QuadratureSpec::default();
        let est = integrate_line(|x| exp(-0.5 * x * x) / sqrt(2.0 * PI), &spec).unwrap();
        assert!((est.value - 1.0).abs() < 1e-10, "{est:?}");
    }

    #[test]
    fn exponential_form_factor_integral() {
        let spec = QuadratureSpec::default().with_splits([0.0]);
        let est = integrate_line(|x| if x > 0.0 { x * exp(-x) } else { 0.0 }, &spec).unwrap();
        assert!((est.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let spec = QuadratureSpec::default();
        let fwd = integrate_interval(|x| x * x, 0.0, 2.0, &spec).unwrap();
        let back = integrate_interval(|x| x * x, 2.0, 0.0, &spec).unwrap();
        assert!((fwd.value - 8.0 / 3.0).abs() < 1e-12);
        assert_eq!(fwd.value, -back.value);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec { max_subdivisions: 3, ..QuadratureSpec::default() };
        let err = integrate_interval(|x| 1.0 / sqrt(x), 0.0, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn unsorted_splits_are_rejected() {
        let spec = QuadratureSpec { split_points: alloc::vec![1.0, 0.0], ..QuadratureSpec::default() };
        assert!(integrate_line(|x| exp(-x * x), &spec).is_err());
    }

    #[test]
    fn cosine_tail_of_exponential() {
        // ∫_0^∞ e^{-x} cos(ωx) dx = 1/(1+ω²)
        for &w in &[0.5, 3.0, 40.0, 400.0] {
            let est = integrate_cosine_tail(|x| exp(-x), 0.0, w, &QuadratureSpec::default()).unwrap();
            let exact = 1.0 / (1.0 + w * w);
            assert!((est.value - exact).abs() < 1e-9, "w={w}: {} vs {exact}", est.value);
        }
    }

    #[test]
    fn cosine_tail_of_slow_algebraic_decay() {
        // ∫_0^∞ cos(ωx)/(1+x²) dx = (π/2) e^{-ω}
        for &w in &[1.0, 5.0, 50.0] {
            let est =
                integrate_cosine_tail(|x| 1.0 / (1.0 + x * x), 0.0, w, &QuadratureSpec::default())
                    .unwrap();
            let exact = 0.5 * PI * exp(-w);
            assert!((est.value - exact).abs() < 1e-9, "w={w}: {} vs {exact}", est.value);
        }
    }

    #[test]
    fn wynn_accelerates_alternating_harmonic() {
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (est, _) = wynn_epsilon(&sums);
        assert!((est - core::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m12: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((m12 - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_large_order() {
        let (x, w) = gauss_legendre(400);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
        let cosine: f64 = x.iter().zip(&w).map(|(x, w)| w * x.cos()).sum();
        assert!((cosine - 2.0 * 1f64.sin()).abs() < 1e-12);
    }
}
