use std::f64::consts::{E, PI};

use proptest::prelude::*;
use zenolab_core::numerics::{
    self, alpha_n, bose_occupation, half_odd_inverse_squares, integrate_interval, integrate_line, lambert_w_m1,
    zeta_odd, QuadratureSpec,
};
use zenolab_core::spectral::{FormFactor, ThermalSpectralDensity};

/// ζ(m) by summing the first `k` terms backwards and closing with the
/// midpoint integral tail `(k + 1/2)^{1−m}/(m − 1)`.
fn zeta_by_summation(m: u32, k: u64) -> f64 {
    let s = m as f64;
    let head: f64 = (1..=k).rev().map(|j| (j as f64).powf(-s)).sum();
    head + (k as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
}

#[test]
fn zeta_matches_direct_summation() {
    for m in [3, 5, 7, 9] {
        let oracle = zeta_by_summation(m, 20_000);
        let value = zeta_odd(m).unwrap();
        assert!((value - oracle).abs() <= 1e-12, "zeta({m}) = {value} vs {oracle}");
    }
    assert!((zeta_odd(3).unwrap() - 1.2020569031595942).abs() < 1e-12);
    assert!((zeta_odd(5).unwrap() - 1.036_927_755_143_37).abs() < 1e-12);
}

#[test]
fn zeta_upper_table_entries() {
    for m in [11, 13, 15] {
        assert!((zeta_odd(m).unwrap() - zeta_by_summation(m, 2_000)).abs() <= 1e-12);
    }
}

#[test]
fn half_odd_series_sums_to_half_pi_squared() {
    let (partial, tail) = half_odd_inverse_squares(1000);
    assert!((partial + tail - PI * PI / 2.0).abs() < 1e-12);
}

#[test]
fn lambert_residual_on_log_grid() {
    // |x| from 1e-300 up to 1/e, log-spaced.
    let lo = (1e-300f64).ln();
    let hi = (1.0 / E).ln();
    for i in 0..1000 {
        let x = -(lo + (hi - lo) * i as f64 / 999.0).exp();
        let w = lambert_w_m1(x).unwrap();
        assert!(w <= -1.0);
        let residual = (w * w.exp() - x).abs();
        assert!(residual <= 1e-12 * x.abs(), "x = {x:e}: w = {w}, residual {residual:e}");
    }
}

#[test]
fn lambert_example_value() {
    assert!((lambert_w_m1(-0.1).unwrap() + 3.57715).abs() < 1e-5);
}

#[test]
fn bose_identity_across_range() {
    let beta = 2.0;
    let mut x: f64 = 1e-6;
    while x <= 50.0 {
        let omega = x / beta;
        let n = bose_occupation(omega, beta).unwrap();
        assert!(((n + 1.0) - x.exp() * n).abs() <= 1e-14 * (n + 1.0));
        x *= 1.05;
    }
    assert_eq!(bose_occupation(3.0, f64::INFINITY).unwrap(), 0.0);
}

#[test]
fn alpha_decreases_and_stays_below_half_pi() {
    let mut prev = alpha_n(2).unwrap();
    assert!((prev - PI / 2.0).abs() < 1e-15);
    for n in 3..40 {
        let a = alpha_n(n).unwrap();
        assert!(a < prev && a <= PI / 2.0);
        prev = a;
    }
}

#[test]
fn line_integral_examples() {
    let ff = FormFactor::exponential(1.0, 1.0).unwrap();
    let est = integrate_line(|w| ff.density(w), &QuadratureSpec::default().with_splits([0.0])).unwrap();
    assert!((est.value - 1.0).abs() < 1e-10);
    let gauss = integrate_line(|x| (-0.5 * x * x).exp() / (2.0 * PI).sqrt(), &QuadratureSpec::default()).unwrap();
    assert!((gauss.value - 1.0).abs() < 1e-10);
}

fn sinc_squared_integral(tsd: &ThermalSpectralDensity, omega: f64, tau: f64) -> f64 {
    let period = 2.0 * PI / tau;
    let mut splits: Vec<f64> = (-64..=64).map(|k| omega + k as f64 * period).collect();
    splits.push(0.0);
    let spec = QuadratureSpec::default().with_splits(splits);
    let kernel = |w: f64| {
        let x = 0.5 * (w - omega) * tau;
        let s = if x == 0.0 { 1.0 } else { x.sin() / x };
        tsd.density(w) * s * s
    };
    integrate_line(kernel, &spec).unwrap().value
}

fn low_frequency_bath() -> ThermalSpectralDensity {
    let ff = FormFactor::with_bandwidth(zenolab_core::spectral::Family::Exponential, 1.0, 1.0).unwrap();
    ThermalSpectralDensity::new(ff, 50.0).unwrap()
}

#[test]
fn sinc_squared_integral_matches_trapezoid_sum() {
    let tsd = low_frequency_bath();
    let (omega, tau) = (0.01, 50.0);
    let (a, b, n) = (-2.0, 40.0, 2_000_000);
    let h = (b - a) / n as f64;
    let trapezoid: f64 = (0..=n)
        .map(|i| {
            let w = a + h * i as f64;
            let x = 0.5 * (w - omega) * tau;
            let s = if x == 0.0 { 1.0 } else { x.sin() / x };
            let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
            weight * tsd.density(w) * s * s
        })
        .sum::<f64>()
        * h;
    let value = sinc_squared_integral(&tsd, omega, tau);
    assert!((value / trapezoid - 1.0).abs() < 1e-8, "{value} vs {trapezoid}");
}

#[test]
fn sinc_squared_integral_tends_to_delta_limit() {
    let tsd = low_frequency_bath();
    let omega = 0.01;
    let mut prev = f64::INFINITY;
    for tau in [200.0, 1000.0, 5000.0] {
        let gap = (sinc_squared_integral(&tsd, omega, tau) / (2.0 * PI * tsd.density(omega) / tau) - 1.0).abs();
        assert!(gap < prev);
        prev = gap;
    }
    assert!(prev < 0.01);
}

// At τ = 50 the sinc² window (width 2π/τ ≈ 0.13) is wider than the thermal
// scale 1/β = 0.02 of the density, and the integral sits 31% above the
// delta-function value. Kept at its stated tolerance.
#[test]
#[ignore = "delta limit is not reached at tau = 50 for beta = 50 (31% gap)"]
fn sinc_squared_integral_near_delta_limit_at_tau_50() {
    let tsd = low_frequency_bath();
    let (omega, tau) = (0.01, 50.0);
    let value = sinc_squared_integral(&tsd, omega, tau);
    let delta_limit = 2.0 * PI * tsd.density(omega) / tau;
    assert!((value / delta_limit - 1.0).abs() < 0.15, "{value} vs {delta_limit}");
}

/// Integrands with closed-form integrals over their natural domains.
fn analytic_case(kind: u8, a: f64, b: f64) -> (Box<dyn Fn(f64) -> f64>, f64, f64, f64) {
    match kind % 5 {
        0 => (Box::new(move |x: f64| a * (-b * x * x).exp()), f64::NEG_INFINITY, f64::INFINITY, a * (PI / b).sqrt()),
        1 => {
            let k = (a * 3.0).floor();
            let exact = (1..=k as u32).map(|i| i as f64).product::<f64>() / b.powf(k + 1.0);
            (Box::new(move |x: f64| x.powf(k) * (-b * x).exp()), 0.0, f64::INFINITY, exact)
        }
        2 => (Box::new(move |x: f64| 1.0 / (1.0 + (x / b) * (x / b))), f64::NEG_INFINITY, f64::INFINITY, PI * b),
        3 => (Box::new(move |x: f64| (a * x).cos() * (-x).exp()), 0.0, f64::INFINITY, 1.0 / (1.0 + a * a)),
        _ => (Box::new(move |x: f64| (x * b).sin().powi(2)), 0.0, a * PI, a * PI / 2.0 - (2.0 * a * PI * b).sin() / (4.0 * b)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn quadrature_error_estimates_are_honest(
        kind in 0u8..5,
        a in 0.5f64..3.0,
        b in 0.3f64..4.0,
        tol_exp in 5i32..10,
    ) {
        let (f, lo, hi, exact) = analytic_case(kind, a, b);
        let rel = 10f64.powi(-tol_exp);
        let spec = QuadratureSpec::with_tolerances(rel * 1e-3, rel);
        let est = integrate_interval(f, lo, hi, &spec).unwrap();
        let true_error = (est.value - exact).abs();
        prop_assert!(
            true_error <= 3.0 * est.error,
            "kind {} a {} b {}: true error {:e} vs estimate {:e}", kind, a, b, true_error, est.error
        );
    }

    #[test]
    fn cosine_tail_matches_closed_form(a in 0.5f64..20.0, c in 0.2f64..3.0) {
        // ∫_0^∞ e^{−c x} cos(a x) dx = c / (c² + a²)
        let est = numerics::integrate_cosine_tail(|x| (-c * x).exp(), 0.0, a, &QuadratureSpec::default()).unwrap();
        prop_assert!((est.value - c / (c * c + a * a)).abs() < 1e-9);
    }
}
