use std::f64::consts::PI;

use zenolab_core::numerics::{alpha_n, zeta_odd};
use zenolab_core::rates::{
    continuous_rate, controlled_rate_at, dephasing_rate, dressed_rates, golden_rule_rate, kick_rate, kick_rate_converged,
    kick_rate_integral, summary_asymptotics, zeno_rate, ControlStrategy, RateQuery, DEFAULT_J_MAX,
};
use zenolab_core::spectral::{bandwidth, match_cutoffs, zeno_time, Family, FormFactor, ThermalSpectralDensity};

const OMEGA: f64 = 0.01;
const BETA: f64 = 50.0;

fn low_temperature(family: Family) -> ThermalSpectralDensity {
    ThermalSpectralDensity::new(FormFactor::with_bandwidth(family, 1.0, 1.0).unwrap(), BETA).unwrap()
}

fn zero_temperature(family: Family) -> ThermalSpectralDensity {
    ThermalSpectralDensity::zero_temperature(FormFactor::with_bandwidth(family, 1.0, 1.0).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn bandwidth_closed_forms() {
    let exp = FormFactor::exponential(1.0, 0.7).unwrap();
    assert!(rel(bandwidth(&exp).unwrap(), 1.4) < 1e-8);
    let poly = FormFactor::polynomial(2, 1.0, 0.7).unwrap();
    assert!(rel(bandwidth(&poly).unwrap(), PI / 2.0 * 0.7) < 1e-8);
    for n in 3..=6 {
        let ff = FormFactor::polynomial(n, 1.3, 2.0).unwrap();
        assert!(rel(bandwidth(&ff).unwrap(), alpha_n(n).unwrap() * 2.0) < 1e-8);
    }
}

#[test]
fn zeno_time_closed_forms() {
    // τ_Z^{-2} = ∫κ: g²Λ² for the exponential, g²Λ²/(2(n−1)) for the polynomial.
    let exp = ThermalSpectralDensity::zero_temperature(FormFactor::exponential(1.0, 1.0).unwrap());
    assert!(rel(zeno_time(&exp).unwrap(), 1.0) < 1e-8);
    let poly = ThermalSpectralDensity::zero_temperature(FormFactor::polynomial(2, 1.0, 1.0).unwrap());
    assert!(rel(zeno_time(&poly).unwrap(), 2f64.sqrt()) < 1e-8);
    let poly4 = ThermalSpectralDensity::zero_temperature(FormFactor::polynomial(4, 0.5, 2.0).unwrap());
    assert!(rel(zeno_time(&poly4).unwrap(), (6.0f64).sqrt() / (0.5 * 2.0)) < 1e-8);
}

#[test]
fn matched_cutoffs_give_equal_bandwidths() {
    let (l_exp, l_poly) = match_cutoffs(Family::Exponential, Family::Polynomial(2), 1.0).unwrap();
    assert!((l_poly / l_exp - 1.275).abs() / 1.275 < 5e-3);
    let w_exp = bandwidth(&FormFactor::exponential(1.0, l_exp).unwrap()).unwrap();
    let w_poly = bandwidth(&FormFactor::polynomial(2, 1.0, l_poly).unwrap()).unwrap();
    assert!(rel(w_exp, 1.0) < 1e-8 && rel(w_poly, 1.0) < 1e-8);
}

#[test]
fn golden_rule_examples() {
    let tsd = ThermalSpectralDensity::zero_temperature(FormFactor::exponential(1.0, 1.0).unwrap());
    assert!(rel(golden_rule_rate(&tsd, 1.0), 2.0 * PI * (-1.0f64).exp()) < 1e-14);

    let tsd = low_temperature(Family::Exponential);
    let gamma = golden_rule_rate(&tsd, OMEGA);
    let fixture = 2.0 * PI * OMEGA * (-OMEGA / 0.5).exp() / (1.0 - (-BETA * OMEGA).exp());
    assert!(gamma.is_finite() && gamma > 0.0);
    assert!(rel(gamma, fixture) < 1e-13);
    assert!(rel(golden_rule_rate(&tsd, -OMEGA), (-BETA * OMEGA).exp() * gamma) < 1e-12);
}

/// τ∫κ^β sinc² by a composite trapezoid rule on a wide finite window.
fn zeno_by_trapezoid(tsd: &ThermalSpectralDensity, omega: f64, tau: f64) -> f64 {
    let (a, b, n) = (-3.0, 40.0, 2_000_000);
    let h = (b - a) / n as f64;
    let sum: f64 = (0..=n)
        .map(|i| {
            let w = a + h * i as f64;
            let x = 0.5 * (w - omega) * tau;
            let s = if x == 0.0 { 1.0 } else { x.sin() / x };
            let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
            weight * tsd.density(w) * s * s
        })
        .sum();
    tau * h * sum
}

#[test]
fn zeno_rate_matches_trapezoid_oracle() {
    let tsd = low_temperature(Family::Exponential);
    for tau in [0.3, 3.0, 30.0] {
        let value = zeno_rate(&tsd, OMEGA, tau).unwrap();
        let oracle = zeno_by_trapezoid(&tsd, OMEGA, tau);
        assert!(rel(value, oracle) < 1e-7, "tau {tau}: {value} vs {oracle}");
    }
}

#[test]
fn zeno_rate_small_tau_slope() {
    for family in [Family::Exponential, Family::Polynomial(2)] {
        let tsd = low_temperature(family);
        let tau_z = zeno_time(&tsd).unwrap();
        let tau = 1e-3;
        assert!(rel(zeno_rate(&tsd, OMEGA, tau).unwrap() / tau, tau_z.powi(-2)) < 0.02);
    }
}

#[test]
fn zeno_rate_large_tau_reaches_golden_rule() {
    let omega = 0.2;
    for family in [Family::Exponential, Family::Polynomial(2)] {
        let tsd = low_temperature(family);
        assert!(rel(zeno_rate(&tsd, omega, 50.0).unwrap(), golden_rule_rate(&tsd, omega)) < 0.15);
    }
}

#[test]
fn zeno_enhancement_for_polynomial_at_tau_3() {
    let tsd = low_temperature(Family::Polynomial(2));
    assert!(zeno_rate(&tsd, OMEGA, 3.0).unwrap() > golden_rule_rate(&tsd, OMEGA));
}

#[test]
fn kick_rate_long_period_limit() {
    let omega = 0.2;
    for family in [Family::Exponential, Family::Polynomial(2)] {
        let tsd = zero_temperature(family);
        let gamma = golden_rule_rate(&tsd, omega);
        let full = kick_rate_converged(&tsd, omega, 1e4, 1e-12).unwrap();
        assert!(rel(full.gamma, gamma) < 1e-3, "{family:?}: {}", full.gamma / gamma);
        // The fixed truncation falls short here but its tail bound covers the gap.
        let truncated = kick_rate(&tsd, omega, 1e4, DEFAULT_J_MAX).unwrap();
        assert!(truncated.gamma <= full.gamma);
        assert!(truncated.gamma + truncated.truncation_error >= full.gamma);
    }
}

#[test]
fn kick_rate_small_tau_envelopes() {
    let tau = 0.05;
    let tsd = low_temperature(Family::Exponential);
    let envelope = 8.0 / PI * tsd.base().density(PI / tau);
    assert!(rel(kick_rate(&tsd, OMEGA, tau, DEFAULT_J_MAX).unwrap().gamma, envelope) < 0.02);

    for n in [2, 3] {
        let tsd = low_temperature(Family::Polynomial(n));
        let m = 2 * n + 1;
        let weight = (1.0 - 2f64.powi(-(m as i32))) * zeta_odd(m).unwrap();
        let envelope = 8.0 / PI * weight * tsd.base().density(PI / tau);
        assert!(rel(kick_rate(&tsd, OMEGA, tau, DEFAULT_J_MAX).unwrap().gamma, envelope) < 0.02);
    }
}

#[test]
fn kick_integral_at_long_period() {
    let tsd = low_temperature(Family::Exponential);
    let gamma = golden_rule_rate(&tsd, OMEGA);
    assert!(rel(kick_rate_integral(&tsd, OMEGA, 1e3, 2000).unwrap(), gamma) < 0.05);
}

#[test]
fn kick_integral_gap_shrinks_with_kicks() {
    let tsd = low_temperature(Family::Exponential);
    let series = kick_rate_converged(&tsd, OMEGA, 1.0, 1e-12).unwrap().gamma;
    let gaps: Vec<f64> = [2, 20, 200, 2000]
        .iter()
        .map(|&n| (kick_rate_integral(&tsd, OMEGA, 1.0, n).unwrap() - series).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn kick_integral_rejects_odd_counts() {
    let tsd = low_temperature(Family::Exponential);
    assert!(kick_rate_integral(&tsd, OMEGA, 1.0, 201).is_err());
}

#[test]
fn continuous_rate_examples() {
    let tsd = low_temperature(Family::Exponential);
    assert!(rel(continuous_rate(&tsd, OMEGA, 0.0).unwrap(), golden_rule_rate(&tsd, OMEGA)) < 1e-14);

    let k = 20.0;
    let large = continuous_rate(&tsd, OMEGA, k).unwrap();
    assert!(rel(large, PI * tsd.base().density(k)) < 0.02);

    let cold = zero_temperature(Family::Polynomial(2));
    let omega = 0.2;
    let value = continuous_rate(&cold, omega, 1.0).unwrap();
    assert_eq!(value, PI * cold.density(omega + 1.0));
}

#[test]
fn dressed_rate_identities() {
    let tsd = low_temperature(Family::Polynomial(2));
    let at_zero = dressed_rates(&tsd, OMEGA, 0.0).unwrap();
    assert_eq!(at_zero.down_plus, at_zero.down_minus);
    assert!(rel(at_zero.down_plus, golden_rule_rate(&tsd, OMEGA)) < 1e-14);

    for k in [0.003, 0.05, 0.7, 4.0] {
        let d = dressed_rates(&tsd, OMEGA, k).unwrap();
        assert!(rel(d.up_plus, (-BETA * (OMEGA - k)).exp() * d.down_plus) < 1e-10);
        assert!(rel(d.up_minus, (-BETA * (OMEGA + k)).exp() * d.down_minus) < 1e-10);
        let average = 0.5 * (d.down_plus + d.down_minus);
        assert!((average - continuous_rate(&tsd, OMEGA, k).unwrap()).abs() <= 1e-14 * average);
    }
}

#[test]
fn dephasing_examples() {
    let tsd = ThermalSpectralDensity::new(FormFactor::exponential(1.0, 0.5).unwrap(), 50.0).unwrap();
    assert!(rel(dephasing_rate(&tsd), 2.0 * PI / 50.0) < 1e-14);
    let off = ThermalSpectralDensity::new(FormFactor::exponential(0.0, 0.5).unwrap(), 50.0).unwrap();
    assert_eq!(dephasing_rate(&off), 0.0);
    assert_eq!(dephasing_rate(&zero_temperature(Family::Exponential)), 0.0);
}

#[test]
fn summary_asymptotics_match_rate_functions() {
    let tsd = low_temperature(Family::Exponential);
    let s = summary_asymptotics(&tsd).unwrap();
    assert!(rel(s.zeno_slope, zeno_time(&tsd).unwrap().powi(-2)) < 1e-12);
    assert!(rel(s.kick(0.1), 8.0 / PI * tsd.base().density(PI / 0.1)) < 1e-12);
    assert!(rel(s.continuous(3.0), PI * tsd.base().density(3.0)) < 1e-12);
}

#[test]
fn rate_query_reports_ratio() {
    let tsd = low_temperature(Family::Exponential);
    let result = RateQuery::new(tsd, OMEGA, ControlStrategy::ZenoMeasurement { tau: 2.0 })
        .unwrap()
        .evaluate()
        .unwrap();
    assert_eq!(result.ratio, result.gamma / result.gamma_free);
    assert_eq!(result.gamma, zeno_rate(&tsd, OMEGA, 2.0).unwrap());
    assert!(RateQuery::new(tsd, -1.0, ControlStrategy::Free).is_err());
}

#[test]
fn controlled_rate_at_covers_absorption_and_dephasing() {
    let tsd = low_temperature(Family::Exponential);
    let strategy = ControlStrategy::ZenoMeasurement { tau: 1e4 };
    let absorption = controlled_rate_at(&tsd, -OMEGA, strategy).unwrap();
    assert!(rel(absorption, golden_rule_rate(&tsd, -OMEGA)) < 0.01);
    let dephasing = controlled_rate_at(&tsd, 0.0, strategy).unwrap();
    assert!(rel(dephasing, dephasing_rate(&tsd)) < 0.01);
}

#[test]
fn limit_recovery_in_low_temperature_regime() {
    for family in [Family::Exponential, Family::Polynomial(2)] {
        let tsd = low_temperature(family);
        let gamma = golden_rule_rate(&tsd, OMEGA);
        for tau in [1e4, 1e5] {
            assert!(rel(zeno_rate(&tsd, OMEGA, tau).unwrap(), gamma) <= 0.02);
            assert!(rel(kick_rate_converged(&tsd, OMEGA, tau, 1e-12).unwrap().gamma, gamma) <= 0.02);
        }
        for k in [1e-4, 1e-6] {
            assert!(rel(continuous_rate(&tsd, OMEGA, k).unwrap(), gamma) <= 0.02);
        }
    }
}

#[test]
fn zeno_ratio_crosses_one() {
    for family in [Family::Exponential, Family::Polynomial(2)] {
        let tsd = low_temperature(family);
        let gamma = golden_rule_rate(&tsd, OMEGA);
        let signs: Vec<bool> = (0..=80)
            .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 80.0))
            .map(|tau| zeno_rate(&tsd, OMEGA, tau).unwrap() > gamma)
            .collect();
        assert!(signs.windows(2).any(|w| w[0] != w[1]));
    }
}
