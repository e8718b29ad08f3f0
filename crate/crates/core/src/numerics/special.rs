//! The handful of special functions the rate formulas need.

use core::f64::consts::{E, PI};

use libm::{exp, expm1, fabs, lgamma, log, pow, sqrt, tgamma};

use crate::error::{Error, Result};

/// Lower real branch `W₋₁` of the Lambert function: the solution `w ≤ -1` of
/// `w e^w = x` for `x` in `[-1/e, 0)`.
pub fn lambert_w_m1(x: f64) -> Result<f64> {
    let branch_point = -1.0 / E;
    if !(x < 0.0) || x < branch_point - 4.0 * f64::EPSILON {
        return Err(Error::Domain("lambert_w_m1 needs -1/e <= x < 0"));
    }
    let x = x.max(branch_point);
    let q = 1.0 + E * x;
    if q <= 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }

    let mut w = if x < -0.25 {
        // Puiseux expansion around the branch point, p = -sqrt(2(1 + e x)).
        let p = -sqrt(2.0 * q);
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        let l1 = log(-x);
        let l2 = log(-l1);
        l1 - l2 + l2 / l1
    };

    for _ in 0..32 {
        let ew = exp(w);
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = w - step;
        // Halley can overshoot across the branch point; keep to w <= -1.
        w = if next > -1.0 { 0.5 * (w - 1.0) } else { next };
        if fabs(step) <= 4.0 * f64::EPSILON * fabs(w) {
            break;
        }
    }
    Ok(w)
}

#[allow(clippy::excessive_precision)]
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,                  // B2 / 2!
    -1.0 / 720.0,                // B4 / 4!
    1.0 / 30_240.0,              // B6 / 6!
    -1.0 / 1_209_600.0,          // B8 / 8!
    1.0 / 47_900_160.0,          // B10 / 10!
    -691.0 / 1_307_674_368_000.0, // B12 / 12!
];

/// Riemann ζ at odd integers 3..=15 (the arguments `2n + 1` needed by the
/// polynomial kick envelope). Euler–Maclaurin with ten explicit terms.
pub fn zeta_odd(m: u32) -> Result<f64> {
    if m.is_multiple_of(2) || !(3..=15).contains(&m) {
        return Err(Error::Domain("zeta_odd needs an odd integer in 3..=15"));
    }
    let s = m as f64;
    const N: u32 = 10;
    let n = N as f64;
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += pow(k as f64, -s);
    }
    sum += pow(n, 1.0 - s) / (s - 1.0) + 0.5 * pow(n, -s);
    let mut rising = s;
    let mut npow = pow(n, -s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += c * rising * npow;
        let k = 2 * j as u32 + 1;
        rising *= (s + k as f64) * (s + k as f64 + 1.0);
        npow /= n * n;
    }
    Ok(sum)
}

/// Bose–Einstein occupation `1/(e^{βω} − 1)`. `β = ∞` is zero temperature.
pub fn bose_occupation(omega: f64, beta: f64) -> Result<f64> {
    if omega == 0.0 || omega.is_nan() {
        return Err(Error::Domain("bose_occupation is singular at omega = 0"));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter("inverse temperature must be positive"));
    }
    if beta == f64::INFINITY {
        return Ok(if omega > 0.0 { 0.0 } else { -1.0 });
    }
    let x = beta * omega;
    if fabs(x) < 1e-4 {
        return Ok(1.0 / x - 0.5 + x / 12.0);
    }
    Ok(1.0 / expm1(x))
}

/// `α_n = (√π/2) Γ(n − 3/2) / Γ(n − 1)`: the bandwidth of the polynomial
/// form factor in units of its cutoff.
pub fn alpha_n(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("alpha_n needs n >= 2"));
    }
    let a = n as f64 - 1.5;
    let b = n as f64 - 1.0;
    let ratio = if n <= 100 { tgamma(a) / tgamma(b) } else { exp(lgamma(a) - lgamma(b)) };
    Ok(0.5 * sqrt(PI) * ratio)
}

/// Trigamma function `ψ₁(x)` for `x > 0`.
pub fn trigamma(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + inv
        + 0.5 * inv2
        + inv * inv2
            * (1.0 / 6.0
                + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * 5.0 / 66.0))))
}

/// `Σ_{j=0}^{j_max} (j + 1/2)^{-2}` together with the exact remainder
/// `Σ_{j>j_max} (j + 1/2)^{-2} = ψ₁(j_max + 3/2)`. The full series is `π²/2`.
pub fn half_odd_inverse_squares(j_max: u64) -> (f64, f64) {
    let mut partial = 0.0;
    // Smallest terms first.
    for j in (0..=j_max).rev() {
        let h = j as f64 + 0.5;
        partial += 1.0 / (h * h);
    }
    (partial, trigamma(j_max as f64 + 1.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambert_branch_point() {
        assert_eq!(lambert_w_m1(-1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn lambert_known_value() {
        let w = lambert_w_m1(-0.1).unwrap();
        assert!((w * w.exp() + 0.1).abs() < 1e-15);
        assert!((w + 3.577152063957297).abs() < 1e-12, "{w}");
    }

    #[test]
    fn lambert_round_trip() {
        for &w in &[-1.5, -5.0, -20.0, -1.0001, -300.0] {
            let x = w * f64::exp(w);
            let back = lambert_w_m1(x).unwrap();
            assert!((back - w).abs() < 1e-10 * w.abs(), "{w} -> {back}");
        }
    }

    #[test]
    fn lambert_rejects_outside_domain() {
        assert!(lambert_w_m1(0.0).is_err());
        assert!(lambert_w_m1(0.1).is_err());
        assert!(lambert_w_m1(-0.5).is_err());
        assert!(lambert_w_m1(f64::NAN).is_err());
    }

    #[test]
    fn zeta_domain() {
        assert!(zeta_odd(2).is_err());
        assert!(zeta_odd(1).is_err());
        assert!(zeta_odd(17).is_err());
    }

    #[test]
    fn bose_basic_values() {
        let beta = 3.0;
        let omega = core::f64::consts::LN_2 / beta;
        assert!((bose_occupation(omega, beta).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(bose_occupation(1.0, f64::INFINITY).unwrap(), 0.0);
        assert!(bose_occupation(0.0, 1.0).is_err());
    }

    #[test]
    fn bose_detailed_balance_identity() {
        let beta = 1.0;
        let mut x: f64 = 1e-6;
        while x <= 50.0 {
            let n = bose_occupation(x, beta).unwrap();
            let lhs = n + 1.0;
            let rhs = x.exp() * n;
            assert!(((lhs - rhs) / lhs).abs() < 1e-14, "x={x}: {lhs} vs {rhs}");
            x *= 1.37;
        }
    }

    #[test]
    fn bose_series_branch_is_continuous() {
        let beta = 1.0;
        let below = bose_occupation(0.99e-4, beta).unwrap();
        let above = bose_occupation(1.01e-4, beta).unwrap();
        let exact_below = 1.0 / 0.99e-4f64.exp_m1();
        assert!(((below - exact_below) / exact_below).abs() < 1e-13);
        assert!(below > above);
    }

    #[test]
    fn alpha_values() {
        assert!((alpha_n(2).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((alpha_n(3).unwrap() - PI / 4.0).abs() < 1e-15);
        let a4 = alpha_n(4).unwrap();
        assert!(alpha_n(2).unwrap() > alpha_n(3).unwrap() && alpha_n(3).unwrap() > a4);
        // Γ(5/2)/Γ(3) = (3√π/4)/2
        assert!((a4 - 3.0 * PI / 16.0).abs() < 1e-15);
        assert!(alpha_n(1).is_err());
        assert!(alpha_n(150).unwrap() < PI / 2.0);
    }

    #[test]
    fn trigamma_known_values() {
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-13);
    }
}
