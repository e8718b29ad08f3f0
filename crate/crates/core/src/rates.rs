//! Free and controlled decay rates of the upper level.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{ceil, cos, fabs, pow, sin};

use crate::error::{Error, Result};
use crate::numerics::{self, QuadratureSpec};
use crate::spectral::{Family, FormFactor, ThermalSpectralDensity};

/// Default number of kick-series terms beyond `j = 0`.
pub const DEFAULT_J_MAX: u64 = 50;

const RATE_REL_TOL: f64 = 1e-10;

/// The control applied to the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlStrategy {
    Free,
    ZenoMeasurement { tau: f64 },
    BangBangKick { tau: f64 },
    ContinuousCoupling { coupling: f64 },
}

impl ControlStrategy {
    fn validate(&self) -> Result<()> {
        match *self {
            ControlStrategy::Free => Ok(()),
            ControlStrategy::ZenoMeasurement { tau } | ControlStrategy::BangBangKick { tau } => {
                check_tau(tau)
            }
            ControlStrategy::ContinuousCoupling { coupling } => check_coupling(coupling),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuery {
    pub tsd: ThermalSpectralDensity,
    pub omega: f64,
    pub strategy: ControlStrategy,
}

impl RateQuery {
    pub fn new(tsd: ThermalSpectralDensity, omega: f64, strategy: ControlStrategy) -> Result<Self> {
        check_omega(omega)?;
        strategy.validate()?;
        Ok(Self { tsd, omega, strategy })
    }

    pub fn evaluate(&self) -> Result<RateResult> {
        let gamma_free = golden_rule_rate(&self.tsd, self.omega);
        let (gamma, truncation_error) = match self.strategy {
            ControlStrategy::Free => (gamma_free, None),
            ControlStrategy::ZenoMeasurement { tau } => (zeno_rate(&self.tsd, self.omega, tau)?, None),
            ControlStrategy::BangBangKick { tau } => {
                let k = kick_rate_converged(&self.tsd, self.omega, tau, RATE_REL_TOL)?;
                (k.gamma, Some(k.truncation_error))
            }
            ControlStrategy::ContinuousCoupling { coupling } => {
                (continuous_rate(&self.tsd, self.omega, coupling)?, None)
            }
        };
        Ok(RateResult { gamma, gamma_free, ratio: gamma / gamma_free, truncation_error })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub gamma: f64,
    pub gamma_free: f64,
    /// `gamma / gamma_free`.
    pub ratio: f64,
    /// Bound on the neglected part of a truncated series.
    pub truncation_error: Option<f64>,
}

/// Partial kick series and a rigorous bound on the omitted terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickSeries {
    pub gamma: f64,
    pub truncation_error: f64,
    pub j_max: u64,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("system frequency must be finite and positive"))
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("transition frequency must be finite"))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("control period must be finite and positive"))
    }
}

fn check_coupling(k: f64) -> Result<()> {
    if k >= 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("control coupling must be finite and non-negative"))
    }
}

/// Absolute quadrature floor: far below any rate the density can produce.
fn abs_floor(tsd: &ThermalSpectralDensity, tau: f64) -> f64 {
    let ff = tsd.base();
    let scale = ff.slope_at_zero() * ff.cutoff() * (tau * ff.cutoff()).min(1.0);
    (1e-16 * scale).max(f64::MIN_POSITIVE)
}

/// Frequency beyond which the density no longer has structure worth splitting.
fn reach(tsd: &ThermalSpectralDensity, omega: f64) -> f64 {
    64.0 * tsd.base().cutoff() + fabs(omega)
}

/// `γ = 2π κ^β(Ω)`; negative `Ω` gives the reverse (absorption) rate.
pub fn golden_rule_rate(tsd: &ThermalSpectralDensity, omega: f64) -> f64 {
    2.0 * PI * tsd.density(omega)
}

#[inline]
fn sinc(x: f64) -> f64 {
    if fabs(x) < 1e-8 { 1.0 - x * x / 6.0 } else { sin(x) / x }
}

/// `γ^Z(τ) = τ ∫ κ^β(ω) sinc²((ω − Ω)τ/2) dω`.
pub fn zeno_rate(tsd: &ThermalSpectralDensity, omega: f64, tau: f64) -> Result<f64> {
    check_omega(omega)?;
    zeno_rate_at(tsd, omega, tau)
}

fn zeno_rate_at(tsd: &ThermalSpectralDensity, omega: f64, tau: f64) -> Result<f64> {
    check_frequency(omega)?;
    check_tau(tau)?;
    let period = 2.0 * PI / tau;
    let far = reach(tsd, omega);
    let zeros = (ceil(far / period) as i64).clamp(1, 64);
    let half_width = zeros as f64 * period;

    let natural = tsd.natural_splits(far);
    let mut splits: Vec<f64> = (-zeros..=zeros).map(|k| omega + k as f64 * period).collect();
    splits.extend(natural.iter().copied().filter(|w| fabs(w - omega) < half_width));

    let abs_tol = abs_floor(tsd, tau);
    let spec = QuadratureSpec::with_tolerances(abs_tol, RATE_REL_TOL).with_splits(splits);
    let kernel = |w: f64| {
        let s = sinc(0.5 * (w - omega) * tau);
        tau * tsd.density(w) * s * s
    };
    let central = numerics::integrate_interval(kernel, omega - half_width, omega + half_width, &spec)?;

    // Beyond the central window write τ sinc² = (2/τ)(1 − cos(uτ))/u², u = ω − Ω.
    let tail_tol = abs_tol.max(1e-3 * RATE_REL_TOL * fabs(central.value));
    let mut tail = 0.0;
    for side in [1.0, -1.0] {
        let f = |u: f64| tsd.density(omega + side * u) / (u * u);
        let u_splits: Vec<f64> = natural
            .iter()
            .map(|w| side * (w - omega))
            .filter(|&u| u > half_width)
            .collect();
        let spec = QuadratureSpec::with_tolerances(tail_tol, RATE_REL_TOL).with_splits(u_splits);
        let smooth = numerics::integrate_interval(f, half_width, f64::INFINITY, &spec)?;
        let wiggle = numerics::integrate_cosine_tail(f, half_width, tau, &spec)?;
        tail += smooth.value - wiggle.value;
    }
    Ok((central.value + 2.0 / tau * tail).max(0.0))
}

/// Rate of a transition at any real frequency `ω_m` under `strategy`:
/// negative `ω_m` gives absorption, `ω_m = 0` the dephasing channel.
pub fn controlled_rate_at(tsd: &ThermalSpectralDensity, omega_m: f64, strategy: ControlStrategy) -> Result<f64> {
    strategy.validate()?;
    check_frequency(omega_m)?;
    match strategy {
        ControlStrategy::Free => Ok(golden_rule_rate(tsd, omega_m)),
        ControlStrategy::ZenoMeasurement { tau } => zeno_rate_at(tsd, omega_m, tau),
        ControlStrategy::BangBangKick { tau } => Ok(kick_rate_converged_at(tsd, omega_m, tau, RATE_REL_TOL)?.gamma),
        ControlStrategy::ContinuousCoupling { coupling } => continuous_rate_at(tsd, omega_m, coupling),
    }
}

/// The `j`-th kick-series term,
/// `(2/π)(j + 1/2)^{-2}[κ^β(Ω + π(2j+1)/τ) + κ^β(Ω − π(2j+1)/τ)]`.
pub fn kick_series_term(tsd: &ThermalSpectralDensity, omega: f64, tau: f64, j: u64) -> f64 {
    let h = j as f64 + 0.5;
    let shift = PI * (2.0 * h) / tau;
    2.0 / PI / (h * h) * (tsd.density(omega + shift) + tsd.density(omega - shift))
}

/// Kick series summed through `j_max`, with the remainder bounded by the
/// exact `Σ_{j > j_max}(j + 1/2)^{-2}` times the supremum of `κ^β` over the
/// omitted arguments.
pub fn kick_rate(tsd: &ThermalSpectralDensity, omega: f64, tau: f64, j_max: u64) -> Result<KickSeries> {
    check_omega(omega)?;
    check_tau(tau)?;
    if j_max < 1 {
        return Err(Error::InvalidParameter("j_max must be at least 1"));
    }
    let mut gamma = 0.0;
    for j in (0..=j_max).rev() {
        gamma += kick_series_term(tsd, omega, tau, j);
    }
    let tail_weight = numerics::trigamma(j_max as f64 + 1.5);
    let first_omitted = PI * (2.0 * j_max as f64 + 3.0) / tau;
    let sup = tsd.sup_beyond(first_omitted - omega);
    let truncation_error = 2.0 / PI * tail_weight * 2.0 * sup;
    Ok(KickSeries { gamma, truncation_error, j_max })
}

/// Kick series with `j_max` doubled until the truncation bound falls below
/// `rel_tol` of the partial sum (or the term budget is exhausted, in which
/// case the last partial sum and its bound are returned).
pub fn kick_rate_converged(
    tsd: &ThermalSpectralDensity,
    omega: f64,
    tau: f64,
    rel_tol: f64,
) -> Result<KickSeries> {
    check_omega(omega)?;
    kick_rate_converged_at(tsd, omega, tau, rel_tol)
}

fn kick_rate_converged_at(
    tsd: &ThermalSpectralDensity,
    omega: f64,
    tau: f64,
    rel_tol: f64,
) -> Result<KickSeries> {
    const MAX_TERMS: u64 = 1 << 24;
    check_frequency(omega)?;
    check_tau(tau)?;
    let mut j_max = DEFAULT_J_MAX;
    let mut gamma = 0.0;
    let mut summed_through: Option<u64> = None;
    loop {
        // Accumulate only the new block, smallest terms first.
        let start = summed_through.map_or(0, |s| s + 1);
        let mut block = 0.0;
        for j in (start..=j_max).rev() {
            block += kick_series_term(tsd, omega, tau, j);
        }
        gamma += block;
        summed_through = Some(j_max);
        let tail_weight = numerics::trigamma(j_max as f64 + 1.5);
        let first_omitted = PI * (2.0 * j_max as f64 + 3.0) / tau;
        let truncation_error = 4.0 / PI * tail_weight * tsd.sup_beyond(first_omitted - omega);
        if truncation_error <= rel_tol * gamma || truncation_error == 0.0 || j_max >= MAX_TERMS {
            return Ok(KickSeries { gamma, truncation_error, j_max });
        }
        j_max *= 2;
    }
}

/// Finite-time kick rate `t ∫ κ^β(ω) sinc²((ω − Ω)t/2) tan²((ω − Ω)τ/2) dω`
/// with `t = Nτ`. `N` must be even, which makes the `tan²` poles removable.
pub fn kick_rate_integral(tsd: &ThermalSpectralDensity, omega: f64, tau: f64, kicks: u32) -> Result<f64> {
    check_omega(omega)?;
    check_tau(tau)?;
    if kicks == 0 {
        return Err(Error::InvalidParameter("kick count must be positive"));
    }
    if kicks % 2 == 1 {
        return Err(Error::OddKickCount(kicks));
    }
    let n = kicks as f64;
    // In y = uτ/2 the integrand is (τ/N) κ^β sin²(Ny) tan²(y) / y².
    let integrand = |u: f64| {
        let y = 0.5 * u * tau;
        let (sy, cy) = (sin(y), cos(y));
        let sny = sin(n * y);
        let ratio = if fabs(cy) < 1e-8 {
            // sin(Ny)/cos(y) at a pole, by l'Hôpital.
            n * cos(n * y) / -sy
        } else {
            sny / cy
        };
        let num = if fabs(y) < 1e-8 { n * y * y } else { ratio * sy / y };
        tau / n * tsd.density(omega + u) * num * num
    };

    let window = 2.0 * PI / tau;
    let far = reach(tsd, omega);
    let natural: Vec<f64> = tsd.natural_splits(far).iter().map(|w| w - omega).collect();
    let reference = kick_rate(tsd, omega, tau, DEFAULT_J_MAX)?.gamma + golden_rule_rate(tsd, omega);
    let abs_tol = abs_floor(tsd, tau).max(1e-3 * RATE_REL_TOL * reference);

    let integrate_window = |j: i64| -> Result<f64> {
        let lo = (2.0 * j as f64 - 1.0) * PI / tau;
        let hi = lo + window;
        let sub = window / n;
        let mut splits: Vec<f64> = (1..kicks).map(|k| lo + k as f64 * sub).collect();
        splits.extend(natural.iter().copied().filter(|&u| u > lo && u < hi));
        let mut spec = QuadratureSpec::with_tolerances(abs_tol, RATE_REL_TOL).with_splits(splits);
        spec.max_subdivisions += 4 * spec.split_points.len();
        Ok(numerics::integrate_interval(integrand, lo, hi, &spec)?.value)
    };

    const MAX_WINDOWS: i64 = 200_000;
    let mut total = integrate_window(0)?;
    let mut j = 1i64;
    loop {
        let right = integrate_window(j)?;
        let left = integrate_window(-j)?;
        total += right + left;
        let tail_weight = numerics::trigamma(j as f64 + 1.5);
        let edge = (2.0 * j as f64 + 1.0) * PI / tau;
        let bound = 4.0 / PI * tail_weight * tsd.sup_beyond(edge - omega);
        if bound <= RATE_REL_TOL * total && fabs(right) + fabs(left) <= RATE_REL_TOL * total {
            break;
        }
        if j >= MAX_WINDOWS {
            return Err(Error::NoConvergence { value: total, error: bound, tolerance: RATE_REL_TOL * total });
        }
        j += 1;
    }
    Ok(total.max(0.0))
}

/// `γ^c(K) = π[κ^β(Ω + K) + κ^β(Ω − K)]`.
pub fn continuous_rate(tsd: &ThermalSpectralDensity, omega: f64, coupling: f64) -> Result<f64> {
    check_omega(omega)?;
    continuous_rate_at(tsd, omega, coupling)
}

fn continuous_rate_at(tsd: &ThermalSpectralDensity, omega: f64, coupling: f64) -> Result<f64> {
    check_frequency(omega)?;
    check_coupling(coupling)?;
    Ok(PI * (tsd.density(omega + coupling) + tsd.density(omega - coupling)))
}

/// Rates between `|↑⟩` and the dressed states `|±⟩` split by `±K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedRates {
    /// `γ_± = 2π κ^β(Ω ∓ K)`, decay from `|↑⟩` into `|±⟩`.
    pub down_plus: f64,
    pub down_minus: f64,
    /// `γ̄_± = 2π κ^β(−Ω ± K)`, excitation from `|±⟩` back to `|↑⟩`.
    pub up_plus: f64,
    pub up_minus: f64,
}

impl DressedRates {
    /// Total decay rate out of `|↑⟩`, `(γ₊ + γ₋)/2`.
    pub fn upper_level_rate(&self) -> f64 {
        0.5 * (self.down_plus + self.down_minus)
    }
}

pub fn dressed_rates(tsd: &ThermalSpectralDensity, omega: f64, coupling: f64) -> Result<DressedRates> {
    check_omega(omega)?;
    check_coupling(coupling)?;
    Ok(DressedRates {
        down_plus: golden_rule_rate(tsd, omega - coupling),
        down_minus: golden_rule_rate(tsd, omega + coupling),
        up_plus: golden_rule_rate(tsd, -omega + coupling),
        up_minus: golden_rule_rate(tsd, -omega - coupling),
    })
}

/// Pure-dephasing rate `γ₀ = 2π κ₀^β(0) = 2π g₀²/β`; zero at zero temperature.
pub fn dephasing_rate(tsd: &ThermalSpectralDensity) -> f64 {
    golden_rule_rate(tsd, 0.0)
}

/// `(1 − 2^{−m}) ζ(m)` for odd `m`, the weight of the kick envelope.
pub(crate) fn odd_zeta_weight(m: u32) -> f64 {
    let zeta = numerics::zeta_odd(m).unwrap_or_else(|_| {
        // Beyond the tabulated range the series converges in a few terms.
        (1..40).rev().map(|k| pow(k as f64, -(m as f64))).sum()
    });
    (1.0 - pow(2.0, -(m as f64))) * zeta
}

/// Leading small-`τ` / large-`K` behaviour of the three controlled rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryAsymptotics {
    base: FormFactor,
    /// `τ_Z^{-2}`, so that `γ^Z ≈ τ / τ_Z²`.
    pub zeno_slope: f64,
    /// `γ^k ≈ kick_prefactor · κ(π/τ)`.
    pub kick_prefactor: f64,
}

impl SummaryAsymptotics {
    pub fn zeno(&self, tau: f64) -> f64 {
        self.zeno_slope * tau
    }

    pub fn kick(&self, tau: f64) -> f64 {
        self.kick_prefactor * self.base.density(PI / tau)
    }

    pub fn continuous(&self, coupling: f64) -> f64 {
        PI * self.base.density(coupling)
    }
}

pub fn summary_asymptotics(tsd: &ThermalSpectralDensity) -> Result<SummaryAsymptotics> {
    let base = *tsd.base();
    let zeno_slope = tsd.integral()?.value;
    let kick_prefactor = match base.family() {
        Family::Exponential => 8.0 / PI,
        Family::Polynomial(n) => 8.0 / PI * odd_zeta_weight(2 * n + 1),
    };
    Ok(SummaryAsymptotics { base, zeno_slope, kick_prefactor })
}
