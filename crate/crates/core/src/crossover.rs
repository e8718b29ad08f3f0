//! Zeno / inverse-Zeno crossover scales: the period `τ*` (measurements,
//! kicks) and the coupling `K*` (continuous control) at which the controlled
//! rate equals the free one.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{ceil, fabs, log10, pow, sqrt};

use crate::error::{Error, Result};
use crate::numerics;
use crate::rates;
use crate::spectral::{self, Family, ThermalSpectralDensity};

/// Relative tolerance the kick series is summed to during a search.
const KICK_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    RootFind,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverReport {
    pub star_value: f64,
    pub method: Method,
    /// Asymptotic estimate; `None` when the estimate's own formula has no
    /// real solution for these parameters.
    pub closed_form_estimate: Option<f64>,
    /// `|star_value − estimate| / star_value`.
    pub relative_gap: Option<f64>,
    pub bracket: (f64, f64),
    /// Every sign change of `ratio − 1` on the scan grid, refined, in
    /// increasing order.
    pub all_crossings: Vec<f64>,
}

/// Log-spaced scan in units of the bandwidth: `[lo, hi]/W` for periods,
/// `[lo, hi]·W` for couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: u32,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { lo: 1e-4, hi: 1e4, per_decade: 400 }
    }
}

impl ScanGrid {
    fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) || self.per_decade == 0 {
            return Err(Error::InvalidParameter("scan grid needs 0 < lo < hi and a positive density"));
        }
        Ok(())
    }

    fn points(&self, unit: f64) -> Vec<f64> {
        let decades = log10(self.hi / self.lo);
        let count = ceil(decades * self.per_decade as f64 - 1e-9) as usize;
        (0..=count)
            .map(|i| {
                let x = if i == count { self.hi } else { self.lo * pow(10.0, i as f64 / self.per_decade as f64) };
                x * unit
            })
            .collect()
    }
}

/// Bandwidth of the bath, falling back to the cutoff when the first moment
/// diverges.
fn frequency_unit(tsd: &ThermalSpectralDensity) -> f64 {
    let ff = tsd.base();
    ff.family().bandwidth_over_cutoff().map_or(ff.cutoff(), |r| r * ff.cutoff())
}

/// Refined roots as `(root, bracket_lo, bracket_hi)`.
type Roots = Vec<(f64, f64, f64)>;

/// Scans `excess(x) = ratio(x) − 1` and returns every refined root plus the
/// index of the canonical one: the first upward crossing met when walking
/// away from the controlled end (`from_small` picks which end that is).
fn scan_roots<F>(excess: F, grid: &[f64], from_small: bool) -> Result<(Roots, Option<usize>)>
where
    F: Fn(f64) -> Result<f64>,
{
    let values: Vec<f64> = grid.iter().map(|&x| excess(x)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    let mut canonical = None;
    for i in 0..grid.len() - 1 {
        let (a, b) = (values[i], values[i + 1]);
        let changes = (a < 0.0) != (b < 0.0);
        if !changes {
            continue;
        }
        let (x, lo, hi) = bisect(&excess, grid[i], grid[i + 1], a)?;
        // Controlled side is below one; the canonical root leaves it.
        let leaves_controlled = if from_small { a < 0.0 } else { b < 0.0 };
        roots.push((x, lo, hi));
        if leaves_controlled {
            if from_small {
                if canonical.is_none() {
                    canonical = Some(roots.len() - 1);
                }
            } else {
                canonical = Some(roots.len() - 1);
            }
        }
    }
    Ok((roots, canonical))
}

fn bisect<F>(excess: &F, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<(f64, f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        if hi / lo - 1.0 <= 1e-13 {
            break;
        }
        let mid = sqrt(lo * hi);
        let f = excess(mid)?;
        if f == 0.0 {
            return Ok((mid, mid, mid));
        }
        if (f < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((sqrt(lo * hi), lo, hi))
}

fn report(
    roots: Roots,
    canonical: Option<usize>,
    estimate: Option<f64>,
    span: (f64, f64),
) -> Result<CrossoverReport> {
    let Some(idx) = canonical else {
        return Err(Error::NoCrossing { lo: span.0, hi: span.1 });
    };
    let (star, lo, hi) = roots[idx];
    Ok(CrossoverReport {
        star_value: star,
        method: Method::RootFind,
        closed_form_estimate: estimate,
        relative_gap: estimate.map(|e| fabs(star - e) / star),
        bracket: (lo, hi),
        all_crossings: roots.into_iter().map(|r| r.0).collect(),
    })
}

/// `τ*` with `γ^Z(τ*) = γ`, compared against `γ τ_Z²`.
pub fn find_tau_star_zeno(tsd: &ThermalSpectralDensity, omega: f64) -> Result<CrossoverReport> {
    find_tau_star_zeno_on(tsd, omega, &ScanGrid::default())
}

pub fn find_tau_star_zeno_on(tsd: &ThermalSpectralDensity, omega: f64, grid: &ScanGrid) -> Result<CrossoverReport> {
    grid.validate()?;
    let gamma = rates::golden_rule_rate(tsd, omega);
    let points = grid.points(1.0 / frequency_unit(tsd));
    let (roots, canonical) = scan_roots(|t| Ok(rates::zeno_rate(tsd, omega, t)? / gamma - 1.0), &points, true)?;
    let tau_z = spectral::zeno_time(tsd)?;
    report(roots, canonical, Some(gamma * tau_z * tau_z), (points[0], points[points.len() - 1]))
}

/// `τ*` with `γ^k(τ*) = γ`, compared against the Lambert-W (exponential) or
/// power-law (polynomial) solution of the small-period envelope.
pub fn find_tau_star_kick(tsd: &ThermalSpectralDensity, omega: f64) -> Result<CrossoverReport> {
    find_tau_star_kick_on(tsd, omega, &ScanGrid::default())
}

pub fn find_tau_star_kick_on(tsd: &ThermalSpectralDensity, omega: f64, grid: &ScanGrid) -> Result<CrossoverReport> {
    grid.validate()?;
    let gamma = rates::golden_rule_rate(tsd, omega);
    let points = grid.points(1.0 / frequency_unit(tsd));
    let excess = |t: f64| Ok(rates::kick_rate_converged(tsd, omega, t, KICK_REL_TOL)?.gamma / gamma - 1.0);
    let (roots, canonical) = scan_roots(excess, &points, true)?;
    report(roots, canonical, kick_estimate(tsd, gamma), (points[0], points[points.len() - 1]))
}

/// `K*` with `γ^c(K*) = γ`; the canonical root is the largest crossing.
pub fn find_k_star(tsd: &ThermalSpectralDensity, omega: f64) -> Result<CrossoverReport> {
    find_k_star_on(tsd, omega, &ScanGrid::default())
}

pub fn find_k_star_on(tsd: &ThermalSpectralDensity, omega: f64, grid: &ScanGrid) -> Result<CrossoverReport> {
    grid.validate()?;
    let gamma = rates::golden_rule_rate(tsd, omega);
    let points = grid.points(frequency_unit(tsd));
    let excess = |k: f64| Ok(rates::continuous_rate(tsd, omega, k)? / gamma - 1.0);
    let (roots, canonical) = scan_roots(excess, &points, false)?;
    report(roots, canonical, coupling_estimate(tsd, gamma), (points[0], points[points.len() - 1]))
}

fn kick_estimate(tsd: &ThermalSpectralDensity, gamma: f64) -> Option<f64> {
    let ff = tsd.base();
    let (g2, cutoff) = (ff.slope_at_zero(), ff.cutoff());
    match ff.family() {
        Family::Exponential => {
            let w = numerics::lambert_w_m1(-PI / 8.0 * gamma / (g2 * cutoff)).ok()?;
            Some(-(PI / cutoff) / w)
        }
        Family::Polynomial(n) => {
            let base = PI * gamma / (8.0 * rates::odd_zeta_weight(2 * n + 1) * g2 * cutoff);
            Some(PI / cutoff * pow(base, 1.0 / (2.0 * n as f64 - 1.0)))
        }
    }
}

fn coupling_estimate(tsd: &ThermalSpectralDensity, gamma: f64) -> Option<f64> {
    let ff = tsd.base();
    let (g2, cutoff) = (ff.slope_at_zero(), ff.cutoff());
    let x = gamma / (PI * g2 * cutoff);
    match ff.family() {
        Family::Exponential => Some(-cutoff * numerics::lambert_w_m1(-x).ok()?),
        Family::Polynomial(n) => Some(cutoff * pow(x, -1.0 / (2.0 * n as f64 - 1.0))),
    }
}

/// Low-temperature back-of-envelope crossover scales for the polynomial
/// family, in terms of `Ω` and the bandwidth alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuickEstimates {
    pub tau_star_zeno: f64,
    pub tau_star_kick: f64,
    pub k_star: f64,
}

pub fn quick_estimates(n: u32, omega: f64, bandwidth: f64) -> Result<QuickEstimates> {
    if n < 2 {
        return Err(Error::Domain("quick estimates need a polynomial exponent n >= 2"));
    }
    if !(omega > 0.0 && bandwidth > 0.0 && omega.is_finite() && bandwidth.is_finite()) {
        return Err(Error::Domain("quick estimates need positive finite frequencies"));
    }
    let a = numerics::alpha_n(n)?;
    let p = 1.0 / (2.0 * n as f64 - 1.0);
    let x = omega / bandwidth;
    Ok(QuickEstimates {
        tau_star_zeno: 2.0 * PI / bandwidth * 2.0 * (n as f64 - 1.0) * a * a * x,
        tau_star_kick: 2.0 * PI / bandwidth * (a / 2.0) * pow(a * PI * PI * x / 4.0, p),
        k_star: bandwidth / a * pow(2.0 / (a * x), p),
    })
}
