//! Bare Ohmic form factors, their thermal dressing, and the scalar
//! characterizations used to compare families: bandwidth and Zeno time.

use alloc::vec::Vec;

use libm::{exp, expm1, pow, sqrt};

use crate::error::{Error, Result};
use crate::numerics::{self, Estimate, QuadratureSpec};

/// Shape of the bare spectral density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `g² ω e^{-ω/Λ}`
    Exponential,
    /// `g² ω / [1 + (ω/Λ)²]^n`
    Polynomial(u32),
}

impl Family {
    /// `W/Λ`, the bandwidth in units of the cutoff.
    pub fn bandwidth_over_cutoff(self) -> Result<f64> {
        match self {
            Family::Exponential => Ok(2.0),
            Family::Polynomial(n) if n >= 2 => numerics::alpha_n(n),
            Family::Polynomial(n) => Err(Error::DivergentMoment { exponent: n }),
        }
    }
}

/// Bare (zero-temperature) spectral density `κ(ω)`, supported on `ω ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactor {
    family: Family,
    coupling: f64,
    cutoff: f64,
}

impl FormFactor {
    /// `coupling` may be zero (no channel); `Polynomial(n)` needs `n ≥ 1`,
    /// and `n ≥ 2` for anything that integrates the density.
    pub fn new(family: Family, coupling: f64, cutoff: f64) -> Result<Self> {
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParameter("coupling must be finite and non-negative"));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::InvalidParameter("cutoff must be finite and positive"));
        }
        if family == Family::Polynomial(0) {
            return Err(Error::InvalidParameter("polynomial exponent must be at least 1"));
        }
        Ok(Self { family, coupling, cutoff })
    }

    pub fn exponential(coupling: f64, cutoff: f64) -> Result<Self> {
        Self::new(Family::Exponential, coupling, cutoff)
    }

    pub fn polynomial(n: u32, coupling: f64, cutoff: f64) -> Result<Self> {
        Self::new(Family::Polynomial(n), coupling, cutoff)
    }

    /// Form factor whose bandwidth equals `bandwidth`.
    pub fn with_bandwidth(family: Family, coupling: f64, bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidParameter("bandwidth must be finite and positive"));
        }
        Self::new(family, coupling, bandwidth / family.bandwidth_over_cutoff()?)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn with_coupling(self, coupling: f64) -> Result<Self> {
        Self::new(self.family, coupling, self.cutoff)
    }

    /// Same shape with every frequency multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::new(self.family, self.coupling, self.cutoff * factor)
    }

    /// `κ(ω)`; exactly zero for `ω ≤ 0`.
    pub fn density(&self, omega: f64) -> f64 {
        if !(omega > 0.0) {
            return 0.0;
        }
        let g2 = self.coupling * self.coupling;
        let x = omega / self.cutoff;
        match self.family {
            Family::Exponential => g2 * omega * exp(-x),
            Family::Polynomial(n) => g2 * omega / pow(1.0 + x * x, n as f64),
        }
    }

    /// `κ'(0⁺)`, which is `g²` for both Ohmic families.
    pub fn slope_at_zero(&self) -> f64 {
        self.coupling * self.coupling
    }

    /// Location of the maximum of `κ`.
    pub fn peak(&self) -> f64 {
        match self.family {
            Family::Exponential => self.cutoff,
            Family::Polynomial(n) => self.cutoff / sqrt(2.0 * n as f64 - 1.0),
        }
    }

    /// `sup_{ω ≥ x} κ(ω)`.
    pub fn sup_from(&self, x: f64) -> f64 {
        self.density(x.max(self.peak()))
    }

    /// Large-frequency envelope of the polynomial family,
    /// `g² Λ (Λ/ω)^{2n−1}`; `None` for the exponential family.
    pub fn polynomial_tail(&self, omega: f64) -> Option<f64> {
        match self.family {
            Family::Polynomial(n) => Some(
                self.coupling * self.coupling * self.cutoff
                    * pow(self.cutoff / omega, 2.0 * n as f64 - 1.0),
            ),
            Family::Exponential => None,
        }
    }
}

/// `κ^β(ω) = [κ(ω) − κ(−ω)] / (1 − e^{−βω})`, supported on the whole line.
/// `β = ∞` is zero temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpectralDensity {
    base: FormFactor,
    beta: f64,
}

impl ThermalSpectralDensity {
    pub fn new(base: FormFactor, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter("inverse temperature must be positive"));
        }
        Ok(Self { base, beta })
    }

    pub fn zero_temperature(base: FormFactor) -> Self {
        Self { base, beta: f64::INFINITY }
    }

    pub fn base(&self) -> &FormFactor {
        &self.base
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta == f64::INFINITY
    }

    /// Rescales every frequency by `factor` (cutoff times, `β` divided by it).
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::new(self.base.scaled(factor)?, self.beta / factor)
    }

    pub fn density(&self, omega: f64) -> f64 {
        if self.is_zero_temperature() {
            return self.base.density(omega);
        }
        if omega > 0.0 {
            self.base.density(omega) / -expm1(-self.beta * omega)
        } else if omega < 0.0 {
            self.base.density(-omega) / expm1(-self.beta * omega)
        } else {
            self.base.slope_at_zero() / self.beta
        }
    }

    /// Upper bound on `sup_{|ω| ≥ x} κ^β(ω)` for `x ≥ 0`.
    ///
    /// Uses `κ^β = κ(1 + N)` on the positive axis, `ω N(ω) ≤ 1/β`, and KMS for
    /// the negative axis, which is always the smaller side.
    pub fn sup_beyond(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        let k = self.base.sup_from(x);
        if self.is_zero_temperature() {
            return k;
        }
        let thermal = self.base.slope_at_zero() / self.beta;
        let occupation = if x > 0.0 { 1.0 / expm1(self.beta * x) } else { f64::INFINITY };
        k + thermal.min(k * occupation)
    }

    /// Breakpoints that resolve the shape of `κ^β` out to `|ω| ≤ limit`:
    /// the origin plus geometric ladders on either side.
    pub fn natural_splits(&self, limit: f64) -> Vec<f64> {
        let mut pts = alloc::vec![0.0];
        let peak = self.base.peak();
        let pos_scale = 0.25 * peak.min(2.0 / self.beta);
        ladder(&mut pts, pos_scale, limit, 1.0);
        if !self.is_zero_temperature() {
            let neg_scale = 0.25 * peak.min(1.0 / self.beta);
            ladder(&mut pts, neg_scale, limit, -1.0);
        }
        pts.sort_by(f64::total_cmp);
        pts
    }

    /// `∫ κ^β(ω) dω` over the real line, i.e. `τ_Z^{-2}`.
    pub fn integral(&self) -> Result<Estimate> {
        if let Family::Polynomial(n) = self.base.family {
            if n < 2 {
                return Err(Error::DivergentIntegral);
            }
        }
        let reach = 64.0 * self.base.cutoff.max(1.0 / self.beta);
        let spec = QuadratureSpec::with_tolerances(1e-15, 1e-12).with_splits(self.natural_splits(reach));
        numerics::integrate_line(|w| self.density(w), &spec).map_err(|e| match e {
            Error::NoConvergence { .. } => Error::DivergentIntegral,
            other => other,
        })
    }
}

fn ladder(out: &mut Vec<f64>, start: f64, limit: f64, sign: f64) {
    if !(start > 0.0 && start.is_finite()) {
        return;
    }
    let mut p = start;
    while p <= limit && out.len() < 256 {
        out.push(sign * p);
        p *= 2.0;
    }
}

pub fn bare_density(ff: &FormFactor, omega: f64) -> f64 {
    ff.density(omega)
}

pub fn thermal_density(tsd: &ThermalSpectralDensity, omega: f64) -> f64 {
    tsd.density(omega)
}

/// `W = ∫|ω| κ / ∫ κ`, evaluated by quadrature on the bare density.
pub fn bandwidth(ff: &FormFactor) -> Result<f64> {
    if let Family::Polynomial(n) = ff.family {
        if n < 2 {
            return Err(Error::DivergentMoment { exponent: n });
        }
    }
    let unit = FormFactor { coupling: 1.0, ..*ff };
    let reach = 128.0 * ff.cutoff;
    let mut splits = alloc::vec![0.0];
    ladder(&mut splits, 0.125 * unit.peak(), reach, 1.0);
    let spec = QuadratureSpec::with_tolerances(1e-300, 1e-13).with_splits(splits);
    let moment = numerics::integrate_interval(|w| w * unit.density(w), 0.0, f64::INFINITY, &spec)?;
    let mass = numerics::integrate_interval(|w| unit.density(w), 0.0, f64::INFINITY, &spec)?;
    Ok(moment.value / mass.value)
}

/// `τ_Z = [∫ κ^β]^{-1/2}`.
pub fn zeno_time(tsd: &ThermalSpectralDensity) -> Result<f64> {
    let total = tsd.integral()?.value;
    if total == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / sqrt(total))
}

/// Cutoffs `(Λ_a, Λ_b)` that give both families the bandwidth `bandwidth`.
pub fn match_cutoffs(family_a: Family, family_b: Family, bandwidth: f64) -> Result<(f64, f64)> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidParameter("bandwidth must be finite and positive"));
    }
    Ok((
        bandwidth / family_a.bandwidth_over_cutoff()?,
        bandwidth / family_b.bandwidth_over_cutoff()?,
    ))
}
