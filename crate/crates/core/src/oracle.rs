//! Exact zero-temperature reference dynamics: a qubit, optionally with an
//! ancilla level `|M⟩` degenerate with `|↓⟩`, coupled to `M` discrete bath
//! modes in the single-excitation sector.
//!
//! Analytic rates are second order in the coupling, so agreement with this
//! oracle degrades as `O(g²)` relative.
//!
//! Zeno survival is selective: the probability of finding `|↑⟩` at every one
//! of `N` measurements. Projection onto `|↑⟩` returns the state to
//! `|↑, vac⟩`, so the sequence factorizes as `P₁(τ)^N`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, log, sin, sqrt};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numerics;
use crate::spectral::FormFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Midpoint rule on a uniform grid.
    Linear,
    GaussLegendre,
}

/// Modes `ω_i` in `(0, ω_max)` with couplings `g_i = √(κ(ω_i) w_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    frequencies: Vec<f64>,
    couplings: Vec<f64>,
    omega_max: f64,
}

impl DiscretizedBath {
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    /// `Σ g_i²`, the discrete counterpart of `∫₀^{ω_max} κ`.
    pub fn coupling_sum(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }

    /// `2π / max_i(ω_{i+1} − ω_i)`: the earliest partial revival.
    pub fn recurrence_time(&self) -> f64 {
        let gap = self
            .frequencies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(self.frequencies[0].min(self.omega_max - self.frequencies[self.len() - 1]) * 2.0, f64::max);
        2.0 * PI / gap
    }

    pub fn ensure_span(&self, span: f64) -> Result<()> {
        let recurrence_time = self.recurrence_time();
        if recurrence_time < span {
            return Err(Error::InsufficientModes { recurrence_time, span });
        }
        Ok(())
    }
}

pub fn build_bath(ff: &FormFactor, omega_max: f64, modes: usize, scheme: Scheme) -> Result<DiscretizedBath> {
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::InvalidParameter("omega_max must be finite and positive"));
    }
    if modes < 2 {
        return Err(Error::InvalidParameter("a bath needs at least two modes"));
    }
    let (frequencies, weights): (Vec<f64>, Vec<f64>) = match scheme {
        Scheme::Linear => {
            let d = omega_max / modes as f64;
            (0..modes).map(|i| ((i as f64 + 0.5) * d, d)).unzip()
        }
        Scheme::GaussLegendre => {
            let (x, w) = numerics::gauss_legendre(modes);
            let half = 0.5 * omega_max;
            x.iter().zip(&w).map(|(&x, &w)| (half * (x + 1.0), half * w)).unzip()
        }
    };
    let couplings = frequencies.iter().zip(&weights).map(|(&f, &w)| sqrt(ff.density(f) * w)).collect();
    Ok(DiscretizedBath { frequencies, couplings, omega_max })
}

/// Qubit plus bath, optionally with the ancilla, diagonalized once.
///
/// Basis: `|↑, vac⟩`, then `|↓, 1_i⟩` for each mode, then (with ancilla)
/// `|M, 1_i⟩`. Diagonal energies `Ω/2`, `−Ω/2 + ω_i`, `−Ω/2 + ω_i`.
#[derive(Debug, Clone)]
pub struct SingleExcitationModel {
    omega: f64,
    ancilla_coupling: Option<f64>,
    modes: usize,
    recurrence_time: f64,
    energies: Vec<f64>,
    /// Columns are eigenvectors.
    vectors: DMatrix<f64>,
}

impl SingleExcitationModel {
    pub fn free(bath: &DiscretizedBath, omega: f64) -> Result<Self> {
        Self::build(bath, omega, None)
    }

    /// `K` couples `|↓, 1_i⟩` and `|M, 1_i⟩`; `K = 0` leaves the ancilla dark.
    pub fn with_ancilla(bath: &DiscretizedBath, omega: f64, coupling: f64) -> Result<Self> {
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParameter("ancilla coupling must be finite and non-negative"));
        }
        Self::build(bath, omega, Some(coupling))
    }

    fn build(bath: &DiscretizedBath, omega: f64, ancilla_coupling: Option<f64>) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter("system frequency must be finite and positive"));
        }
        let hamiltonian = hamiltonian(bath, omega, ancilla_coupling);
        let eig = SymmetricEigen::new(hamiltonian);
        Ok(Self {
            omega,
            ancilla_coupling,
            modes: bath.len(),
            recurrence_time: bath.recurrence_time(),
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn ancilla_coupling(&self) -> Option<f64> {
        self.ancilla_coupling
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn recurrence_time(&self) -> f64 {
        self.recurrence_time
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter("time must be finite and non-negative"));
        }
        if t > self.recurrence_time {
            return Err(Error::RecurrenceWindowExceeded { t, recurrence_time: self.recurrence_time });
        }
        Ok(())
    }

    /// Eigenbasis coordinates of `|↑, vac⟩`.
    fn initial_coordinates(&self) -> Vec<(f64, f64)> {
        (0..self.dimension()).map(|k| (self.vectors[(0, k)], 0.0)).collect()
    }

    /// `⟨↑, vac| ψ⟩` for a state given by eigenbasis coordinates.
    fn upper_amplitude(&self, coords: &[(f64, f64)]) -> (f64, f64) {
        coords
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, c)| (re + self.vectors[(0, k)] * c.0, im + self.vectors[(0, k)] * c.1))
    }

    fn propagate(&self, coords: &mut [(f64, f64)], t: f64) {
        for (c, &e) in coords.iter_mut().zip(&self.energies) {
            let (s, co) = (sin(e * t), cos(e * t));
            *c = (c.0 * co + c.1 * s, c.1 * co - c.0 * s);
        }
    }

    /// Full state `e^{−iHt}|↑, vac⟩` in the site basis, as `(re, im)` pairs.
    pub fn state_at(&self, t: f64) -> Result<Vec<(f64, f64)>> {
        self.check_time(t)?;
        let mut coords = self.initial_coordinates();
        self.propagate(&mut coords, t);
        Ok(self.to_site_basis(&coords))
    }

    fn to_site_basis(&self, coords: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let d = self.dimension();
        (0..d)
            .map(|j| {
                coords.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
                    let v = self.vectors[(j, k)];
                    (re + v * c.0, im + v * c.1)
                })
            })
            .collect()
    }

    /// `U_k = P_↑ − P_rest` applied in eigenbasis coordinates:
    /// `c ↦ 2⟨↑|ψ⟩ v₀ − c`.
    fn kick(&self, coords: &mut [(f64, f64)]) {
        let a = self.upper_amplitude(coords);
        for (k, c) in coords.iter_mut().enumerate() {
            let v = self.vectors[(0, k)];
            *c = (2.0 * a.0 * v - c.0, 2.0 * a.1 * v - c.1);
        }
    }
}

fn hamiltonian(bath: &DiscretizedBath, omega: f64, ancilla: Option<f64>) -> DMatrix<f64> {
    let m = bath.len();
    let dim = if ancilla.is_some() { 2 * m + 1 } else { m + 1 };
    let mut h = DMatrix::zeros(dim, dim);
    h[(0, 0)] = 0.5 * omega;
    for (i, (&w, &g)) in bath.frequencies.iter().zip(&bath.couplings).enumerate() {
        let lower = 1 + i;
        h[(lower, lower)] = -0.5 * omega + w;
        h[(0, lower)] = g;
        h[(lower, 0)] = g;
        if let Some(k) = ancilla {
            let dark = 1 + m + i;
            h[(dark, dark)] = -0.5 * omega + w;
            h[(lower, dark)] = k;
            h[(dark, lower)] = k;
        }
    }
    h
}

/// Explicit Hamiltonian, for inspection and tests.
pub fn model_hamiltonian(bath: &DiscretizedBath, omega: f64, ancilla_coupling: Option<f64>) -> DMatrix<f64> {
    hamiltonian(bath, omega, ancilla_coupling)
}

/// `|⟨↑, vac| e^{−iHt} |↑, vac⟩|²`.
pub fn free_survival(model: &SingleExcitationModel, t: f64) -> Result<f64> {
    model.check_time(t)?;
    let (re, im) = model.energies.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &e)| {
        let w = model.vectors[(0, k)] * model.vectors[(0, k)];
        (re + w * cos(e * t), im - w * sin(e * t))
    });
    Ok(re * re + im * im)
}

/// Survival through `N` measurement cycles of period `τ`.
pub fn zeno_survival(model: &SingleExcitationModel, tau: f64, cycles: u32) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter("measurement period must be positive"));
    }
    if cycles == 0 {
        return Err(Error::InvalidParameter("at least one measurement is required"));
    }
    let p1 = free_survival(model, tau)?;
    Ok(libm::pow(p1, cycles as f64))
}

/// `−ln P₁(τ) / τ`.
pub fn zeno_effective_rate(model: &SingleExcitationModel, tau: f64) -> Result<f64> {
    let p1 = zeno_survival(model, tau, 1)?;
    if !(p1 > 0.0) {
        return Err(Error::NonPositiveProbability { t: tau, p: p1 });
    }
    Ok(-log(p1) / tau)
}

/// Survival after `N` periods of free evolution each followed by a kick.
pub fn kick_survival(model: &SingleExcitationModel, tau: f64, kicks: u32) -> Result<f64> {
    let trace = kick_trace(model, tau, kicks)?;
    Ok(trace.last().map_or(1.0, |s| s.1))
}

/// `(t, P)` after every even number of kicks, up to `N`.
pub fn kick_trace(model: &SingleExcitationModel, tau: f64, kicks: u32) -> Result<Vec<(f64, f64)>> {
    Ok(run_kicks(model, tau, kicks)?.0)
}

/// Full site-basis state after `N` kicks.
pub fn kick_final_state(model: &SingleExcitationModel, tau: f64, kicks: u32) -> Result<Vec<(f64, f64)>> {
    let (_, coords) = run_kicks(model, tau, kicks)?;
    Ok(model.to_site_basis(&coords))
}

/// Stroboscopic `(t, P)` samples and the final eigenbasis coordinates.
type KickRun = (Vec<(f64, f64)>, Vec<(f64, f64)>);

fn run_kicks(model: &SingleExcitationModel, tau: f64, kicks: u32) -> Result<KickRun> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter("kick period must be finite and positive"));
    }
    if kicks % 2 == 1 {
        return Err(Error::OddKickCount(kicks));
    }
    model.check_time(tau * kicks as f64)?;
    let mut coords = model.initial_coordinates();
    let mut samples = Vec::with_capacity(kicks as usize / 2);
    for n in 1..=kicks {
        model.propagate(&mut coords, tau);
        model.kick(&mut coords);
        if n % 2 == 0 {
            let (re, im) = model.upper_amplitude(&coords);
            samples.push((n as f64 * tau, re * re + im * im));
        }
    }
    Ok((samples, coords))
}

/// Kick decay rate as the slope of `−ln P` over the second half of the
/// stroboscopic trace. The first kicks leave a constant offset in `−ln P`
/// that dwarfs `N τ γ^k` when the kick rate is small, so `−ln P_N/(Nτ)`
/// is not used.
pub fn kick_effective_rate(model: &SingleExcitationModel, tau: f64, kicks: u32) -> Result<DecayFit> {
    let trace = kick_trace(model, tau, kicks)?;
    fit_decay_rate(&trace[trace.len() / 2..])
}

/// Survival of `|↑, vac⟩` with the ancilla continuously coupled.
pub fn continuous_survival(model: &SingleExcitationModel, t: f64) -> Result<f64> {
    if model.ancilla_coupling.is_none() {
        return Err(Error::InvalidParameter("continuous coupling needs a model with the ancilla level"));
    }
    free_survival(model, t)
}

/// Sum of `|ψ_j|²` over the full basis.
pub fn total_probability(state: &[(f64, f64)]) -> f64 {
    state.iter().map(|(re, im)| re * re + im * im).sum()
}

/// Least-squares exponential fit of a survival curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    pub fit_window: (f64, f64),
    /// Root-mean-square residual of `−ln P`.
    pub residual: f64,
}

pub const MIN_FIT_SAMPLES: usize = 10;

/// Slope of `−ln P` against `t` by ordinary least squares.
pub fn fit_decay_rate(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::WindowTooShort { samples: samples.len(), required: MIN_FIT_SAMPLES });
    }
    let mut ys = Vec::with_capacity(samples.len());
    for &(t, p) in samples {
        if !(p > 0.0) {
            return Err(Error::NonPositiveProbability { t, p });
        }
        ys.push(-log(p));
    }
    let n = samples.len() as f64;
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (s, y) in samples.iter().zip(&ys) {
        let dt = s.0 - t_mean;
        sxy += dt * (y - y_mean);
        sxx += dt * dt;
    }
    if !(sxx > 0.0) {
        return Err(Error::InvalidParameter("fit samples need distinct times"));
    }
    let rate = sxy / sxx;
    let intercept = y_mean - rate * t_mean;
    let residual = sqrt(
        samples.iter().zip(&ys).map(|(s, y)| (y - intercept - rate * s.0) * (y - intercept - rate * s.0)).sum::<f64>()
            / n,
    );
    let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.0), hi.max(s.0)));
    Ok(DecayFit { rate, fit_window: (lo, hi), residual })
}

/// Fit window `[0.05, 0.45]` times the recurrence time: past the initial
/// non-exponential transient and well before the first revival.
pub fn reference_window(model: &SingleExcitationModel) -> (f64, f64) {
    let t = model.recurrence_time();
    (0.05 * t, 0.45 * t)
}

/// Evenly spaced survival samples on `[t_min, t_max]`, fitted.
pub fn fit_survival<F>(survival: F, t_min: f64, t_max: f64, samples: usize) -> Result<DecayFit>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(t_max > t_min && t_min >= 0.0) {
        return Err(Error::InvalidParameter("fit window needs 0 <= t_min < t_max"));
    }
    if samples < 2 {
        return Err(Error::WindowTooShort { samples, required: MIN_FIT_SAMPLES });
    }
    let step = (t_max - t_min) / (samples - 1) as f64;
    let pts = (0..samples)
        .map(|i| {
            let t = t_min + i as f64 * step;
            survival(t).map(|p| (t, p))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_decay_rate(&pts)
}
