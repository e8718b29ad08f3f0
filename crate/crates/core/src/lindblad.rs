//! Markovian qubit dynamics with emission, absorption and dephasing
//! channels, and the dressed three-level system produced by continuous
//! coupling to an ancilla level.
//!
//! Basis order for the qubit is `(|↑⟩, |↓⟩)`; the Bloch vector follows
//! `ρ = (1 + x σ_x + y σ_y + z σ_z)/2`, so `z = p↑ − p↓`.

use libm::{exp, fabs, sqrt};
use nalgebra::{Complex, ComplexField, Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::rates::{self, ControlStrategy, DressedRates};
use crate::spectral::ThermalSpectralDensity;

type C64 = Complex<f64>;

const STATE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    rho: Matrix2<C64>,
}

impl QubitDensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix2<C64>) -> Result<Self> {
        let state = Self { rho };
        state.validate()?;
        Ok(state)
    }

    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let half = 0.5;
        let rho = Matrix2::new(
            C64::new(half * (1.0 + z), 0.0),
            C64::new(half * x, -half * y),
            C64::new(half * x, half * y),
            C64::new(half * (1.0 - z), 0.0),
        );
        Self::new(rho)
    }

    pub fn excited() -> Self {
        Self::diagonal(1.0)
    }

    pub fn ground() -> Self {
        Self::diagonal(0.0)
    }

    pub fn maximally_mixed() -> Self {
        Self::diagonal(0.5)
    }

    fn diagonal(p_up: f64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self { rho: Matrix2::new(C64::new(p_up, 0.0), zero, zero, C64::new(1.0 - p_up, 0.0)) }
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.rho
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.rho;
        if r.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidState("non-finite entry"));
        }
        if fabs(r[(0, 0)].im) > STATE_TOL
            || fabs(r[(1, 1)].im) > STATE_TOL
            || (r[(0, 1)] - r[(1, 0)].conj()).modulus() > STATE_TOL
        {
            return Err(Error::InvalidState("not Hermitian"));
        }
        if fabs(r[(0, 0)].re + r[(1, 1)].re - 1.0) > STATE_TOL {
            return Err(Error::InvalidState("trace differs from one"));
        }
        if self.min_eigenvalue() < -POSITIVITY_TOL {
            return Err(Error::InvalidState("negative eigenvalue"));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.rho[(0, 0)].re + self.rho[(1, 1)].re
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.rho[(0, 0)].re;
        let d = self.rho[(1, 1)].re;
        let mean = 0.5 * (a + d);
        let radius = sqrt(0.25 * (a - d) * (a - d) + self.rho[(0, 1)].norm_sqr());
        (mean - radius, mean + radius)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().0
    }

    pub fn p_up(&self) -> f64 {
        self.rho[(0, 0)].re
    }

    pub fn bloch(&self) -> [f64; 3] {
        let c = self.rho[(0, 1)];
        [2.0 * c.re, -2.0 * c.im, self.rho[(0, 0)].re - self.rho[(1, 1)].re]
    }

    pub fn purity(&self) -> f64 {
        let r = &self.rho;
        r[(0, 0)].re * r[(0, 0)].re + r[(1, 1)].re * r[(1, 1)].re + 2.0 * r[(0, 1)].norm_sqr()
    }

    /// `|ρ_↑↓|`.
    pub fn coherence(&self) -> f64 {
        self.rho[(0, 1)].modulus()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub p_up: f64,
    pub bloch: [f64; 3],
    pub purity: f64,
    pub coherence: f64,
}

pub fn observables(rho: &QubitDensityMatrix) -> Result<Observables> {
    rho.validate()?;
    Ok(Observables { p_up: rho.p_up(), bloch: rho.bloch(), purity: rho.purity(), coherence: rho.coherence() })
}

/// `𝓛ρ = −i[Ωσ_z/2, ρ] + γ₊₁ D[σ₋]ρ + γ₋₁ D[σ₊]ρ + γ₀ D[σ_z]ρ`,
/// with `D[L]ρ = LρL† − {L†L, ρ}/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitGenerator {
    pub omega: f64,
    pub dephasing: f64,
    pub emission: f64,
    pub absorption: f64,
}

impl QubitGenerator {
    pub fn new(omega: f64, dephasing: f64, emission: f64, absorption: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::InvalidParameter("qubit frequency must be finite"));
        }
        for rate in [dephasing, emission, absorption] {
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(Error::InvalidParameter("rates must be finite and non-negative"));
            }
        }
        Ok(Self { omega, dephasing, emission, absorption })
    }

    /// Population relaxation rate `γ₊₁ + γ₋₁`.
    pub fn longitudinal_rate(&self) -> f64 {
        self.emission + self.absorption
    }

    /// Coherence decay rate `2γ₀ + (γ₊₁ + γ₋₁)/2`.
    pub fn transverse_rate(&self) -> f64 {
        2.0 * self.dephasing + 0.5 * self.longitudinal_rate()
    }

    /// `γ₋₁ = e^{−βΩ} γ₊₁` to within 1e−10 relative.
    pub fn satisfies_detailed_balance(&self, beta: f64) -> bool {
        let expected = if beta == f64::INFINITY { 0.0 } else { exp(-beta * self.omega) * self.emission };
        let scale = expected.max(self.absorption);
        fabs(self.absorption - expected) <= 1e-10 * scale
    }
}

/// Generator whose flip channels come from `tsd_flip` and whose dephasing
/// channel comes from `tsd_dephase`, each dressed by `strategy`.
///
/// The controlled dephasing channel evaluates the strategy's rate formula at
/// transition frequency zero. Only the Zeno version of that substitution is
/// standard; the kick and continuous variants are experimental.
pub fn build_qubit_generator(
    tsd_flip: &ThermalSpectralDensity,
    tsd_dephase: &ThermalSpectralDensity,
    omega: f64,
    strategy: ControlStrategy,
) -> Result<QubitGenerator> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter("system frequency must be finite and positive"));
    }
    let emission = rates::controlled_rate_at(tsd_flip, omega, strategy)?;
    let absorption = rates::controlled_rate_at(tsd_flip, -omega, strategy)?;
    let dephasing = if tsd_dephase.base().coupling() == 0.0 {
        0.0
    } else {
        match strategy {
            ControlStrategy::Free => rates::dephasing_rate(tsd_dephase),
            _ => rates::controlled_rate_at(tsd_dephase, 0.0, strategy)?,
        }
    };
    QubitGenerator::new(omega, dephasing, emission, absorption)
}

/// Exact solution of the Bloch equations after time `t ≥ 0`.
pub fn evolve(rho0: &QubitDensityMatrix, gen: &QubitGenerator, t: f64) -> Result<QubitDensityMatrix> {
    rho0.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter("evolution time must be finite and non-negative"));
    }
    let g1 = gen.longitudinal_rate();
    let z0 = rho0.p_up() - (1.0 - rho0.p_up());
    let z = if g1 > 0.0 {
        let z_inf = (gen.absorption - gen.emission) / g1;
        z_inf + (z0 - z_inf) * exp(-g1 * t)
    } else {
        z0
    };
    let phase = C64::new(-gen.transverse_rate() * t, -gen.omega * t).exp();
    let c = rho0.rho[(0, 1)] * phase;
    let p_up = 0.5 * (1.0 + z);
    let rho = Matrix2::new(C64::new(p_up, 0.0), c, c.conj(), C64::new(1.0 - p_up, 0.0));
    Ok(QubitDensityMatrix { rho })
}

/// Diagonal fixed point with `p↑/p↓ = γ₋₁/γ₊₁`.
pub fn stationary_state(gen: &QubitGenerator) -> Result<QubitDensityMatrix> {
    let g1 = gen.longitudinal_rate();
    if !(g1 > 0.0) {
        return Err(Error::NoRelaxation);
    }
    Ok(QubitDensityMatrix::diagonal(gen.absorption / g1))
}

/// Populations of `|↑⟩` and of the dressed states
/// `|±⟩ = (|↓⟩ ± |M⟩)/√2`, with energies `Ω/2` and `−Ω/2 ± K`.
///
/// `dp↑/dt = −(γ₊ + γ₋)/2 p↑ + γ̄₊/2 p₊ + γ̄₋/2 p₋`,
/// `dp±/dt = γ±/2 p↑ − γ̄±/2 p±`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelGenerator {
    pub omega: f64,
    pub coupling: f64,
    pub rates: DressedRates,
}

impl ThreeLevelGenerator {
    /// Total decay rate out of `|↑⟩`.
    pub fn upper_level_rate(&self) -> f64 {
        self.rates.upper_level_rate()
    }

    /// Rate matrix acting on `(p↑, p₊, p₋)`.
    pub fn rate_matrix(&self) -> Matrix3<f64> {
        let r = &self.rates;
        Matrix3::new(
            -0.5 * (r.down_plus + r.down_minus),
            0.5 * r.up_plus,
            0.5 * r.up_minus,
            0.5 * r.down_plus,
            -0.5 * r.up_plus,
            0.0,
            0.5 * r.down_minus,
            0.0,
            -0.5 * r.up_minus,
        )
    }

    pub fn evolve_populations(&self, populations: [f64; 3], t: f64) -> Result<[f64; 3]> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter("evolution time must be finite and non-negative"));
        }
        let total: f64 = populations.iter().sum();
        if populations.iter().any(|p| !(*p >= -POSITIVITY_TOL)) || fabs(total - 1.0) > STATE_TOL {
            return Err(Error::InvalidState("populations must be non-negative and sum to one"));
        }
        let p = expm(&(self.rate_matrix() * t)) * Vector3::from(populations);
        Ok([p[0], p[1], p[2]])
    }

    /// Unique stationary populations; needs both excitation channels `γ̄±`
    /// open.
    pub fn stationary_populations(&self) -> Result<[f64; 3]> {
        let r = &self.rates;
        let mut weights = [1.0, 0.0, 0.0];
        for (slot, down, up) in [(1, r.down_plus, r.up_plus), (2, r.down_minus, r.up_minus)] {
            if !(up > 0.0) {
                return Err(Error::NoRelaxation);
            }
            weights[slot] = down / up;
        }
        let total: f64 = weights.iter().sum();
        Ok([weights[0] / total, weights[1] / total, weights[2] / total])
    }
}

/// Matrix exponential by scaling and squaring around a Taylor polynomial.
fn expm(a: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = a.column_iter().map(|c| c.iter().map(|x| fabs(*x)).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let b = a * scale;
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..=18 {
        term = term * b / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `(p↑, p↓, p_M)` from dressed-basis populations without `±` coherence.
pub fn undressed_populations(dressed: [f64; 3]) -> [f64; 3] {
    let lower = 0.5 * (dressed[1] + dressed[2]);
    [dressed[0], lower, lower]
}

pub fn build_three_level_generator(
    tsd: &ThermalSpectralDensity,
    omega: f64,
    coupling: f64,
) -> Result<ThreeLevelGenerator> {
    let rates = rates::dressed_rates(tsd, omega, coupling)?;
    Ok(ThreeLevelGenerator { omega, coupling, rates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::FormFactor;

    fn thermal(beta: f64) -> ThermalSpectralDensity {
        ThermalSpectralDensity::new(FormFactor::exponential(1.0, 0.5).unwrap(), beta).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(QubitDensityMatrix::from_bloch(0.0, 0.0, 1.0).is_ok());
        assert!(QubitDensityMatrix::from_bloch(1.0, 0.0, 1.0).is_err());
        let zero = C64::new(0.0, 0.0);
        let bad_trace = Matrix2::new(C64::new(0.7, 0.0), zero, zero, C64::new(0.7, 0.0));
        assert!(QubitDensityMatrix::new(bad_trace).is_err());
        let non_hermitian = Matrix2::new(C64::new(0.5, 0.0), C64::new(0.1, 0.0), zero, C64::new(0.5, 0.0));
        assert!(QubitDensityMatrix::new(non_hermitian).is_err());
    }

    #[test]
    fn observables_examples() {
        let mixed = observables(&QubitDensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(mixed.purity, 0.5);
        let up = observables(&QubitDensityMatrix::excited()).unwrap();
        assert_eq!(up.bloch, [0.0, 0.0, 1.0]);
        let s = QubitDensityMatrix::from_bloch(0.3, -0.4, 0.1).unwrap();
        let b = s.bloch();
        assert!((b[0] - 0.3).abs() < 1e-15 && (b[1] + 0.4).abs() < 1e-15 && (b[2] - 0.1).abs() < 1e-15);
        assert!((s.coherence() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evolve_identity_at_zero_time() {
        let gen = QubitGenerator::new(0.3, 0.1, 0.2, 0.05).unwrap();
        let s = QubitDensityMatrix::from_bloch(0.3, -0.4, 0.1).unwrap();
        let out = evolve(&s, &gen, 0.0).unwrap();
        assert!((out.matrix() - s.matrix()).norm() < 1e-15);
    }

    #[test]
    fn pure_emission_population() {
        let gen = QubitGenerator::new(1.0, 0.0, 0.7, 0.0).unwrap();
        for t in [0.1, 1.0, 5.0] {
            let p = evolve(&QubitDensityMatrix::excited(), &gen, t).unwrap().p_up();
            assert!((p - (-0.7 * t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn coherence_precesses_and_decays() {
        let gen = QubitGenerator::new(2.0, 0.1, 0.2, 0.05).unwrap();
        let s = QubitDensityMatrix::from_bloch(1.0, 0.0, 0.0).unwrap();
        let t = 0.8;
        let out = evolve(&s, &gen, t).unwrap();
        let c = out.matrix()[(0, 1)];
        let expected = 0.5 * (-gen.transverse_rate() * t).exp();
        assert!((c.modulus() - expected).abs() < 1e-15);
        assert!((c.argument() + 2.0 * t).abs() < 1e-12);
    }

    #[test]
    fn free_generator_detailed_balance() {
        let tsd = thermal(50.0);
        let gen = build_qubit_generator(&tsd, &tsd, 0.01, ControlStrategy::Free).unwrap();
        assert!(gen.satisfies_detailed_balance(50.0));
        assert!(!gen.satisfies_detailed_balance(40.0));
        let ss = stationary_state(&gen).unwrap();
        let ratio = ss.p_up() / (1.0 - ss.p_up());
        assert!((ratio - (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_dephasing_coupling() {
        let tsd = thermal(50.0);
        let off = ThermalSpectralDensity::new(FormFactor::exponential(0.0, 0.5).unwrap(), 50.0).unwrap();
        for strategy in [ControlStrategy::Free, ControlStrategy::ZenoMeasurement { tau: 1.0 }] {
            let gen = build_qubit_generator(&tsd, &off, 0.01, strategy).unwrap();
            assert_eq!(gen.dephasing, 0.0);
        }
    }

    #[test]
    fn stationary_edge_cases() {
        let gen = QubitGenerator::new(1.0, 0.3, 0.0, 0.0).unwrap();
        assert_eq!(stationary_state(&gen), Err(Error::NoRelaxation));
        let cold = build_qubit_generator(
            &ThermalSpectralDensity::zero_temperature(FormFactor::exponential(1.0, 0.5).unwrap()),
            &thermal(1.0),
            0.2,
            ControlStrategy::Free,
        )
        .unwrap();
        assert_eq!(stationary_state(&cold).unwrap().p_up(), 0.0);
        let hot = QubitGenerator::new(1.0, 0.0, 0.4, 0.4).unwrap();
        assert_eq!(stationary_state(&hot).unwrap().p_up(), 0.5);
    }

    #[test]
    fn three_level_reduces_at_zero_coupling() {
        let tsd = thermal(5.0);
        let gen = build_three_level_generator(&tsd, 0.3, 0.0).unwrap();
        let gamma = rates::golden_rule_rate(&tsd, 0.3);
        assert!((gen.upper_level_rate() - gamma).abs() < 1e-15);
        assert!((gen.rate_matrix()[(0, 0)] + gamma).abs() < 1e-15);

        // Without a return channel the upper level decays exactly like the qubit.
        let cold = ThermalSpectralDensity::zero_temperature(FormFactor::exponential(1.0, 0.5).unwrap());
        let gen = build_three_level_generator(&cold, 0.3, 0.0).unwrap();
        let q = build_qubit_generator(&cold, &cold, 0.3, ControlStrategy::Free).unwrap();
        for t in [0.5, 2.0, 10.0] {
            let p = gen.evolve_populations([1.0, 0.0, 0.0], t).unwrap();
            let qp = evolve(&QubitDensityMatrix::excited(), &q, t).unwrap().p_up();
            assert!((p[0] - qp).abs() < 1e-13, "{} vs {}", p[0], qp);
            assert!((p[1] - p[2]).abs() < 1e-15);
        }
    }

    #[test]
    fn three_level_stationary_is_dressed_gibbs() {
        let beta = 3.0;
        let (omega, k) = (0.4, 0.9);
        let gen = build_three_level_generator(&thermal(beta), omega, k).unwrap();
        let p = gen.stationary_populations().unwrap();
        assert!((p[1] / p[0] - (beta * (omega - k)).exp()).abs() < 1e-10 * (beta * (omega - k)).exp());
        assert!((p[2] / p[0] - (beta * (omega + k)).exp()).abs() < 1e-10 * (beta * (omega + k)).exp());
        let late = gen.evolve_populations([1.0, 0.0, 0.0], 1e5).unwrap();
        for i in 0..3 {
            assert!((late[i] - p[i]).abs() < 1e-9);
        }
        assert_eq!(undressed_populations([0.2, 0.5, 0.3]), [0.2, 0.4, 0.4]);
    }

    #[test]
    fn expm_matches_diagonal_and_nilpotent_cases() {
        let d = Matrix3::from_diagonal(&Vector3::new(-3.0, 0.5, 40.0));
        let e = expm(&d);
        for (i, x) in [-3.0f64, 0.5, 40.0].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() <= 1e-13 * x.exp());
        }
        let n = Matrix3::new(0.0, 2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0);
        let expected = Matrix3::new(1.0, 2.0, 3.0, 0.0, 1.0, 3.0, 0.0, 0.0, 1.0);
        assert!((expm(&n) - expected).norm() < 1e-14);
    }

    #[test]
    fn three_level_zero_temperature_has_no_unique_fixed_point() {
        let tsd = ThermalSpectralDensity::zero_temperature(FormFactor::exponential(1.0, 0.5).unwrap());
        let gen = build_three_level_generator(&tsd, 0.2, 0.1).unwrap();
        assert_eq!(gen.stationary_populations(), Err(Error::NoRelaxation));
    }
}
