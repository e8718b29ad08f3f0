use clap::{Args, ValueEnum};
use rayon::prelude::*;
use zenolab_core::oracle::{
    build_bath, continuous_survival, fit_survival, free_survival, kick_effective_rate, reference_window,
    zeno_effective_rate, DiscretizedBath, Scheme, SingleExcitationModel,
};
use zenolab_core::rates::{continuous_rate, golden_rule_rate, kick_rate_converged, zeno_rate};
use zenolab_core::spectral::ThermalSpectralDensity;

use crate::commands::sweep::KICK_TOL;
use crate::config::{stamp, Common, Physics};
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleProtocol {
    Free,
    Zeno,
    Kick,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Linear,
    GaussLegendre,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Protocol applied to the exactly solved model.
    #[arg(long, env = "ZENOLAB_PROTOCOL", value_enum, default_value_t = OracleProtocol::Free)]
    pub protocol: OracleProtocol,
    /// Number of bath modes [default: 400, or 600 for kicks].
    #[arg(long, env = "ZENOLAB_MODES")]
    pub modes: Option<usize>,
    /// Highest bath frequency in units of the cutoff [default: 12, or 20 for kicks].
    #[arg(long, env = "ZENOLAB_OMEGA_MAX")]
    pub omega_max: Option<f64>,
    /// Bath discretization.
    #[arg(long, env = "ZENOLAB_SCHEME", value_enum, default_value_t = SchemeArg::Linear)]
    pub scheme: SchemeArg,
    /// Periods (zeno, kick) or couplings (continuous), comma separated.
    #[arg(long, env = "ZENOLAB_PARAMS", value_delimiter = ',')]
    pub params: Vec<f64>,
    /// Number of kicks; must be even.
    #[arg(long, env = "ZENOLAB_KICKS", default_value_t = 200)]
    pub kicks: u32,
    /// Survival samples in each fit window.
    #[arg(long, env = "ZENOLAB_SAMPLES", default_value_t = 200)]
    pub samples: usize,
}

/// Fully resolved oracle run, in bandwidth units.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub protocol: OracleProtocol,
    pub modes: usize,
    /// In units of the cutoff.
    pub omega_max: f64,
    pub scheme: Scheme,
    pub params: Vec<f64>,
    pub kicks: u32,
    pub samples: usize,
}

impl OracleRun {
    pub fn reference(protocol: OracleProtocol) -> Self {
        let kick = protocol == OracleProtocol::Kick;
        let params = match protocol {
            OracleProtocol::Free => Vec::new(),
            OracleProtocol::Zeno => vec![0.1, 0.5, 2.0],
            OracleProtocol::Kick => vec![0.5],
            OracleProtocol::Continuous => vec![0.0, 5.0],
        };
        Self {
            protocol,
            modes: if kick { 600 } else { 400 },
            omega_max: if kick { 20.0 } else { 12.0 },
            scheme: Scheme::Linear,
            params,
            kicks: 200,
            samples: 200,
        }
    }
}

pub fn run(args: &OracleArgs) -> Result<Table> {
    let phys = args.common.resolve(0.1, 0.2)?;
    let mut run = OracleRun::reference(args.protocol);
    if let Some(m) = args.modes {
        run.modes = m;
    }
    if let Some(w) = args.omega_max {
        run.omega_max = w;
    }
    run.scheme = match args.scheme {
        SchemeArg::Linear => Scheme::Linear,
        SchemeArg::GaussLegendre => Scheme::GaussLegendre,
    };
    // Reference parameters are already in bandwidth units.
    if !args.params.is_empty() {
        run.params = args.params.iter().map(|&p| to_bandwidth(&phys, run.protocol, p)).collect();
    }
    run.kicks = args.kicks;
    run.samples = args.samples;
    let mut table = oracle_table(&phys, &run)?;
    stamp(&mut table, "oracle");
    Ok(table)
}

fn to_bandwidth(phys: &Physics, protocol: OracleProtocol, p: f64) -> f64 {
    match protocol {
        OracleProtocol::Continuous => phys.units.freq_in(p),
        _ => phys.units.time_in(p),
    }
}

fn from_bandwidth(phys: &Physics, protocol: OracleProtocol, p: f64) -> f64 {
    match protocol {
        OracleProtocol::Continuous => phys.units.freq_out(p),
        _ => phys.units.time_out(p),
    }
}

/// One row per parameter, comparing the fitted decay of the exact
/// single-excitation dynamics with the zero-temperature analytic rate.
pub fn oracle_table(phys: &Physics, run: &OracleRun) -> Result<Table> {
    phys.require_coupling()?;
    if run.kicks % 2 == 1 {
        return Err(CliError::Config(format!("--kicks must be even, got {}", run.kicks)));
    }
    if !(run.omega_max > 0.0 && run.omega_max.is_finite()) {
        return Err(CliError::Config(format!("--omega-max must be positive, got {}", run.omega_max)));
    }
    let needs_params = run.protocol != OracleProtocol::Free;
    if needs_params && run.params.is_empty() {
        return Err(CliError::Config("--params must list at least one value".into()));
    }
    if run.params.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(CliError::Config(format!("--params must be finite and non-negative, got {:?}", run.params)));
    }
    let ff = phys.form_factor()?;
    let cold = ThermalSpectralDensity::zero_temperature(ff);
    let bath = build_bath(&ff, run.omega_max * ff.cutoff(), run.modes, run.scheme)?;
    let params: Vec<Option<f64>> = if needs_params { run.params.iter().copied().map(Some).collect() } else { vec![None] };

    let rows = params
        .par_iter()
        .map(|&p| oracle_row(phys, run, &bath, &cold, p))
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&["param", "rate_oracle", "rate_analytic", "rel_gap", "fit_residual", "M", "window"]);
    table.note(phys.describe());
    table.note(format!(
        "protocol={:?} modes={} omega_max={}Lambda scheme={:?} kicks={} samples={} temperature=0 (--beta ignored)",
        run.protocol, run.modes, run.omega_max, run.scheme, run.kicks, run.samples
    ));
    table.note("analytic rates are second order in g; the exact dynamics differ at O(g^2) relative order");
    table.rows = rows;
    Ok(table)
}

fn oracle_row(
    phys: &Physics,
    run: &OracleRun,
    bath: &DiscretizedBath,
    cold: &ThermalSpectralDensity,
    param: Option<f64>,
) -> Result<Vec<Cell>> {
    let u = phys.units;
    let omega = phys.omega;
    let (oracle, analytic, residual, window) = match (run.protocol, param) {
        (OracleProtocol::Zeno, Some(tau)) => {
            let model = SingleExcitationModel::free(bath, omega)?;
            let rate = zeno_effective_rate(&model, tau)?;
            (rate, zeno_rate(cold, omega, tau)?, None, Some((0.0, tau)))
        }
        (OracleProtocol::Kick, Some(tau)) => {
            let model = SingleExcitationModel::with_ancilla(bath, omega, 0.0)?;
            let fit = kick_effective_rate(&model, tau, run.kicks)?;
            let series = kick_rate_converged(cold, omega, tau, KICK_TOL)?.gamma;
            (fit.rate, series, Some(fit.residual), Some(fit.fit_window))
        }
        (OracleProtocol::Continuous, Some(k)) => {
            let model = SingleExcitationModel::with_ancilla(bath, omega, k)?;
            let (lo, hi) = reference_window(&model);
            let fit = fit_survival(|t| continuous_survival(&model, t), lo, hi, run.samples)?;
            (fit.rate, continuous_rate(cold, omega, k)?, Some(fit.residual), Some(fit.fit_window))
        }
        _ => {
            let model = SingleExcitationModel::free(bath, omega)?;
            let (lo, hi) = reference_window(&model);
            let fit = fit_survival(|t| free_survival(&model, t), lo, hi, run.samples)?;
            (fit.rate, golden_rule_rate(cold, omega), Some(fit.residual), Some(fit.fit_window))
        }
    };
    Ok(vec![
        param.map(|p| from_bandwidth(phys, run.protocol, p)).into(),
        Cell::Num(u.freq_out(oracle)),
        Cell::Num(u.freq_out(analytic)),
        Cell::Num((oracle / analytic - 1.0).abs()),
        residual.into(),
        Cell::Int(run.modes as i64),
        window.map_or(Cell::Empty, |(lo, hi)| {
            Cell::Text(format!("{:.16e}:{:.16e}", u.time_out(lo), u.time_out(hi)))
        }),
    ])
}
