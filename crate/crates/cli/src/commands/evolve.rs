use std::str::FromStr;

use clap::{Args, ValueEnum};
use zenolab_core::lindblad::{build_qubit_generator, evolve, QubitDensityMatrix};
use zenolab_core::rates::ControlStrategy;
use zenolab_core::spectral::{FormFactor, ThermalSpectralDensity};

use crate::config::{stamp, Common, Grid, Physics};
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Free,
    Zeno,
    Kick,
    Continuous,
}

/// Initial state: `up`, `down`, `mixed`, `plus` or a Bloch vector `x,y,z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState(pub [f64; 3]);

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let v = match s.trim() {
            "up" => [0.0, 0.0, 1.0],
            "down" => [0.0, 0.0, -1.0],
            "mixed" => [0.0, 0.0, 0.0],
            "plus" => [1.0, 0.0, 0.0],
            other => {
                let parts: Vec<f64> = other
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
                    .collect::<std::result::Result<_, _>>()?;
                <[f64; 3]>::try_from(parts).map_err(|_| format!("expected up|down|mixed|plus|x,y,z, got {s:?}"))?
            }
        };
        Ok(Self(v))
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Control applied to the qubit.
    #[arg(long, env = "ZENOLAB_STRATEGY", value_enum, default_value_t = Protocol::Free)]
    pub strategy: Protocol,
    /// Measurement or kick period.
    #[arg(long, env = "ZENOLAB_TAU")]
    pub tau: Option<f64>,
    /// Continuous control coupling `K`.
    #[arg(long, env = "ZENOLAB_COUPLING")]
    pub coupling: Option<f64>,
    /// Coupling constant of the dephasing (`σ_z`) channel.
    #[arg(long, env = "ZENOLAB_G0", default_value_t = 0.0)]
    pub g0: f64,
    /// Initial state.
    #[arg(long, env = "ZENOLAB_RHO0", default_value = "up")]
    pub rho0: InitialState,
}

pub fn run(args: &EvolveArgs) -> Result<Table> {
    let phys = args.common.resolve(1.0, 0.01)?;
    let u = phys.units;
    let strategy = match args.strategy {
        Protocol::Free => ControlStrategy::Free,
        Protocol::Zeno => ControlStrategy::ZenoMeasurement { tau: u.time_in(required(args.tau, "--tau")?) },
        Protocol::Kick => ControlStrategy::BangBangKick { tau: u.time_in(required(args.tau, "--tau")?) },
        Protocol::Continuous => {
            ControlStrategy::ContinuousCoupling { coupling: u.freq_in(required(args.coupling, "--coupling")?) }
        }
    };
    let mut table = trace(&phys, args.g0, strategy, args.rho0, args.common.grid)?;
    table.note(format!("strategy={:?} g0={} rho0={:?}", strategy, args.g0, args.rho0.0));
    stamp(&mut table, "evolve");
    Ok(table)
}

fn required(x: Option<f64>, flag: &str) -> Result<f64> {
    x.ok_or_else(|| CliError::Config(format!("{flag} is required for this strategy")))
}

/// Observables on a time grid in user units; the default grid spans ten
/// relaxation times.
pub fn trace(
    phys: &Physics,
    g0: f64,
    strategy: ControlStrategy,
    rho0: InitialState,
    grid: Option<Grid>,
) -> Result<Table> {
    let u = phys.units;
    let flip = phys.density()?;
    let dephase = ThermalSpectralDensity::new(FormFactor::with_bandwidth(phys.family, g0, 1.0)?, phys.beta)?;
    let gen = build_qubit_generator(&flip, &dephase, phys.omega, strategy)?;
    let [x, y, z] = rho0.0;
    let rho = QubitDensityMatrix::from_bloch(x, y, z)?;

    let grid = match grid {
        Some(g) => g,
        None => {
            let rate = [gen.longitudinal_rate(), gen.transverse_rate()].into_iter().find(|r| *r > 0.0);
            let rate = rate.ok_or_else(|| CliError::Config("no relaxation at all; pass an explicit --grid".into()))?;
            Grid::lin(0.0, u.time_out(10.0 / rate), 201)
        }
    };
    grid.validate()?;
    if grid.lo < 0.0 {
        return Err(CliError::Config(format!("time grid must be non-negative, got {grid}")));
    }

    let mut table = Table::new(&["t", "p_up", "bloch_x", "bloch_y", "bloch_z", "purity"]);
    table.note(phys.describe());
    table.note(format!(
        "grid={grid} emission={} absorption={} dephasing={} in W units",
        gen.emission, gen.absorption, gen.dephasing
    ));
    for t in grid.values() {
        let state = evolve(&rho, &gen, u.time_in(t))?;
        let [bx, by, bz] = state.bloch();
        table.push(vec![Cell::Num(t), state.p_up().into(), bx.into(), by.into(), bz.into(), state.purity().into()]);
    }
    Ok(table)
}
