use clap::{Args, ValueEnum};
use rayon::prelude::*;
use zenolab_core::rates::{continuous_rate, golden_rule_rate, kick_rate_converged, zeno_rate};
use zenolab_core::spectral::{Family, ThermalSpectralDensity};

use crate::config::{stamp, Common, Grid, Physics};
use crate::error::Result;
use crate::table::{Cell, Table};

/// Relative tolerance of the kick series in sweeps.
pub const KICK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Zeno,
    Kick,
    Continuous,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Zeno => "zeno",
            Strategy::Kick => "kick",
            Strategy::Continuous => "continuous",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Control strategy; the grid holds `τ`, or `c/K` for continuous coupling.
    #[arg(long, env = "ZENOLAB_STRATEGY", value_enum, default_value_t = Strategy::Zeno)]
    pub strategy: Strategy,
}

pub fn default_grid() -> Grid {
    Grid::log(1e-2, 1e4, 601)
}

pub fn run(args: &SweepArgs) -> Result<Table> {
    let phys = args.common.resolve(1.0, 0.01)?;
    let grid = args.common.grid.unwrap_or_else(default_grid);
    let mut table = sweep_table(&phys, args.strategy, &grid)?;
    stamp(&mut table, "sweep");
    Ok(table)
}

/// `γ_control/γ` for both families. Points are evaluated in parallel and
/// assembled in grid order; any failure discards the whole sweep.
pub fn sweep_table(phys: &Physics, strategy: Strategy, grid: &Grid) -> Result<Table> {
    grid.validate()?;
    grid.require_positive("sweep")?;
    phys.require_coupling()?;
    let exp = phys.with_family(Family::Exponential).density()?;
    let poly = phys.with_family(phys.polynomial()).density()?;
    let (gamma_exp, gamma_poly) = (golden_rule_rate(&exp, phys.omega), golden_rule_rate(&poly, phys.omega));

    let xs = grid.values();
    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .map(|&x| -> Result<Vec<Cell>> {
            let t = phys.units.time_in(x);
            let re = controlled(&exp, phys, strategy, t)? / gamma_exp;
            let rp = controlled(&poly, phys, strategy, t)? / gamma_poly;
            Ok(vec![Cell::Num(x), Cell::Num(re), Cell::Num(rp)])
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&["x", "ratio_exp", "ratio_poly"]);
    table.note(phys.describe());
    let axis = match strategy {
        Strategy::Continuous => format!("x = conversion_c/K in 1/{}", phys.units.name()),
        _ => format!("x = tau in 1/{}", phys.units.name()),
    };
    table.note(format!("strategy={} grid={grid} n={} {axis}", strategy.name(), phys.n));
    table.rows = rows;
    Ok(table)
}

/// Controlled rate at a period `t` (or `K = c/t`) in bandwidth units.
pub fn controlled(tsd: &ThermalSpectralDensity, phys: &Physics, strategy: Strategy, t: f64) -> Result<f64> {
    Ok(match strategy {
        Strategy::Zeno => zeno_rate(tsd, phys.omega, t)?,
        Strategy::Kick => kick_rate_converged(tsd, phys.omega, t, KICK_TOL)?.gamma,
        Strategy::Continuous => continuous_rate(tsd, phys.omega, phys.conversion_c / t)?,
    })
}
