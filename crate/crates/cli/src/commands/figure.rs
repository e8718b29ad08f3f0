use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;
use zenolab_core::rates::{continuous_rate, golden_rule_rate, kick_rate_converged, zeno_rate};
use zenolab_core::spectral::{Family, ThermalSpectralDensity};

use crate::commands::density::density_table;
use crate::commands::sweep::{sweep_table, Strategy, KICK_TOL};
use crate::config::{stamp, Grid, Physics};
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number, 2 to 11.
    pub id: u32,
    /// Output file; standard output when absent.
    #[arg(long, env = "ZENOLAB_OUT")]
    pub out: Option<PathBuf>,
    /// Constant `c` in the period/coupling conversion `τ = c/K`.
    #[arg(long, env = "ZENOLAB_CONVERSION_C", default_value_t = 2.0 * PI)]
    pub conversion_c: f64,
}

pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 2..=11;

/// Full-range sweep grid shared by figures 3, 4, 7 and 10.
pub fn full_grid() -> Grid {
    Grid::log(1e-2, 1e4, 601)
}

/// Small-period grid shared by the three strategies in figure 11.
pub fn small_grid() -> Grid {
    Grid::lin(0.01, 5.0, 500)
}

/// Spectral setting of the response-function overlays.
pub const OVERLAY_OMEGA: f64 = 0.2;

pub fn run(args: &FigureArgs) -> Result<Table> {
    if !(args.conversion_c > 0.0 && args.conversion_c.is_finite()) {
        return Err(CliError::Config(format!("--conversion-c must be positive, got {}", args.conversion_c)));
    }
    figure(args.id, args.conversion_c)
}

pub fn figure(id: u32, conversion_c: f64) -> Result<Table> {
    let phys = Physics { conversion_c, ..Physics::reference(Family::Exponential) };
    let mut table = match id {
        2 => thermal_densities(&phys)?,
        3 => sweep_table(&phys, Strategy::Zeno, &full_grid())?,
        4 => sweep_table(&phys, Strategy::Kick, &full_grid())?,
        5 => sweep_table(&phys, Strategy::Zeno, &Grid::lin(0.01, 3.0, 300))?,
        6 => sweep_table(&phys, Strategy::Kick, &Grid::lin(0.05, 5.0, 300))?,
        7 => sweep_table(&phys, Strategy::Continuous, &full_grid())?,
        8 => overlay(&phys, 50.0)?,
        9 => overlay(&phys, 3.0)?,
        10 => comparison(&phys, &full_grid())?,
        11 => comparison(&phys, &small_grid())?,
        _ => {
            return Err(CliError::Config(format!(
                "unknown figure {id}; expected {} to {}",
                FIGURE_IDS.start(),
                FIGURE_IDS.end()
            )))
        }
    };
    table.provenance.insert(0, format!("figure={id}"));
    stamp(&mut table, "figure");
    Ok(table)
}

/// Bare and thermal densities at a cold and a hot temperature.
fn thermal_densities(phys: &Physics) -> Result<Table> {
    let grid = Grid::lin(-0.5, 2.0, 251);
    let mut out: Option<Table> = None;
    for beta in [50.0, 2.0] {
        let t = density_table(&Physics { beta, ..*phys }, &grid)?;
        let table = out.get_or_insert_with(|| {
            let mut columns = vec!["beta"];
            columns.extend(t.columns.iter().map(String::as_str));
            Table::new(&columns)
        });
        table.provenance.extend(t.provenance);
        for row in t.rows {
            let mut r = vec![Cell::Num(beta)];
            r.extend(row);
            table.push(r);
        }
    }
    Ok(out.expect("two temperatures"))
}

/// The three sweeps on one grid, tagged by strategy.
fn comparison(phys: &Physics, grid: &Grid) -> Result<Table> {
    let mut table = Table::new(&["strategy", "x", "ratio_exp", "ratio_poly"]);
    for strategy in [Strategy::Zeno, Strategy::Kick, Strategy::Continuous] {
        let t = sweep_table(phys, strategy, grid)?;
        table.provenance.extend(t.provenance);
        for row in t.rows {
            let mut r = vec![Cell::from(strategy.name())];
            r.extend(row);
            table.push(r);
        }
    }
    Ok(table)
}

/// Integrands of the three controlled rates for the polynomial family at
/// `τ = c/K`: the measurement filter, the kick spikes with their `1/(ω−Ω)²`
/// envelope, and the two continuous-coupling spikes.
fn overlay(phys: &Physics, tau: f64) -> Result<Table> {
    let omega = OVERLAY_OMEGA;
    let phys = Physics { family: phys.polynomial(), omega, ..*phys };
    let tsd = phys.density()?;
    let k = phys.conversion_c / tau;
    let grid = Grid::lin(-1.0, 4.0, 1001);
    let (lo, hi) = (grid.lo, grid.hi);

    let gamma = golden_rule_rate(&tsd, omega);
    let mut table = Table::new(&["series", "omega_over_W", "value"]);
    table.note(phys.describe());
    table.note(format!("tau={tau} K={k} grid={grid}"));
    table.note(format!(
        "gamma={gamma:.16e} gamma_zeno={:.16e} gamma_kick={:.16e} gamma_continuous={:.16e}",
        zeno_rate(&tsd, omega, tau)?,
        kick_rate_converged(&tsd, omega, tau, KICK_TOL)?.gamma,
        continuous_rate(&tsd, omega, k)?
    ));

    let xs = grid.values();
    let mut push = |series: &str, w: f64, v: f64| table.push(vec![series.into(), Cell::Num(w), Cell::Num(v)]);
    for &w in &xs {
        push("kappa_beta", w, tsd.density(w));
    }
    for &w in &xs {
        let s = sinc(0.5 * (w - omega) * tau);
        push("zeno_response", w, tau * s * s * tsd.density(w));
    }
    kick_spikes(&tsd, omega, tau, lo, hi, &mut push);
    for &w in &xs {
        let d = w - omega;
        if d.abs() >= PI / tau {
            push("kick_guide", w, 8.0 * PI * tsd.density(w) / (d * d * tau * tau));
        }
    }
    for w in [omega - k, omega + k] {
        if (lo..=hi).contains(&w) {
            push("continuous_spike", w, PI * tsd.density(w));
        }
    }
    for &w in &xs {
        push("continuous_guide", w, PI * tsd.density(w));
    }
    Ok(table)
}

fn kick_spikes(
    tsd: &ThermalSpectralDensity,
    omega: f64,
    tau: f64,
    lo: f64,
    hi: f64,
    push: &mut impl FnMut(&str, f64, f64),
) {
    let reach = (hi - omega).max(omega - lo);
    let mut spikes = Vec::new();
    let mut j = 0u64;
    while PI * (2 * j + 1) as f64 / tau <= reach {
        let x = PI * (2 * j + 1) as f64 / tau;
        let weight = 2.0 / PI / ((j as f64 + 0.5) * (j as f64 + 0.5));
        for w in [omega - x, omega + x] {
            if (lo..=hi).contains(&w) {
                spikes.push((w, weight * tsd.density(w)));
            }
        }
        j += 1;
    }
    spikes.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (w, v) in spikes {
        push("kick_spike", w, v);
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}
