use std::fmt::Write as _;

use clap::Args;
use zenolab_core::crossover::{
    find_k_star_on, find_tau_star_kick_on, find_tau_star_zeno_on, quick_estimates, CrossoverReport, Method,
    ScanGrid,
};
use zenolab_core::spectral::Family;
use zenolab_core::Error;

use crate::config::{stamp, Common, Grid, Physics, Spacing};
use crate::error::{CliError, Result};
use crate::commands::sweep::Strategy;
use crate::table::{Cell, Table};
use crate::Output;

#[derive(Debug, Clone, Args)]
pub struct CrossoverArgs {
    #[command(flatten)]
    pub common: Common,
}

pub const COLUMNS: [&str; 10] = [
    "strategy",
    "family",
    "method",
    "status",
    "value",
    "estimate",
    "relative_gap",
    "bracket_lo",
    "bracket_hi",
    "crossings",
];

pub fn run(args: &CrossoverArgs) -> Result<Output> {
    let phys = args.common.resolve(1.0, 0.01)?;
    let scan = args.common.grid.map(scan_grid).transpose()?;
    let mut output = crossover_output(&phys, scan)?;
    stamp(&mut output.table, "crossover");
    Ok(output)
}

/// The log grid `lo:hi:points` becomes a scan of the same span and density.
/// Periods are scanned over `[lo, hi]` and couplings over `[lo, hi]` in
/// user units.
pub fn scan_grid(grid: Grid) -> Result<Grid> {
    if grid.spacing != Spacing::Log {
        return Err(CliError::Config(format!("crossover scans need a log grid, got {grid}")));
    }
    grid.validate()?;
    Ok(grid)
}

fn per_decade(grid: &Grid) -> u32 {
    let decades = (grid.hi / grid.lo).log10();
    ((grid.points - 1) as f64 / decades).round().max(1.0) as u32
}

pub fn crossover_output(phys: &Physics, scan: Option<Grid>) -> Result<Output> {
    phys.require_coupling()?;
    let u = phys.units;
    let (tau_scan, k_scan) = match scan {
        None => (ScanGrid::default(), ScanGrid::default()),
        Some(g) => {
            let d = per_decade(&g);
            (
                ScanGrid { lo: u.time_in(g.lo), hi: u.time_in(g.hi), per_decade: d },
                ScanGrid { lo: u.freq_in(g.lo), hi: u.freq_in(g.hi), per_decade: d },
            )
        }
    };
    let tsd = phys.density()?;
    let family = phys.family_name();
    let mut table = Table::new(&COLUMNS);
    table.note(phys.describe());
    table.note(format!(
        "scan tau=[{}, {}] K=[{}, {}] per_decade={} in W units",
        tau_scan.lo, tau_scan.hi, k_scan.lo, k_scan.hi, tau_scan.per_decade
    ));
    let mut summary = String::new();
    let mut roots = [None; 3];

    let searches = [
        (Strategy::Zeno, find_tau_star_zeno_on(&tsd, phys.omega, &tau_scan)),
        (Strategy::Kick, find_tau_star_kick_on(&tsd, phys.omega, &tau_scan)),
        (Strategy::Continuous, find_k_star_on(&tsd, phys.omega, &k_scan)),
    ];
    for (i, (strategy, result)) in searches.into_iter().enumerate() {
        let is_time = strategy != Strategy::Continuous;
        let conv = |x: f64| if is_time { u.time_out(x) } else { u.freq_out(x) };
        let symbol = if is_time { format!("tau*_{}", strategy.name()) } else { "K*".to_owned() };
        match result {
            Ok(report) => {
                roots[i] = Some(report.star_value);
                table.push(report_row(strategy.name(), &family, &report, conv));
                let _ = write!(summary, "{symbol:<16} = {:.6e}", conv(report.star_value));
                if let (Some(e), Some(gap)) = (report.closed_form_estimate, report.relative_gap) {
                    let _ = write!(summary, "  closed form {:.6e}  gap {:.2}%", conv(e), 100.0 * gap);
                }
                summary.push('\n');
            }
            Err(Error::NoCrossing { lo, hi }) => {
                table.push(vec![
                    strategy.name().into(),
                    family.clone().into(),
                    "root_find".into(),
                    "no_crossing".into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Num(conv(lo)),
                    Cell::Num(conv(hi)),
                    Cell::Empty,
                ]);
                let _ = writeln!(summary, "{symbol:<16}   no crossing in [{:.3e}, {:.3e}]", conv(lo), conv(hi));
            }
            Err(e) => return Err(e.into()),
        }
    }

    if let Family::Polynomial(n) = phys.family {
        let q = quick_estimates(n, phys.omega, 1.0)?;
        let quick = [
            (Strategy::Zeno, u.time_out(q.tau_star_zeno), roots[0].map(|r| u.time_out(r))),
            (Strategy::Kick, u.time_out(q.tau_star_kick), roots[1].map(|r| u.time_out(r))),
            (Strategy::Continuous, u.freq_out(q.k_star), roots[2].map(|r| u.freq_out(r))),
        ];
        summary.push_str("quick estimates\n");
        for (strategy, estimate, root) in quick {
            let gap = root.map(|r| (r - estimate).abs() / r);
            table.push(vec![
                strategy.name().into(),
                family.clone().into(),
                "quick_estimate".into(),
                "ok".into(),
                Cell::Num(estimate),
                Cell::Empty,
                gap.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
            let _ = writeln!(summary, "  {:<14} ~ {estimate:.6e}", strategy.name());
        }
    }
    Ok(Output { table, summary: Some(summary) })
}

fn report_row(strategy: &str, family: &str, r: &CrossoverReport, conv: impl Fn(f64) -> f64) -> Vec<Cell> {
    let method = match r.method {
        Method::RootFind => "root_find",
        Method::ClosedForm => "closed_form",
    };
    let crossings: Vec<String> = r.all_crossings.iter().map(|&x| format!("{:.16e}", conv(x))).collect();
    vec![
        strategy.into(),
        family.into(),
        method.into(),
        "ok".into(),
        Cell::Num(conv(r.star_value)),
        r.closed_form_estimate.map(&conv).into(),
        r.relative_gap.into(),
        Cell::Num(conv(r.bracket.0)),
        Cell::Num(conv(r.bracket.1)),
        Cell::Text(crossings.join(";")),
    ]
}
