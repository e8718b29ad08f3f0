use clap::Args;
use zenolab_core::spectral::{Family, FormFactor, ThermalSpectralDensity};

use crate::config::{stamp, Common, Grid, Physics};
use crate::error::Result;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
}

pub fn default_grid() -> Grid {
    Grid::lin(-0.5, 2.0, 251)
}

pub fn run(args: &DensityArgs) -> Result<Table> {
    let phys = args.common.resolve(1.0, 0.01)?;
    let grid = args.common.grid.unwrap_or_else(default_grid);
    grid.validate()?;
    let mut table = density_table(&phys, &grid)?;
    stamp(&mut table, "density");
    Ok(table)
}

/// Both families at equal bandwidth, sampled on a frequency grid given in
/// user units.
pub fn density_table(phys: &Physics, grid: &Grid) -> Result<Table> {
    let u = phys.units;
    let axis = format!("omega_over_{}", u.name());
    let mut table = Table::new(&[&axis, "kappa_exp", "kappa_poly", "kappa_beta_exp", "kappa_beta_poly"]);
    table.note(phys.describe());
    table.note(format!("grid={grid} n={}", phys.n));
    let pair = |family: Family| -> Result<(FormFactor, ThermalSpectralDensity)> {
        let tsd = phys.with_family(family).density()?;
        Ok((*tsd.base(), tsd))
    };
    let (exp, exp_beta) = pair(Family::Exponential)?;
    let (poly, poly_beta) = pair(phys.polynomial())?;
    for x in grid.values() {
        let w = u.freq_in(x);
        table.push(vec![
            Cell::Num(x),
            Cell::Num(u.freq_out(exp.density(w))),
            Cell::Num(u.freq_out(poly.density(w))),
            Cell::Num(u.freq_out(exp_beta.density(w))),
            Cell::Num(u.freq_out(poly_beta.density(w))),
        ]);
    }
    Ok(table)
}
