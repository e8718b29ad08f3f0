//! Shared flags, grids and unit handling.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use zenolab_core::spectral::{Family, FormFactor, ThermalSpectralDensity};

use crate::error::{CliError, Result};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Exp,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Unit {
    /// Bandwidth `W = 1`.
    W,
    /// Cutoff of the selected family, `Λ = 1`.
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Lin,
}

/// `lo:hi:points[:log|lin]`, log-spaced unless stated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points, spacing: Spacing::Log }
    }

    pub fn lin(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points, spacing: Spacing::Lin }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(CliError::Config(format!("grid {self}: need finite lo < hi")));
        }
        if self.points < 2 {
            return Err(CliError::Config(format!("grid {self}: need at least two points")));
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err(CliError::Config(format!("grid {self}: log spacing needs lo > 0")));
        }
        Ok(())
    }

    /// Grid values with both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    return self.hi;
                }
                let s = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Lin => self.lo + s * (self.hi - self.lo),
                    Spacing::Log => self.lo * (self.hi / self.lo).powf(s),
                }
            })
            .collect()
    }

    /// Every value must be positive.
    pub fn require_positive(&self, what: &str) -> Result<()> {
        if self.lo <= 0.0 {
            return Err(CliError::Config(format!("{what} grid must be positive, got {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Log => "log",
            Spacing::Lin => "lin",
        };
        write!(f, "{}:{}:{}:{spacing}", self.lo, self.hi, self.points)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected lo:hi:points[:log|lin], got {s:?}"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        let points = parts[2].trim().parse::<usize>().map_err(|e| format!("{:?}: {e}", parts[2]))?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("log") => Spacing::Log,
            Some("lin") => Spacing::Lin,
            Some(other) => return Err(format!("unknown spacing {other:?}, expected log or lin")),
        };
        let grid = Grid { lo: num(parts[0])?, hi: num(parts[1])?, points, spacing };
        grid.validate().map_err(|e| e.to_string())?;
        Ok(grid)
    }
}

/// Flags shared by the analysis commands. Precedence: flag, then
/// `ZENOLAB_*` environment variable, then the low-temperature defaults
/// (`Ω = 0.01W`, `β = 50/W`).
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Form-factor family.
    #[arg(long, env = "ZENOLAB_FAMILY", value_enum, default_value_t = FamilyArg::Exp)]
    pub family: FamilyArg,
    /// Exponent of the polynomial family.
    #[arg(long, env = "ZENOLAB_N", default_value_t = 2)]
    pub n: u32,
    /// Coupling constant [default: 1, or 0.1 for `oracle`].
    #[arg(long, env = "ZENOLAB_G")]
    pub g: Option<f64>,
    /// Inverse temperature; `inf` for zero temperature.
    #[arg(long, env = "ZENOLAB_BETA", default_value_t = 50.0)]
    pub beta: f64,
    /// Qubit frequency [default: 0.01, or 0.2 for `oracle`].
    #[arg(long, env = "ZENOLAB_OMEGA")]
    pub omega: Option<f64>,
    /// Sweep grid `lo:hi:points[:log|lin]`.
    #[arg(long, env = "ZENOLAB_GRID", allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Unit of every input and output quantity.
    #[arg(long, env = "ZENOLAB_UNIT", value_enum, default_value_t = Unit::W)]
    pub unit: Unit,
    /// Output file; standard output when absent.
    #[arg(long, env = "ZENOLAB_OUT")]
    pub out: Option<PathBuf>,
    /// Constant `c` in the period/coupling conversion `τ = c/K`.
    #[arg(long, env = "ZENOLAB_CONVERSION_C", default_value_t = 2.0 * PI)]
    pub conversion_c: f64,
}

/// Validated parameters, converted to units of the bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub family: Family,
    pub n: u32,
    pub g: f64,
    pub beta: f64,
    pub omega: f64,
    pub units: Units,
    pub conversion_c: f64,
}

/// Conversion between user units and `W = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub unit: Unit,
    /// One user frequency unit expressed in `W`.
    pub scale: f64,
}

impl Units {
    pub fn bandwidth() -> Self {
        Self { unit: Unit::W, scale: 1.0 }
    }

    pub fn freq_in(&self, f: f64) -> f64 {
        f * self.scale
    }

    pub fn freq_out(&self, f: f64) -> f64 {
        f / self.scale
    }

    pub fn time_in(&self, t: f64) -> f64 {
        t / self.scale
    }

    pub fn time_out(&self, t: f64) -> f64 {
        t * self.scale
    }

    pub fn name(&self) -> &'static str {
        match self.unit {
            Unit::W => "W",
            Unit::Lambda => "Lambda",
        }
    }
}

impl Common {
    pub fn resolve(&self, default_g: f64, default_omega: f64) -> Result<Physics> {
        let family = match self.family {
            FamilyArg::Exp => Family::Exponential,
            FamilyArg::Poly => Family::Polynomial(self.n),
        };
        if self.n < 2 {
            return Err(CliError::Config(format!("--n must be at least 2 for a finite bandwidth, got {}", self.n)));
        }
        let units = match self.unit {
            Unit::W => Units::bandwidth(),
            Unit::Lambda => Units { unit: Unit::Lambda, scale: 1.0 / family.bandwidth_over_cutoff()? },
        };
        let g = self.g.unwrap_or(default_g);
        let omega = units.freq_in(self.omega.unwrap_or(default_omega));
        let beta = units.time_in(self.beta);
        if !(g >= 0.0 && g.is_finite()) {
            return Err(CliError::Config(format!("--g must be finite and non-negative, got {g}")));
        }
        positive("--omega", omega)?;
        positive("--conversion-c", self.conversion_c)?;
        if !(beta > 0.0) {
            return Err(CliError::Config(format!("--beta must be positive, got {}", self.beta)));
        }
        Ok(Physics { family, n: self.n, g, beta, omega, units, conversion_c: self.conversion_c })
    }
}

fn positive(flag: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::Config(format!("{flag} must be finite and positive, got {x}")));
    }
    Ok(())
}

impl Physics {
    /// The low-temperature reference regime in `W` units.
    pub fn reference(family: Family) -> Self {
        let n = match family {
            Family::Polynomial(n) => n,
            Family::Exponential => 2,
        };
        Self { family, n, g: 1.0, beta: 50.0, omega: 0.01, units: Units::bandwidth(), conversion_c: 2.0 * PI }
    }

    /// Rate ratios need a coupled bath.
    pub fn require_coupling(&self) -> Result<()> {
        positive("--g", self.g)
    }

    pub fn with_family(&self, family: Family) -> Self {
        Self { family, ..*self }
    }

    pub fn polynomial(&self) -> Family {
        Family::Polynomial(self.n)
    }

    pub fn form_factor(&self) -> Result<FormFactor> {
        Ok(FormFactor::with_bandwidth(self.family, self.g, 1.0)?)
    }

    pub fn density(&self) -> Result<ThermalSpectralDensity> {
        Ok(ThermalSpectralDensity::new(self.form_factor()?, self.beta)?)
    }

    pub fn family_name(&self) -> String {
        family_name(self.family)
    }

    /// Provenance line describing these parameters in user units.
    pub fn describe(&self) -> String {
        let u = &self.units;
        format!(
            "family={} g={} beta={} omega={} unit={} conversion_c={}",
            self.family_name(),
            self.g,
            u.time_out(self.beta),
            u.freq_out(self.omega),
            u.name(),
            self.conversion_c
        )
    }
}

pub fn family_name(family: Family) -> String {
    match family {
        Family::Exponential => "exp".to_owned(),
        Family::Polynomial(n) => format!("poly{n}"),
    }
}

/// Standard provenance header for every table.
pub fn stamp(table: &mut Table, command: &str) {
    table.provenance.insert(0, format!("zenolab {} {command}", env!("CARGO_PKG_VERSION")));
}
