//! Command-line front end for `zenolab-core`. Every command produces a
//! [`table::Table`] that is written as CSV with `#` provenance lines.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::Path;

use clap::{Parser, Subcommand};

use crate::error::Result;
use crate::table::Table;

#[derive(Debug, Parser)]
#[command(name = "zenolab", version, about = "Decay rates of a qubit under measurement, kicks and continuous coupling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bare and thermal spectral densities of both families.
    Density(commands::density::DensityArgs),
    /// Controlled-to-free rate ratio over a period or coupling grid.
    Sweep(commands::sweep::SweepArgs),
    /// Crossover period and coupling for each strategy.
    Crossover(commands::crossover::CrossoverArgs),
    /// Qubit master-equation trace.
    Evolve(commands::evolve::EvolveArgs),
    /// Exact single-excitation dynamics against the analytic rates.
    Oracle(commands::oracle::OracleArgs),
    /// Data behind one of the reference figures (2 to 11).
    Figure(commands::figure::FigureArgs),
}

/// A finished command: the table plus an optional human-readable summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    pub summary: Option<String>,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Self { table, summary: None }
    }
}

impl Command {
    pub fn run(&self) -> Result<Output> {
        match self {
            Command::Density(a) => commands::density::run(a).map(Into::into),
            Command::Sweep(a) => commands::sweep::run(a).map(Into::into),
            Command::Crossover(a) => commands::crossover::run(a),
            Command::Evolve(a) => commands::evolve::run(a).map(Into::into),
            Command::Oracle(a) => commands::oracle::run(a).map(Into::into),
            Command::Figure(a) => commands::figure::run(a).map(Into::into),
        }
    }

    pub fn out(&self) -> Option<&Path> {
        match self {
            Command::Density(a) => a.common.out.as_deref(),
            Command::Sweep(a) => a.common.out.as_deref(),
            Command::Crossover(a) => a.common.out.as_deref(),
            Command::Evolve(a) => a.common.out.as_deref(),
            Command::Oracle(a) => a.common.out.as_deref(),
            Command::Figure(a) => a.out.as_deref(),
        }
    }
}
