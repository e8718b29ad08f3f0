use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use zenolab::error::Result;
use zenolab::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zenolab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    // Nothing is written until the whole table exists.
    let output = cli.command.run()?;
    match cli.command.out() {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            output.table.write_to(&mut file)?;
            file.flush()?;
            if let Some(summary) = &output.summary {
                print!("{summary}");
            }
        }
        None => {
            if let Some(summary) = &output.summary {
                eprint!("{summary}");
            }
            output.table.write_to(io::stdout().lock())?;
        }
    }
    Ok(())
}
