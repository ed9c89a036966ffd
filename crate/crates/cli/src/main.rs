use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cl_momentum_cli::{config, figure_preset, run_scenario, CliError, Mode, RunOutput, FIGURE_IDS};

#[derive(Parser)]
#[command(name = "clmom", version, about = "Gaussian solutions of the momentum-space Caldeira-Leggett equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its CSV tables
    Run {
        config: PathBuf,
        /// Output directory; overrides `output` in the file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the tables of a reference figure (1-6, or `all`)
    Fig {
        id: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the closed forms with the finite-difference solver
    OracleCheck {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(output: &RunOutput, dir: &Path) -> Result<(), CliError> {
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    for path in output.write(dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn scenario(path: &Path, out: Option<PathBuf>, oracle: bool) -> Result<(), CliError> {
    let mut s = config::load(path)?;
    if oracle {
        s.mode = Mode::OracleCheck;
    } else if s.mode == Mode::OracleCheck {
        eprintln!("note: {} is an oracle-check scenario", path.display());
    }
    let dir = out.or_else(|| s.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    let output = run_scenario(&s)?;
    if s.mode == Mode::OracleCheck {
        if let Some(worst) = output.tables[0]
            .rows
            .iter()
            .filter_map(|r| match r.last() {
                Some(cl_momentum_cli::table::Cell::Num(x)) => Some(*x),
                _ => None,
            })
            .reduce(f64::max)
        {
            println!("largest L-infinity deviation: {worst:e}");
        }
    }
    emit(&output, &dir)
}

fn figures(id: &str, out: &Path) -> Result<(), CliError> {
    let ids: Vec<u8> = if id == "all" {
        FIGURE_IDS.to_vec()
    } else {
        vec![id.parse().map_err(|_| CliError::Validation {
            field: "id".into(),
            reason: format!("expected 1 to 6 or `all`, got `{id}`"),
        })?]
    };
    for id in ids {
        emit(&figure_preset(id)?, out)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => scenario(&config, out, false),
        Command::OracleCheck { config, out } => scenario(&config, out, true),
        Command::Fig { id, out } => figures(&id, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
