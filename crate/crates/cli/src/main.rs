mod commands;
mod config;
mod emit;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;
use config::Common;

#[derive(Parser)]
#[command(
    name = "badweave",
    version,
    about = "Exact construction and checks for weighted badly approximable points on vertical lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the nested intervals and emit the tree and a point certificate.
    Construct(ConstructArgs),
    /// Re-check a point certificate against the dual and simultaneous definitions.
    Verify(VerifyArgs),
    /// Sweep windows for non-concurrent lines.
    CheckTheorem4(Theorem4Args),
    /// Per-line and aggregate removal counts.
    CheckCounts(Common),
    /// Find L₀ on Type-2 configurations, or on one given instance.
    CheckProp1(Prop1Args),
    /// Sweep rational points for the pigeonhole line.
    CheckLemma1(Common),
    /// Refine the collections M_{n,m}.
    Refine(Common),
    /// Assign the measure and check the mass bound.
    Measure(MeasureArgs),
    /// Convert witnesses between simultaneous and dual forms.
    Transfer(TransferArgs),
    /// Write CSV of removed intervals and of F ∩ Λ.
    EmitPlotData(PlotArgs),
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    /// A theorem-level check failed.
    Falsified(String),
    /// The construction ran out of intervals.
    Empty(String),
    Config(String),
    Io(String),
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Falsified(_) => 2,
            Failure::Empty(_) => 3,
            Failure::Config(_) => 4,
            Failure::Io(_) => 1,
        }
    }
}

impl From<badweave::Error> for Failure {
    fn from(e: badweave::Error) -> Self {
        use badweave::Error as E;
        match e {
            E::Falsification(_) => Failure::Falsified(e.to_string()),
            E::EmptyCollection(_) => Failure::Empty(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("BADWEAVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Failure::Config(format!("BADWEAVE_THREADS: not a count: {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(format!("BADWEAVE_THREADS: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::CheckTheorem4(a) => check_theorem4(a),
        Command::CheckCounts(a) => check_counts(a),
        Command::CheckProp1(a) => check_prop1(a),
        Command::CheckLemma1(a) => check_lemma1(a),
        Command::Refine(a) => refine(a),
        Command::Measure(a) => measure(a),
        Command::Transfer(a) => transfer(a),
        Command::EmitPlotData(a) => emit_plot_data(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Falsified(m) => ("falsification", m),
                Failure::Empty(m) => ("empty collection", m),
                Failure::Config(m) => ("config error", m),
                Failure::Io(m) => ("io error", m),
            };
            eprintln!("badweave: {kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}
