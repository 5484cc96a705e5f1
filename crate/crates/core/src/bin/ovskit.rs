use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ovskit::cli::{run_text, Options};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Runs an ordered-vector-space script and prints a report.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Script to run; standard input when omitted.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate pairs tried by `falsify`.
    #[arg(long, default_value_t = 10_000)]
    sample_budget: usize,
    #[arg(long, default_value_t = 100_000)]
    cell_budget: usize,
    #[arg(long, default_value_t = 10_000)]
    atom_budget: usize,
    #[arg(long, default_value_t = 4)]
    lattice_dim_max: usize,
    /// Record wall-clock milliseconds per statement (breaks byte-for-byte
    /// reproducibility of reports).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.file {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ovskit: cannot read script: {e}");
            return ExitCode::from(2);
        }
    };
    let mut options = Options::with_budgets(args.cell_budget, args.atom_budget, args.lattice_dim_max);
    options.seed = args.seed;
    options.sample_budget = args.sample_budget;
    options.timing = args.timing;
    let report = run_text(&text, &options);
    match args.format {
        Format::Text => print!("{}", report.text()),
        Format::Structured => print!("{}", report.structured()),
    }
    if let Some(e) = report.records.last().and_then(|r| r.error.as_ref()) {
        eprintln!("ovskit: {e}");
    }
    ExitCode::from(report.exit_code as u8)
}
