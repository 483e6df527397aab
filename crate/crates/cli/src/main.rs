use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Sweep decoherence factors and state fidelities of a spin register.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// Scenario file (TOML).
    scenario: PathBuf,

    /// Worker threads for the grid (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Largest acceptable quadrature error estimate.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("simulate: {e}");
            return ExitCode::from(1);
        }
    }
    match spinreg_cli::run(&args.scenario, args.tolerance) {
        Ok(table) => {
            eprintln!(
                "simulate: {} rows, max quadrature error {:.1e}",
                table.rows.len(),
                table.max_error
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("simulate: {}: {e}", args.scenario.display());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
