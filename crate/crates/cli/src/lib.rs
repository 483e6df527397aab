//! Scenario runner: parse a scenario file, sweep time or cut position, and
//! write CSV tables and SVG plots.

pub mod error;
pub mod plot;
pub mod scenario;
pub mod sweep;

use std::path::Path;

pub use error::{CliError, Result};
pub use scenario::Scenario;
pub use sweep::Table;

/// Run a scenario end to end. Fails with [`CliError::Tolerance`] before
/// writing anything if the quadrature error estimate exceeds `tolerance`.
pub fn run(scenario_path: &Path, tolerance: f64) -> Result<Table> {
    let sc = Scenario::load(scenario_path)?;
    let table = sweep::run_sweep(&sc)?;
    if table.max_error > tolerance {
        return Err(CliError::Tolerance {
            error: table.max_error,
            budget: tolerance,
        });
    }
    table.write_csv(&sc.csv)?;
    if let Some(svg) = &sc.plot {
        plot::emit_plot(&sc.csv, svg)?;
    }
    Ok(table)
}
