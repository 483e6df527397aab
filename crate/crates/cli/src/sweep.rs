//! Time and cut-position sweeps.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use spinreg::kernels::assemble;
use spinreg::register::{log_decoherence, log_fidelity, pair_delta, PairDelta};

use crate::error::{CliError, Result};
use crate::scenario::{Scenario, SweepKind, BAND_MACROFRACTION};

/// A sweep result: one row per grid point, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Largest quadrature error estimate met while filling the table.
    pub max_error: f64,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Write the table; missing parent directories are created.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        let file = std::fs::File::create(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_value(v)))?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut inner = w.into_inner().map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e.into_error(),
        })?;
        inner.flush().map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Fixed 12-significant-digit scientific notation; negative zero prints as
/// zero so that output does not depend on the sign of a vanishing sum.
pub fn format_value(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

/// Dispatch on the scenario's sweep kind.
pub fn run_sweep(sc: &Scenario) -> Result<Table> {
    match sc.sweep {
        SweepKind::Time => run_time_sweep(sc),
        SweepKind::Cut { .. } => run_cut_sweep(sc),
    }
}

fn deltas(sc: &Scenario) -> Result<Vec<PairDelta>> {
    Ok(sc
        .pairs
        .iter()
        .map(|p| pair_delta(&p.eps, &p.eps_prime))
        .collect::<spinreg::Result<_>>()?)
}

/// Columns `t`, then per pair `re_neg_log_gamma`, `im_neg_log_gamma` and one
/// `neg_log_B` per macrofraction.
pub fn run_time_sweep(sc: &Scenario) -> Result<Table> {
    if sc.sweep != SweepKind::Time {
        return Err(CliError::parse(None, "sweep.kind", "expected a time sweep"));
    }
    let bath = sc.time_bath()?;
    let macs: Vec<String> = bath.macrofractions().keys().cloned().collect();
    let mut header = vec!["t".to_string()];
    for p in &sc.pairs {
        header.push(format!("{}:re_neg_log_gamma", p.name));
        header.push(format!("{}:im_neg_log_gamma", p.name));
        header.extend(macs.iter().map(|m| format!("{}:neg_log_B:{m}", p.name)));
    }
    let deltas = deltas(sc)?;
    let rows: Vec<(Vec<f64>, f64)> = sc
        .grid
        .par_iter()
        .map(|&t| -> Result<(Vec<f64>, f64)> {
            let mut row = vec![t];
            if deltas.is_empty() {
                return Ok((row, 0.0));
            }
            let asm = assemble(&bath, &sc.geometry, t)?;
            for d in &deltas {
                let z = log_decoherence(d, &asm.matrices)?;
                row.push(z.re);
                row.push(z.im);
                for m in &macs {
                    row.push(log_fidelity(d, &asm.matrices, m)?);
                }
            }
            Ok((row, asm.max_error))
        })
        .collect::<Result<_>>()?;
    Ok(finish(header, rows))
}

/// Columns `alpha`, then per pair `re_neg_log_gamma` (traced-out complement)
/// and `neg_log_B` (observed band `[alpha, alpha + delta)`) at `t_asym`.
pub fn run_cut_sweep(sc: &Scenario) -> Result<Table> {
    let SweepKind::Cut { delta, t_asym } = sc.sweep else {
        return Err(CliError::parse(None, "sweep.kind", "expected a cut sweep"));
    };
    let mut header = vec!["alpha".to_string()];
    for p in &sc.pairs {
        header.push(format!("{}:re_neg_log_gamma", p.name));
        header.push(format!("{}:neg_log_B:{BAND_MACROFRACTION}", p.name));
    }
    let deltas = deltas(sc)?;
    let rows: Vec<(Vec<f64>, f64)> = sc
        .grid
        .par_iter()
        .map(|&alpha| -> Result<(Vec<f64>, f64)> {
            let mut row = vec![alpha];
            if deltas.is_empty() {
                return Ok((row, 0.0));
            }
            let bath = sc.cut_bath(alpha, delta)?;
            let asm = assemble(&bath, &sc.geometry, t_asym)?;
            for d in &deltas {
                row.push(log_decoherence(d, &asm.matrices)?.re);
                row.push(log_fidelity(d, &asm.matrices, BAND_MACROFRACTION)?);
            }
            Ok((row, asm.max_error))
        })
        .collect::<Result<_>>()?;
    Ok(finish(header, rows))
}

fn finish(header: Vec<String>, rows: Vec<(Vec<f64>, f64)>) -> Table {
    let max_error = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Table {
        header,
        rows: rows.into_iter().map(|r| r.0).collect(),
        max_error,
    }
}
