use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The scenario file is malformed or inconsistent. `line` is 1-based.
    #[error("{}{field}: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        field: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] spinreg::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed csv: {0}")]
    MalformedCsv(String),

    #[error("plot: {0}")]
    Plot(String),

    #[error("quadrature error estimate {error:e} exceeds tolerance {budget:e}")]
    Tolerance { error: f64, budget: f64 },
}

impl CliError {
    /// Process exit status: 2 for scenario errors, 3 for numerical-tolerance
    /// failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Tolerance { .. } => 3,
            _ => 1,
        }
    }

    pub(crate) fn parse(line: Option<usize>, field: &str, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
