use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid spin value {0} (must be +1/2 or -1/2)")]
    InvalidSpin(f64),

    #[error("register must hold at least one qubit")]
    EmptyRegister,

    #[error("{function}: argument outside domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("unknown macrofraction `{0}`")]
    UnknownMacrofraction(String),

    #[error("invalid frequency window: {0}")]
    Window(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid bath: {0}")]
    Bath(String),

    #[error("closed form unavailable for s = {s}: {reason}")]
    UnsupportedBranch { s: f64, reason: &'static str },

    #[error("quadrature did not converge: estimated error {error:e} for value {value:e}")]
    NonConvergent { value: f64, error: f64 },

    #[error("mode grid under-resolved: dω·max(t, τ) = {0:.3e} exceeds 0.1")]
    UnderResolved(f64),

    #[error("register too large for enumeration: L = {0} (max 12)")]
    RegisterTooLarge(usize),

    #[error("invalid initial register state: {0}")]
    InitialState(String),

    #[error("empty label set")]
    EmptyLabelSet,
}

pub type Result<T> = std::result::Result<T, Error>;
