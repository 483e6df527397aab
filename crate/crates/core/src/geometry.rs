//! Transit-time geometry of the register.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetric `L×L` matrix of transit times `τ_nm ≥ 0` (units of `1/Λ`) with a
/// zero diagonal.
///
/// The antisymmetric phase matrix `Γ⁻` needs an orientation: qubits are taken
/// to be indexed along the propagation axis, so the signed transit time is
/// `+τ_nm` for `n < m` and `−τ_nm` for `n > m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    tau: DMatrix<f64>,
}

impl Geometry {
    pub fn from_tau(tau: DMatrix<f64>) -> Result<Self> {
        let l = tau.nrows();
        if l == 0 || tau.ncols() != l {
            return Err(Error::Geometry(format!(
                "transit-time matrix must be square and non-empty, got {}x{}",
                tau.nrows(),
                tau.ncols()
            )));
        }
        for n in 0..l {
            if tau[(n, n)] != 0.0 {
                return Err(Error::Geometry(format!("nonzero diagonal at {n}")));
            }
            for m in 0..l {
                let v = tau[(n, m)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Geometry(format!("τ[{n},{m}] = {v} must be finite and >= 0")));
                }
                if v != tau[(m, n)] {
                    return Err(Error::Geometry(format!("τ not symmetric at ({n},{m})")));
                }
            }
        }
        Ok(Self { tau })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let l = rows.len();
        if rows.iter().any(|r| r.len() != l) {
            return Err(Error::Geometry("transit-time rows must form a square matrix".into()));
        }
        Self::from_tau(DMatrix::from_fn(l, l, |n, m| rows[n][m]))
    }

    /// Qubits at `positions` (arbitrary length units) with field propagation
    /// speed `speed` (length per `1/Λ`).
    pub fn from_positions(positions: &[[f64; 3]], speed: f64) -> Result<Self> {
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::Geometry(format!("propagation speed {speed} must be > 0")));
        }
        let l = positions.len();
        let tau = DMatrix::from_fn(l, l, |n, m| {
            let d: f64 = (0..3)
                .map(|i| (positions[n][i] - positions[m][i]).powi(2))
                .sum::<f64>()
                .sqrt();
            d / speed
        });
        Self::from_tau(tau)
    }

    /// Two qubits separated by transit time `tau`.
    pub fn pair(tau: f64) -> Result<Self> {
        Self::from_rows(&[vec![0.0, tau], vec![tau, 0.0]])
    }

    /// All qubits at the same point (collective coupling).
    pub fn collective(len: usize) -> Result<Self> {
        Self::from_tau(DMatrix::zeros(len, len))
    }

    /// Equally spaced qubits on a line, neighbours separated by `spacing`.
    pub fn chain(len: usize, spacing: f64) -> Result<Self> {
        Self::from_tau(DMatrix::from_fn(len, len, |n, m| {
            (n as f64 - m as f64).abs() * spacing
        }))
    }

    pub fn len(&self) -> usize {
        self.tau.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.nrows() == 0
    }

    pub fn tau(&self, n: usize, m: usize) -> f64 {
        self.tau[(n, m)]
    }

    pub fn signed_tau(&self, n: usize, m: usize) -> f64 {
        if n <= m {
            self.tau[(n, m)]
        } else {
            -self.tau[(n, m)]
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.tau
    }

    pub fn max_tau(&self) -> f64 {
        self.tau.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_collective(&self) -> bool {
        self.max_tau() == 0.0
    }
}
