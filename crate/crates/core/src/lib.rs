//! Pure-dephasing dynamics of an L-qubit register in a thermal bosonic bath.
//!
//! The register couples to the bath through `J_z` only, so the evolution is
//! fully described by four L×L real matrices (decoherence `Γ`, the phase
//! matrices `Γ⁺`/`Γ⁻`, and per-observer fidelity matrices `B`). From these the
//! crate derives decoherence factors of register coherences, state fidelities
//! of the environment fragments conditioned on pointer states, protected
//! subspaces, and a proximity diagnostic for spectrum broadcast structures.
//!
//! Units: `ħ = k_B = 1`, frequencies in units of the bath cutoff `Λ`, times in
//! units of `1/Λ`.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod analytic;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod kernels;
pub mod register;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::Geometry;
pub use kernels::{BathSpec, Estimate, FrequencyWindow, SpectralDensity};
pub use register::{DephasingMatrices, PairDelta, RegisterLabel, Spin};
