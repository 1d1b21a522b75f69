//! Simulation of sequential entanglement witnessing by independent pairs of
//! observers who share a two-qubit state and measure it with unsharp
//! (weak) Pauli measurements before handing it on.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: fixed-size 4×4 complex algebra, Pauli operators, partial
//!   transpose, Jacobi eigenvalues and the Hilbert–Schmidt decomposition.
//! - [`states`]: the initial-state families and their correlators.
//! - [`channels`]: unsharp effects, Lüders updates and the per-pair channel
//!   (the brute-force engine).
//! - [`witness`]: the sharpness-parameterised witness and the closed-form
//!   correlator engine with deficit tracking.
//! - [`sequences`]: greedy sharpness sequences, the γ bound and planners.
//! - [`analysis`]: PPT/negativity/Horodecki oracles and run verification.
//! - [`output`], [`sweep`], [`acceptance`]: serialisation, parameter sweeps
//!   and the built-in acceptance suite used by the CLI.
//!
//! Basis order is fixed to |00⟩, |01⟩, |10⟩, |11⟩ everywhere, with side A the
//! left tensor factor.

// index loops read closer to the matrix formulas; `!(x > y)` deliberately rejects NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod analysis;
pub mod channels;
mod error;
pub mod linalg;
pub mod output;
pub mod sampling;
pub mod sequences;
pub mod states;
pub mod sweep;
pub mod witness;

pub use error::{Error, Result};
