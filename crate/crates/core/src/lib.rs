//! Analysis of two-qubit quantum states.
//!
//! The crate works on states given either as 4x4 density matrices or in
//! Pauli form (Bloch vectors `s`, `t` and cross dyadic `C`) and provides:
//!
//! - conversions, named state families, local/swap transforms, and seeded
//!   random sampling ([`statecore`]);
//! - the global invariants of the traceless operator K = 1 - 4P, the nine
//!   local polynomial invariants, and quartic-root machinery
//!   ([`invariants`]);
//! - classification into the six classes of locally equivalent families
//!   with canonical frames and family comparison ([`classify`]);
//! - positivity and separability certificates through inequality margins
//!   cross-checked against eigenvalue oracles ([`criteria`]);
//! - concurrence, optimal Lewenstein-Sanpera decompositions, and checks
//!   of the conjectured bound S + C <= 1 ([`entangle`]).
//!
//! All values are immutable and all operations are pure functions of
//! their inputs; randomness enters only through explicit seeds.

pub mod classify;
pub mod criteria;
pub mod entangle;
pub mod error;
pub mod invariants;
mod linalg;
pub mod statecore;

pub use error::{Error, Result};
pub use linalg::{C64, CMat4};
