//! Symbolic density matrices: exact gate matrices, conjugation by a gate,
//! and projective measurement with renormalized arms. Matrix entries are
//! rational functions of the initial-state variables.

mod gates;
mod sym;

pub use gates::matrix as gate_matrix;
pub use sym::{CEntry, MeasOutcome, SymDensity};
