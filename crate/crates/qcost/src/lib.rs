//! Static analyzer inferring closed-form upper bounds on the expected cost of
//! mixed classical-quantum programs, plus a concrete-semantics oracle.
//!
//! Pipeline: parse/typecheck/desugar (`frontend`) -> backward symbolic
//! expectation transformer over symbolic density matrices (`density`,
//! `expect`, `transform`) -> constraint reduction term -> cost -> polynomial
//! (`constraints`) -> Handelman certificate synthesis through an SMT-LIB2
//! solver process (`certify`) -> reported bound (`driver`). The `oracle`
//! module interprets programs on concrete density matrices for validation.

pub mod arith;
pub mod certify;
pub mod constraints;
pub mod density;
pub mod driver;
pub mod expect;
pub mod frontend;
pub mod oracle;
pub mod transform;
