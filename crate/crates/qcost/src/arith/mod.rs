//! Exact scalar and polynomial arithmetic: rationals extended by sqrt(2),
//! complex scalars over them, sparse multivariate polynomials and rational
//! functions with explicit denominator factor lists.

mod cplx;
mod poly;
mod qsqrt2;
mod ratfun;
mod vars;

pub use cplx::CplxQ;
pub use poly::{Monomial, Poly};
pub use qsqrt2::QSqrt2;
pub use ratfun::RatFun;
pub use vars::{VarId, VarKind, VarTable};

pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued `Rat`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for `p/q` as a `Rat`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}
