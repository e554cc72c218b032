//! Exact sparse multivariate polynomials over ℤ, ℚ and ℤ/n with named,
//! graded variables.

mod coeff;
mod monomial;
mod order;
mod poly;
mod text;
mod var;

pub use coeff::{Coeff, CoefficientRing};
pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKind};
pub(crate) use poly::accumulate;
pub use poly::{Grading, Polynomial, Term, Truncation};
pub use var::{Var, VarKind};
