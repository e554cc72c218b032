//! Exact computer algebra for multivalued formal group laws and formal
//! ternary laws: truncated multivalued series, formal group laws, 2-valued
//! formal groups, formal ternary laws, the relation ideal of the universal
//! law and Gröbner bases over ℤ, ℚ and ℤ/p.

mod axioms;
pub mod error;
pub mod fgl;
pub mod ftl;
pub mod groebner;
pub mod int;
pub mod mvseries;
pub mod polyring;
pub mod quotient;
pub mod relgen;
pub mod symfun;
pub mod twofgl;

pub use error::{Error, Result};
pub use int::Int;
pub use polyring::{
    Coeff, CoefficientRing, Grading, Monomial, MonomialOrder, Polynomial, Term, Truncation, Var, VarKind,
};
