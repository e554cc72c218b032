//! Gröbner bases over ℚ, ℤ/p and (strong bases) over ℤ, and the incremental
//! driver that folds a relation stream while eliminating solved variables.

mod basis;
mod driver;

pub use basis::{buchberger, ideal_equal, reduce, GroebnerBasis, DEFAULT_STEP_BUDGET};
pub(crate) use driver::simplify_alpha;
pub use driver::{
    fixed_relations, incremental_gb, Batches, IncrementalGb, IncrementalOptions, RelationSource, RunResult, RunStats,
};
