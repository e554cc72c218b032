//! Shared fixtures for the benchmarks.

use ftl_core::groebner::{IncrementalOptions, RunResult};
use ftl_core::relgen::{self, Arity, DegreeWindow, EpsilonMode, RelOptions};
use ftl_core::{CoefficientRing, Result};

/// The ε = 1 run over the window [−4, 2] with 2 inverted.
pub fn solve_epsilon_one() -> Result<RunResult> {
    solve(-4, 2, EpsilonMode::Plus, true)
}

/// The window [−4, 0] with ε free and 2 inverted.
pub fn solve_inverted() -> Result<RunResult> {
    solve(-4, 0, EpsilonMode::Free, true)
}

pub fn solve(d_min: i32, d_max: i32, epsilon: EpsilonMode, invert2: bool) -> Result<RunResult> {
    let window = DegreeWindow::new(d_min, d_max)?;
    relgen::solve(
        window,
        Arity::Ftl,
        RelOptions { epsilon, invert2 },
        CoefficientRing::Integers,
        IncrementalOptions::default(),
    )
}
