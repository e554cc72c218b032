//! Residual series shared by the verifiers of 2-valued formal group laws
//! and formal ternary laws.

use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::mvseries::MSeries;
use crate::polyring::{Polynomial, Var};

/// Spare series variable used as the slot that gets substituted.
pub(crate) fn slot() -> Var {
    Var::geometric(7)
}

/// `F_t(x, 0, ..., 0)` as a series in `x` alone.
pub(crate) fn restrict_to_first(f: &MSeries) -> Result<MSeries> {
    let r = f.ring();
    let x = f.vars()[0];
    let mut args = vec![Polynomial::var(r, x)];
    args.extend((1..f.d()).map(|_| Polynomial::zero(r)));
    f.compose(&args, vec![x])
}

/// Residuals `F(σ·vars) − F(vars)` for the adjacent transpositions σ.
pub(crate) fn symmetry(f: &MSeries) -> Result<Vec<MSeries>> {
    let r = f.ring();
    let vars = f.vars().to_vec();
    let mut out = Vec::new();
    for i in 0..vars.len().saturating_sub(1) {
        let mut args: Vec<Polynomial> = vars.iter().map(|&v| Polynomial::var(r, v)).collect();
        args.swap(i, i + 1);
        out.push(f.compose(&args, vars.clone())?.residual(f)?);
    }
    Ok(out)
}

/// `F_t(−εx, y, ...) − F_{−εt}(x, y, ...)`.
pub(crate) fn epsilon_linearity(f: &MSeries) -> Result<MSeries> {
    let r = f.ring();
    let vars = f.vars().to_vec();
    let minus_e = -&Polynomial::var(r, Var::epsilon());
    let mut args: Vec<Polynomial> = vars.iter().map(|&v| Polynomial::var(r, v)).collect();
    args[0] = &minus_e * &args[0];
    let left = f.compose(&args, vars.clone())?;
    let comps = (1..=f.n()).map(|l| &minus_e.pow(l as u32) * &f.component(l)).collect();
    let right = MSeries::new(r, vars, comps, f.truncation())?;
    Ok(left.residual(&right)?.reduce_epsilon())
}

/// `F(F(x_0..x_{d−1}), x_d, ...) − F(x_0, F(x_1..x_d), x_{d+1}, ...)` in
/// `2d − 1` variables.
pub(crate) fn associativity(f: &MSeries) -> Result<MSeries> {
    let d = f.d();
    let all: Vec<Var> = (0..(2 * d - 1) as u8).map(Var::geometric).collect();
    let inner_left = f.with_vars(&all[..d])?;
    let mut outer_left = vec![slot()];
    outer_left.extend_from_slice(&all[d..]);
    let left = f.with_vars(&outer_left)?.substitute(0, &inner_left)?;

    let inner_right = f.with_vars(&all[1..=d])?;
    let mut outer_right = vec![all[0], slot()];
    outer_right.extend_from_slice(&all[d + 1..]);
    let right = f.with_vars(&outer_right)?.substitute(1, &inner_right)?;
    left.residual(&right)
}

/// `F` at `ε = value`.
pub(crate) fn specialize_epsilon(f: &MSeries, value: i64) -> MSeries {
    let r = f.ring();
    let map: FxHashMap<Var, Polynomial> = [(Var::epsilon(), Polynomial::from_i64(r, value))].into_iter().collect();
    f.map_components(|c| c.substitute(&map))
}
