//! 2-valued formal group laws: axiom checks, Buchstaber's types, the
//! degree-zero universal law and the functor `C` into formal ternary laws.

use std::fmt;

use crate::axioms;
use crate::error::{Error, Result};
use crate::groebner::{IncrementalOptions, RunResult};
use crate::mvseries::MSeries;
use crate::polyring::{CoefficientRing, MonomialOrder, Polynomial, Var};
use crate::quotient::Quotient;
use crate::relgen::{self, Arity, DegreeWindow, EpsilonMode, RelOptions};

const ZZ: CoefficientRing = CoefficientRing::Integers;

/// How ε is treated when checking the axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EpsilonCheck {
    /// ε acts as −1; neutral element `(1 + xt)²`.
    MinusOne,
    /// ε free with ε² = 1; neutral element `(1 + xt)(1 − εxt)` and
    /// ε-linearity `F_t(−εx, y) = F_{−εt}(x, y)`.
    Refined,
}

impl fmt::Display for EpsilonCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpsilonCheck::MinusOne => "minus-one",
            EpsilonCheck::Refined => "refined",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoFglType {
    I,
    II,
    Other,
}

impl fmt::Display for TwoFglType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwoFglType::I => "I",
            TwoFglType::II => "II",
            TwoFglType::Other => "other",
        })
    }
}

/// Residuals of the 2-FGL axioms, already reduced in the coefficient ring.
#[derive(Clone, Debug)]
pub struct TwoFglReport {
    pub mode: EpsilonCheck,
    pub neutral: MSeries,
    pub symmetry: MSeries,
    pub associativity: MSeries,
    /// Only checked in refined mode.
    pub epsilon_linearity: Option<MSeries>,
}

impl TwoFglReport {
    pub fn passes(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the axioms with a nonzero residual.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.neutral.is_zero() {
            out.push("neutral");
        }
        if !self.symmetry.is_zero() {
            out.push("symmetry");
        }
        if !self.associativity.is_zero() {
            out.push("associativity");
        }
        if self.epsilon_linearity.as_ref().is_some_and(|s| !s.is_zero()) {
            out.push("epsilon-linearity");
        }
        out
    }
}

/// The law as it is checked in `mode`: ε set to −1 or reduced by ε² = 1.
fn normalize(f: &MSeries, mode: EpsilonCheck) -> MSeries {
    match mode {
        EpsilonCheck::MinusOne => axioms::specialize_epsilon(f, -1),
        EpsilonCheck::Refined => f.reduce_epsilon(),
    }
}

fn neutral_target(ring: CoefficientRing, mode: EpsilonCheck, trunc: u32) -> Result<MSeries> {
    let s = match mode {
        EpsilonCheck::MinusOne => "(1 + x*t)^2",
        EpsilonCheck::Refined => "(1 + x*t)*(1 - e*x*t)",
    };
    MSeries::from_t_polynomial(&Polynomial::parse(ring, s)?, vec![Var::x()], 2, trunc)
}

/// Check the axioms of a (2,2)-series over the coefficient ring `q`.
pub fn verify_2fgl(f: &MSeries, mode: EpsilonCheck, q: &Quotient) -> Result<TwoFglReport> {
    if f.n() != 2 || f.d() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.n().max(f.d()) });
    }
    if !f.is_composable() {
        return Err(Error::NotComposable);
    }
    let g = normalize(f, mode);
    let target = neutral_target(g.ring(), mode, g.truncation())?;
    let neutral = q.reduce_series(&axioms::restrict_to_first(&g)?.residual(&target)?);
    let symmetry = q.reduce_series(&axioms::symmetry(&g)?.remove(0));
    let associativity = q.reduce_series(&axioms::associativity(&g)?);
    let epsilon_linearity = match mode {
        EpsilonCheck::MinusOne => None,
        EpsilonCheck::Refined => Some(q.reduce_series(&axioms::epsilon_linearity(&g)?)),
    };
    Ok(TwoFglReport { mode, neutral, symmetry, associativity, epsilon_linearity })
}

/// `γ`: the coefficient of `xy t²`.
pub fn gamma(f: &MSeries) -> Polynomial {
    let xy = crate::polyring::Monomial::from_pairs([(f.vars()[0], 1), (f.vars()[1], 1)]);
    f.component(2).collect(|v| f.vars().contains(&v)).remove(&xy).unwrap_or_else(|| Polynomial::zero(f.ring()))
}

/// Type I when `γ = −2`, type II when `γ = 2` in the coefficient ring. In
/// refined mode a law whose second component vanishes on the diagonal also
/// counts as type I.
pub fn classify(f: &MSeries, mode: EpsilonCheck, q: &Quotient) -> TwoFglType {
    let g = normalize(f, mode);
    let gm = gamma(&g);
    let two = Polynomial::from_i64(g.ring(), 2);
    if q.is_zero(&(&gm + &two)) {
        return TwoFglType::I;
    }
    if q.is_zero(&(&gm - &two)) {
        return TwoFglType::II;
    }
    if mode == EpsilonCheck::Refined {
        let x = Polynomial::var(g.ring(), g.vars()[0]);
        if let Ok(diag) = g.compose(&[x.clone(), x], vec![g.vars()[0]]) {
            if q.is_zero(&diag.component(2)) {
                return TwoFglType::I;
            }
        }
    }
    TwoFglType::Other
}

/// A verified 2-valued formal group law together with its coefficient ring.
#[derive(Clone, Debug)]
pub struct TwoFgl {
    series: MSeries,
    quotient: Quotient,
    mode: EpsilonCheck,
    kind: TwoFglType,
}

impl TwoFgl {
    pub fn new(series: MSeries, mode: EpsilonCheck, quotient: Quotient) -> Result<Self> {
        let report = verify_2fgl(&series, mode, &quotient)?;
        if !report.passes() {
            return Err(Error::Not2Fgl(format!("{} axiom(s) fail: {}", mode, report.failures().join(", "))));
        }
        let kind = classify(&series, mode, &quotient);
        Ok(TwoFgl { series: normalize(&series, mode), quotient, mode, kind })
    }

    pub fn series(&self) -> &MSeries {
        &self.series
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn mode(&self) -> EpsilonCheck {
        self.mode
    }

    pub fn kind(&self) -> TwoFglType {
        self.kind
    }
}

/// `C(F) = F_t(F_t(x, y), z)`, a (4,3)-series in `x, y, z` reduced in the
/// coefficient ring of `F`. Over ε = −1 only laws of type I are accepted.
pub fn functor_c(f: &TwoFgl) -> Result<MSeries> {
    if f.mode == EpsilonCheck::MinusOne && f.kind != TwoFglType::I {
        return Err(Error::NotTypeI);
    }
    Ok(f.quotient.reduce_series(&functor_c_unchecked(&f.series)?))
}

/// `F_t(F_t(x, y), z)` without any checks.
pub fn functor_c_unchecked(f: &MSeries) -> Result<MSeries> {
    let inner = f.with_vars(&[Var::x(), Var::y()])?;
    let outer = f.with_vars(&[axioms::slot(), Var::z()])?;
    outer.substitute(0, &inner)
}

/// `W = C ∘ N`: a formal group law to a formal ternary law at ε = −1.
pub fn functor_w(f: &crate::fgl::Fgl) -> Result<MSeries> {
    let n = crate::fgl::functor_n(f)?;
    let law = TwoFgl::new(n, EpsilonCheck::MinusOne, Quotient::free(f.ring()))?;
    functor_c(&law)
}

/// `1 + 2(x + y)t + (x − y)²t²`.
pub fn elementary_type_i(ring: CoefficientRing, trunc: u32) -> MSeries {
    let p = Polynomial::parse(ring, "1 + 2*(x+y)*t + (x-y)^2*t^2").expect("literal");
    MSeries::from_t_polynomial(&p, vec![Var::x(), Var::y()], 2, trunc).expect("literal")
}

/// The free coefficient `γ = b2_11` of the degree-zero universal law.
pub fn gamma_var() -> Var {
    Var::two_fgl_coeff(2, 1, 1)
}

/// `1 + 2(x + y)t + (x² + γxy + y²)t²` over `ℤ[γ]/((γ + 2)(γ − 2)²)`.
pub fn universal_degree_zero(trunc: u32) -> (MSeries, Quotient) {
    let g = gamma_var().name();
    let p = Polynomial::parse(ZZ, &format!("1 + 2*(x+y)*t + (x^2 + {g}*x*y + y^2)*t^2")).expect("literal");
    let s = MSeries::from_t_polynomial(&p, vec![Var::x(), Var::y()], 2, trunc).expect("literal");
    let q = Quotient::parse(ZZ, &[&format!("({g}+2)*({g}-2)^2")]).expect("literal");
    (s, q)
}

/// `1 + (1 − ε)(x + y)t + (−ε(x² + y²) + a xy)t²` over
/// `ℤ_ε[a]/((1 + ε)a, (a − (1 − ε))²(a + (1 − ε)))`, with `a = b2_11`.
pub fn universal_degree_zero_eps(trunc: u32) -> (MSeries, Quotient) {
    let a = gamma_var().name();
    let p = Polynomial::parse(ZZ, &format!("1 + (1-e)*(x+y)*t + (-e*(x^2 + y^2) + {a}*x*y)*t^2")).expect("literal");
    let s = MSeries::from_t_polynomial(&p, vec![Var::x(), Var::y()], 2, trunc).expect("literal");
    let q = Quotient::parse(ZZ, &[&format!("(1+e)*{a}"), &format!("({a}-(1-e))^2*({a}+(1-e))")]).expect("literal");
    (s, q)
}

/// Look up a built-in 2-valued law by name.
pub fn named_law(name: &str, trunc: u32) -> Option<(MSeries, Quotient, EpsilonCheck)> {
    match name {
        "elementary-I" => Some((elementary_type_i(ZZ, trunc), Quotient::free(ZZ), EpsilonCheck::MinusOne)),
        "universal-2fgl-deg0" => {
            let (s, q) = universal_degree_zero(trunc);
            Some((s, q, EpsilonCheck::MinusOne))
        }
        "universal-2fgl-deg0-eps" => {
            let (s, q) = universal_degree_zero_eps(trunc);
            Some((s, q, EpsilonCheck::Refined))
        }
        _ => None,
    }
}

pub const NAMED_LAWS: [&str; 3] = ["elementary-I", "universal-2fgl-deg0", "universal-2fgl-deg0-eps"];

/// The degree-zero part of the universal 2-valued law.
#[derive(Clone, Debug)]
pub struct B0 {
    pub run: RunResult,
    pub refined: bool,
}

impl B0 {
    /// Generators of the ideal in `ℤ[ε, γ]`, including ε² − 1 when refined.
    pub fn ideal(&self) -> Vec<Polynomial> {
        let mut out = self.run.relations.clone();
        if self.refined && !out.iter().any(|p| *p == eps_square()) {
            out.push(eps_square());
        }
        out
    }
}

fn eps_square() -> Polynomial {
    Polynomial::parse(ZZ, "e^2 - 1").expect("literal")
}

/// All relations of degree ≤ 0 of the universal (2,2)-group, folded into a
/// Gröbner basis: `ℤ[γ]/((γ+2)(γ−2)²)` integrally (ε = −1), and
/// `ℤ_ε[a]/((1+ε)a, (a−(1−ε))²(a+(1−ε)))` with ε free.
pub fn compute_b0(refined: bool, options: IncrementalOptions) -> Result<B0> {
    let window = DegreeWindow::new(-2, 0)?;
    let epsilon = if refined { EpsilonMode::Free } else { EpsilonMode::Minus };
    let run = relgen::solve(window, Arity::TwoFgl, RelOptions { epsilon, invert2: false }, ZZ, options)?;
    Ok(B0 { run, refined })
}

/// Multiplicity of `γ = r` in `ℚ[γ]/I`: the `m` with `I + (γ − r)^N = ((γ − r)^m)`
/// for large `N`. Over ℚ this is the length of the local factor, which is
/// also its length over ℤ[1/2] when 2 is the only bad prime.
pub fn local_multiplicity(relations: &[Polynomial], gamma: Var, root: i64) -> Result<u32> {
    let q = CoefficientRing::Rationals;
    let g = &Polynomial::var(q, gamma) - &Polynomial::from_i64(q, root);
    let mut gens: Vec<Polynomial> = relations.iter().map(|p| p.change_ring(q)).collect::<Result<_>>()?;
    let cap = relations.iter().filter_map(Polynomial::degree).max().unwrap_or(0) + 1;
    gens.push(g.pow(cap));
    let gb = crate::groebner::GroebnerBasis::from_generators(q, MonomialOrder::degrevlex(), &gens)?;
    Ok((0..=cap).find(|&m| gb.contains(&g.pow(m))).unwrap_or(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(ZZ, s).unwrap()
    }

    #[test]
    fn elementary_law_is_type_one() {
        let f = elementary_type_i(ZZ, 6);
        let q = Quotient::free(ZZ);
        assert!(verify_2fgl(&f, EpsilonCheck::MinusOne, &q).unwrap().passes());
        assert_eq!(classify(&f, EpsilonCheck::MinusOne, &q), TwoFglType::I);
    }

    #[test]
    fn broken_law_is_reported() {
        let f = MSeries::from_t_polynomial(&p("1 + 2*(x+y)*t + (x^2+y^2+x*y)*t^2"), vec![Var::x(), Var::y()], 2, 4)
            .unwrap();
        let r = verify_2fgl(&f, EpsilonCheck::MinusOne, &Quotient::free(ZZ)).unwrap();
        assert_eq!(r.failures(), vec!["associativity"]);
    }

    #[test]
    fn chow_components() {
        let law = TwoFgl::new(elementary_type_i(ZZ, 6), EpsilonCheck::MinusOne, Quotient::free(ZZ)).unwrap();
        let c = functor_c(&law).unwrap();
        assert_eq!(c.component(1), p("4*(x+y+z)"));
        assert_eq!(c.component(2), p("6*(x^2+y^2+z^2) + 4*(x*y+x*z+y*z)"));
    }
}
