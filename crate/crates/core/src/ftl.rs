//! Formal ternary laws: the five-axiom verifier, degree and the example
//! laws of Chow groups, Milnor-Witt motivic cohomology, Hermitian K-theory
//! and Witt cohomology.

use std::fmt;

use crate::axioms;
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::mvseries::MSeries;
use crate::polyring::{CoefficientRing, Monomial, Polynomial, Var};
use crate::quotient::Quotient;
use crate::symfun::{self, OrbitIndex};
use crate::twofgl;

const ZZ: CoefficientRing = CoefficientRing::Integers;

pub fn xyz() -> Vec<Var> {
    vec![Var::x(), Var::y(), Var::z()]
}

/// `τ`, the class of the symplectic form.
pub fn tau() -> Var {
    Var::user_with_grade("tau", 1)
}

/// `γ⁻¹`, the inverse of the periodicity element. `γ` itself never occurs.
pub fn gamma_inverse() -> Var {
    Var::user_with_grade("ginv", -2)
}

/// A (4,3)-series with the value of ε it lives over (`None`: ε free with
/// ε² = 1), the relations of its coefficient ring and a tag saying where it
/// came from.
#[derive(Clone, Debug)]
pub struct Ftl {
    pub series: MSeries,
    pub epsilon: Option<i64>,
    pub relations: Vec<Polynomial>,
    pub tag: String,
}

impl Ftl {
    pub fn new(series: MSeries, epsilon: Option<i64>, tag: impl Into<String>) -> Result<Self> {
        if series.n() != 4 || series.d() != 3 {
            return Err(Error::ArityMismatch { expected: 4, got: series.n() });
        }
        Ok(Ftl { series, epsilon, relations: Vec::new(), tag: tag.into() })
    }

    pub fn with_relations(mut self, relations: Vec<Polynomial>) -> Self {
        self.relations = relations;
        self
    }

    /// The coefficient ring as a quotient.
    pub fn quotient(&self) -> Result<Quotient> {
        Quotient::new(self.series.ring(), &self.relations)
    }

    pub fn component(&self, l: usize) -> Polynomial {
        self.series.component(l)
    }

    /// The coefficient of `x^i y^j z^k` in `F_l`.
    pub fn coefficient(&self, l: usize, idx: [u32; 3]) -> Polynomial {
        let vars = self.series.vars();
        let m = Monomial::from_pairs(vars.iter().copied().zip(idx));
        self.component(l)
            .collect(|v| vars.contains(&v))
            .remove(&m)
            .unwrap_or_else(|| Polynomial::zero(self.series.ring()))
    }
}

/// Build `Σ c·σ(x^α) t^l` from `(l, c, α)` triples.
pub fn from_orbits(ring: CoefficientRing, trunc: u32, terms: &[(usize, &str, &[u32])]) -> Result<MSeries> {
    let vars = xyz();
    let mut comps = vec![Polynomial::zero(ring); 4];
    for &(l, c, exps) in terms {
        let mut e = exps.to_vec();
        e.resize(3, 0);
        let s = symfun::monomial_symmetric(ring, &OrbitIndex::new(e), &vars)?;
        comps[l - 1] = &comps[l - 1] + &(&Polynomial::parse(ring, c)? * &s);
    }
    MSeries::new(ring, vars, comps, trunc)
}

const CHOW: &[(usize, &str, &[u32])] = &[
    (1, "4", &[1]),
    (2, "6", &[2]),
    (2, "4", &[1, 1]),
    (3, "4", &[3]),
    (3, "-4", &[2, 1]),
    (3, "40", &[1, 1, 1]),
    (4, "1", &[4]),
    (4, "-4", &[3, 1]),
    (4, "6", &[2, 2]),
    (4, "4", &[2, 1, 1]),
];

const HMW: &[(usize, &str, &[u32])] = &[
    (1, "2*(1-e)", &[1]),
    (2, "2*(1-2*e)", &[2]),
    (2, "2*(1-e)", &[1, 1]),
    (3, "2*(1-e)", &[3]),
    (3, "-2*(1-e)", &[2, 1]),
    (3, "8*(2-3*e)", &[1, 1, 1]),
    (4, "1", &[4]),
    (4, "-2*(1-e)", &[3, 1]),
    (4, "2*(1-2*e)", &[2, 2]),
    (4, "2*(1-e)", &[2, 1, 1]),
];

// the terms of the Hermitian K-theory law beyond those of HMW
const KO_EXTRA: &[(usize, &str, &[u32])] = &[
    (1, "tau*ginv", &[1, 1]),
    (1, "ginv", &[1, 1, 1]),
    (2, "2*tau*ginv", &[2, 1]),
    (2, "-3*tau*ginv", &[1, 1, 1]),
    (2, "ginv", &[2, 2]),
    (3, "tau*ginv", &[3, 1]),
    (3, "-2*tau*ginv", &[2, 2]),
    (3, "3*tau*ginv", &[2, 1, 1]),
    (3, "ginv", &[3, 1, 1]),
    (4, "-tau*ginv", &[3, 1, 1]),
    (4, "2*tau*ginv", &[2, 2, 1]),
    (4, "ginv", &[2, 2, 2]),
];

/// The Chow law over ℤ (ε = −1).
pub fn chow(trunc: u32) -> Ftl {
    Ftl::new(from_orbits(ZZ, trunc, CHOW).expect("literal"), Some(-1), "chow").expect("literal")
}

/// Milnor-Witt motivic cohomology over ℤ_ε.
pub fn hmw(trunc: u32) -> Ftl {
    Ftl::new(from_orbits(ZZ, trunc, HMW).expect("literal"), None, "hmw").expect("literal")
}

/// Hermitian K-theory over ℤ_ε[τ, γ⁻¹]/((1 + ε)τ, τ²γ⁻¹ − 2(1 − ε)).
///
/// ⟨−1⟩ fixes the symplectic plane, and its square is twice the
/// hyperbolic form `h = 1 − ε` times `γ`. Without these two relations the
/// law is not associative.
pub fn ko(trunc: u32) -> Ftl {
    let (t, _) = (tau(), gamma_inverse());
    let mut terms = HMW.to_vec();
    terms.extend_from_slice(KO_EXTRA);
    let rel = Polynomial::parse(ZZ, &format!("(1+e)*{t}")).expect("literal");
    let sq = Polynomial::parse(ZZ, &format!("{t}^2*ginv - 2*(1-e)")).expect("literal");
    Ftl::new(from_orbits(ZZ, trunc, &terms).expect("literal"), None, "ko")
        .expect("literal")
        .with_relations(vec![rel, sq])
}

/// Witt cohomology: the K-theory law at ε = 1, τ = 0.
pub fn witt(trunc: u32) -> Ftl {
    let k = epsilon_specialize(&ko(trunc), 1);
    let series = k.series.map_components(|c| c.specialize(&[(tau(), 0)]));
    Ftl { series, epsilon: Some(1), relations: Vec::new(), tag: "witt".into() }
}

pub const NAMED_LAWS: [&str; 4] = ["chow", "hmw", "ko", "witt"];

pub fn named_law(name: &str, trunc: u32) -> Option<Ftl> {
    match name {
        "chow" => Some(chow(trunc)),
        "hmw" => Some(hmw(trunc)),
        "ko" => Some(ko(trunc)),
        "witt" => Some(witt(trunc)),
        _ => None,
    }
}

/// The five axiom residuals, plus the strong form of the weak neutral axiom.
#[derive(Clone, Debug)]
pub struct FtlReport {
    pub neutral: MSeries,
    pub symmetry: Vec<MSeries>,
    pub associativity: MSeries,
    pub epsilon_linearity: MSeries,
    /// `F₄(x, x, 0)`.
    pub weak_neutral: Polynomial,
    /// `F₃(x, x, 0) = 0` as well (not an axiom).
    pub strong_neutral: bool,
}

impl FtlReport {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.neutral.is_zero() {
            out.push("neutral");
        }
        if !self.symmetry.iter().all(MSeries::is_zero) {
            out.push("symmetry");
        }
        if !self.associativity.is_zero() {
            out.push("associativity");
        }
        if !self.epsilon_linearity.is_zero() {
            out.push("epsilon-linearity");
        }
        if !self.weak_neutral.is_zero() {
            out.push("weak-neutral");
        }
        out
    }

    pub fn passes(&self) -> bool {
        self.failures().is_empty()
    }
}

impl fmt::Display for FtlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(f, "neutral: {}", ok(self.neutral.is_zero()))?;
        writeln!(f, "symmetry: {}", ok(self.symmetry.iter().all(MSeries::is_zero)))?;
        writeln!(f, "associativity: {}", ok(self.associativity.is_zero()))?;
        writeln!(f, "epsilon-linearity: {}", ok(self.epsilon_linearity.is_zero()))?;
        writeln!(f, "weak-neutral: {}", ok(self.weak_neutral.is_zero()))?;
        write!(f, "strong-neutral: {}", if self.strong_neutral { "holds" } else { "fails" })
    }
}

/// `F_t(x, x, 0)` as a series in `x`.
fn diagonal(f: &MSeries) -> Result<MSeries> {
    let r = f.ring();
    let x = Polynomial::var(r, f.vars()[0]);
    f.compose(&[x.clone(), x, Polynomial::zero(r)], vec![f.vars()[0]])
}

/// Check the five axioms in the coefficient ring of `f`.
pub fn verify_ftl(f: &Ftl) -> Result<FtlReport> {
    verify_ftl_in(f, &f.quotient()?)
}

/// Check the five axioms, reducing residuals in `q`.
pub fn verify_ftl_in(f: &Ftl, q: &Quotient) -> Result<FtlReport> {
    let g = f.series.reduce_epsilon();
    let ring = g.ring();
    // residuals computed with ε symbolic, then ε set to the law's value
    let fix = |s: MSeries| -> MSeries {
        let s = match f.epsilon {
            Some(v) => axioms::specialize_epsilon(&s, v),
            None => s,
        };
        q.reduce_series(&s)
    };
    let target = MSeries::from_t_polynomial(
        &Polynomial::parse(ring, "(1 + x*t)^2*(1 - e*x*t)^2")?.reduce_epsilon(),
        vec![g.vars()[0]],
        4,
        g.truncation(),
    )?;
    // associativity dominates; the other checks run alongside it
    let (associativity, rest) = rayon::join(
        || axioms::associativity(&g),
        || -> Result<_> {
            let neutral = axioms::restrict_to_first(&g)?.residual(&target)?;
            Ok((neutral, axioms::symmetry(&g)?, axioms::epsilon_linearity(&g)?, diagonal(&g)?))
        },
    );
    let (neutral, symmetry, epsilon_linearity, diag) = rest?;
    let associativity = fix(associativity?);
    let neutral = fix(neutral);
    let symmetry = symmetry.into_iter().map(&fix).collect();
    let epsilon_linearity = fix(epsilon_linearity);
    let diag = fix(diag);
    Ok(FtlReport {
        neutral,
        symmetry,
        associativity,
        epsilon_linearity,
        weak_neutral: diag.component(4),
        strong_neutral: diag.component(3).is_zero(),
    })
}

/// `(δ, ν)`: the largest and smallest `|α| − l` over the terms `x^α t^l`.
pub fn ftl_degree(f: &Ftl) -> Result<(i64, i64)> {
    f.series.degree_valuation()
}

/// Set ε to `sign` and reduce.
pub fn epsilon_specialize(f: &Ftl, sign: i64) -> Ftl {
    let series = axioms::specialize_epsilon(&f.series.reduce_epsilon(), sign);
    let relations =
        f.relations.iter().map(|p| p.specialize(&[(Var::epsilon(), sign)])).filter(|p| !p.is_zero()).collect();
    Ftl { series, epsilon: Some(sign), relations, tag: format!("{}|e={sign}", f.tag) }
}

/// Replace `τ^k γ^{-m}` by `2^k a^{4m − 2k}`: the values `τ = 2a⁻²`,
/// `γ⁻¹ = a⁴`. Fails if τ occurs without enough `γ⁻¹` to stay polynomial.
pub fn ko_to_multiplicative(p: &Polynomial, a: Var) -> Result<Polynomial> {
    let (tv, gv) = (tau(), gamma_inverse());
    let ring = p.ring();
    let mut out = Vec::new();
    for t in p.terms() {
        let (rest, k) = t.mon.without(tv);
        let (rest, m) = rest.without(gv);
        if 4 * m < 2 * k {
            return Err(Error::InvalidArgument(format!("τ^{k} γ^-{m} is not polynomial in a")));
        }
        let c = ring.mul(&t.coeff, &ring.from_i64(1i64 << k));
        out.push((rest.mul(&Monomial::var_pow(a, 4 * m - 2 * k)), c));
    }
    Ok(Polynomial::from_terms(ring, out))
}

/// The K-theory law at `ε = −1, τ = 2a⁻², γ⁻¹ = a⁴`.
pub fn ko_at_multiplicative(trunc: u32, a: Var) -> Result<MSeries> {
    let k = epsilon_specialize(&ko(trunc), -1);
    let comps = k.series.components().iter().map(|c| ko_to_multiplicative(c, a)).collect::<Result<Vec<_>>>()?;
    MSeries::new(k.series.ring(), k.series.vars().to_vec(), comps, trunc)
}

/// Coefficientwise comparison of `W(x + y − axy)` with the K-theory law at
/// `ε = −1, τ = 2a⁻², γ⁻¹ = a⁴`.
#[derive(Clone, Debug)]
pub struct WComparison {
    pub w: MSeries,
    pub ko: MSeries,
    pub difference: MSeries,
}

impl WComparison {
    pub fn equal(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Compare at truncation `trunc`; `sign` chooses the FGL `x + y − sign·axy`.
pub fn check_w_multiplicative_vs_ko(trunc: u32, sign: i64) -> Result<WComparison> {
    let a = Var::user("a");
    let av = Polynomial::var(ZZ, a).scale_i64(sign);
    let w = twofgl::functor_w(&Fgl::multiplicative(&av, 2 * trunc))?;
    let ko = ko_at_multiplicative(trunc, a)?;
    let difference = w.residual(&ko)?;
    Ok(WComparison { w, ko, difference })
}

/// `W(additive)` against the K-theory law at `ε = −1, τ = γ⁻¹ = 0`.
pub fn check_w_additive_vs_ko(trunc: u32) -> Result<WComparison> {
    let w = twofgl::functor_w(&Fgl::additive(ZZ, 2 * trunc))?;
    let k = epsilon_specialize(&ko(trunc), -1);
    let ko = k.series.map_components(|c| c.specialize(&[(tau(), 0), (gamma_inverse(), 0)]));
    let difference = w.residual(&ko)?;
    Ok(WComparison { w, ko, difference })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chow_passes() {
        let r = verify_ftl(&chow(6)).unwrap();
        assert!(r.passes(), "{r}");
    }

    #[test]
    fn hmw_at_minus_one_is_chow() {
        let h = epsilon_specialize(&hmw(6), -1);
        assert_eq!(h.series, chow(6).series);
    }

    #[test]
    fn broken_law_fails_associativity() {
        let mut terms = CHOW.to_vec();
        terms[5] = (3, "41", &[1, 1, 1]);
        let f = Ftl::new(from_orbits(ZZ, 5, &terms).unwrap(), Some(-1), "bad").unwrap();
        let r = verify_ftl(&f).unwrap();
        assert!(r.failures().contains(&"associativity"));
    }
}
