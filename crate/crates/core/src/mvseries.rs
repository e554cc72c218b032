//! Truncated multivalued series `1 + F1 t + ... + Fn t^n` in d variables.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::polyring::{CoefficientRing, Monomial, Polynomial, Truncation, Var};
use crate::symfun;

/// An (n,d)-series truncated at total degree `D` in its variables.
///
/// The constant component `F0 = 1` is implicit. Components may involve
/// coefficient variables (ε, law coefficients, ...) besides the series
/// variables; only the series variables count towards the truncation.
#[derive(Clone, PartialEq, Eq)]
pub struct MSeries {
    ring: CoefficientRing,
    vars: Vec<Var>,
    comps: Vec<Polynomial>,
    trunc: u32,
}

impl MSeries {
    pub fn new(ring: CoefficientRing, vars: Vec<Var>, comps: Vec<Polynomial>, trunc: u32) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::InvalidArgument("a multivalued series needs n >= 1".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) || *v == Var::t() {
                return Err(Error::InvalidArgument(format!("bad series variable list {vars:?}")));
            }
        }
        let tr = Truncation::total_degree(&vars, trunc as i64);
        let comps = comps
            .into_iter()
            .map(|c| {
                if c.ring() != ring {
                    return Err(Error::RingMismatch(ring.to_string(), c.ring().to_string()));
                }
                if c.contains_var(Var::t()) {
                    return Err(Error::InvalidArgument("components must not involve t".into()));
                }
                Ok(c.truncate(&tr))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MSeries { ring, vars, comps, trunc })
    }

    /// Read `1 + Σ F_l t^l` from a polynomial in `t`.
    pub fn from_t_polynomial(p: &Polynomial, vars: Vec<Var>, n: usize, trunc: u32) -> Result<Self> {
        let tr = Truncation::total_degree(&vars, trunc as i64);
        if !p.coefficient_of(Var::t(), 0).truncate(&tr).is_one() {
            return Err(Error::InvalidArgument("constant t-coefficient must be 1".into()));
        }
        if p.degree_in(Var::t()) as usize > n {
            return Err(Error::InvalidArgument(format!("t-degree exceeds n = {n}")));
        }
        let comps = (1..=n).map(|l| p.coefficient_of(Var::t(), l as u32)).collect();
        MSeries::new(p.ring(), vars, comps, trunc)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    /// Number of values.
    pub fn n(&self) -> usize {
        self.comps.len()
    }

    /// Number of variables.
    pub fn d(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn degree_truncation(&self) -> Truncation {
        Truncation::total_degree(&self.vars, self.trunc as i64)
    }

    /// `F_l`; `F_0 = 1`.
    pub fn component(&self, l: usize) -> Polynomial {
        match l {
            0 => Polynomial::one(self.ring),
            _ => self.comps.get(l - 1).cloned().unwrap_or_else(|| Polynomial::zero(self.ring)),
        }
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    /// `1 + F1 t + ... + Fn t^n`.
    pub fn to_t_polynomial(&self) -> Polynomial {
        let mut out = Polynomial::one(self.ring);
        for (l, c) in self.comps.iter().enumerate() {
            out = &out + &c.mul_term(&Monomial::var_pow(Var::t(), l as u32 + 1), &self.ring.one());
        }
        out
    }

    /// `t^n F_{-1/t}`, i.e. `t^n - F1 t^(n-1) + ... + (-1)^n Fn`.
    ///
    /// Applying [`invert_marker`] to the result gives back `(-1)^n` times the
    /// series polynomial.
    pub fn buchstaber_form(&self) -> Polynomial {
        invert_marker(&self.to_t_polynomial(), self.n() as u32)
    }

    /// Apply `f` to every component and truncate again.
    pub fn map_components(&self, f: impl Fn(&Polynomial) -> Polynomial) -> MSeries {
        let tr = self.degree_truncation();
        MSeries {
            ring: self.ring,
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|c| f(c).truncate(&tr)).collect(),
            trunc: self.trunc,
        }
    }

    /// Reduce ε² to 1 in every component.
    pub fn reduce_epsilon(&self) -> MSeries {
        self.map_components(Polynomial::reduce_epsilon)
    }

    /// Rename the series variables.
    pub fn with_vars(&self, vars: &[Var]) -> Result<MSeries> {
        if vars.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: vars.len() });
        }
        let map: FxHashMap<Var, Polynomial> =
            self.vars.iter().zip(vars).map(|(&a, &b)| (a, Polynomial::var(self.ring, b))).collect();
        let comps = self.comps.iter().map(|c| c.substitute(&map)).collect();
        MSeries::new(self.ring, vars.to_vec(), comps, self.trunc)
    }

    /// Lower the truncation.
    pub fn truncated(&self, trunc: u32) -> MSeries {
        let mut out = self.clone();
        out.trunc = trunc.min(self.trunc);
        let tr = out.degree_truncation();
        out.comps = out.comps.iter().map(|c| c.truncate(&tr)).collect();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    /// `(δ, ν)`: sup and inf of `|α| − l` over nonzero terms `x^α t^l`.
    pub fn degree_valuation(&self) -> Result<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for (l, c) in self.comps.iter().enumerate() {
            for t in c.terms() {
                let a = t.mon.degree_in(|v| self.vars.contains(&v)) as i64 - (l as i64 + 1);
                range = Some(match range {
                    None => (a, a),
                    Some((hi, lo)) => (hi.max(a), lo.min(a)),
                });
            }
        }
        range.ok_or(Error::ZeroSeries)
    }

    /// Every component vanishes at the origin.
    pub fn is_composable(&self) -> bool {
        self.comps.iter().all(|c| c.terms().iter().all(|t| t.mon.pairs().iter().any(|&(v, _)| self.vars.contains(&v))))
    }

    /// Order (lowest degree in the series variables) of each component;
    /// `None` for a zero component.
    pub fn component_orders(&self) -> Vec<Option<u32>> {
        self.comps.iter().map(|c| c.terms().iter().map(|t| t.mon.degree_in(|v| self.vars.contains(&v))).min()).collect()
    }

    fn check_compatible(&self, other: &MSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    /// Componentwise difference of two series over the same variables.
    pub fn residual(&self, other: &MSeries) -> Result<MSeries> {
        self.check_compatible(other)?;
        if self.vars != other.vars {
            return Err(Error::InvalidArgument("series variables differ".into()));
        }
        let n = self.n().max(other.n());
        let comps = (1..=n).map(|l| &self.component(l) - &other.component(l)).collect();
        MSeries::new(self.ring, self.vars.clone(), comps, self.trunc)
    }

    /// The product of two series in the same variables: an (n+m, d)-series.
    pub fn product(&self, other: &MSeries) -> Result<MSeries> {
        self.check_compatible(other)?;
        if self.vars != other.vars {
            return Err(Error::InvalidArgument("series variables differ".into()));
        }
        let tr = self.degree_truncation();
        let p = self.to_t_polynomial().mul_truncated(&other.to_t_polynomial(), &tr);
        MSeries::from_t_polynomial(&p, self.vars.clone(), self.n() + other.n(), self.trunc)
    }

    /// Ordinary composition: replace the series variables by single-valued
    /// series in `new_vars`.
    pub fn compose(&self, args: &[Polynomial], new_vars: Vec<Var>) -> Result<MSeries> {
        if args.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: args.len() });
        }
        let tr = Truncation::total_degree(&new_vars, self.trunc as i64);
        let map: FxHashMap<Var, Polynomial> = self.vars.iter().copied().zip(args.iter().cloned()).collect();
        let comps = self.comps.iter().map(|c| c.substitute_truncated(&map, &tr)).collect();
        MSeries::new(self.ring, new_vars, comps, self.trunc)
    }

    /// Substitute `g` at `place` (0-based): `∏ F_t(…, r_l, …)` over the m
    /// formal roots of `g`, rewritten through `E_l ↦ G_l`.
    ///
    /// The result is an (n·m, d+r−1)-series in the variables
    /// `x_0 … x_{i−1}, y_0 … y_{r−1}, x_{i+1} …`, which must be distinct.
    pub fn substitute(&self, place: usize, g: &MSeries) -> Result<MSeries> {
        self.check_compatible(g)?;
        if place >= self.d() {
            return Err(Error::InvalidArgument(format!("place {place} out of range for d = {}", self.d())));
        }
        if !g.is_composable() {
            return Err(Error::NotComposable);
        }
        let mut out_vars: Vec<Var> = self.vars[..place].to_vec();
        out_vars.extend_from_slice(&g.vars);
        out_vars.extend_from_slice(&self.vars[place + 1..]);
        for (i, v) in out_vars.iter().enumerate() {
            if out_vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("variable {v} occurs twice after substitution")));
            }
        }
        let (n, m) = (self.n(), g.n());
        let ring = self.ring;
        let d = self.trunc as i64;

        // Root weight p/q: every G_l has order at least (p/q)·l.
        let (p, q) = root_weight(&g.component_orders());
        let geo_tr = Truncation::total_degree(&out_vars, q * d);
        let geo_tr = scale_weights(geo_tr, &out_vars, q);
        let x = self.vars[place];

        // P_k = [x^k] F_t as a polynomial in t and the other variables.
        let ft = self.to_t_polynomial();
        let kmax = ft.degree_in(x);
        let pk: Vec<Polynomial> = (0..=kmax).map(|k| ft.coefficient_of(x, k)).collect();
        let mut ev = ElementaryEvaluator::new(g.comps.clone(), geo_tr.clone(), p);
        let mut acc = Polynomial::zero(ring);
        let mut prod_cache: FxHashMap<Vec<u32>, Polynomial> = FxHashMap::default();
        for lambda in multisets(m, kmax) {
            let size: i64 = lambda.iter().map(|&k| k as i64).sum();
            if p * size > q * d {
                continue;
            }
            let prod = product_of(&pk, &lambda, &geo_tr, q * d - p * size, &mut prod_cache);
            if prod.is_zero() {
                continue;
            }
            let e = symfun::m_to_e(&lambda, ring);
            let mval = ev.eval(&e);
            acc = &acc + &mval.mul_truncated_cap(&prod, &geo_tr, q * d);
        }
        MSeries::from_t_polynomial(&acc, out_vars, n * m, self.trunc)
    }
}

/// Replace `P(t)` by `t^n P(−1/t)` for a polynomial of t-degree ≤ n.
pub fn invert_marker(p: &Polynomial, n: u32) -> Polynomial {
    let t = Var::t();
    let ring = p.ring();
    Polynomial::from_terms(
        ring,
        p.terms().iter().map(|term| {
            let (rest, k) = term.mon.without(t);
            let c = if k % 2 == 1 { ring.neg(&term.coeff) } else { term.coeff.clone() };
            (rest.mul(&Monomial::var_pow(t, n - k)), c)
        }),
    )
}

/// Largest `p/q ≤ 1` with `order(G_l) ≥ (p/q)·l` for all nonzero `G_l`.
pub(crate) fn root_weight(orders: &[Option<u32>]) -> (i64, i64) {
    let mut best = (1i64, 1i64);
    for (l, o) in orders.iter().enumerate() {
        if let Some(o) = *o {
            let (a, b) = (o as i64, l as i64 + 1);
            if a * best.1 < best.0 * b {
                best = (a, b);
            }
        }
    }
    let g = Int::from(best.0).gcd(&Int::from(best.1)).to_i64().unwrap_or(1).max(1);
    (best.0 / g, best.1 / g)
}

fn scale_weights(mut tr: Truncation, vars: &[Var], w: i64) -> Truncation {
    for &v in vars {
        tr = tr.with_weight(v, w);
    }
    tr
}

/// All weakly decreasing tuples of length `m` with entries in `0..=kmax`.
pub fn multisets(m: usize, kmax: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in (0..=hi).rev() {
            cur.push(k);
            rec(m, k, cur, out);
            cur.pop();
        }
    }
    rec(m, kmax, &mut cur, &mut out);
    out
}

/// `∏ P_{λ_i}` with prefix products memoized.
fn product_of(
    pk: &[Polynomial],
    lambda: &[u32],
    tr: &Truncation,
    cap: i64,
    cache: &mut FxHashMap<Vec<u32>, Polynomial>,
) -> Polynomial {
    if lambda.is_empty() {
        return Polynomial::one(pk[0].ring());
    }
    if let Some(hit) = cache.get(lambda) {
        return hit.truncate(&with_cap(tr, cap));
    }
    let head = product_of(pk, &lambda[..lambda.len() - 1], tr, tr.cap, cache);
    let full = head.mul_truncated(&pk[lambda[lambda.len() - 1] as usize], tr);
    cache.insert(lambda.to_vec(), full.clone());
    full.truncate(&with_cap(tr, cap))
}

fn with_cap(tr: &Truncation, cap: i64) -> Truncation {
    let mut t = tr.clone();
    t.cap = cap;
    t
}

/// Evaluates polynomials in `E1, E2, ...` under `E_l ↦ G_l`, memoizing
/// monomials. A monomial of weighted E-degree `w` (E_l has weight l) is
/// truncated at `cap + shift·w`; this is exact whenever every term of `G_l`
/// has weight at least `shift·l`.
pub struct ElementaryEvaluator {
    g: Vec<Polynomial>,
    tr: Truncation,
    shift: i64,
    cache: FxHashMap<Monomial, Polynomial>,
}

impl ElementaryEvaluator {
    pub fn new(g: Vec<Polynomial>, tr: Truncation, shift: i64) -> Self {
        ElementaryEvaluator { g, tr, shift, cache: FxHashMap::default() }
    }

    fn elementary_weight(m: &Monomial) -> i64 {
        m.pairs()
            .iter()
            .map(|&(v, e)| match v.kind() {
                crate::polyring::VarKind::Elementary(l) => l as i64 * e as i64,
                _ => 0,
            })
            .sum()
    }

    pub fn eval_monomial(&mut self, m: &Monomial) -> Polynomial {
        if let Some(hit) = self.cache.get(m) {
            return hit.clone();
        }
        let ring = self.g.first().map(|p| p.ring()).unwrap_or(CoefficientRing::Integers);
        let out = match m.pairs().last() {
            None => Polynomial::one(ring),
            Some(&(v, _)) => {
                let l = match v.kind() {
                    crate::polyring::VarKind::Elementary(l) => l as usize,
                    _ => panic!("not an elementary symmetric variable: {v}"),
                };
                let rest = m.div(&Monomial::var(v)).expect("factor divides");
                let head = self.eval_monomial(&rest);
                let gl = self.g.get(l - 1).cloned().unwrap_or_else(|| Polynomial::zero(ring));
                let cap = self.tr.cap + self.shift * Self::elementary_weight(m);
                head.mul_truncated_cap(&gl, &self.tr, cap)
            }
        };
        self.cache.insert(m.clone(), out.clone());
        out
    }

    /// Evaluate a polynomial whose variables other than `E_l` are constants
    /// of the evaluation (they are kept as factors).
    pub fn eval(&mut self, p: &Polynomial) -> Polynomial {
        let ring = p.ring();
        let mut acc = Vec::new();
        for t in p.terms() {
            let (e_part, rest) = t.mon.split(|v| matches!(v.kind(), crate::polyring::VarKind::Elementary(_)));
            let val = self.eval_monomial(&e_part);
            for vt in val.terms() {
                let c = ring.mul(&vt.coeff, &t.coeff);
                acc.push((vt.mon.mul(&rest), c));
            }
        }
        Polynomial::from_terms(ring, acc)
    }
}

/// A composable univariate series `Θ(x)` used as a morphism of
/// multivalued series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMorphism {
    pub theta: Polynomial,
    pub var: Var,
    pub trunc: u32,
}

impl SeriesMorphism {
    pub fn new(theta: Polynomial, var: Var, trunc: u32) -> Result<Self> {
        if theta.variables().iter().any(|&v| v != var && v.is_geometric()) {
            return Err(Error::InvalidArgument("morphism must be univariate".into()));
        }
        if !theta.coefficient_of(var, 0).is_zero() {
            return Err(Error::NotComposable);
        }
        let theta = theta.truncate(&Truncation::total_degree(&[var], trunc as i64));
        Ok(SeriesMorphism { theta, var, trunc })
    }

    pub fn identity(ring: CoefficientRing, trunc: u32) -> Self {
        SeriesMorphism { theta: Polynomial::var(ring, Var::x()), var: Var::x(), trunc }
    }

    /// `Θ(arg)` truncated at `trunc` in `vars`.
    pub fn apply(&self, arg: &Polynomial, vars: &[Var]) -> Polynomial {
        let mut map = FxHashMap::default();
        map.insert(self.var, arg.clone());
        self.theta.substitute_truncated(&map, &Truncation::total_degree(vars, self.trunc as i64))
    }

    /// `Θ ∘ Ψ`.
    pub fn compose(&self, inner: &SeriesMorphism) -> SeriesMorphism {
        let arg = inner.theta.rename(|v| if v == inner.var { self.var } else { v });
        let theta = self.apply(&arg, &[self.var]);
        SeriesMorphism { theta, var: self.var, trunc: self.trunc.min(inner.trunc) }
    }

    /// `1 + Θ(x) t` as a (1,1)-series.
    pub fn as_series(&self) -> MSeries {
        MSeries::new(self.theta.ring(), vec![self.var], vec![self.theta.clone()], self.trunc)
            .expect("valid morphism series")
    }
}

/// `Θ_t(F_t(x)) − G_t(Θ(x_1), …, Θ(x_d))`; zero iff Θ is a morphism F → G
/// up to the truncation.
pub fn verify_morphism(theta: &SeriesMorphism, f: &MSeries, g: &MSeries) -> Result<MSeries> {
    f.check_compatible(g)?;
    if f.vars != g.vars || f.n() != g.n() {
        return Err(Error::InvalidArgument("source and target must be (n,d)-series in the same variables".into()));
    }
    let mut th = theta.clone();
    th.trunc = f.trunc;
    // rename Θ's variable away from F's variables
    let w = Var::geometric(63);
    th.theta = th.theta.rename(|v| if v == theta.var { w } else { v });
    th.var = w;
    let lhs = th.as_series().substitute(0, f)?;
    let args: Vec<Polynomial> = f.vars.iter().map(|&v| th.apply(&Polynomial::var(f.ring, v), &f.vars)).collect();
    let rhs = g.compose(&args, f.vars.clone())?;
    lhs.residual(&rhs)
}

impl fmt::Display for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")?;
        for (l, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match l {
                0 => write!(f, " + ({c})*t")?,
                _ => write!(f, " + ({c})*t^{}", l + 1)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MSeries(n={}, d={}, D={}): {}", self.n(), self.d(), self.trunc, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(z(), s).unwrap()
    }

    fn series(s: &str, vars: &[Var], n: usize, d: u32) -> MSeries {
        MSeries::from_t_polynomial(&p(s), vars.to_vec(), n, d).unwrap()
    }

    #[test]
    fn buchstaber_form_of_two_valued() {
        let f = series("1 + (x+y)*t + x*y*t^2", &[Var::x(), Var::y()], 2, 4);
        assert_eq!(f.buchstaber_form(), p("t^2 - (x+y)*t + x*y"));
        let g = series("1", &[Var::x()], 1, 4);
        assert_eq!(g.buchstaber_form(), p("t"));
        let n = f.n() as u32;
        assert_eq!(invert_marker(&f.buchstaber_form(), n), f.to_t_polynomial());
    }

    #[test]
    fn degree_and_valuation() {
        let x = [Var::x()];
        assert_eq!(series("1 + x^2*t", &x, 1, 5).degree_valuation().unwrap(), (1, 1));
        assert_eq!(series("1 + (x+x^3)*t^2", &x, 2, 5).degree_valuation().unwrap(), (1, -1));
        assert!(matches!(series("1", &x, 1, 5).degree_valuation(), Err(Error::ZeroSeries)));
    }

    #[test]
    fn composability() {
        let xy = [Var::x(), Var::y()];
        assert!(series("1 + (x+y)*t", &xy, 1, 3).is_composable());
        assert!(!series("1 + (1+x)*t", &xy, 1, 3).is_composable());
    }

    #[test]
    fn additive_associativity() {
        let f = series("1 + (x+y)*t", &[Var::x(), Var::y()], 1, 4);
        let g = f.with_vars(&[Var::z(), Var::u()]).unwrap();
        let h = f.with_vars(&[Var::x(), Var::v()]).unwrap();
        let s = h.substitute(0, &g).unwrap();
        assert_eq!(s.vars(), &[Var::z(), Var::u(), Var::v()]);
        assert_eq!(s.component(1), p("z+u+v"));
    }

    #[test]
    fn morphism_identity_and_negation() {
        let xy = vec![Var::x(), Var::y()];
        let f = series("1 + 2*(x+y)*t + (x-y)^2*t^2", &xy, 2, 6);
        let id = SeriesMorphism::identity(z(), 6);
        assert!(verify_morphism(&id, &f, &f).unwrap().is_zero());
        let neg = SeriesMorphism::new(p("-x"), Var::x(), 6).unwrap();
        assert!(verify_morphism(&neg, &f, &f).unwrap().is_zero());
        let add = series("1 + (x+y)*t", &xy, 1, 6);
        let mul = series("1 + (x+y+x*y)*t", &xy, 1, 6);
        assert!(!verify_morphism(&id, &add, &mul).unwrap().is_zero());
    }

    #[test]
    fn multisets_are_decreasing() {
        let ms = multisets(3, 2);
        assert_eq!(ms.len(), 10);
        assert!(ms.iter().all(|m| m.windows(2).all(|w| w[0] >= w[1])));
    }
}
