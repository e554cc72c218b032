use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::{FxHashMap, FxHashSet};

use super::coeff::{Coeff, CoefficientRing};
use super::monomial::Monomial;
use super::var::Var;
use crate::error::{Error, Result};
use crate::int::Int;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub mon: Monomial,
    pub coeff: Coeff,
}

/// Result of [`Polynomial::grade_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// Linear weight on monomials together with an inclusive cap; terms of
/// larger weight are dropped. Weights must be nonnegative for truncation to
/// commute with multiplication.
#[derive(Clone, Debug, Default)]
pub struct Truncation {
    weights: FxHashMap<Var, i64>,
    pub cap: i64,
}

impl Truncation {
    pub fn new(cap: i64) -> Self {
        Truncation { weights: FxHashMap::default(), cap }
    }

    /// Total degree in the given variables, capped.
    pub fn total_degree(vars: &[Var], cap: i64) -> Self {
        let mut t = Truncation::new(cap);
        for &v in vars {
            t.weights.insert(v, 1);
        }
        t
    }

    pub fn with_weight(mut self, v: Var, w: i64) -> Self {
        self.weights.insert(v, w);
        self
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        m.pairs().iter().map(|&(v, e)| self.weights.get(&v).copied().unwrap_or(0) * e as i64).sum()
    }

    #[inline]
    pub fn keeps(&self, m: &Monomial) -> bool {
        self.weight(m) <= self.cap
    }
}

/// A sparse polynomial. Terms are kept sorted in decreasing default order
/// (degrevlex over the natural variable priority) with no zero coefficients,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: CoefficientRing,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(ring: CoefficientRing) -> Self {
        Polynomial { ring, terms: Vec::new() }
    }

    pub fn one(ring: CoefficientRing) -> Self {
        Polynomial::constant(ring, ring.one())
    }

    pub fn constant(ring: CoefficientRing, c: Coeff) -> Self {
        Polynomial::monomial(ring, Monomial::one(), c)
    }

    pub fn from_i64(ring: CoefficientRing, c: i64) -> Self {
        Polynomial::constant(ring, ring.from_i64(c))
    }

    pub fn var(ring: CoefficientRing, v: Var) -> Self {
        Polynomial::monomial(ring, Monomial::var(v), ring.one())
    }

    pub fn monomial(ring: CoefficientRing, mon: Monomial, c: Coeff) -> Self {
        if c.is_zero() {
            return Polynomial::zero(ring);
        }
        Polynomial { ring, terms: vec![Term { mon, coeff: c }] }
    }

    /// Build from arbitrary terms: duplicates are combined, zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(ring: CoefficientRing, it: I) -> Self {
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        for (m, c) in it {
            accumulate(&ring, &mut acc, m, &c);
        }
        Polynomial::from_map(ring, acc)
    }

    fn from_map(ring: CoefficientRing, acc: FxHashMap<Monomial, Coeff>) -> Self {
        let mut terms: Vec<Term> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(mon, coeff)| Term { mon, coeff }).collect();
        terms.sort_unstable_by(|a, b| b.mon.cmp(&a.mon));
        Polynomial { ring, terms }
    }

    /// Terms already sorted decreasingly and combined; only zeros are removed.
    pub(crate) fn from_sorted_terms(ring: CoefficientRing, mut terms: Vec<Term>) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        debug_assert!(terms.windows(2).all(|w| w[0].mon > w[1].mon));
        Polynomial { ring, terms }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mon.is_one() && self.terms[0].coeff.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mon.is_one())
    }

    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some(t) if t.mon.is_one() => t.coeff.clone(),
            _ => Coeff::ZERO,
        }
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        match self.terms.binary_search_by(|t| m.cmp(&t.mon)) {
            Ok(i) => self.terms[i].coeff.clone(),
            Err(_) => Coeff::ZERO,
        }
    }

    /// Leading term under the default order.
    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mon.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.mon.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|t| t.mon.vars()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|t| t.mon.exponent(v) > 0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_impl(other, None))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let r = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        let take_b =
            |t: &Term| Term { mon: t.mon.clone(), coeff: if negate { r.neg(&t.coeff) } else { t.coeff.clone() } };
        while i < a.len() && j < b.len() {
            match a[i].mon.cmp(&b[j].mon) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(take_b(&b[j]));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { r.sub(&a[i].coeff, &b[j].coeff) } else { r.add(&a[i].coeff, &b[j].coeff) };
                    if !c.is_zero() {
                        out.push(Term { mon: a[i].mon.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(take_b));
        Polynomial { ring: self.ring, terms: out }
    }

    fn mul_impl(&self, other: &Polynomial, trunc: Option<(&Truncation, i64)>) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.ring);
        }
        let r = &self.ring;
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 && trunc.is_none() {
            return big.mul_term(&small.terms[0].mon, &small.terms[0].coeff);
        }
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        acc.reserve(self.terms.len() * other.terms.len() / 2 + 1);
        // Precompute weights so truncation costs one add per product.
        let (wa, wb): (Vec<i64>, Vec<i64>) = match trunc {
            Some((t, _)) => (
                small.terms.iter().map(|x| t.weight(&x.mon)).collect(),
                big.terms.iter().map(|x| t.weight(&x.mon)).collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        for (ia, ta) in small.terms.iter().enumerate() {
            for (ib, tb) in big.terms.iter().enumerate() {
                if let Some((_, cap)) = trunc {
                    if wa[ia] + wb[ib] > cap {
                        continue;
                    }
                }
                let m = ta.mon.mul(&tb.mon);
                let c = r.mul(&ta.coeff, &tb.coeff);
                accumulate(r, &mut acc, m, &c);
            }
        }
        Polynomial::from_map(self.ring, acc)
    }

    /// Product with terms of weight above the cap discarded.
    pub fn mul_truncated(&self, other: &Polynomial, trunc: &Truncation) -> Polynomial {
        assert_eq!(self.ring, other.ring, "coefficient ring mismatch");
        self.mul_impl(other, Some((trunc, trunc.cap)))
    }

    /// Truncated product with an explicit cap replacing `trunc.cap`.
    pub fn mul_truncated_cap(&self, other: &Polynomial, trunc: &Truncation, cap: i64) -> Polynomial {
        assert_eq!(self.ring, other.ring, "coefficient ring mismatch");
        self.mul_impl(other, Some((trunc, cap)))
    }

    pub fn truncate(&self, trunc: &Truncation) -> Polynomial {
        Polynomial { ring: self.ring, terms: self.terms.iter().filter(|t| trunc.keeps(&t.mon)).cloned().collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring);
        }
        let r = &self.ring;
        let terms = self.terms.iter().map(|t| Term { mon: t.mon.mul(m), coeff: r.mul(&t.coeff, c) }).collect();
        // multiplying by a monomial preserves the order; over ℤ/n zero
        // divisors may appear
        Polynomial::from_sorted_terms(self.ring, terms)
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn scale_i64(&self, c: i64) -> Polynomial {
        self.scale(&self.ring.from_i64(c))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_truncated(&self, e: u32, trunc: &Truncation) -> Polynomial {
        let mut acc = Polynomial::one(self.ring).truncate(trunc);
        for _ in 0..e {
            acc = acc.mul_truncated(self, trunc);
        }
        acc
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_coeff_exact(&self, c: &Coeff) -> Result<Polynomial> {
        let r = &self.ring;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if !r.divides(c, &t.coeff) {
                return Err(Error::NotInRing(format!("({})/{}", t.coeff, c)));
            }
            terms.push(Term { mon: t.mon.clone(), coeff: r.div_exact(&t.coeff, c) });
        }
        Ok(Polynomial::from_sorted_terms(self.ring, terms))
    }

    /// Integer gcd of the numerators (integral coefficients only).
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for t in &self.terms {
            g = g.gcd(t.coeff.numerator());
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the content and make the leading coefficient positive.
    /// Over fields the polynomial is made monic instead.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        match self.ring {
            CoefficientRing::Integers => {
                let mut g = self.content();
                if self.terms[0].coeff.is_negative() {
                    g = -g;
                }
                self.div_coeff_exact(&Coeff::int(g)).expect("content divides")
            }
            _ => {
                let lc = self.terms[0].coeff.clone();
                match self.ring.inverse(&lc) {
                    Some(inv) => self.scale(&inv),
                    None => self.clone(),
                }
            }
        }
    }

    /// Replace ε^k by ε^(k mod 2), i.e. reduce modulo ε² − 1.
    pub fn reduce_epsilon(&self) -> Polynomial {
        let e = Var::epsilon();
        if self.terms.iter().all(|t| t.mon.exponent(e) <= 1) {
            return self.clone();
        }
        Polynomial::from_terms(
            self.ring,
            self.terms.iter().map(|t| {
                let (rest, k) = t.mon.without(e);
                (rest.mul(&Monomial::var_pow(e, k % 2)), t.coeff.clone())
            }),
        )
    }

    pub fn grade_of(&self) -> Grading {
        let mut grade = None;
        for t in &self.terms {
            let g = t.mon.grade();
            match grade {
                None => grade = Some(g),
                Some(h) if h != g => return Grading::Inhomogeneous,
                _ => {}
            }
        }
        match grade {
            None => Grading::Zero,
            Some(g) => Grading::Homogeneous(g),
        }
    }

    /// Substitute polynomials for variables. Unmapped variables are kept.
    pub fn substitute(&self, map: &FxHashMap<Var, Polynomial>) -> Polynomial {
        self.substitute_impl(map, None)
    }

    pub fn substitute_truncated(&self, map: &FxHashMap<Var, Polynomial>, trunc: &Truncation) -> Polynomial {
        self.substitute_impl(map, Some(trunc))
    }

    fn substitute_impl(&self, map: &FxHashMap<Var, Polynomial>, trunc: Option<&Truncation>) -> Polynomial {
        if map.is_empty() || !self.terms.iter().any(|t| t.mon.vars().any(|v| map.contains_key(&v))) {
            return match trunc {
                Some(t) => self.truncate(t),
                None => self.clone(),
            };
        }
        let r = self.ring;
        let mut powers: FxHashMap<(Var, u32), Polynomial> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        for t in &self.terms {
            let (sub, keep) = t.mon.split(|v| map.contains_key(&v));
            let mut val = Polynomial::monomial(r, keep, t.coeff.clone());
            for &(v, e) in sub.pairs() {
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| match trunc {
                        Some(tr) => map[&v].pow_truncated(e, tr),
                        None => map[&v].pow(e),
                    })
                    .clone();
                val = match trunc {
                    Some(tr) => val.mul_truncated(&p, tr),
                    None => &val * &p,
                };
                if val.is_zero() {
                    break;
                }
            }
            for term in val.terms {
                if trunc.is_none_or(|tr| tr.keeps(&term.mon)) {
                    accumulate(&r, &mut acc, term.mon, &term.coeff);
                }
            }
        }
        Polynomial::from_map(r, acc)
    }

    /// Substitute integer constants for variables.
    pub fn specialize(&self, values: &[(Var, i64)]) -> Polynomial {
        let map = values.iter().map(|&(v, c)| (v, Polynomial::from_i64(self.ring, c))).collect();
        self.substitute(&map)
    }

    /// Rename variables through `f`.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(self.ring, self.terms.iter().map(|t| (t.mon.rename(&f), t.coeff.clone())))
    }

    /// Group terms by their part in the selected variables. The values are
    /// the coefficient polynomials in the remaining variables.
    pub fn collect(&self, pred: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut groups: BTreeMap<Monomial, Vec<Term>> = BTreeMap::new();
        for t in &self.terms {
            let (sel, rest) = t.mon.split(&pred);
            groups.entry(sel).or_default().push(Term { mon: rest, coeff: t.coeff.clone() });
        }
        groups
            .into_iter()
            .map(|(m, ts)| {
                // a subsequence of a sorted list stays sorted after dividing
                // out the same selected part
                (m, Polynomial::from_sorted_terms(self.ring, ts))
            })
            .collect()
    }

    /// Coefficient of `v^k` as a polynomial in the other variables.
    pub fn coefficient_of(&self, v: Var, k: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.mon.exponent(v) == k)
            .map(|t| Term { mon: t.mon.without(v).0, coeff: t.coeff.clone() })
            .collect();
        Polynomial::from_sorted_terms(self.ring, terms)
    }

    /// Keep only the terms whose monomial satisfies `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial { ring: self.ring, terms: self.terms.iter().filter(|t| pred(&t.mon)).cloned().collect() }
    }

    /// Reinterpret the coefficients in another ring (ℤ → ℚ, ℤ → ℤ/n, ...).
    pub fn change_ring(&self, ring: CoefficientRing) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = ring.from_fraction(t.coeff.numerator().clone(), t.coeff.denominator().clone())?;
            terms.push(Term { mon: t.mon.clone(), coeff: c });
        }
        Ok(Polynomial::from_sorted_terms(ring, terms))
    }

    pub fn variables_set(&self) -> FxHashSet<Var> {
        self.terms.iter().flat_map(|t| t.mon.vars()).collect()
    }
}

#[inline]
pub(crate) fn accumulate(r: &CoefficientRing, acc: &mut FxHashMap<Monomial, Coeff>, m: Monomial, c: &Coeff) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            let s = r.add(e.get(), c);
            *e.get_mut() = s;
        }
        Entry::Vacant(e) => {
            e.insert(c.clone());
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("coefficient ring mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("coefficient ring mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("coefficient ring mismatch")
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let r = &self.ring;
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|t| Term { mon: t.mon.clone(), coeff: r.neg(&t.coeff) }).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
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

    #[test]
    fn sums_and_products() {
        assert_eq!(&p("x+y") + &p("x-y"), p("2*x"));
        let r2 = CoefficientRing::integers_mod(2).unwrap();
        let q = Polynomial::parse(r2, "x+1").unwrap();
        assert!((&q + &q).is_zero());
        assert_eq!(p("(g+2)*(g-2)^2"), p("g^3-2*g^2-4*g+8"));
    }

    #[test]
    fn neutral_product_matches_table() {
        let f = p("(1+x*t)^2*(1-e*x*t)^2");
        assert_eq!(f, p("1 + (2-2*e)*x*t + (1-4*e+e^2)*x^2*t^2 + (2*e^2-2*e)*x^3*t^3 + e^2*x^4*t^4"));
        let r = f.reduce_epsilon();
        assert_eq!(r, p("1 + (2-2*e)*x*t + (2-4*e)*x^2*t^2 + (2-2*e)*x^3*t^3 + x^4*t^4"));
    }

    #[test]
    fn epsilon_reduction() {
        assert_eq!(p("e^2").reduce_epsilon(), p("1"));
        assert_eq!(p("e^3+e").reduce_epsilon(), p("2*e"));
        assert!(p("(1-e)*(1+e)").reduce_epsilon().is_zero());
    }

    #[test]
    fn grades() {
        assert_eq!(p("a3_111^2+768*e-832").grade_of(), Grading::Homogeneous(0));
        assert_eq!(p("a4_400-1").grade_of(), Grading::Homogeneous(0));
        assert_eq!(p("a1_100+a1_200").grade_of(), Grading::Inhomogeneous);
        assert_eq!(p("0").grade_of(), Grading::Zero);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let q = Polynomial::parse(CoefficientRing::Rationals, "x").unwrap();
        assert!(matches!(p("x").try_add(&q), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn substitution_and_truncation() {
        let mut map = FxHashMap::default();
        map.insert(Var::x(), p("y+z"));
        assert_eq!(p("x^2+x").substitute(&map), p("y^2+2*y*z+z^2+y+z"));
        let tr = Truncation::total_degree(&[Var::y(), Var::z()], 1);
        assert_eq!(p("x^2+x").substitute_truncated(&map, &tr), p("y+z"));
        assert_eq!(p("(1+x)^5").truncate(&Truncation::total_degree(&[Var::x()], 2)), p("1+5*x+10*x^2"));
    }

    #[test]
    fn collect_splits_by_selected_vars() {
        let f = p("2*x*t + e*x*t + 3*t^2");
        let c = f.collect(|v| v == Var::t());
        assert_eq!(c[&Monomial::var(Var::t())], p("2*x+e*x"));
        assert_eq!(c[&Monomial::var_pow(Var::t(), 2)], p("3"));
    }
}
