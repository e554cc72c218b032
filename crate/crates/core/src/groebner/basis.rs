use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::polyring::{Coeff, CoefficientRing, Monomial, MonomialOrder, Polynomial, Term};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

/// Terms sorted decreasingly for some monomial order.
pub(crate) type Terms = Vec<Term>;

pub(crate) fn sorted_terms(p: &Polynomial, order: &MonomialOrder) -> Terms {
    let mut t = p.terms().to_vec();
    if !order.is_default() {
        t.sort_by(|a, b| order.cmp(&b.mon, &a.mon));
    }
    t
}

pub(crate) fn to_poly(ring: CoefficientRing, t: &[Term]) -> Polynomial {
    Polynomial::from_terms(ring, t.iter().map(|x| (x.mon.clone(), x.coeff.clone())))
}

/// `f + c*m*g`, both inputs sorted for `order`.
fn axpy(ring: &CoefficientRing, order: &MonomialOrder, f: &[Term], c: &Coeff, m: &Monomial, g: &[Term]) -> Terms {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let next_g = |j: usize| Term { mon: g[j].mon.mul(m), coeff: ring.mul(&g[j].coeff, c) };
    let mut pending = if g.is_empty() { None } else { Some(next_g(0)) };
    while i < f.len() {
        let Some(gt) = pending.take() else { break };
        match order.cmp(&f[i].mon, &gt.mon) {
            Ordering::Greater => {
                out.push(f[i].clone());
                i += 1;
                pending = Some(gt);
            }
            Ordering::Less => {
                if !gt.coeff.is_zero() {
                    out.push(gt);
                }
                j += 1;
                pending = if j < g.len() { Some(next_g(j)) } else { None };
            }
            Ordering::Equal => {
                let s = ring.add(&f[i].coeff, &gt.coeff);
                if !s.is_zero() {
                    out.push(Term { mon: gt.mon, coeff: s });
                }
                i += 1;
                j += 1;
                pending = if j < g.len() { Some(next_g(j)) } else { None };
            }
        }
    }
    out.extend(f[i..].iter().cloned());
    if let Some(gt) = pending {
        if !gt.coeff.is_zero() {
            out.push(gt);
        }
        j += 1;
        while j < g.len() {
            let t = next_g(j);
            if !t.coeff.is_zero() {
                out.push(t);
            }
            j += 1;
        }
    }
    out
}

fn scale(ring: &CoefficientRing, f: &[Term], c: &Coeff, m: &Monomial) -> Terms {
    f.iter().map(|t| Term { mon: t.mon.mul(m), coeff: ring.mul(&t.coeff, c) }).filter(|t| !t.coeff.is_zero()).collect()
}

/// The coefficient domain of a basis: a `CoefficientRing`, or ℤ with 2
/// made invertible. In the latter, polynomials stand for the ideal elements
/// they generate, so factors 2 can be dropped or introduced freely.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Domain {
    pub ring: CoefficientRing,
    pub two_inverted: bool,
}

impl Domain {
    pub fn plain(ring: CoefficientRing) -> Self {
        Domain { ring, two_inverted: false }
    }

    fn z_half(&self) -> bool {
        self.two_inverted && self.ring == CoefficientRing::Integers
    }

    /// The part of an integer that is not a unit.
    fn core(&self, c: &Coeff) -> Int {
        if self.z_half() {
            c.numerator().odd_part()
        } else {
            c.numerator().clone()
        }
    }
}

/// Positive leading coefficient over ℤ (no common factor 2 when 2 is a
/// unit), monic over fields.
fn normalize(dom: Domain, f: Terms) -> Terms {
    let ring = &dom.ring;
    let Some(lead) = f.first() else { return f };
    match ring {
        CoefficientRing::Integers => {
            let mut f = f;
            if dom.z_half() {
                let k = f.iter().map(|t| t.coeff.numerator().two_adic_valuation()).min().unwrap_or(0);
                if k > 0 {
                    let d = Int::pow2(k);
                    for t in f.iter_mut() {
                        t.coeff = Coeff::int(t.coeff.numerator().div_exact(&d));
                    }
                }
            }
            if f[0].coeff.is_negative() {
                let m1 = ring.from_i64(-1);
                scale(ring, &f, &m1, &Monomial::one())
            } else {
                f
            }
        }
        _ => match ring.inverse(&lead.coeff) {
            Some(inv) if !lead.coeff.is_one() => scale(ring, &f, &inv, &Monomial::one()),
            _ => f,
        },
    }
}

/// Whether the leading term `(m, c)` of `g` divides the term `(mon, coeff)`.
fn term_divides(dom: Domain, g: &Term, t: &Term) -> bool {
    if !(g.mon.degree() <= t.mon.degree() && g.mon.divides(&t.mon)) {
        return false;
    }
    if dom.z_half() {
        t.coeff.numerator().is_divisible_by(&dom.core(&g.coeff))
    } else {
        dom.ring.divides(&g.coeff, &t.coeff)
    }
}

/// Full reduction of `p` by `basis` (any list, leading terms taken for
/// `order`). A term is reducible when some leading monomial divides it and,
/// over ℤ, the leading coefficient divides its coefficient.
pub(crate) fn normal_form(dom: Domain, order: &MonomialOrder, mut p: Terms, basis: &[&[Term]]) -> Terms {
    let ring = &dom.ring;
    let integral = *ring == CoefficientRing::Integers;
    let mut rem: Terms = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let t = &p[start];
        let reducer = basis.iter().find(|g| !g.is_empty() && term_divides(dom, &g[0], t));
        if let Some(g) = reducer {
            let m = t.mon.div(&g[0].mon).expect("divisible");
            let (b, c) = (g[0].coeff.numerator(), t.coeff.numerator());
            let k = if dom.z_half() { b.two_adic_valuation().saturating_sub(c.two_adic_valuation()) } else { 0 };
            if k > 0 {
                // multiply by the unit 2^k so the division is exact
                let u = Coeff::int(Int::pow2(k));
                rem = scale(ring, &rem, &u, &Monomial::one());
                p = scale(ring, &p[start..], &u, &Monomial::one());
                start = 0;
            }
            let t = &p[start];
            let q = ring.neg(&ring.div_exact(&t.coeff, &g[0].coeff));
            p = axpy(ring, order, &p[start..], &q, &m, g);
            start = 0;
            continue;
        }
        if integral {
            // over ℤ a leading term with a smaller coefficient still shrinks this one
            let c = t.coeff.numerator();
            let shrink = basis.iter().find(|g| {
                !g.is_empty()
                    && g[0].mon.divides(&t.mon)
                    && !(dom.z_half() && g[0].coeff.numerator().two_adic_valuation() > 0)
                    && c.abs() > g[0].coeff.numerator().abs().div_mod_floor(&Int::from(2)).0
            });
            if let Some(g) = shrink {
                let b = g[0].coeff.numerator();
                let q = c.div_round(b);
                if !q.is_zero() {
                    let m = t.mon.div(&g[0].mon).expect("divisible");
                    p = axpy(ring, order, &p[start..], &Coeff::int(-q), &m, g);
                    start = 0;
                    continue;
                }
            }
        }
        rem.push(p[start].clone());
        start += 1;
    }
    rem
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PairKind {
    S,
    G,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    kind: PairKind,
    lcm: (Monomial, Int),
}

/// Working set and pending pairs of one completion, smallest lcm first.
#[derive(Default)]
struct PairState {
    work: Vec<Terms>,
    dead: Vec<bool>,
    pairs: BTreeMap<(u32, u64), Pair>,
    seq: u64,
}

impl PairState {
    fn push(&mut self, p: Pair) {
        let key = (p.lcm.0.degree(), self.seq);
        self.seq += 1;
        self.pairs.insert(key, p);
    }

    fn reducers(&self) -> Vec<&[Term]> {
        self.work.iter().zip(&self.dead).filter(|(_, d)| !**d).map(|(p, _)| p.as_slice()).collect()
    }
}

/// A Gröbner basis under construction: over ℚ and ℤ/p an ordinary reduced
/// basis, over ℤ a strong basis closed under S- and G-polynomials.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: CoefficientRing,
    order: MonomialOrder,
    polys: Vec<Terms>,
    steps: u64,
    budget: u64,
    two_inverted: bool,
}

impl GroebnerBasis {
    pub fn new(ring: CoefficientRing, order: MonomialOrder) -> Result<Self> {
        if let CoefficientRing::IntegersMod(n) = ring {
            if !ring.is_field() {
                return Err(Error::InvalidArgument(format!("Gröbner bases over ℤ/{n} need a prime modulus")));
            }
        }
        Ok(GroebnerBasis { ring, order, polys: Vec::new(), steps: 0, budget: DEFAULT_STEP_BUDGET, two_inverted: false })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Treat 2 as a unit (only changes anything over ℤ): the basis then
    /// describes an ideal of the coefficient ring with 1/2 adjoined.
    pub fn with_two_inverted(mut self, yes: bool) -> Self {
        self.two_inverted = yes;
        self
    }

    pub fn two_inverted(&self) -> bool {
        self.two_inverted && self.ring == CoefficientRing::Integers
    }

    fn dom(&self) -> Domain {
        Domain { ring: self.ring, two_inverted: self.two_inverted }
    }

    /// Continue counting from an earlier computation.
    pub fn with_steps(mut self, steps: u64) -> Self {
        self.steps = steps;
        self
    }

    pub fn set_budget(&mut self, budget: u64) {
        self.budget = budget;
    }

    pub fn from_generators(ring: CoefficientRing, order: MonomialOrder, gens: &[Polynomial]) -> Result<Self> {
        let mut gb = GroebnerBasis::new(ring, order)?;
        gb.extend(gens)?;
        Ok(gb)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Pair reductions performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn generators(&self) -> Vec<Polynomial> {
        self.polys.iter().map(|p| to_poly(self.ring, p)).collect()
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| {
            p.len() == 1
                && p[0].mon.is_one()
                && (self.ring.inverse(&p[0].coeff).is_some() || self.dom().core(&p[0].coeff).abs().is_one())
        })
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let refs: Vec<&[Term]> = self.polys.iter().map(|p| p.as_slice()).collect();
        let nf = normal_form(self.dom(), &self.order, sorted_terms(p, &self.order), &refs);
        to_poly(self.ring, &nf)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn add(&mut self, p: &Polynomial) -> Result<()> {
        self.extend(std::slice::from_ref(p))
    }

    /// Adjoin generators and complete. On budget exhaustion the basis still
    /// generates the enlarged ideal but is not a Gröbner basis.
    pub fn extend(&mut self, gens: &[Polynomial]) -> Result<()> {
        let ring = self.ring;
        let mut st = PairState { work: self.polys.clone(), dead: vec![false; self.polys.len()], ..Default::default() };
        let mut changed = false;
        for g in gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch(g.ring().to_string(), ring.to_string()));
            }
            let r = normal_form(self.dom(), &self.order, sorted_terms(g, &self.order), &st.reducers());
            if !r.is_empty() {
                self.insert(&mut st, normalize(self.dom(), r));
                changed = true;
            }
        }
        let mut outcome = Ok(());
        while let Some((_, pair)) = st.pairs.pop_first() {
            if self.steps >= self.budget {
                outcome = Err(Error::BudgetExhausted(self.budget));
                break;
            }
            self.steps += 1;
            let Some(s) = self.pair_poly(&st.work[pair.i], &st.work[pair.j], pair.kind) else { continue };
            let r = normal_form(self.dom(), &self.order, s, &st.reducers());
            if !r.is_empty() {
                self.insert(&mut st, normalize(self.dom(), r));
            }
        }
        if changed {
            self.polys = self.interreduce(st.work);
        }
        outcome
    }

    /// Leading term with the unit part of the coefficient dropped.
    fn lead(&self, p: &[Term]) -> (Monomial, Int) {
        let c = if self.ring.is_field() { Int::ONE } else { self.dom().core(&p[0].coeff).abs() };
        (p[0].mon.clone(), c)
    }

    /// Add `h` to the working set and update the pair queue (Gebauer and
    /// Möller's criteria, with terms carrying their coefficient over ℤ).
    fn insert(&self, st: &mut PairState, h: Terms) {
        let k = st.work.len();
        let th = self.lead(&h);
        let divides = |a: &(Monomial, Int), b: &(Monomial, Int)| a.0.divides(&b.0) && b.1.is_divisible_by(&a.1);
        let lcm = |a: &(Monomial, Int), b: &(Monomial, Int)| (a.0.lcm(&b.0), a.1.lcm(&b.1));
        let leads: Vec<(Monomial, Int)> = st.work.iter().map(|p| self.lead(p)).collect();

        // old pairs whose lcm the new lead divides, unless it is a corner
        let stale: Vec<(u32, u64)> = st
            .pairs
            .iter()
            .filter(|(_, p)| p.kind == PairKind::S)
            .filter(|(_, p)| divides(&th, &p.lcm) && lcm(&leads[p.i], &th) != p.lcm && lcm(&leads[p.j], &th) != p.lcm)
            .map(|(key, _)| *key)
            .collect();
        for key in stale {
            st.pairs.remove(&key);
        }

        let alive: Vec<usize> = (0..k).filter(|&i| !st.dead[i]).collect();
        let cands: Vec<(usize, (Monomial, Int))> = alive.iter().map(|&i| (i, lcm(&leads[i], &th))).collect();
        let coprime = |i: usize| leads[i].0.is_coprime(&th.0) && leads[i].1.gcd(&th.1).is_one();
        let mut kept: Vec<(usize, (Monomial, Int))> = Vec::new();
        for (idx, (i, l)) in cands.iter().enumerate() {
            // a strictly smaller lcm among the new pairs makes this one redundant
            if cands.iter().any(|(_, m)| m != l && divides(m, l)) {
                continue;
            }
            // one pair per lcm; none if any pair with that lcm is coprime
            let same: Vec<usize> = cands.iter().filter(|(_, m)| m == l).map(|(j, _)| *j).collect();
            if same.iter().any(|&j| coprime(j)) {
                continue;
            }
            if cands[..idx].iter().any(|(_, m)| m == l) {
                continue;
            }
            kept.push((*i, l.clone()));
        }
        for (i, l) in kept {
            st.push(Pair { i, j: k, kind: PairKind::S, lcm: l });
        }
        if self.ring == CoefficientRing::Integers {
            for &i in &alive {
                let (a, b) = (&leads[i].1, &th.1);
                if !a.is_divisible_by(b) && !b.is_divisible_by(a) {
                    let l = lcm(&leads[i], &th);
                    st.push(Pair { i, j: k, kind: PairKind::G, lcm: l });
                }
            }
        }
        // elements whose leading term the new one divides are no longer needed
        for &i in &alive {
            if divides(&th, &leads[i]) {
                st.dead[i] = true;
            }
        }
        st.work.push(h);
        st.dead.push(false);
    }

    fn pair_poly(&self, f: &[Term], g: &[Term], kind: PairKind) -> Option<Terms> {
        let ring = &self.ring;
        let (lf, lg) = (&f[0], &g[0]);
        let l = lf.mon.lcm(&lg.mon);
        let mf = l.div(&lf.mon).expect("lcm");
        let mg = l.div(&lg.mon).expect("lcm");
        match (kind, ring) {
            (PairKind::S, CoefficientRing::Integers) => {
                // with 2 a unit, a = 2^s·a', b = 2^t·b' and only a', b' matter
                let (a, b) = (lf.coeff.numerator(), lg.coeff.numerator());
                let (a1, b1) = (self.dom().core(&lf.coeff), self.dom().core(&lg.coeff));
                let (sa, sb) = (
                    Int::pow2(a.two_adic_valuation() - a1.two_adic_valuation()),
                    Int::pow2(b.two_adic_valuation() - b1.two_adic_valuation()),
                );
                let c = &a1.lcm(&b1) * &(&sa * &sb);
                let ca = Coeff::int(c.div_exact(a));
                let cb = Coeff::int(-c.div_exact(b));
                let left = scale(ring, &f[1..], &ca, &mf);
                Some(axpy(ring, &self.order, &left, &cb, &mg, &g[1..]))
            }
            (PairKind::S, _) => {
                let cb = ring.neg(&ring.div_exact(&lf.coeff, &lg.coeff));
                Some(axpy(ring, &self.order, &scale(ring, &f[1..], &ring.one(), &mf), &cb, &mg, &g[1..]))
            }
            (PairKind::G, _) => {
                let (a, b) = (lf.coeff.numerator(), lg.coeff.numerator());
                let (a1, b1) = (self.dom().core(&lf.coeff), self.dom().core(&lg.coeff));
                let (_, s, t): (Int, Int, Int) = a1.ext_gcd(&b1);
                // s·a' + t·b' = g, scaled so both sides carry the same power of 2
                let (ka, kb) = (
                    a.two_adic_valuation() - a1.two_adic_valuation(),
                    b.two_adic_valuation() - b1.two_adic_valuation(),
                );
                let s = &s * &Int::pow2(kb);
                let t = &t * &Int::pow2(ka);
                let left = scale(ring, f, &Coeff::int(s), &mf);
                Some(axpy(ring, &self.order, &left, &Coeff::int(t), &mg, g))
            }
        }
    }

    /// Reduce every element by the others until nothing changes. This keeps
    /// the ideal; applied to a Gröbner basis it yields the reduced basis.
    fn interreduce(&self, work: Vec<Terms>) -> Vec<Terms> {
        let mut polys: Vec<Terms> = work.into_iter().filter(|p| !p.is_empty()).collect();
        // Small leading terms first so they act as reducers early.
        polys.sort_by(|a, b| self.order.cmp(&a[0].mon, &b[0].mon));
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < polys.len() {
                let refs: Vec<&[Term]> =
                    polys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.as_slice()).collect();
                let r = normal_form(self.dom(), &self.order, polys[i].clone(), &refs);
                if r.is_empty() {
                    polys.remove(i);
                    changed = true;
                    continue;
                }
                let r = normalize(self.dom(), r);
                if r != polys[i] {
                    polys[i] = r;
                    changed = true;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        polys.sort_by(|a, b| self.order.cmp(&a[0].mon, &b[0].mon));
        polys
    }

    /// Every S-pair (and over ℤ every G-pair) reduces to zero.
    pub fn satisfies_criterion(&self) -> bool {
        let refs: Vec<&[Term]> = self.polys.iter().map(|p| p.as_slice()).collect();
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let mut kinds = vec![PairKind::S];
                if self.ring == CoefficientRing::Integers {
                    kinds.push(PairKind::G);
                }
                for k in kinds {
                    if let Some(s) = self.pair_poly(&self.polys[i], &self.polys[j], k) {
                        if !normal_form(self.dom(), &self.order, s, &refs).is_empty() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Normal form of `p` with respect to an arbitrary list of polynomials.
pub fn reduce(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let ring = p.ring();
    let sorted: Vec<Terms> = basis.iter().filter(|b| !b.is_zero()).map(|b| sorted_terms(b, order)).collect();
    let refs: Vec<&[Term]> = sorted.iter().map(|p| p.as_slice()).collect();
    to_poly(ring, &normal_form(Domain::plain(ring), order, sorted_terms(p, order), &refs))
}

/// Inter-reduced Gröbner basis of the generators (strong over ℤ).
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder, ring: CoefficientRing) -> Result<Vec<Polynomial>> {
    Ok(GroebnerBasis::from_generators(ring, order.clone(), gens)?.generators())
}

pub fn ideal_equal(a: &[Polynomial], b: &[Polynomial], order: &MonomialOrder, ring: CoefficientRing) -> Result<bool> {
    let ga = GroebnerBasis::from_generators(ring, order.clone(), a)?;
    if !b.iter().all(|p| ga.contains(p)) {
        return Ok(false);
    }
    let gb = GroebnerBasis::from_generators(ring, order.clone(), b)?;
    Ok(a.iter().all(|p| gb.contains(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> Polynomial {
        Polynomial::parse(CoefficientRing::Integers, s).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let ord = MonomialOrder::degrevlex();
        assert_eq!(reduce(&z("e^2 - 1 + x"), &[z("e^2 - 1")], &ord), z("x"));
        assert_eq!(reduce(&z("g^3"), &[z("(g+2)*(g-2)^2")], &ord), z("2*g^2 + 4*g - 8"));
    }

    #[test]
    fn g_polynomial_and_unit_ideal() {
        let ord = MonomialOrder::degrevlex();
        let zz = CoefficientRing::Integers;
        assert_eq!(buchberger(&[z("2*x"), z("3*x")], &ord, zz).unwrap(), vec![z("x")]);
        assert_eq!(buchberger(&[z("x - 1"), z("x")], &ord, zz).unwrap(), vec![z("1")]);
        let gb = GroebnerBasis::from_generators(zz, ord, &[z("2*x"), z("3*y")]).unwrap();
        assert!(gb.contains(&z("x*y")));
        assert!(!gb.contains(&z("x")));
        assert!(gb.satisfies_criterion());
    }

    #[test]
    fn ideal_comparisons() {
        let ord = MonomialOrder::degrevlex();
        let zz = CoefficientRing::Integers;
        assert!(!ideal_equal(&[z("x")], &[z("x^2")], &ord, zz).unwrap());
        assert!(ideal_equal(&[z("x"), z("y")], &[z("x + y"), z("x - y"), z("y")], &ord, zz).unwrap());
        let a = [z("a3_111^2 + 768*e - 832"), z("(a3_111 - 40)*(e - 1)"), z("e^2 - 1"), z("2*alpha - 1")];
        let b = [z("(a3_111 - 40)*(1 - e)"), z("(a3_111 - 8)*(a3_111 + 8)*(1 + e)"), z("e^2 - 1"), z("2*alpha - 1")];
        assert!(ideal_equal(&a, &b, &ord, zz).unwrap());
    }

    #[test]
    fn field_bases_are_reduced() {
        let q = CoefficientRing::Rationals;
        let ord = MonomialOrder::degrevlex();
        let p = |s: &str| Polynomial::parse(q, s).unwrap();
        let gb = buchberger(&[p("x^2 - y"), p("x*y - 1")], &ord, q).unwrap();
        let again = buchberger(&[p("x*y - 1"), p("x^2 - y"), p("x^3 - x*y")], &ord, q).unwrap();
        assert_eq!(gb, again);
        assert!(buchberger(&[p("x")], &ord, CoefficientRing::IntegersMod(6)).is_err());
    }
}
