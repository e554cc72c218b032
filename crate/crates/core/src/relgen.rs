//! Relations among the coefficients of the universal (4,3)-group (formal
//! ternary law) or (2,2)-group in a window of coefficient degrees.
//!
//! The law is written in orbit-compressed coefficients `al_ijk` (`bl_ij`)
//! times monomial symmetric polynomials, so symmetry holds by construction.
//! Relations come in axiom order: context, neutral element, ε-linearity,
//! weak neutral element, then associativity one monomial at a time.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use log::debug;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::groebner::{self, IncrementalOptions, RelationSource, RunResult};
use crate::mvseries::{self, ElementaryEvaluator, MSeries};
use crate::polyring::{Coeff, CoefficientRing, Grading, Monomial, Polynomial, Truncation, Var};
use crate::symfun::{self, OrbitIndex};

const ZZ: CoefficientRing = CoefficientRing::Integers;

/// Which universal law: the (4,3)-group of formal ternary laws or the
/// (2,2)-group of 2-valued formal group laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arity {
    Ftl,
    TwoFgl,
}

impl Arity {
    pub fn n(self) -> usize {
        match self {
            Arity::Ftl => 4,
            Arity::TwoFgl => 2,
        }
    }

    pub fn d(self) -> usize {
        match self {
            Arity::Ftl => 3,
            Arity::TwoFgl => 2,
        }
    }

    /// The coefficient of the orbit `idx` (weakly decreasing) at `t^l`.
    pub fn coefficient(self, l: usize, idx: &[u32]) -> Var {
        match self {
            Arity::Ftl => Var::ftl_coeff(l as u8, idx[0] as u8, idx[1] as u8, idx[2] as u8),
            Arity::TwoFgl => Var::two_fgl_coeff(l as u8, idx[0] as u8, idx[1] as u8),
        }
    }

    pub fn vars(self) -> Vec<Var> {
        (0..self.d() as u8).map(Var::geometric).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub d_min: i32,
    pub d_max: i32,
}

impl DegreeWindow {
    pub fn new(d_min: i32, d_max: i32) -> Result<Self> {
        if d_min < -4 || d_max < d_min {
            return Err(Error::InvalidArgument(format!("bad degree window [{d_min}, {d_max}]")));
        }
        Ok(DegreeWindow { d_min, d_max })
    }

    pub fn contains(&self, grade: i32) -> bool {
        (self.d_min..=self.d_max).contains(&grade)
    }
}

/// How ε is treated: a free variable modulo ε² − 1, or specialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EpsilonMode {
    Free,
    Plus,
    Minus,
}

impl EpsilonMode {
    pub fn value(self, ring: CoefficientRing) -> Polynomial {
        match self {
            EpsilonMode::Free => Polynomial::var(ring, Var::epsilon()),
            EpsilonMode::Plus => Polynomial::one(ring),
            EpsilonMode::Minus => Polynomial::from_i64(ring, -1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EpsilonMode::Free => "free",
            EpsilonMode::Plus => "+1",
            EpsilonMode::Minus => "-1",
        }
    }

    /// Specialize ε in `p` (or reduce it modulo ε² − 1 when free).
    pub fn apply(self, p: &Polynomial) -> Polynomial {
        match self {
            EpsilonMode::Free => p.reduce_epsilon(),
            EpsilonMode::Plus => p.specialize(&[(Var::epsilon(), 1)]),
            EpsilonMode::Minus => p.specialize(&[(Var::epsilon(), -1)]),
        }
    }
}

impl fmt::Display for EpsilonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EpsilonMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(EpsilonMode::Free),
            "+1" | "1" => Ok(EpsilonMode::Plus),
            "-1" => Ok(EpsilonMode::Minus),
            _ => Err(Error::Parse(format!("epsilon must be free, +1 or -1, not `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelOptions {
    pub epsilon: EpsilonMode,
    pub invert2: bool,
}

impl Default for RelOptions {
    fn default() -> Self {
        RelOptions { epsilon: EpsilonMode::Free, invert2: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Context,
    Neutral,
    EpsilonLinearity,
    WeakNeutral,
    Associativity,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Context => "context",
            Axiom::Neutral => "neutral",
            Axiom::EpsilonLinearity => "epsilon-linearity",
            Axiom::WeakNeutral => "weak-neutral",
            Axiom::Associativity => "associativity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub axiom: Axiom,
    pub poly: Polynomial,
}

impl Relation {
    pub fn grade(&self) -> Grading {
        self.poly.grade_of()
    }

    /// `axiom:grade:polynomial`.
    pub fn dump(&self) -> String {
        let g = match self.grade() {
            Grading::Homogeneous(g) => g.to_string(),
            Grading::Zero => "0".to_string(),
            Grading::Inhomogeneous => "?".to_string(),
        };
        format!("{}:{}:{}", self.axiom, g, self.poly)
    }
}

/// Weakly decreasing `len`-tuples of nonnegative integers summing to `s`.
fn sorted_tuples(len: usize, s: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, s: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            if s == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let left = (len - cur.len()) as u32;
        for k in (0..=hi.min(s)).rev() {
            if k * left < s {
                break;
            }
            cur.push(k);
            rec(len, s - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, s, s, &mut Vec::new(), &mut out);
    out
}

/// Orbit representatives of the coefficients with grade in the window.
pub fn enumerate_coefficients(w: DegreeWindow, arity: Arity) -> Vec<Var> {
    let mut out = Vec::new();
    for l in 1..=arity.n() {
        for grade in w.d_min..=w.d_max {
            let s = grade + l as i32;
            if s < 0 {
                continue;
            }
            for idx in sorted_tuples(arity.d(), s as u32) {
                out.push(arity.coefficient(l, &idx));
            }
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Components `G_1, ..., G_n` of the generic law.
fn generic_components(w: DegreeWindow, arity: Arity) -> Vec<Polynomial> {
    let vars = arity.vars();
    let mut comps = vec![Polynomial::zero(ZZ); arity.n()];
    for v in enumerate_coefficients(w, arity) {
        let (l, idx) = coefficient_index(v);
        let m = symfun::monomial_symmetric(ZZ, &OrbitIndex::new(idx), &vars).expect("arity matches");
        comps[l - 1] = &comps[l - 1] + &(&Polynomial::var(ZZ, v) * &m);
    }
    comps
}

/// `(l, orbit)` of a law coefficient.
pub fn coefficient_index(v: Var) -> (usize, Vec<u32>) {
    match v.kind() {
        crate::polyring::VarKind::FtlCoeff { l, i, j, k } => (l as usize, vec![i as u32, j as u32, k as u32]),
        crate::polyring::VarKind::TwoFglCoeff { l, i, j } => (l as usize, vec![i as u32, j as u32]),
        _ => panic!("{v} is not a law coefficient"),
    }
}

/// `1 + Σ_l Σ_orbits a^l_orbit m_orbit t^l` with out-of-window coefficients 0.
pub fn build_generic_law(w: DegreeWindow, arity: Arity) -> MSeries {
    let trunc = (arity.n() as i32 + w.d_max).max(0) as u32;
    MSeries::new(ZZ, arity.vars(), generic_components(w, arity), trunc).expect("well-formed generic law")
}

/// `F_t(x, 0, ..., 0)` required by the neutral element axiom.
fn neutral_target(arity: Arity, eps: &Polynomial) -> Polynomial {
    let xt = Polynomial::monomial(ZZ, Monomial::from_pairs([(Var::x(), 1), (Var::t(), 1)]), ZZ.one());
    let one = Polynomial::one(ZZ);
    let a = &one + &xt;
    let b = &one - &(eps * &xt);
    match arity {
        Arity::Ftl => (&a * &b).pow(2),
        Arity::TwoFgl => &a * &b,
    }
}

/// Generates the relation stream for a window.
#[derive(Clone, Debug)]
pub struct RelationGenerator {
    window: DegreeWindow,
    arity: Arity,
    options: RelOptions,
    coefficients: Vec<Var>,
    substitutions: FxHashMap<Var, Polynomial>,
}

impl RelationGenerator {
    pub fn new(window: DegreeWindow, arity: Arity, options: RelOptions) -> Self {
        RelationGenerator {
            window,
            arity,
            options,
            coefficients: enumerate_coefficients(window, arity),
            substitutions: FxHashMap::default(),
        }
    }

    pub fn coefficients(&self) -> &[Var] {
        &self.coefficients
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn options(&self) -> RelOptions {
        self.options
    }

    /// Known coefficient values applied to the law before the associativity
    /// expansion. They must be consequences of the relations (as values found
    /// by the Gröbner driver are), otherwise the stream changes its ideal.
    pub fn set_substitutions(&mut self, map: FxHashMap<Var, Polynomial>) {
        self.substitutions = map;
    }

    fn in_window(&self, v: Var) -> bool {
        self.coefficients.binary_search_by(|w| v.cmp(w)).is_ok()
    }

    fn eps(&self) -> Polynomial {
        self.options.epsilon.value(ZZ)
    }

    pub fn context_relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        if self.options.epsilon == EpsilonMode::Free {
            let e = Polynomial::var(ZZ, Var::epsilon());
            out.push(Relation { axiom: Axiom::Context, poly: &(&e * &e) - &Polynomial::one(ZZ) });
        }
        if self.options.invert2 {
            let a = Polynomial::var(ZZ, Var::alpha());
            out.push(Relation { axiom: Axiom::Context, poly: &a.scale_i64(2) - &Polynomial::one(ZZ) });
        }
        out
    }

    /// `a^l_{i0..0} = [x^i t^l] target` for every such coefficient in the window.
    pub fn neutral_values(&self) -> Vec<(Var, Polynomial)> {
        let target = neutral_target(self.arity, &self.eps());
        let mut out = Vec::new();
        for l in 1..=self.arity.n() {
            let tl = target.coefficient_of(Var::t(), l as u32);
            for grade in self.window.d_min..=self.window.d_max {
                let i = grade + l as i32;
                if i < 0 {
                    continue;
                }
                let mut idx = vec![0u32; self.arity.d()];
                idx[0] = i as u32;
                let v = self.arity.coefficient(l, &idx);
                let c = tl.coefficient_of(Var::x(), i as u32);
                out.push((v, self.options.epsilon.apply(&c)));
            }
            // nonzero target coefficients outside the window are inconsistent
            for (m, c) in tl.collect(|v| v == Var::x()) {
                let i = m.exponent(Var::x()) as i32;
                if !self.window.contains(i - l as i32) && !c.is_zero() {
                    debug!("neutral coefficient x^{i} t^{l} lies outside the window");
                }
            }
        }
        out
    }

    pub fn neutral_relations(&self) -> Vec<Relation> {
        self.neutral_values()
            .into_iter()
            .map(|(v, c)| Relation { axiom: Axiom::Neutral, poly: &Polynomial::var(ZZ, v) - &c })
            .collect()
    }

    /// `((−ε)^{α_1} − (−ε)^l)·a^l_α` for every full monomial `x^α` of the orbit.
    pub fn epsilon_linearity_relations(&self) -> Vec<Relation> {
        let minus_eps = -&self.eps();
        let mut seen = FxHashSet::default();
        let mut out = Vec::new();
        for &v in &self.coefficients {
            let (l, idx) = coefficient_index(v);
            let lhs_l = minus_eps.pow(l as u32);
            let mut firsts: Vec<u32> = idx.clone();
            firsts.dedup();
            for a1 in firsts {
                let factor = self.options.epsilon.apply(&(&minus_eps.pow(a1) - &lhs_l));
                let r = &factor * &Polynomial::var(ZZ, v);
                let r = positive(self.options.epsilon.apply(&r));
                if !r.is_zero() && seen.insert(r.clone()) {
                    out.push(Relation { axiom: Axiom::EpsilonLinearity, poly: r });
                }
            }
        }
        out
    }

    /// `Σ_{i+j=n} a^4_{ij0} = 0` over ordered index pairs.
    pub fn weak_neutral_relations(&self) -> Vec<Relation> {
        if self.arity != Arity::Ftl {
            return Vec::new();
        }
        let mut out = Vec::new();
        let lo = (4 + self.window.d_min).max(0) as u32;
        let hi = (4 + self.window.d_max).max(0) as u32;
        for n in lo..=hi {
            let mut acc: FxHashMap<Var, i64> = FxHashMap::default();
            for i in 0..=n {
                let mut idx = vec![i, n - i, 0];
                idx.sort_unstable_by(|a, b| b.cmp(a));
                let v = self.arity.coefficient(4, &idx);
                if self.in_window(v) {
                    *acc.entry(v).or_insert(0) += 1;
                }
            }
            let r = Polynomial::from_terms(ZZ, acc.into_iter().map(|(v, k)| (Monomial::var(v), ZZ.from_i64(k))));
            if !r.is_zero() {
                out.push(Relation { axiom: Axiom::WeakNeutral, poly: r });
            }
        }
        out
    }

    /// Everything but associativity, context relations first.
    pub fn preliminary(&self) -> Vec<Relation> {
        let mut out = self.context_relations();
        out.extend(self.neutral_relations());
        out.extend(self.epsilon_linearity_relations());
        out.extend(self.weak_neutral_relations());
        out
    }

    /// Components of the law used for the associativity expansion: generic,
    /// with the neutral values and the known substitutions applied.
    pub fn specialized_components(&self) -> Vec<Polynomial> {
        let mut map: FxHashMap<Var, Polynomial> = self.neutral_values().into_iter().collect();
        for (v, c) in &self.substitutions {
            map.insert(*v, c.clone());
        }
        generic_components(self.window, self.arity)
            .iter()
            .map(|c| self.options.epsilon.apply(&c.substitute(&map)))
            .collect()
    }

    /// Associativity relations of grade at most `d_max`, smallest grade first.
    pub fn associativity_relations(&self) -> Vec<Relation> {
        self.associativity_relations_in(None, self.window.d_max)
    }

    /// Associativity relations with grade in `[lo, hi]` (no lower bound if
    /// `lo` is `None`).
    pub fn associativity_relations_in(&self, lo: Option<i32>, hi: i32) -> Vec<Relation> {
        let comps = self.specialized_components();
        associativity_expansion(&comps, self.arity, lo.map(i64::from), hi as i64, self.options.epsilon)
            .into_iter()
            .map(|poly| Relation { axiom: Axiom::Associativity, poly })
            .collect()
    }

    /// The whole stream in order, associativity expanded lazily.
    pub fn stream(self) -> RelationStream {
        let pending: VecDeque<Relation> = self.preliminary().into();
        RelationStream { gen: self, pending, expanded: false }
    }

    /// A source for the Gröbner driver: one batch with everything but
    /// associativity, then one associativity relation per batch. Each grade
    /// is expanded separately, largest first, with the values fixed by then:
    /// a relation of grade g is linear in the coefficients of grade g once
    /// those of larger grade are known.
    pub fn source(self) -> AxiomSource {
        AxiomSource { gen: self, next_grade: None, done: false, pending: VecDeque::new() }
    }
}

/// Positive leading coefficient.
fn positive(p: Polynomial) -> Polynomial {
    match p.leading() {
        Some(t) if t.coeff.is_negative() => -p,
        _ => p,
    }
}

pub struct RelationStream {
    gen: RelationGenerator,
    pending: VecDeque<Relation>,
    expanded: bool,
}

impl Iterator for RelationStream {
    type Item = Relation;
    fn next(&mut self) -> Option<Relation> {
        if self.pending.is_empty() && !self.expanded {
            self.expanded = true;
            self.pending = self.gen.associativity_relations().into();
        }
        self.pending.pop_front()
    }
}

pub struct AxiomSource {
    gen: RelationGenerator,
    next_grade: Option<i32>,
    done: bool,
    pending: VecDeque<Polynomial>,
}

impl RelationSource for AxiomSource {
    fn next_batch(&mut self, fixed: &BTreeMap<Var, Polynomial>) -> Option<Vec<Polynomial>> {
        let w = self.gen.window;
        let Some(g) = self.next_grade else {
            self.next_grade = Some(w.d_max);
            return Some(self.gen.preliminary().into_iter().map(|r| r.poly).collect());
        };
        if let Some(p) = self.pending.pop_front() {
            return Some(vec![p]);
        }
        if self.done {
            return None;
        }
        let known: FxHashMap<Var, Polynomial> = fixed
            .iter()
            .filter(|(v, c)| v.is_law_coefficient() && c.ring() == ZZ)
            .map(|(v, c)| (*v, c.clone()))
            .collect();
        self.gen.set_substitutions(known);
        // the last round takes everything below the window too
        let lo = (g > w.d_min).then_some(g);
        let mut batch: Vec<Polynomial> =
            self.gen.associativity_relations_in(lo, g).into_iter().map(|r| r.poly).collect();
        // cheap relations first; a stable sort keeps the order otherwise
        batch.sort_by_key(|p| (p.degree(), p.terms().len()));
        self.pending = batch.into();
        debug!("{} associativity relations at grade {g}", self.pending.len());
        self.next_grade = Some(g - 1);
        self.done = g <= w.d_min;
        self.next_batch(fixed)
    }
}

/// Stream order of the generic relations.
pub fn generate_relations(w: DegreeWindow, arity: Arity, options: RelOptions) -> RelationStream {
    RelationGenerator::new(w, arity, options).stream()
}

/// The invariance conditions `L(β) = L(πβ)` of
/// `L = F_t(F_t(x_1..x_d), y_1..y_{d-1})` under all permutations of its
/// `2d−1` variables. With the structural symmetry of `F` these generate the
/// same ideal as the associativity axiom (the transposition and the cycle it
/// provides generate the full symmetric group).
///
/// `L = Σ_λ m_λ(roots of the inner F) · Π_i P_{λ_i}` with `P_k = [x^k] F_t`;
/// both factors are symmetric in their own variables, so only coefficients
/// at sorted exponents are formed.
fn associativity_expansion(
    g: &[Polynomial],
    arity: Arity,
    d_lo: Option<i64>,
    d_max: i64,
    eps: EpsilonMode,
) -> Vec<Polynomial> {
    let (n, d) = (arity.n(), arity.d());
    let inner: Vec<Var> = (0..d as u8).map(Var::geometric).collect();
    let outer: Vec<Var> = (d as u8..(2 * d - 1) as u8).map(Var::geometric).collect();
    let t = Var::t();
    let x = inner[0];
    let is_inner = |v: Var| inner.contains(&v);
    let is_outer_or_t = |v: Var| v == t || outer.contains(&v);

    // F_t(x, y_1, ..., y_{d-1}) and its slices P_k
    let mut ft = Polynomial::one(ZZ);
    for (l, gl) in g.iter().enumerate() {
        let renamed = gl.rename(|v| match inner.iter().position(|&w| w == v) {
            Some(i) if i > 0 => outer[i - 1],
            _ => v,
        });
        ft = &ft + &(&renamed * &Polynomial::monomial(ZZ, Monomial::var_pow(t, l as u32 + 1), ZZ.one()));
    }
    let kmax = ft.degree_in(x);
    let pk: Vec<Polynomial> = (0..=kmax).map(|k| ft.coefficient_of(x, k)).collect();
    // h_k: largest (t-degree − outer degree) of a term of P_k
    let h: Vec<Option<i64>> = pk
        .iter()
        .map(|p| {
            p.terms().iter().map(|tm| tm.mon.exponent(t) as i64 - tm.mon.degree_in(|v| outer.contains(&v)) as i64).max()
        })
        .collect();

    let orders: Vec<Option<u32>> =
        g.iter().map(|c| c.terms().iter().map(|tm| tm.mon.degree_in(is_inner)).min()).collect();
    let (p, q) = mvseries::root_weight(&orders);

    let mut lambdas = Vec::new();
    for lambda in mvseries::multisets(n, kmax) {
        let Some(hsum) = lambda.iter().map(|&k| h[k as usize]).sum::<Option<i64>>() else { continue };
        let size: i64 = lambda.iter().map(|&k| k as i64).sum();
        let dl = d_max + hsum;
        // M_λ has inner degree at least (p/q)|λ|
        if dl < 0 || p * size > q * dl {
            continue;
        }
        lambdas.push((lambda, dl, size));
    }
    let c0 = lambdas.iter().map(|(_, dl, size)| q * dl - p * size).max().unwrap_or(0);
    let inner_tr = inner.iter().fold(Truncation::new(c0), |tr, &v| tr.with_weight(v, q));
    let mut ev = ElementaryEvaluator::new(g.to_vec(), inner_tr, p);
    let p_tr = outer.iter().fold(Truncation::new(0), |tr, &v| tr.with_weight(v, 1)).with_weight(t, -1);

    type Key = (Vec<u32>, Vec<u32>, u32);
    let mut acc: FxHashMap<Key, FxHashMap<Monomial, Coeff>> = FxHashMap::default();
    for (lambda, dl, _) in &lambdas {
        let e = symfun::m_to_e(lambda, ZZ);
        let m = ev.eval(&e).truncate(&Truncation::total_degree(&inner, *dl));
        if m.is_zero() {
            continue;
        }
        let mut mc: Vec<(Vec<u32>, i64, Polynomial)> = Vec::new();
        let mut mu = i64::MAX;
        for (mon, c) in m.collect(is_inner) {
            let ex: Vec<u32> = inner.iter().map(|&v| mon.exponent(v)).collect();
            let deg = mon.degree() as i64;
            mu = mu.min(deg);
            if ex.windows(2).all(|w| w[0] >= w[1]) {
                mc.push((ex, deg, c));
            }
        }
        // Π P_{λ_i}, keeping what can still meet a term of M_λ
        let mut prod = Polynomial::one(ZZ);
        for (j, &k) in lambda.iter().enumerate() {
            let rest: i64 = lambda[j + 1..].iter().map(|&k| h[k as usize].unwrap_or(0)).sum();
            prod = prod.mul_truncated_cap(&pk[k as usize], &p_tr, d_max - mu + rest);
            if prod.is_zero() {
                break;
            }
        }
        if prod.is_zero() {
            continue;
        }
        let mut pc: Vec<(Vec<u32>, u32, i64, Polynomial)> = Vec::new();
        for (mon, c) in prod.collect(is_outer_or_t) {
            let ex: Vec<u32> = outer.iter().map(|&v| mon.exponent(v)).collect();
            if ex.windows(2).all(|w| w[0] >= w[1]) {
                let s = mon.exponent(t);
                pc.push((ex, s, mon.degree() as i64 - 2 * s as i64, c));
            }
        }
        for (e1, deg1, c1) in &mc {
            for (e2, s, w2, c2) in &pc {
                if deg1 + w2 > d_max {
                    continue;
                }
                let slot = acc.entry((e1.clone(), e2.clone(), *s)).or_default();
                for a in c1.terms() {
                    for b in c2.terms() {
                        crate::polyring::accumulate(&ZZ, slot, a.mon.mul(&b.mon), &ZZ.mul(&a.coeff, &b.coeff));
                    }
                }
            }
        }
    }

    // Group the coefficients by orbit of the full exponent vector.
    let mut values: FxHashMap<Key, Polynomial> = FxHashMap::default();
    let mut orbits: BTreeSet<(i64, u32, Vec<u32>)> = BTreeSet::new();
    for (key, terms) in acc {
        let poly = eps.apply(&Polynomial::from_terms(ZZ, terms));
        let mut all: Vec<u32> = key.0.iter().chain(key.1.iter()).copied().collect();
        all.sort_unstable_by(|a, b| b.cmp(a));
        let deg: i64 = all.iter().map(|&e| e as i64).sum();
        orbits.insert((deg - key.2 as i64, key.2, all));
        if !poly.is_zero() {
            values.insert(key, poly);
        }
    }
    let zero = Polynomial::zero(ZZ);
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    for (grade, s, all) in orbits {
        if d_lo.is_some_and(|lo| grade < lo) {
            continue;
        }
        let splits = splits(&all, d);
        let base = values.get(&(splits[0].0.clone(), splits[0].1.clone(), s)).unwrap_or(&zero);
        for (a, b) in &splits[1..] {
            let v = values.get(&(a.clone(), b.clone(), s)).unwrap_or(&zero);
            let r = positive(v - base);
            if !r.is_zero() && seen.insert(r.clone()) {
                out.push(r);
            }
        }
    }
    out
}

/// Distinct ways to split a weakly decreasing multiset into a sorted
/// `d`-tuple and a sorted remainder, in a fixed order.
fn splits(all: &[u32], d: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let n = all.len();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != d {
            continue;
        }
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, &e) in all.iter().enumerate() {
            if mask & (1 << i) != 0 {
                a.push(e);
            } else {
                b.push(e);
            }
        }
        out.insert((a, b));
    }
    out.into_iter().rev().collect()
}

/// Relations plus the Gröbner fold: the whole computation of a window.
///
/// With 2 inverted and ε free, the coefficient ring splits along the
/// idempotents (1 ± ε)/2, so the two specializations ε = ±1 are solved on
/// their own and glued back together.
pub fn solve(
    window: DegreeWindow,
    arity: Arity,
    options: RelOptions,
    ring: CoefficientRing,
    gb: IncrementalOptions,
) -> Result<RunResult> {
    if options.invert2 && options.epsilon == EpsilonMode::Free && ring != CoefficientRing::IntegersMod(2) {
        let plus = solve_direct(window, arity, RelOptions { epsilon: EpsilonMode::Plus, ..options }, ring, gb.clone())?;
        let minus =
            solve_direct(window, arity, RelOptions { epsilon: EpsilonMode::Minus, ..options }, ring, gb.clone())?;
        return glue(ring, &gb, &enumerate_coefficients(window, arity), plus, minus);
    }
    solve_direct(window, arity, options, ring, gb)
}

fn solve_direct(
    window: DegreeWindow,
    arity: Arity,
    options: RelOptions,
    ring: CoefficientRing,
    gb: IncrementalOptions,
) -> Result<RunResult> {
    let gen = RelationGenerator::new(window, arity, options);
    let coefficients = gen.coefficients().to_vec();
    let mut source = RingAdapter { inner: gen.source(), ring };
    let gb =
        IncrementalOptions { reduce_epsilon: options.epsilon == EpsilonMode::Free, invert2: options.invert2, ..gb };
    groebner::incremental_gb(&mut source, &coefficients, ring, gb)
}

/// The run over ℤ[1/2][ε]/(ε² − 1) from its components at ε = 1 and ε = −1.
fn glue(
    ring: CoefficientRing,
    opts: &IncrementalOptions,
    coefficients: &[Var],
    plus: RunResult,
    minus: RunResult,
) -> Result<RunResult> {
    let one = Polynomial::one(ring);
    let e = Polynomial::var(ring, Var::epsilon());
    let alpha = Polynomial::var(ring, Var::alpha());
    let two_alpha = &alpha.scale_i64(2) - &one;
    let f = &one + &e;
    let g = &one - &e;
    let mut fixed = BTreeMap::new();
    let mut free = Vec::new();
    let mut gens = Vec::new();
    if ring != CoefficientRing::Integers {
        gens.push(two_alpha.clone());
    }
    for &v in coefficients {
        match (plus.fixed.get(&v), minus.fixed.get(&v)) {
            (Some(cp), Some(cm)) => {
                // f·c₊ + e·c₋ with f, e = (1 ± ε)/2
                let value = &(&alpha * &(cp + cm)) + &(&(&alpha * &e) * &(cp - cm));
                fixed.insert(v, groebner::simplify_alpha(&value.reduce_epsilon()));
            }
            (p, m) => {
                free.push(v);
                let x = Polynomial::var(ring, v);
                if let Some(c) = p {
                    gens.push(&f * &(&x - c));
                }
                if let Some(c) = m {
                    gens.push(&g * &(&x - c));
                }
            }
        }
    }
    let is_two_alpha = |p: &Polynomial| *p == two_alpha;
    gens.extend(plus.relations.iter().filter(|p| !is_two_alpha(p)).map(|p| &f * p));
    gens.extend(minus.relations.iter().filter(|p| !is_two_alpha(p)).map(|p| &g * p));
    let mut gens: Vec<Polynomial> = gens.iter().map(|p| p.reduce_epsilon()).filter(|p| !p.is_zero()).collect();
    // after the ε-reduction, which would erase it
    gens.insert(0, &(&e * &e) - &one);
    let mut basis =
        groebner::GroebnerBasis::new(ring, opts.order.clone())?.with_budget(opts.budget).with_two_inverted(true);
    let mut incomplete = plus.incomplete || minus.incomplete;
    if basis.extend(&gens).is_err() {
        incomplete = true;
    }
    let mut relations = basis.generators();
    if ring == CoefficientRing::Integers {
        relations.push(two_alpha);
    }
    let (a, b) = (&plus.stats, &minus.stats);
    let stats = groebner::RunStats {
        steps: a.steps + b.steps + basis.steps(),
        relations_seen: a.relations_seen + b.relations_seen,
        skipped_by_prereduction: a.skipped_by_prereduction + b.skipped_by_prereduction,
        gb_calls: a.gb_calls + b.gb_calls + 1,
        max_basis_size: a.max_basis_size.max(b.max_basis_size).max(basis.len()),
    };
    Ok(RunResult { fixed, free, relations, stats, incomplete })
}

/// Moves the integral relations into another coefficient ring.
struct RingAdapter {
    inner: AxiomSource,
    ring: CoefficientRing,
}

impl RelationSource for RingAdapter {
    fn next_batch(&mut self, fixed: &BTreeMap<Var, Polynomial>) -> Option<Vec<Polynomial>> {
        let integral: BTreeMap<Var, Polynomial> = fixed
            .iter()
            .filter(|(_, c)| c.terms().iter().all(|t| t.coeff.is_integral()))
            .filter_map(|(v, c)| c.change_ring(ZZ).ok().map(|c| (*v, c)))
            .collect();
        let batch = self.inner.next_batch(&integral)?;
        Some(batch.into_iter().map(|p| p.change_ring(self.ring).expect("integral relation")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i32, b: i32) -> DegreeWindow {
        DegreeWindow::new(a, b).unwrap()
    }

    #[test]
    fn coefficient_counts() {
        assert_eq!(enumerate_coefficients(w(-4, 0), Arity::Ftl).len(), 24);
        assert_eq!(enumerate_coefficients(w(-4, 2), Arity::Ftl).len(), 57);
        let two = enumerate_coefficients(w(-2, 0), Arity::TwoFgl);
        assert!(two.contains(&Var::two_fgl_coeff(2, 1, 1)));
        assert_eq!(two.len(), 6);
    }

    #[test]
    fn generic_law_shape() {
        let f = build_generic_law(w(-4, 0), Arity::Ftl);
        let z = CoefficientRing::Integers;
        let f1 = Polynomial::parse(z, "a1_000 + a1_100*(x + y + z)").unwrap();
        assert_eq!(f.component(1), f1);
        assert!(symfun::check_symmetric(&f.component(3), &Arity::Ftl.vars()));
    }

    #[test]
    fn neutral_and_weak_neutral() {
        let gen = RelationGenerator::new(w(-4, 0), Arity::Ftl, RelOptions::default());
        let z = |s: &str| Polynomial::parse(CoefficientRing::Integers, s).unwrap();
        let neutral: Vec<Polynomial> = gen.neutral_relations().into_iter().map(|r| r.poly).collect();
        assert!(neutral.contains(&z("a4_400 - 1")));
        assert!(neutral.contains(&z("a2_200 - 2 + 4*e")));
        let weak: Vec<Polynomial> = gen.weak_neutral_relations().into_iter().map(|r| r.poly).collect();
        assert!(weak.contains(&z("2*a4_200 + a4_110")));
        for r in gen.preliminary() {
            assert!(matches!(r.grade(), Grading::Homogeneous(_)), "{}", r.dump());
        }
    }

    #[test]
    fn epsilon_linearity_parity() {
        let gen = RelationGenerator::new(w(-4, 0), Arity::Ftl, RelOptions::default());
        let z = |s: &str| Polynomial::parse(CoefficientRing::Integers, s).unwrap();
        let lin: Vec<Polynomial> = gen.epsilon_linearity_relations().into_iter().map(|r| r.poly).collect();
        assert!(lin.contains(&z("(1 + e)*a3_210")));
        assert!(!lin.iter().any(|p| p.contains_var(Var::ftl_coeff(3, 1, 1, 1))));
        assert!(lin.contains(&z("(1 + e)*a2_110")));
        // all indices and l even
        assert!(!lin.iter().any(|p| p.contains_var(Var::ftl_coeff(4, 2, 2, 0))));
    }

    #[test]
    fn two_fgl_degree_zero_relations() {
        let opts = RelOptions { epsilon: EpsilonMode::Minus, invert2: false };
        let gen = RelationGenerator::new(w(-2, 0), Arity::TwoFgl, opts);
        let rels: Vec<Relation> = gen.stream().collect();
        let g = Var::two_fgl_coeff(2, 1, 1);
        for gamma in [-2, 2] {
            for r in &rels {
                let mut vals = vec![(g, gamma)];
                vals.extend([
                    (Var::two_fgl_coeff(1, 1, 0), 2),
                    (Var::two_fgl_coeff(2, 2, 0), 1),
                    (Var::two_fgl_coeff(1, 0, 0), 0),
                    (Var::two_fgl_coeff(2, 0, 0), 0),
                    (Var::two_fgl_coeff(2, 1, 0), 0),
                ]);
                assert!(r.poly.specialize(&vals).is_zero(), "{} at γ = {gamma}", r.dump());
            }
        }
        assert!(rels.iter().any(|r| r.axiom == Axiom::Associativity));
    }

    #[test]
    fn split_enumeration() {
        assert_eq!(splits(&[2, 1, 0], 2), vec![(vec![2, 1], vec![0]), (vec![2, 0], vec![1]), (vec![1, 0], vec![2])]);
        assert_eq!(splits(&[1, 1, 1], 2).len(), 1);
    }
}
