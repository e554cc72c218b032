//! The incremental fold over a relation stream, with pre-reduction and
//! elimination of variables forced to a constant.

use std::collections::BTreeMap;

use log::{debug, info};
use rustc_hash::FxHashMap;

use super::basis::GroebnerBasis;
use crate::error::{Error, Result};
use crate::int::Int;
use crate::polyring::{Coeff, CoefficientRing, Monomial, MonomialOrder, Polynomial, Var};

/// A producer of relation batches. The driver passes the values fixed so
/// far, so a lazy producer can specialize before expanding.
pub trait RelationSource {
    fn next_batch(&mut self, fixed: &BTreeMap<Var, Polynomial>) -> Option<Vec<Polynomial>>;
}

/// Any iterator of batches is a source that ignores the fixed values.
pub struct Batches<I>(pub I);

impl<I: Iterator<Item = Vec<Polynomial>>> RelationSource for Batches<I> {
    fn next_batch(&mut self, _: &BTreeMap<Var, Polynomial>) -> Option<Vec<Polynomial>> {
        self.0.next()
    }
}

#[derive(Clone, Debug)]
pub struct IncrementalOptions {
    pub prereduce: bool,
    pub budget: u64,
    pub order: MonomialOrder,
    /// Put ε² − 1 into the ideal and reduce every incoming relation by it.
    pub reduce_epsilon: bool,
    /// Work with 2 inverted, standing for the relation 2α − 1. Over ℤ the
    /// basis is computed over ℤ[1/2] with α cleared from the inputs, and
    /// 2α − 1 is added back to the reported relations.
    pub invert2: bool,
}

impl Default for IncrementalOptions {
    fn default() -> Self {
        IncrementalOptions {
            prereduce: true,
            budget: super::basis::DEFAULT_STEP_BUDGET,
            order: MonomialOrder::degrevlex(),
            reduce_epsilon: true,
            invert2: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub steps: u64,
    pub relations_seen: u64,
    pub skipped_by_prereduction: u64,
    pub gb_calls: u64,
    pub max_basis_size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub fixed: BTreeMap<Var, Polynomial>,
    pub free: Vec<Var>,
    pub relations: Vec<Polynomial>,
    pub stats: RunStats,
    pub incomplete: bool,
}

/// A law coefficient `v` that `g` determines: `g = u*v + c` with `u` a unit
/// (`±1`, `±ε`, times `2^k` when 2 is known to be invertible) and `v` not
/// occurring in `c`. Returns `v` and `-u⁻¹c`, preferring constant values,
/// then short ones.
fn solvable(g: &Polynomial, two_inverted: bool) -> Option<(Var, Polynomial)> {
    let eps = Var::epsilon();
    let ring = g.ring();
    let mut best: Option<(bool, usize, Var, Polynomial)> = None;
    for (idx, t) in g.terms().iter().enumerate() {
        let (m, e) = t.mon.without(eps);
        let pairs = m.pairs();
        if pairs.len() != 1 || pairs[0].1 != 1 || e > 1 || !pairs[0].0.is_law_coefficient() {
            continue;
        }
        let v = pairs[0].0;
        if g.terms().iter().enumerate().any(|(j, o)| j != idx && o.mon.exponent(v) > 0) {
            continue;
        }
        if !t.coeff.is_integral() {
            continue;
        }
        let Some(c) = t.coeff.numerator().to_i64() else { continue };
        let k = c.unsigned_abs().trailing_zeros();
        if c.unsigned_abs() >> k != 1 || (k > 0 && !two_inverted) {
            continue;
        }
        let rest: Vec<_> = g
            .terms()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, o)| (o.mon.clone(), o.coeff.clone()))
            .collect();
        let constant = rest.iter().all(|(m, _)| !m.vars().any(|w| w.is_law_coefficient()));
        let len = rest.len();
        if let Some((bc, bl, _, _)) = &best {
            if (!constant, len) >= (!*bc, *bl) {
                continue;
            }
        }
        // u⁻¹ = sign·ε^e·α^k, using ε² = 1 and 2α = 1
        let mut unit = Monomial::var_pow(Var::alpha(), k);
        if e == 1 {
            unit = unit.mul(&Monomial::var(eps));
        }
        let factor = Polynomial::monomial(ring, unit, ring.from_i64(-c.signum()));
        let mut value = &factor * &Polynomial::from_terms(ring, rest);
        if e == 1 {
            value = value.reduce_epsilon();
        }
        best = Some((constant, len, v, value));
    }
    best.map(|(_, _, v, value)| (v, value))
}

#[cfg(test)]
fn trivial_solution(g: &Polynomial) -> Option<(Var, Polynomial)> {
    solvable(g, false).filter(|(_, c)| !c.variables().iter().any(|w| w.is_law_coefficient()))
}

pub struct IncrementalGb {
    gb: GroebnerBasis,
    fixed: BTreeMap<Var, Polynomial>,
    subst: FxHashMap<Var, Polynomial>,
    options: IncrementalOptions,
    stats: RunStats,
}

impl IncrementalGb {
    pub fn new(ring: CoefficientRing, options: IncrementalOptions) -> Result<Self> {
        let mut gb = GroebnerBasis::new(ring, options.order.clone())?
            .with_budget(options.budget)
            .with_two_inverted(options.invert2);
        if options.reduce_epsilon {
            // ε-reduction of the inputs is only sound with ε² − 1 in the ideal
            let e = Polynomial::var(ring, Var::epsilon());
            gb.add(&(&(&e * &e) - &Polynomial::one(ring)))?;
        }
        Ok(IncrementalGb {
            gb,
            fixed: BTreeMap::new(),
            subst: FxHashMap::default(),
            options,
            stats: RunStats::default(),
        })
    }

    /// Coefficients known to be constant, with their values.
    pub fn fixed(&self) -> &BTreeMap<Var, Polynomial> {
        &self.fixed
    }

    /// Every eliminated coefficient, including those expressed through others.
    pub fn substitutions(&self) -> &FxHashMap<Var, Polynomial> {
        &self.subst
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    fn prepare(&self, r: &Polynomial) -> Polynomial {
        let mut r = if self.subst.is_empty() { r.clone() } else { r.substitute(&self.subst) };
        if self.options.reduce_epsilon {
            r = r.reduce_epsilon();
        }
        if self.gb.two_inverted() {
            r = clear_alpha(&r);
        }
        r
    }

    /// One step of the fold: adjoin a batch and eliminate what becomes trivial.
    pub fn push_batch(&mut self, batch: &[Polynomial]) -> Result<()> {
        let mut todo = Vec::with_capacity(batch.len());
        for r in batch {
            self.stats.relations_seen += 1;
            let r = self.prepare(r);
            if r.is_zero() {
                self.stats.skipped_by_prereduction += 1;
                continue;
            }
            if self.options.prereduce && self.gb.contains(&r) {
                self.stats.skipped_by_prereduction += 1;
                continue;
            }
            todo.push(r);
        }
        if todo.is_empty() {
            return Ok(());
        }
        self.stats.gb_calls += 1;
        let out = self.gb.extend(&todo);
        self.note_size();
        out?;
        self.eliminate()
    }

    fn note_size(&mut self) {
        self.stats.steps = self.gb.steps();
        self.stats.max_basis_size = self.stats.max_basis_size.max(self.gb.len());
    }

    fn eliminate(&mut self) -> Result<()> {
        let ring = self.gb.ring();
        let two_inverted = self.gb.two_inverted() || {
            let a = Polynomial::var(ring, Var::alpha());
            self.gb.contains(&(&a.scale_i64(2) - &Polynomial::one(ring)))
        };
        loop {
            let gens = self.gb.generators();
            let found = gens
                .iter()
                .filter_map(|g| solvable(g, two_inverted))
                .min_by_key(|(_, c)| (c.variables().iter().any(|w| w.is_law_coefficient()), c.terms().len()));
            let Some((v, value)) = found else { return Ok(()) };
            // reducing by the basis here could bring v back
            let value = self.tidy(&value);
            debug!("eliminated {v} = {value}");
            let one: FxHashMap<Var, Polynomial> = [(v, value.clone())].into_iter().collect();
            let subst = std::mem::take(&mut self.subst);
            self.subst = subst.into_iter().map(|(w, c)| (w, self.tidy(&c.substitute(&one)))).collect();
            self.subst.insert(v, value);
            self.refresh_fixed();
            let z_half = self.gb.two_inverted();
            let rest: Vec<Polynomial> = gens
                .iter()
                // no ε-reduction here: it would erase ε² − 1 itself
                .map(|g| g.substitute(&one))
                .map(|g| if z_half { clear_alpha(&g) } else { g })
                .filter(|g| !g.is_zero())
                .collect();
            let mut gb = GroebnerBasis::new(ring, self.options.order.clone())?
                .with_budget(self.options.budget)
                .with_two_inverted(self.options.invert2)
                .with_steps(self.gb.steps());
            self.stats.gb_calls += 1;
            let out = gb.extend(&rest);
            self.gb = gb;
            self.note_size();
            out?;
        }
    }

    fn tidy(&self, p: &Polynomial) -> Polynomial {
        if self.options.reduce_epsilon {
            p.reduce_epsilon()
        } else {
            p.clone()
        }
    }

    /// Eliminated coefficients whose value no longer involves other ones.
    fn refresh_fixed(&mut self) {
        self.fixed = self
            .subst
            .iter()
            .filter(|(_, c)| !c.variables().iter().any(|w| w.is_law_coefficient()))
            .map(|(v, c)| (*v, c.clone()))
            .collect();
    }

    /// Fold a whole source. Budget exhaustion yields a partial result
    /// flagged incomplete rather than an error.
    pub fn run(mut self, source: &mut dyn RelationSource, coefficients: &[Var]) -> Result<RunResult> {
        let mut incomplete = false;
        while let Some(batch) = source.next_batch(&self.fixed) {
            match self.push_batch(&batch) {
                Ok(()) => {}
                Err(Error::BudgetExhausted(b)) => {
                    info!("step budget of {b} exhausted");
                    incomplete = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(self.finish(coefficients, incomplete))
    }

    /// Close the run. Coefficients eliminated in terms of others return to
    /// the free list and their defining relations to the basis.
    pub fn finish(mut self, coefficients: &[Var], incomplete: bool) -> RunResult {
        let ring = self.gb.ring();
        let mut extra = Vec::new();
        for (&v, c) in &self.subst {
            if !self.fixed.contains_key(&v) {
                let c = c.substitute(&self.fixed.iter().map(|(w, d)| (*w, d.clone())).collect());
                let r = &Polynomial::var(ring, v) - &c;
                extra.push(if self.gb.two_inverted() { clear_alpha(&r) } else { r });
            }
        }
        if !extra.is_empty() {
            if let Err(e) = self.gb.extend(&extra) {
                info!("final basis incomplete: {e}");
            }
        }
        let z_half = self.gb.two_inverted();
        let fixed = self
            .fixed
            .iter()
            .map(|(v, c)| {
                let c = self.tidy(c);
                (*v, if z_half { simplify_alpha(&c) } else { c })
            })
            .collect();
        self.note_size();
        let free = coefficients.iter().copied().filter(|v| !self.fixed.contains_key(v)).collect();
        let mut relations = self.gb.generators();
        if z_half && !self.gb.is_unit() {
            let a = Polynomial::var(ring, Var::alpha());
            relations.push(&a.scale_i64(2) - &Polynomial::one(ring));
        }
        RunResult { fixed, free, relations, stats: self.stats, incomplete }
    }
}

/// `2^D·p(1/2)` with `D` the degree of `p` in α: the same ideal element
/// up to a unit once 2 is inverted.
fn clear_alpha(p: &Polynomial) -> Polynomial {
    let alpha = Var::alpha();
    let d = p.degree_in(alpha);
    if d == 0 {
        return p.clone();
    }
    let ring = p.ring();
    Polynomial::from_terms(
        ring,
        p.terms().iter().map(|t| {
            let (m, j) = t.mon.without(alpha);
            (m, ring.mul(&t.coeff, &Coeff::int(Int::pow2(d - j))))
        }),
    )
}

/// Write a value involving α with the smallest possible power of α.
pub(crate) fn simplify_alpha(p: &Polynomial) -> Polynomial {
    let d = p.degree_in(Var::alpha());
    if d == 0 {
        return p.clone();
    }
    let q = clear_alpha(p);
    let k = q.terms().iter().map(|t| t.coeff.numerator().two_adic_valuation()).min().unwrap_or(0).min(d);
    let ring = p.ring();
    let scale = Coeff::int(Int::pow2(k));
    Polynomial::from_terms(
        ring,
        q.terms()
            .iter()
            .map(|t| (t.mon.mul(&Monomial::var_pow(Var::alpha(), d - k)), ring.div_exact(&t.coeff, &scale))),
    )
}

/// Fold a relation stream into a Gröbner basis, eliminating trivially
/// determined coefficients along the way.
pub fn incremental_gb(
    source: &mut dyn RelationSource,
    coefficients: &[Var],
    ring: CoefficientRing,
    options: IncrementalOptions,
) -> Result<RunResult> {
    IncrementalGb::new(ring, options)?.run(source, coefficients)
}

/// The eliminated values as relations `v - value`.
pub fn fixed_relations(fixed: &BTreeMap<Var, Polynomial>) -> Vec<Polynomial> {
    fixed
        .iter()
        .map(|(&v, c)| {
            let ring = c.ring();
            &Polynomial::monomial(ring, Monomial::var(v), ring.one()) - c
        })
        .collect()
}
