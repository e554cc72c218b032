//! Coefficient rings presented as quotients `R[coefficients]/I`, used to
//! decide whether axiom residuals vanish.

use crate::error::Result;
use crate::groebner::GroebnerBasis;
use crate::mvseries::MSeries;
use crate::polyring::{CoefficientRing, MonomialOrder, Polynomial, Var};

/// `R[ε, a, ...]/(ε² − 1, relations)`, or the plain polynomial ring when
/// there are no relations.
#[derive(Clone, Debug)]
pub struct Quotient {
    ring: CoefficientRing,
    relations: Vec<Polynomial>,
    basis: Option<GroebnerBasis>,
}

impl Quotient {
    /// No relations besides ε² = 1.
    pub fn free(ring: CoefficientRing) -> Self {
        Quotient { ring, relations: Vec::new(), basis: None }
    }

    pub fn new(ring: CoefficientRing, relations: &[Polynomial]) -> Result<Self> {
        let relations: Vec<Polynomial> =
            relations.iter().map(Polynomial::reduce_epsilon).filter(|p| !p.is_zero()).collect();
        if relations.is_empty() {
            return Ok(Quotient::free(ring));
        }
        let e = Polynomial::var(ring, Var::epsilon());
        let mut gens = vec![&(&e * &e) - &Polynomial::one(ring)];
        gens.extend(relations.iter().cloned());
        let basis = GroebnerBasis::from_generators(ring, MonomialOrder::degrevlex(), &gens)?;
        Ok(Quotient { ring, relations, basis: Some(basis) })
    }

    /// Parse relations written in the textual polynomial syntax.
    pub fn parse(ring: CoefficientRing, relations: &[&str]) -> Result<Self> {
        let rels = relations.iter().map(|s| Polynomial::parse(ring, s)).collect::<Result<Vec<_>>>()?;
        Quotient::new(ring, &rels)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Normal form: ε reduced, then reduced by the relations.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let p = p.reduce_epsilon();
        match &self.basis {
            Some(gb) => gb.reduce(&p),
            None => p,
        }
    }

    pub fn is_zero(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn reduce_series(&self, s: &MSeries) -> MSeries {
        s.map_components(|c| self.reduce(c))
    }
}
