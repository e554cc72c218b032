use ftl_core::groebner::*;
use ftl_core::polyring::*;
use proptest::prelude::*;

const ZZ: CoefficientRing = CoefficientRing::Integers;

fn unknowns() -> [Var; 3] {
    [Var::ftl_coeff(1, 1, 0, 0), Var::ftl_coeff(2, 1, 1, 0), Var::ftl_coeff(3, 1, 1, 1)]
}

fn poly(ring: CoefficientRing) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-4i64..=4, prop::array::uniform3(0u32..3)), 1..4).prop_map(move |terms| {
        Polynomial::from_terms(
            ring,
            terms.into_iter().map(|(c, e)| (Monomial::from_pairs(unknowns().into_iter().zip(e)), ring.from_i64(c))),
        )
    })
}

fn system(ring: CoefficientRing) -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(poly(ring), 1..4)
}

fn rings() -> impl Strategy<Value = CoefficientRing> {
    prop_oneof![Just(CoefficientRing::Rationals), Just(CoefficientRing::IntegersMod(7)), Just(ZZ)]
}

fn check_basis(gens: &[Polynomial], ring: CoefficientRing) -> Result<(), TestCaseError> {
    let gb = GroebnerBasis::from_generators(ring, MonomialOrder::degrevlex(), gens).unwrap();
    prop_assert!(gb.satisfies_criterion());
    for g in gens {
        prop_assert!(gb.reduce(g).is_zero(), "generator {} does not reduce to zero", g);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn buchberger_criterion_holds((ring, gens) in rings().prop_flat_map(|r| (Just(r), system(r)))) {
        check_basis(&gens, ring)?;
    }

    #[test]
    fn incremental_matches_one_shot((ring, gens) in rings().prop_flat_map(|r| (Just(r), system(r)))) {
        let batches: Vec<Vec<Polynomial>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let opts = IncrementalOptions { reduce_epsilon: false, ..IncrementalOptions::default() };
        let run = incremental_gb(&mut Batches(batches.into_iter()), &unknowns(), ring, opts).unwrap();
        prop_assert!(!run.incomplete);
        let mut ideal = run.relations.clone();
        ideal.extend(fixed_relations(&run.fixed));
        prop_assert!(ideal_equal(&ideal, &gens, &MonomialOrder::degrevlex(), ring).unwrap());
    }

    #[test]
    fn rational_basis_ignores_input_order(gens in system(CoefficientRing::Rationals)) {
        let q = CoefficientRing::Rationals;
        let ord = MonomialOrder::degrevlex();
        let mut rev = gens.clone();
        rev.reverse();
        prop_assert_eq!(buchberger(&gens, &ord, q).unwrap(), buchberger(&rev, &ord, q).unwrap());
    }
}

#[test]
fn strong_basis_over_the_integers() {
    let p = |s: &str| Polynomial::parse(ZZ, s).unwrap();
    let gens = [p("2*x*y"), p("3*x^2 - y"), p("6*y^2 + x")];
    let gb = GroebnerBasis::from_generators(ZZ, MonomialOrder::degrevlex(), &gens).unwrap();
    assert!(gb.satisfies_criterion());
    assert!(gens.iter().all(|g| gb.contains(g)));
}

#[test]
fn budget_exhaustion_is_an_error() {
    let p = |s: &str| Polynomial::parse(ZZ, s).unwrap();
    let mut gb = GroebnerBasis::new(ZZ, MonomialOrder::degrevlex()).unwrap().with_budget(1);
    let r = gb.extend(&[p("x^3 - y*z"), p("y^3 - x*z"), p("z^3 - x*y"), p("x*y*z - 1")]);
    assert!(matches!(r, Err(ftl_core::Error::BudgetExhausted(1))));
}

#[test]
fn lex_elimination() {
    let q = CoefficientRing::Rationals;
    let p = |s: &str| Polynomial::parse(q, s).unwrap();
    let gb = buchberger(&[p("x - y^2"), p("y^3 - 1")], &MonomialOrder::lex(), q).unwrap();
    assert!(gb.contains(&p("y^3 - 1")));
    assert!(gb.iter().any(|g| !g.contains_var(Var::y()) || !g.contains_var(Var::x())));
}
