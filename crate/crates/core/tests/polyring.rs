use ftl_core::polyring::*;
use proptest::prelude::*;
use rustc_hash::FxHashMap;

const ZZ: CoefficientRing = CoefficientRing::Integers;

fn vars() -> [Var; 4] {
    [Var::x(), Var::y(), Var::z(), Var::epsilon()]
}

fn poly(ring: CoefficientRing) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-6i64..=6, prop::array::uniform4(0u32..3)), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(
            ring,
            terms.into_iter().map(|(c, e)| (Monomial::from_pairs(vars().into_iter().zip(e)), ring.from_i64(c))),
        )
    })
}

proptest! {
    #[test]
    fn print_parse_roundtrip(p in poly(ZZ)) {
        prop_assert_eq!(Polynomial::parse(ZZ, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn roundtrip_mod_seven(p in poly(CoefficientRing::IntegersMod(7))) {
        let r = CoefficientRing::IntegersMod(7);
        prop_assert_eq!(Polynomial::parse(r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn rational_roundtrip(p in poly(CoefficientRing::Rationals), d in 1i64..5) {
        let q = CoefficientRing::Rationals;
        let p = p.scale(&q.from_fraction(1.into(), d.into()).unwrap());
        prop_assert_eq!(Polynomial::parse(q, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn ring_axioms(a in poly(ZZ), b in poly(ZZ), c in poly(ZZ)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn epsilon_reduction_is_a_ring_map(a in poly(ZZ), b in poly(ZZ)) {
        let ab = (&a * &b).reduce_epsilon();
        prop_assert_eq!(&ab, &(&a.reduce_epsilon() * &b.reduce_epsilon()).reduce_epsilon());
        prop_assert_eq!(ab.reduce_epsilon(), ab);
    }

    #[test]
    fn substitution_is_a_ring_map(a in poly(ZZ), b in poly(ZZ), s in poly(ZZ)) {
        let map: FxHashMap<Var, Polynomial> = [(Var::x(), s)].into_iter().collect();
        prop_assert_eq!((&a * &b).substitute(&map), &a.substitute(&map) * &b.substitute(&map));
    }

    #[test]
    fn truncated_product_agrees(a in poly(ZZ), b in poly(ZZ), cap in 0i64..6) {
        let tr = Truncation::total_degree(&[Var::x(), Var::y(), Var::z()], cap);
        prop_assert_eq!(a.mul_truncated(&b, &tr), (&a * &b).truncate(&tr));
    }
}

#[test]
fn parse_errors_are_reported() {
    assert!(Polynomial::parse(ZZ, "x +").is_err());
    assert!(Polynomial::parse(ZZ, "1/2*x").is_err());
    assert!(CoefficientRing::integers_mod(1).is_err());
}

#[test]
fn coefficient_names_roundtrip() {
    for v in
        [Var::ftl_coeff(3, 1, 1, 1), Var::two_fgl_coeff(2, 1, 1), Var::fgl_coeff(2, 1), Var::epsilon(), Var::alpha()]
    {
        assert_eq!(Var::parse(&v.name()).unwrap(), v);
    }
    assert_eq!(Var::ftl_coeff(4, 2, 2, 0).name(), "a4_220");
    assert_eq!(Var::ftl_coeff(4, 2, 2, 0).grade(), 0);
}
