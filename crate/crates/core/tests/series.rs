use ftl_core::mvseries::MSeries;
use ftl_core::polyring::*;
use ftl_core::symfun;
use proptest::prelude::*;
use rustc_hash::FxHashMap;

const ZZ: CoefficientRing = CoefficientRing::Integers;
const D: u32 = 4;

/// A polynomial in `vs` without constant term and of degree at most `max`.
fn vanishing(vs: Vec<Var>, max: u32) -> impl Strategy<Value = Polynomial> {
    let k = vs.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=max, k)), 1..5).prop_map(move |terms| {
        Polynomial::from_terms(
            ZZ,
            terms
                .into_iter()
                .filter(|(_, e)| {
                    let s: u32 = e.iter().sum();
                    s >= 1 && s <= max
                })
                .map(|(c, e)| (Monomial::from_pairs(vs.iter().copied().zip(e)), ZZ.from_i64(c))),
        )
    })
}

fn outer() -> impl Strategy<Value = MSeries> {
    prop::collection::vec(vanishing(vec![Var::x(), Var::y()], 3), 1..=2)
        .prop_map(|comps| MSeries::new(ZZ, vec![Var::x(), Var::y()], comps, D).unwrap())
}

/// Roots in `u, v`; the inner series is their product `Π (1 + r t)`.
fn roots() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(vanishing(vec![Var::u(), Var::v()], 2), 1..=3)
}

fn split(roots: &[Polynomial]) -> MSeries {
    let vs = vec![Var::u(), Var::v()];
    let tr = Truncation::total_degree(&vs, D as i64);
    let t = Polynomial::var(ZZ, Var::t());
    let mut p = Polynomial::one(ZZ);
    for r in roots {
        p = p.mul_truncated(&(&Polynomial::one(ZZ) + &(r * &t)), &tr);
    }
    MSeries::from_t_polynomial(&p, vs, roots.len(), D).unwrap()
}

/// `Π_r F_t(…, r, …)` by direct composition.
fn oracle(f: &MSeries, place: usize, roots: &[Polynomial], out_vars: &[Var]) -> Polynomial {
    let tr = Truncation::total_degree(out_vars, D as i64);
    let mut p = Polynomial::one(ZZ);
    for r in roots {
        let mut args: Vec<Polynomial> = f.vars().iter().map(|&v| Polynomial::var(ZZ, v)).collect();
        args[place] = r.clone();
        let c = f.compose(&args, out_vars.to_vec()).unwrap();
        p = p.mul_truncated(&c.to_t_polynomial(), &tr);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn substitution_matches_product_over_roots(f in outer(), rs in roots(), place in 0usize..2) {
        let g = split(&rs);
        let s = f.substitute(place, &g).unwrap();
        let out_vars = s.vars().to_vec();
        prop_assert_eq!(s.to_t_polynomial(), oracle(&f, place, &rs, &out_vars));
    }

    #[test]
    fn elementary_roundtrip(p in vanishing(vec![Var::x(), Var::y(), Var::z()], 3)) {
        let xyz = [Var::x(), Var::y(), Var::z()];
        let s = symfun::symmetrize(&p, &xyz);
        let e = symfun::to_elementary(&s, &xyz).unwrap();
        prop_assert_eq!(symfun::from_elementary(&e, &xyz), s);
    }
}

#[test]
fn substituting_the_additive_law_into_itself() {
    let add =
        MSeries::from_t_polynomial(&Polynomial::parse(ZZ, "1 + (x+y)*t").unwrap(), vec![Var::x(), Var::y()], 1, 5)
            .unwrap();
    let inner = add.with_vars(&[Var::u(), Var::v()]).unwrap();
    let s = add.substitute(1, &inner).unwrap();
    assert_eq!(s.vars(), &[Var::x(), Var::u(), Var::v()]);
    assert_eq!(s.component(1), Polynomial::parse(ZZ, "x+u+v").unwrap());
}

#[test]
fn non_composable_inner_series_is_rejected() {
    let f = MSeries::from_t_polynomial(&Polynomial::parse(ZZ, "1 + (x+y)*t").unwrap(), vec![Var::x(), Var::y()], 1, 3)
        .unwrap();
    let g = MSeries::new(ZZ, vec![Var::u()], vec![Polynomial::parse(ZZ, "1 + u").unwrap()], 3).unwrap();
    assert!(f.substitute(0, &g).is_err());
    let map: FxHashMap<Var, Polynomial> = FxHashMap::default();
    assert_eq!(f.component(1).substitute(&map), f.component(1));
}
