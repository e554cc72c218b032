use ftl_core::ftl;
use ftl_core::polyring::*;
use ftl_core::relgen::*;
use rustc_hash::FxHashMap;

const ZZ: CoefficientRing = CoefficientRing::Integers;

/// Every coefficient of the window at its value in the Milnor-Witt law.
fn hmw_assignment(w: DegreeWindow) -> FxHashMap<Var, Polynomial> {
    let law = ftl::hmw(8);
    enumerate_coefficients(w, Arity::Ftl)
        .into_iter()
        .map(|v| {
            let (l, idx) = coefficient_index(v);
            (v, law.coefficient(l, [idx[0], idx[1], idx[2]]))
        })
        .collect()
}

#[test]
fn generated_relations_vanish_on_the_milnor_witt_law() {
    let w = DegreeWindow::new(-2, 0).unwrap();
    let values = hmw_assignment(w);
    let mut count = 0;
    for rel in generate_relations(w, Arity::Ftl, RelOptions::default()) {
        let v = rel.poly.substitute(&values).reduce_epsilon();
        assert!(v.is_zero(), "{} relation {} gives {}", rel.axiom, rel.poly, v);
        count += 1;
    }
    assert!(count > 1000);
}

#[test]
fn perturbed_assignment_breaks_some_relation() {
    let w = DegreeWindow::new(-2, 0).unwrap();
    let mut values = hmw_assignment(w);
    let a = Var::ftl_coeff(3, 1, 1, 1);
    values.insert(a, &values[&a] + &Polynomial::one(ZZ));
    let broken = generate_relations(w, Arity::Ftl, RelOptions::default())
        .any(|rel| !rel.poly.substitute(&values).reduce_epsilon().is_zero());
    assert!(broken);
}

#[test]
fn two_valued_relations_vanish_on_the_elementary_law() {
    let w = DegreeWindow::new(-2, 0).unwrap();
    let opts = RelOptions { epsilon: EpsilonMode::Minus, invert2: false };
    let law = Polynomial::parse(ZZ, "2*(x+y)*t + (x-y)^2*t^2").unwrap();
    let values: FxHashMap<Var, Polynomial> = enumerate_coefficients(w, Arity::TwoFgl)
        .into_iter()
        .map(|v| {
            let (l, idx) = coefficient_index(v);
            let m = Monomial::from_pairs([(Var::t(), l as u32), (Var::x(), idx[0]), (Var::y(), idx[1])]);
            (v, Polynomial::constant(ZZ, law.coefficient(&m)))
        })
        .collect();
    for rel in generate_relations(w, Arity::TwoFgl, opts) {
        assert!(rel.poly.substitute(&values).is_zero(), "{}", rel.poly);
    }
}

#[test]
fn relation_grades_and_dump_format() {
    let w = DegreeWindow::new(-1, 0).unwrap();
    let gen = RelationGenerator::new(w, Arity::Ftl, RelOptions::default());
    for rel in gen.associativity_relations().into_iter().take(50) {
        assert!(!matches!(rel.grade(), Grading::Inhomogeneous), "{}", rel.poly);
        let dump = rel.dump();
        assert!(dump.starts_with("associativity:"), "{dump}");
        let text = dump.splitn(3, ':').nth(2).unwrap();
        assert_eq!(Polynomial::parse(ZZ, text).unwrap(), rel.poly);
    }
}

#[test]
fn windows_and_modes() {
    assert!(DegreeWindow::new(-5, 0).is_err());
    assert!(DegreeWindow::new(0, -1).is_err());
    assert_eq!(enumerate_coefficients(DegreeWindow::new(-4, 0).unwrap(), Arity::Ftl).len(), 24);
    assert_eq!("free".parse::<EpsilonMode>().unwrap(), EpsilonMode::Free);
    assert_eq!("+1".parse::<EpsilonMode>().unwrap(), EpsilonMode::Plus);
    assert!("2".parse::<EpsilonMode>().is_err());
}
