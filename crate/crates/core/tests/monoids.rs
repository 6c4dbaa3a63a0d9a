use monoid_varieties::rees::build_s;
use monoid_varieties::{ident, letter, FiniteMonoid, Identity, SatOutcome, Word};
use proptest::prelude::*;

fn word_over(alpha: &'static str, min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(alpha.chars().collect::<Vec<_>>()), min..=max)
        .prop_map(|cs| Word(cs.into_iter().map(letter).collect()))
}

fn holds(m: &FiniteMonoid, id: &Identity) -> bool {
    m.satisfies(id).holds().expect("within budget")
}

const PROBES: [&str; 6] = ["xy = yx", "x^2 = x^3", "xyx = xyx^2", "xxy = xxyx", "xyzxy = yxzxy", "x^2y^2 = y^2x^2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_monoid_satisfies_dual_identities(ws in prop::collection::vec(word_over("xy", 1, 4), 1..=2), k in 0usize..PROBES.len()) {
        let s = build_s(&ws).unwrap().base;
        let id = ident(PROBES[k]);
        prop_assert_eq!(holds(&s, &id), holds(&s.dual_monoid(), &id.dual()));
    }

    #[test]
    fn rees_table_roundtrip(ws in prop::collection::vec(word_over("xyz", 1, 4), 1..=2)) {
        let s = build_s(&ws).unwrap().base;
        let back = FiniteMonoid::from_table_text(&s.to_table_text()).unwrap();
        prop_assert_eq!(back.table(), s.table());
        prop_assert_eq!(back.identity(), s.identity());
    }

    #[test]
    fn failing_assignment_is_genuine(ws in prop::collection::vec(word_over("xy", 1, 4), 1..=2), k in 0usize..PROBES.len()) {
        let s = build_s(&ws).unwrap().base;
        let id = ident(PROBES[k]);
        if let SatOutcome::Fails(a) = s.satisfies(&id) {
            prop_assert_ne!(s.evaluate(&id.lhs, &a).unwrap(), s.evaluate(&id.rhs, &a).unwrap());
        }
    }
}

#[test]
fn products_satisfy_common_identities() {
    let p = FiniteMonoid::semilattice2().direct_product(&FiniteMonoid::nilpotent_cyclic(3)).unwrap();
    assert!(p.validate().is_ok());
    assert!(holds(&p, &ident("xy = yx")));
    assert!(holds(&p, &ident("x^3 = x^4")));
    assert!(!holds(&p, &ident("x^2 = x^3")));
}

#[test]
fn small_monoids_classify() {
    assert!(!FiniteMonoid::z2().is_aperiodic());
    assert!(FiniteMonoid::left_zero_with_one().is_aperiodic());
    assert!(!holds(&FiniteMonoid::left_zero_with_one(), &ident("xy = yx")));
    assert!(holds(&FiniteMonoid::semilattice2(), &ident("x = x^2")));
}
