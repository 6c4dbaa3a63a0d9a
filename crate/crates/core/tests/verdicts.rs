use monoid_varieties::catalog::{Catalog, CatalogBudget, Truth};
use monoid_varieties::oracle::{word_problem_f, word_problem_q};
use monoid_varieties::rees::words_up_to;
use monoid_varieties::{letter, Identity};

fn sample() -> Vec<Identity> {
    let words = words_up_to(&[letter('x'), letter('y')], 4);
    let mut out = Vec::new();
    for (i, u) in words.iter().enumerate() {
        for v in words[i + 1..].iter().step_by(5) {
            out.push(Identity::new(u.clone(), v.clone()));
        }
    }
    out
}

#[test]
fn dual_varieties_give_dual_verdicts() {
    let cat = Catalog::builtin();
    let budget = CatalogBudget::default();
    for (v, d) in [("F", "~F"), ("Q", "~Q"), ("K", "~K"), ("E", "~E")] {
        for id in sample() {
            let a = cat.satisfies(v, &id, &budget).unwrap().value;
            let b = cat.satisfies(d, &id.dual(), &budget).unwrap().value;
            assert_eq!(a, b, "{v} vs {d} on {id}");
        }
    }
}

#[test]
fn exact_routes_match_criteria() {
    let cat = Catalog::builtin();
    let budget = CatalogBudget::default();
    for id in sample() {
        assert_eq!(cat.satisfies("F", &id, &budget).unwrap().value, Truth::from_bool(word_problem_f(&id)));
        assert_eq!(cat.satisfies("Q", &id, &budget).unwrap().value, Truth::from_bool(word_problem_q(&id)));
    }
}

#[test]
fn superset_verdicts_are_consistent() {
    // F lies in K, and both F and Q lie in P.
    let cat = Catalog::builtin();
    let budget = CatalogBudget::default();
    for id in sample() {
        if cat.satisfies("K", &id, &budget).unwrap().value == Truth::True {
            assert!(word_problem_f(&id), "K proves {id} but F violates it");
        }
        if cat.satisfies("P", &id, &budget).unwrap().value == Truth::True {
            assert!(word_problem_f(&id) && word_problem_q(&id), "P proves {id}");
        }
    }
}

#[test]
fn inclusion_is_reflexive() {
    let cat = Catalog::builtin();
    let budget = CatalogBudget::default();
    for v in ["SL", "C", "F", "Q", "K", "P"] {
        assert_eq!(cat.includes(v, v, &budget).unwrap().value, Truth::True, "{v}");
    }
}

#[test]
fn generator_only_varieties_have_recorded_baselines() {
    let cat = Catalog::builtin();
    let budget = CatalogBudget::default();
    let s = monoid_varieties::rees::build_s(&[monoid_varieties::w("xzxyty")]).unwrap();
    assert_eq!(s.size(), 21);
    let alpha1 = monoid_varieties::ident("xybxcy = yxbxcy");
    assert_eq!(cat.satisfies("M", &alpha1, &budget).unwrap().value, Truth::True);
    // S(xzxyty) violates xtxyzy = xtyxzy, so it does not lie in O
    assert_eq!(cat.includes("M", "O", &budget).unwrap().value, Truth::False);
}
