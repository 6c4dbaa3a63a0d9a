use std::collections::BTreeSet;

use monoid_varieties::{letter, parse_word, Identity, Letter, Word};
use proptest::prelude::*;

fn word_over(alpha: &'static str, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(alpha.chars().collect::<Vec<_>>()), 0..=max)
        .prop_map(|cs| Word(cs.into_iter().map(letter).collect()))
}

proptest! {
    #[test]
    fn display_parses_back(u in word_over("xyzt", 10)) {
        prop_assert_eq!(parse_word(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn reverse_is_an_involution(u in word_over("xyz", 10)) {
        prop_assert_eq!(u.reverse().reverse(), u.clone());
        prop_assert_eq!(u.reverse().counts(), u.counts());
    }

    #[test]
    fn counts_sum_to_length(u in word_over("xyzt", 12)) {
        prop_assert_eq!(u.counts().values().sum::<usize>(), u.len());
    }

    #[test]
    fn decomposition_reassembles(u in word_over("xyzt", 10)) {
        let d = u.decompose();
        prop_assert_eq!(d.blocks.len(), d.dividers.len() + 1);
        let mut back = d.blocks[0].clone();
        for (t, b) in d.dividers.iter().zip(&d.blocks[1..]) {
            back.push(*t);
            back.extend(b);
        }
        prop_assert_eq!(back, u.clone());
        let simple: BTreeSet<Letter> = d.dividers.iter().copied().collect();
        prop_assert_eq!(simple, u.simple());
    }

    #[test]
    fn restrict_and_delete_partition(u in word_over("xyzt", 10)) {
        let keep: BTreeSet<Letter> = [letter('x'), letter('y')].into();
        prop_assert_eq!(u.restrict(&keep).len() + u.delete(&keep).len(), u.len());
    }

    #[test]
    fn limited_and_free_are_monotone(u in word_over("xy", 10), n in 1usize..5) {
        if u.is_n_limited(n) {
            prop_assert!(u.is_n_limited(n + 1));
        }
        if u.is_i_free(n + 1).unwrap() {
            prop_assert!(u.is_i_free(n + 2).unwrap());
        }
    }

    #[test]
    fn dual_identity_is_an_involution(u in word_over("xyz", 8), v in word_over("xyz", 8)) {
        let id = Identity::new(u, v);
        prop_assert_eq!(id.dual().dual(), id.clone());
        prop_assert_eq!(id.swap().swap(), id);
    }
}

#[test]
fn factors_include_empty_and_whole() {
    let u = parse_word("xyx").unwrap();
    let f = u.factors();
    assert!(f.contains(&Word::empty()) && f.contains(&u));
    assert_eq!(f.len(), 6);
}
