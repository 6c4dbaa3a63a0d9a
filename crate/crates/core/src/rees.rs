//! Rees quotients `S(W)` of the free monoid by the ideal of words that are
//! not factors of any word in `W`, and isoterm checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;
use crate::word::{Identity, Letter, Word};

pub const REES_CAP: usize = 4096;
/// Largest number of candidate words `is_isoterm` enumerates.
pub const ISOTERM_CANDIDATE_CAP: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesMonoid {
    pub base: FiniteMonoid,
    /// Word of each non-zero element; `None` only at `zero`.
    pub elem_words: Vec<Option<Word>>,
    pub zero: usize,
    pub source: Vec<Word>,
}

impl ReesMonoid {
    pub fn element_of(&self, u: &Word) -> usize {
        self.elem_words
            .iter()
            .position(|e| e.as_ref() == Some(u))
            .unwrap_or(self.zero)
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    /// Element id to word map, as printed next to table files.
    pub fn label_map(&self) -> Vec<(usize, String)> {
        (0..self.size()).map(|i| (i, self.base.label(i).to_string())).collect()
    }
}

/// Builds `S(W)`. Elements are the factors of `W` in shortlex order (the
/// empty word first, so element 0 is the identity) followed by the zero.
pub fn build_s(words: &[Word]) -> Result<ReesMonoid> {
    let mut factors: BTreeSet<Word> = BTreeSet::new();
    factors.insert(Word::empty());
    for u in words {
        factors.extend(u.factors());
        if factors.len() + 1 > REES_CAP {
            return Err(Error::Budget(format!("S(W) exceeds {REES_CAP} elements")));
        }
    }
    let elems: Vec<Word> = factors.into_iter().collect();
    let index: BTreeMap<&Word, usize> = elems.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let zero = elems.len();
    let size = zero + 1;
    let mut table = vec![zero; size * size];
    for (i, u) in elems.iter().enumerate() {
        for (j, v) in elems.iter().enumerate() {
            let uv = u.concat(v);
            if let Some(&k) = index.get(&uv) {
                table[i * size + j] = k;
            }
        }
    }
    let mut labels: Vec<String> = elems
        .iter()
        .map(|u| if u.is_empty() { "1".to_string() } else { u.to_string() })
        .collect();
    labels.push("0".into());
    let base = FiniteMonoid::new(size, table, 0, Some(labels))?;
    let mut elem_words: Vec<Option<Word>> = elems.into_iter().map(Some).collect();
    elem_words.push(None);
    Ok(ReesMonoid { base, elem_words, zero, source: words.to_vec() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsotermVerdict {
    /// No candidate up to the bound satisfies `w = w'`.
    IsotermUpTo { max_len: usize },
    /// Exact verdict from a criterion-specific argument.
    IsotermExact,
    NotIsoterm { partner: Word },
    /// Some candidates could not be decided and none refuted isotermness.
    Unknown { undecided: usize },
}

impl IsotermVerdict {
    pub fn is_isoterm(&self) -> Option<bool> {
        match self {
            IsotermVerdict::IsotermUpTo { .. } | IsotermVerdict::IsotermExact => Some(true),
            IsotermVerdict::NotIsoterm { .. } => Some(false),
            IsotermVerdict::Unknown { .. } => None,
        }
    }
}

/// Words over `alphabet` of length `<= max_len` in shortlex order.
pub fn words_up_to(alphabet: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for u in &layer {
            for &a in alphabet {
                let mut v = u.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Bounded isoterm test: looks for `w' != w` over `content(w)` with
/// `|w'| <= max_len` such that `sat(w = w')` holds. `sat` returns `None`
/// when it cannot decide.
pub fn is_isoterm<F>(w: &Word, sat: F, max_len: usize) -> Result<IsotermVerdict>
where
    F: Fn(&Identity) -> Option<bool>,
{
    if max_len < w.len() {
        return Err(Error::Precondition("max_len must be at least |w|".into()));
    }
    let alphabet: Vec<Letter> = w.content().into_iter().collect();
    let k = alphabet.len().max(1) as u128;
    let count: u128 = (0..=max_len as u32).map(|i| k.pow(i)).sum();
    if count > ISOTERM_CANDIDATE_CAP {
        return Err(Error::Budget(format!("{count} candidate words exceed the cap")));
    }
    let mut undecided = 0;
    for cand in words_up_to(&alphabet, max_len) {
        if &cand == w {
            continue;
        }
        match sat(&Identity::new(w.clone(), cand.clone())) {
            Some(true) => return Ok(IsotermVerdict::NotIsoterm { partner: cand }),
            Some(false) => {}
            None => undecided += 1,
        }
    }
    Ok(if undecided == 0 {
        IsotermVerdict::IsotermUpTo { max_len }
    } else {
        IsotermVerdict::Unknown { undecided }
    })
}

/// Exact isoterm test for varieties whose word problem only looks at simple
/// letters, multiple letters and the block positions of the first two
/// occurrences (or block contents). Under such criteria a multiple letter can
/// always be repeated once more next to its last occurrence without changing
/// any invariant, so exactly the words without multiple letters are isoterms.
pub fn is_isoterm_block_criterion<F>(w: &Word, criterion: F) -> IsotermVerdict
where
    F: Fn(&Identity) -> bool,
{
    let multiple = w.multiple();
    if let Some(&x) = multiple.iter().next() {
        let last = w.letters().iter().rposition(|&y| y == x).expect("x occurs");
        let mut v = w.letters().to_vec();
        v.insert(last + 1, x);
        let partner = Word(v);
        debug_assert!(criterion(&Identity::new(w.clone(), partner.clone())));
        return IsotermVerdict::NotIsoterm { partner };
    }
    IsotermVerdict::IsotermExact
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    /// `Some(true)` iff every word of `W` is an isoterm (so `S(W)` is a member).
    pub member: Option<bool>,
    pub per_word: Vec<(String, IsotermVerdict)>,
    pub note: &'static str,
}

/// `S(W)` belongs to a variety iff every word of `W` is an isoterm for it.
pub fn member_check_s<F>(words: &[Word], sat: F, max_len: usize) -> Result<MembershipReport>
where
    F: Fn(&Identity) -> Option<bool>,
{
    let mut per_word = Vec::new();
    let mut member = Some(true);
    for u in words {
        let v = is_isoterm(u, &sat, max_len.max(u.len()))?;
        match v.is_isoterm() {
            Some(false) => member = Some(false),
            None if member == Some(true) => member = None,
            _ => {}
        }
        per_word.push((u.to_string(), v));
    }
    Ok(MembershipReport {
        member,
        per_word,
        note: "S(W) is in V iff all words of W are isoterms for V; isoterm verdicts are bounded by max_len",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::SatOutcome;
    use crate::word::{ident, w};

    #[test]
    fn s_xyx_has_seven_elements() {
        let s = build_s(&[w("xyx")]).unwrap();
        assert_eq!(s.size(), 7);
        let labels: Vec<&str> = s.base.labels().iter().map(|l| l.as_str()).collect();
        assert_eq!(labels, ["1", "x", "y", "xy", "yx", "xyx", "0"]);
        assert!(s.base.validate().is_ok());
    }

    #[test]
    fn s_xzxyty_size() {
        let s = build_s(&[w("xzxyty")]).unwrap();
        // independent count: all (start, end) factor pairs, deduplicated by hand
        let word: Vec<char> = "xzxyty".chars().collect();
        let mut f: BTreeSet<String> = BTreeSet::new();
        for i in 0..=word.len() {
            for j in i..=word.len() {
                f.insert(word[i..j].iter().collect());
            }
        }
        assert_eq!(f.len(), 20);
        assert_eq!(s.size(), 21);
    }

    #[test]
    fn s_x_squares_to_zero() {
        let s = build_s(&[w("x")]).unwrap();
        assert_eq!(s.size(), 3);
        let x = s.element_of(&w("x"));
        assert_eq!(s.base.mul(x, x), s.zero);
    }

    #[test]
    fn evaluate_in_s_xyx() {
        let s = build_s(&[w("xyx")]).unwrap();
        let a = [(crate::word::letter('x'), s.element_of(&w("x"))), (crate::word::letter('y'), s.element_of(&w("y")))]
            .into_iter()
            .collect();
        assert_eq!(s.base.evaluate(&w("xyx"), &a).unwrap(), s.element_of(&w("xyx")));
        assert_eq!(s.base.evaluate(&w("x^2"), &a).unwrap(), s.zero);
    }

    #[test]
    fn s_xyx_identities() {
        let s = build_s(&[w("xyx")]).unwrap();
        assert_eq!(s.base.satisfies(&ident("x^2 = x^3")), SatOutcome::Holds);
        match s.base.satisfies(&ident("xy = yx")) {
            SatOutcome::Fails(a) => {
                let l = s.base.evaluate(&w("xy"), &a).unwrap();
                let r = s.base.evaluate(&w("yx"), &a).unwrap();
                assert_ne!(l, r);
            }
            other => panic!("expected failure, got {other:?}"),
        }
        assert_eq!(s.base.satisfies(&ident("xyx = xyx")), SatOutcome::Holds);
        assert!(s.base.is_aperiodic());
        assert!(s.base.idempotents_commute());
        assert_eq!(s.base.idempotents(), vec![0, s.zero]);
    }

    #[test]
    fn isoterm_self_membership() {
        let s = build_s(&[w("xyx")]).unwrap();
        let sat = |id: &Identity| s.base.satisfies(id).holds();
        let v = is_isoterm(&w("xyx"), sat, 5).unwrap();
        assert_eq!(v, IsotermVerdict::IsotermUpTo { max_len: 5 });
        let r = member_check_s(&[w("xyx")], sat, 5).unwrap();
        assert_eq!(r.member, Some(true));
    }

    #[test]
    fn isoterm_semilattice() {
        let sl = FiniteMonoid::semilattice2();
        let sat = |id: &Identity| sl.satisfies(id).holds();
        let v = is_isoterm(&w("x"), sat, 3).unwrap();
        assert!(matches!(v, IsotermVerdict::NotIsoterm { .. }));
        assert_eq!(member_check_s(&[w("x")], sat, 3).unwrap().member, Some(false));
        assert!(is_isoterm(&w("xyx"), sat, 2).is_err());
    }
}
