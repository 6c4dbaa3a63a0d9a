//! Bounded congruence closure and exact word-problem criteria.
//!
//! The closure approximates a relatively free monoid: all words of length
//! at most `L` over `k` generators, merged along single rewriting steps that
//! stay within the bound. Equal classes certify derivability; distinct
//! classes prove nothing, so the oracle only ever answers "holds" or
//! "unknown".

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::derive::Rules;
use crate::error::{Error, Result};
use crate::rees::words_up_to;
use crate::system::IdentitySystem;
use crate::word::{letter, Identity, Letter, Word};

/// Largest number of words `saturate` will enumerate.
pub const SATURATE_CAP: u128 = 10_000_000;

/// Generator letters used by the closure, in order.
pub const GENERATORS: &str = "xyztuvwabcdefghijklmnopqrs";

pub fn generators(k: usize) -> Result<Vec<Letter>> {
    if k > GENERATORS.len() {
        return Err(Error::Dimension(format!("at most {} generators", GENERATORS.len())));
    }
    Ok(GENERATORS.chars().take(k).map(letter).collect())
}

#[derive(Debug, Clone)]
pub struct BoundedCongruence {
    pub k: usize,
    pub len: usize,
    alphabet: Vec<Letter>,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    parent: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleVerdict {
    Holds,
    Unknown,
}

impl BoundedCongruence {
    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn find_mut(&mut self, i: usize) -> usize {
        let root = self.find(i);
        let mut j = i;
        while self.parent[j] != root {
            let next = self.parent[j];
            self.parent[j] = root;
            j = next;
        }
        root
    }

    /// Unions two classes keeping the smaller index (= shortlex-least word)
    /// as root. Returns whether anything changed.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find_mut(a), self.find_mut(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    /// Canonical representative (shortest, then lexicographically least).
    pub fn representative(&self, u: &Word) -> Option<&Word> {
        self.index.get(u).map(|&i| &self.words[self.find(i)])
    }

    pub fn same_class(&self, u: &Word, v: &Word) -> Option<bool> {
        let (&i, &j) = (self.index.get(u)?, self.index.get(v)?);
        Some(self.find(i) == self.find(j))
    }

    /// All classes, each sorted, ordered by representative.
    pub fn classes(&self) -> Vec<Vec<Word>> {
        let mut by_root: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
        for (i, u) in self.words.iter().enumerate() {
            by_root.entry(self.find(i)).or_default().push(u.clone());
        }
        by_root.into_values().collect()
    }

    pub fn class_of(&self, u: &Word) -> Option<Vec<Word>> {
        let r = self.find(*self.index.get(u)?);
        Some(
            self.words
                .iter()
                .enumerate()
                .filter(|(i, _)| self.find(*i) == r)
                .map(|(_, w)| w.clone())
                .collect(),
        )
    }

    pub fn num_classes(&self) -> usize {
        (0..self.words.len()).filter(|&i| self.find(i) == i).count()
    }

    /// Renames the identity's letters onto the generators (first occurrence
    /// order) and compares classes.
    pub fn holds(&self, id: &Identity) -> Result<OracleVerdict> {
        let content = id.content();
        if content.len() > self.k {
            return Err(Error::Precondition(format!(
                "identity uses {} letters, closure has {}",
                content.len(),
                self.k
            )));
        }
        if id.lhs.len() > self.len || id.rhs.len() > self.len {
            return Err(Error::Precondition(format!("sides longer than the bound {}", self.len)));
        }
        let mut map: BTreeMap<Letter, Letter> = BTreeMap::new();
        let inside = content.iter().all(|x| self.alphabet.contains(x));
        if !inside {
            for x in id.lhs.letters().iter().chain(id.rhs.letters()) {
                if !map.contains_key(x) {
                    map.insert(*x, self.alphabet[map.len()]);
                }
            }
        }
        let r = id.rename(&map);
        Ok(if self.same_class(&r.lhs, &r.rhs) == Some(true) {
            OracleVerdict::Holds
        } else {
            OracleVerdict::Unknown
        })
    }
}

/// Union-find closure of one-step rewriting on words of length `<= len`
/// over `k` generators. Passes repeat until no union happens.
pub fn saturate(sys: &IdentitySystem, k: usize, len: usize) -> Result<BoundedCongruence> {
    let kk = k as u128;
    let count: u128 = (0..=len as u32).map(|i| kk.pow(i)).sum();
    if count > SATURATE_CAP {
        return Err(Error::Budget(format!("{count} words exceed the saturation cap")));
    }
    let alphabet = generators(k)?;
    let words = words_up_to(&alphabet, len);
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let parent = (0..words.len()).collect();
    let mut bc = BoundedCongruence { k, len, alphabet, words, index, parent };
    let rules = Rules::new(sys);
    let alpha: BTreeSet<Letter> = bc.alphabet.iter().copied().collect();
    let edges: Vec<(usize, usize)> = {
        let mut e = Vec::new();
        for (i, u) in bc.words.iter().enumerate() {
            for v in rules.neighbors(u, len, &alpha).into_keys() {
                if let Some(&j) = bc.index.get(&v) {
                    e.push((i, j));
                }
            }
        }
        e
    };
    // The neighbour relation does not depend on the partition, so the
    // second pass only confirms the fixpoint.
    loop {
        let mut changed = false;
        for &(i, j) in &edges {
            changed |= bc.union(i, j);
        }
        if !changed {
            break;
        }
    }
    Ok(bc)
}

pub fn oracle_holds(bc: &BoundedCongruence, id: &Identity) -> Result<OracleVerdict> {
    bc.holds(id)
}

/// Exact criterion for F: equal simple and multiple sets, equal divider
/// sequences, and equal `h1`, `h2` dividers for every letter.
pub fn word_problem_f(id: &Identity) -> bool {
    if id.is_trivial() {
        return true;
    }
    let (u, v) = (&id.lhs, &id.rhs);
    let (su, mu) = u.letter_classes();
    let (sv, mv) = v.letter_classes();
    if su != sv || mu != mv {
        return false;
    }
    if u.decompose().dividers != v.decompose().dividers {
        return false;
    }
    u.content().into_iter().all(|x| {
        let depth = if mu.contains(&x) { 2 } else { 1 };
        (1..=depth).all(|i| u.h_divider(x, i).ok() == v.h_divider(x, i).ok())
    })
}

/// Why [`word_problem_f`] rejects an identity, for reports.
pub fn explain_f(id: &Identity) -> String {
    if word_problem_f(id) {
        return "F-criterion: all invariants agree".into();
    }
    let (u, v) = (&id.lhs, &id.rhs);
    if u.letter_classes() != v.letter_classes() {
        return "F-criterion: simple/multiple letter sets differ".into();
    }
    if u.decompose().dividers != v.decompose().dividers {
        return "F-criterion: divider sequences differ".into();
    }
    for x in u.multiple() {
        for i in 1..=2 {
            if u.h_divider(x, i).ok() != v.h_divider(x, i).ok() {
                return format!("F-criterion: h{i} of {x} differs");
            }
        }
    }
    "F-criterion: mismatch".into()
}

/// Exact criterion for Q: equal divider sequences and equal block contents.
pub fn word_problem_q(id: &Identity) -> bool {
    explain_q(id).0
}

pub fn explain_q(id: &Identity) -> (bool, String) {
    if id.is_trivial() {
        return (true, "Q-criterion: trivial identity".into());
    }
    let (du, dv) = (id.lhs.decompose(), id.rhs.decompose());
    if du.dividers != dv.dividers {
        return (false, "Q-criterion: divider sequences differ".into());
    }
    for (i, (a, b)) in du.blocks.iter().zip(&dv.blocks).enumerate() {
        if a.content() != b.content() {
            return (false, format!("Q-criterion: block content mismatch in block {i}"));
        }
    }
    (true, "Q-criterion: block contents agree".into())
}

/// Exact criterion for `var{x^n = x^(n+1), xy = yx}`: per-letter counts are
/// equal or both at least `n`.
pub fn word_problem_commutative_aperiodic(id: &Identity, n: usize) -> bool {
    let (cu, cv) = (id.lhs.counts(), id.rhs.counts());
    id.content().into_iter().all(|x| {
        let a = cu.get(&x).copied().unwrap_or(0);
        let b = cv.get(&x).copied().unwrap_or(0);
        a == b || (a >= n && b >= n)
    })
}

/// Exact criterion for semilattice monoids: equal content.
pub fn word_problem_sl(id: &Identity) -> bool {
    id.lhs.content() == id.rhs.content()
}
