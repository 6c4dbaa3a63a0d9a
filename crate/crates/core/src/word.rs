//! Words over a small alphabet and their combinatorics: content, simple and
//! multiple letters, decompositions into dividers and blocks, and the
//! structural predicates used throughout the catalog.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: usize = 1 << 16;

/// A letter. Ids `0..26` print as `a..z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u8);

impl Letter {
    pub fn from_char(c: char) -> Option<Letter> {
        if c.is_ascii_lowercase() {
            Some(Letter(c as u8 - b'a'))
        } else {
            None
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 26 {
            write!(f, "{}", (b'a' + self.0) as char)
        } else {
            write!(f, "#{}", self.0)
        }
    }
}

/// Shorthand for a letter given by its character. Panics on non `a..z`.
pub fn letter(c: char) -> Letter {
    Letter::from_char(c).unwrap_or_else(|| panic!("not a letter: {c:?}"))
}

/// A finite word; the empty word is the identity of the free monoid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: shorter words first, then lexicographic by letter id.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        Word(letters.into_iter().collect())
    }

    /// `x^k` for a single letter.
    pub fn power(x: Letter, k: usize) -> Word {
        Word(vec![x; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn extend(&mut self, w: &Word) {
        self.0.extend_from_slice(&w.0);
    }

    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    pub fn occurrences(&self, x: Letter) -> usize {
        self.0.iter().filter(|&&y| y == x).count()
    }

    /// Occurrence counts of every letter in the word.
    pub fn counts(&self) -> BTreeMap<Letter, usize> {
        let mut m = BTreeMap::new();
        for &x in &self.0 {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }

    /// `(simple, multiple)`: letters occurring once, and at least twice.
    pub fn letter_classes(&self) -> (BTreeSet<Letter>, BTreeSet<Letter>) {
        let mut simple = BTreeSet::new();
        let mut multiple = BTreeSet::new();
        for (x, c) in self.counts() {
            if c == 1 {
                simple.insert(x);
            } else {
                multiple.insert(x);
            }
        }
        (simple, multiple)
    }

    pub fn simple(&self) -> BTreeSet<Letter> {
        self.letter_classes().0
    }

    pub fn multiple(&self) -> BTreeSet<Letter> {
        self.letter_classes().1
    }

    /// Subsequence keeping only the letters in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Letter>) -> Word {
        Word(self.0.iter().copied().filter(|x| keep.contains(x)).collect())
    }

    /// Subsequence with every letter of `drop` removed.
    pub fn delete(&self, drop: &BTreeSet<Letter>) -> Word {
        Word(self.0.iter().copied().filter(|x| !drop.contains(x)).collect())
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Image under the endomorphism `map`; letters outside the map are fixed.
    pub fn substitute(&self, map: &BTreeMap<Letter, Word>) -> Word {
        let mut out = Vec::new();
        for x in &self.0 {
            match map.get(x) {
                Some(w) => out.extend_from_slice(&w.0),
                None => out.push(*x),
            }
        }
        Word(out)
    }

    /// Renames letters by an injective map (letters outside the map are fixed).
    pub fn rename(&self, map: &BTreeMap<Letter, Letter>) -> Word {
        Word(self.0.iter().map(|x| *map.get(x).unwrap_or(x)).collect())
    }

    pub fn decompose(&self) -> Decomposition {
        let simple = self.simple();
        let mut dividers = Vec::new();
        let mut blocks = vec![Word::empty()];
        for &x in &self.0 {
            if simple.contains(&x) {
                dividers.push(x);
                blocks.push(Word::empty());
            } else {
                blocks.last_mut().expect("non-empty").push(x);
            }
        }
        Decomposition { dividers, blocks }
    }

    /// Index (into the divider sequence, 0 = sentinel) of the right-most
    /// divider strictly preceding the `i`-th occurrence of `x` (1-based).
    pub fn h_divider(&self, x: Letter, i: usize) -> Result<usize> {
        if i == 0 {
            return Err(Error::Precondition("occurrence index starts at 1".into()));
        }
        let simple = self.simple();
        let mut divider = 0usize;
        let mut seen = 0usize;
        for &y in &self.0 {
            if y == x {
                seen += 1;
                if seen == i {
                    return Ok(divider);
                }
            }
            if simple.contains(&y) {
                divider += 1;
            }
        }
        Err(Error::Precondition(format!(
            "letter {x} occurs {seen} times in {self}, asked for occurrence {i}"
        )))
    }

    /// Multiple letters whose first and second occurrences lie in different blocks.
    pub fn one_dividers(&self) -> BTreeSet<Letter> {
        self.multiple()
            .into_iter()
            .filter(|&x| self.h_divider(x, 1).ok() != self.h_divider(x, 2).ok())
            .collect()
    }

    pub fn is_n_limited(&self, n: usize) -> bool {
        self.counts().values().all(|&c| c <= n)
    }

    /// True iff no non-empty factor occurs `i` times consecutively.
    pub fn is_i_free(&self, i: usize) -> Result<bool> {
        if i < 2 {
            return Err(Error::Precondition("i-freeness needs i >= 2".into()));
        }
        let w = &self.0;
        let n = w.len();
        for period in 1..=n / i {
            let span = period * i;
            for start in 0..=n - span {
                if (start + period..start + span).all(|k| w[k] == w[k - period]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every ordered pair of distinct letters occurs as a factor at most
    /// once, and never together with its reverse.
    pub fn unique_2gram_check(&self) -> bool {
        let mut seen: BTreeSet<(Letter, Letter)> = BTreeSet::new();
        for pair in self.0.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue;
            }
            if !seen.insert((a, b)) || seen.contains(&(b, a)) {
                return false;
            }
        }
        true
    }

    /// All distinct factors (contiguous subwords), including the empty word.
    pub fn factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for s in 0..self.len() {
            for e in s + 1..=self.len() {
                out.insert(self.factor(s, e));
            }
        }
        out
    }

    /// Plain letter sequence without exponent compression.
    pub fn expanded(&self) -> String {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for Word {
    /// Runs of a letter print as `x^k`; the empty word prints as nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.0.len() {
            let x = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == x {
                j += 1;
            }
            if j - i == 1 {
                write!(f, "{x}")?;
            } else {
                write!(f, "{x}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

/// Parses `(letter ('^' exponent)?)*` with letters `a..z`. Whitespace between
/// tokens is ignored.
pub fn parse_word(text: &str) -> Result<Word> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let Some(x) = Letter::from_char(c) else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        };
        i += 1;
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        let mut k = 1usize;
        if i < chars.len() && chars[i] == '^' {
            let caret = i;
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(Error::Syntax { pos: caret, msg: "missing exponent after '^'".into() });
            }
            let digits: String = chars[start..i].iter().collect();
            if digits.starts_with('0') {
                return Err(Error::Syntax { pos: start, msg: "exponent must start with 1-9".into() });
            }
            k = digits
                .parse::<usize>()
                .ok()
                .filter(|&k| k <= MAX_EXPONENT)
                .ok_or_else(|| Error::Syntax {
                    pos: start,
                    msg: format!("exponent exceeds {MAX_EXPONENT}"),
                })?;
        }
        out.extend(std::iter::repeat_n(x, k));
    }
    Ok(Word(out))
}

/// Parses a word, panicking on bad input. For literals in code and tests.
pub fn w(text: &str) -> Word {
    parse_word(text).unwrap_or_else(|e| panic!("bad word literal {text:?}: {e}"))
}

/// A word split as `t0 w0 t1 w1 ... tm wm` where `t0` is the empty sentinel,
/// `t1..tm` are the simple letters in order and the blocks hold the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `t1..tm`; the sentinel `t0` is implicit and has index 0.
    pub dividers: Vec<Letter>,
    pub blocks: Vec<Word>,
}

impl Decomposition {
    pub fn interleave(&self) -> Word {
        let mut out = self.blocks[0].clone();
        for (t, b) in self.dividers.iter().zip(&self.blocks[1..]) {
            out.push(*t);
            out.extend(b);
        }
        out
    }

    pub fn m(&self) -> usize {
        self.dividers.len()
    }
}

/// An identity `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Identity {
        Identity { lhs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.content());
        c
    }

    pub fn swap(&self) -> Identity {
        Identity::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn dual(&self) -> Identity {
        Identity::new(self.lhs.reverse(), self.rhs.reverse())
    }

    pub fn rename(&self, map: &BTreeMap<Letter, Letter>) -> Identity {
        Identity::new(self.lhs.rename(map), self.rhs.rename(map))
    }

    pub fn substitute(&self, map: &BTreeMap<Letter, Word>) -> Identity {
        Identity::new(self.lhs.substitute(map), self.rhs.substitute(map))
    }

    /// Renames letters to `a, b, c, ...` in order of first occurrence
    /// (left side first).
    pub fn canonical(&self) -> Identity {
        let mut map = BTreeMap::new();
        for x in self.lhs.0.iter().chain(&self.rhs.0) {
            let next = Letter(map.len() as u8);
            map.entry(*x).or_insert(next);
        }
        self.rename(&map)
    }

    /// Multiplies both sides by `left` and `right`.
    pub fn in_context(&self, left: &Word, right: &Word) -> Identity {
        Identity::new(
            left.concat(&self.lhs).concat(right),
            left.concat(&self.rhs).concat(right),
        )
    }

    /// Dividers shared by both sides: letters simple on both sides whose
    /// relative order to every other such letter agrees across the sides.
    pub fn shared_dividers(&self) -> Result<Vec<Letter>> {
        let (su, mu) = self.lhs.letter_classes();
        let (sv, mv) = self.rhs.letter_classes();
        if su != sv || mu != mv {
            return Err(Error::Shape(format!(
                "sides disagree on simple/multiple letters: {} vs {}",
                self.lhs, self.rhs
            )));
        }
        let pos = |w: &Word, x: Letter| w.0.iter().position(|&y| y == x).expect("occurs");
        let order: Vec<Letter> = self.lhs.0.iter().copied().filter(|x| su.contains(x)).collect();
        Ok(order
            .iter()
            .copied()
            .filter(|&t| {
                su.iter().all(|&s| {
                    s == t || (pos(&self.lhs, s) < pos(&self.lhs, t)) == (pos(&self.rhs, s) < pos(&self.rhs, t))
                })
            })
            .collect())
    }

    /// Splits both sides at the shared dividers.
    pub fn aligned_blocks(&self) -> Result<(Vec<Letter>, Vec<Word>, Vec<Word>)> {
        let dividers = self.shared_dividers()?;
        let split = |w: &Word| {
            let mut blocks = vec![Word::empty()];
            for &x in &w.0 {
                if dividers.contains(&x) {
                    blocks.push(Word::empty());
                } else {
                    blocks.last_mut().expect("non-empty").push(x);
                }
            }
            blocks
        };
        let (bu, bv) = (split(&self.lhs), split(&self.rhs));
        Ok((dividers, bu, bv))
    }

    /// Block-aligned efficiency: no aligned pair of blocks is `(empty, empty)`.
    pub fn is_efficient(&self) -> Result<bool> {
        let (_, bu, bv) = self.aligned_blocks()?;
        Ok(bu.iter().zip(&bv).all(|(a, b)| !(a.is_empty() && b.is_empty())))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Identity> {
        parse_identity(s)
    }
}

/// Parses `<word> = <word>`; `≈` is accepted in place of `=`.
pub fn parse_identity(text: &str) -> Result<Identity> {
    let normalized = text.replace('≈', "=");
    let mut parts = normalized.splitn(2, '=');
    let lhs = parts.next().unwrap_or("");
    let Some(rhs) = parts.next() else {
        return Err(Error::Syntax { pos: text.len(), msg: "expected `=`".into() });
    };
    if let Some(p) = rhs.find('=') {
        return Err(Error::Syntax { pos: lhs.len() + 1 + p, msg: "more than one `=`".into() });
    }
    let l = parse_word(lhs)?;
    let r = parse_word(rhs).map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + lhs.chars().count() + 1, msg },
        other => other,
    })?;
    Ok(Identity::new(l, r))
}

/// Parses an identity, panicking on bad input.
pub fn ident(text: &str) -> Identity {
    parse_identity(text).unwrap_or_else(|e| panic!("bad identity literal {text:?}: {e}"))
}
