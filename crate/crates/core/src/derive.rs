//! Elementary deductions and bounded derivation search.
//!
//! A step replaces an occurrence `a ξ(s) b` by `a ξ(t) b` for a member
//! `s = t` of the system (either direction) and an endomorphism `ξ`.
//! Search is breadth-first on step count with frontiers expanded in shortlex
//! order, so traces are reproducible.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{compact, IdentitySystem};
use crate::word::{parse_identity, parse_word, Identity, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// lhs to rhs
    Forward,
    /// rhs to lhs
    Backward,
}

impl Direction {
    fn token(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub name: String,
    pub identity: Identity,
    pub direction: Direction,
    pub left: Word,
    pub right: Word,
    pub xi: BTreeMap<Letter, Word>,
}

impl RewriteStep {
    fn sides(&self) -> (&Word, &Word) {
        match self.direction {
            Direction::Forward => (&self.identity.lhs, &self.identity.rhs),
            Direction::Backward => (&self.identity.rhs, &self.identity.lhs),
        }
    }

    pub fn source(&self) -> Word {
        self.left.concat(&self.sides().0.substitute(&self.xi)).concat(&self.right)
    }

    pub fn target(&self) -> Word {
        self.left.concat(&self.sides().1.substitute(&self.xi)).concat(&self.right)
    }

    pub fn to_line(&self) -> String {
        let xi: Vec<String> = self.xi.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        format!(
            "{} {} a={} b={} xi={{{}}}",
            self.direction.token(),
            self.name,
            self.left,
            self.right,
            xi.join(",")
        )
    }
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Applies `step` to `source`, checking that `source = a ξ(side) b`.
pub fn apply_step(source: &Word, step: &RewriteStep) -> Result<Word> {
    let expected = step.source();
    if &expected != source {
        return Err(Error::Precondition(format!(
            "step {} does not match {source}: context and substitution give {expected}",
            step.name
        )));
    }
    Ok(step.target())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub start: Word,
    pub steps: Vec<RewriteStep>,
}

impl DerivationTrace {
    pub fn end(&self) -> Word {
        self.steps.last().map(|s| s.target()).unwrap_or_else(|| self.start.clone())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Line format: `start <word>` followed by one step per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("start {}\n", self.start);
        for st in &self.steps {
            s.push_str(&st.to_line());
            s.push('\n');
        }
        s
    }

    /// Parses [`DerivationTrace::to_text`] output. Identity names are
    /// resolved against `sys`, falling back to the `lhs=rhs` text form.
    pub fn from_text(text: &str, sys: &IdentitySystem) -> Result<DerivationTrace> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| Error::Syntax { pos: 0, msg: "empty trace".into() })?;
        let start = first
            .trim()
            .strip_prefix("start")
            .ok_or_else(|| Error::Syntax { pos: 0, msg: "expected `start <word>`".into() })?;
        let start = parse_word(start)?;
        let mut steps = Vec::new();
        for (i, line) in lines.enumerate() {
            steps.push(parse_step(line.trim(), sys).map_err(|e| Error::Step { index: i, msg: e.to_string() })?);
        }
        Ok(DerivationTrace { start, steps })
    }

    /// The same derivation read backwards.
    pub fn reversed(&self) -> DerivationTrace {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| RewriteStep {
                direction: match s.direction {
                    Direction::Forward => Direction::Backward,
                    Direction::Backward => Direction::Forward,
                },
                ..s.clone()
            })
            .collect();
        DerivationTrace { start: self.end(), steps }
    }

    /// Concatenates two traces; `other` must start where `self` ends.
    pub fn then(mut self, other: DerivationTrace) -> Result<DerivationTrace> {
        if self.end() != other.start {
            return Err(Error::Precondition("traces do not chain".into()));
        }
        self.steps.extend(other.steps);
        Ok(self)
    }

    /// Wraps every step in an extra left and right context.
    pub fn in_context(&self, left: &Word, right: &Word) -> DerivationTrace {
        DerivationTrace {
            start: left.concat(&self.start).concat(right),
            steps: self
                .steps
                .iter()
                .map(|s| RewriteStep {
                    left: left.concat(&s.left),
                    right: s.right.concat(right),
                    ..s.clone()
                })
                .collect(),
        }
    }
}

fn parse_step(line: &str, sys: &IdentitySystem) -> Result<RewriteStep> {
    let bad = |msg: &str| Error::Syntax { pos: 0, msg: msg.to_string() };
    let mut parts = line.split_whitespace();
    let direction = match parts.next() {
        Some("fwd") => Direction::Forward,
        Some("bwd") => Direction::Backward,
        _ => return Err(bad("direction must be fwd or bwd")),
    };
    let name = parts.next().ok_or_else(|| bad("missing identity"))?.to_string();
    let identity = match sys.lookup(&name) {
        Some(id) => id,
        None => parse_identity(&name).map_err(|_| Error::UnknownName(name.clone()))?,
    };
    let mut left = None;
    let mut right = None;
    let mut xi = BTreeMap::new();
    for p in parts {
        if let Some(v) = p.strip_prefix("a=") {
            left = Some(parse_word(v)?);
        } else if let Some(v) = p.strip_prefix("b=") {
            right = Some(parse_word(v)?);
        } else if let Some(v) = p.strip_prefix("xi=") {
            let inner = v
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| bad("xi must be {..}"))?;
            for pair in inner.split(',').filter(|s| !s.is_empty()) {
                let (k, val) = pair.split_once(':').ok_or_else(|| bad("xi entries are x:word"))?;
                let kw = parse_word(k)?;
                if kw.len() != 1 {
                    return Err(bad("xi keys are single letters"));
                }
                xi.insert(kw.letters()[0], parse_word(val)?);
            }
        } else {
            return Err(bad("unexpected field"));
        }
    }
    Ok(RewriteStep {
        name,
        identity,
        direction,
        left: left.ok_or_else(|| bad("missing a="))?,
        right: right.ok_or_else(|| bad("missing b="))?,
        xi,
    })
}

/// Replays a trace: every step must use a member of `sys` (by name, with the
/// stored identity equal to the member) and steps must chain.
pub fn verify_trace(tr: &DerivationTrace, sys: &IdentitySystem) -> Result<Word> {
    let mut cur = tr.start.clone();
    for (index, step) in tr.steps.iter().enumerate() {
        let member = sys
            .lookup(&step.name)
            .ok_or_else(|| Error::Step { index, msg: format!("`{}` is not in the system", step.name) })?;
        if member != step.identity {
            return Err(Error::Step { index, msg: format!("`{}` does not denote {}", step.name, step.identity) });
        }
        cur = apply_step(&cur, step).map_err(|e| Error::Step { index, msg: e.to_string() })?;
    }
    Ok(cur)
}

/// All ways of writing a factor of `text` as `ξ(pattern)`. Every pattern
/// letter binds a (possibly empty) word of length at most `max_bind`.
/// Returns `(start, end, bindings)`.
pub fn match_pattern(pattern: &[Letter], text: &[Letter], max_bind: usize) -> Vec<(usize, usize, BTreeMap<Letter, Word>)> {
    let mut out = Vec::new();
    let mut bind: HashMap<Letter, (usize, usize)> = HashMap::new();
    for start in 0..=text.len() {
        go(pattern, text, max_bind, 0, start, start, &mut bind, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn go(
    pattern: &[Letter],
    text: &[Letter],
    max_bind: usize,
    i: usize,
    j: usize,
    start: usize,
    bind: &mut HashMap<Letter, (usize, usize)>,
    out: &mut Vec<(usize, usize, BTreeMap<Letter, Word>)>,
) {
    if i == pattern.len() {
        let xi = bind
            .iter()
            .map(|(k, &(a, b))| (*k, Word(text[a..b].to_vec())))
            .collect();
        out.push((start, j, xi));
        return;
    }
    let p = pattern[i];
    if let Some(&(a, b)) = bind.get(&p) {
        let len = b - a;
        if j + len <= text.len() && text[j..j + len] == text[a..b] {
            go(pattern, text, max_bind, i + 1, j + len, start, bind, out);
        }
        return;
    }
    let most = max_bind.min(text.len() - j);
    for len in 0..=most {
        bind.insert(p, (j, j + len));
        go(pattern, text, max_bind, i + 1, j + len, start, bind, out);
        bind.remove(&p);
    }
}

/// Precomputed members of a system in both directions.
#[derive(Debug, Clone)]
pub struct Rules {
    rules: Vec<(String, Identity, Direction)>,
}

impl Rules {
    pub fn new(sys: &IdentitySystem) -> Rules {
        let mut rules = Vec::new();
        for (name, id) in sys.members() {
            if id.is_trivial() {
                continue;
            }
            rules.push((name.clone(), id.clone(), Direction::Forward));
            rules.push((name, id, Direction::Backward));
        }
        Rules { rules }
    }

    /// One-step neighbours of `w` with length at most `len_cap`. Letters of
    /// the produced side that do not occur in the matched side bind to the
    /// empty word or to a single letter of `alphabet`.
    pub fn neighbors(&self, w: &Word, len_cap: usize, alphabet: &BTreeSet<Letter>) -> BTreeMap<Word, RewriteStep> {
        let mut out: BTreeMap<Word, RewriteStep> = BTreeMap::new();
        for (name, id, dir) in &self.rules {
            let (from, to) = match dir {
                Direction::Forward => (&id.lhs, &id.rhs),
                Direction::Backward => (&id.rhs, &id.lhs),
            };
            let from_content = from.content();
            let free: Vec<Letter> = to.content().difference(&from_content).copied().collect();
            for (s, e, xi) in match_pattern(from.letters(), w.letters(), len_cap) {
                let base_len = w.len() - (e - s);
                for xi in extend_free(xi, &free, alphabet) {
                    let image = to.substitute(&xi);
                    if base_len + image.len() > len_cap {
                        continue;
                    }
                    let left = w.factor(0, s);
                    let right = w.factor(e, w.len());
                    let target = left.concat(&image).concat(&right);
                    if &target == w || out.contains_key(&target) {
                        continue;
                    }
                    out.insert(
                        target,
                        RewriteStep { name: name.clone(), identity: id.clone(), direction: *dir, left, right, xi },
                    );
                }
            }
        }
        out
    }
}

fn extend_free(xi: BTreeMap<Letter, Word>, free: &[Letter], alphabet: &BTreeSet<Letter>) -> Vec<BTreeMap<Letter, Word>> {
    let mut all = vec![xi];
    for &f in free {
        let mut next = Vec::new();
        for m in &all {
            let mut e = m.clone();
            e.insert(f, Word::empty());
            next.push(e);
            for &a in alphabet {
                let mut e = m.clone();
                e.insert(f, Word(vec![a]));
                next.push(e);
            }
        }
        all = next;
    }
    all
}

/// One-step neighbours over the word's own alphabet.
pub fn neighbors(w: &Word, sys: &IdentitySystem, len_cap: usize) -> BTreeSet<Word> {
    Rules::new(sys).neighbors(w, len_cap, &w.content()).into_keys().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub len_cap: usize,
    pub max_states: usize,
}

impl Budget {
    pub fn new(len_cap: usize, max_states: usize) -> Budget {
        Budget { len_cap, max_states }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { len_cap: 12, max_states: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeriveOutcome {
    Found(DerivationTrace),
    /// Every word reachable within the length cap was visited.
    Exhausted { states: usize },
    /// `max_states` was hit before the search finished.
    BudgetHit { states: usize },
}

impl DeriveOutcome {
    pub fn trace(&self) -> Option<&DerivationTrace> {
        match self {
            DeriveOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Breadth-first search for a derivation of `u = v` from `sys`. Letters
/// introduced by unbalanced members range over the letters of `u` and `v`.
pub fn derive(u: &Word, v: &Word, sys: &IdentitySystem, budget: Budget) -> DeriveOutcome {
    derive_with(u, v, &Rules::new(sys), budget)
}

pub fn derive_with(u: &Word, v: &Word, rules: &Rules, budget: Budget) -> DeriveOutcome {
    if u == v {
        return DeriveOutcome::Found(DerivationTrace { start: u.clone(), steps: Vec::new() });
    }
    let mut alphabet = u.content();
    alphabet.extend(v.content());
    let mut parent: HashMap<Word, Option<(Word, RewriteStep)>> = HashMap::new();
    parent.insert(u.clone(), None);
    let mut frontier: Vec<Word> = vec![u.clone()];
    while !frontier.is_empty() {
        frontier.sort();
        let mut next = Vec::new();
        for w in &frontier {
            for (t, step) in rules.neighbors(w, budget.len_cap, &alphabet) {
                if parent.contains_key(&t) {
                    continue;
                }
                parent.insert(t.clone(), Some((w.clone(), step)));
                if &t == v {
                    return DeriveOutcome::Found(rebuild(&parent, u, v));
                }
                if parent.len() >= budget.max_states {
                    return DeriveOutcome::BudgetHit { states: parent.len() };
                }
                next.push(t);
            }
        }
        frontier = next;
    }
    DeriveOutcome::Exhausted { states: parent.len() }
}

fn rebuild(parent: &HashMap<Word, Option<(Word, RewriteStep)>>, u: &Word, v: &Word) -> DerivationTrace {
    let mut steps = Vec::new();
    let mut cur = v.clone();
    while let Some(Some((prev, step))) = parent.get(&cur) {
        steps.push(step.clone());
        cur = prev.clone();
    }
    steps.reverse();
    DerivationTrace { start: u.clone(), steps }
}

/// Derives every identity of `goals` from `sys`, returning the traces.
pub fn derive_identity(goal: &Identity, sys: &IdentitySystem, budget: Budget) -> DeriveOutcome {
    derive(&goal.lhs, &goal.rhs, sys, budget)
}

/// Builds a single-step trace, checking it against the source.
pub fn single_step(
    source: &Word,
    name: &str,
    identity: &Identity,
    direction: Direction,
    left: Word,
    right: Word,
    xi: BTreeMap<Letter, Word>,
) -> Result<DerivationTrace> {
    let step = RewriteStep { name: name.to_string(), identity: identity.clone(), direction, left, right, xi };
    apply_step(source, &step)?;
    Ok(DerivationTrace { start: source.clone(), steps: vec![step] })
}

/// Name under which an anonymous identity is stored in a system.
pub fn anonymous_name(id: &Identity) -> String {
    compact(id)
}
