//! Finite monoids given by multiplication tables, with exhaustive identity
//! checking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Identity, Letter, Word};

/// Largest `size^letters` search space `satisfies` will walk.
pub const SEARCH_CAP: u128 = 1_000_000_000;
/// Largest monoid built by products.
pub const PRODUCT_CAP: usize = 4096;

pub type Assignment = BTreeMap<Letter, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotIdentity { elem: usize },
    NotAssociative { a: usize, b: usize, c: usize },
}

/// Result of an exhaustive identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SatOutcome {
    Holds,
    Fails(Assignment),
    BudgetExceeded { space: u128 },
}

impl SatOutcome {
    pub fn holds(&self) -> Option<bool> {
        match self {
            SatOutcome::Holds => Some(true),
            SatOutcome::Fails(_) => Some(false),
            SatOutcome::BudgetExceeded { .. } => None,
        }
    }
}

impl FiniteMonoid {
    /// Builds a monoid from a row-major table. Only dimensions and ranges are
    /// checked here; see [`FiniteMonoid::validate`] for the axioms.
    pub fn new(size: usize, table: Vec<usize>, identity: usize, labels: Option<Vec<String>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Dimension("a monoid has at least one element".into()));
        }
        if table.len() != size * size {
            return Err(Error::Dimension(format!("expected {} entries, got {}", size * size, table.len())));
        }
        if let Some(bad) = table.iter().find(|&&e| e >= size) {
            return Err(Error::Dimension(format!("entry {bad} out of range for size {size}")));
        }
        if identity >= size {
            return Err(Error::Dimension(format!("identity {identity} out of range")));
        }
        let labels = match labels {
            Some(l) if l.len() == size => l,
            Some(l) => {
                return Err(Error::Dimension(format!("{} labels for {size} elements", l.len())));
            }
            None => (0..size).map(|i| i.to_string()).collect(),
        };
        Ok(FiniteMonoid { size, table, identity, labels })
    }

    pub fn trivial() -> FiniteMonoid {
        FiniteMonoid::new(1, vec![0], 0, Some(vec!["1".into()])).expect("valid")
    }

    /// `{1, e}` with `e e = e`.
    pub fn semilattice2() -> FiniteMonoid {
        FiniteMonoid::new(2, vec![0, 1, 1, 1], 0, Some(vec!["1".into(), "e".into()])).expect("valid")
    }

    /// The group of order two.
    pub fn z2() -> FiniteMonoid {
        FiniteMonoid::new(2, vec![0, 1, 1, 0], 0, Some(vec!["1".into(), "g".into()])).expect("valid")
    }

    /// The two-element left-zero band `{e, f}` with an identity adjoined.
    pub fn left_zero_with_one() -> FiniteMonoid {
        FiniteMonoid::new(
            3,
            vec![0, 1, 2, 1, 1, 1, 2, 2, 2],
            0,
            Some(vec!["1".into(), "e".into(), "f".into()]),
        )
        .expect("valid")
    }

    /// `{1, a, a^2, ..., a^k}` with `a^k` absorbing extra powers (`a^k = a^(k+1)`).
    pub fn nilpotent_cyclic(k: usize) -> FiniteMonoid {
        let size = k + 1;
        let mut table = vec![0; size * size];
        for i in 0..size {
            for j in 0..size {
                table[i * size + j] = (i + j).min(k);
            }
        }
        let labels = (0..size)
            .map(|i| if i == 0 { "1".to_string() } else { format!("a^{i}") })
            .collect();
        FiniteMonoid::new(size, table, 0, Some(labels)).expect("valid")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.size;
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                return Err(Violation::NotIdentity { elem: a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Violation::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// The absorbing element, if any.
    pub fn zero(&self) -> Option<usize> {
        (0..self.size).find(|&z| (0..self.size).all(|a| self.mul(z, a) == z && self.mul(a, z) == z))
    }

    pub fn evaluate(&self, w: &Word, a: &Assignment) -> Result<usize> {
        let mut acc = self.identity;
        for x in w.letters() {
            let e = *a.get(x).ok_or_else(|| Error::Unassigned(x.to_string()))?;
            acc = self.mul(acc, e);
        }
        Ok(acc)
    }

    /// Exhaustive check of `id` over all assignments of its letters, with
    /// early exit on the first counterexample. Subtrees where both sides are
    /// already forced to the zero element are skipped.
    pub fn satisfies(&self, id: &Identity) -> SatOutcome {
        if id.is_trivial() {
            return SatOutcome::Holds;
        }
        let mut order: Vec<Letter> = Vec::new();
        for x in id.lhs.letters().iter().chain(id.rhs.letters()) {
            if !order.contains(x) {
                order.push(*x);
            }
        }
        let space = (self.size as u128).checked_pow(order.len() as u32).unwrap_or(u128::MAX);
        if space > SEARCH_CAP {
            return SatOutcome::BudgetExceeded { space };
        }
        let index: BTreeMap<Letter, usize> = order.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let lhs: Vec<usize> = id.lhs.letters().iter().map(|x| index[x]).collect();
        let rhs: Vec<usize> = id.rhs.letters().iter().map(|x| index[x]).collect();
        let mut search = Search { m: self, zero: self.zero(), lhs, rhs, values: vec![0; order.len()] };
        match search.run(0) {
            None => SatOutcome::Holds,
            Some(values) => SatOutcome::Fails(order.into_iter().zip(values).collect()),
        }
    }

    pub fn is_aperiodic(&self) -> bool {
        (0..self.size).all(|a| {
            let mut p = a;
            for _ in 0..=self.size {
                let next = self.mul(p, a);
                if next == p {
                    return true;
                }
                p = next;
            }
            false
        })
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&e| self.mul(e, e) == e).collect()
    }

    pub fn idempotents_commute(&self) -> bool {
        let es = self.idempotents();
        es.iter().all(|&e| es.iter().all(|&f| self.mul(e, f) == self.mul(f, e)))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The anti-isomorphic copy: `a * b := b a`.
    pub fn dual_monoid(&self) -> FiniteMonoid {
        let n = self.size;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(b, a);
            }
        }
        FiniteMonoid { size: n, table, identity: self.identity, labels: self.labels.clone() }
    }

    pub fn direct_product(&self, other: &FiniteMonoid) -> Result<FiniteMonoid> {
        let n = self.size * other.size;
        if n > PRODUCT_CAP {
            return Err(Error::Budget(format!("product has {n} elements, cap is {PRODUCT_CAP}")));
        }
        let pair = |i: usize| (i / other.size, i % other.size);
        let mut table = vec![0; n * n];
        for i in 0..n {
            let (a1, a2) = pair(i);
            for j in 0..n {
                let (b1, b2) = pair(j);
                table[i * n + j] = self.mul(a1, b1) * other.size + other.mul(a2, b2);
            }
        }
        let labels = (0..n)
            .map(|i| {
                let (a, b) = pair(i);
                format!("({},{})", self.labels[a], other.labels[b])
            })
            .collect();
        FiniteMonoid::new(n, table, self.identity * other.size + other.identity, Some(labels))
    }

    /// Serializes in the table file format.
    pub fn to_table_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n {} {}", self.size, self.identity).unwrap();
        for a in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|b| self.mul(a, b).to_string()).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(s, "# label {i} {l}").unwrap();
        }
        s
    }

    /// Parses the table file format: `n <size> <identity>`, then `size` rows,
    /// with optional `# label <i> <name>` lines anywhere. Other `#` lines are
    /// comments.
    pub fn from_table_text(text: &str) -> Result<FiniteMonoid> {
        let mut header: Option<(usize, usize)> = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut labels: BTreeMap<usize, String> = BTreeMap::new();
        let bad = |line: usize, msg: &str| Error::Syntax { pos: line, msg: msg.to_string() };
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("label") {
                    let i = parts
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| bad(ln + 1, "label index expected"))?;
                    let name = parts.collect::<Vec<_>>().join(" ");
                    labels.insert(i, name);
                }
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            if header.is_none() {
                if nums.len() != 3 || nums[0] != "n" {
                    return Err(bad(ln + 1, "expected `n <size> <identity>`"));
                }
                let size = nums[1].parse().map_err(|_| bad(ln + 1, "bad size"))?;
                let id = nums[2].parse().map_err(|_| bad(ln + 1, "bad identity index"))?;
                header = Some((size, id));
                continue;
            }
            let row: std::result::Result<Vec<usize>, _> = nums.iter().map(|s| s.parse::<usize>()).collect();
            rows.push(row.map_err(|_| bad(ln + 1, "bad table entry"))?);
        }
        let (size, id) = header.ok_or_else(|| bad(0, "missing header"))?;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension(format!("expected {size} rows of {size} entries")));
        }
        let label_vec = if labels.is_empty() {
            None
        } else {
            Some((0..size).map(|i| labels.get(&i).cloned().unwrap_or_else(|| i.to_string())).collect())
        };
        FiniteMonoid::new(size, rows.concat(), id, label_vec)
    }

    /// Elements reachable as products of the given generators (plus identity).
    pub fn submonoid_generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = [self.identity].into();
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if seen.insert(b) {
                    frontier.push(b);
                }
            }
        }
        seen
    }
}

struct Search<'a> {
    m: &'a FiniteMonoid,
    zero: Option<usize>,
    lhs: Vec<usize>,
    rhs: Vec<usize>,
    values: Vec<usize>,
}

impl Search<'_> {
    /// True if some maximal run of already-assigned positions multiplies to zero.
    fn forced_zero(&self, side: &[usize], assigned: usize, zero: usize) -> bool {
        let mut acc: Option<usize> = None;
        for &v in side {
            if v < assigned {
                let e = self.values[v];
                let p = match acc {
                    Some(a) => self.m.mul(a, e),
                    None => e,
                };
                if p == zero {
                    return true;
                }
                acc = Some(p);
            } else {
                acc = None;
            }
        }
        false
    }

    fn eval(&self, side: &[usize]) -> usize {
        side.iter().fold(self.m.identity, |acc, &v| self.m.mul(acc, self.values[v]))
    }

    fn run(&mut self, depth: usize) -> Option<Vec<usize>> {
        if depth == self.values.len() {
            return if self.eval(&self.lhs) == self.eval(&self.rhs) { None } else { Some(self.values.clone()) };
        }
        if let Some(z) = self.zero {
            if depth > 0 && self.forced_zero(&self.lhs, depth, z) && self.forced_zero(&self.rhs, depth, z) {
                return None;
            }
        }
        for e in 0..self.m.size {
            self.values[depth] = e;
            if let Some(found) = self.run(depth + 1) {
                return Some(found);
            }
        }
        None
    }
}
