//! Registry of named varieties with three-valued satisfaction and
//! inclusion checks.
//!
//! A verdict is `true` only with a derivation, an exact criterion, a
//! generator check or a closure class; it is `false` only with an exact
//! criterion, a failing generator, or a finite monoid (or exactly decidable
//! subvariety) that is verified to lie in the variety and violates the
//! identity. Everything else is `unknown`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Mutex;

use serde::Serialize;

use crate::derive::{derive, Budget};
use crate::error::{Error, Result};
use crate::monoid::{FiniteMonoid, SatOutcome};
use crate::oracle::{
    explain_f, explain_q, saturate, word_problem_commutative_aperiodic, word_problem_f, word_problem_sl,
    BoundedCongruence, OracleVerdict,
};
use crate::rees::build_s;
use crate::system::{family, Family, IdentitySystem};
use crate::word::{ident, w, Identity, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }
}

impl std::ops::Not for Truth {
    type Output = Truth;

    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Trivial,
    Criterion { name: String, detail: String },
    BasisMember { name: String },
    Trace { steps: usize, text: String },
    Oracle { letters: usize, len: usize },
    Counterexample { monoid: String, assignment: BTreeMap<String, String> },
    /// The identity fails in `name`, which is verified to be contained in the variety.
    SubVariety { name: String, inner: Box<Verdict> },
    /// Verdict obtained for the dual variety and the reversed identity.
    Dual { identity: String, inner: Box<Verdict> },
    /// Per-identity verdicts of an inclusion check.
    Basis { checks: Vec<(String, Verdict)> },
    Budget { note: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: Truth,
    pub evidence: Evidence,
}

impl Verdict {
    fn new(value: Truth, evidence: Evidence) -> Verdict {
        Verdict { value, evidence }
    }

    fn unknown(note: impl Into<String>) -> Verdict {
        Verdict::new(Truth::Unknown, Evidence::Budget { note: note.into() })
    }

    /// Short description of the evidence for text output.
    pub fn summary(&self) -> String {
        match &self.evidence {
            Evidence::Trivial => "trivial identity".into(),
            Evidence::Criterion { detail, .. } => detail.clone(),
            Evidence::BasisMember { name } => format!("basis member {name}"),
            Evidence::Trace { steps, .. } => format!("derivation with {steps} steps"),
            Evidence::Oracle { letters, len } => format!("bounded closure on {letters} letters, length {len}"),
            Evidence::Counterexample { monoid, assignment } => {
                let a: Vec<String> = assignment.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                format!("fails in {monoid} at {}", a.join(", "))
            }
            Evidence::SubVariety { name, inner } => format!("fails in subvariety {name}: {}", inner.summary()),
            Evidence::Dual { identity, inner } => format!("dual of {identity}: {}", inner.summary()),
            Evidence::Basis { checks } => {
                match checks.iter().find(|(_, v)| v.value != Truth::True) {
                    Some((id, v)) => format!("{id}: {} ({})", v.value, v.summary()),
                    None => format!("all {} basis identities hold", checks.len()),
                }
            }
            Evidence::Budget { note } => note.clone(),
        }
    }
}

/// Exact decision procedures for identity satisfaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exact {
    Trivial,
    Semilattice,
    /// `var{x^n = x^(n+1), xy = yx}`
    CommutativeAperiodic(usize),
    F,
    Q,
}

impl Exact {
    fn decide(self, id: &Identity) -> Verdict {
        let (ok, name, detail) = match self {
            Exact::Trivial => (true, "trivial", "every identity holds in T".to_string()),
            Exact::Semilattice => {
                let ok = word_problem_sl(id);
                (ok, "SL", format!("SL-criterion: contents {}", if ok { "agree" } else { "differ" }))
            }
            Exact::CommutativeAperiodic(n) => {
                let ok = word_problem_commutative_aperiodic(id, n);
                let d = if ok { "counts agree up to the threshold" } else { "letter counts differ below the threshold" };
                (ok, "commutative", format!("commutative criterion (n={n}): {d}"))
            }
            Exact::F => (word_problem_f(id), "F", explain_f(id)),
            Exact::Q => {
                let (ok, d) = explain_q(id);
                (ok, "Q", d)
            }
        };
        Verdict::new(Truth::from_bool(ok), Evidence::Criterion { name: name.to_string(), detail })
    }

    pub fn parse(s: &str) -> Result<Exact> {
        match s {
            "trivial" => Ok(Exact::Trivial),
            "SL" => Ok(Exact::Semilattice),
            "F" => Ok(Exact::F),
            "Q" => Ok(Exact::Q),
            _ => s
                .strip_prefix("comm")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(Exact::CommutativeAperiodic)
                .ok_or_else(|| Error::UnknownName(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub name: String,
    pub basis: Option<IdentitySystem>,
    pub generators: Vec<(String, FiniteMonoid)>,
    pub exact: Option<Exact>,
    /// When set, the variety is the dual of this entry and every other field is ignored.
    pub dual_of: Option<String>,
}

impl VarietySpec {
    fn based(name: &str, basis: IdentitySystem) -> VarietySpec {
        VarietySpec { name: name.into(), basis: Some(basis), generators: Vec::new(), exact: None, dual_of: None }
    }

    fn exact(mut self, e: Exact) -> VarietySpec {
        self.exact = Some(e);
        self
    }

    fn dual(name: &str, of: &str) -> VarietySpec {
        VarietySpec { name: name.into(), basis: None, generators: Vec::new(), exact: None, dual_of: Some(of.into()) }
    }
}

/// Budgets for catalog checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatalogBudget {
    /// Derivations may use words this much longer than the longer side.
    pub len_slack: usize,
    pub max_states: usize,
    /// Closure length and letter bounds for the oracle route.
    pub oracle_len: usize,
    pub oracle_letters: usize,
}

impl Default for CatalogBudget {
    fn default() -> CatalogBudget {
        CatalogBudget { len_slack: 2, max_states: 20_000, oracle_len: 8, oracle_letters: 2 }
    }
}

/// Varieties whose identities are decided exactly (by a criterion or by
/// generators); they serve as refuting subvarieties.
const DECIDABLE: [&str; 9] = ["T", "SL", "C", "F", "~F", "Q", "~Q", "M", "N"];

/// The nine varieties of the main classification.
pub const NINE: [&str; 9] = ["J", "~J", "K", "~K", "L", "M", "N", "P", "~P"];

pub struct Catalog {
    entries: BTreeMap<String, VarietySpec>,
    pool: Vec<(String, FiniteMonoid)>,
    closures: Mutex<HashMap<(String, usize, usize), BoundedCongruence>>,
    inclusions: Mutex<HashMap<(String, String), bool>>,
    memberships: Mutex<HashMap<(usize, String), bool>>,
}

fn basis(fixed: &[&str], anon: &[&str]) -> IdentitySystem {
    let mut s = IdentitySystem::from_names(fixed);
    for a in anon {
        s.push_anonymous(ident(a));
    }
    s
}

fn rees(words: &[&str]) -> FiniteMonoid {
    let ws: Vec<Word> = words.iter().map(|s| w(s)).collect();
    build_s(&ws).expect("small").base
}

fn p_basis() -> IdentitySystem {
    basis(&["xyx=xyxx", "xxyy=yyxx", "xyzxy=yxzxy", "beta[1]", "gammap[1]"], &[])
}

/// Small monoids used to refute identities once verified to lie in a variety.
fn witness_pool() -> Vec<(String, FiniteMonoid)> {
    let mut pool = vec![
        ("SL2".to_string(), FiniteMonoid::semilattice2()),
        ("LZ1".to_string(), FiniteMonoid::left_zero_with_one()),
        ("RZ1".to_string(), FiniteMonoid::left_zero_with_one().dual_monoid()),
    ];
    for k in 2..=3 {
        pool.push((format!("N{k}"), FiniteMonoid::nilpotent_cyclic(k)));
    }
    let mut seen = Vec::new();
    for len in 1..=4 {
        for u in crate::rees::words_up_to(&[crate::word::letter('x'), crate::word::letter('y')], len) {
            if u.len() != len || u.letters()[0] != crate::word::letter('x') {
                continue;
            }
            seen.push(u);
        }
    }
    for u in seen {
        let s = build_s(std::slice::from_ref(&u)).expect("small").base;
        pool.push((format!("S({u})"), s));
    }
    pool.push(("S(xy,yx)".into(), rees(&["xy", "yx"])));
    let e6 = idempotent_over_nilpotent();
    pool.push(("E6~".into(), e6.dual_monoid()));
    pool.push(("E6".into(), e6));
    pool
}

/// `{1, e, a, ea, ae, 0}` with `e^2 = e`, `a^2 = 0`, `eae = ea`, `aea = 0`.
/// It satisfies `x^2y = xyx` but not `xyx = yx^2` (take `x = e`, `y = a`).
pub fn idempotent_over_nilpotent() -> FiniteMonoid {
    let table = vec![
        0, 1, 2, 3, 4, 5, //
        1, 1, 3, 3, 3, 5, //
        2, 4, 5, 5, 5, 5, //
        3, 3, 5, 5, 5, 5, //
        4, 4, 5, 5, 5, 5, //
        5, 5, 5, 5, 5, 5,
    ];
    let labels = ["1", "e", "a", "ea", "ae", "0"].iter().map(|s| s.to_string()).collect();
    FiniteMonoid::new(6, table, 0, Some(labels)).expect("valid")
}

impl Default for Catalog {
    fn default() -> Catalog {
        Catalog::builtin()
    }
}

impl Catalog {
    pub fn empty() -> Catalog {
        Catalog {
            entries: BTreeMap::new(),
            pool: witness_pool(),
            closures: Mutex::new(HashMap::new()),
            inclusions: Mutex::new(HashMap::new()),
            memberships: Mutex::new(HashMap::new()),
        }
    }

    pub fn builtin() -> Catalog {
        let mut c = Catalog::empty();
        let mut add = |v: VarietySpec| {
            c.entries.insert(v.name.clone(), v);
        };
        add(VarietySpec::based("T", basis(&["x=1"], &[])).exact(Exact::Trivial));
        add(VarietySpec::based("SL", basis(&["x=xx", "xy=yx"], &[])).exact(Exact::Semilattice));
        for n in 1..=6 {
            add(VarietySpec::based(&format!("A{n}"), basis(&[&format!("pow[{n}]"), &format!("powcomm[{n}]")], &[])));
        }
        add(VarietySpec::based("C", basis(&["xy=yx"], &["x^2 = x^3"])).exact(Exact::CommutativeAperiodic(2)));
        add(VarietySpec::based("D", basis(&["xxy=xyx", "xyx=yxx"], &["x^2 = x^3"])));
        add(VarietySpec::based("E", basis(&["xxy=xyx", "xxyy=yyxx"], &["x^2 = x^3"])));
        add(VarietySpec::dual("~E", "E"));
        add(VarietySpec::based("F", basis(&["xyx=xyxx", "xxy=xxyx", "xxyy=yyxx", "xyzxy=yxzxy"], &[])).exact(Exact::F));
        add(VarietySpec::dual("~F", "F"));
        add(VarietySpec::based("Q", basis(&["xyx=xyxx", "xxyy=yyxx", "xyxn[2]"], &[])).exact(Exact::Q));
        add(VarietySpec::dual("~Q", "Q"));
        add(VarietySpec::based("R", basis(&["xxyy=yyxx", "xzxyxty=xzyxty"], &[])));
        add(VarietySpec::based("O", basis(&["xtyzxy=xtyzyx", "xtxyzy=xtyxzy"], &[])));
        add(VarietySpec::dual("~O", "O"));
        add(VarietySpec::based(
            "L",
            basis(&["xtyzxy=xtyzyx", "xtxyzy=xtyxzy", "xxy=yxx", "alpha[1]"], &["x^2 = x^3"]),
        ));
        add(VarietySpec::based("P", p_basis()));
        add(VarietySpec::dual("~P", "P"));
        let mut h = p_basis();
        h.push_named("xyxztx=xyxzxtx");
        add(VarietySpec::based("H", h));
        for n in 1..=6 {
            let mut p = p_basis();
            p.push_named(&format!("alpha[{n}]"));
            add(VarietySpec::based(&format!("P{n}"), p));
        }
        add(VarietySpec::based("K", basis(&["xyx=xyxx", "xxy=xxyx", "xxyy=yyxx"], &[])));
        add(VarietySpec::dual("~K", "K"));
        add(VarietySpec::based(
            "J",
            basis(&["xyx=xyxx", "xxyy=yyxx", "xyzxy=yxzxy", "xyxztx=xyxzxtx"], &[]).with_family(Family::JPerm, &[1..=3]),
        ));
        add(VarietySpec::dual("~J", "J"));
        add(VarietySpec {
            name: "M".into(),
            basis: None,
            generators: vec![("S(xzxyty)".into(), rees(&["xzxyty"]))],
            exact: None,
            dual_of: None,
        });
        add(VarietySpec {
            name: "N".into(),
            basis: None,
            generators: vec![("S(xyzxty,xtyzxy)".into(), rees(&["xyzxty", "xtyzxy"]))],
            exact: None,
            dual_of: None,
        });
        c
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn get(&self, name: &str) -> Result<&VarietySpec> {
        self.entries.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn insert(&mut self, spec: VarietySpec) {
        self.entries.insert(spec.name.clone(), spec);
    }

    /// Basis of a variety with duality applied.
    pub fn basis_of(&self, name: &str) -> Result<Option<IdentitySystem>> {
        let v = self.get(name)?;
        match &v.dual_of {
            Some(base) => Ok(self.basis_of(base)?.map(|b| b.dual_system())),
            None => Ok(v.basis.clone()),
        }
    }

    /// Decides `V |= id`. See the module documentation for the routes.
    pub fn satisfies(&self, name: &str, id: &Identity, budget: &CatalogBudget) -> Result<Verdict> {
        let v = self.get(name)?;
        if id.is_trivial() {
            return Ok(Verdict::new(Truth::True, Evidence::Trivial));
        }
        if let Some(base) = &v.dual_of {
            let d = id.dual();
            let inner = self.satisfies(base, &d, budget)?;
            return Ok(Verdict::new(inner.value, Evidence::Dual { identity: d.to_string(), inner: Box::new(inner) }));
        }
        if let Some(verdict) = self.decide_exactly(name, id)? {
            return Ok(verdict);
        }
        if let Some(b) = &v.basis {
            if let Some(verdict) = self.prove(name, b, id, budget) {
                return Ok(verdict);
            }
        }
        if let Some(verdict) = self.refute(name, id)? {
            return Ok(verdict);
        }
        Ok(Verdict::unknown(format!(
            "no derivation within length {} and {} states; no refuting member found",
            id.lhs.len().max(id.rhs.len()) + budget.len_slack,
            budget.max_states
        )))
    }

    /// Exact routes only: criterion or generators (after duality).
    pub fn decide_exactly(&self, name: &str, id: &Identity) -> Result<Option<Verdict>> {
        if id.is_trivial() {
            return Ok(Some(Verdict::new(Truth::True, Evidence::Trivial)));
        }
        let v = self.get(name)?;
        if let Some(base) = &v.dual_of {
            let d = id.dual();
            return Ok(self
                .decide_exactly(base, &d)?
                .map(|inner| Verdict::new(inner.value, Evidence::Dual { identity: d.to_string(), inner: Box::new(inner) })));
        }
        if let Some(e) = v.exact {
            return Ok(Some(e.decide(id)));
        }
        if !v.generators.is_empty() {
            for (gname, m) in &v.generators {
                match m.satisfies(id) {
                    SatOutcome::Holds => {}
                    SatOutcome::Fails(a) => return Ok(Some(counterexample(gname, m, &a))),
                    SatOutcome::BudgetExceeded { space } => {
                        return Ok(Some(Verdict::unknown(format!("{gname}: search space {space} exceeds the cap"))))
                    }
                }
            }
            let names: Vec<&str> = v.generators.iter().map(|(n, _)| n.as_str()).collect();
            return Ok(Some(Verdict::new(
                Truth::True,
                Evidence::Criterion { name: "generators".into(), detail: format!("holds in {}", names.join(", ")) },
            )));
        }
        Ok(None)
    }

    fn prove(&self, name: &str, basis: &IdentitySystem, id: &Identity, budget: &CatalogBudget) -> Option<Verdict> {
        for (n, b) in basis.members() {
            if &b == id || b.swap() == *id {
                return Some(Verdict::new(Truth::True, Evidence::BasisMember { name: n }));
            }
        }
        let cap = id.lhs.len().max(id.rhs.len()) + budget.len_slack;
        if let Some(tr) = derive(&id.lhs, &id.rhs, basis, Budget::new(cap, budget.max_states)).trace() {
            return Some(Verdict::new(Truth::True, Evidence::Trace { steps: tr.len(), text: tr.to_text() }));
        }
        let k = id.content().len();
        let len = budget.oracle_len;
        if k <= budget.oracle_letters && id.lhs.len() <= len && id.rhs.len() <= len {
            let mut cache = self.closures.lock().expect("cache");
            let key = (name.to_string(), k, len);
            if !cache.contains_key(&key) {
                let bc = saturate(basis, k, len).ok()?;
                cache.insert(key.clone(), bc);
            }
            if cache[&key].holds(id).ok()? == OracleVerdict::Holds {
                return Some(Verdict::new(Truth::True, Evidence::Oracle { letters: k, len }));
            }
        }
        None
    }

    /// Looks for an exactly decidable subvariety or a pool monoid inside the
    /// variety that violates `id`.
    fn refute(&self, name: &str, id: &Identity) -> Result<Option<Verdict>> {
        for sub in DECIDABLE {
            if sub == name || !self.entries.contains_key(sub) {
                continue;
            }
            let inner = match self.decide_exactly(sub, id)? {
                Some(v) if v.value == Truth::False => v,
                _ => continue,
            };
            if self.exact_inclusion(sub, name)? {
                return Ok(Some(Verdict::new(
                    Truth::False,
                    Evidence::SubVariety { name: sub.to_string(), inner: Box::new(inner) },
                )));
            }
        }
        for (i, (mname, m)) in self.pool.iter().enumerate() {
            let a = match m.satisfies(id) {
                SatOutcome::Fails(a) => a,
                _ => continue,
            };
            if self.pool_member(i, name)? {
                return Ok(Some(counterexample(mname, m, &a)));
            }
        }
        Ok(None)
    }

    /// `sub ⊆ name`, decided only through `sub`'s exact routes on every basis
    /// member of `name` (family members within the declared ranges).
    fn exact_inclusion(&self, sub: &str, name: &str) -> Result<bool> {
        let key = (sub.to_string(), name.to_string());
        if let Some(&b) = self.inclusions.lock().expect("cache").get(&key) {
            return Ok(b);
        }
        let ok = match self.basis_of(name)? {
            None => false,
            Some(b) => {
                let mut all = true;
                for (_, id) in b.members() {
                    if self.decide_exactly(sub, &id)?.map(|v| v.value) != Some(Truth::True) {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        self.inclusions.lock().expect("cache").insert(key, ok);
        Ok(ok)
    }

    fn pool_member(&self, i: usize, name: &str) -> Result<bool> {
        let key = (i, name.to_string());
        if let Some(&b) = self.memberships.lock().expect("cache").get(&key) {
            return Ok(b);
        }
        let m = &self.pool[i].1;
        let ok = match self.basis_of(name)? {
            None => false,
            Some(b) => b.members().iter().all(|(_, id)| m.satisfies(id) == SatOutcome::Holds),
        };
        self.memberships.lock().expect("cache").insert(key, ok);
        Ok(ok)
    }

    /// `V ⊆ W`: every basis identity of `W` holds in `V`.
    pub fn includes(&self, v: &str, w_name: &str, budget: &CatalogBudget) -> Result<Verdict> {
        let b = self
            .basis_of(w_name)?
            .ok_or_else(|| Error::Precondition(format!("{w_name} has no basis")))?;
        let mut checks = Vec::new();
        let mut value = Truth::True;
        for (n, id) in b.members() {
            let verdict = self.satisfies(v, &id, budget)?;
            let stop = verdict.value == Truth::False;
            if verdict.value == Truth::Unknown {
                value = Truth::Unknown;
            }
            checks.push((format!("{n}: {id}"), verdict));
            if stop {
                value = Truth::False;
                break;
            }
        }
        Ok(Verdict::new(value, Evidence::Basis { checks }))
    }

    fn require(&self, name: &str, id: &Identity, what: &str, budget: &CatalogBudget) -> Result<()> {
        let v = self.satisfies(name, id, budget)?;
        if v.value != Truth::True {
            return Err(Error::Hypothesis(format!("{name} must satisfy {what} ({id}); verdict {}", v.value)));
        }
        Ok(())
    }

    fn require_non_cr(&self, name: &str, budget: &CatalogBudget) -> Result<()> {
        let v = self.satisfies(name, &ident("x = x^2"), budget)?;
        if v.value != Truth::False {
            return Err(Error::Hypothesis(format!("{name} must be non-completely regular (x = x^2 fails); verdict {}", v.value)));
        }
        Ok(())
    }

    /// `F ⊆ V` iff `V` violates `xyx^n = x^nyx^n` (for non-completely
    /// regular `V` satisfying `x^n = x^(n+1)`, `n >= 2`).
    pub fn contains_f(&self, name: &str, n: usize, budget: &CatalogBudget) -> Result<Verdict> {
        self.containment_check(name, n, Family::XyxN, budget)
    }

    /// `Q ⊆ V` iff `V` violates `x^nyzx^n = x^nyxzx^n` (same hypotheses).
    pub fn contains_q(&self, name: &str, n: usize, budget: &CatalogBudget) -> Result<Verdict> {
        self.containment_check(name, n, Family::XnyzxN, budget)
    }

    fn containment_check(&self, name: &str, n: usize, fam: Family, budget: &CatalogBudget) -> Result<Verdict> {
        if n < 2 {
            return Err(Error::Parameter("containment checks need n >= 2".into()));
        }
        self.require(name, &family(Family::Pow, &[n], &[])?, "x^n = x^(n+1)", budget)?;
        self.require_non_cr(name, budget)?;
        let v = self.satisfies(name, &family(fam, &[n], &[])?, budget)?;
        Ok(Verdict::new(!v.value, v.evidence))
    }

    /// `P_(k+1) ⊆ V` iff `V` violates `delta[k,n]` (for `V` containing F and
    /// Q and satisfying `x^n = x^(n+1)`).
    pub fn contains_p(&self, name: &str, k: usize, n: usize, budget: &CatalogBudget) -> Result<Verdict> {
        for (what, v) in [("F", self.contains_f(name, n, budget)?), ("Q", self.contains_q(name, n, budget)?)] {
            if v.value != Truth::True {
                return Err(Error::Hypothesis(format!("{name} must contain {what}; verdict {}", v.value)));
            }
        }
        let v = self.satisfies(name, &family(Family::Delta, &[k, n], &[])?, budget)?;
        Ok(Verdict::new(!v.value, v.evidence))
    }

    /// For each of the nine varieties `X`, a verdict on `X ⊆ V`. `V` must
    /// satisfy `x^n = x^(n+1)` and `x^ny^n = y^nx^n`.
    pub fn excludes_nine(&self, name: &str, n: usize, budget: &CatalogBudget) -> Result<NineReport> {
        self.require(name, &family(Family::Pow, &[n], &[])?, "x^n = x^(n+1)", budget)?;
        self.require(name, &family(Family::PowComm, &[n], &[])?, "x^ny^n = y^nx^n", budget)?;
        let mut contained = Vec::new();
        for x in NINE {
            let v = self.includes(x, name, budget)?;
            contained.push((x.to_string(), v));
        }
        let cross = if contained.iter().all(|(_, v)| v.value == Truth::False) {
            Truth::True
        } else if contained.iter().any(|(_, v)| v.value == Truth::True) {
            Truth::False
        } else {
            Truth::Unknown
        };
        Ok(NineReport { variety: name.to_string(), n, contained, cross })
    }

    /// Checks the bottom part of the subvariety lattice of P.
    pub fn verify_lattice_bottom(&self, budget: &CatalogBudget) -> Result<Vec<LatticeCheck>> {
        let proper = [
            ("T", "SL"),
            ("SL", "C"),
            ("C", "D"),
            ("D", "E"),
            ("E", "F"),
            ("D", "~E"),
            ("F", "P1"),
            ("Q", "P1"),
        ];
        let mut out = Vec::new();
        for (a, b) in proper {
            let inc = self.includes(a, b, budget)?;
            let back = self.includes(b, a, budget)?;
            let pass = inc.value == Truth::True && back.value == Truth::False;
            out.push(LatticeCheck { claim: format!("{a} < {b}"), pass, forward: inc, backward: Some(back) });
        }
        for (a, b) in [("Q", "F"), ("F", "Q")] {
            let inc = self.includes(a, b, budget)?;
            let pass = inc.value == Truth::False;
            out.push(LatticeCheck { claim: format!("{a} not in {b}"), pass, forward: inc, backward: None });
        }
        Ok(out)
    }
}

fn counterexample(name: &str, m: &FiniteMonoid, a: &crate::monoid::Assignment) -> Verdict {
    Verdict::new(
        Truth::False,
        Evidence::Counterexample {
            monoid: name.to_string(),
            assignment: a.iter().map(|(x, e)| (x.to_string(), m.label(*e).to_string())).collect(),
        },
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct NineReport {
    pub variety: String,
    pub n: usize,
    /// `(X, verdict on X ⊆ V)`
    pub contained: Vec<(String, Verdict)>,
    /// `true` iff all nine are excluded.
    pub cross: Truth,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeCheck {
    pub claim: String,
    pub pass: bool,
    pub forward: Verdict,
    pub backward: Option<Verdict>,
}

/// Parses a catalog file. Entries start with `variety <name>` and take
/// `basis:` (identities or names separated by `;`), `families:`
/// (`alpha 1..4; kappa 1..2 0..2`), `generators:` (table files, or
/// `rees <words>`), `dual-of:` and `exact:` lines. `#` starts a comment.
/// Table paths are resolved by `load_table`.
pub fn parse_catalog<F>(text: &str, mut load_table: F) -> Result<Vec<VarietySpec>>
where
    F: FnMut(&str) -> Result<FiniteMonoid>,
{
    let mut out: Vec<VarietySpec> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Syntax { pos: ln + 1, msg };
        if let Some(name) = line.strip_prefix("variety ") {
            out.push(VarietySpec {
                name: name.trim().to_string(),
                basis: None,
                generators: Vec::new(),
                exact: None,
                dual_of: None,
            });
            continue;
        }
        let cur = out.last_mut().ok_or_else(|| bad("expected `variety <name>` first".into()))?;
        let (key, value) = line.split_once(':').ok_or_else(|| bad(format!("expected `key: value`, got `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "basis" => {
                let b = cur.basis.get_or_insert_with(IdentitySystem::new);
                b.extend_from_text(value).map_err(|e| bad(e.to_string()))?;
            }
            "families" => {
                let b = cur.basis.get_or_insert_with(IdentitySystem::new);
                for item in value.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let mut parts = item.split_whitespace();
                    let fam = parts
                        .next()
                        .and_then(Family::from_name)
                        .ok_or_else(|| bad(format!("unknown family in `{item}`")))?;
                    let ranges: Vec<RangeInclusive<usize>> =
                        parts.map(|r| parse_range(r).ok_or_else(|| bad(format!("bad range `{r}`")))).collect::<Result<_>>()?;
                    if ranges.len() != fam.arity() {
                        return Err(bad(format!("{} takes {} range(s)", fam.name(), fam.arity())));
                    }
                    b.families.push(crate::system::FamilyRange::new(fam, &ranges));
                }
            }
            "generators" => {
                if let Some(words) = value.strip_prefix("rees ") {
                    let ws: Vec<Word> = words
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(crate::word::parse_word)
                        .collect::<Result<_>>()?;
                    let m = build_s(&ws)?.base;
                    cur.generators.push((format!("S({})", words.trim()), m));
                } else {
                    for path in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        cur.generators.push((path.to_string(), load_table(path)?));
                    }
                }
            }
            "dual-of" => cur.dual_of = Some(value.to_string()),
            "exact" => cur.exact = Some(Exact::parse(value).map_err(|e| bad(e.to_string()))?),
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    Ok(out)
}

fn parse_range(s: &str) -> Option<RangeInclusive<usize>> {
    match s.split_once("..") {
        Some((a, b)) => Some(a.parse().ok()?..=b.parse().ok()?),
        None => {
            let v = s.parse().ok()?;
            Some(v..=v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> CatalogBudget {
        CatalogBudget::default()
    }

    #[test]
    fn criterion_routes() {
        let c = Catalog::builtin();
        let v = c.satisfies("F", &ident("xyzxy = yxzxy"), &b()).unwrap();
        assert_eq!(v.value, Truth::True);
        let v = c.satisfies("Q", &ident("xyxztx = xyxzxtx"), &b()).unwrap();
        assert_eq!(v.value, Truth::False);
        assert!(v.summary().contains("block content mismatch"));
    }

    #[test]
    fn small_inclusions() {
        let c = Catalog::builtin();
        assert_eq!(c.includes("SL", "C", &b()).unwrap().value, Truth::True);
        assert_eq!(c.includes("C", "SL", &b()).unwrap().value, Truth::False);
    }

    #[test]
    fn dual_route() {
        let c = Catalog::builtin();
        let id = ident("xyx = x^2yx");
        assert_eq!(c.satisfies("~F", &id, &b()).unwrap().value, Truth::True);
        assert_eq!(c.satisfies("F", &id, &b()).unwrap().value, Truth::False);
    }

    #[test]
    fn six_element_witness() {
        let m = idempotent_over_nilpotent();
        assert!(m.validate().is_ok());
        assert!(m.is_aperiodic() && m.idempotents_commute());
        assert_eq!(m.satisfies(&ident("x^2y = xyx")), SatOutcome::Holds);
        assert!(matches!(m.satisfies(&ident("xyx = yx^2")), SatOutcome::Fails(_)));
    }

    #[test]
    fn parse_catalog_file() {
        let text = "variety X\nbasis: xyx=xyxx; x^2y^2 = y^2x^2\nfamilies: alpha 1..2\n\nvariety Y\ndual-of: X\nvariety Z\ngenerators: rees xyx\nexact: comm2\n";
        let specs = parse_catalog(text, |_| Err(Error::UnknownName("none".into()))).unwrap();
        assert_eq!(specs.len(), 3);
        assert_eq!(specs[0].basis.as_ref().unwrap().members().len(), 4);
        assert_eq!(specs[1].dual_of.as_deref(), Some("X"));
        assert_eq!(specs[2].generators[0].1.size(), 7);
        assert!(parse_catalog("basis: x=x", |_| unreachable!()).is_err());
    }
}
