//! Identity systems: finite sets of named identities plus parametric
//! families instantiated over bounded parameter ranges.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{ident, letter, Identity, Letter, Word};

const T_BAND: &[u8] = b"abcdefghijklmnopqrstuvw";

/// The `i`-th auxiliary letter used by family instances (`a`, `b`, ...).
pub fn t_letter(i: usize) -> Result<Letter> {
    T_BAND
        .get(i)
        .map(|&c| Letter(c - b'a'))
        .ok_or_else(|| Error::Parameter(format!("family needs more than {} auxiliary letters", T_BAND.len())))
}

fn x() -> Letter {
    letter('x')
}
fn y() -> Letter {
    letter('y')
}
fn z() -> Letter {
    letter('z')
}

/// `x` at odd indices, `y` at even ones.
pub fn alternating(i: usize) -> Letter {
    if i % 2 == 1 {
        x()
    } else {
        y()
    }
}

/// Parametric identity families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `x^n = x^(n+1)`
    Pow,
    /// `x^n y^n = y^n x^n`
    PowComm,
    /// `x y x^n = x^n y x^n`
    XyxN,
    /// `x^n y z x^n = x^n y x z x^n`
    XnyzxN,
    /// `x^n y x^n z x^n = x^n y z x^n`
    XnyxnzxN,
    Alpha,
    Beta,
    Gamma,
    GammaPrime,
    /// `delta[k,n]`
    Delta,
    /// `kappa[n,j]`
    Kappa,
    /// Deletes an occurrence of `x` surrounded by `n + 1` occurrences on each side.
    Deletion,
    /// `x z_p(1)..z_p(n) x prod t_i z_i = x^2 z_p(1)..z_p(n) prod t_i z_i`
    JPerm,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Pow,
        Family::PowComm,
        Family::XyxN,
        Family::XnyzxN,
        Family::XnyxnzxN,
        Family::Alpha,
        Family::Beta,
        Family::Gamma,
        Family::GammaPrime,
        Family::Delta,
        Family::Kappa,
        Family::Deletion,
        Family::JPerm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pow => "pow",
            Family::PowComm => "powcomm",
            Family::XyxN => "xyxn",
            Family::XnyzxN => "xnyzxn",
            Family::XnyxnzxN => "xnyxnzxn",
            Family::Alpha => "alpha",
            Family::Beta => "beta",
            Family::Gamma => "gamma",
            Family::GammaPrime => "gammap",
            Family::Delta => "delta",
            Family::Kappa => "kappa",
            Family::Deletion => "delete",
            Family::JPerm => "jperm",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Number of integer parameters (for `JPerm` the permutation is extra).
    pub fn arity(self) -> usize {
        match self {
            Family::Delta | Family::Kappa => 2,
            _ => 1,
        }
    }
}

/// A family member at concrete parameters. For `JPerm` the permutation of
/// `1..=n` follows the single integer parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: Family,
    pub params: Vec<usize>,
    pub perm: Vec<usize>,
}

impl FamilyInstance {
    pub fn new(family: Family, params: &[usize]) -> FamilyInstance {
        FamilyInstance { family, params: params.to_vec(), perm: Vec::new() }
    }

    pub fn jperm(perm: &[usize]) -> FamilyInstance {
        FamilyInstance { family: Family::JPerm, params: vec![perm.len()], perm: perm.to_vec() }
    }

    pub fn identity(&self) -> Result<Identity> {
        family(self.family, &self.params, &self.perm)
    }

    pub fn parse(s: &str) -> Result<FamilyInstance> {
        let bad = || Error::UnknownName(s.to_string());
        let open = s.find('[').ok_or_else(bad)?;
        if !s.ends_with(']') {
            return Err(bad());
        }
        let fam = Family::from_name(&s[..open]).ok_or_else(bad)?;
        let inner = &s[open + 1..s.len() - 1];
        let (nums, perm) = match inner.split_once(';') {
            Some((a, b)) => (a, Some(b)),
            None => (inner, None),
        };
        let parse_list = |t: &str| -> Result<Vec<usize>> {
            t.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        let params = parse_list(nums)?;
        let perm = match perm {
            Some(p) => parse_list(p)?,
            None => Vec::new(),
        };
        let inst = FamilyInstance { family: fam, params, perm };
        inst.identity()?;
        Ok(inst)
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}[{}", self.family.name(), ps.join(","))?;
        if !self.perm.is_empty() {
            let qs: Vec<String> = self.perm.iter().map(|p| p.to_string()).collect();
            write!(f, ";{}", qs.join(","))?;
        }
        write!(f, "]")
    }
}

fn need(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(msg.into()))
    }
}

fn tail(from: usize, to: usize, exp: usize) -> Result<Word> {
    let mut out = Word::empty();
    for i in from..=to {
        out.push(t_letter(i)?);
        out.extend(&Word::power(alternating(i), exp));
    }
    Ok(out)
}

fn cat(parts: &[&Word]) -> Word {
    let mut out = Word::empty();
    for p in parts {
        out.extend(p);
    }
    out
}

/// Expands a family member over the letters `x, y, z` and the auxiliary band.
pub fn family(fam: Family, params: &[usize], perm: &[usize]) -> Result<Identity> {
    need(params.len() == fam.arity(), format!("{} takes {} parameter(s)", fam.name(), fam.arity()))?;
    let n = params[0];
    let (xx, yy) = (Word::power(x(), 1), Word::power(y(), 1));
    let xp = |k: usize| Word::power(x(), k);
    let yp = |k: usize| Word::power(y(), k);
    let xy = cat(&[&xx, &yy]);
    let yx = cat(&[&yy, &xx]);
    match fam {
        Family::Pow => {
            need(n >= 1, "n >= 1")?;
            Ok(Identity::new(xp(n), xp(n + 1)))
        }
        Family::PowComm => {
            need(n >= 1, "n >= 1")?;
            Ok(Identity::new(cat(&[&xp(n), &yp(n)]), cat(&[&yp(n), &xp(n)])))
        }
        Family::XyxN => {
            need(n >= 1, "n >= 1")?;
            Ok(Identity::new(cat(&[&xy, &xp(n)]), cat(&[&xp(n), &yy, &xp(n)])))
        }
        Family::XnyzxN => {
            need(n >= 1, "n >= 1")?;
            let zz = Word::power(z(), 1);
            Ok(Identity::new(
                cat(&[&xp(n), &yy, &zz, &xp(n)]),
                cat(&[&xp(n), &yy, &xx, &zz, &xp(n)]),
            ))
        }
        Family::XnyxnzxN => {
            need(n >= 1, "n >= 1")?;
            let zz = Word::power(z(), 1);
            Ok(Identity::new(
                cat(&[&xp(n), &yy, &xp(n), &zz, &xp(n)]),
                cat(&[&xp(n), &yy, &zz, &xp(n)]),
            ))
        }
        Family::Alpha => {
            need(n >= 1, "n >= 1")?;
            let t = tail(1, n + 1, 1)?;
            Ok(Identity::new(cat(&[&xy, &t]), cat(&[&yx, &t])))
        }
        Family::Beta => {
            need(n >= 1, "n >= 1")?;
            let t = tail(2, n + 1, 1)?;
            Ok(Identity::new(cat(&[&yy, &xp(2), &t]), cat(&[&xx, &yy, &xx, &t])))
        }
        Family::Gamma => {
            need(n >= 1, "n >= 1")?;
            let t = tail(1, n + 1, 1)?;
            Ok(Identity::new(cat(&[&xp(2), &yy, &t]), cat(&[&xx, &yy, &xx, &t])))
        }
        Family::GammaPrime => {
            need(n >= 1, "n >= 1")?;
            let t = tail(2, n + 1, 1)?;
            Ok(Identity::new(cat(&[&xp(2), &yy, &t]), cat(&[&xx, &yy, &xx, &t])))
        }
        Family::Delta => {
            let (k, e) = (params[0], params[1]);
            need(k >= 1 && e >= 1, "k >= 1 and n >= 1")?;
            let t = tail(1, k + 1, e)?;
            Ok(Identity::new(cat(&[&xy, &t]), cat(&[&yx, &t])))
        }
        Family::Kappa => {
            let j = params[1];
            need(n >= 1 && j <= n, "n >= 1 and 0 <= j <= n")?;
            let mut l = Word::empty();
            let mut r = Word::empty();
            for i in 0..=n {
                let t = t_letter(i)?;
                l.push(t);
                l.push(x());
                r.push(t);
                r.extend(&xp(if i == j { 2 } else { 1 }));
            }
            Ok(Identity::new(l, r))
        }
        Family::Deletion => {
            need(n >= 1, "n >= 1")?;
            let mut pre = xx.clone();
            for i in 1..=n {
                pre.push(t_letter(i)?);
                pre.push(x());
            }
            let mut post = xx.clone();
            for i in 1..=n {
                post.push(t_letter(n + i)?);
                post.push(x());
            }
            let zz = Word::power(z(), 1);
            Ok(Identity::new(
                cat(&[&pre, &yy, &zz, &post]),
                cat(&[&pre, &yy, &xx, &zz, &post]),
            ))
        }
        Family::JPerm => {
            need(n >= 1, "n >= 1")?;
            let mut sorted = perm.to_vec();
            sorted.sort_unstable();
            need(sorted == (1..=n).collect::<Vec<_>>(), "permutation of 1..=n expected")?;
            let zl = |i: usize| t_letter(i);
            let mut middle = Word::empty();
            for &p in perm {
                middle.push(zl(p)?);
            }
            let mut t = Word::empty();
            for i in 1..=n {
                t.push(t_letter(n + i)?);
                t.push(zl(i)?);
            }
            Ok(Identity::new(cat(&[&xx, &middle, &xx, &t]), cat(&[&xp(2), &middle, &t])))
        }
    }
}

/// Named fixed identities used by the catalog.
pub fn named(name: &str) -> Option<Identity> {
    let text = match name {
        "xtyzxy=xtyzyx" => "xtyzxy = xtyzyx",
        "xtxyzy=xtyxzy" => "xtxyzy = xtyxzy",
        "xyx=xyxx" => "xyx = xyx^2",
        "xxy=xxyx" => "x^2y = x^2yx",
        "xxyy=yyxx" => "x^2y^2 = y^2x^2",
        "xyzxy=yxzxy" => "xyzxy = yxzxy",
        "xyxztx=xyxzxtx" => "xyxztx = xyxzxtx",
        "xzxyxty=xzyxty" => "xzxyxty = xzyxty",
        "yxxtxy=xyxtxy" => "yx^2txy = xyxtxy",
        "xxytxy=xyxtxy" => "x^2ytxy = xyxtxy",
        "xxy=xyx" => "x^2y = xyx",
        "xyx=yxx" => "xyx = yx^2",
        "xxy=yxx" => "x^2y = yx^2",
        "xy=yx" => "xy = yx",
        "x=xx" => "x = x^2",
        "x=1" => "x = ",
        _ => {
            return FamilyInstance::parse(name).ok().and_then(|f| f.identity().ok());
        }
    };
    Some(ident(text))
}

pub fn named_or_panic(name: &str) -> Identity {
    named(name).unwrap_or_else(|| panic!("unknown identity name {name}"))
}

/// Parameter ranges for one family inside a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRange {
    pub family: Family,
    pub ranges: Vec<RangeInclusive<usize>>,
}

impl FamilyRange {
    pub fn new(family: Family, ranges: &[RangeInclusive<usize>]) -> FamilyRange {
        FamilyRange { family, ranges: ranges.to_vec() }
    }

    /// All members within the ranges; combinations violating a family's
    /// own constraints (e.g. `j > n`) are skipped.
    pub fn instances(&self) -> Vec<FamilyInstance> {
        let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
        for r in &self.ranges {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    r.clone().map(move |v| {
                        let mut c = c.clone();
                        c.push(v);
                        c
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for params in combos {
            if self.family == Family::JPerm {
                for p in permutations(params[0]) {
                    let inst = FamilyInstance { family: Family::JPerm, params: params.clone(), perm: p };
                    if inst.identity().is_ok() {
                        out.push(inst);
                    }
                }
            } else {
                let inst = FamilyInstance::new(self.family, &params);
                if inst.identity().is_ok() {
                    out.push(inst);
                }
            }
        }
        out
    }

    pub fn contains(&self, inst: &FamilyInstance) -> bool {
        inst.family == self.family
            && inst.params.len() == self.ranges.len()
            && inst.params.iter().zip(&self.ranges).all(|(p, r)| r.contains(p))
    }
}

/// Permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

/// A finite set of identities plus bounded families. When `dual` is set,
/// every family instance is reversed (the fixed part is stored reversed).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySystem {
    pub fixed: Vec<(String, Identity)>,
    pub families: Vec<FamilyRange>,
    pub dual: bool,
}

impl IdentitySystem {
    pub fn new() -> IdentitySystem {
        IdentitySystem::default()
    }

    /// Builds a system from names understood by [`named`]; family instances
    /// such as `alpha[1]` are accepted as fixed members.
    pub fn from_names(names: &[&str]) -> IdentitySystem {
        let mut s = IdentitySystem::new();
        for n in names {
            s.push_named(n);
        }
        s
    }

    pub fn push_named(&mut self, name: &str) {
        let id = named_or_panic(name);
        self.fixed.push((name.to_string(), id));
    }

    pub fn push(&mut self, name: impl Into<String>, id: Identity) {
        self.fixed.push((name.into(), id));
    }

    /// Adds the `;`-separated items of `text`: stored names (`xyx=xyxx`,
    /// `kappa[1,0]`) are added under their name, anything else is parsed as
    /// an identity and added anonymously.
    pub fn extend_from_text(&mut self, text: &str) -> Result<()> {
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            match named(item) {
                Some(id) => self.push(item, id),
                None => self.push_anonymous(crate::word::parse_identity(item)?),
            }
        }
        Ok(())
    }

    /// Adds an identity under its own text as name.
    pub fn push_anonymous(&mut self, id: Identity) {
        let name = compact(&id);
        self.fixed.push((name, id));
    }

    pub fn with_family(mut self, family: Family, ranges: &[RangeInclusive<usize>]) -> IdentitySystem {
        self.families.push(FamilyRange::new(family, ranges));
        self
    }

    pub fn union(&self, other: &IdentitySystem) -> IdentitySystem {
        let mut out = self.materialize();
        for (n, id) in other.members() {
            if !out.fixed.iter().any(|(m, _)| *m == n) {
                out.fixed.push((n, id));
            }
        }
        out
    }

    /// Converts to a system with only fixed members (families expanded,
    /// duality applied).
    pub fn materialize(&self) -> IdentitySystem {
        IdentitySystem { fixed: self.members(), families: Vec::new(), dual: false }
    }

    /// Every member with its name. Dual family instances carry a `~` prefix.
    pub fn members(&self) -> Vec<(String, Identity)> {
        let mut out = self.fixed.clone();
        for fr in &self.families {
            for inst in fr.instances() {
                let id = inst.identity().expect("instances are valid");
                if self.dual {
                    out.push((format!("~{inst}"), id.dual()));
                } else {
                    out.push((inst.to_string(), id));
                }
            }
        }
        out
    }

    pub fn dual_system(&self) -> IdentitySystem {
        IdentitySystem {
            fixed: self
                .fixed
                .iter()
                .map(|(n, id)| (dual_name(n), id.dual()))
                .collect(),
            families: self.families.clone(),
            dual: !self.dual,
        }
    }

    /// Resolves a member by name, including family instances within range.
    pub fn lookup(&self, name: &str) -> Option<Identity> {
        if let Some((_, id)) = self.fixed.iter().find(|(n, _)| n == name) {
            return Some(id.clone());
        }
        let (want_dual, bare) = match name.strip_prefix('~') {
            Some(b) => (true, b),
            None => (false, name),
        };
        if want_dual != self.dual {
            return None;
        }
        let inst = FamilyInstance::parse(bare).ok()?;
        if self.families.iter().any(|fr| fr.contains(&inst)) {
            let id = inst.identity().ok()?;
            return Some(if self.dual { id.dual() } else { id });
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty() && self.families.is_empty()
    }
}

fn dual_name(n: &str) -> String {
    match n.strip_prefix('~') {
        Some(b) => b.to_string(),
        None => format!("~{n}"),
    }
}

/// Single-token text form `lhs=rhs` of an identity.
pub fn compact(id: &Identity) -> String {
    format!("{}={}", id.lhs, id.rhs)
}

/// Maps names of the fixed members to their identities.
pub fn name_index(sys: &IdentitySystem) -> BTreeMap<String, Identity> {
    sys.members().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn inst(f: Family, p: &[usize]) -> Identity {
        family(f, p, &[]).unwrap()
    }

    #[test]
    fn alpha_one() {
        // x y t1 x t2 y with t1 = b, t2 = c
        assert_eq!(inst(Family::Alpha, &[1]), ident("xybxcy = yxbxcy"));
    }

    #[test]
    fn kappa_one_zero() {
        // t0 x t1 x with t0 = a, t1 = b
        assert_eq!(inst(Family::Kappa, &[1, 0]), ident("axbx = ax^2bx"));
        assert_eq!(inst(Family::Kappa, &[2, 1]), ident("axbxcx = axbx^2cx"));
        assert!(family(Family::Kappa, &[1, 2], &[]).is_err());
    }

    #[test]
    fn delta_one_two() {
        assert_eq!(inst(Family::Delta, &[1, 2]), ident("xybx^2cy^2 = yxbx^2cy^2"));
    }

    #[test]
    fn beta_gamma_shapes() {
        assert_eq!(inst(Family::Beta, &[1]), ident("yx^2cy = xyxcy"));
        assert_eq!(inst(Family::Gamma, &[1]), ident("x^2ybxcy = xyxbxcy"));
        assert_eq!(inst(Family::GammaPrime, &[1]), ident("x^2ycy = xyxcy"));
    }

    #[test]
    fn parametric_basics() {
        assert_eq!(inst(Family::Pow, &[2]), ident("x^2 = x^3"));
        assert_eq!(inst(Family::XyxN, &[2]), ident("xyx^2 = x^2yx^2"));
        assert_eq!(inst(Family::XnyzxN, &[1]), ident("xyzx = xyxzx"));
        assert_eq!(inst(Family::XnyxnzxN, &[2]), ident("x^2yx^2zx^2 = x^2yzx^2"));
        assert_eq!(inst(Family::Deletion, &[1]), ident("xbxyzxcx = xbxyxzxcx"));
        assert!(family(Family::Alpha, &[0], &[]).is_err());
    }

    #[test]
    fn jperm_instances() {
        let id = family(Family::JPerm, &[2], &[2, 1]).unwrap();
        // x z2 z1 x t1 z1 t2 z2 with z_i = band[i], t_i = band[n+i]
        assert_eq!(id, ident("xcbxdbec = x^2cbdbec"));
        let fr = FamilyRange::new(Family::JPerm, &[1..=3]);
        assert_eq!(fr.instances().len(), 1 + 2 + 6);
    }

    #[test]
    fn instance_names_roundtrip() {
        for s in ["alpha[2]", "kappa[2,1]", "jperm[3;2,3,1]", "delta[1,2]"] {
            assert_eq!(FamilyInstance::parse(s).unwrap().to_string(), s);
        }
        assert!(FamilyInstance::parse("kappa[1,5]").is_err());
        assert!(FamilyInstance::parse("nope[1]").is_err());
    }

    #[test]
    fn system_lookup_and_dual() {
        let s = IdentitySystem::from_names(&["xyx=xyxx"]).with_family(Family::Alpha, &[1..=2]);
        assert_eq!(s.members().len(), 3);
        assert_eq!(s.lookup("alpha[2]"), Some(inst(Family::Alpha, &[2])));
        assert_eq!(s.lookup("alpha[3]"), None);
        let d = s.dual_system();
        assert_eq!(d.lookup("~xyx=xyxx"), Some(ident("xyx = x^2yx")));
        assert_eq!(d.lookup("~alpha[1]"), Some(inst(Family::Alpha, &[1]).dual()));
        assert_eq!(d.lookup("alpha[1]"), None);
        assert_eq!(d.dual_system(), s);
        assert_eq!(named("x=1").unwrap().rhs, w(""));
    }
}
