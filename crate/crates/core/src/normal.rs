//! Word limiting and normalization of rigid identities.
//!
//! Both operations produce explicit derivation traces built step by step
//! from the identities `x^n = x^(n+1)`, `kappa[n,j]` and
//! `x^n y z x^n = x^n y x z x^n`; nothing here relies on search.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::derive::{apply_step, DerivationTrace, Direction, RewriteStep};
use crate::error::{Error, Result};
use crate::system::{family, t_letter, Family, IdentitySystem};
use crate::word::{letter, Identity, Letter, Word};

fn inst_name(fam: Family, params: &[usize]) -> String {
    let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
    format!("{}[{}]", fam.name(), ps.join(","))
}

/// `{x^n = x^(n+1), kappa[n,j], x^n y z x^n = x^n y x z x^n}`.
pub fn limiting_system(n: usize, j: usize) -> IdentitySystem {
    let mut s = IdentitySystem::new();
    s.push_named(&inst_name(Family::Pow, &[n]));
    s.push_named(&inst_name(Family::Kappa, &[n, j]));
    s.push_named(&inst_name(Family::XnyzxN, &[n]));
    s
}

/// `{x^n = x^(n+1), kappa[n,j]}`.
pub fn rigid_system(n: usize, j: usize) -> IdentitySystem {
    let mut s = IdentitySystem::new();
    s.push_named(&inst_name(Family::Pow, &[n]));
    s.push_named(&inst_name(Family::Kappa, &[n, j]));
    s
}

/// Incrementally built trace over a current word.
struct Builder {
    trace: DerivationTrace,
    cur: Word,
}

impl Builder {
    fn new(w: &Word) -> Builder {
        Builder { trace: DerivationTrace { start: w.clone(), steps: Vec::new() }, cur: w.clone() }
    }

    /// Applies `id` in `dir` to the factor `cur[start..end]` under `xi`.
    fn apply(&mut self, name: &str, id: &Identity, dir: Direction, start: usize, end: usize, xi: BTreeMap<Letter, Word>) -> Result<()> {
        let step = RewriteStep {
            name: name.to_string(),
            identity: id.clone(),
            direction: dir,
            left: self.cur.factor(0, start),
            right: self.cur.factor(end, self.cur.len()),
            xi,
        };
        self.cur = apply_step(&self.cur, &step)?;
        self.trace.steps.push(step);
        Ok(())
    }

    fn occurrences(&self, x: Letter) -> Vec<usize> {
        self.cur.letters().iter().enumerate().filter(|(_, &y)| y == x).map(|(i, _)| i).collect()
    }

    /// `kappa[n,j]` forward at the `n + 1` positions `q` (all holding `x`):
    /// doubles the occurrence `q[j]`.
    fn kappa_raise(&mut self, x: Letter, q: &[usize], n: usize, j: usize) -> Result<()> {
        let id = family(Family::Kappa, &[n, j], &[])?;
        let px = letter('x');
        let mut xi = BTreeMap::new();
        xi.insert(px, Word(vec![x]));
        xi.insert(t_letter(0)?, Word::empty());
        for i in 1..=n {
            xi.insert(t_letter(i)?, self.cur.factor(q[i - 1] + 1, q[i]));
        }
        self.apply(&inst_name(Family::Kappa, &[n, j]), &id, Direction::Forward, q[0], q[n] + 1, xi)
    }

    /// `kappa[n,j]` backward: `q[j]` and `q[j] + 1` both hold `x`; removes one.
    fn kappa_lower(&mut self, x: Letter, q: &[usize], n: usize, j: usize) -> Result<()> {
        let id = family(Family::Kappa, &[n, j], &[])?;
        let mut xi = BTreeMap::new();
        xi.insert(letter('x'), Word(vec![x]));
        xi.insert(t_letter(0)?, Word::empty());
        for i in 1..=n {
            let from = if i - 1 == j { q[i - 1] + 2 } else { q[i - 1] + 1 };
            xi.insert(t_letter(i)?, self.cur.factor(from, q[i]));
        }
        let end = if n == j { q[n] + 2 } else { q[n] + 1 };
        self.apply(&inst_name(Family::Kappa, &[n, j]), &id, Direction::Backward, q[0], end, xi)
    }
}

/// Positions used by `kappa` when the `j`-th block of an `(n+1)`-block
/// window starting at occurrence index `base` currently has `run` copies.
fn window(occ: &[usize], base: usize, run: usize, n: usize, j: usize) -> Vec<usize> {
    let mut q = Vec::with_capacity(n + 1);
    for i in 0..j {
        q.push(occ[base + i]);
    }
    q.push(occ[base + j + run - 1]);
    for i in 1..=(n - j) {
        q.push(occ[base + j + run - 1 + i]);
    }
    q
}

/// Deletes the `(n+2)`-th occurrence of `x`; needs at least `2n+3`
/// occurrences. Expands the deletion schema into `kappa` raisings, one
/// application of `x^n y z x^n = x^n y x z x^n` and `kappa` lowerings.
fn delete_occurrence(b: &mut Builder, x: Letter, n: usize, j: usize) -> Result<()> {
    // raise block j of the first window, then of the second window
    for k in 1..n {
        let occ = b.occurrences(x);
        let q = window(&occ, 0, k, n, j);
        b.kappa_raise(x, &q, n, j)?;
    }
    let second = n + 1 + (n - 1) + 1; // first window holds n + 1 + (n - 1) occurrences, then the deleted one
    for k in 1..n {
        let occ = b.occurrences(x);
        let q = window(&occ, second, k, n, j);
        b.kappa_raise(x, &q, n, j)?;
    }
    // x^n ξ(y) x ξ(z) x^n  ->  x^n ξ(y) ξ(z) x^n
    let occ = b.occurrences(x);
    let first_run = j; // index in occ of the first x of the raised run
    let mid = n + 1 + (n - 1);
    let second_run = second + j;
    let id = family(Family::XnyzxN, &[n], &[])?;
    let mut xi = BTreeMap::new();
    xi.insert(letter('x'), Word(vec![x]));
    xi.insert(letter('y'), b.cur.factor(occ[first_run + n - 1] + 1, occ[mid]));
    xi.insert(letter('z'), b.cur.factor(occ[mid] + 1, occ[second_run]));
    b.apply(&inst_name(Family::XnyzxN, &[n]), &id, Direction::Backward, occ[first_run], occ[second_run + n - 1] + 1, xi)?;
    // lower both runs again, second window first so positions of the first stay put
    let second_after = n + 1 + (n - 1);
    for k in (2..=n).rev() {
        let occ = b.occurrences(x);
        let mut q = window(&occ, second_after, k, n, j);
        q[j] = occ[second_after + j + k - 2];
        b.kappa_lower(x, &q, n, j)?;
    }
    for k in (2..=n).rev() {
        let occ = b.occurrences(x);
        let mut q = window(&occ, 0, k, n, j);
        q[j] = occ[j + k - 2];
        b.kappa_lower(x, &q, n, j)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Limited {
    pub word: Word,
    #[serde(skip)]
    pub trace: DerivationTrace,
}

/// Rewrites `w` into a `(2n+2)`-limited word by repeatedly deleting the
/// `(n+2)`-th occurrence of the least over-represented letter. The trace
/// uses [`limiting_system`].
pub fn limit_word(w: &Word, n: usize, j: usize) -> Result<Limited> {
    if n == 0 || j > n {
        return Err(Error::Parameter("need n >= 1 and 0 <= j <= n".into()));
    }
    let mut b = Builder::new(w);
    loop {
        let over = b.cur.counts().into_iter().find(|&(_, c)| c > 2 * n + 2).map(|(x, _)| x);
        match over {
            Some(x) => delete_occurrence(&mut b, x, n, j)?,
            None => break,
        }
    }
    Ok(Limited { word: b.cur.clone(), trace: b.trace })
}

/// Exponents of a rigid identity `x^e0 t1 x^e1 ... tm x^em = x^f0 t1 x^f1 ... tm x^fm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rigid {
    pub x: Letter,
    pub dividers: Vec<Letter>,
    pub e: Vec<usize>,
    pub f: Vec<usize>,
}

impl Rigid {
    fn side(x: Letter, dividers: &[Letter], exps: &[usize]) -> Word {
        let mut out = Word::power(x, exps[0]);
        for (t, &k) in dividers.iter().zip(&exps[1..]) {
            out.push(*t);
            out.extend(&Word::power(x, k));
        }
        out
    }

    pub fn identity(&self) -> Identity {
        Identity::new(Rigid::side(self.x, &self.dividers, &self.e), Rigid::side(self.x, &self.dividers, &self.f))
    }

    pub fn m(&self) -> usize {
        self.dividers.len()
    }
}

/// Recognizes the rigid shape: one multiple letter, the same simple letters
/// in the same order on both sides.
pub fn parse_rigid(id: &Identity) -> Result<Rigid> {
    let shape = |msg: &str| Error::Shape(format!("{id} is not rigid: {msg}"));
    let (_, mu) = id.lhs.letter_classes();
    let (_, mv) = id.rhs.letter_classes();
    let multiple: Vec<Letter> = mu.union(&mv).copied().collect();
    let x = match multiple.as_slice() {
        [] => id.lhs.letters().first().or(id.rhs.letters().first()).copied().unwrap_or(letter('x')),
        [x] => *x,
        _ => return Err(shape("more than one repeated letter")),
    };
    let split = |side: &Word| -> (Vec<Letter>, Vec<usize>) {
        let mut divs = Vec::new();
        let mut exps = vec![0];
        for &y in side.letters() {
            if y == x {
                *exps.last_mut().expect("non-empty") += 1;
            } else {
                divs.push(y);
                exps.push(0);
            }
        }
        (divs, exps)
    };
    let (du, e) = split(&id.lhs);
    let (dv, f) = split(&id.rhs);
    if du != dv {
        return Err(shape("divider sequences differ"));
    }
    Ok(Rigid { x, dividers: du, e, f })
}

#[derive(Debug, Clone, Serialize)]
pub struct Normalized {
    pub input: Identity,
    pub output: Identity,
    /// `u -> u1` under [`rigid_system`].
    #[serde(skip)]
    pub lhs_trace: DerivationTrace,
    /// `v -> v1` under [`rigid_system`].
    #[serde(skip)]
    pub rhs_trace: DerivationTrace,
    /// `u1 -> v1` derived from the output identity alone.
    #[serde(skip)]
    pub expand: DerivationTrace,
    /// `u' -> v'` derived from `u1 = v1` and `x^n = x^(n+1)`.
    #[serde(skip)]
    pub collapse: DerivationTrace,
    pub collapsed: bool,
}

impl Normalized {
    pub fn widened(&self) -> Identity {
        Identity::new(self.lhs_trace.end(), self.rhs_trace.end())
    }
}

/// Normalizes a rigid, efficient, `(n+1)`-free identity. When `m > 2n` the
/// middle exponents (blocks `n..=m-n`, which must be positive) are raised to
/// `n` by `kappa[n,j]` and the middle `t_i x^n` blocks are collapsed into one.
/// Trivial identities and identities with `m <= 2n` are returned unchanged.
pub fn normalize_rigid(id: &Identity, n: usize, j: usize) -> Result<Normalized> {
    if n == 0 || j > n {
        return Err(Error::Parameter("need n >= 1 and 0 <= j <= n".into()));
    }
    let r = parse_rigid(id)?;
    if !id.is_trivial() && !id.is_efficient()? {
        return Err(Error::Shape(format!("{id} is not efficient")));
    }
    if r.e.iter().chain(&r.f).any(|&k| k > n) {
        return Err(Error::Shape(format!("{id} is not {}-free", n + 1)));
    }
    let unchanged = |id: &Identity| Normalized {
        input: id.clone(),
        output: id.clone(),
        lhs_trace: DerivationTrace { start: id.lhs.clone(), steps: Vec::new() },
        rhs_trace: DerivationTrace { start: id.rhs.clone(), steps: Vec::new() },
        expand: DerivationTrace { start: id.lhs.clone(), steps: Vec::new() },
        collapse: DerivationTrace { start: id.lhs.clone(), steps: Vec::new() },
        collapsed: false,
    };
    let m = r.m();
    if m <= 2 * n || id.is_trivial() {
        return Ok(unchanged(id));
    }
    for exps in [&r.e, &r.f] {
        for k in n..=m - n {
            let before: usize = exps[..k].iter().sum();
            let after: usize = exps[k + 1..].iter().sum();
            if exps[k] == 0 || (exps[k] < n && (before < j || after < n - j)) {
                return Err(Error::Shape(format!("{id}: block {k} cannot be raised by kappa[{n},{j}]")));
            }
        }
    }
    let raise = |side: &Word, exps: &[usize]| -> Result<DerivationTrace> {
        let mut b = Builder::new(side);
        for k in n..=m - n {
            for _ in exps[k]..n {
                let occ = b.occurrences(r.x);
                // block k starts after all x's of blocks 0..k
                let before: usize = exps[..k].iter().sum();
                let run = occ.len() - exps[k + 1..].iter().sum::<usize>() - before;
                // choose j occurrences before, the run's last x, n - j after
                let mut q: Vec<usize> = occ[before - j..before].to_vec();
                q.push(occ[before + run - 1]);
                q.extend_from_slice(&occ[before + run..before + run + (n - j)]);
                b.kappa_raise(r.x, &q, n, j)?;
            }
        }
        Ok(b.trace)
    };
    let lhs_trace = raise(&id.lhs, &r.e)?;
    let rhs_trace = raise(&id.rhs, &r.f)?;
    let mut e1 = r.e.clone();
    let mut f1 = r.f.clone();
    for k in n..=m - n {
        e1[k] = n;
        f1[k] = n;
    }
    // keep blocks 0..n-1, t_n x^n, and m-n+1..m
    let keep: Vec<usize> = (0..n).chain(std::iter::once(n)).chain(m - n + 1..=m).collect();
    let pick = |exps: &[usize]| keep.iter().map(|&i| exps[i]).collect::<Vec<_>>();
    let divs: Vec<Letter> = keep[1..].iter().map(|&i| r.dividers[i - 1]).collect();
    let short = Rigid { x: r.x, dividers: divs, e: pick(&e1), f: pick(&f1) }.identity();
    let wide = Identity::new(lhs_trace.end(), rhs_trace.end());
    let tn = r.dividers[n - 1];
    let middle: Vec<Letter> = r.dividers[n..=m - n - 1].to_vec();

    // expand: apply the short identity to u1 with t_n -> t_n x^n t_(n+1) ... x^n t_(m-n)
    let mut image = Word(vec![tn]);
    for &t in &middle {
        image.extend(&Word::power(r.x, n));
        image.push(t);
    }
    let mut xi: BTreeMap<Letter, Word> = short.content().into_iter().map(|y| (y, Word(vec![y]))).collect();
    xi.insert(tn, image);
    let name = crate::system::compact(&short);
    let mut eb = Builder::new(&wide.lhs);
    eb.apply(&name, &short, Direction::Forward, 0, wide.lhs.len(), xi)?;

    // collapse: pump x^n after t_n, apply the wide identity with the middle letters erased, pump back
    let extra = middle.len();
    let pow = family(Family::Pow, &[n], &[])?;
    let pow_name = inst_name(Family::Pow, &[n]);
    let mut cb = Builder::new(&short.lhs);
    let tpos = |w: &Word| w.letters().iter().position(|&y| y == tn).expect("divider present");
    let mut pow_xi = BTreeMap::new();
    pow_xi.insert(letter('x'), Word(vec![r.x]));
    for _ in 0..extra * n {
        let p = tpos(&cb.cur);
        cb.apply(&pow_name, &pow, Direction::Forward, p + 1, p + 1 + n, pow_xi.clone())?;
    }
    let mut wxi: BTreeMap<Letter, Word> = wide.content().into_iter().map(|y| (y, Word(vec![y]))).collect();
    for &t in &middle {
        wxi.insert(t, Word::empty());
    }
    let wide_name = crate::system::compact(&wide);
    let len = cb.cur.len();
    cb.apply(&wide_name, &wide, Direction::Forward, 0, len, wxi)?;
    for _ in 0..extra * n {
        let p = tpos(&cb.cur);
        cb.apply(&pow_name, &pow, Direction::Backward, p + 1, p + 2 + n, pow_xi.clone())?;
    }
    Ok(Normalized {
        input: id.clone(),
        output: short,
        lhs_trace,
        rhs_trace,
        expand: eb.trace,
        collapse: cb.trace,
        collapsed: true,
    })
}

/// Length bound for the collapsed shape: `n + (n^2 - 1) + (n + 1) + n(n + 1)`.
pub fn collapsed_length_bound(n: usize) -> usize {
    n + (n * n - 1) + (n + 1) + n * (n + 1)
}

/// Systems under which the four traces of a [`Normalized`] verify.
pub fn normalization_systems(res: &Normalized, n: usize, j: usize) -> (IdentitySystem, IdentitySystem, IdentitySystem) {
    let mut expand = IdentitySystem::new();
    expand.push_anonymous(res.output.clone());
    let mut collapse = IdentitySystem::new();
    collapse.push_named(&inst_name(Family::Pow, &[n]));
    collapse.push_anonymous(res.widened());
    (rigid_system(n, j), expand, collapse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive::verify_trace;
    use crate::word::{ident, w};

    #[test]
    fn limit_n1() {
        let word = w("axbxcxdxex");
        let res = limit_word(&word, 1, 0).unwrap();
        assert_eq!(res.word.occurrences(letter('x')), 4);
        assert_eq!(verify_trace(&res.trace, &limiting_system(1, 0)).unwrap(), res.word);
    }

    #[test]
    fn limit_n2_all_j() {
        let word = w("xaxbxcxdxexfxgx");
        for j in 0..=2 {
            let res = limit_word(&word, 2, j).unwrap();
            assert!(res.word.is_n_limited(6));
            assert_eq!(verify_trace(&res.trace, &limiting_system(2, j)).unwrap(), res.word);
        }
    }

    #[test]
    fn limit_noop() {
        let res = limit_word(&w("xyxy"), 1, 0).unwrap();
        assert_eq!(res.word, w("xyxy"));
        assert!(res.trace.is_empty());
    }

    #[test]
    fn rigid_parse() {
        let r = parse_rigid(&ident("xbx = xbx^2")).unwrap();
        assert_eq!(r.e, vec![1, 1]);
        assert_eq!(r.f, vec![1, 2]);
        assert!(parse_rigid(&ident("xyxy = yxyx")).is_err());
    }

    #[test]
    fn short_rigid_unchanged() {
        let id = ident("xbx = xbx^2");
        let res = normalize_rigid(&id, 2, 0).unwrap();
        assert_eq!(res.output, id);
        assert!(!res.collapsed);
    }

    #[test]
    fn collapse_n2() {
        let id = ident("x^2bxcxdx^2exfxgx = xbxcx^2dxex^2fxgx^2");
        for j in 0..=2 {
            let res = normalize_rigid(&id, 2, j).unwrap();
            assert!(res.output.lhs.len() <= collapsed_length_bound(2));
            let (s1, s2, s3) = normalization_systems(&res, 2, j);
            assert_eq!(verify_trace(&res.lhs_trace, &s1).unwrap(), res.widened().lhs);
            assert_eq!(verify_trace(&res.rhs_trace, &s1).unwrap(), res.widened().rhs);
            assert_eq!(verify_trace(&res.expand, &s2).unwrap(), res.widened().rhs);
            assert_eq!(verify_trace(&res.collapse, &s3).unwrap(), res.output.rhs);
        }
    }

    #[test]
    fn collapse_n1() {
        let id = ident("xaxbxcxdx = axbxcxdx");
        let res = normalize_rigid(&id, 1, 0).unwrap();
        assert!(res.collapsed);
        assert_eq!(res.output, ident("xaxdx = axdx"));
        assert!(res.output.lhs.len() <= collapsed_length_bound(1));
        let (s1, s2, s3) = normalization_systems(&res, 1, 0);
        assert!(res.lhs_trace.is_empty());
        assert_eq!(verify_trace(&res.lhs_trace, &s1).unwrap(), id.lhs);
        assert_eq!(verify_trace(&res.expand, &s2).unwrap(), id.rhs);
        assert_eq!(verify_trace(&res.collapse, &s3).unwrap(), res.output.rhs);
    }

    #[test]
    fn trivial_unchanged() {
        let id = ident("xaxbxcxdx = xaxbxcxdx");
        assert_eq!(normalize_rigid(&id, 1, 0).unwrap().output, id);
    }

    #[test]
    fn raise_needs_room() {
        assert!(normalize_rigid(&ident("axbcxdx = axbxcxdx"), 1, 0).is_err());
        assert!(normalize_rigid(&ident("xyx = xyxx"), 1, 0).is_err());
    }
}
