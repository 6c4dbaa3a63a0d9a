//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure. Runs as a plain binary so the lines are always printed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use monoid_varieties::catalog::{Catalog, CatalogBudget, Truth};
use monoid_varieties::derive::{derive, verify_trace, Budget};
use monoid_varieties::normal::{collapsed_length_bound, normalization_systems, normalize_rigid, Rigid};
use monoid_varieties::oracle::{explain_f, explain_q, saturate, word_problem_f, word_problem_q};
use monoid_varieties::rees::{build_s, is_isoterm, words_up_to};
use monoid_varieties::replay::{basis_f, basis_q, replay_library};
use monoid_varieties::system::{family, Family, IdentitySystem};
use monoid_varieties::{ident, letter, w, Identity, Letter, SatOutcome, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(start: Instant, limit_secs: u64) -> (bool, Duration) {
    let t = start.elapsed();
    (t <= Duration::from_secs(limit_secs), t)
}

/// Criterion word problem versus bounded derivation and bounded closure
/// over all pairs of words on {x, y} of length at most 5.
fn criterion_agreement(sys: &IdentitySystem, crit: fn(&Identity) -> bool, label: &str) -> Outcome {
    let start = Instant::now();
    let alphabet = [letter('x'), letter('y')];
    let words = words_up_to(&alphabet, 5);
    let bc = saturate(sys, 2, 8).expect("closure fits");
    let budget = Budget::new(10, 1_000_000);
    let (mut ordered, mut holding, mut bad) = (0, 0, Vec::new());
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            // derivability and the closure are symmetric, so each unordered
            // pair covers both orientations
            ordered += 2;
            let id = Identity::new(u.clone(), v.clone());
            let merged = bc.same_class(u, v) == Some(true);
            if crit(&id) {
                holding += 2;
                let found = derive(u, v, sys, budget).trace().map(|t| verify_trace(t, sys).ok() == Some(v.clone()));
                if found != Some(true) || !merged {
                    bad.push(format!("{id} (derive {found:?}, closure {merged})"));
                }
            } else if merged {
                bad.push(format!("{id} merged but criterion says no"));
            }
        }
    }
    let (fast, t) = within(start, 600);
    check(
        bad.is_empty() && fast,
        format!(
            "{label}: {ordered} ordered pairs, {holding} hold, {} disagreements{}, {:.1}s",
            bad.len(),
            bad.first().map(|s| format!(" (first: {s})")).unwrap_or_default(),
            t.as_secs_f64()
        ),
    )
}

fn fixed_facts() -> Outcome {
    let mut fails = Vec::new();
    let mut expect = |name: &str, got: bool| {
        if !got {
            fails.push(name.to_string());
        }
    };
    let xyxn2 = family(Family::XyxN, &[2], &[]).unwrap();
    expect("F satisfies xyzxy = yxzxy", word_problem_f(&ident("xyzxy = yxzxy")));
    expect("F violates xyx^2 = x^2yx^2", !word_problem_f(&xyxn2));
    expect("Q satisfies xyx^2 = x^2yx^2", word_problem_q(&ident("xyx^2 = x^2yx^2")));
    expect("Q violates xyxztx = xyxzxtx", !word_problem_q(&ident("xyxztx = xyxzxtx")));
    for n in 1..=2 {
        let eq = family(Family::XnyzxN, &[n], &[]).unwrap();
        expect(&format!("Q violates x^nyzx^n = x^nyxzx^n at n={n}"), !word_problem_q(&eq));
    }
    let s = build_s(&[w("xyx")]).unwrap();
    expect("S(xyx) has 7 elements", s.size() == 7);
    expect("S(xyx) satisfies x^2 = x^3", matches!(s.base.satisfies(&ident("x^2 = x^3")), SatOutcome::Holds));
    expect("S(xyx) violates xy = yx", matches!(s.base.satisfies(&ident("xy = yx")), SatOutcome::Fails(_)));
    let iso = is_isoterm(&w("xyx"), |id| Some(word_problem_f(id)), 4).unwrap();
    expect("xyx is not an isoterm for F", iso.is_isoterm() == Some(false));
    check(fails.is_empty(), if fails.is_empty() { "10 facts exact".to_string() } else { format!("failed: {}", fails.join("; ")) })
}

fn replay() -> Outcome {
    let start = Instant::now();
    let reports = replay_library();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let (fast, t) = within(start, 120);
    check(
        failed.is_empty() && fast,
        format!("{}/{} chains verified, {:.1}s{}", reports.len() - failed.len(), reports.len(), t.as_secs_f64(),
            if failed.is_empty() { String::new() } else { format!(", failing: {}", failed.join(", ")) }),
    )
}

fn lattice() -> Outcome {
    let start = Instant::now();
    let checks = Catalog::builtin().verify_lattice_bottom(&CatalogBudget::default()).unwrap();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.claim.as_str()).collect();
    let (fast, t) = within(start, 300);
    check(
        failed.is_empty() && fast,
        format!("{}/{} lattice claims definite, {:.1}s{}", checks.len() - failed.len(), checks.len(), t.as_secs_f64(),
            if failed.is_empty() { String::new() } else { format!(", failing: {}", failed.join(", ")) }),
    )
}

fn is_factor(u: &Word, of: &[Word]) -> bool {
    let (u, n) = (u.letters(), u.len());
    of.iter().any(|v| n == 0 || v.letters().windows(n).any(|f| f == u))
}

fn rees_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let alphabet = [letter('x'), letter('y'), letter('z')];
    let mut fails = Vec::new();
    for _ in 0..50 {
        let k = rng.gen_range(1..=3);
        let ws: Vec<Word> = (0..k)
            .map(|_| {
                let len = rng.gen_range(1..=6);
                Word((0..len).map(|_| alphabet[rng.gen_range(0..3)]).collect())
            })
            .collect();
        let s = build_s(&ws).unwrap();
        let mut factors: BTreeSet<Vec<Letter>> = BTreeSet::new();
        for u in &ws {
            let l = u.letters();
            for i in 0..=l.len() {
                for j in i..=l.len() {
                    factors.insert(l[i..j].to_vec());
                }
            }
        }
        let mut ok = s.base.validate().is_ok()
            && s.base.is_aperiodic()
            && s.base.idempotents_commute()
            && s.size() == factors.len() + 1;
        for a in 0..s.size() {
            for b in 0..s.size() {
                let expected = match (&s.elem_words[a], &s.elem_words[b]) {
                    (Some(u), Some(v)) => {
                        let uv = u.concat(v);
                        if is_factor(&uv, &ws) { s.element_of(&uv) } else { s.zero }
                    }
                    _ => s.zero,
                };
                ok &= s.base.mul(a, b) == expected;
            }
        }
        if !ok {
            fails.push(format!("{ws:?}"));
        }
    }
    check(fails.is_empty(), format!("50 random W, {} structural failures", fails.len()))
}

fn nine() -> Outcome {
    let start = Instant::now();
    let cat = Catalog::builtin();
    let budget = CatalogBudget::default();
    let q = cat.excludes_nine("Q", 2, &budget).unwrap();
    let unknown: Vec<&str> = q.contained.iter().filter(|(_, v)| v.value != Truth::False).map(|(x, _)| x.as_str()).collect();
    let p = cat.excludes_nine("P", 2, &budget).unwrap();
    let p_self = p.contained.iter().any(|(x, v)| x == "P" && v.value == Truth::True);
    let (fast, t) = within(start, 900);
    check(
        unknown.is_empty() && q.cross == Truth::True && p_self && p.cross == Truth::False && fast,
        format!(
            "Q excludes {}/9 (cross {}), P contains itself: {p_self} (cross {}), {:.1}s",
            9 - unknown.len(),
            q.cross,
            p.cross,
            t.as_secs_f64()
        ),
    )
}

fn rigid_sample(rng: &mut ChaCha8Rng) -> (Identity, usize) {
    loop {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(0..=12);
        let exps = |rng: &mut ChaCha8Rng| -> Vec<usize> {
            (0..=m)
                .map(|i| if n == 1 && (i == 0 || i == m) { rng.gen_range(0..=1) } else { rng.gen_range(1..=n) })
                .collect()
        };
        let (e, f) = (exps(rng), exps(rng));
        let dividers = (0..m).map(|i| letter("abcdefghijklm".as_bytes()[i] as char)).collect();
        let id = Rigid { x: letter('x'), dividers, e, f }.identity();
        if id.is_trivial() || id.is_efficient() != Ok(true) {
            continue;
        }
        return (id, n);
    }
}

fn rigid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut fails, mut collapsed) = (Vec::new(), 0);
    for _ in 0..100 {
        let (id, n) = rigid_sample(&mut rng);
        let j = rng.gen_range(0..=n);
        let res = match normalize_rigid(&id, n, j) {
            Ok(r) => r,
            Err(e) => {
                fails.push(format!("{id}: {e}"));
                continue;
            }
        };
        let (s1, s2, s3) = normalization_systems(&res, n, j);
        let wide = res.widened();
        let mut ok = verify_trace(&res.lhs_trace, &s1).ok() == Some(wide.lhs.clone())
            && verify_trace(&res.rhs_trace, &s1).ok() == Some(wide.rhs.clone());
        if res.collapsed {
            collapsed += 1;
            ok &= verify_trace(&res.expand, &s2).ok() == Some(wide.rhs.clone())
                && verify_trace(&res.collapse, &s3).ok() == Some(res.output.rhs.clone());
        }
        let longest = res.output.lhs.len().max(res.output.rhs.len());
        ok &= longest <= 50 * n * n;
        if n == 1 {
            ok &= longest <= collapsed_length_bound(1);
        }
        if !ok {
            fails.push(format!("{id} -> {}", res.output));
        }
    }
    check(
        fails.is_empty(),
        format!(
            "100 rigid identities ({collapsed} collapsed), {} failures, n=1 bound {}{}",
            fails.len(),
            collapsed_length_bound(1),
            fails.first().map(|s| format!(" (first: {s})")).unwrap_or_default()
        ),
    )
}

fn report_json() -> String {
    let ids = ["xyzxy = yxzxy", "xyx^2 = x^2yx^2", "xyxztx = xyxzxtx", "x^2yzx^2 = x^2yxzx^2"];
    let criteria: Vec<(String, String)> = ids.iter().map(|s| (explain_f(&ident(s)), explain_q(&ident(s)).1)).collect();
    let trace = derive(&w("xybxcy"), &w("yxbxcy"), &basis_f(), Budget::new(9, 200_000));
    let classes = saturate(&basis_q(), 2, 6).unwrap().classes();
    serde_json::to_string(&(criteria, trace, classes)).unwrap()
}

fn determinism() -> Outcome {
    let runs: Vec<String> = (0..3).map(|_| report_json()).collect();
    let threaded = std::thread::spawn(report_json).join().unwrap();
    let same = runs.iter().all(|r| r == &runs[0]) && threaded == runs[0];
    check(same, format!("4 runs, {} bytes each, identical: {same}", runs[0].len()))
}

fn main() {
    let start = Instant::now();
    let results: Vec<(usize, &str, Outcome)> = std::thread::scope(|s| {
        let f = s.spawn(|| criterion_agreement(&basis_f(), word_problem_f, "F"));
        let q = s.spawn(|| criterion_agreement(&basis_q(), word_problem_q, "Q"));
        let n = s.spawn(nine);
        let rest = vec![
            (3, "fixed facts", fixed_facts()),
            (4, "replay library", replay()),
            (5, "lattice bottom", lattice()),
            (6, "S(W) structure", rees_structure()),
            (8, "rigid normalization", rigid()),
            (9, "determinism", determinism()),
        ];
        let mut all = vec![
            (1, "criterion/oracle agreement (F)", f.join().unwrap()),
            (2, "criterion/oracle agreement (Q)", q.join().unwrap()),
            (7, "nine excluded varieties", n.join().unwrap()),
        ];
        all.extend(rest);
        all.sort_by_key(|r| r.0);
        all
    });
    let mut failed = 0;
    for (i, name, o) in &results {
        println!("criterion {i} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
