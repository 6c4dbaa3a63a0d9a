//! A library of worked derivation chains. Each chain fixes an identity
//! system and a list of waypoints; consecutive waypoints are connected by
//! bounded search and the concatenated trace is replayed with
//! [`verify_trace`].

use serde::Serialize;

use crate::derive::{derive, verify_trace, Budget, DerivationTrace};
use crate::system::IdentitySystem;
use crate::word::{ident, w, Identity, Word};

#[derive(Debug, Clone)]
pub struct Chain {
    pub name: &'static str,
    pub system: IdentitySystem,
    pub waypoints: Vec<Word>,
    pub len_cap: usize,
}

impl Chain {
    fn new(name: &'static str, system: IdentitySystem, waypoints: &[&str], len_cap: usize) -> Chain {
        Chain { name, system, waypoints: waypoints.iter().map(|s| w(s)).collect(), len_cap }
    }

    /// The identity the chain proves: first waypoint = last waypoint.
    pub fn goal(&self) -> Identity {
        Identity::new(self.waypoints[0].clone(), self.waypoints.last().expect("non-empty").clone())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub name: String,
    pub goal: String,
    pub pass: bool,
    pub steps: usize,
    pub detail: String,
    #[serde(skip)]
    pub trace: Option<DerivationTrace>,
}

pub const MAX_STATES: usize = 500_000;

/// Connects the waypoints and verifies the resulting trace.
pub fn run_chain(chain: &Chain) -> ChainReport {
    let goal = chain.goal();
    let mut report = ChainReport {
        name: chain.name.to_string(),
        goal: goal.to_string(),
        pass: false,
        steps: 0,
        detail: String::new(),
        trace: None,
    };
    let budget = Budget::new(chain.len_cap, MAX_STATES);
    let mut trace = DerivationTrace { start: chain.waypoints[0].clone(), steps: Vec::new() };
    for pair in chain.waypoints.windows(2) {
        match derive(&pair[0], &pair[1], &chain.system, budget).trace() {
            Some(seg) => {
                trace = trace.then(seg.clone()).expect("segments chain");
            }
            None => {
                report.detail = format!("no derivation {} => {} within the budget", pair[0], pair[1]);
                return report;
            }
        }
    }
    match verify_trace(&trace, &chain.system) {
        Ok(end) if end == goal.rhs => {
            report.pass = true;
            report.steps = trace.len();
            report.detail = "verified".into();
        }
        Ok(end) => report.detail = format!("trace ends at {end}"),
        Err(e) => report.detail = e.to_string(),
    }
    report.trace = Some(trace);
    report
}

fn sys(names: &[&str], extra: &[(&str, &str)]) -> IdentitySystem {
    let mut s = IdentitySystem::from_names(names);
    for (name, text) in extra {
        s.push(*name, ident(text));
    }
    s
}

fn with(names: &[&str], ids: &[Identity]) -> IdentitySystem {
    let mut s = IdentitySystem::from_names(names);
    for id in ids {
        s.push_anonymous(id.clone());
    }
    s
}

/// Basis of F: `xyx = xyx^2`, `x^2y = x^2yx`, `x^2y^2 = y^2x^2`, `xyzxy = yxzxy`.
pub fn basis_f() -> IdentitySystem {
    IdentitySystem::from_names(&["xyx=xyxx", "xxy=xxyx", "xxyy=yyxx", "xyzxy=yxzxy"])
}

/// Basis of Q: `xyx = xyx^2`, `x^2y^2 = y^2x^2`, `xyx^2 = x^2yx^2`.
pub fn basis_q() -> IdentitySystem {
    IdentitySystem::from_names(&["xyx=xyxx", "xxyy=yyxx", "xyxn[2]"])
}

/// Every chain of the library.
pub fn library() -> Vec<Chain> {
    let sigma = ident("xybx^2 = yxbx^2");
    let tau = ident("xybx^2cx^2 = yxbx^2cx^2");
    vec![
        // sigma gives tau by substituting b -> b x^2 c
        Chain {
            name: "equivalent-identities-forward",
            system: with(&[], std::slice::from_ref(&sigma)),
            waypoints: vec![tau.lhs.clone(), tau.rhs.clone()],
            len_cap: 9,
        },
        // tau with c -> 1 and x^2 = x^3 gives sigma back
        Chain {
            name: "equivalent-identities-backward",
            system: with(&["pow[2]"], std::slice::from_ref(&tau)),
            waypoints: vec![sigma.lhs.clone(), w("xybx^4"), w("yxbx^4"), sigma.rhs.clone()],
            len_cap: 8,
        },
        // x t x = x^2 t (p = 1, q = 2, r = 0) multiplied by x^2 on the right
        Chain::new(
            "not-containing-F",
            sys(&["pow[2]"], &[("xtx=xxt", "xtx = x^2t")]),
            &["xyx^2", "xyx^3", "x^2yx^2", "x^3yx^2", "x^2yx^2"],
            6,
        ),
        // x^2 y x^2 z x^2 = x^2 y z x^2 from x t x t' x = x t t' x
        Chain::new(
            "not-containing-Q-first",
            sys(&["pow[2]"], &[("xyxzx=xyzx", "xyxzx = xyzx")]),
            &["x^2yx^2zx^2", "x^2yzx^2"],
            8,
        ),
        Chain::new(
            "not-containing-Q-second",
            sys(&["pow[2]", "xnyxnzxn[2]"], &[]),
            &["x^2yzx^2", "x^2yx^2zx^2", "x^2yx^3zx^2", "x^2yxzx^2"],
            9,
        ),
        // (10) and kappa[1,0] give the deletion identity at n = 1
        Chain::new(
            "deletion",
            sys(&["pow[1]", "kappa[1,0]", "xnyzxn[1]"], &[]),
            &["xbxyzxcx", "xbxyxzxcx"],
            10,
        ),
        Chain::new("kappa-lifting", sys(&["kappa[1,0]"], &[]), &["axbxcx", "ax^2bxcx"], 7),
        Chain::new("alpha-lifting", sys(&["alpha[1]"], &[]), &["xybxcydx", "yxbxcydx"], 8),
        Chain::new("delta-from-alpha", sys(&["alpha[1]", "xyx=xyxx"], &[]), &["xybx^2cy^2", "yxbx^2cy^2"], 9),
        Chain::new("alpha-from-delta", sys(&["delta[1,2]", "xyx=xyxx"], &[]), &["xybxcy", "yxbxcy"], 9),
        Chain::new("delta-lifting-k", sys(&["delta[1,1]"], &[]), &["xybxcydx", "yxbxcydx"], 8),
        Chain::new("delta-lifting-n", sys(&["delta[1,1]", "xyx=xyxx"], &[]), &["xybx^2cy^2", "yxbx^2cy^2"], 9),
        Chain::new(
            "h-chain",
            sys(&["xyxztx=xyxzxtx", "xyzxy=yxzxy"], &[]),
            &["xyhxsytx", "xyhxsxytx", "yxhxsxytx", "yxhxsytx"],
            9,
        ),
        Chain::new(
            "xyxztx-from-xnyzxn",
            sys(&["xyx=xyxx", "xnyzxn[2]"], &[]),
            &["xyxztx", "xyx^2ztx^2", "xyx^2zxtx^2", "xyxzxtx"],
            10,
        ),
        Chain::new("f-gives-alpha1", basis_f(), &["xybxcy", "yxbxcy"], 9),
        Chain::new("f-gives-beta1", basis_f(), &["yx^2cy", "xyxcy"], 8),
        Chain::new("f-gives-gammap1", basis_f(), &["x^2ycy", "xyxcy"], 8),
        Chain::new("q-gives-alpha1", basis_q(), &["xybxcy", "yxbxcy"], 9),
        Chain::new("q-gives-xyzxy", basis_q(), &["xyzxy", "yxzxy"], 8),
        Chain::new("q-gives-beta1", basis_q(), &["yx^2cy", "xyxcy"], 8),
        Chain::new("q-gives-gammap1", basis_q(), &["x^2ycy", "xyxcy"], 8),
    ]
}

pub fn replay_library() -> Vec<ChainReport> {
    library().iter().map(run_chain).collect()
}
