//! `mvar`: command-line front end for the monoid-varieties workbench.
//!
//! Exit codes: 0 for a definite result, 2 when a verdict is unknown under the
//! given budgets, 1 on errors (including failed replays).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use monoid_varieties::catalog::{parse_catalog, Catalog, CatalogBudget, Truth, Verdict};
use monoid_varieties::derive::{derive, verify_trace, Budget, DerivationTrace, DeriveOutcome};
use monoid_varieties::oracle::{saturate, OracleVerdict};
use monoid_varieties::rees::build_s;
use monoid_varieties::replay::{library, run_chain};
use monoid_varieties::system::IdentitySystem;
use monoid_varieties::{parse_identity, parse_word, FiniteMonoid, SatOutcome};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mvar", version, about = "Equational reasoning about monoid varieties")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Longest intermediate word in derivations [default: 12].
    #[arg(long, global = true)]
    len_cap: Option<usize>,
    /// Largest number of words a search may visit [default: 200000 for
    /// `derive`, 20000 per identity for catalog checks].
    #[arg(long, global = true)]
    max_states: Option<usize>,
    /// Word length bound of the bounded closure [default: 8].
    #[arg(long, global = true)]
    oracle_len: Option<usize>,
    /// Extra catalog entries, merged over the built-in catalog.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Exponent n of `x^n = x^(n+1)` and `x^ny^n = y^nx^n` for exclusion checks.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dividers, blocks and h-dividers of a word.
    Decompose { word: String },
    /// Checks an identity in a finite monoid given as a table file or as S(W).
    Check {
        identity: String,
        #[arg(long, conflicts_with = "rees")]
        table: Option<PathBuf>,
        /// Words W of the Rees quotient S(W).
        #[arg(long, num_args = 1..)]
        rees: Vec<String>,
    },
    /// Searches for a derivation of `lhs = rhs`, or verifies a stored trace.
    Derive {
        lhs: String,
        rhs: String,
        /// Identities or stored names separated by `;`.
        #[arg(long)]
        basis: String,
        /// Trace file to verify instead of searching.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Builds the Rees quotient S(W).
    Rees {
        #[arg(required = true)]
        words: Vec<String>,
        /// Write the table file here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded closure of a basis (approximate relatively free monoid).
    Free {
        #[arg(long)]
        basis: String,
        #[arg(long, default_value_t = 2)]
        letters: usize,
        /// Identity to test against the closure.
        #[arg(long)]
        identity: Option<String>,
    },
    /// Queries the variety catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Lattice checks.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Replays the derivation library (`all` or a chain name).
    Replay { which: String },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Lists the catalog entries.
    List,
    /// Does the variety satisfy the identity?
    Check { variety: String, identity: String },
    /// Is `inner` contained in `outer`?
    Includes { inner: String, outer: String },
    /// Verdicts on the nine varieties of the classification being contained in the variety.
    ExcludesNine { variety: String },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Verifies a stored lattice diagram (`bottom`: the varieties below P1).
    Verify { which: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Definite,
    Unknown,
    Failed,
}

impl Status {
    fn of(t: Truth) -> Status {
        if t == Truth::Unknown {
            Status::Unknown
        } else {
            Status::Definite
        }
    }

    fn code(self) -> ExitCode {
        match self {
            Status::Definite => ExitCode::SUCCESS,
            Status::Unknown => ExitCode::from(2),
            Status::Failed => ExitCode::from(1),
        }
    }
}

struct Report {
    json: Value,
    text: String,
    status: Status,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&r.json).expect("reports serialize")
            } else {
                r.text.trim_end().to_string()
            };
            // a closed pipe (e.g. `| head`) is not an error of the command
            let _ = writeln!(std::io::stdout(), "{out}");
            r.status.code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Decompose { word } => decompose(word),
        Command::Check { identity, table, rees } => check(identity, table.as_deref(), rees),
        Command::Derive { lhs, rhs, basis, verify } => derive_cmd(cli, lhs, rhs, basis, verify.as_deref()),
        Command::Rees { words, out } => rees_cmd(words, out.as_deref()),
        Command::Free { basis, letters, identity } => free(cli, basis, *letters, identity.as_deref()),
        Command::Catalog { command } => catalog_cmd(cli, command),
        Command::Lattice { command: LatticeCommand::Verify { which } } => lattice(cli, which),
        Command::Replay { which } => replay(which),
    }
}

fn decompose(word: &str) -> Result<Report> {
    let u = parse_word(word)?;
    let d = u.decompose();
    let divider_name = |i: usize| if i == 0 { "t0".to_string() } else { d.dividers[i - 1].to_string() };
    let mut h: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (x, c) in u.counts() {
        let row = (1..=c).map(|i| u.h_divider(x, i).map(divider_name)).collect::<Result<Vec<_>, _>>()?;
        h.insert(x.to_string(), row);
    }
    let dividers: Vec<String> = d.dividers.iter().map(|t| t.to_string()).collect();
    let blocks: Vec<String> = d.blocks.iter().map(|b| b.to_string()).collect();
    let simple: Vec<String> = u.simple().iter().map(|x| x.to_string()).collect();
    let multiple: Vec<String> = u.multiple().iter().map(|x| x.to_string()).collect();
    let mut text = format!(
        "word      {u}\nsimple    {}\nmultiple  {}\ndividers  t0 {}\nblocks    {}\n",
        simple.join(" "),
        multiple.join(" "),
        dividers.join(" "),
        blocks.iter().map(|b| if b.is_empty() { "1".to_string() } else { b.clone() }).collect::<Vec<_>>().join(" | ")
    );
    for (x, row) in &h {
        text.push_str(&format!("h({x})      {}\n", row.join(" ")));
    }
    Ok(Report {
        json: json!({ "word": u.to_string(), "simple": simple, "multiple": multiple, "dividers": dividers, "blocks": blocks, "h": h }),
        text,
        status: Status::Definite,
    })
}

fn load_table(path: &Path) -> Result<FiniteMonoid> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FiniteMonoid::from_table_text(&text)?)
}

fn check(identity: &str, table: Option<&Path>, rees: &[String]) -> Result<Report> {
    let id = parse_identity(identity)?;
    let (name, m) = match table {
        Some(p) => (p.display().to_string(), load_table(p)?),
        None if !rees.is_empty() => {
            let ws = rees.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>, _>>()?;
            (format!("S({})", rees.join(", ")), build_s(&ws)?.base)
        }
        None => bail!("give a monoid with --table FILE or --rees WORD..."),
    };
    let (value, detail, assignment) = match m.satisfies(&id) {
        SatOutcome::Holds => (Truth::True, format!("{id} holds in {name}"), None),
        SatOutcome::Fails(a) => {
            let a: BTreeMap<String, String> = a.iter().map(|(x, e)| (x.to_string(), m.label(*e).to_string())).collect();
            let shown: Vec<String> = a.iter().map(|(x, e)| format!("{x}->{e}")).collect();
            (Truth::False, format!("{id} fails in {name} at {}", shown.join(", ")), Some(a))
        }
        SatOutcome::BudgetExceeded { space } => {
            (Truth::Unknown, format!("{space} assignments exceed the evaluation budget"), None)
        }
    };
    Ok(Report {
        json: json!({ "identity": id.to_string(), "monoid": name, "size": m.size(), "value": value, "assignment": assignment }),
        text: format!("{value}: {detail}"),
        status: Status::of(value),
    })
}

fn system(basis: &str) -> Result<IdentitySystem> {
    let mut sys = IdentitySystem::new();
    sys.extend_from_text(basis)?;
    if sys.members().is_empty() {
        bail!("the basis is empty");
    }
    Ok(sys)
}

fn derive_cmd(cli: &Cli, lhs: &str, rhs: &str, basis: &str, verify: Option<&Path>) -> Result<Report> {
    let (u, v) = (parse_word(lhs)?, parse_word(rhs)?);
    let sys = system(basis)?;
    if let Some(path) = verify {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let trace = DerivationTrace::from_text(&text, &sys)?;
        if trace.start != u {
            bail!("trace starts at {}, not {u}", trace.start);
        }
        let end = verify_trace(&trace, &sys)?;
        if end != v {
            bail!("trace ends at {end}, not {v}");
        }
        return Ok(Report {
            json: json!({ "verified": true, "steps": trace.len() }),
            text: format!("verified: {} steps from {u} to {v}", trace.len()),
            status: Status::Definite,
        });
    }
    let budget = Budget::new(cli.len_cap.unwrap_or(12), cli.max_states.unwrap_or(200_000));
    let outcome = derive(&u, &v, &sys, budget);
    let (text, status) = match &outcome {
        DeriveOutcome::Found(t) => (t.to_text(), Status::Definite),
        DeriveOutcome::Exhausted { states } => (
            format!("unknown: no derivation through words of length <= {} ({states} words visited)", budget.len_cap),
            Status::Unknown,
        ),
        DeriveOutcome::BudgetHit { states } => (format!("unknown: search stopped after {states} words"), Status::Unknown),
    };
    Ok(Report { json: to_json(&outcome), text, status })
}

fn rees_cmd(words: &[String], out: Option<&Path>) -> Result<Report> {
    let ws = words.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>, _>>()?;
    let s = build_s(&ws)?;
    let table = s.base.to_table_text();
    let labels: Vec<(usize, String)> = s.label_map();
    let mut text = String::new();
    match out {
        Some(p) => {
            fs::write(p, &table).with_context(|| format!("writing {}", p.display()))?;
            text.push_str(&format!("wrote {} ({} elements)\n", p.display(), s.size()));
            for (i, l) in &labels {
                text.push_str(&format!("{i} {l}\n"));
            }
        }
        None => text.push_str(&table),
    }
    Ok(Report {
        json: json!({ "words": words, "size": s.size(), "zero": s.zero, "labels": labels, "table": s.base.table() }),
        text,
        status: Status::Definite,
    })
}

fn free(cli: &Cli, basis: &str, letters: usize, identity: Option<&str>) -> Result<Report> {
    let sys = system(basis)?;
    let len = cli.oracle_len.unwrap_or(8);
    let bc = saturate(&sys, letters, len)?;
    let classes = bc.classes();
    let mut json = json!({ "letters": letters, "len": len, "classes": classes.len() });
    let mut text = format!("{} classes of words of length <= {len} over {letters} letters\n", classes.len());
    let mut status = Status::Definite;
    match identity {
        Some(s) => {
            let id = parse_identity(s)?;
            let verdict = bc.holds(&id)?;
            json["identity"] = json!(id.to_string());
            json["verdict"] = to_json(&verdict);
            if verdict == OracleVerdict::Holds {
                text.push_str(&format!("true: {id} holds (sides in one class)\n"));
            } else {
                text.push_str(&format!("unknown: {id} not merged within the bound\n"));
                status = Status::Unknown;
            }
        }
        None => {
            for c in classes.iter().filter(|c| c.len() > 1) {
                let members: Vec<String> = c.iter().map(|u| u.to_string()).collect();
                text.push_str(&format!("{}\n", members.join(" ~ ")));
            }
        }
    }
    Ok(Report { json, text, status })
}

fn load_catalog(cli: &Cli) -> Result<Catalog> {
    let mut cat = Catalog::builtin();
    if let Some(path) = &cli.catalog {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let specs = parse_catalog(&text, |p| {
            let text = fs::read_to_string(dir.join(p))
                .map_err(|e| monoid_varieties::Error::Precondition(format!("reading table {p}: {e}")))?;
            FiniteMonoid::from_table_text(&text)
        })?;
        for spec in specs {
            cat.insert(spec);
        }
    }
    Ok(cat)
}

fn catalog_budget(cli: &Cli) -> CatalogBudget {
    let d = CatalogBudget::default();
    CatalogBudget {
        max_states: cli.max_states.unwrap_or(d.max_states),
        oracle_len: cli.oracle_len.unwrap_or(d.oracle_len),
        ..d
    }
}

fn verdict_report(question: String, v: Verdict) -> Report {
    Report {
        text: format!("{}: {question} ({})", v.value, v.summary()),
        status: Status::of(v.value),
        json: json!({ "question": question, "verdict": to_json(&v) }),
    }
}

fn catalog_cmd(cli: &Cli, command: &CatalogCommand) -> Result<Report> {
    let cat = load_catalog(cli)?;
    let budget = catalog_budget(cli);
    Ok(match command {
        CatalogCommand::List => {
            let names = cat.names();
            Report { text: names.join("\n"), json: json!({ "varieties": names }), status: Status::Definite }
        }
        CatalogCommand::Check { variety, identity } => {
            let id = parse_identity(identity)?;
            verdict_report(format!("{variety} satisfies {id}"), cat.satisfies(variety, &id, &budget)?)
        }
        CatalogCommand::Includes { inner, outer } => {
            verdict_report(format!("{inner} is contained in {outer}"), cat.includes(inner, outer, &budget)?)
        }
        CatalogCommand::ExcludesNine { variety } => {
            let r = cat.excludes_nine(variety, cli.n, &budget)?;
            let mut text = String::new();
            for (x, v) in &r.contained {
                text.push_str(&format!("{x:<3} in {variety}: {} ({})\n", v.value, v.summary()));
            }
            text.push_str(&format!("all nine excluded: {}\n", r.cross));
            Report { text, status: Status::of(r.cross), json: to_json(&r) }
        }
    })
}

fn lattice(cli: &Cli, which: &str) -> Result<Report> {
    if which != "bottom" && which != "fig1" {
        bail!("unknown lattice `{which}` (available: bottom)");
    }
    let checks = load_catalog(cli)?.verify_lattice_bottom(&catalog_budget(cli))?;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!("{} {}: {}\n", if c.pass { "ok  " } else { "open" }, c.claim, c.forward.summary()));
    }
    let status = if checks.iter().all(|c| c.pass) { Status::Definite } else { Status::Unknown };
    Ok(Report { text, status, json: to_json(&checks) })
}

fn replay(which: &str) -> Result<Report> {
    let chains: Vec<_> = library().into_iter().filter(|c| which == "all" || c.name == which).collect();
    if chains.is_empty() {
        let names: Vec<&str> = library().iter().map(|c| c.name).collect();
        bail!("unknown chain `{which}` (available: all, {})", names.join(", "));
    }
    let reports: Vec<_> = chains.iter().map(run_chain).collect();
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!("{} {} [{}]: {} steps, {}\n", if r.pass { "pass" } else { "FAIL" }, r.name, r.goal, r.steps, r.detail));
    }
    let pass = reports.iter().filter(|r| r.pass).count();
    text.push_str(&format!("{pass}/{} chains verified\n", reports.len()));
    let status = if pass == reports.len() { Status::Definite } else { Status::Failed };
    Ok(Report { text, status, json: to_json(&reports) })
}
