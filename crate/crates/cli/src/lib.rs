//! The `agt` command line: argument parsing, dispatch and text/JSON output.
//!
//! Exit codes: 0 success, 1 user error, 2 internal error, 3 when a
//! verification finds a mismatch.

pub mod suites;
#[cfg(test)]
mod tests;

use std::collections::BTreeSet;

use agt_core::cardinal::CardinalMode;
use agt_core::classify::{
    equalizer_member, equalizer_rule, hausdorff_class_member, is_in_class, EqualizerRule,
    GroupClass, TopologyName,
};
use agt_core::fg::{FgGroup, IndexValue};
use agt_core::finite::{FinSubgroup, FiniteGroup, DEFAULT_CAP};
use agt_core::group::StructuredGroup;
use agt_core::parse::parse_group;
use agt_core::topo::{csize, csize_p, invariant, CardinalInvariantKind};
use agt_core::Verdict;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Subgroups are listed element by element up to this group order.
const LIST_ELEMENTS_UP_TO: usize = 50;
/// Default number of candidate lattices `fg count` may scan.
const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Parser)]
#[command(
    name = "agt",
    version,
    about = "Functorial topologies on abelian groups: invariants, classes and oracles"
)]
pub struct Cli {
    /// Cardinal comparison mode: zfc (sound, may answer unknown) or gch.
    #[arg(long, global = true, default_value = "zfc")]
    pub mode: CardinalMode,
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Size bound: finite-group order for `finite`, case count or order bound for `verify`.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Seed for randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebraic invariants of a group expression.
    Invariants { expr: String },
    /// Class memberships and Hausdorff verdicts.
    Classify {
        expr: String,
        /// Decide a single class, e.g. `narrow` or `bounded_p:3`.
        #[arg(long)]
        class: Option<String>,
    },
    /// Weight, character or density of a functorial topology.
    Card {
        expr: String,
        /// gamma, nu, bohr, gamma_p:P, nu_p:P.
        #[arg(long)]
        topology: String,
        /// w, chi or d.
        #[arg(long)]
        invariant: String,
    },
    /// Decide whether two functorial topologies coincide on a group.
    Equalizer {
        t1: String,
        t2: String,
        expr: String,
    },
    /// Brute-force computations on finite groups.
    Finite {
        #[command(subcommand)]
        command: FiniteCommand,
    },
    /// Finitely generated groups and their subgroups.
    Fg {
        #[command(subcommand)]
        command: FgCommand,
    },
    /// Run a verification suite (`all` runs every suite).
    Verify { suite: String },
}

#[derive(Debug, Subcommand)]
pub enum FiniteCommand {
    /// The full subgroup lattice of Z(n1) + ... + Z(nk); orders like `2,4`.
    Subgroups { orders: Vec<String> },
    /// Cross-check the symbolic and brute-force engines on one group.
    Verify { orders: Vec<String> },
}

#[derive(Debug, Subcommand)]
pub enum FgCommand {
    /// Number of subgroups of index `index` in Z^rank.
    Count {
        rank: usize,
        index: u64,
        /// Also list the subgroups.
        #[arg(long)]
        list: bool,
        /// Maximum number of candidate lattices to scan.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Closure of a subgroup and a proper finite-index subgroup containing it.
    Enclose {
        /// A finitely generated group such as `Z^2 + Z(4)`.
        group: String,
        /// Generator rows such as `[[2,0],[0,3]]`.
        subgroup: String,
    },
}

/// What a command prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    User(String),
    Internal(String),
}

impl Failure {
    fn user(e: impl ToString) -> Failure {
        Failure::User(e.to_string())
    }
}

/// A rendered reply: JSON payload, human text, exit code.
struct Reply {
    json: Value,
    text: String,
    code: i32,
}

impl Reply {
    fn ok(json: Value, text: String) -> Reply {
        Reply {
            json,
            text,
            code: EXIT_OK,
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        stdout: text,
                        stderr: String::new(),
                        code: EXIT_OK,
                    }
                }
                _ => Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USER,
                },
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let (kind, code, message) = match dispatch(cli) {
        Ok(reply) => {
            let stdout = if cli.json {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&reply.json).expect("JSON values serialize")
                )
            } else {
                reply.text
            };
            return Outcome {
                stdout,
                stderr: String::new(),
                code: reply.code,
            };
        }
        Err(Failure::User(m)) => ("user", EXIT_USER, m),
        Err(Failure::Internal(m)) => ("internal", EXIT_INTERNAL, m),
    };
    if cli.json {
        let body = json!({ "error": message, "kind": kind });
        Outcome {
            stdout: format!("{body}\n"),
            stderr: String::new(),
            code,
        }
    } else {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code,
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Reply, Failure> {
    match &cli.command {
        Command::Invariants { expr } => invariants(&parse(expr)?),
        Command::Classify { expr, class } => {
            let class = class
                .as_deref()
                .map(|c| c.parse::<GroupClass>().map_err(Failure::user))
                .transpose()?;
            classify(&parse(expr)?, class)
        }
        Command::Card {
            expr,
            topology,
            invariant,
        } => {
            let t = topology.parse::<TopologyName>().map_err(Failure::user)?;
            let k = invariant
                .parse::<CardinalInvariantKind>()
                .map_err(Failure::user)?;
            card(&parse(expr)?, t, k, cli.mode)
        }
        Command::Equalizer { t1, t2, expr } => {
            let t = t1.parse::<TopologyName>().map_err(Failure::user)?;
            let s = t2.parse::<TopologyName>().map_err(Failure::user)?;
            equalizer(t, s, &parse(expr)?)
        }
        Command::Finite { command } => {
            let cap = cli.cap.unwrap_or(DEFAULT_CAP);
            match command {
                FiniteCommand::Subgroups { orders } => {
                    finite_subgroups(&finite_group(orders, cap)?)
                }
                FiniteCommand::Verify { orders } => finite_verify(&finite_group(orders, cap)?),
            }
        }
        Command::Fg { command } => match command {
            FgCommand::Count {
                rank,
                index,
                list,
                budget,
            } => fg_count(*rank, *index, *list, budget.unwrap_or(DEFAULT_BUDGET)),
            FgCommand::Enclose { group, subgroup } => fg_enclose(group, subgroup),
        },
        Command::Verify { suite } => verify(suite, cli),
    }
}

fn parse(expr: &str) -> Result<StructuredGroup, Failure> {
    parse_group(expr).map_err(|e| Failure::User(format!("cannot parse `{expr}`: {e}")))
}

fn verdict_token(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

/// Primes worth reporting for `g`: those occurring in it, or 2 if none do.
fn report_primes(g: &StructuredGroup) -> BTreeSet<u64> {
    let primes = g.primes();
    if primes.is_empty() {
        BTreeSet::from([2])
    } else {
        primes
    }
}

fn invariants(g: &StructuredGroup) -> Result<Reply, Failure> {
    let inv = g.invariants();
    let profile = g.quotient_profile();
    let mut text = format!("group: {g}\n|G| = {}\nr0 = {}\n", inv.size, inv.rank0);
    let mut rank_p = Map::new();
    for (p, r) in &inv.rank_p {
        text += &format!("r_{p} = {r}\n");
        rank_p.insert(p.to_string(), json!(r.render()));
    }
    text += &format!("G^1 = {}\n", inv.ulm);
    let mut ulm_p = Map::new();
    for (p, u) in &inv.ulm_p {
        text += &format!("G^1_{p} = {u}\n");
        ulm_p.insert(p.to_string(), json!(u.render()));
    }
    text += &format!(
        "D(G) = {}\nt(G) = {}\n",
        inv.divisible_part, inv.torsion_part
    );
    let exponent = inv.exponent.as_ref().map(|e| e.to_string());
    text += &format!("exponent = {}\n", exponent.as_deref().unwrap_or("none"));
    let mut quotients = Map::new();
    let mut csizes = Map::new();
    for p in g.primes() {
        let q = g.quotient_prime_power(p, 1);
        let c = csize_p(g, p);
        text += &format!("G/{p}G = {q}\n|C_{p}(G)| = {c}\n");
        quotients.insert(p.to_string(), json!(q.render()));
        csizes.insert(p.to_string(), json!(c.render()));
    }
    let q = profile.generic_prime;
    let generic_quotient = g.quotient_prime_power(q, 1);
    let generic_csize = csize_p(g, q);
    text += &format!(
        "G/qG = {generic_quotient} and |C_q(G)| = {generic_csize} for every other prime q\n"
    );
    quotients.insert("other".into(), json!(generic_quotient.render()));
    csizes.insert("other".into(), json!(generic_csize.render()));
    let total = csize(g);
    text += &format!("|C(G)| = {total}\n");
    let body = json!({
        "group": g.render(),
        "size": inv.size.render(),
        "rank0": inv.rank0.render(),
        "rank_p": rank_p,
        "ulm": inv.ulm.render(),
        "ulm_p": ulm_p,
        "divisible_part": inv.divisible_part.render(),
        "torsion_part": inv.torsion_part.render(),
        "exponent": exponent,
        "quotients": quotients,
        "csize": total.render(),
        "csize_p": csizes,
    });
    Ok(Reply::ok(body, text))
}

fn classify(g: &StructuredGroup, class: Option<GroupClass>) -> Result<Reply, Failure> {
    if let Some(c) = class {
        let v = is_in_class(g, c);
        let body =
            json!({ "group": g.render(), "class": c.to_string(), "verdict": verdict_token(v) });
        return Ok(Reply::ok(body, format!("{v}\n")));
    }
    let mut classes: Vec<GroupClass> = Vec::new();
    for p in report_primes(g) {
        for c in GroupClass::all(p) {
            if !classes.contains(&c) {
                classes.push(c);
            }
        }
    }
    let mut text = format!("group: {g}\n");
    let mut class_map = Map::new();
    for c in classes {
        let v = is_in_class(g, c);
        text += &format!("{c}: {v}\n");
        class_map.insert(c.to_string(), json!(verdict_token(v)));
    }
    let mut topologies = vec![TopologyName::Gamma, TopologyName::Nu, TopologyName::Bohr];
    for p in report_primes(g) {
        topologies.extend([TopologyName::GammaP(p), TopologyName::NuP(p)]);
    }
    topologies.extend([TopologyName::ProCountable, TopologyName::AlephBounded]);
    let mut hausdorff = Map::new();
    for t in topologies {
        let v = hausdorff_class_member(t, g).map_err(|e| Failure::Internal(e.to_string()))?;
        text += &format!("hausdorff({t}): {v}\n");
        hausdorff.insert(t.to_string(), json!(verdict_token(v)));
    }
    let body = json!({ "group": g.render(), "classes": class_map, "hausdorff": hausdorff });
    Ok(Reply::ok(body, text))
}

fn card(
    g: &StructuredGroup,
    t: TopologyName,
    k: CardinalInvariantKind,
    mode: CardinalMode,
) -> Result<Reply, Failure> {
    let r = invariant(g, t, k, mode).map_err(Failure::user)?;
    let body = json!({
        "group": g.render(),
        "topology": t.to_string(),
        "invariant": k.to_string(),
        "value": r.value.render(),
        "basis": r.basis,
        "mode": r.mode.to_string(),
    });
    Ok(Reply::ok(body, format!("{}\n", r.value)))
}

fn rule_text(rule: &EqualizerRule) -> String {
    match rule {
        EqualizerRule::Reflexive => "reflexive".into(),
        EqualizerRule::Classes(cs) => cs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" and "),
        EqualizerRule::Open(reason) => format!("open: {reason}"),
    }
}

fn equalizer(t: TopologyName, s: TopologyName, g: &StructuredGroup) -> Result<Reply, Failure> {
    let v = equalizer_member(t, s, g);
    let body = json!({
        "t1": t.to_string(),
        "t2": s.to_string(),
        "group": g.render(),
        "verdict": verdict_token(v),
        "rule": rule_text(&equalizer_rule(t, s)),
    });
    Ok(Reply::ok(body, format!("{v}\n")))
}

/// Accepts `2,4`, `2 4`, `[2, 4]` or several arguments.
pub fn parse_orders(args: &[String]) -> Result<Vec<u64>, String> {
    let joined = args.join(",");
    let orders: Vec<u64> = joined
        .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| format!("`{s}` is not a cyclic order"))
        })
        .collect::<Result<_, _>>()?;
    if orders.is_empty() {
        return Err("expected at least one cyclic order".into());
    }
    Ok(orders)
}

fn finite_group(args: &[String], cap: u64) -> Result<FiniteGroup, Failure> {
    let orders = parse_orders(args).map_err(Failure::User)?;
    FiniteGroup::new(&orders, cap).map_err(Failure::user)
}

fn tuple(coords: &[u64]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

fn subgroup_entry(g: &FiniteGroup, h: &FinSubgroup) -> (Value, String) {
    let gens: Vec<Vec<u64>> = g
        .generators(h)
        .into_iter()
        .map(|x| g.coords(x).to_vec())
        .collect();
    let gen_text = if gens.is_empty() {
        "0".to_string()
    } else {
        gens.iter().map(|c| tuple(c)).collect::<Vec<_>>().join(", ")
    };
    let mut text = format!(
        "order {:>4}  index {:>4}  generated by {gen_text}",
        h.count(),
        h.index()
    );
    let mut body = json!({ "order": h.count(), "index": h.index(), "generators": gens });
    if g.size() <= LIST_ELEMENTS_UP_TO {
        let elements = g.elements(h);
        text += &format!(
            "  = {{{}}}",
            elements
                .iter()
                .map(|c| tuple(c))
                .collect::<Vec<_>>()
                .join(", ")
        );
        body["elements"] = json!(elements);
    }
    (body, text)
}

fn finite_subgroups(g: &FiniteGroup) -> Result<Reply, Failure> {
    let all = g.all_subgroups();
    let mut text = format!("{g}: {} subgroups\n", all.len());
    let mut list = Vec::with_capacity(all.len());
    for h in &all {
        let (body, line) = subgroup_entry(g, h);
        text += &line;
        text.push('\n');
        list.push(body);
    }
    let body = json!({ "group": g.to_string(), "count": all.len(), "subgroups": list });
    Ok(Reply::ok(body, text))
}

fn finite_verify(g: &FiniteGroup) -> Result<Reply, Failure> {
    let checks = suites::check_finite_group(g);
    let failure = checks.iter().find(|c| !c.passed);
    let mut text = String::new();
    for c in &checks {
        text += &format!(
            "{} {}: {}\n",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let list: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "check": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    let body = json!({ "group": g.to_string(), "passed": failure.is_none(), "checks": list });
    let code = if failure.is_some() {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    Ok(Reply {
        json: body,
        text,
        code,
    })
}

fn fg_count(rank: usize, index: u64, list: bool, budget: u128) -> Result<Reply, Failure> {
    let g = FgGroup::free(rank);
    let subgroups = g
        .enumerate_finite_index(index, budget)
        .map_err(Failure::user)?;
    let mut text = format!("{}\n", subgroups.len());
    let mut body = json!({ "rank": rank, "index": index, "count": subgroups.len() });
    if list {
        let rendered: Vec<String> = subgroups.iter().map(|h| h.render(&g)).collect();
        for r in &rendered {
            text += &format!("{r}\n");
        }
        body["subgroups"] = json!(rendered);
    }
    Ok(Reply::ok(body, text))
}

fn index_text(i: &IndexValue) -> String {
    match i {
        IndexValue::Finite(n) => n.to_string(),
        IndexValue::Infinite => "infinite".into(),
    }
}

fn fg_enclose(group: &str, subgroup: &str) -> Result<Reply, Failure> {
    let structured = parse(group)?;
    let g = FgGroup::from_structured(&structured)
        .ok_or_else(|| Failure::User(format!("`{group}` is not finitely generated")))?;
    let rows: Vec<Vec<i64>> = serde_json::from_str(subgroup).map_err(|e| {
        Failure::User(format!(
            "cannot parse subgroup generators `{subgroup}`: {e}"
        ))
    })?;
    let h = g.subgroup_i64(&rows).map_err(Failure::user)?;
    let closure = g.nu_closure(&h);
    let closed = closure == h;
    let enclosing = g.enclosing_finite_index(&h).map_err(Failure::user)?;
    let index = g.index(&h);
    let enclosing_index = g.index(&enclosing);
    let text = format!(
        "G = {g}\nH = {}\n[G:H] = {}\nclosure(H) = {}\nclosed: {closed}\nenclosing = {}\n[G:enclosing] = {}\n",
        h.render(&g),
        index_text(&index),
        closure.render(&g),
        enclosing.render(&g),
        index_text(&enclosing_index),
    );
    let body = json!({
        "group": g.to_string(),
        "subgroup": h.render(&g),
        "index": index_text(&index),
        "closure": closure.render(&g),
        "closed": closed,
        "enclosing": enclosing.render(&g),
        "enclosing_index": index_text(&enclosing_index),
    });
    Ok(Reply::ok(body, text))
}

fn verify(suite: &str, cli: &Cli) -> Result<Reply, Failure> {
    let config = suites::SuiteConfig {
        seed: cli.seed,
        cap: cli.cap,
        mode: cli.mode,
    };
    let names: Vec<&str> = if suite == "all" {
        suites::SUITES.to_vec()
    } else if suites::SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::User(format!(
            "unknown suite `{suite}` (expected all, {})",
            suites::SUITES.join(", ")
        )));
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut failed = false;
    for name in names {
        let report = suites::run_suite(name, &config).expect("suite name was validated");
        match &report.failure {
            None => text += &format!("{name}: ok ({} cases)\n", report.cases),
            Some(f) => {
                failed = true;
                text += &format!("{name}: FAIL at case {}: {f}\n", report.cases);
            }
        }
        reports.push(json!({ "suite": name, "cases": report.cases, "passed": report.failure.is_none(), "counterexample": report.failure }));
    }
    let body = json!({ "seed": cli.seed, "mode": cli.mode.to_string(), "suites": reports });
    Ok(Reply {
        json: body,
        text,
        code: if failed { EXIT_MISMATCH } else { EXIT_OK },
    })
}
