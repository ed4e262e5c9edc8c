//! Command-line front end.
//!
//! Exit codes: 0 sat / equivalent / holds, 1 unsat / counterexample /
//! violated, 2 usage or input error, 3 budget exceeded.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use teamlogic_core::dbdeps::{self, DbRelation, Dependency, System};
use teamlogic_core::games::{find_uniform_winning, Arena, GameError, DEFAULT_ARENA_CAP};
use teamlogic_core::semantics::{satisfies_sentence_with_budget, satisfies_with_budget};
use teamlogic_core::syntax::{parse_term_list, AtomFamily, Signature};
use teamlogic_core::translate::eso::ie_to_eso;
use teamlogic_core::translate::skolem::{skolemnf_to_eso, skolemnf_to_ie, SkolemNf};
use teamlogic_core::translate::{self, Rule};
use teamlogic_core::{parse_formula, Budget, Formula, Mode, Verdict};

use crate::equiv::{check_equivalence, EquivError, EquivOptions, EquivOutcome};
use crate::io::{self, IoError, ModelFile, TeamFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const SKOLEM_HELP: &str = "\
SkolemNF input (rules snf2ie, snf2eso) is one line of `;`-separated fields:
  A/k ; x: x1 x2 ; y: y1 ; f1: (x1, x2) ; f2: (x1, x2) ; g: (y1) ; psi: FORMULA
`A/k` is the arity of the team relation, `x:` and `y:` list the universal
variables, each function is declared with its argument variables (the first
two take exactly x), and `psi:` takes the rest of the line.";

#[derive(Debug, Parser)]
#[command(name = "teamlogic", version, about = "Team semantics model checker and dependency toolkit", after_help = SKOLEM_HELP)]
pub struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for the equivalence harness. Verdicts do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Accept one-element domains.
    #[arg(long, global = true)]
    pub allow_unit_domain: bool,
    /// Search budget in evaluator nodes.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT.max_nodes)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a team (or, without --team, the model) satisfies a formula.
    Check(CheckArgs),
    /// Search for a uniform winning strategy in the semantic game.
    Game(GameArgs),
    /// Apply a translation and print the result.
    Translate(TranslateArgs),
    /// Compare two formulas on every small model and team.
    Equiv(EquivArgs),
    /// Derive an inclusion or exclusion dependency from premises.
    Derive(DeriveArgs),
    /// Check dependencies against a CSV relation.
    Dbcheck(DbcheckArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub team: Option<PathBuf>,
    #[arg(long, default_value = "lax")]
    pub mode: Mode,
    /// Formula text, or @FILE.
    pub formula: String,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub team: PathBuf,
    /// Only deterministic strategies (the strict reading).
    #[arg(long)]
    pub deterministic: bool,
    /// Rewrite other atoms into inclusion and exclusion atoms first.
    #[arg(long)]
    pub compile: bool,
    /// Largest arena to build.
    #[arg(long, default_value_t = DEFAULT_ARENA_CAP)]
    pub arena_cap: usize,
    pub formula: String,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    /// dep2exc, exc2dep, dep2indep, inc2indep, equi2inc, inc2equi, indep2ie,
    /// indep2ie-expanded, compile, const-pushout, const-nf, const-collapse,
    /// tc, ie2eso, snf2ie, snf2eso.
    #[arg(long)]
    pub rule: String,
    /// Target atom families for `compile`, e.g. incl,excl.
    #[arg(long)]
    pub target: Option<String>,
    /// Team variables for ie2eso and snf2ie, comma separated.
    #[arg(long)]
    pub vars: Option<String>,
    /// Expand dependence atoms into exclusion atoms (snf2ie).
    #[arg(long)]
    pub expand: bool,
    /// tc: variables of the first tuple of the step formula.
    #[arg(long)]
    pub xs: Option<String>,
    /// tc: variables of the second tuple of the step formula.
    #[arg(long)]
    pub ys: Option<String>,
    /// tc: start terms.
    #[arg(long)]
    pub from: Option<String>,
    /// tc: end terms.
    #[arg(long)]
    pub to: Option<String>,
    /// Formula or SkolemNF text, or @FILE.
    pub input: String,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    /// Domain sizes, e.g. 2..3.
    #[arg(long, default_value = "2..2")]
    pub domains: String,
    #[arg(long, default_value_t = 3)]
    pub max_rows: usize,
    #[arg(long, default_value = "lax")]
    pub mode: Mode,
    /// Use this model instead of the numeric domains.
    #[arg(long)]
    pub model: Option<PathBuf>,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(short, long = "premise")]
    pub premises: Vec<String>,
    /// inc or inc-exc; defaults to inc-exc when an exclusion occurs.
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Values per attribute when searching for a counterexample.
    #[arg(long, default_value_t = 3)]
    pub universe: usize,
    /// Largest counterexample relation.
    #[arg(long, default_value_t = 3)]
    pub max_tuples: usize,
    pub goal: String,
}

#[derive(Debug, Args)]
pub struct DbcheckArgs {
    #[arg(long)]
    pub relation: PathBuf,
    /// Extra values, one per line, for tgd and egd quantifiers.
    #[arg(long)]
    pub universe: Option<PathBuf>,
    #[arg(required = true)]
    pub dependencies: Vec<String>,
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub lines: Vec<String>,
    pub json: Value,
}

impl Report {
    fn new(code: i32, lines: Vec<String>, json: Value) -> Report {
        Report { code, lines, json }
    }

    fn usage(msg: impl Into<String>) -> Report {
        let msg = msg.into();
        Report::new(EXIT_USAGE, vec![format!("error: {msg}")], json!({"verdict": "error", "error": msg}))
    }

    fn budget(msg: impl Into<String>) -> Report {
        let msg = msg.into();
        Report::new(EXIT_BUDGET, vec![format!("budget exceeded: {msg}")], json!({"verdict": "budget_exceeded", "error": msg}))
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            format!("{}\n", self.json)
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}

impl From<IoError> for Report {
    fn from(e: IoError) -> Report {
        Report::usage(e.to_string())
    }
}

fn text_arg(s: &str) -> Result<String, Report> {
    match s.strip_prefix('@') {
        Some(path) => Ok(io::read_text(Path::new(path))?.trim().to_string()),
        None => Ok(s.to_string()),
    }
}

fn formula_arg(s: &str, sig: &Signature) -> Result<Formula, Report> {
    let text = text_arg(s)?;
    parse_formula(&text, sig).map_err(|e| Report::usage(format!("cannot parse `{text}`: {e}")))
}

fn lenient_formula(s: &str) -> Result<Formula, Report> {
    let text = text_arg(s)?;
    text.parse().map_err(|e| Report::usage(format!("cannot parse `{text}`: {e}")))
}

fn list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()).map(String::from).collect()
}

fn verdict_report(v: Verdict, mode: Mode, extra: Value) -> Report {
    let mut j = json!({"command": "check", "mode": mode.to_string()});
    if let (Value::Object(o), Value::Object(e)) = (&mut j, extra) {
        o.extend(e);
    }
    match v {
        Verdict::Sat | Verdict::Unsat => {
            j["verdict"] = json!(v.to_string());
            let code = if v.is_sat() { EXIT_OK } else { EXIT_NO };
            Report::new(code, vec![format!("{v} ({mode})")], j)
        }
        Verdict::BudgetExceeded { nodes } => {
            j["verdict"] = json!("budget_exceeded");
            j["nodes"] = json!(nodes);
            Report::new(EXIT_BUDGET, vec![format!("budget exceeded after {nodes} nodes ({mode})")], j)
        }
    }
}

fn cmd_check(cli: &Cli, a: &CheckArgs) -> Result<Report, Report> {
    let m = io::load_model(&a.model, cli.allow_unit_domain)?;
    let f = formula_arg(&a.formula, &m.signature())?;
    let budget = Budget::new(cli.budget);
    let (v, extra) = match &a.team {
        Some(p) => {
            let t = io::load_team(p, &m)?;
            let v = satisfies_with_budget(&m, &t, &f, a.mode, budget).map_err(|e| Report::usage(e.to_string()))?;
            (v, json!({"rows": t.len()}))
        }
        None => {
            let v = satisfies_sentence_with_budget(&m, &f, a.mode, budget).map_err(|e| Report::usage(e.to_string()))?;
            (v, json!({}))
        }
    };
    Ok(verdict_report(v, a.mode, extra))
}

fn game_error(e: GameError) -> Report {
    match e {
        GameError::ArenaTooLarge(_) => Report::budget(e.to_string()),
        GameError::Unsupported(_) => Report::usage(format!("{e} (pass --compile)")),
        other => Report::usage(other.to_string()),
    }
}

fn cmd_game(cli: &Cli, a: &GameArgs) -> Result<Report, Report> {
    let m = io::load_model(&a.model, cli.allow_unit_domain)?;
    let t = io::load_team(&a.team, &m)?;
    let mut f = formula_arg(&a.formula, &m.signature())?;
    let ie: BTreeSet<AtomFamily> = [AtomFamily::Incl, AtomFamily::Excl].into_iter().collect();
    if !f.families().is_subset(&ie) {
        if !a.compile {
            let other: Vec<&str> = f.families().difference(&ie).map(|x| x.keyword()).collect();
            return Err(Report::usage(format!(
                "the game covers inclusion and exclusion atoms only, found {}; pass --compile to rewrite them",
                other.join(", ")
            )));
        }
        f = translate::compile(&f, &ie).map_err(|e| Report::usage(e.to_string()))?;
    }
    let arena = Arena::build_with_cap(&m, &t, &f, a.arena_cap).map_err(game_error)?;
    let kind = if a.deterministic { "deterministic" } else { "nondeterministic" };
    let mut j = json!({"command": "game", "kind": kind, "positions": arena.len()});
    match find_uniform_winning(&arena, &m, a.deterministic, cli.budget) {
        Err(_) => {
            j["verdict"] = json!("budget_exceeded");
            Ok(Report::new(EXIT_BUDGET, vec![format!("budget exceeded ({kind} search)")], j))
        }
        Ok(None) => {
            j["verdict"] = json!("none");
            Ok(Report::new(EXIT_NO, vec!["none".into()], j))
        }
        Ok(Some(tau)) => {
            let lines = tau.lines(&arena);
            j["verdict"] = json!("strategy");
            j["strategy"] = json!(lines);
            let mut out = vec![format!("strategy ({kind}, {} choice(s))", lines.len())];
            out.extend(lines);
            Ok(Report::new(EXIT_OK, out, j))
        }
    }
}

fn translated(rule: &str, text: String) -> Report {
    Report::new(EXIT_OK, vec![text.clone()], json!({"command": "translate", "rule": rule, "verdict": "ok", "output": text}))
}

fn need<'a>(v: &'a Option<String>, flag: &str, rule: &str) -> Result<&'a str, Report> {
    v.as_deref().ok_or_else(|| Report::usage(format!("rule {rule} needs --{flag}")))
}

fn cmd_translate(a: &TranslateArgs) -> Result<Report, Report> {
    let te = |e: translate::TranslateError| Report::usage(e.to_string());
    let rule = a.rule.as_str();
    let out = match rule {
        "compile" => {
            let target = translate::parse_target(need(&a.target, "target", rule)?).map_err(Report::usage)?;
            translate::compile(&lenient_formula(&a.input)?, &target).map_err(te)?.to_string()
        }
        "const-pushout" => translate::const_pushout(&lenient_formula(&a.input)?).map_err(te)?.to_string(),
        "const-nf" => translate::const_normal_form(&lenient_formula(&a.input)?).map_err(te)?.to_string(),
        "const-collapse" => translate::const_sentence_collapse(&lenient_formula(&a.input)?).map_err(te)?.to_string(),
        "tc" => {
            let psi = lenient_formula(&a.input)?;
            let sig = psi.signature();
            let terms = |s: &str| parse_term_list(s, &sig).map_err(|e| Report::usage(format!("`{s}`: {e}")));
            let from = terms(need(&a.from, "from", rule)?)?;
            let to = terms(need(&a.to, "to", rule)?)?;
            let (xs, ys) = (list(need(&a.xs, "xs", rule)?), list(need(&a.ys, "ys", rule)?));
            translate::tc_sentence(&psi, &xs, &ys, &from, &to).map_err(te)?.to_string()
        }
        "ie2eso" => {
            let f = lenient_formula(&a.input)?;
            let vs = match &a.vars {
                Some(v) => list(v),
                None => f.free_vars().into_iter().collect(),
            };
            ie_to_eso(&f, &vs).map_err(te)?.to_string()
        }
        "snf2ie" | "snf2eso" => {
            let nf = SkolemNf::parse(&text_arg(&a.input)?).map_err(te)?;
            if rule == "snf2eso" {
                skolemnf_to_eso(&nf).map_err(te)?.to_string()
            } else {
                let vs = match &a.vars {
                    Some(v) => list(v),
                    None => (1..=nf.arity).map(|i| format!("v{i}")).collect(),
                };
                skolemnf_to_ie(&nf, &vs, a.expand).map_err(te)?.to_string()
            }
        }
        other => {
            let r: Rule = other.parse().map_err(Report::usage)?;
            translate::apply_rule(&lenient_formula(&a.input)?, r).map_err(te)?.to_string()
        }
    };
    Ok(translated(rule, out))
}

fn parse_domains(s: &str) -> Result<std::ops::RangeInclusive<usize>, Report> {
    let bad = || Report::usage(format!("bad --domains `{s}`, expected A..B or N"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok(lo.trim().parse().map_err(|_| bad())?..=hi.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok(n..=n)
        }
    }
}

fn cmd_equiv(cli: &Cli, a: &EquivArgs) -> Result<Report, Report> {
    let model = match &a.model {
        Some(p) => Some(io::load_model(p, cli.allow_unit_domain)?),
        None => None,
    };
    let sig = model.as_ref().map(|m| m.signature());
    let parse = |s: &str| match &sig {
        Some(sig) => formula_arg(s, sig),
        None => lenient_formula(s),
    };
    let (f, g) = (parse(&a.left)?, parse(&a.right)?);
    let opts = EquivOptions {
        domains: parse_domains(&a.domains)?,
        max_rows: a.max_rows,
        mode: a.mode,
        threads: cli.threads,
        budget: Budget::new(cli.budget),
        model,
        allow_unit: cli.allow_unit_domain,
    };
    match check_equivalence(&f, &g, &opts) {
        Ok(EquivOutcome::Equivalent { models, teams }) => Ok(Report::new(
            EXIT_OK,
            vec![format!("equivalent ({models} model(s), {teams} team(s), {})", a.mode)],
            json!({"command": "equiv", "verdict": "equivalent", "models": models, "teams": teams, "mode": a.mode.to_string()}),
        )),
        Ok(EquivOutcome::Counterexample(c)) => {
            let mf = ModelFile::from_model(&c.model);
            let tf = TeamFile::from_team(&c.model, &c.team);
            let show = |b: bool| if b { "sat" } else { "unsat" };
            Ok(Report::new(
                EXIT_NO,
                vec![
                    "counterexample".into(),
                    format!("model: {}", serde_json::to_string(&mf).expect("serializable")),
                    format!("team: {}", serde_json::to_string(&tf).expect("serializable")),
                    format!("left: {}", show(c.left)),
                    format!("right: {}", show(c.right)),
                ],
                json!({"command": "equiv", "verdict": "counterexample", "mode": a.mode.to_string(),
                       "witness": {"model": mf, "team": tf, "left": show(c.left), "right": show(c.right)}}),
            ))
        }
        Err(e @ EquivError::Budget { .. }) => Err(Report::budget(e.to_string())),
        Err(e) => Err(Report::usage(e.to_string())),
    }
}

fn dep_arg(s: &str) -> Result<Dependency, Report> {
    s.parse().map_err(|e: dbdeps::DbError| Report::usage(e.to_string()))
}

fn relation_json(r: &DbRelation) -> Value {
    json!({"attributes": r.attributes(), "tuples": r.tuples().collect::<Vec<_>>()})
}

fn cmd_derive(a: &DeriveArgs) -> Result<Report, Report> {
    let premises = a.premises.iter().map(|p| dep_arg(p)).collect::<Result<Vec<_>, _>>()?;
    let goal = dep_arg(&a.goal)?;
    let system = match &a.system {
        Some(s) => s.parse().map_err(|e: dbdeps::DbError| Report::usage(e.to_string()))?,
        None if premises.iter().chain([&goal]).any(|d| matches!(d, Dependency::Exd(..))) => System::IncExc,
        None => System::IncOnly,
    };
    let db = |e: dbdeps::DbError| Report::usage(e.to_string());
    if let Some(d) = dbdeps::derive(&premises, &goal, system, a.depth).map_err(db)? {
        dbdeps::verify(&d, &premises, system).map_err(|e| Report::usage(format!("internal: {e}")))?;
        let lines: Vec<String> = d.to_string().lines().map(String::from).collect();
        return Ok(Report::new(
            EXIT_OK,
            lines.clone(),
            json!({"command": "derive", "verdict": "derived", "height": d.height(), "derivation": lines}),
        ));
    }
    let mut lines = vec![format!("not derivable within depth {}", a.depth)];
    let mut j = json!({"command": "derive", "verdict": "not_derived"});
    match dbdeps::find_counterexample(&premises, &goal, a.universe, a.max_tuples, dbdeps::DEFAULT_RELATION_BUDGET) {
        Ok(Some(r)) => {
            lines.push(format!("counterexample: {}", r.attributes().join(",")));
            lines.extend(r.tuples().map(|t| format!("  {}", t.join(","))));
            j["witness"] = relation_json(&r);
        }
        Ok(None) => lines.push(format!(
            "no counterexample with {} value(s) and at most {} tuple(s)",
            a.universe, a.max_tuples
        )),
        Err(e) => lines.push(format!("counterexample search skipped: {e}")),
    }
    Ok(Report::new(EXIT_NO, lines, j))
}

fn cmd_dbcheck(a: &DbcheckArgs) -> Result<Report, Report> {
    let r = io::load_relation_csv(&a.relation)?;
    let universe = match &a.universe {
        Some(p) => io::load_universe(p)?,
        None => Vec::new(),
    };
    let mut lines = Vec::new();
    let mut results = Vec::new();
    let mut violated = false;
    for text in &a.dependencies {
        let d = dep_arg(text)?;
        match dbdeps::find_violation(&r, &d, &universe).map_err(|e| Report::usage(e.to_string()))? {
            None => {
                lines.push(format!("holds: {d}"));
                results.push(json!({"dependency": d.to_string(), "holds": true}));
            }
            Some(v) => {
                violated = true;
                lines.push(format!("violated: {d}"));
                lines.extend(v.rows.iter().map(|row| format!("  {}", row.join(","))));
                results.push(json!({"dependency": d.to_string(), "holds": false, "witness": v.rows}));
            }
        }
    }
    let verdict = if violated { "violated" } else { "holds" };
    Ok(Report::new(
        if violated { EXIT_NO } else { EXIT_OK },
        lines,
        json!({"command": "dbcheck", "verdict": verdict, "attributes": r.attributes(), "results": results}),
    ))
}

pub fn run(cli: &Cli) -> Report {
    let r = match &cli.command {
        Command::Check(a) => cmd_check(cli, a),
        Command::Game(a) => cmd_game(cli, a),
        Command::Translate(a) => cmd_translate(a),
        Command::Equiv(a) => cmd_equiv(cli, a),
        Command::Derive(a) => cmd_derive(a),
        Command::Dbcheck(a) => cmd_dbcheck(a),
    };
    r.unwrap_or_else(|e| e)
}

/// Parses the arguments, runs, prints and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let report = run(&cli);
    let text = report.render(cli.json);
    if report.code == EXIT_USAGE && !cli.json {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    report.code
}
