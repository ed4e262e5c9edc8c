//! Exhaustive equivalence check of two formulas over small models and
//! teams. The first counterexample in enumeration order is reported, no
//! matter how many threads share the work.

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use teamlogic_core::model::{enumerate_teams, Model, Team};
use teamlogic_core::semantics::{satisfies_with_budget, SemanticsError};
use teamlogic_core::{Budget, Formula, Mode, Verdict};

#[derive(Debug, Clone)]
pub struct EquivOptions {
    pub domains: RangeInclusive<usize>,
    pub max_rows: usize,
    pub mode: Mode,
    pub threads: usize,
    pub budget: Budget,
    /// Check over this model only instead of the numeric domains.
    pub model: Option<Model>,
    pub allow_unit: bool,
}

impl Default for EquivOptions {
    fn default() -> EquivOptions {
        EquivOptions {
            domains: 2..=2,
            max_rows: 3,
            mode: Mode::Lax,
            threads: 1,
            budget: Budget::DEFAULT,
            model: None,
            allow_unit: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub model: Model,
    pub team: Team,
    pub left: bool,
    pub right: bool,
}

#[derive(Debug, Clone)]
pub enum EquivOutcome {
    Equivalent { models: usize, teams: u64 },
    Counterexample(Box<Counterexample>),
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum EquivError {
    #[error("budget exceeded on a team with {rows} row(s) over a domain of size {size}")]
    Budget { size: usize, rows: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("{0}")]
    Usage(String),
}

enum Event {
    Differs(Team, bool, bool),
    Budget(usize),
    Failed(SemanticsError),
}

fn models(opts: &EquivOptions) -> Result<Vec<Model>, EquivError> {
    if let Some(m) = &opts.model {
        return Ok(vec![m.clone()]);
    }
    let (lo, hi) = (*opts.domains.start(), *opts.domains.end());
    if lo == 0 || lo > hi {
        return Err(EquivError::Usage(format!("bad domain range {lo}..{hi}")));
    }
    if lo == 1 && !opts.allow_unit {
        return Err(EquivError::Usage(
            "domains of size 1 are excluded; several translations need two distinct elements \
             (pass --allow-unit-domain to include them)"
                .into(),
        ));
    }
    Ok(opts.domains.clone().map(Model::numeric).collect())
}

pub fn check_equivalence(f: &Formula, g: &Formula, opts: &EquivOptions) -> Result<EquivOutcome, EquivError> {
    let mut sig = f.signature();
    sig.merge(&g.signature());
    if opts.model.is_none() && !sig.is_empty() {
        return Err(EquivError::Usage("formulas mention non-logical symbols; pass --model".into()));
    }
    let vars: Vec<String> = f.free_vars().union(&g.free_vars()).cloned().collect();
    let ms = models(opts)?;
    let mut teams = 0u64;
    for m in &ms {
        let (seen, event) = scan(m, &vars, f, g, opts);
        teams += seen;
        match event {
            None => {}
            Some(Event::Differs(team, left, right)) => {
                return Ok(EquivOutcome::Counterexample(Box::new(Counterexample { model: m.clone(), team, left, right })))
            }
            Some(Event::Budget(rows)) => return Err(EquivError::Budget { size: m.size(), rows }),
            Some(Event::Failed(e)) => return Err(e.into()),
        }
    }
    Ok(EquivOutcome::Equivalent { models: ms.len(), teams })
}

fn verdict(m: &Model, t: &Team, f: &Formula, opts: &EquivOptions) -> Result<Option<bool>, SemanticsError> {
    Ok(match satisfies_with_budget(m, t, f, opts.mode, opts.budget)? {
        Verdict::BudgetExceeded { .. } => None,
        v => v.as_bool(),
    })
}

/// Workers pull teams in order; once some event is found at index `i`,
/// nobody looks past `i`, and the event with the least index wins.
fn scan(m: &Model, vars: &[String], f: &Formula, g: &Formula, opts: &EquivOptions) -> (u64, Option<Event>) {
    let source = Mutex::new(enumerate_teams(m, vars.iter().cloned(), opts.max_rows).enumerate());
    let best = AtomicU64::new(u64::MAX);
    let found: Mutex<Vec<(u64, Event)>> = Mutex::new(Vec::new());
    let checked = AtomicU64::new(0);
    let work = || loop {
        let Some((i, t)) = source.lock().expect("team source").next() else { break };
        let i = i as u64;
        if i > best.load(Ordering::SeqCst) {
            break;
        }
        checked.fetch_add(1, Ordering::Relaxed);
        let event = match (verdict(m, &t, f, opts), verdict(m, &t, g, opts)) {
            (Err(e), _) | (_, Err(e)) => Some(Event::Failed(e)),
            (Ok(None), _) | (_, Ok(None)) => Some(Event::Budget(t.len())),
            (Ok(Some(a)), Ok(Some(b))) if a != b => Some(Event::Differs(t, a, b)),
            _ => None,
        };
        if let Some(e) = event {
            best.fetch_min(i, Ordering::SeqCst);
            found.lock().expect("results").push((i, e));
            break;
        }
    };
    std::thread::scope(|s| {
        for _ in 1..opts.threads.max(1) {
            s.spawn(work);
        }
        work();
    });
    let mut found = found.into_inner().expect("results");
    found.sort_by_key(|(i, _)| *i);
    let first = found.into_iter().next();
    // Count every team up to the decisive one, independently of threading.
    let seen = match &first {
        Some((i, _)) => i + 1,
        None => checked.load(Ordering::Relaxed),
    };
    (seen, first.map(|(_, e)| e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn identical_formulas_are_equivalent() {
        let f = p("incl(x ; y) \\/ x = y");
        let out = check_equivalence(&f, &f, &EquivOptions::default()).unwrap();
        assert!(matches!(out, EquivOutcome::Equivalent { models: 1, teams: 15 }));
    }

    #[test]
    fn asymmetric_inclusion() {
        let opts = EquivOptions { max_rows: 2, ..EquivOptions::default() };
        let EquivOutcome::Counterexample(c) = check_equivalence(&p("incl(x ; y)"), &p("incl(y ; x)"), &opts).unwrap()
        else {
            panic!("expected a counterexample")
        };
        // A single row never separates them: both fail on (0, 1).
        assert_eq!(c.team.rows(), [vec![0, 0], vec![0, 1]]);
        assert!(c.left && !c.right);
    }

    #[test]
    fn threads_do_not_change_the_answer() {
        let (f, g) = (p("dep(x, y)"), p("incl(x ; y)"));
        for max_rows in [2, 3, 4] {
            let one = EquivOptions { max_rows, ..EquivOptions::default() };
            let many = EquivOptions { threads: 4, ..one.clone() };
            let (EquivOutcome::Counterexample(a), EquivOutcome::Counterexample(b)) =
                (check_equivalence(&f, &g, &one).unwrap(), check_equivalence(&f, &g, &many).unwrap())
            else {
                panic!("expected counterexamples")
            };
            assert_eq!(a.team, b.team);
        }
    }

    #[test]
    fn usage_errors() {
        let f = p("R(x)");
        assert!(matches!(check_equivalence(&f, &f, &EquivOptions::default()), Err(EquivError::Usage(_))));
        let unit = EquivOptions { domains: 1..=2, ..EquivOptions::default() };
        assert!(matches!(check_equivalence(&p("x = x"), &p("x = x"), &unit), Err(EquivError::Usage(_))));
        let allowed = EquivOptions { allow_unit: true, ..unit };
        assert!(check_equivalence(&p("x = x"), &p("x = x"), &allowed).is_ok());
    }
}
