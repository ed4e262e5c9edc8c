//! Team satisfaction under the lax and strict readings.

mod eval;
mod program;

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Model, ModelError, Team};
use crate::syntax::{Formula, Term};

use eval::{Eval, Exceeded};
use program::Program;

/// Lax disjunction may split a team into overlapping parts and lax
/// existential quantification picks nonempty value sets; the strict reading
/// requires a partition and a single value per assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Lax,
    Strict,
}

impl core::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "lax" => Ok(Mode::Lax),
            "strict" => Ok(Mode::Strict),
            other => Err(alloc::format!("unknown mode `{other}` (expected lax or strict)")),
        }
    }
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Mode::Lax => "lax",
            Mode::Strict => "strict",
        })
    }
}

/// Upper bound on search nodes explored by one query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT: Budget = Budget { max_nodes: 10_000_000 };

    pub fn new(max_nodes: u64) -> Budget {
        Budget { max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
    BudgetExceeded { nodes: u64 },
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Sat
        } else {
            Verdict::Unsat
        }
    }

    /// `Some(true)` for `Sat`, `Some(false)` for `Unsat`.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Sat => Some(true),
            Verdict::Unsat => Some(false),
            Verdict::BudgetExceeded { .. } => None,
        }
    }

    pub fn is_sat(self) -> bool {
        self == Verdict::Sat
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Verdict::Sat => f.write_str("sat"),
            Verdict::Unsat => f.write_str("unsat"),
            Verdict::BudgetExceeded { nodes } => write!(f, "budget exceeded after {nodes} nodes"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("free variable `{0}` is not in the team's domain")]
    FreeVariable(String),
    #[error("symbol `{0}` is not interpreted by the model")]
    UnknownSymbol(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `M ⊨_X φ` with the default budget.
pub fn satisfies(m: &Model, team: &Team, f: &Formula, mode: Mode) -> Result<Verdict, SemanticsError> {
    satisfies_with_budget(m, team, f, mode, Budget::DEFAULT)
}

pub fn satisfies_with_budget(
    m: &Model,
    team: &Team,
    f: &Formula,
    mode: Mode,
    budget: Budget,
) -> Result<Verdict, SemanticsError> {
    team.check_against(m)?;
    let prog = Program::compile(m, f, team.vars())?;
    let mut ev = Eval::new(&prog, mode, budget.max_nodes);
    match ev.sat(prog.root, team.rows()) {
        Ok(b) => Ok(Verdict::from_bool(b)),
        Err(Exceeded) => Ok(Verdict::BudgetExceeded { nodes: ev.used }),
    }
}

/// `M ⊨ φ` for a sentence: satisfaction by the team `{∅}`.
pub fn satisfies_sentence(m: &Model, f: &Formula, mode: Mode) -> Result<Verdict, SemanticsError> {
    satisfies(m, &Team::unit(), f, mode)
}

pub fn satisfies_sentence_with_budget(
    m: &Model,
    f: &Formula,
    mode: Mode,
    budget: Budget,
) -> Result<Verdict, SemanticsError> {
    satisfies_with_budget(m, &Team::unit(), f, mode, budget)
}

fn with_terms<R>(
    m: &Model,
    team: &Team,
    slots: &[&[Term]],
    run: impl FnOnce(&Eval<'_, '_>, &[Vec<program::CTerm>]) -> R,
) -> Result<R, SemanticsError> {
    team.check_against(m)?;
    let all: Vec<Term> = slots.iter().flat_map(|s| s.iter().cloned()).collect();
    let (prog, cts) = Program::compile_terms(m, &all, team.vars())?;
    let mut it = cts.into_iter();
    let split: Vec<Vec<program::CTerm>> = slots.iter().map(|s| it.by_ref().take(s.len()).collect()).collect();
    let ev = Eval::new(&prog, Mode::Lax, u64::MAX);
    Ok(run(&ev, &split))
}

/// `X ⊨ =(t1, ..., tn)`: the last term is functionally determined by the
/// others. With one term this is constancy.
pub fn check_dependence(m: &Model, team: &Team, ts: &[Term]) -> Result<bool, SemanticsError> {
    if ts.is_empty() {
        return Ok(true);
    }
    with_terms(m, team, &[ts], |ev, s| ev.dep(&s[0], team.rows()))
}

/// `X ⊨ t2 ⊥_{t1} t3`.
pub fn check_independence(
    m: &Model,
    team: &Team,
    t1: &[Term],
    t2: &[Term],
    t3: &[Term],
) -> Result<bool, SemanticsError> {
    with_terms(m, team, &[t1, t2, t3], |ev, s| ev.indep(&s[0], &s[1], &s[2], team.rows()))
}

/// `X ⊨ t1 ⊆ t2`.
pub fn check_inclusion(m: &Model, team: &Team, t1: &[Term], t2: &[Term]) -> Result<bool, SemanticsError> {
    with_terms(m, team, &[t1, t2], |ev, s| ev.incl(&s[0], &s[1], team.rows()))
}

/// `X ⊨ t1 | t2`.
pub fn check_exclusion(m: &Model, team: &Team, t1: &[Term], t2: &[Term]) -> Result<bool, SemanticsError> {
    with_terms(m, team, &[t1, t2], |ev, s| ev.excl(&s[0], &s[1], team.rows()))
}

/// `X ⊨ t1 ⋈ t2`.
pub fn check_equiangularity(m: &Model, team: &Team, t1: &[Term], t2: &[Term]) -> Result<bool, SemanticsError> {
    with_terms(m, team, &[t1, t2], |ev, s| {
        ev.incl(&s[0], &s[1], team.rows()) && ev.incl(&s[1], &s[0], team.rows())
    })
}
