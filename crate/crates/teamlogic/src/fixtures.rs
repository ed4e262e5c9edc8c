//! The fixture files shipped with the crate, and parsers for their line
//! formats.

use std::path::PathBuf;

use teamlogic_core::dbdeps::Dependency;
use teamlogic_core::model::{Model, Team};
use teamlogic_core::Formula;

use crate::io::{self, IoError};

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// A model, a team and a formula stored side by side in one directory.
#[derive(Debug, Clone)]
pub struct Case {
    pub model: Model,
    pub team: Team,
    pub formula: Formula,
}

pub const TEAM_CASES: [&str; 4] = [
    "lax-vs-strict-disjunction",
    "lax-vs-strict-existential",
    "strict-nonlocal-disjunction",
    "strict-nonlocal-existential",
];

pub fn case(name: &str) -> Result<Case, IoError> {
    let base = dir().join(name);
    let model = io::load_model(&base.join("model.json"), false)?;
    let team = io::load_team(&base.join("team.json"), &model)?;
    let text = io::read_text(&base.join("formula.txt"))?;
    let formula = teamlogic_core::parse_formula(text.trim(), &model.signature())
        .map_err(|e| IoError::Format(format!("{name}/formula.txt: {e}")))?;
    Ok(Case { model, team, formula })
}

pub const SKOLEM_FORMS: [&str; 2] = ["always-true.snf", "equal-values.snf"];

pub fn skolem_text(name: &str) -> Result<String, IoError> {
    Ok(io::read_text(&dir().join("skolem").join(name))?.trim().to_string())
}

/// Splits at commas that are not inside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let (mut depth, mut start, mut out) = (0i32, 0, Vec::new());
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

/// One `premises |- goal` instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub premises: Vec<Dependency>,
    pub goal: Dependency,
}

impl std::fmt::Display for Implication {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        if ps.is_empty() {
            write!(f, "|- {}", self.goal)
        } else {
            write!(f, "{} |- {}", ps.join(", "), self.goal)
        }
    }
}

pub fn parse_implication(line: &str) -> Result<Implication, IoError> {
    let (lhs, rhs) = line
        .split_once("|-")
        .ok_or_else(|| IoError::Format(format!("`{line}` lacks `|-`")))?;
    let premises = split_top(lhs).into_iter().map(|p| p.parse()).collect::<Result<Vec<_>, _>>()?;
    Ok(Implication { premises, goal: rhs.trim().parse()? })
}

/// Non-blank lines not starting with `#`.
pub fn parse_implications(text: &str) -> Result<Vec<Implication>, IoError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_implication)
        .collect()
}

pub fn implications(file: &str) -> Result<Vec<Implication>, IoError> {
    parse_implications(&io::read_text(&dir().join("dbdeps").join(file))?)
}
