//! Formula rewriters between the atom families, constancy elimination, the
//! transitive-closure sentence and the bridge to existential second-order
//! logic.
//!
//! Every rewriter draws fresh variables from a [`FreshVars`] generator, so
//! outputs are deterministic: `_v0`, `_v1`, ... in the order the variables
//! appear in the displayed formula.

mod atoms;
mod constancy;
pub mod eso;
pub mod skolem;
mod tc;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::syntax::{AtomFamily, Formula, FreshVars, NotFirstOrder};

pub use atoms::*;
pub use constancy::{const_normal_form, const_pushout, const_sentence_collapse};
pub use tc::{odd_cardinality_sentence, tc_sentence};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("formula has no constancy atom")]
    NoConstancyAtom,
    #[error("`{0}` is not a constancy-logic formula")]
    NotConstancyLogic(String),
    #[error("not a constancy-logic sentence in normal form: {0}")]
    NotNormalForm(String),
    #[error("no translation path from {from} atoms to {{{target}}}{hint}")]
    NoPath { from: String, target: String, hint: String },
    #[error("formula has no {0} atom to rewrite")]
    NothingToRewrite(String),
    #[error("tuple widths differ: {0}")]
    Width(String),
    #[error("`{0}` is not first order")]
    NotFirstOrder(String),
    #[error("{0}")]
    Unsupported(String),
}

impl From<NotFirstOrder> for TranslateError {
    fn from(e: NotFirstOrder) -> TranslateError {
        TranslateError::NotFirstOrder(e.0)
    }
}

/// A single atom-level rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    DepToIndep,
    DepToExc,
    ExcToDep,
    EquiToInc,
    IncToEqui,
    IncToIndep,
    /// Independence to inclusion/exclusion with native dependence atoms.
    IndepToIe,
    /// Independence to inclusion/exclusion with the dependence atoms
    /// expanded into exclusion atoms.
    IndepToIeExpanded,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::DepToIndep,
        Rule::DepToExc,
        Rule::ExcToDep,
        Rule::EquiToInc,
        Rule::IncToEqui,
        Rule::IncToIndep,
        Rule::IndepToIe,
        Rule::IndepToIeExpanded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::DepToIndep => "dep-to-indep",
            Rule::DepToExc => "dep-to-exc",
            Rule::ExcToDep => "exc-to-dep",
            Rule::EquiToInc => "equi-to-inc",
            Rule::IncToEqui => "inc-to-equi",
            Rule::IncToIndep => "inc-to-indep",
            Rule::IndepToIe => "indep-to-ie",
            Rule::IndepToIeExpanded => "indep-to-ie-expanded",
        }
    }

    /// Compact alias such as `dep2exc`.
    pub fn short_name(self) -> &'static str {
        match self {
            Rule::DepToIndep => "dep2indep",
            Rule::DepToExc => "dep2exc",
            Rule::ExcToDep => "exc2dep",
            Rule::EquiToInc => "equi2inc",
            Rule::IncToEqui => "inc2equi",
            Rule::IncToIndep => "inc2indep",
            Rule::IndepToIe => "indep2ie",
            Rule::IndepToIeExpanded => "indep2ie-expanded",
        }
    }

    pub fn source(self) -> AtomFamily {
        match self {
            Rule::DepToIndep | Rule::DepToExc => AtomFamily::Dep,
            Rule::ExcToDep => AtomFamily::Excl,
            Rule::EquiToInc => AtomFamily::Equi,
            Rule::IncToEqui | Rule::IncToIndep => AtomFamily::Incl,
            Rule::IndepToIe | Rule::IndepToIeExpanded => AtomFamily::Indep,
        }
    }

    /// Dependency atom families occurring in the rewritten atom.
    pub fn produces(self) -> &'static [AtomFamily] {
        match self {
            Rule::DepToIndep | Rule::IncToIndep => &[AtomFamily::Indep],
            Rule::DepToExc => &[AtomFamily::Excl],
            Rule::ExcToDep => &[AtomFamily::Dep],
            Rule::EquiToInc => &[AtomFamily::Incl],
            Rule::IncToEqui => &[AtomFamily::Equi],
            Rule::IndepToIe => &[AtomFamily::Incl, AtomFamily::Excl, AtomFamily::Dep],
            Rule::IndepToIeExpanded => &[AtomFamily::Incl, AtomFamily::Excl],
        }
    }

    /// Rewrites one atom of the source family; other formulas are returned
    /// unchanged.
    pub fn rewrite(self, atom: &Formula, fresh: &mut FreshVars) -> Formula {
        match (self, atom) {
            (Rule::DepToIndep, Formula::Dep(ts)) => dep_to_indep(ts),
            (Rule::DepToExc, Formula::Dep(ts)) => dep_to_exc_with(ts, fresh),
            (Rule::ExcToDep, Formula::Excl(a, b)) => exc_to_dep_with(a, b, fresh),
            (Rule::EquiToInc, Formula::Equi(a, b)) => equi_to_inc(a, b),
            (Rule::IncToEqui, Formula::Incl(a, b)) => inc_to_equi_with(a, b, fresh),
            (Rule::IncToIndep, Formula::Incl(a, b)) => inc_to_indep_with(a, b, fresh),
            (Rule::IndepToIe, Formula::Indep(a, b, c)) => indep_to_ie_with(a, b, c, false, fresh),
            (Rule::IndepToIeExpanded, Formula::Indep(a, b, c)) => indep_to_ie_with(a, b, c, true, fresh),
            _ => atom.clone(),
        }
    }
}

impl core::str::FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Rule, String> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s || r.short_name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

impl core::fmt::Display for Rule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Rewrites every atom with `pick(atom)` bottom-up, sharing one generator.
fn rewrite_atoms(f: &Formula, fresh: &mut FreshVars, pick: &mut dyn FnMut(&Formula, &mut FreshVars) -> Formula) -> Formula {
    match f {
        Formula::And(a, b) => {
            let a = rewrite_atoms(a, fresh, pick);
            Formula::and(a, rewrite_atoms(b, fresh, pick))
        }
        Formula::Or(a, b) => {
            let a = rewrite_atoms(a, fresh, pick);
            Formula::or(a, rewrite_atoms(b, fresh, pick))
        }
        Formula::Exists(v, b) => Formula::exists(v, rewrite_atoms(b, fresh, pick)),
        Formula::Forall(v, b) => Formula::forall(v, rewrite_atoms(b, fresh, pick)),
        atom => pick(atom, fresh),
    }
}

/// Rewrites every atom of the rule's source family.
pub fn apply_rule(f: &Formula, rule: Rule) -> Result<Formula, TranslateError> {
    if !f.families().contains(&rule.source()) {
        return Err(TranslateError::NothingToRewrite(rule.source().keyword().into()));
    }
    let mut fresh = FreshVars::avoiding(f);
    Ok(rewrite_atoms(f, &mut fresh, &mut |a, fr| rule.rewrite(a, fr)))
}

/// Preferred rules per source family, first match wins within a round.
const PREFERENCE: [Rule; 8] = [
    Rule::DepToExc,
    Rule::DepToIndep,
    Rule::ExcToDep,
    Rule::EquiToInc,
    Rule::IncToEqui,
    Rule::IncToIndep,
    Rule::IndepToIeExpanded,
    Rule::IndepToIe,
];

/// Chooses a rule for every family outside `target` that can reach it.
/// A family is settled in round k when some rule maps it into families
/// settled in earlier rounds, so the chosen rules never cycle.
pub fn plan(target: &BTreeSet<AtomFamily>) -> BTreeMap<AtomFamily, Rule> {
    let mut settled: BTreeSet<AtomFamily> = target.clone();
    let mut chosen = BTreeMap::new();
    loop {
        let mut round = Vec::new();
        for fam in AtomFamily::ALL {
            if settled.contains(&fam) {
                continue;
            }
            if let Some(r) = PREFERENCE
                .into_iter()
                .find(|r| r.source() == fam && r.produces().iter().all(|p| settled.contains(p)))
            {
                round.push((fam, r));
            }
        }
        if round.is_empty() {
            return chosen;
        }
        for (fam, r) in round {
            settled.insert(fam);
            chosen.insert(fam, r);
        }
    }
}

fn family_list(fs: &BTreeSet<AtomFamily>) -> String {
    fs.iter().map(|f| f.keyword()).collect::<Vec<_>>().join(", ")
}

/// Rewrites `f` until only atoms of the `target` families remain.
pub fn compile(f: &Formula, target: &BTreeSet<AtomFamily>) -> Result<Formula, TranslateError> {
    let rules = plan(target);
    for fam in f.families() {
        if !target.contains(&fam) && !rules.contains_key(&fam) {
            let downward = [AtomFamily::Dep, AtomFamily::Excl];
            let hint = if matches!(fam, AtomFamily::Incl | AtomFamily::Equi)
                && target.iter().all(|t| downward.contains(t))
            {
                String::from(": inclusion logic is closed under unions, dependence and exclusion logic only downward")
            } else {
                String::new()
            };
            return Err(TranslateError::NoPath { from: fam.keyword().into(), target: family_list(target), hint });
        }
    }
    let mut fresh = FreshVars::avoiding(f);
    Ok(compile_with(f, &rules, &mut fresh))
}

fn compile_with(f: &Formula, rules: &BTreeMap<AtomFamily, Rule>, fresh: &mut FreshVars) -> Formula {
    rewrite_atoms(f, fresh, &mut |atom, fr| match atom.family().and_then(|fam| rules.get(&fam)) {
        Some(rule) => {
            let out = rule.rewrite(atom, fr);
            compile_with(&out, rules, fr)
        }
        None => atom.clone(),
    })
}

/// Parses a comma-separated list of atom keywords such as `incl,excl`.
pub fn parse_target(s: &str) -> Result<BTreeSet<AtomFamily>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| AtomFamily::from_keyword(w).ok_or_else(|| format!("unknown atom family `{w}`")))
        .collect()
}
