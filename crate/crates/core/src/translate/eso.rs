//! Existential second-order sentences `Φ(A)`: translation from
//! inclusion/exclusion logic and brute-force evaluation.
//!
//! The translation follows the usual induction on formulas. A team over the
//! context variables is represented by a first-order formula `θ(u)` built
//! from second-order relation symbols; each disjunction and each existential
//! quantifier introduces fresh symbols (`_S0`, `_S1`, ...) for the subteams
//! or extended teams, universal quantifiers only rewrite `θ`. The matrix is
//! a conjunction of first-order sentences over the symbols and `A`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::TranslateError;
use crate::model::{all_tuples, index_of, Elem, Model, ModelError};
use crate::syntax::{FoAtom, Formula, FreshVars, Literal, Term};
use crate::tarski::{self, Structure, TarskiError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SoKind {
    Relation,
    Function,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SoSymbol {
    pub name: String,
    pub arity: usize,
    pub kind: SoKind,
}

/// `∃ prefix . matrix` with one free relation symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsoFormula {
    pub prefix: Vec<SoSymbol>,
    pub free: String,
    pub free_arity: usize,
    pub matrix: Formula,
}

impl fmt::Display for EsoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}/{}] ", self.free, self.free_arity)?;
        if !self.prefix.is_empty() {
            let syms: Vec<String> = self
                .prefix
                .iter()
                .map(|s| {
                    let kind = match s.kind {
                        SoKind::Relation => "rel",
                        SoKind::Function => "fun",
                    };
                    format!("{kind} {}/{}", s.name, s.arity)
                })
                .collect();
            write!(f, "exists {} . ", syms.join(", "))?;
        }
        write!(f, "{}", self.matrix)
    }
}

/// The name of the free relation symbol in translated formulas.
pub const TEAM_RELATION: &str = "A";

/// A team over `params` described by a first-order formula.
#[derive(Clone)]
struct TeamPred {
    params: Vec<String>,
    body: Formula,
}

impl TeamPred {
    fn at(&self, args: &[String]) -> Formula {
        let map: BTreeMap<String, String> = self
            .params
            .iter()
            .zip(args)
            .filter(|(p, a)| p != a)
            .map(|(p, a)| (p.clone(), a.clone()))
            .collect();
        self.body.rename_free(&map)
    }
}

fn rel(name: &str, args: &[String], positive: bool) -> Formula {
    Formula::Lit(Literal { positive, atom: FoAtom::Rel(name.into(), args.iter().map(|a| Term::var(a)).collect()) })
}

fn not(f: Formula) -> Formula {
    f.negate().expect("team predicates are first order")
}

struct Builder {
    fresh: FreshVars,
    prefix: Vec<SoSymbol>,
    constraints: Vec<Formula>,
}

impl Builder {
    fn symbol(&mut self, arity: usize) -> String {
        let name = format!("_S{}", self.prefix.len());
        self.prefix.push(SoSymbol { name: name.clone(), arity, kind: SoKind::Relation });
        name
    }

    fn vars(&mut self, n: usize) -> Vec<String> {
        self.fresh.take(n)
    }

    /// `layout` names the context variables column by column.
    fn go(&mut self, f: &Formula, layout: &[String], theta: &TeamPred) -> Result<(), TranslateError> {
        let k = layout.len();
        let rename = |g: &Formula, to: &[String]| {
            let map: BTreeMap<String, String> = layout.iter().cloned().zip(to.iter().cloned()).collect();
            g.rename_free(&map)
        };
        let on = |ts: &[Term], to: &[String]| -> Vec<Term> {
            let map: BTreeMap<String, Term> = layout.iter().cloned().zip(to.iter().map(|v| Term::var(v))).collect();
            ts.iter().map(|t| t.substitute(&map)).collect()
        };
        match f {
            Formula::Lit(_) => {
                let u = self.vars(k);
                let c = Formula::or(not(theta.at(&u)), rename(f, &u));
                self.constraints.push(Formula::forall_all(&u, c));
            }
            Formula::Incl(a, b) => {
                if a.is_empty() {
                    return Ok(());
                }
                let u = self.vars(k);
                let w = self.vars(k);
                let witness = Formula::exists_all(&w, Formula::and(theta.at(&w), Formula::tuple_eq(&on(a, &u), &on(b, &w))));
                self.constraints.push(Formula::forall_all(&u, Formula::or(not(theta.at(&u)), witness)));
            }
            Formula::Excl(a, b) => {
                if a.is_empty() {
                    // Two empty tuples always coincide, so only the empty team qualifies.
                    let u = self.vars(k);
                    self.constraints.push(Formula::forall_all(&u, not(theta.at(&u))));
                    return Ok(());
                }
                let u = self.vars(k);
                let w = self.vars(k);
                let c = Formula::disj([not(theta.at(&u)), not(theta.at(&w)), Formula::tuple_neq(&on(a, &u), &on(b, &w))]);
                let all: Vec<String> = u.iter().chain(&w).cloned().collect();
                self.constraints.push(Formula::forall_all(&all, c));
            }
            Formula::And(a, b) => {
                self.go(a, layout, theta)?;
                self.go(b, layout, theta)?;
            }
            Formula::Or(a, b) => {
                let s1 = self.symbol(k);
                let s2 = self.symbol(k);
                for s in [&s1, &s2] {
                    let u = self.vars(k);
                    self.constraints.push(Formula::forall_all(&u, Formula::or(rel(s, &u, false), theta.at(&u))));
                }
                let u = self.vars(k);
                let cover = Formula::disj([not(theta.at(&u)), rel(&s1, &u, true), rel(&s2, &u, true)]);
                self.constraints.push(Formula::forall_all(&u, cover));
                let p1 = self.vars(k);
                let p2 = self.vars(k);
                self.go(a, layout, &TeamPred { body: rel(&s1, &p1, true), params: p1 })?;
                self.go(b, layout, &TeamPred { body: rel(&s2, &p2, true), params: p2 })?;
            }
            Formula::Exists(x, body) => {
                let col = layout.iter().position(|v| v == x);
                let arity = if col.is_some() { k } else { k + 1 };
                let s = self.symbol(arity);
                // Every row has an extension in S and every row of S extends a row.
                let u = self.vars(k);
                let y = self.vars(1).remove(0);
                let ext = |u: &[String]| -> Vec<String> {
                    let mut e = u.to_vec();
                    match col {
                        Some(c) => e[c] = y.clone(),
                        None => e.push(y.clone()),
                    }
                    e
                };
                let some_ext = Formula::exists(&y, rel(&s, &ext(&u), true));
                self.constraints.push(Formula::forall_all(&u, Formula::or(not(theta.at(&u)), some_ext)));
                let v = self.vars(arity);
                let back = match col {
                    Some(c) => {
                        let mut from = v.clone();
                        from[c] = y.clone();
                        Formula::exists(&y, theta.at(&from))
                    }
                    None => theta.at(&v[..k]),
                };
                self.constraints.push(Formula::forall_all(&v, Formula::or(rel(&s, &v, false), back)));
                let mut inner = layout.to_vec();
                if col.is_none() {
                    inner.push(x.clone());
                }
                let p = self.vars(arity);
                self.go(body, &inner, &TeamPred { body: rel(&s, &p, true), params: p })?;
            }
            Formula::Forall(x, body) => {
                let col = layout.iter().position(|v| v == x);
                let (inner, pred) = match col {
                    Some(c) => {
                        let p = self.vars(k);
                        let y = self.vars(1).remove(0);
                        let mut from = p.clone();
                        from[c] = y.clone();
                        (layout.to_vec(), TeamPred { body: Formula::exists(&y, theta.at(&from)), params: p })
                    }
                    None => {
                        let p = self.vars(k + 1);
                        let mut inner = layout.to_vec();
                        inner.push(x.clone());
                        (inner, TeamPred { body: theta.at(&p[..k]), params: p })
                    }
                };
                self.go(body, &inner, &pred)?;
            }
            other => {
                return Err(TranslateError::Unsupported(format!(
                    "atom `{other}` has no direct second-order clause; compile it to inclusion/exclusion atoms first"
                )))
            }
        }
        Ok(())
    }
}

/// `Φ(A)` with `M ⊨_X φ` iff `M ⊨ Φ(Rel_vs(X))` under the lax reading.
pub fn ie_to_eso(f: &Formula, vs: &[String]) -> Result<EsoFormula, TranslateError> {
    let distinct: BTreeSet<&String> = vs.iter().collect();
    if distinct.len() != vs.len() {
        return Err(TranslateError::Unsupported(String::from("context variables must be distinct")));
    }
    if let Some(v) = f.free_vars().into_iter().find(|v| !vs.contains(v)) {
        return Err(TranslateError::Unsupported(format!("free variable `{v}` is not among the context variables")));
    }
    if f.signature().relations.contains_key(TEAM_RELATION) {
        return Err(TranslateError::Unsupported(format!("relation symbol `{TEAM_RELATION}` is reserved")));
    }
    let mut fresh = FreshVars::avoiding(f);
    fresh.reserve(vs.iter().cloned());
    let mut b = Builder { fresh, prefix: Vec::new(), constraints: Vec::new() };
    let p = b.vars(vs.len());
    let theta = TeamPred { body: rel(TEAM_RELATION, &p, true), params: p };
    b.go(f, vs, &theta)?;
    Ok(EsoFormula {
        prefix: b.prefix,
        free: TEAM_RELATION.into(),
        free_arity: vs.len(),
        matrix: Formula::conj(b.constraints),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EsoError {
    #[error("second-order symbol `{0}` ranges over too many interpretations")]
    TooLarge(String),
    #[error("candidate budget of {0} interpretations exceeded")]
    BudgetExceeded(u64),
    #[error("tuple {0:?} does not match the arity of the free relation")]
    Arity(Vec<Elem>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Matrix(String),
}

impl From<TarskiError> for EsoError {
    fn from(e: TarskiError) -> EsoError {
        match e {
            TarskiError::Model(m) => EsoError::Model(m),
            other => EsoError::Matrix(format!("{other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EsoStats {
    /// Interpretations tried, summed over all prefix symbols.
    pub candidates: u64,
}

pub const DEFAULT_CANDIDATE_BUDGET: u64 = 50_000_000;

#[derive(Clone)]
enum Interp {
    Rel(Vec<bool>),
    Fun(Vec<Elem>),
}

struct Ext<'a> {
    base: &'a Model,
    index: HashMap<&'a str, usize>,
    arities: Vec<usize>,
    interp: Vec<Interp>,
    free: &'a str,
    free_rel: Vec<bool>,
}

impl Structure for Ext<'_> {
    fn size(&self) -> usize {
        self.base.size()
    }

    fn relation(&self, name: &str, args: &[Elem]) -> Result<bool, ModelError> {
        let n = self.base.size();
        if name == self.free {
            return Ok(self.free_rel[index_of(n, args)]);
        }
        match self.index.get(name) {
            Some(&i) => match &self.interp[i] {
                Interp::Rel(bits) if self.arities[i] == args.len() => Ok(bits[index_of(n, args)]),
                _ => Err(ModelError::Arity { name: name.into(), expected: self.arities[i], got: args.len() }),
            },
            None => self.base.holds_relation(name, args),
        }
    }

    fn function(&self, name: &str, args: &[Elem]) -> Result<Elem, ModelError> {
        match self.index.get(name) {
            Some(&i) => match &self.interp[i] {
                Interp::Fun(table) if self.arities[i] == args.len() => Ok(table[index_of(self.base.size(), args)]),
                _ => Err(ModelError::Arity { name: name.into(), expected: self.arities[i], got: args.len() }),
            },
            None => Structure::function(self.base, name, args),
        }
    }

    fn constant(&self, name: &str) -> Result<Elem, ModelError> {
        Structure::constant(self.base, name)
    }
}

/// How a conjunct depends on one prefix relation: occurrences only under
/// positive literals make it monotone, only under negative ones antitone.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Polarity {
    Absent,
    Positive,
    Negative,
    Mixed,
}

fn polarity(f: &Formula, name: &str) -> Polarity {
    let mut pos = false;
    let mut neg = false;
    f.visit(&mut |g| {
        if let Formula::Lit(Literal { positive, atom: FoAtom::Rel(r, _) }) = g {
            if r == name {
                if *positive {
                    pos = true;
                } else {
                    neg = true;
                }
            }
        }
    });
    match (pos, neg) {
        (false, false) => Polarity::Absent,
        (true, false) => Polarity::Positive,
        (false, true) => Polarity::Negative,
        (true, true) => Polarity::Mixed,
    }
}

fn mentions(f: &Formula, names: &HashMap<&str, usize>) -> Option<usize> {
    let mut top: Option<usize> = None;
    let mut note = |name: &str| {
        if let Some(&i) = names.get(name) {
            top = Some(top.map_or(i, |t| t.max(i)));
        }
    };
    fn term_syms(t: &Term, note: &mut dyn FnMut(&str)) {
        if let Term::App(fname, args) = t {
            note(fname);
            args.iter().for_each(|a| term_syms(a, note));
        }
    }
    f.visit(&mut |g| {
        if let Formula::Lit(Literal { atom: FoAtom::Rel(r, _), .. }) = g {
            note(r);
        }
        g.atom_terms().into_iter().for_each(|t| term_syms(t, &mut note));
    });
    top
}

fn flatten(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        other => out.push(other.clone()),
    }
}

struct Search<'a> {
    ext: Ext<'a>,
    prefix: &'a [SoSymbol],
    /// Conjuncts grouped by the last prefix symbol they mention.
    levels: Vec<Vec<Formula>>,
    budget: u64,
    stats: EsoStats,
}

impl Search<'_> {
    fn holds(&self, f: &Formula) -> Result<bool, EsoError> {
        Ok(tarski::holds_env(&self.ext, f, &mut Vec::new())?)
    }

    fn all_hold(&self, fs: &[Formula]) -> Result<bool, EsoError> {
        for f in fs {
            if !self.holds(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn tick(&mut self) -> Result<(), EsoError> {
        self.stats.candidates += 1;
        if self.stats.candidates > self.budget {
            return Err(EsoError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn run(&mut self, i: usize) -> Result<bool, EsoError> {
        if i == self.prefix.len() {
            return Ok(true);
        }
        let n = self.ext.base.size();
        let sym = &self.prefix[i];
        let width = n.checked_pow(sym.arity as u32).ok_or_else(|| EsoError::TooLarge(sym.name.clone()))?;
        let here = core::mem::take(&mut self.levels[i + 1]);
        let result = match sym.kind {
            SoKind::Relation => self.relation(i, width, &here),
            SoKind::Function => self.function(i, width, &here),
        };
        self.levels[i + 1] = here;
        result
    }

    fn set_rel(&mut self, i: usize, bits: Vec<bool>) {
        self.ext.interp[i] = Interp::Rel(bits);
    }

    /// Subsets of the tuple space between a lower and an upper bound derived
    /// from the conjuncts that are monotone or antitone in the symbol.
    fn relation(&mut self, i: usize, width: usize, here: &[Formula]) -> Result<bool, EsoError> {
        let name = self.prefix[i].name.clone();
        let anti: Vec<&Formula> = here.iter().filter(|f| polarity(f, &name) == Polarity::Negative).collect();
        let mono: Vec<&Formula> = here.iter().filter(|f| polarity(f, &name) == Polarity::Positive).collect();
        let mut allowed = Vec::new();
        for t in 0..width {
            let mut bits = vec![false; width];
            bits[t] = true;
            self.set_rel(i, bits);
            let mut ok = true;
            for f in &anti {
                if !self.holds(f)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                allowed.push(t);
            }
        }
        let with = |ts: &[usize]| {
            let mut bits = vec![false; width];
            ts.iter().for_each(|&t| bits[t] = true);
            bits
        };
        let mut required = Vec::new();
        let mut optional = Vec::new();
        self.set_rel(i, with(&allowed));
        for f in &mono {
            if !self.holds(f)? {
                return Ok(false);
            }
        }
        for (j, &t) in allowed.iter().enumerate() {
            let without: Vec<usize> = allowed.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, &s)| s).collect();
            self.set_rel(i, with(&without));
            let mut needed = false;
            for f in &mono {
                if !self.holds(f)? {
                    needed = true;
                    break;
                }
            }
            if needed {
                required.push(t);
            } else {
                optional.push(t);
            }
        }
        if optional.len() >= 63 {
            return Err(EsoError::TooLarge(name));
        }
        // Larger relations first: covering constraints tend to need them.
        for mask in (0u64..(1u64 << optional.len())).rev() {
            self.tick()?;
            let mut ts = required.clone();
            ts.extend(optional.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &t)| t));
            self.set_rel(i, with(&ts));
            if self.all_hold(here)? && self.run(i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn function(&mut self, i: usize, width: usize, here: &[Formula]) -> Result<bool, EsoError> {
        let n = self.ext.base.size();
        let total = (n as u64).checked_pow(width as u32).ok_or_else(|| EsoError::TooLarge(self.prefix[i].name.clone()))?;
        for code in 0..total {
            self.tick()?;
            let mut c = code;
            let table: Vec<Elem> = (0..width)
                .map(|_| {
                    let d = (c % n as u64) as Elem;
                    c /= n as u64;
                    d
                })
                .collect();
            self.ext.interp[i] = Interp::Fun(table);
            if self.all_hold(here)? && self.run(i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `M ⊨ Φ(a)`: some interpretation of the prefix symbols makes the matrix
/// true. Relations and functions are enumerated exhaustively, pruned by
/// checking each matrix conjunct as soon as its symbols are fixed.
pub fn eval_eso(m: &Model, phi: &EsoFormula, a: &BTreeSet<Vec<Elem>>) -> Result<bool, EsoError> {
    eval_eso_with_stats(m, phi, a, DEFAULT_CANDIDATE_BUDGET).map(|(b, _)| b)
}

pub fn eval_eso_with_stats(
    m: &Model,
    phi: &EsoFormula,
    a: &BTreeSet<Vec<Elem>>,
    budget: u64,
) -> Result<(bool, EsoStats), EsoError> {
    let n = m.size();
    let mut free_rel = vec![false; n.pow(phi.free_arity as u32)];
    for t in a {
        if t.len() != phi.free_arity || t.iter().any(|&e| e as usize >= n) {
            return Err(EsoError::Arity(t.clone()));
        }
        free_rel[index_of(n, t)] = true;
    }
    let index: HashMap<&str, usize> = phi.prefix.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let mut levels = vec![Vec::new(); phi.prefix.len() + 1];
    let mut parts = Vec::new();
    flatten(&phi.matrix, &mut parts);
    for c in parts {
        let level = mentions(&c, &index).map_or(0, |i| i + 1);
        levels[level].push(c);
    }
    let interp = phi
        .prefix
        .iter()
        .map(|s| match s.kind {
            SoKind::Relation => Interp::Rel(Vec::new()),
            SoKind::Function => Interp::Fun(Vec::new()),
        })
        .collect();
    let ext = Ext {
        base: m,
        index,
        arities: phi.prefix.iter().map(|s| s.arity).collect(),
        interp,
        free: &phi.free,
        free_rel,
    };
    let mut s = Search { ext, prefix: &phi.prefix, levels, budget, stats: EsoStats::default() };
    let first = core::mem::take(&mut s.levels[0]);
    let ok = s.all_hold(&first)? && s.run(0)?;
    Ok((ok, s.stats))
}

/// All tuples over the model's domain of the given arity, as a set.
pub fn full_relation(m: &Model, arity: usize) -> BTreeSet<Vec<Elem>> {
    all_tuples(m.size(), arity).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_teams, Team};
    use crate::semantics::{satisfies, Mode};

    fn p(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn names(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|v| String::from(*v)).collect()
    }

    fn agree_on_all_teams(f: &str, vs: &[&str], rows: usize) {
        let m = Model::numeric(2);
        let f = p(f);
        let phi = ie_to_eso(&f, &names(vs)).unwrap();
        for t in enumerate_teams(&m, vs.iter().copied(), rows) {
            let team_says = satisfies(&m, &t, &f, Mode::Lax).unwrap().as_bool().unwrap();
            let rel = t.relation_of(&m, &crate::syntax::vars(vs)).unwrap();
            assert_eq!(eval_eso(&m, &phi, &rel).unwrap(), team_says, "{f} on {:?}", t.rows());
        }
    }

    #[test]
    fn translations_agree_with_team_semantics() {
        agree_on_all_teams("incl(x ; y)", &["x", "y"], 4);
        agree_on_all_teams("x = y", &["x", "y"], 4);
        agree_on_all_teams("incl(x ; y) \\/ incl(y ; x)", &["x", "y"], 4);
        agree_on_all_teams("excl(x ; y) \\/ x = y", &["x", "y"], 4);
        agree_on_all_teams("exists x . (incl(y ; x) /\\ excl(x ; y))", &["x", "y"], 4);
        agree_on_all_teams("forall z . (incl(z ; x) \\/ z = y)", &["x", "y"], 4);
        agree_on_all_teams("forall x . exists y . (excl(x ; y) /\\ incl(y ; x))", &["x", "y"], 3);
    }

    #[test]
    fn sentences_use_nullary_relations() {
        let m = Model::numeric(2);
        let f = p("exists x . forall y . (x = y \\/ incl(y ; x))");
        let phi = ie_to_eso(&f, &[]).unwrap();
        assert_eq!(phi.free_arity, 0);
        let unit = BTreeSet::from([Vec::new()]);
        let verdict = satisfies(&m, &Team::unit(), &f, Mode::Lax).unwrap().as_bool().unwrap();
        assert_eq!(eval_eso(&m, &phi, &unit).unwrap(), verdict);
        assert!(eval_eso(&m, &phi, &BTreeSet::new()).unwrap());
    }

    #[test]
    fn literal_clause_shape() {
        let phi = ie_to_eso(&p("x = y"), &names(&["x", "y"])).unwrap();
        assert!(phi.prefix.is_empty());
        assert_eq!(alloc::string::ToString::to_string(&phi.matrix), "forall _v2 _v3 . (~A(_v2, _v3) \\/ _v2 = _v3)");
        let or = ie_to_eso(&p("incl(x ; y) \\/ incl(y ; z)"), &names(&["x", "y", "z"])).unwrap();
        assert_eq!(or.prefix.len(), 2);
    }

    #[test]
    fn direct_second_order_sentences() {
        let m = Model::numeric(2);
        let all = EsoFormula { prefix: Vec::new(), free: "A".into(), free_arity: 1, matrix: p("forall x . A(x)") };
        assert!(eval_eso(&m, &all, &full_relation(&m, 1)).unwrap());
        assert!(!eval_eso(&m, &all, &BTreeSet::from([vec![0]])).unwrap());
        let complement = EsoFormula {
            prefix: vec![SoSymbol { name: "B".into(), arity: 1, kind: SoKind::Relation }],
            free: "A".into(),
            free_arity: 1,
            matrix: p("forall x . ((~A(x) \\/ ~B(x)) /\\ (A(x) \\/ B(x)))"),
        };
        for a in [BTreeSet::new(), BTreeSet::from([vec![1]]), full_relation(&m, 1)] {
            assert!(eval_eso(&m, &complement, &a).unwrap());
        }
        let never = EsoFormula {
            prefix: vec![SoSymbol { name: "f".into(), arity: 1, kind: SoKind::Function }],
            free: "A".into(),
            free_arity: 1,
            matrix: p("forall x . f(x) != f(x)"),
        };
        let (ok, stats) = eval_eso_with_stats(&m, &never, &BTreeSet::new(), 100).unwrap();
        assert!(!ok);
        assert_eq!(stats.candidates, 4);
        assert_eq!(eval_eso_with_stats(&m, &never, &BTreeSet::new(), 3), Err(EsoError::BudgetExceeded(3)));
    }

    #[test]
    fn rejects_untranslated_atoms() {
        assert!(ie_to_eso(&p("dep(x)"), &names(&["x"])).is_err());
        assert!(ie_to_eso(&p("x = y"), &names(&["x"])).is_err());
    }
}
