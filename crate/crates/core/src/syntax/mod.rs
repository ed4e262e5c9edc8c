//! Formula syntax: terms, literals, dependency atoms and connectives.
//!
//! Formulas are kept in negation normal form. Negation only ever sits on a
//! first-order atom; the parser pushes `~` inward and rejects negated
//! dependency atoms.

mod parse;
mod render;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use parse::{parse_formula, parse_formula_lenient, parse_term, parse_term_list, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn mentions_var(&self, v: &str) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.mentions_var(v)),
        }
    }

    /// Simultaneous substitution of variables by terms.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect()),
        }
    }
}

pub fn vars(names: &[&str]) -> Vec<Term> {
    names.iter().map(|n| Term::var(n)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FoAtom {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: FoAtom,
}

impl Literal {
    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }
}

/// Dependency atom families. Constancy is `Dep` with a single term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomFamily {
    Dep,
    Indep,
    Incl,
    Excl,
    Equi,
}

impl AtomFamily {
    pub const ALL: [AtomFamily; 5] =
        [AtomFamily::Dep, AtomFamily::Indep, AtomFamily::Incl, AtomFamily::Excl, AtomFamily::Equi];

    pub fn keyword(self) -> &'static str {
        match self {
            AtomFamily::Dep => "dep",
            AtomFamily::Indep => "indep",
            AtomFamily::Incl => "incl",
            AtomFamily::Excl => "excl",
            AtomFamily::Equi => "equi",
        }
    }

    pub fn from_keyword(s: &str) -> Option<AtomFamily> {
        AtomFamily::ALL.into_iter().find(|f| f.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Lit(Literal),
    Dep(Vec<Term>),
    Indep(Vec<Term>, Vec<Term>, Vec<Term>),
    Incl(Vec<Term>, Vec<Term>),
    Excl(Vec<Term>, Vec<Term>),
    Equi(Vec<Term>, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Lit(Literal { positive: true, atom: FoAtom::Eq(a, b) })
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::Lit(Literal { positive: false, atom: FoAtom::Eq(a, b) })
    }

    pub fn rel(name: &str, args: Vec<Term>, positive: bool) -> Formula {
        Formula::Lit(Literal { positive, atom: FoAtom::Rel(name.into(), args) })
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// `exists v1 . exists v2 . ... body`
    pub fn exists_all<S: AsRef<str>>(vs: &[S], body: Formula) -> Formula {
        vs.iter().rev().fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    pub fn forall_all<S: AsRef<str>>(vs: &[S], body: Formula) -> Formula {
        vs.iter().rev().fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// Left-associated conjunction. Panics on an empty iterator.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::and).expect("empty conjunction")
    }

    /// Left-associated disjunction. Panics on an empty iterator.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).expect("empty disjunction")
    }

    /// Componentwise equality of two nonempty tuples.
    pub fn tuple_eq(a: &[Term], b: &[Term]) -> Formula {
        Formula::conj(a.iter().zip(b).map(|(x, y)| Formula::eq(x.clone(), y.clone())))
    }

    /// The negation of [`Formula::tuple_eq`].
    pub fn tuple_neq(a: &[Term], b: &[Term]) -> Formula {
        Formula::disj(a.iter().zip(b).map(|(x, y)| Formula::neq(x.clone(), y.clone())))
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::Lit(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_first_order() && b.is_first_order(),
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.is_first_order(),
            _ => false,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
            _ => true,
        }
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, Formula::And(..) | Formula::Or(..) | Formula::Exists(..) | Formula::Forall(..))
    }

    pub fn family(&self) -> Option<AtomFamily> {
        match self {
            Formula::Dep(_) => Some(AtomFamily::Dep),
            Formula::Indep(..) => Some(AtomFamily::Indep),
            Formula::Incl(..) => Some(AtomFamily::Incl),
            Formula::Excl(..) => Some(AtomFamily::Excl),
            Formula::Equi(..) => Some(AtomFamily::Equi),
            _ => None,
        }
    }

    /// Dependency atom families occurring in the formula.
    pub fn families(&self) -> BTreeSet<AtomFamily> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Some(fam) = f.family() {
                out.insert(fam);
            }
        });
        out
    }

    /// Pre-order visit of every subformula.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.visit(f),
            _ => {}
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.depth(),
            _ => 1,
        }
    }

    /// Terms of an atom, in slot order.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Lit(l) => match &l.atom {
                FoAtom::Rel(_, ts) => ts.iter().collect(),
                FoAtom::Eq(a, b) => alloc::vec![a, b],
            },
            Formula::Dep(ts) => ts.iter().collect(),
            Formula::Indep(a, b, c) => a.iter().chain(b).chain(c).collect(),
            Formula::Incl(a, b) | Formula::Excl(a, b) | Formula::Equi(a, b) => a.iter().chain(b).collect(),
            _ => Vec::new(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            atom => {
                let mut vs = BTreeSet::new();
                atom.atom_terms().iter().for_each(|t| t.collect_vars(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
        }
    }

    /// Every variable name occurring in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            atom => atom.atom_terms().iter().for_each(|t| t.collect_vars(&mut out)),
        });
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Nonlogical symbols used by the formula.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        fn term(t: &Term, sig: &mut Signature) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    sig.constants.insert(c.clone());
                }
                Term::App(f, args) => {
                    sig.functions.insert(f.clone(), args.len());
                    args.iter().for_each(|a| term(a, sig));
                }
            }
        }
        self.visit(&mut |f| {
            if let Formula::Lit(Literal { atom: FoAtom::Rel(r, args), .. }) = f {
                sig.relations.insert(r.clone(), args.len());
            }
            f.atom_terms().into_iter().for_each(|t| term(t, &mut sig));
        });
        sig
    }

    /// Applies `f` to each term of every atom, leaving binders alone.
    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Formula {
        let m = |ts: &Vec<Term>| ts.iter().map(f).collect::<Vec<_>>();
        match self {
            Formula::Lit(l) => Formula::Lit(Literal {
                positive: l.positive,
                atom: match &l.atom {
                    FoAtom::Rel(r, ts) => FoAtom::Rel(r.clone(), m(ts)),
                    FoAtom::Eq(a, b) => FoAtom::Eq(f(a), f(b)),
                },
            }),
            Formula::Dep(ts) => Formula::Dep(m(ts)),
            Formula::Indep(a, b, c) => Formula::Indep(m(a), m(b), m(c)),
            Formula::Incl(a, b) => Formula::Incl(m(a), m(b)),
            Formula::Excl(a, b) => Formula::Excl(m(a), m(b)),
            Formula::Equi(a, b) => Formula::Equi(m(a), m(b)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Exists(v, b) => Formula::exists(v, b.map_terms(f)),
            Formula::Forall(v, b) => Formula::forall(v, b.map_terms(f)),
        }
    }

    /// Renames free variables. Targets must not be bound anywhere in the
    /// formula; callers pass fresh names.
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Formula {
        let mut bound = Vec::new();
        self.rename_free_inner(map, &mut bound)
    }

    fn rename_free_inner(&self, map: &BTreeMap<String, String>, bound: &mut Vec<String>) -> Formula {
        match self {
            Formula::And(a, b) => Formula::and(a.rename_free_inner(map, bound), b.rename_free_inner(map, bound)),
            Formula::Or(a, b) => Formula::or(a.rename_free_inner(map, bound), b.rename_free_inner(map, bound)),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                bound.push(v.clone());
                let body = b.rename_free_inner(map, bound);
                bound.pop();
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }
            atom => {
                let sub: BTreeMap<String, Term> = map
                    .iter()
                    .filter(|(k, _)| !bound.contains(k))
                    .map(|(k, v)| (k.clone(), Term::Var(v.clone())))
                    .collect();
                atom.map_terms(&|t| t.substitute(&sub))
            }
        }
    }

    /// Negation normal form of the negation of a first-order formula.
    pub fn negate(&self) -> Result<Formula, NotFirstOrder> {
        Ok(match self {
            Formula::Lit(l) => Formula::Lit(l.negated()),
            Formula::And(a, b) => Formula::or(a.negate()?, b.negate()?),
            Formula::Or(a, b) => Formula::and(a.negate()?, b.negate()?),
            Formula::Exists(v, b) => Formula::forall(v, b.negate()?),
            Formula::Forall(v, b) => Formula::exists(v, b.negate()?),
            other => return Err(NotFirstOrder(format!("{other}"))),
        })
    }

    /// Every subformula instance with its path from the root, in pre-order.
    pub fn subformula_instances(&self) -> Vec<(Path, &Formula)> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, path: &mut Vec<Step>, out: &mut Vec<(Path, &'a Formula)>) {
            out.push((Path(path.clone()), f));
            match f {
                Formula::And(a, b) | Formula::Or(a, b) => {
                    path.push(Step::Left);
                    go(a, path, out);
                    path.pop();
                    path.push(Step::Right);
                    go(b, path, out);
                    path.pop();
                }
                Formula::Exists(_, b) | Formula::Forall(_, b) => {
                    path.push(Step::Body);
                    go(b, path, out);
                    path.pop();
                }
                _ => {}
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// The subformula at `path`, if the path is valid.
    pub fn at(&self, path: &Path) -> Option<&Formula> {
        let mut cur = self;
        for step in &path.0 {
            cur = match (cur, step) {
                (Formula::And(a, _) | Formula::Or(a, _), Step::Left) => a,
                (Formula::And(_, b) | Formula::Or(_, b), Step::Right) => b,
                (Formula::Exists(_, b) | Formula::Forall(_, b), Step::Body) => b,
                _ => return None,
            };
        }
        Some(cur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a first-order formula: `{0}`")]
pub struct NotFirstOrder(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Left,
    Right,
    Body,
}

/// Location of a subformula instance: the steps taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Step>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(match s {
                Step::Left => "L",
                Step::Right => "R",
                Step::Body => "B",
            })?;
        }
        Ok(())
    }
}

/// Relation, function and constant symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub relations: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl Signature {
    pub fn merge(&mut self, other: &Signature) {
        self.relations.extend(other.relations.iter().map(|(k, v)| (k.clone(), *v)));
        self.functions.extend(other.functions.iter().map(|(k, v)| (k.clone(), *v)));
        self.constants.extend(other.constants.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty() && self.functions.is_empty() && self.constants.is_empty()
    }
}

/// Generator of fresh variable names `_v0`, `_v1`, ... skipping taken names.
#[derive(Clone, Debug, Default)]
pub struct FreshVars {
    taken: BTreeSet<String>,
    next: usize,
}

impl FreshVars {
    pub fn new(taken: BTreeSet<String>) -> FreshVars {
        FreshVars { taken, next: 0 }
    }

    pub fn avoiding(f: &Formula) -> FreshVars {
        FreshVars::new(f.all_vars())
    }

    pub fn avoiding_terms<'a, I: IntoIterator<Item = &'a Term>>(ts: I) -> FreshVars {
        let mut taken = BTreeSet::new();
        ts.into_iter().for_each(|t| t.collect_vars(&mut taken));
        FreshVars::new(taken)
    }

    pub fn reserve<I: IntoIterator<Item = String>>(&mut self, names: I) {
        self.taken.extend(names);
    }

    pub fn next_name(&mut self) -> String {
        loop {
            let name = format!("_v{}", self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    pub fn take(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.next_name()).collect()
    }
}

/// `count` names of the form `_vN` not occurring in `f`.
pub fn fresh_vars(f: &Formula, count: usize) -> Vec<String> {
    FreshVars::avoiding(f).take(count)
}
