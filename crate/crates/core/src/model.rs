//! Finite structures, assignments and teams.
//!
//! Domain elements are dense indices `0..n` with string labels kept by the
//! model. A team stores its rows sorted and deduplicated, so structural
//! equality is set equality.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{Signature, Term};

pub type Elem = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("domain has {0} element(s); at least {1} required")]
    DomainTooSmall(usize, usize),
    #[error("duplicate domain element `{0}`")]
    DuplicateElement(String),
    #[error("unknown domain element `{0}`")]
    UnknownElement(String),
    #[error("symbol `{0}` is already declared")]
    DuplicateSymbol(String),
    #[error("`{name}` expects {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("function `{0}` is not total: {1}")]
    PartialFunction(String, String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("variable `{0}` listed twice")]
    DuplicateVariable(String),
    #[error("row has {got} value(s) but the team has {expected} variable(s)")]
    RowWidth { expected: usize, got: usize },
    #[error("teams range over different variables")]
    VariableMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

/// A total function stored as a table indexed by the mixed-radix encoding
/// of its arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Function {
    pub arity: usize,
    table: Vec<Elem>,
}

impl Function {
    pub fn apply(&self, n: usize, args: &[Elem]) -> Elem {
        self.table[index_of(n, args)]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }
}

/// Mixed-radix index of a tuple over a domain of size `n`.
pub fn index_of(n: usize, tuple: &[Elem]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * n + e as usize)
}

/// The tuple with mixed-radix index `idx`.
pub fn tuple_of(n: usize, arity: usize, mut idx: usize) -> Vec<Elem> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = (idx % n) as Elem;
        idx /= n;
    }
    out
}

/// All tuples of the given arity in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<Elem>> {
    let count = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    (0..count).map(move |i| tuple_of(n, arity, i))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    domain: Vec<String>,
    relations: BTreeMap<String, Relation>,
    functions: BTreeMap<String, Function>,
    constants: BTreeMap<String, Elem>,
}

impl Model {
    /// A model over the given labels with an empty signature. At least two
    /// elements are required.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Model, ModelError> {
        Model::with_min_size(labels, 2)
    }

    /// Like [`Model::new`] but also accepts a one-element domain.
    pub fn new_allowing_unit<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Model, ModelError> {
        Model::with_min_size(labels, 1)
    }

    fn with_min_size<S: Into<String>>(labels: impl IntoIterator<Item = S>, min: usize) -> Result<Model, ModelError> {
        let domain: Vec<String> = labels.into_iter().map(Into::into).collect();
        if domain.len() < min {
            return Err(ModelError::DomainTooSmall(domain.len(), min));
        }
        let mut seen = BTreeSet::new();
        for l in &domain {
            if !seen.insert(l) {
                return Err(ModelError::DuplicateElement(l.clone()));
            }
        }
        Ok(Model { domain, relations: BTreeMap::new(), functions: BTreeMap::new(), constants: BTreeMap::new() })
    }

    /// Domain `{"0", ..., "n-1"}`.
    pub fn numeric(n: usize) -> Model {
        Model::new_allowing_unit((0..n).map(|i| i.to_string())).expect("n >= 1")
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.domain.len() as Elem
    }

    pub fn labels(&self) -> &[String] {
        &self.domain
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.domain[e as usize]
    }

    pub fn elem(&self, label: &str) -> Result<Elem, ModelError> {
        self.domain
            .iter()
            .position(|l| l == label)
            .map(|i| i as Elem)
            .ok_or_else(|| ModelError::UnknownElement(label.into()))
    }

    fn check_fresh(&self, name: &str) -> Result<(), ModelError> {
        if self.relations.contains_key(name) || self.functions.contains_key(name) || self.constants.contains_key(name) {
            return Err(ModelError::DuplicateSymbol(name.into()));
        }
        Ok(())
    }

    fn check_tuple(&self, name: &str, arity: usize, t: &[Elem]) -> Result<(), ModelError> {
        if t.len() != arity {
            return Err(ModelError::Arity { name: name.into(), expected: arity, got: t.len() });
        }
        if let Some(&e) = t.iter().find(|&&e| e as usize >= self.size()) {
            return Err(ModelError::UnknownElement(format!("#{e}")));
        }
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<Elem>>,
    ) -> Result<(), ModelError> {
        self.check_fresh(name)?;
        let mut set = BTreeSet::new();
        for t in tuples {
            self.check_tuple(name, arity, &t)?;
            set.insert(t);
        }
        self.relations.insert(name.into(), Relation { arity, tuples: set });
        Ok(())
    }

    /// Adds a function from a table in mixed-radix argument order.
    pub fn add_function(&mut self, name: &str, arity: usize, table: Vec<Elem>) -> Result<(), ModelError> {
        self.check_fresh(name)?;
        let expected = self.size().pow(arity as u32);
        if table.len() != expected {
            return Err(ModelError::PartialFunction(name.into(), format!("{} of {expected} entries", table.len())));
        }
        self.check_tuple(name, table.len(), &table)?;
        self.functions.insert(name.into(), Function { arity, table });
        Ok(())
    }

    /// Adds a function given by an argument-tuple map, which must be total.
    pub fn add_function_map(
        &mut self,
        name: &str,
        arity: usize,
        map: &BTreeMap<Vec<Elem>, Elem>,
    ) -> Result<(), ModelError> {
        let n = self.size();
        let mut table = Vec::with_capacity(n.pow(arity as u32));
        for args in all_tuples(n, arity) {
            match map.get(&args) {
                Some(&v) => table.push(v),
                None => {
                    let shown: Vec<&str> = args.iter().map(|&a| self.label(a)).collect();
                    return Err(ModelError::PartialFunction(name.into(), format!("no value at ({})", shown.join(","))));
                }
            }
        }
        self.add_function(name, arity, table)
    }

    pub fn add_constant(&mut self, name: &str, value: Elem) -> Result<(), ModelError> {
        self.check_fresh(name)?;
        self.check_tuple(name, 1, &[value])?;
        self.constants.insert(name.into(), value);
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<Elem> {
        self.constants.get(name).copied()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&String, &Relation)> {
        self.relations.iter()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&String, &Function)> {
        self.functions.iter()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&String, Elem)> {
        self.constants.iter().map(|(k, &v)| (k, v))
    }

    pub fn signature(&self) -> Signature {
        Signature {
            relations: self.relations.iter().map(|(k, r)| (k.clone(), r.arity)).collect(),
            functions: self.functions.iter().map(|(k, f)| (k.clone(), f.arity)).collect(),
            constants: self.constants.keys().cloned().collect(),
        }
    }

    /// Value of a term under a variable lookup.
    pub fn eval_term(&self, t: &Term, lookup: &dyn Fn(&str) -> Option<Elem>) -> Result<Elem, ModelError> {
        match t {
            Term::Var(v) => lookup(v).ok_or_else(|| ModelError::UnboundVariable(v.clone())),
            Term::Const(c) => self.constant(c).ok_or_else(|| ModelError::UnknownSymbol(c.clone())),
            Term::App(f, args) => {
                let fun = self.function(f).ok_or_else(|| ModelError::UnknownSymbol(f.clone()))?;
                if fun.arity != args.len() {
                    return Err(ModelError::Arity { name: f.clone(), expected: fun.arity, got: args.len() });
                }
                let vals = args.iter().map(|a| self.eval_term(a, lookup)).collect::<Result<Vec<_>, _>>()?;
                Ok(fun.apply(self.size(), &vals))
            }
        }
    }

    pub fn eval_terms(&self, ts: &[Term], s: &Assignment) -> Result<Vec<Elem>, ModelError> {
        ts.iter().map(|t| self.eval_term(t, &|v| s.get(v))).collect()
    }

    pub fn holds_relation(&self, name: &str, args: &[Elem]) -> Result<bool, ModelError> {
        let r = self.relation(name).ok_or_else(|| ModelError::UnknownSymbol(name.into()))?;
        if r.arity != args.len() {
            return Err(ModelError::Arity { name: name.into(), expected: r.arity, got: args.len() });
        }
        Ok(r.tuples.contains(args))
    }
}

/// A finite map from variables to domain elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub BTreeMap<String, Elem>);

impl Assignment {
    pub fn empty() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, v: &str) -> Option<Elem> {
        self.0.get(v).copied()
    }

    /// `s[m/x]`.
    pub fn with(&self, v: &str, m: Elem) -> Assignment {
        let mut out = self.clone();
        out.0.insert(v.into(), m);
        out
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }
}

impl<S: Into<String>> FromIterator<(S, Elem)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Elem)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// A set of assignments with a common domain, stored as rows over an
/// ordered variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Team {
    vars: Vec<String>,
    rows: Vec<Vec<Elem>>,
}

impl Team {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        rows: impl IntoIterator<Item = Vec<Elem>>,
    ) -> Result<Team, ModelError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(ModelError::DuplicateVariable(v.clone()));
            }
        }
        let mut rows: Vec<Vec<Elem>> = rows.into_iter().collect();
        if let Some(r) = rows.iter().find(|r| r.len() != vars.len()) {
            return Err(ModelError::RowWidth { expected: vars.len(), got: r.len() });
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Team { vars, rows })
    }

    /// The empty team over `vars`.
    pub fn empty<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Team, ModelError> {
        Team::new(vars, [])
    }

    /// `{∅}`: the team holding only the empty assignment.
    pub fn unit() -> Team {
        Team { vars: Vec::new(), rows: vec![Vec::new()] }
    }

    /// Rows are given by element labels.
    pub fn from_labels<S: Into<String>>(
        m: &Model,
        vars: impl IntoIterator<Item = S>,
        rows: &[&[&str]],
    ) -> Result<Team, ModelError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|l| m.elem(l)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Team::new(vars, rows)
    }

    /// Checks every value is an element of `m`.
    pub fn check_against(&self, m: &Model) -> Result<(), ModelError> {
        match self.rows.iter().flatten().find(|&&e| e as usize >= m.size()) {
            Some(e) => Err(ModelError::UnknownElement(format!("#{e}"))),
            None => Ok(()),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    pub fn assignment(&self, i: usize) -> Assignment {
        self.vars.iter().cloned().zip(self.rows[i].iter().copied()).collect()
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.rows.len()).map(|i| self.assignment(i))
    }

    pub fn contains(&self, row: &[Elem]) -> bool {
        self.rows.binary_search_by(|r| r.as_slice().cmp(row)).is_ok()
    }

    /// `X↾V`, with columns in the order given.
    pub fn restrict<S: AsRef<str>>(&self, vs: &[S]) -> Result<Team, ModelError> {
        let cols = vs
            .iter()
            .map(|v| self.column(v.as_ref()).ok_or_else(|| ModelError::UnboundVariable(v.as_ref().into())))
            .collect::<Result<Vec<_>, _>>()?;
        Team::new(
            vs.iter().map(|v| v.as_ref().to_string()),
            self.rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()),
        )
    }

    /// The same team with columns permuted into `vs` order.
    fn aligned(&self, vs: &[String]) -> Result<Team, ModelError> {
        if vs.len() != self.vars.len() || vs.iter().any(|v| self.column(v).is_none()) {
            return Err(ModelError::VariableMismatch);
        }
        self.restrict(vs)
    }

    pub fn union(&self, other: &Team) -> Result<Team, ModelError> {
        let other = other.aligned(&self.vars)?;
        Team::new(self.vars.clone(), self.rows.iter().chain(other.rows.iter()).cloned())
    }

    pub fn is_subteam_of(&self, other: &Team) -> Result<bool, ModelError> {
        let me = self.aligned(&other.vars)?;
        Ok(me.rows.iter().all(|r| other.contains(r)))
    }

    /// Keeps the rows whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(usize, &[Elem]) -> bool) -> Team {
        let rows = self.rows.iter().enumerate().filter(|(i, r)| keep(*i, r)).map(|(_, r)| r.clone()).collect();
        Team { vars: self.vars.clone(), rows }
    }

    fn extended(&self, v: &str, pairs: impl IntoIterator<Item = (usize, Elem)>) -> Team {
        let (vars, col) = match self.column(v) {
            Some(c) => (self.vars.clone(), c),
            None => {
                let mut vars = self.vars.clone();
                vars.push(v.into());
                (vars, self.vars.len())
            }
        };
        let rows = pairs
            .into_iter()
            .map(|(i, m)| {
                let mut r = self.rows[i].clone();
                if col == r.len() {
                    r.push(m);
                } else {
                    r[col] = m;
                }
                r
            })
            .collect::<Vec<_>>();
        Team::new(vars, rows).expect("well-formed extension")
    }

    /// `X[M/v]`.
    pub fn extend_universal(&self, m: &Model, v: &str) -> Team {
        let n = m.size() as Elem;
        self.extended(v, (0..self.len()).flat_map(|i| (0..n).map(move |e| (i, e))))
    }

    /// `X[F/v]`; `f` must be defined on every row.
    pub fn extend_function(&self, v: &str, f: impl Fn(&Assignment) -> Option<Elem>) -> Result<Team, ModelError> {
        let mut pairs = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let e = f(&self.assignment(i)).ok_or_else(|| ModelError::PartialFunction(v.into(), format!("row {i}")))?;
            pairs.push((i, e));
        }
        Ok(self.extended(v, pairs))
    }

    /// `X[H/v]`; `h` must give a nonempty set on every row.
    pub fn extend_multifunction(
        &self,
        v: &str,
        h: impl Fn(&Assignment) -> Option<Vec<Elem>>,
    ) -> Result<Team, ModelError> {
        let mut pairs = Vec::new();
        for i in 0..self.len() {
            match h(&self.assignment(i)) {
                Some(vals) if !vals.is_empty() => pairs.extend(vals.into_iter().map(|e| (i, e))),
                _ => return Err(ModelError::PartialFunction(v.into(), format!("empty value set at row {i}"))),
            }
        }
        Ok(self.extended(v, pairs))
    }

    /// `Rel_t(X) = { t⟨s⟩ : s ∈ X }`.
    pub fn relation_of(&self, m: &Model, ts: &[Term]) -> Result<BTreeSet<Vec<Elem>>, ModelError> {
        self.assignments().map(|s| m.eval_terms(ts, &s)).collect()
    }
}

/// Iterator over all teams with at most `max_rows` rows over `vars`,
/// ordered lexicographically by their sorted row sequences. The empty team
/// comes first.
pub struct TeamIter {
    vars: Vec<String>,
    all: Vec<Vec<Elem>>,
    max_rows: usize,
    stack: Vec<usize>,
    started: bool,
}

impl Iterator for TeamIter {
    type Item = Team;

    fn next(&mut self) -> Option<Team> {
        if !self.started {
            self.started = true;
        } else if self.stack.len() < self.max_rows && self.stack.last().map_or(0, |&i| i + 1) < self.all.len() {
            let next = self.stack.last().map_or(0, |&i| i + 1);
            self.stack.push(next);
        } else {
            loop {
                let top = self.stack.pop()?;
                if top + 1 < self.all.len() {
                    self.stack.push(top + 1);
                    break;
                }
            }
        }
        let rows = self.stack.iter().map(|&i| self.all[i].clone()).collect();
        Some(Team { vars: self.vars.clone(), rows })
    }
}

pub fn enumerate_teams<S: Into<String>>(m: &Model, vars: impl IntoIterator<Item = S>, max_rows: usize) -> TeamIter {
    let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
    let all = all_tuples(m.size(), vars.len()).collect();
    TeamIter { vars, all, max_rows, stack: Vec::new(), started: false }
}
