//! Database dependencies over relations with named attributes: inclusion,
//! exclusion, functional, tuple generating and equality generating
//! dependencies, together with the inclusion/exclusion calculus.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Model, Team};

mod derive;
mod implication;

pub use derive::{derive, verify, Axiom, Derivation, System, VerifyError};
pub use implication::{find_counterexample, semantic_implies, semantic_implies_with_budget, DEFAULT_RELATION_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DbError {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("duplicate attribute `{0}`")]
    DuplicateAttribute(String),
    #[error("tuple has {got} value(s) but the relation has {expected} attribute(s)")]
    TupleWidth { expected: usize, got: usize },
    #[error("`{name}` has {got} argument(s) but the relation has {expected} attribute(s)")]
    Arity { name: String, expected: usize, got: usize },
    #[error("both sides must have the same nonzero length: {0}")]
    Width(String),
    #[error("cannot parse dependency `{0}`: {1}")]
    Parse(String, String),
    #[error("{0}")]
    Unsupported(String),
    #[error("enumeration needs {needed} relations, budget is {budget}")]
    Budget { needed: u128, budget: u64 },
}

/// A relation with named columns. Values are plain strings so that CSV
/// input can be used as is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbRelation {
    attributes: Vec<String>,
    tuples: BTreeSet<Vec<String>>,
}

impl DbRelation {
    pub fn new<S: Into<String>>(
        attributes: impl IntoIterator<Item = S>,
        tuples: impl IntoIterator<Item = Vec<String>>,
    ) -> Result<DbRelation, DbError> {
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for a in &attributes {
            if !seen.insert(a) {
                return Err(DbError::DuplicateAttribute(a.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != attributes.len() {
                return Err(DbError::TupleWidth { expected: attributes.len(), got: t.len() });
            }
            set.insert(t);
        }
        Ok(DbRelation { attributes, tuples: set })
    }

    /// `Rel(X)` with one attribute per team variable, values by label.
    pub fn from_team(m: &Model, team: &Team) -> DbRelation {
        let tuples = team.rows().iter().map(|r| r.iter().map(|&e| m.label(e).to_string()).collect());
        DbRelation::new(team.vars().iter().cloned(), tuples).expect("team rows have the team's width")
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<String>> {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    fn column(&self, a: &str) -> Result<usize, DbError> {
        self.attributes.iter().position(|b| b == a).ok_or_else(|| DbError::UnknownAttribute(a.into()))
    }

    fn columns(&self, attrs: &[String]) -> Result<Vec<usize>, DbError> {
        attrs.iter().map(|a| self.column(a)).collect()
    }

    /// Every value that occurs in some tuple.
    pub fn active_domain(&self) -> BTreeSet<String> {
        self.tuples.iter().flatten().cloned().collect()
    }
}

fn project(t: &[String], cols: &[usize]) -> Vec<String> {
    cols.iter().map(|&c| t[c].clone()).collect()
}

/// An atom of a tuple or equality generating dependency. Arguments are
/// variables; no function symbols or constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DbAtom {
    Rel(String, Vec<String>),
    Eq(String, String),
}

impl DbAtom {
    fn vars(&self) -> Vec<&String> {
        match self {
            DbAtom::Rel(_, vs) => vs.iter().collect(),
            DbAtom::Eq(a, b) => alloc::vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dependency {
    Ind(Vec<String>, Vec<String>),
    Exd(Vec<String>, Vec<String>),
    Fd(Vec<String>, String),
    Tgd { body: Vec<DbAtom>, exists: Vec<String>, head: Vec<DbAtom> },
    Egd { body: Vec<DbAtom>, head: (String, String) },
}

impl Dependency {
    pub fn ind<S: AsRef<str>>(xs: &[S], ys: &[S]) -> Dependency {
        Dependency::Ind(strings(xs), strings(ys))
    }

    pub fn exd<S: AsRef<str>>(xs: &[S], ys: &[S]) -> Dependency {
        Dependency::Exd(strings(xs), strings(ys))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Dependency::Ind(..) => "incl",
            Dependency::Exd(..) => "excl",
            Dependency::Fd(..) => "fd",
            Dependency::Tgd { .. } => "tgd",
            Dependency::Egd { .. } => "egd",
        }
    }

    /// Attribute names mentioned by an inclusion, exclusion or functional
    /// dependency, in order of first occurrence.
    pub fn attributes(&self) -> Vec<String> {
        let all: Vec<&String> = match self {
            Dependency::Ind(a, b) | Dependency::Exd(a, b) => a.iter().chain(b).collect(),
            Dependency::Fd(a, b) => a.iter().chain(core::iter::once(b)).collect(),
            _ => Vec::new(),
        };
        let mut out: Vec<String> = Vec::new();
        for a in all {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        out
    }

    fn check_widths(&self) -> Result<(), DbError> {
        if let Dependency::Ind(a, b) | Dependency::Exd(a, b) = self {
            if a.len() != b.len() || a.is_empty() {
                return Err(DbError::Width(self.to_string()));
            }
        }
        Ok(())
    }
}

fn strings<S: AsRef<str>>(xs: &[S]) -> Vec<String> {
    xs.iter().map(|s| s.as_ref().to_string()).collect()
}

fn join(xs: &[String]) -> String {
    xs.join(", ")
}

fn fmt_conj(atoms: &[DbAtom]) -> String {
    atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" & ")
}

impl fmt::Display for DbAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DbAtom::Rel(r, vs) => write!(f, "{r}({})", join(vs)),
            DbAtom::Eq(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dependency::Ind(a, b) => write!(f, "incl({} ; {})", join(a), join(b)),
            Dependency::Exd(a, b) => write!(f, "excl({} ; {})", join(a), join(b)),
            Dependency::Fd(a, b) if a.is_empty() => write!(f, "fd(-> {b})"),
            Dependency::Fd(a, b) => write!(f, "fd({} -> {b})", join(a)),
            Dependency::Tgd { body, exists, head } if exists.is_empty() => {
                write!(f, "tgd: {} -> {}", fmt_conj(body), fmt_conj(head))
            }
            Dependency::Tgd { body, exists, head } => {
                write!(f, "tgd: {} -> exists {} . {}", fmt_conj(body), exists.join(" "), fmt_conj(head))
            }
            Dependency::Egd { body, head } => write!(f, "egd: {} -> {} = {}", fmt_conj(body), head.0, head.1),
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn ident_list(src: &str, s: &str, sep: char) -> Result<Vec<String>, DbError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(sep)
        .map(|p| {
            let p = p.trim();
            if is_ident(p) {
                Ok(p.to_string())
            } else {
                Err(DbError::Parse(src.into(), format!("`{p}` is not a name")))
            }
        })
        .collect()
}

/// `name(args)` with the closing parenthesis at the end of `s`.
fn call<'a>(src: &str, s: &'a str) -> Result<(&'a str, &'a str), DbError> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| DbError::Parse(src.into(), "expected `(`".into()))?;
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| DbError::Parse(src.into(), "expected `)` at the end".into()))?;
    Ok((s[..open].trim(), inner))
}

fn parse_atom(src: &str, s: &str) -> Result<DbAtom, DbError> {
    let s = s.trim();
    if s.contains('(') {
        let (name, inner) = call(src, s)?;
        if !is_ident(name) {
            return Err(DbError::Parse(src.into(), format!("bad relation name `{name}`")));
        }
        return Ok(DbAtom::Rel(name.into(), ident_list(src, inner, ',')?));
    }
    match s.split_once('=') {
        Some((a, b)) if is_ident(a.trim()) && is_ident(b.trim()) => Ok(DbAtom::Eq(a.trim().into(), b.trim().into())),
        _ => Err(DbError::Parse(src.into(), format!("bad atom `{s}`"))),
    }
}

fn parse_conj(src: &str, s: &str) -> Result<Vec<DbAtom>, DbError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split('&').map(|a| parse_atom(src, a)).collect()
}

fn parse_rule(src: &str, rest: &str, tgd: bool) -> Result<Dependency, DbError> {
    let (body, head) = rest
        .split_once("->")
        .ok_or_else(|| DbError::Parse(src.into(), "expected `->`".into()))?;
    let body = parse_conj(src, body)?;
    let head = head.trim();
    if !tgd {
        return match parse_atom(src, head)? {
            DbAtom::Eq(a, b) => Ok(Dependency::Egd { body, head: (a, b) }),
            DbAtom::Rel(..) => Err(DbError::Parse(src.into(), "the head of an egd is one equality".into())),
        };
    }
    let (exists, head) = match head.strip_prefix("exists ") {
        Some(h) => {
            let (vs, h) = h
                .split_once('.')
                .ok_or_else(|| DbError::Parse(src.into(), "expected `.` after the existential variables".into()))?;
            let vs: Vec<String> = vs.split([' ', ',']).filter(|v| !v.is_empty()).map(String::from).collect();
            if let Some(v) = vs.iter().find(|v| !is_ident(v)) {
                return Err(DbError::Parse(src.into(), format!("`{v}` is not a name")));
            }
            (vs, h)
        }
        None => (Vec::new(), head),
    };
    Ok(Dependency::Tgd { body, exists, head: parse_conj(src, head)? })
}

impl core::str::FromStr for Dependency {
    type Err = DbError;

    fn from_str(src: &str) -> Result<Dependency, DbError> {
        let s = src.trim();
        if let Some(rest) = s.strip_prefix("tgd:") {
            return parse_rule(src, rest, true);
        }
        if let Some(rest) = s.strip_prefix("egd:") {
            return parse_rule(src, rest, false);
        }
        let (name, inner) = call(src, s)?;
        let d = match name {
            "incl" | "excl" => {
                let (a, b) = inner
                    .split_once(';')
                    .ok_or_else(|| DbError::Parse(src.into(), "expected `;` between the two sides".into()))?;
                let (a, b) = (ident_list(src, a, ',')?, ident_list(src, b, ',')?);
                if name == "incl" {
                    Dependency::Ind(a, b)
                } else {
                    Dependency::Exd(a, b)
                }
            }
            "fd" => {
                let (a, b) = inner
                    .split_once("->")
                    .ok_or_else(|| DbError::Parse(src.into(), "expected `->`".into()))?;
                let b = b.trim();
                if !is_ident(b) {
                    return Err(DbError::Parse(src.into(), format!("`{b}` is not a name")));
                }
                Dependency::Fd(ident_list(src, a, ',')?, b.into())
            }
            other => return Err(DbError::Parse(src.into(), format!("unknown dependency kind `{other}`"))),
        };
        d.check_widths()?;
        Ok(d)
    }
}

/// Rows of the relation that witness a violated dependency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rows: Vec<Vec<String>>,
}

pub fn check_dependency(r: &DbRelation, d: &Dependency) -> Result<bool, DbError> {
    Ok(find_violation(r, d, &[])?.is_none())
}

/// Like [`check_dependency`], with tuple and equality generating
/// dependencies quantifying over the active domain plus `universe`.
pub fn check_dependency_in(r: &DbRelation, d: &Dependency, universe: &[String]) -> Result<bool, DbError> {
    Ok(find_violation(r, d, universe)?.is_none())
}

/// The first violation in tuple order, if any.
pub fn find_violation(r: &DbRelation, d: &Dependency, universe: &[String]) -> Result<Option<Violation>, DbError> {
    d.check_widths()?;
    match d {
        Dependency::Ind(a, b) => {
            let (ca, cb) = (r.columns(a)?, r.columns(b)?);
            let rhs: BTreeSet<Vec<String>> = r.tuples.iter().map(|t| project(t, &cb)).collect();
            Ok(r.tuples
                .iter()
                .find(|t| !rhs.contains(&project(t, &ca)))
                .map(|t| Violation { rows: alloc::vec![t.clone()] }))
        }
        Dependency::Exd(a, b) => {
            let (ca, cb) = (r.columns(a)?, r.columns(b)?);
            let mut rhs: BTreeMap<Vec<String>, &Vec<String>> = BTreeMap::new();
            for t in &r.tuples {
                rhs.entry(project(t, &cb)).or_insert(t);
            }
            Ok(r.tuples.iter().find_map(|t| {
                rhs.get(&project(t, &ca)).map(|s| Violation { rows: alloc::vec![t.clone(), (*s).clone()] })
            }))
        }
        Dependency::Fd(a, b) => {
            let (ca, cb) = (r.columns(a)?, r.column(b)?);
            let mut seen: BTreeMap<Vec<String>, &Vec<String>> = BTreeMap::new();
            for t in &r.tuples {
                match seen.get(&project(t, &ca)) {
                    Some(s) if s[cb] != t[cb] => {
                        return Ok(Some(Violation { rows: alloc::vec![(*s).clone(), t.clone()] }));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(project(t, &ca), t);
                    }
                }
            }
            Ok(None)
        }
        Dependency::Tgd { body, exists, head } => {
            let m = Matcher::new(r, universe, body.iter().chain(head))?;
            let universal = rule_universals(body, head, exists);
            let mut found = None;
            m.solve(body, &universal, &mut BTreeMap::new(), &mut Vec::new(), &mut |b, rows| {
                let extra: Vec<String> = exists.iter().filter(|v| !b.contains_key(*v)).cloned().collect();
                let mut b2 = b.clone();
                let ok = m.solve(head, &extra, &mut b2, &mut Vec::new(), &mut |_, _| true);
                if !ok {
                    found = Some(Violation { rows: rows.to_vec() });
                }
                !ok
            });
            Ok(found)
        }
        Dependency::Egd { body, head } => {
            let m = Matcher::new(r, universe, body.iter())?;
            let universal = rule_universals(body, &[DbAtom::Eq(head.0.clone(), head.1.clone())], &[]);
            let mut found = None;
            m.solve(body, &universal, &mut BTreeMap::new(), &mut Vec::new(), &mut |b, rows| {
                let bad = b[&head.0] != b[&head.1];
                if bad {
                    found = Some(Violation { rows: rows.to_vec() });
                }
                bad
            });
            Ok(found)
        }
    }
}

/// Variables of the rule that are universally quantified.
fn rule_universals(body: &[DbAtom], head: &[DbAtom], exists: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in body.iter().chain(head).flat_map(|a| a.vars()) {
        if !exists.contains(v) && !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Backtracking search for valuations of a conjunction of atoms.
struct Matcher<'a> {
    rel: &'a DbRelation,
    domain: Vec<String>,
}

/// Continuation receiving a binding and the tuples that matched.
type Found<'a> = dyn FnMut(&BTreeMap<String, String>, &[Vec<String>]) -> bool + 'a;

impl<'a> Matcher<'a> {
    fn new<'b>(
        rel: &'a DbRelation,
        universe: &[String],
        atoms: impl Iterator<Item = &'b DbAtom>,
    ) -> Result<Matcher<'a>, DbError> {
        let mut name: Option<&String> = None;
        for a in atoms {
            if let DbAtom::Rel(n, vs) = a {
                if vs.len() != rel.attributes.len() {
                    return Err(DbError::Arity { name: n.clone(), expected: rel.attributes.len(), got: vs.len() });
                }
                match name {
                    Some(m) if m != n => {
                        return Err(DbError::Unsupported(format!(
                            "dependencies mention one relation, found `{m}` and `{n}`"
                        )))
                    }
                    _ => name = Some(n),
                }
            }
        }
        let mut domain = rel.active_domain();
        domain.extend(universe.iter().cloned());
        Ok(Matcher { rel, domain: domain.into_iter().collect() })
    }

    /// Calls `k` on every valuation of `atoms` extending `b` that also binds
    /// `extra`, until `k` returns true. Returns whether it did.
    fn solve(
        &self,
        atoms: &[DbAtom],
        extra: &[String],
        b: &mut BTreeMap<String, String>,
        rows: &mut Vec<Vec<String>>,
        k: &mut Found<'_>,
    ) -> bool {
        let rel_pos = atoms.iter().position(|a| matches!(a, DbAtom::Rel(..)));
        if let Some(i) = rel_pos {
            let DbAtom::Rel(_, vs) = &atoms[i] else { unreachable!() };
            let rest: Vec<DbAtom> = atoms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, a)| a.clone()).collect();
            for t in &self.rel.tuples {
                let mut added = Vec::new();
                let mut ok = true;
                for (v, val) in vs.iter().zip(t) {
                    match b.get(v) {
                        Some(w) if w != val => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            b.insert(v.clone(), val.clone());
                            added.push(v.clone());
                        }
                    }
                }
                if ok {
                    rows.push(t.clone());
                    let stop = self.solve(&rest, extra, b, rows, k);
                    rows.pop();
                    if stop {
                        for v in &added {
                            b.remove(v);
                        }
                        return true;
                    }
                }
                for v in &added {
                    b.remove(v);
                }
            }
            return false;
        }
        // Only equalities left: bind what is still free from the domain.
        let free = atoms
            .iter()
            .flat_map(|a| a.vars())
            .chain(extra)
            .find(|v| !b.contains_key(*v))
            .cloned();
        if let Some(v) = free {
            for val in &self.domain {
                b.insert(v.clone(), val.clone());
                let stop = self.solve(atoms, extra, b, rows, k);
                if stop {
                    b.remove(&v);
                    return true;
                }
            }
            b.remove(&v);
            return false;
        }
        let eqs_hold = atoms.iter().all(|a| match a {
            DbAtom::Eq(x, y) => b[x] == b[y],
            DbAtom::Rel(..) => unreachable!(),
        });
        eqs_hold && k(b, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rel(attrs: &[&str], rows: &[&[&str]]) -> DbRelation {
        DbRelation::new(attrs.iter().copied(), rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect())).unwrap()
    }

    fn dep(s: &str) -> Dependency {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render_round_trip() {
        for s in [
            "incl(A, B ; C, D)",
            "excl(A ; B)",
            "fd(A, B -> C)",
            "fd(-> C)",
            "tgd: A(x, y) & A(y, z) -> exists w . A(x, w)",
            "tgd: A(x, y) -> A(y, x)",
            "egd: A(x, y) & A(x, z) -> y = z",
        ] {
            assert_eq!(dep(s).to_string(), s);
        }
        assert_eq!(dep("incl(A,B ; C,D)"), Dependency::ind(&["A", "B"], &["C", "D"]));
        assert!(matches!("incl(A ; C, D)".parse::<Dependency>(), Err(DbError::Width(_))));
        assert!(matches!("mvd(A ; B)".parse::<Dependency>(), Err(DbError::Parse(..))));
        assert!(matches!("egd: A(x) -> A(x)".parse::<Dependency>(), Err(DbError::Parse(..))));
    }

    #[test]
    fn family_inclusions() {
        let r = rel(
            &["Person", "Father", "Mother", "Child"],
            &[&["ann", "bob", "cat", "ann"], &["bob", "bob", "cat", "ann"], &["cat", "bob", "cat", "ann"]],
        );
        assert!(check_dependency(&r, &dep("incl(Father ; Person)")).unwrap());
        assert!(check_dependency(&r, &dep("incl(Mother ; Person)")).unwrap());
        assert!(!check_dependency(&r, &dep("incl(Person ; Father)")).unwrap());
        assert!(check_dependency(&r, &dep("excl(Father ; Mother)")).unwrap());
        assert_eq!(check_dependency(&r, &dep("incl(Uncle ; Person)")), Err(DbError::UnknownAttribute("Uncle".into())));
    }

    #[test]
    fn functional_dependency_and_its_egd() {
        let r = rel(&["x", "y"], &[&["0", "1"], &["0", "2"]]);
        let fd = dep("fd(x -> y)");
        assert!(!check_dependency(&r, &fd).unwrap());
        let egd = dep("egd: A(x, y1) & A(x, y2) -> y1 = y2");
        assert!(!check_dependency(&r, &egd).unwrap());
        let v = find_violation(&r, &fd, &[]).unwrap().unwrap();
        assert_eq!(v.rows.len(), 2);
        let ok = rel(&["x", "y"], &[&["0", "1"], &["1", "1"]]);
        assert!(check_dependency(&ok, &fd).unwrap());
        assert!(check_dependency(&ok, &egd).unwrap());
    }

    #[test]
    fn independence_as_tgd() {
        // y ⊥_x z on Rel(X) with columns x, y, z.
        let tgd = dep("tgd: A(x, y1, z1) & A(x, y2, z2) -> A(x, y1, z2)");
        let full = rel(&["x", "y", "z"], &[&["0", "0", "0"], &["0", "0", "1"], &["0", "1", "0"], &["0", "1", "1"]]);
        assert!(check_dependency(&full, &tgd).unwrap());
        let diag = rel(&["x", "y", "z"], &[&["0", "0", "0"], &["0", "1", "1"]]);
        assert!(!check_dependency(&diag, &tgd).unwrap());
        let arity = dep("tgd: A(x, y) -> A(y, x)");
        assert!(matches!(check_dependency(&full, &arity), Err(DbError::Arity { .. })));
    }

    #[test]
    fn existential_heads_and_universe() {
        let r = rel(&["a", "b"], &[&["0", "1"], &["1", "2"]]);
        // Every b value starts some row: fails for 2.
        let tgd = dep("tgd: A(x, y) -> exists w . A(y, w)");
        let v = find_violation(&r, &tgd, &[]).unwrap().unwrap();
        assert_eq!(v.rows, vec![vec!["1".to_string(), "2".to_string()]]);
        // A head variable missing from the body ranges over the domain.
        let all = dep("tgd: A(x, y) -> A(x, z)");
        assert!(!check_dependency(&r, &all).unwrap());
        let single = rel(&["a", "b"], &[&["0", "0"]]);
        assert!(check_dependency(&single, &all).unwrap());
        assert!(!check_dependency_in(&single, &all, &["9".to_string()]).unwrap());
    }
}
