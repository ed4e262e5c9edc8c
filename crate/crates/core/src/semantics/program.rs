//! Formulas compiled against a model and a team's column layout.

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Elem, Function, Model, Relation};
use crate::syntax::{FoAtom, Formula, Term};

use super::SemanticsError;

pub(crate) type Row = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CTerm {
    Col(usize),
    Const(Elem),
    App(usize, Vec<CTerm>),
}

impl CTerm {
    fn mentions_any(&self, cols: &[usize]) -> bool {
        match self {
            CTerm::Col(c) => cols.contains(c),
            CTerm::Const(_) => false,
            CTerm::App(_, args) => args.iter().any(|a| a.mentions_any(cols)),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CAtom {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
}

/// A run of fresh existential quantifiers whose variables are all
/// determined by one common key and otherwise occur only in first-order
/// literals of a quantifier-free body.
#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub arity: usize,
    pub key: Vec<CTerm>,
    pub body: usize,
    pub lits: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) enum Kind {
    Lit { positive: bool, atom: CAtom },
    Dep(Vec<CTerm>),
    Indep(Vec<CTerm>, Vec<CTerm>, Vec<CTerm>),
    Incl(Vec<CTerm>, Vec<CTerm>),
    Excl(Vec<CTerm>, Vec<CTerm>),
    Equi(Vec<CTerm>, Vec<CTerm>),
    And(Vec<usize>),
    Or(Vec<usize>),
    Exists { col: usize, body: usize, block: Option<Block> },
    Forall { col: usize, body: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub kind: Kind,
    /// Number of columns of the teams this node is evaluated on.
    pub width: usize,
    /// First-order: flat, so a team satisfies it iff every row does.
    pub fo: bool,
    /// Built from first-order literals, dependence and exclusion atoms.
    pub dc: bool,
    /// Built from first-order literals, inclusion and equiangularity atoms.
    pub uc: bool,
    pub qf: bool,
}

pub(crate) struct Program<'m> {
    pub nodes: Vec<Node>,
    pub root: usize,
    pub rels: Vec<&'m Relation>,
    pub funcs: Vec<&'m Function>,
    pub n: usize,
}

impl<'m> Program<'m> {
    pub fn compile(model: &'m Model, f: &Formula, vars: &[String]) -> Result<Program<'m>, SemanticsError> {
        let mut c = Compiler { model, nodes: Vec::new(), rels: Vec::new(), rel_names: Vec::new(), funcs: Vec::new(), fun_names: Vec::new() };
        let mut layout: Vec<String> = vars.to_vec();
        let root = c.node(f, &mut layout)?;
        Ok(Program { nodes: c.nodes, root, rels: c.rels, funcs: c.funcs, n: model.size() })
    }

    /// Layout-only compilation of a term list, for atom checks on teams.
    pub fn compile_terms(model: &'m Model, ts: &[Term], vars: &[String]) -> Result<(Program<'m>, Vec<CTerm>), SemanticsError> {
        let mut c = Compiler { model, nodes: Vec::new(), rels: Vec::new(), rel_names: Vec::new(), funcs: Vec::new(), fun_names: Vec::new() };
        let cts = c.terms(ts, vars)?;
        Ok((Program { nodes: c.nodes, root: 0, rels: c.rels, funcs: c.funcs, n: model.size() }, cts))
    }

    pub fn term(&self, t: &CTerm, row: &[Elem]) -> Elem {
        match t {
            CTerm::Col(c) => row[*c],
            CTerm::Const(e) => *e,
            CTerm::App(f, args) => {
                let mut idx = 0usize;
                for a in args {
                    idx = idx * self.n + self.term(a, row) as usize;
                }
                self.funcs[*f].table()[idx]
            }
        }
    }

    pub fn tuple(&self, ts: &[CTerm], row: &[Elem]) -> Row {
        ts.iter().map(|t| self.term(t, row)).collect()
    }

    pub fn lit(&self, positive: bool, atom: &CAtom, row: &[Elem]) -> bool {
        let v = match atom {
            CAtom::Eq(a, b) => self.term(a, row) == self.term(b, row),
            CAtom::Rel(r, args) => {
                let vals = self.tuple(args, row);
                self.rels[*r].tuples.contains(&vals)
            }
        };
        v == positive
    }

    /// Classical truth of a first-order node on one row. `row` is used as
    /// scratch space and restored before returning.
    pub fn holds(&self, id: usize, row: &mut Row) -> bool {
        match &self.nodes[id].kind {
            Kind::Lit { positive, atom } => self.lit(*positive, atom, row),
            Kind::And(cs) => cs.iter().all(|&c| self.holds(c, row)),
            Kind::Or(cs) => cs.iter().any(|&c| self.holds(c, row)),
            Kind::Exists { col, body, .. } | Kind::Forall { col, body } => {
                let want = matches!(self.nodes[id].kind, Kind::Exists { .. });
                let append = *col == row.len();
                let saved = if append { 0 } else { row[*col] };
                if append {
                    row.push(0);
                }
                let mut result = !want;
                for e in 0..self.n as Elem {
                    row[*col] = e;
                    if self.holds(*body, row) == want {
                        result = want;
                        break;
                    }
                }
                if append {
                    row.pop();
                } else {
                    row[*col] = saved;
                }
                result
            }
            _ => unreachable!("holds() on a node with dependency atoms"),
        }
    }

    /// Truth of the first-order conjuncts of `id` on a row; rows failing
    /// this can never belong to a team satisfying `id`.
    pub fn eligible(&self, id: usize, row: &mut Row) -> bool {
        let node = &self.nodes[id];
        if node.fo {
            return self.holds(id, row);
        }
        match &node.kind {
            Kind::And(cs) => cs.iter().all(|&c| !self.nodes[c].fo || self.holds(c, row)),
            _ => true,
        }
    }
}

struct Compiler<'m> {
    model: &'m Model,
    nodes: Vec<Node>,
    rels: Vec<&'m Relation>,
    rel_names: Vec<String>,
    funcs: Vec<&'m Function>,
    fun_names: Vec<String>,
}

impl<'m> Compiler<'m> {
    fn term(&mut self, t: &Term, layout: &[String]) -> Result<CTerm, SemanticsError> {
        Ok(match t {
            Term::Var(v) => match layout.iter().rposition(|w| w == v) {
                Some(c) => CTerm::Col(c),
                None => return Err(SemanticsError::FreeVariable(v.clone())),
            },
            Term::Const(c) => {
                CTerm::Const(self.model.constant(c).ok_or_else(|| SemanticsError::UnknownSymbol(c.clone()))?)
            }
            Term::App(f, args) => {
                let fun = self.model.function(f).ok_or_else(|| SemanticsError::UnknownSymbol(f.clone()))?;
                if fun.arity != args.len() {
                    return Err(SemanticsError::UnknownSymbol(alloc::format!("{f}/{}", args.len())));
                }
                let idx = match self.fun_names.iter().position(|n| n == f) {
                    Some(i) => i,
                    None => {
                        self.funcs.push(fun);
                        self.fun_names.push(f.clone());
                        self.funcs.len() - 1
                    }
                };
                CTerm::App(idx, args.iter().map(|a| self.term(a, layout)).collect::<Result<_, _>>()?)
            }
        })
    }

    fn terms(&mut self, ts: &[Term], layout: &[String]) -> Result<Vec<CTerm>, SemanticsError> {
        ts.iter().map(|t| self.term(t, layout)).collect()
    }

    fn push(&mut self, kind: Kind, width: usize, fo: bool, dc: bool, uc: bool, qf: bool) -> usize {
        self.nodes.push(Node { kind, width, fo, dc, uc, qf });
        self.nodes.len() - 1
    }

    fn node(&mut self, f: &Formula, layout: &mut Vec<String>) -> Result<usize, SemanticsError> {
        let width = layout.len();
        let atom = |c: &mut Self, kind: Kind, dc: bool, uc: bool| c.push(kind, width, false, dc, uc, true);
        Ok(match f {
            Formula::Lit(l) => {
                let catom = match &l.atom {
                    FoAtom::Eq(a, b) => CAtom::Eq(self.term(a, layout)?, self.term(b, layout)?),
                    FoAtom::Rel(r, args) => {
                        let rel = self.model.relation(r).ok_or_else(|| SemanticsError::UnknownSymbol(r.clone()))?;
                        if rel.arity != args.len() {
                            return Err(SemanticsError::UnknownSymbol(alloc::format!("{r}/{}", args.len())));
                        }
                        let idx = match self.rel_names.iter().position(|n| n == r) {
                            Some(i) => i,
                            None => {
                                self.rels.push(rel);
                                self.rel_names.push(r.clone());
                                self.rels.len() - 1
                            }
                        };
                        CAtom::Rel(idx, self.terms(args, layout)?)
                    }
                };
                self.push(Kind::Lit { positive: l.positive, atom: catom }, width, true, true, true, true)
            }
            Formula::Dep(ts) => {
                let k = Kind::Dep(self.terms(ts, layout)?);
                atom(self, k, true, false)
            }
            Formula::Indep(a, b, c) => {
                let k = Kind::Indep(self.terms(a, layout)?, self.terms(b, layout)?, self.terms(c, layout)?);
                atom(self, k, false, false)
            }
            Formula::Incl(a, b) => {
                let k = Kind::Incl(self.terms(a, layout)?, self.terms(b, layout)?);
                atom(self, k, false, true)
            }
            Formula::Excl(a, b) => {
                let k = Kind::Excl(self.terms(a, layout)?, self.terms(b, layout)?);
                atom(self, k, true, false)
            }
            Formula::Equi(a, b) => {
                let k = Kind::Equi(self.terms(a, layout)?, self.terms(b, layout)?);
                atom(self, k, false, true)
            }
            Formula::And(..) | Formula::Or(..) => {
                let is_and = matches!(f, Formula::And(..));
                let mut parts = Vec::new();
                flatten(f, is_and, &mut parts);
                let mut ids = Vec::with_capacity(parts.len());
                for p in parts {
                    ids.push(self.node(p, layout)?);
                }
                let all = |pred: fn(&Node) -> bool, nodes: &[Node]| ids.iter().all(|&i| pred(&nodes[i]));
                let fo = all(|n| n.fo, &self.nodes);
                let dc = all(|n| n.dc, &self.nodes);
                let uc = all(|n| n.uc, &self.nodes);
                let qf = all(|n| n.qf, &self.nodes);
                if is_and {
                    // Cheap conjuncts first: literals, then downward closed parts.
                    let nodes = &self.nodes;
                    ids.sort_by_key(|&i| (!nodes[i].fo, !nodes[i].dc));
                }
                let kind = if is_and { Kind::And(ids) } else { Kind::Or(ids) };
                self.push(kind, width, fo, dc, uc, qf)
            }
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let col = match layout.iter().position(|w| w == v) {
                    Some(c) => c,
                    None => {
                        layout.push(v.clone());
                        width
                    }
                };
                let body = self.node(b, layout)?;
                layout.truncate(width);
                let bn = &self.nodes[body];
                let (fo, dc, uc) = (bn.fo, bn.dc, bn.uc);
                if matches!(f, Formula::Exists(..)) {
                    let id = self.push(Kind::Exists { col, body, block: None }, width, fo, dc, uc, false);
                    if !fo {
                        let block = self.block(id);
                        if let Kind::Exists { block: slot, .. } = &mut self.nodes[id].kind {
                            *slot = block;
                        }
                    }
                    id
                } else {
                    self.push(Kind::Forall { col, body }, width, fo, dc, uc, false)
                }
            }
        })
    }

    fn block(&self, id: usize) -> Option<Block> {
        let width = self.nodes[id].width;
        let mut cols = Vec::new();
        let mut cur = id;
        while let Kind::Exists { col, body, .. } = &self.nodes[cur].kind {
            if *col != self.nodes[cur].width {
                break;
            }
            cols.push(*col);
            cur = *body;
        }
        if cols.is_empty() {
            return None;
        }
        let body = cur;
        if !self.nodes[body].qf {
            return None;
        }
        let conjuncts: Vec<usize> = match &self.nodes[body].kind {
            Kind::And(cs) => cs.clone(),
            _ => alloc::vec![body],
        };
        let mut key: Option<Vec<CTerm>> = None;
        for &c in &cols {
            let found = conjuncts.iter().find_map(|&j| match &self.nodes[j].kind {
                Kind::Dep(ts) if ts.last() == Some(&CTerm::Col(c)) => {
                    let k = &ts[..ts.len() - 1];
                    (!k.iter().any(|t| t.mentions_any(&cols))).then(|| k.to_vec())
                }
                _ => None,
            })?;
            match &key {
                None => key = Some(found),
                Some(k) if *k == found => {}
                Some(_) => return None,
            }
        }
        let key = key?;
        let mut lits = Vec::new();
        let mut stack = alloc::vec![body];
        while let Some(j) = stack.pop() {
            match &self.nodes[j].kind {
                Kind::And(cs) | Kind::Or(cs) => stack.extend(cs.iter().copied()),
                Kind::Lit { atom, .. } => {
                    let mentions = match atom {
                        CAtom::Eq(a, b) => a.mentions_any(&cols) || b.mentions_any(&cols),
                        CAtom::Rel(_, args) => args.iter().any(|t| t.mentions_any(&cols)),
                    };
                    if mentions {
                        lits.push(j);
                    }
                }
                Kind::Dep(ts) => {
                    if ts.iter().any(|t| t.mentions_any(&cols)) {
                        let (last, k) = ts.split_last()?;
                        let ok = k == key.as_slice() && matches!(last, CTerm::Col(c) if cols.contains(c));
                        if !ok {
                            return None;
                        }
                    }
                }
                Kind::Indep(a, b, c) => {
                    if a.iter().chain(b).chain(c).any(|t| t.mentions_any(&cols)) {
                        return None;
                    }
                }
                Kind::Incl(a, b) | Kind::Excl(a, b) | Kind::Equi(a, b) => {
                    if a.iter().chain(b).any(|t| t.mentions_any(&cols)) {
                        return None;
                    }
                }
                Kind::Exists { .. } | Kind::Forall { .. } => return None,
            }
        }
        debug_assert!(cols.iter().enumerate().all(|(i, &c)| c == width + i));
        lits.sort_unstable();
        Some(Block { arity: cols.len(), key, body, lits })
    }
}

fn flatten<'f>(f: &'f Formula, is_and: bool, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(a, b) if is_and => {
            flatten(a, is_and, out);
            flatten(b, is_and, out);
        }
        Formula::Or(a, b) if !is_and => {
            flatten(a, is_and, out);
            flatten(b, is_and, out);
        }
        other => out.push(other),
    }
}
