//! Semantic games for inclusion/exclusion logic.
//!
//! A position pairs a subformula instance with an assignment. Player II
//! (the verifier) moves at disjunctions and existential quantifiers,
//! player I at conjunctions and universal quantifiers. Literal terminals
//! are won by II exactly when they are true; inclusion and exclusion
//! terminals are always won by II, but a strategy must be uniform on them:
//! every reached `t1 ⊆ t2` position needs a reached position of the same
//! instance whose `t2` value is its `t1` value, and no two reached positions
//! of an exclusion instance may share a `t1`/`t2` value.
//!
//! Nondeterministic strategies (nonempty sets of successors) correspond to
//! the lax reading, deterministic ones to the strict reading.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};

use crate::model::{Assignment, Elem, Model, ModelError, Team};
use crate::syntax::{Formula, Path, Term};
use crate::tarski;

pub const DEFAULT_ARENA_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("atom `{0}` has no game terminal; compile it to inclusion/exclusion atoms first")]
    Unsupported(String),
    #[error("free variable `{0}` is not in the team's domain")]
    FreeVariable(String),
    #[error("arena exceeds {0} positions")]
    ArenaTooLarge(usize),
    #[error("strategy has no choice at reachable position {0}")]
    IncompleteStrategy(String),
    #[error("strategy chooses a non-successor at position {0}")]
    IllegalMove(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    /// The falsifier; moves at conjunctions and universal quantifiers.
    I,
    /// The verifier; moves at disjunctions and existential quantifiers.
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Move(Player),
    /// A literal terminal, won by II iff the flag is set.
    Literal(bool),
    Inclusion,
    Exclusion,
}

#[derive(Debug, Clone)]
struct Instance {
    path: Path,
    layout: Vec<String>,
    formula: Formula,
    /// Child instance and the column it (re)binds, if any.
    children: Vec<(usize, Option<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub instance: usize,
    pub values: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct Arena {
    instances: Vec<Instance>,
    positions: Vec<Position>,
    turns: Vec<Turn>,
    succ: Vec<Vec<usize>>,
    initial: Vec<usize>,
    labels: Vec<String>,
}

impl Arena {
    pub fn build(m: &Model, team: &Team, f: &Formula) -> Result<Arena, GameError> {
        Arena::build_with_cap(m, team, f, DEFAULT_ARENA_CAP)
    }

    pub fn build_with_cap(m: &Model, team: &Team, f: &Formula, cap: usize) -> Result<Arena, GameError> {
        team.check_against(m)?;
        for v in f.free_vars() {
            if team.column(&v).is_none() {
                return Err(GameError::FreeVariable(v));
            }
        }
        let mut instances = Vec::new();
        collect(f, Path::default(), team.vars().to_vec(), &mut instances)?;
        let mut arena = Arena {
            instances,
            positions: Vec::new(),
            turns: Vec::new(),
            succ: Vec::new(),
            initial: Vec::new(),
            labels: m.labels().to_vec(),
        };
        let mut index: HashMap<Position, usize> = HashMap::new();
        let mut queue = Vec::new();
        for row in team.rows() {
            let p = Position { instance: 0, values: row.clone() };
            let id = arena.intern(p, &mut index, &mut queue, cap)?;
            arena.initial.push(id);
        }
        let n = m.size() as Elem;
        let mut qi = 0;
        while qi < queue.len() {
            let id = queue[qi];
            qi += 1;
            let pos = arena.positions[id].clone();
            let inst = &arena.instances[pos.instance];
            let (turn, moves): (Turn, Vec<Position>) = match &inst.formula {
                Formula::Lit(_) => {
                    let s: Assignment = inst.layout.iter().cloned().zip(pos.values.iter().copied()).collect();
                    let truth = tarski::holds(m, &inst.formula, &s).map_err(|e| match e {
                        tarski::TarskiError::Model(me) => GameError::Model(me),
                        other => GameError::Unsupported(format!("{other}")),
                    })?;
                    (Turn::Literal(truth), Vec::new())
                }
                Formula::Incl(..) => (Turn::Inclusion, Vec::new()),
                Formula::Excl(..) => (Turn::Exclusion, Vec::new()),
                Formula::And(..) | Formula::Or(..) => {
                    let player = if matches!(inst.formula, Formula::Or(..)) { Player::II } else { Player::I };
                    let moves = inst
                        .children
                        .iter()
                        .map(|&(c, _)| Position { instance: c, values: pos.values.clone() })
                        .collect();
                    (Turn::Move(player), moves)
                }
                Formula::Exists(..) | Formula::Forall(..) => {
                    let player = if matches!(inst.formula, Formula::Exists(..)) { Player::II } else { Player::I };
                    let (c, col) = inst.children[0];
                    let col = col.expect("quantifier binds a column");
                    let moves = (0..n)
                        .map(|e| {
                            let mut values = pos.values.clone();
                            if col == values.len() {
                                values.push(e);
                            } else {
                                values[col] = e;
                            }
                            Position { instance: c, values }
                        })
                        .collect();
                    (Turn::Move(player), moves)
                }
                other => return Err(GameError::Unsupported(format!("{other}"))),
            };
            let mut ids = Vec::with_capacity(moves.len());
            for p in moves {
                ids.push(arena.intern(p, &mut index, &mut queue, cap)?);
            }
            ids.sort_unstable();
            ids.dedup();
            arena.turns[id] = turn;
            arena.succ[id] = ids;
        }
        Ok(arena)
    }

    fn intern(
        &mut self,
        p: Position,
        index: &mut HashMap<Position, usize>,
        queue: &mut Vec<usize>,
        cap: usize,
    ) -> Result<usize, GameError> {
        if let Some(&id) = index.get(&p) {
            return Ok(id);
        }
        if self.positions.len() >= cap {
            return Err(GameError::ArenaTooLarge(cap));
        }
        let id = self.positions.len();
        index.insert(p.clone(), id);
        self.positions.push(p);
        self.turns.push(Turn::Literal(false));
        self.succ.push(Vec::new());
        queue.push(id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn position(&self, id: usize) -> &Position {
        &self.positions[id]
    }

    pub fn turn(&self, id: usize) -> Turn {
        self.turns[id]
    }

    pub fn successors(&self, id: usize) -> &[usize] {
        &self.succ[id]
    }

    pub fn is_terminal(&self, id: usize) -> bool {
        !matches!(self.turns[id], Turn::Move(_))
    }

    pub fn path(&self, id: usize) -> &Path {
        &self.instances[self.positions[id].instance].path
    }

    pub fn assignment(&self, id: usize) -> Assignment {
        let p = &self.positions[id];
        self.instances[p.instance].layout.iter().cloned().zip(p.values.iter().copied()).collect()
    }

    /// `path | x=a, y=b` with element labels; just the path for the empty
    /// assignment.
    pub fn describe(&self, id: usize) -> String {
        let p = &self.positions[id];
        let inst = &self.instances[p.instance];
        let binds: Vec<String> = inst
            .layout
            .iter()
            .zip(&p.values)
            .map(|(v, &e)| format!("{v}={}", self.labels[e as usize]))
            .collect();
        if binds.is_empty() {
            return format!("{}", inst.path);
        }
        format!("{} | {}", inst.path, binds.join(", "))
    }

    /// Atom term tuples of a terminal, evaluated at the position.
    fn atom_values(&self, id: usize, m: &Model) -> (Vec<Elem>, Vec<Elem>) {
        let p = &self.positions[id];
        let inst = &self.instances[p.instance];
        let s: Assignment = inst.layout.iter().cloned().zip(p.values.iter().copied()).collect();
        let (a, b): (&Vec<Term>, &Vec<Term>) = match &inst.formula {
            Formula::Incl(a, b) | Formula::Excl(a, b) => (a, b),
            _ => unreachable!("not an inclusion or exclusion terminal"),
        };
        (m.eval_terms(a, &s).expect("checked terms"), m.eval_terms(b, &s).expect("checked terms"))
    }
}

fn collect(f: &Formula, path: Path, layout: Vec<String>, out: &mut Vec<Instance>) -> Result<usize, GameError> {
    let id = out.len();
    out.push(Instance { path: path.clone(), layout: layout.clone(), formula: f.clone(), children: Vec::new() });
    let child_path = |step| {
        let mut p = path.clone();
        p.0.push(step);
        p
    };
    let children = match f {
        Formula::Lit(_) | Formula::Incl(..) | Formula::Excl(..) => Vec::new(),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let l = collect(a, child_path(crate::syntax::Step::Left), layout.clone(), out)?;
            let r = collect(b, child_path(crate::syntax::Step::Right), layout, out)?;
            vec![(l, None), (r, None)]
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let mut inner = layout.clone();
            let col = match inner.iter().position(|w| w == v) {
                Some(c) => c,
                None => {
                    inner.push(v.clone());
                    inner.len() - 1
                }
            };
            vec![(collect(b, child_path(crate::syntax::Step::Body), inner, out)?, Some(col))]
        }
        other => return Err(GameError::Unsupported(format!("{other}"))),
    };
    out[id].children = children;
    Ok(id)
}

/// Choices of player II: a nonempty set of successors per position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Strategy {
    pub choices: BTreeMap<usize, Vec<usize>>,
}

impl Strategy {
    pub fn is_deterministic(&self) -> bool {
        self.choices.values().all(|c| c.len() == 1)
    }

    /// One `position -> chosen successors` line per choice, sorted by path
    /// and assignment.
    pub fn lines(&self, arena: &Arena) -> Vec<String> {
        let mut entries: Vec<(&Path, &Position, String)> = self
            .choices
            .iter()
            .map(|(&p, cs)| {
                let succ: Vec<String> = cs.iter().map(|&c| arena.describe(c)).collect();
                (arena.path(p), arena.position(p), format!("{} -> {}", arena.describe(p), succ.join(" ; ")))
            })
            .collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        entries.into_iter().map(|(_, _, l)| l).collect()
    }
}

/// Positions reachable from the initial positions when I may play anything
/// and II plays by `tau`.
pub fn reachable(arena: &Arena, tau: &Strategy) -> Result<BTreeSet<usize>, GameError> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<usize> = arena.initial.clone();
    while let Some(p) = stack.pop() {
        if !seen.insert(p) {
            continue;
        }
        match arena.turns[p] {
            Turn::Move(Player::I) => stack.extend(arena.succ[p].iter().copied()),
            Turn::Move(Player::II) => {
                let cs = tau.choices.get(&p).ok_or_else(|| GameError::IncompleteStrategy(arena.describe(p)))?;
                if cs.is_empty() || cs.iter().any(|c| !arena.succ[p].contains(c)) {
                    return Err(GameError::IllegalMove(arena.describe(p)));
                }
                stack.extend(cs.iter().copied());
            }
            _ => {}
        }
    }
    Ok(seen)
}

/// Every play consistent with `tau`, as a list of positions from an initial
/// position to a terminal.
pub fn plays_following(arena: &Arena, tau: &Strategy) -> Result<Vec<Vec<usize>>, GameError> {
    reachable(arena, tau)?;
    let mut out = Vec::new();
    fn go(arena: &Arena, tau: &Strategy, p: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        path.push(p);
        let next: &[usize] = match arena.turns[p] {
            Turn::Move(Player::I) => &arena.succ[p],
            Turn::Move(Player::II) => &tau.choices[&p],
            _ => &[],
        };
        if next.is_empty() {
            out.push(path.clone());
        }
        for &q in next {
            go(arena, tau, q, path, out);
        }
        path.pop();
    }
    for &p in &arena.initial {
        go(arena, tau, p, &mut Vec::new(), &mut out);
    }
    Ok(out)
}

fn uniform_on(arena: &Arena, m: &Model, reached: &BTreeSet<usize>) -> bool {
    let mut incl_targets: HashMap<usize, HashSet<Vec<Elem>>> = HashMap::new();
    let mut excl_left: HashMap<usize, HashSet<Vec<Elem>>> = HashMap::new();
    let mut excl_right: HashMap<usize, HashSet<Vec<Elem>>> = HashMap::new();
    for &p in reached {
        let inst = arena.positions[p].instance;
        match arena.turns[p] {
            Turn::Inclusion => {
                let (_, b) = arena.atom_values(p, m);
                incl_targets.entry(inst).or_default().insert(b);
            }
            Turn::Exclusion => {
                let (a, b) = arena.atom_values(p, m);
                excl_left.entry(inst).or_default().insert(a);
                excl_right.entry(inst).or_default().insert(b);
            }
            _ => {}
        }
    }
    reached.iter().all(|&p| {
        let inst = arena.positions[p].instance;
        match arena.turns[p] {
            Turn::Inclusion => incl_targets[&inst].contains(&arena.atom_values(p, m).0),
            Turn::Exclusion => !excl_left[&inst].contains(&arena.atom_values(p, m).1),
            _ => true,
        }
    })
}

/// Uniformity of `tau` on the inclusion and exclusion terminals it reaches.
pub fn is_uniform(arena: &Arena, m: &Model, tau: &Strategy) -> Result<bool, GameError> {
    Ok(uniform_on(arena, m, &reachable(arena, tau)?))
}

/// Every play consistent with `tau` ends in a terminal won by II.
pub fn is_winning(arena: &Arena, tau: &Strategy) -> Result<bool, GameError> {
    Ok(reachable(arena, tau)?.iter().all(|&p| arena.turns[p] != Turn::Literal(false)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded;

/// Searches for a uniform winning strategy for II; deterministic strategies
/// only when `deterministic` is set.
pub fn find_uniform_winning(
    arena: &Arena,
    m: &Model,
    deterministic: bool,
    budget: u64,
) -> Result<Option<Strategy>, BudgetExceeded> {
    let good = match viable(arena, m) {
        Some(g) => g,
        None => return Ok(None),
    };
    let has_excl = arena.turns.contains(&Turn::Exclusion);
    if !deterministic && !has_excl {
        let mut tau = Strategy::default();
        for p in max_reach(arena, &good) {
            if arena.turns[p] == Turn::Move(Player::II) {
                tau.choices.insert(p, arena.succ[p].iter().copied().filter(|&q| good[q]).collect());
            }
        }
        return Ok(Some(tau));
    }
    let mut s = Search {
        arena,
        m,
        good: &good,
        deterministic,
        budget,
        used: 0,
        reached: vec![false; arena.len()],
        excl: HashMap::new(),
        tau: Strategy::default(),
    };
    let frontier: Vec<usize> = arena.initial.clone();
    for &p in &frontier {
        s.reached[p] = true;
    }
    if s.dfs(frontier)? {
        Ok(Some(s.tau))
    } else {
        Ok(None)
    }
}

/// Positions reachable when II keeps every successor in `good`.
fn max_reach(arena: &Arena, good: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; arena.len()];
    let mut stack: Vec<usize> = arena.initial.clone();
    let mut out = Vec::new();
    while let Some(p) = stack.pop() {
        if seen[p] || !good[p] {
            continue;
        }
        seen[p] = true;
        out.push(p);
        stack.extend(arena.succ[p].iter().copied());
    }
    out
}

/// Greatest set of positions from which II is not yet known to lose.
/// `None` when an initial position drops out.
fn viable(arena: &Arena, m: &Model) -> Option<Vec<bool>> {
    let mut good: Vec<bool> = arena.turns.iter().map(|t| *t != Turn::Literal(false)).collect();
    loop {
        let mut changed = false;
        for p in 0..arena.len() {
            if !good[p] {
                continue;
            }
            let drop = match arena.turns[p] {
                Turn::Move(Player::I) => arena.succ[p].iter().any(|&q| !good[q]),
                Turn::Move(Player::II) => !arena.succ[p].iter().any(|&q| good[q]),
                _ => false,
            };
            if drop {
                good[p] = false;
                changed = true;
            }
        }
        if arena.initial.iter().any(|&p| !good[p]) {
            return None;
        }
        if changed {
            continue;
        }
        // Inclusion terminals lacking a witness even in the largest reachable
        // set can never be reached by a uniform strategy.
        let reach = max_reach(arena, &good);
        let mut targets: HashMap<usize, HashSet<Vec<Elem>>> = HashMap::new();
        for &p in &reach {
            if arena.turns[p] == Turn::Inclusion {
                targets.entry(arena.positions[p].instance).or_default().insert(arena.atom_values(p, m).1);
            }
        }
        for &p in &reach {
            if arena.turns[p] == Turn::Inclusion
                && !targets[&arena.positions[p].instance].contains(&arena.atom_values(p, m).0)
            {
                good[p] = false;
                changed = true;
            }
        }
        if !changed {
            return Some(good);
        }
    }
}

/// Value tuples with multiplicities.
type Counts = BTreeMap<Vec<Elem>, usize>;

struct Search<'a> {
    arena: &'a Arena,
    m: &'a Model,
    good: &'a [bool],
    deterministic: bool,
    budget: u64,
    used: u64,
    reached: Vec<bool>,
    /// Exclusion instance -> (t1 values, t2 values) with multiplicities.
    excl: HashMap<usize, (Counts, Counts)>,
    tau: Strategy,
}

impl Search<'_> {
    fn reach_term(&mut self, p: usize) -> bool {
        if self.arena.turns[p] != Turn::Exclusion {
            return true;
        }
        let (a, b) = self.arena.atom_values(p, self.m);
        let entry = self.excl.entry(self.arena.positions[p].instance).or_default();
        if entry.1.contains_key(&a) || entry.0.contains_key(&b) || a == b {
            return false;
        }
        *entry.0.entry(a).or_default() += 1;
        *entry.1.entry(b).or_default() += 1;
        true
    }

    fn unreach_term(&mut self, p: usize) {
        if self.arena.turns[p] != Turn::Exclusion {
            return;
        }
        let (a, b) = self.arena.atom_values(p, self.m);
        let entry = self.excl.get_mut(&self.arena.positions[p].instance).expect("reached exclusion");
        for (map, key) in [(&mut entry.0, a), (&mut entry.1, b)] {
            let c = map.get_mut(&key).expect("counted");
            *c -= 1;
            if *c == 0 {
                map.remove(&key);
            }
        }
    }

    /// Expands the frontier until a choice of II is needed, then branches.
    /// Everything this call marks is undone when it fails.
    fn dfs(&mut self, mut frontier: Vec<usize>) -> Result<bool, BudgetExceeded> {
        self.used += 1;
        if self.used > self.budget {
            return Err(BudgetExceeded);
        }
        let mut added: Vec<usize> = Vec::new();
        let mut counted: Vec<usize> = Vec::new();
        let mut ok = true;
        let mut branch_at = None;
        while let Some(p) = frontier.pop() {
            match self.arena.turns[p] {
                Turn::Move(Player::I) => {
                    for &q in &self.arena.succ[p] {
                        if !self.reached[q] {
                            self.reached[q] = true;
                            added.push(q);
                            frontier.push(q);
                        }
                    }
                }
                Turn::Move(Player::II) => {
                    branch_at = Some(p);
                    break;
                }
                _ => {
                    if !self.reach_term(p) {
                        ok = false;
                        break;
                    }
                    counted.push(p);
                }
            }
        }
        let result = if !ok {
            false
        } else if let Some(p) = branch_at {
            self.branch(p, &frontier)?
        } else {
            let reached: BTreeSet<usize> = (0..self.arena.len()).filter(|&q| self.reached[q]).collect();
            uniform_on(self.arena, self.m, &reached)
        };
        if !result {
            for &q in &counted {
                self.unreach_term(q);
            }
            for &q in &added {
                self.reached[q] = false;
            }
        }
        Ok(result)
    }

    fn branch(&mut self, p: usize, frontier: &[usize]) -> Result<bool, BudgetExceeded> {
        let options: Vec<usize> = self.arena.succ[p].iter().copied().filter(|&q| self.good[q]).collect();
        let mut choices: Vec<Vec<usize>> = if self.deterministic {
            options.iter().map(|&q| vec![q]).collect()
        } else {
            (1u64..(1 << options.len()))
                .map(|mask| options.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &q)| q).collect())
                .collect()
        };
        choices.sort_by_key(|c: &Vec<usize>| core::cmp::Reverse(c.len()));
        for choice in choices {
            let mut next = frontier.to_vec();
            let mut fresh = Vec::new();
            for &q in &choice {
                if !self.reached[q] {
                    self.reached[q] = true;
                    fresh.push(q);
                    next.push(q);
                }
            }
            self.tau.choices.insert(p, choice);
            if self.dfs(next)? {
                return Ok(true);
            }
            self.tau.choices.remove(&p);
            for q in fresh {
                self.reached[q] = false;
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    fn team(vs: &[&str], rows: &[&[u32]]) -> Team {
        Team::new(vs.iter().copied(), rows.iter().map(|r| r.to_vec())).unwrap()
    }

    fn parse(s: &str, m: &Model) -> Formula {
        crate::syntax::parse_formula(s, &m.signature()).unwrap()
    }

    fn with_constant() -> Model {
        let mut m = Model::numeric(2);
        m.add_constant("c", 0).unwrap();
        m
    }

    #[test]
    fn single_literal_arena() {
        let m = Model::numeric(2);
        let a = Arena::build(&m, &team(&["x", "y"], &[&[0, 0]]), &parse("x = y", &m)).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a.is_terminal(0));
        assert_eq!(a.turn(0), Turn::Literal(true));
        let plays = plays_following(&a, &Strategy::default()).unwrap();
        assert_eq!(plays, vec![vec![0]]);
    }

    #[test]
    fn existential_arena_and_plays() {
        let m = with_constant();
        let f = parse("exists x . x = c", &m);
        let a = Arena::build(&m, &Team::unit(), &f).unwrap();
        assert_eq!(a.initial().len(), 1);
        let root = a.initial()[0];
        assert_eq!(a.turn(root), Turn::Move(Player::II));
        let succ = a.successors(root).to_vec();
        assert_eq!(succ.len(), 2);
        let wins = succ.iter().filter(|&&q| a.turn(q) == Turn::Literal(true)).count();
        assert_eq!(wins, 1);

        let both = Strategy { choices: BTreeMap::from([(root, succ.clone())]) };
        assert_eq!(plays_following(&a, &both).unwrap().len(), 2);
        assert!(!is_winning(&a, &both).unwrap());
        let one = Strategy { choices: BTreeMap::from([(root, vec![succ[0]])]) };
        assert_eq!(plays_following(&a, &one).unwrap().len(), 1);

        let tau = find_uniform_winning(&a, &m, true, 1000).unwrap().unwrap();
        assert!(tau.is_deterministic());
        let chosen = tau.choices[&root][0];
        assert_eq!(a.assignment(chosen).get("x"), Some(0));
        assert_eq!(tau.lines(&a), vec![String::from("root -> B | x=0")]);
    }

    #[test]
    fn partial_strategies_are_rejected() {
        let m = with_constant();
        let a = Arena::build(&m, &Team::unit(), &parse("exists x . x = c", &m)).unwrap();
        assert!(matches!(plays_following(&a, &Strategy::default()), Err(GameError::IncompleteStrategy(_))));
    }

    #[test]
    fn uniformity_of_single_atoms() {
        let m = Model::numeric(2);
        let incl = parse("incl(x ; y)", &m);
        let swap = Arena::build(&m, &team(&["x", "y"], &[&[0, 1], &[1, 0]]), &incl).unwrap();
        assert!(is_uniform(&swap, &m, &Strategy::default()).unwrap());
        let lone = Arena::build(&m, &team(&["x", "y"], &[&[0, 1]]), &incl).unwrap();
        assert!(!is_uniform(&lone, &m, &Strategy::default()).unwrap());
        assert_eq!(find_uniform_winning(&lone, &m, false, 1000), Ok(None));

        let excl = parse("excl(x ; y)", &m);
        let same = Arena::build(&m, &team(&["x", "y"], &[&[0, 0]]), &excl).unwrap();
        assert!(!is_uniform(&same, &m, &Strategy::default()).unwrap());
        assert_eq!(find_uniform_winning(&same, &m, false, 1000), Ok(None));
        assert_eq!(find_uniform_winning(&same, &m, true, 1000), Ok(None));
    }

    #[test]
    fn lax_and_strict_games_differ() {
        let m = Model::numeric(5);
        let t = team(&["x", "y", "z"], &[&[0, 1, 2], &[1, 0, 3], &[4, 3, 0]]);
        let a = Arena::build(&m, &t, &parse("incl(x ; y) \\/ incl(y ; z)", &m)).unwrap();
        assert_eq!(a.initial().len(), 3);
        assert_eq!((0..a.len()).filter(|&p| a.is_terminal(p)).count(), 6);
        let tau = find_uniform_winning(&a, &m, false, 10_000).unwrap().unwrap();
        assert!(is_uniform(&a, &m, &tau).unwrap());
        assert!(is_winning(&a, &tau).unwrap());
        assert_eq!(find_uniform_winning(&a, &m, true, 10_000), Ok(None));
    }

    #[test]
    fn unsupported_atoms_and_cap() {
        let m = Model::numeric(2);
        let t = team(&["x"], &[&[0]]);
        let f = crate::syntax::parse_formula("dep(x)", &Signature::default()).unwrap();
        assert!(matches!(Arena::build(&m, &t, &f), Err(GameError::Unsupported(_))));
        let g = parse("forall y . forall z . y = z", &m);
        assert_eq!(Arena::build_with_cap(&m, &t, &g, 3).unwrap_err(), GameError::ArenaTooLarge(3));
        let h = parse("x = y", &m);
        assert_eq!(Arena::build(&m, &t, &h).unwrap_err(), GameError::FreeVariable("y".into()));
    }

    #[test]
    fn budget_is_reported() {
        let m = Model::numeric(2);
        let t = team(&["x"], &[&[0], &[1]]);
        let f = parse("exists y . (excl(x ; y) \\/ x = y)", &m);
        let a = Arena::build(&m, &t, &f).unwrap();
        assert_eq!(find_uniform_winning(&a, &m, true, 1), Err(BudgetExceeded));
    }
}
