//! Derivations in the inclusion (I1-I3) and inclusion/exclusion
//! (I1-I3, E1-E3, IE1, IE2) calculi, plus an independent checker.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::{DbError, Dependency};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    IncOnly,
    IncExc,
}

impl core::str::FromStr for System {
    type Err = DbError;

    fn from_str(s: &str) -> Result<System, DbError> {
        match s {
            "inc" | "inc-only" => Ok(System::IncOnly),
            "inc-exc" => Ok(System::IncExc),
            other => Err(DbError::Unsupported(format!("unknown system `{other}` (use inc or inc-exc)"))),
        }
    }
}

/// The rule justifying a node. `I2` and `E2` carry the 1-based index map
/// `π: 1..m → 1..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    Premise,
    I1,
    I2(Vec<usize>),
    I3,
    E1,
    E2(Vec<usize>),
    E3,
    IE1,
    IE2,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = |p: &[usize]| p.iter().map(|i| format!("{i}")).collect::<Vec<_>>().join(" ");
        match self {
            Axiom::Premise => write!(f, "premise"),
            Axiom::I1 => write!(f, "I1"),
            Axiom::I2(p) => write!(f, "I2 pi=({})", pi(p)),
            Axiom::I3 => write!(f, "I3"),
            Axiom::E1 => write!(f, "E1"),
            Axiom::E2(p) => write!(f, "E2 pi=({})", pi(p)),
            Axiom::E3 => write!(f, "E3"),
            Axiom::IE1 => write!(f, "IE1"),
            Axiom::IE2 => write!(f, "IE2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Dependency,
    pub rule: Axiom,
    pub children: Vec<Derivation>,
}

impl Derivation {
    /// Longest chain of rule applications; premises count 0.
    pub fn height(&self) -> usize {
        match self.rule {
            Axiom::Premise => 0,
            _ => 1 + self.children.iter().map(Derivation::height).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    fn write_lines(&self, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:indent$}{}  [{}]", "", self.conclusion, self.rule)?;
        self.children.iter().try_for_each(|c| c.write_lines(indent + 2, f))
    }
}

/// One line per node, children indented under their conclusion.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_lines(0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Inc(Vec<usize>, Vec<usize>),
    Exc(Vec<usize>, Vec<usize>),
}

struct Search {
    attrs: Vec<String>,
    premises: Vec<Key>,
    system: System,
    max_width: usize,
    tuples: Vec<Vec<Vec<usize>>>,
    memo: HashMap<(Key, usize), Option<Derivation>>,
    empty: HashMap<usize, Option<Derivation>>,
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn pick(xs: &[usize], pi: &[usize]) -> Vec<usize> {
    pi.iter().map(|&i| xs[i]).collect()
}

impl Search {
    fn dep(&self, k: &Key) -> Dependency {
        let names = |xs: &[usize]| xs.iter().map(|&i| self.attrs[i].clone()).collect();
        match k {
            Key::Inc(a, b) => Dependency::Ind(names(a), names(b)),
            Key::Exc(a, b) => Dependency::Exd(names(a), names(b)),
        }
    }

    fn node(&self, k: &Key, rule: Axiom, children: Vec<Derivation>) -> Derivation {
        Derivation { conclusion: self.dep(k), rule, children }
    }

    fn prove(&mut self, goal: &Key, h: usize) -> Option<Derivation> {
        if self.premises.contains(goal) {
            return Some(self.node(goal, Axiom::Premise, Vec::new()));
        }
        if h == 0 {
            return None;
        }
        let mk = (goal.clone(), h);
        if let Some(r) = self.memo.get(&mk) {
            return r.clone();
        }
        let r = match goal {
            Key::Inc(x, y) => self.prove_inc(goal, x, y, h),
            Key::Exc(x, y) => self.prove_exc(goal, x, y, h),
        };
        self.memo.insert(mk, r.clone());
        r
    }

    fn prove_inc(&mut self, goal: &Key, x: &[usize], y: &[usize], h: usize) -> Option<Derivation> {
        if x == y {
            return Some(self.node(goal, Axiom::I1, Vec::new()));
        }
        // Projections and permutations are only needed on premises: every
        // implied inclusion is a chain of such steps.
        for p in self.premises.clone() {
            let Key::Inc(a, b) = &p else { continue };
            let pi: Option<Vec<usize>> = x
                .iter()
                .zip(y)
                .map(|(xi, yi)| (0..a.len()).find(|&j| a[j] == *xi && b[j] == *yi))
                .collect();
            if let Some(pi) = pi {
                let leaf = self.node(&p, Axiom::Premise, Vec::new());
                return Some(self.node(goal, Axiom::I2(pi.iter().map(|i| i + 1).collect()), vec![leaf]));
            }
        }
        if self.system == System::IncExc {
            if let Some(e) = self.empty(h - 1) {
                return Some(self.node(goal, Axiom::IE1, vec![e]));
            }
        }
        for m in self.tuples[x.len()].clone() {
            if m == x || m == y {
                continue;
            }
            let Some(l) = self.prove(&Key::Inc(x.to_vec(), m.clone()), h - 1) else { continue };
            if let Some(r) = self.prove(&Key::Inc(m, y.to_vec()), h - 1) {
                return Some(self.node(goal, Axiom::I3, vec![l, r]));
            }
        }
        None
    }

    fn prove_exc(&mut self, goal: &Key, x: &[usize], y: &[usize], h: usize) -> Option<Derivation> {
        if let Some(d) = self.prove(&Key::Exc(y.to_vec(), x.to_vec()), h - 1) {
            return Some(self.node(goal, Axiom::E1, vec![d]));
        }
        let n = x.len();
        for m in 1..=self.max_width {
            for pi in all_tuples(n, m) {
                if m == n && pi.iter().enumerate().all(|(i, &j)| i == j) {
                    continue;
                }
                if let Some(d) = self.prove(&Key::Exc(pick(x, &pi), pick(y, &pi)), h - 1) {
                    return Some(self.node(goal, Axiom::E2(pi.iter().map(|i| i + 1).collect()), vec![d]));
                }
            }
        }
        if let Some(e) = self.empty(h - 1) {
            return Some(self.node(goal, Axiom::E3, vec![e]));
        }
        let cands = self.tuples[n].clone();
        for a in &cands {
            let Some(za) = self.prove(&Key::Inc(x.to_vec(), a.clone()), h - 1) else { continue };
            for b in &cands {
                let Some(ab) = self.prove(&Key::Exc(a.clone(), b.clone()), h - 1) else { continue };
                if let Some(wb) = self.prove(&Key::Inc(y.to_vec(), b.clone()), h - 1) {
                    return Some(self.node(goal, Axiom::IE2, vec![ab, za.clone(), wb]));
                }
            }
        }
        None
    }

    /// A derivation of some `c | c` of height at most `h`.
    fn empty(&mut self, h: usize) -> Option<Derivation> {
        if let Some(r) = self.empty.get(&h) {
            return r.clone();
        }
        let mut found = None;
        'outer: for k in 1..=self.max_width {
            for c in self.tuples[k].clone() {
                if let Some(d) = self.prove(&Key::Exc(c.clone(), c), h) {
                    found = Some(d);
                    break 'outer;
                }
            }
        }
        self.empty.insert(h, found.clone());
        found
    }
}

fn key_of(attrs: &[String], d: &Dependency) -> Key {
    let idx = |xs: &[String]| xs.iter().map(|a| attrs.iter().position(|b| b == a).expect("collected")).collect();
    match d {
        Dependency::Ind(a, b) => Key::Inc(idx(a), idx(b)),
        Dependency::Exd(a, b) => Key::Exc(idx(a), idx(b)),
        _ => unreachable!("checked by the caller"),
    }
}

fn check_input(d: &Dependency, system: System) -> Result<(), DbError> {
    match d {
        Dependency::Ind(..) => d.check_widths(),
        Dependency::Exd(..) if system == System::IncExc => d.check_widths(),
        Dependency::Exd(..) => Err(DbError::Unsupported(format!("`{d}`: exclusion needs the inc-exc system"))),
        _ => Err(DbError::Unsupported(format!(
            "`{d}`: only inclusion and exclusion dependencies are derivable; \
             implication for functional plus inclusion dependencies is undecidable"
        ))),
    }
}

/// Searches for a derivation of `goal` from `premises` of height at most
/// `depth`, by iterative deepening, so the result has minimal height.
pub fn derive(
    premises: &[Dependency],
    goal: &Dependency,
    system: System,
    depth: usize,
) -> Result<Option<Derivation>, DbError> {
    for d in premises.iter().chain(core::iter::once(goal)) {
        check_input(d, system)?;
    }
    let mut attrs: Vec<String> = Vec::new();
    for a in premises.iter().chain(core::iter::once(goal)).flat_map(Dependency::attributes) {
        if !attrs.contains(&a) {
            attrs.push(a);
        }
    }
    let max_width = premises
        .iter()
        .chain(core::iter::once(goal))
        .map(|d| match d {
            Dependency::Ind(a, _) | Dependency::Exd(a, _) => a.len(),
            _ => 0,
        })
        .max()
        .unwrap_or(1);
    let tuples = (0..=max_width).map(|k| all_tuples(attrs.len(), k)).collect();
    let mut s = Search {
        premises: premises.iter().map(|p| key_of(&attrs, p)).collect(),
        attrs,
        system,
        max_width,
        tuples,
        memo: HashMap::new(),
        empty: HashMap::new(),
    };
    let goal = key_of(&s.attrs, goal);
    for h in 0..=depth {
        if let Some(d) = s.prove(&goal, h) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid step `{conclusion}` by {rule}: {reason}")]
pub struct VerifyError {
    pub conclusion: String,
    pub rule: String,
    pub reason: String,
}

fn sides(d: &Dependency) -> Option<(bool, &[String], &[String])> {
    match d {
        Dependency::Ind(a, b) => Some((true, a, b)),
        Dependency::Exd(a, b) => Some((false, a, b)),
        _ => None,
    }
}

fn apply_map(xs: &[String], pi: &[usize]) -> Option<Vec<String>> {
    pi.iter().map(|&i| i.checked_sub(1).and_then(|i| xs.get(i)).cloned()).collect()
}

/// Re-checks every node of `d` against the schema of its rule. Shares no
/// code with the search.
pub fn verify(d: &Derivation, premises: &[Dependency], system: System) -> Result<(), VerifyError> {
    let fail = |reason: &str| VerifyError {
        conclusion: format!("{}", d.conclusion),
        rule: format!("{}", d.rule),
        reason: reason.into(),
    };
    let (inc, x, y) = sides(&d.conclusion).ok_or_else(|| fail("not an inclusion or exclusion"))?;
    if x.len() != y.len() || x.is_empty() {
        return Err(fail("sides differ in length"));
    }
    let exc_rule = !matches!(d.rule, Axiom::Premise | Axiom::I1 | Axiom::I2(_) | Axiom::I3);
    if exc_rule && system == System::IncOnly {
        return Err(fail("rule not available in the inclusion system"));
    }
    let kids: Vec<(bool, &[String], &[String])> = d
        .children
        .iter()
        .map(|c| sides(&c.conclusion).ok_or_else(|| fail("premise is not an inclusion or exclusion")))
        .collect::<Result<_, _>>()?;
    let arity = |n: usize| if kids.len() == n { Ok(()) } else { Err(fail("wrong number of premises")) };
    match &d.rule {
        Axiom::Premise => {
            arity(0)?;
            if !premises.contains(&d.conclusion) {
                return Err(fail("not among the premises"));
            }
        }
        Axiom::I1 => {
            arity(0)?;
            if !(inc && x == y) {
                return Err(fail("expected x ⊆ x"));
            }
        }
        Axiom::I2(pi) => {
            arity(1)?;
            let (ci, a, b) = kids[0];
            let ok = inc && ci && apply_map(a, pi).as_deref() == Some(x) && apply_map(b, pi).as_deref() == Some(y);
            if !ok || pi.is_empty() {
                return Err(fail("conclusion is not the projection of the premise"));
            }
        }
        Axiom::I3 => {
            arity(2)?;
            let ((c1, a, b), (c2, b2, c)) = (kids[0], kids[1]);
            if !(inc && c1 && c2 && a == x && b == b2 && c == y) {
                return Err(fail("expected x ⊆ y, y ⊆ z ⊢ x ⊆ z"));
            }
        }
        Axiom::E1 => {
            arity(1)?;
            let (c, a, b) = kids[0];
            if !(!inc && !c && a == y && b == x) {
                return Err(fail("expected x | y ⊢ y | x"));
            }
        }
        Axiom::E2(pi) => {
            arity(1)?;
            let (c, a, b) = kids[0];
            let ok = !inc && !c && apply_map(x, pi).as_deref() == Some(a) && apply_map(y, pi).as_deref() == Some(b);
            if !ok || pi.is_empty() {
                return Err(fail("premise is not the projection of the conclusion"));
            }
        }
        Axiom::E3 | Axiom::IE1 => {
            arity(1)?;
            let (c, a, b) = kids[0];
            let right_kind = if d.rule == Axiom::E3 { !inc } else { inc };
            if !(right_kind && !c && a == b) {
                return Err(fail("premise must be x | x"));
            }
        }
        Axiom::IE2 => {
            arity(3)?;
            let ((c0, a, b), (c1, z, a2), (c2, w, b2)) = (kids[0], kids[1], kids[2]);
            if !(!inc && !c0 && c1 && c2 && z == x && w == y && a == a2 && b == b2) {
                return Err(fail("expected x | y, z ⊆ x, w ⊆ y ⊢ z | w"));
            }
        }
    }
    d.children.iter().try_for_each(|c| verify(c, premises, system))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn deps(ss: &[&str]) -> Vec<Dependency> {
        ss.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn found(ps: &[&str], goal: &str, system: System) -> Derivation {
        let ps = deps(ps);
        let d = derive(&ps, &goal.parse().unwrap(), system, 6).unwrap().expect("derivable");
        verify(&d, &ps, system).unwrap();
        d
    }

    #[test]
    fn reflexivity() {
        let d = found(&[], "incl(x ; x)", System::IncOnly);
        assert_eq!(d.rule, Axiom::I1);
        assert_eq!(d.size(), 1);
    }

    #[test]
    fn projection_records_the_map() {
        let d = found(&["incl(x, y ; u, v)"], "incl(y ; v)", System::IncOnly);
        assert_eq!(d.rule, Axiom::I2(vec![2]));
        assert_eq!(d.to_string(), "incl(y ; v)  [I2 pi=(2)]\n  incl(x, y ; u, v)  [premise]\n");
        let swap = found(&["incl(x, y ; u, v)"], "incl(y, x, y ; v, u, v)", System::IncOnly);
        assert_eq!(swap.rule, Axiom::I2(vec![2, 1, 2]));
    }

    #[test]
    fn transitivity() {
        let d = found(&["incl(x ; y)", "incl(y ; z)"], "incl(x ; z)", System::IncOnly);
        assert_eq!(d.rule, Axiom::I3);
        assert!(d.children.iter().all(|c| c.rule == Axiom::Premise));
        let long = found(&["incl(a ; b)", "incl(b ; c)", "incl(c ; d)", "incl(d ; e)"], "incl(a ; e)", System::IncOnly);
        assert_eq!(long.height(), 2);
    }

    #[test]
    fn exclusion_rules() {
        let d = found(&["excl(x ; y)", "incl(z ; x)", "incl(w ; y)"], "excl(z ; w)", System::IncExc);
        assert_eq!(d.rule, Axiom::IE2);
        assert_eq!(found(&["excl(x ; y)"], "excl(y ; x)", System::IncExc).rule, Axiom::E1);
        assert_eq!(found(&["excl(x ; y)"], "excl(x, z ; y, w)", System::IncExc).rule, Axiom::E2(vec![1]));
        // x | x empties the relation, so anything follows.
        assert_eq!(found(&["excl(x ; x)"], "incl(y ; z)", System::IncExc).rule, Axiom::IE1);
        assert_eq!(found(&["excl(x ; x)"], "excl(y ; z)", System::IncExc).rule, Axiom::E3);
        // x | y with y ⊆ x forces y | y.
        let e = found(&["excl(x ; y)", "incl(y ; x)"], "incl(z ; w)", System::IncExc);
        assert_eq!(e.rule, Axiom::IE1);
    }

    #[test]
    fn non_implications_and_rejections() {
        let ps = deps(&["incl(x ; y)"]);
        assert_eq!(derive(&ps, &"incl(y ; x)".parse().unwrap(), System::IncOnly, 6).unwrap(), None);
        let fd = deps(&["fd(x -> y)"]);
        assert!(matches!(
            derive(&fd, &"incl(x ; x)".parse().unwrap(), System::IncOnly, 3),
            Err(DbError::Unsupported(_))
        ));
        assert!(derive(&[], &"excl(x ; y)".parse().unwrap(), System::IncOnly, 3).is_err());
    }

    #[test]
    fn verifier_rejects_forged_steps() {
        let ps = deps(&["incl(x ; y)"]);
        let bogus = Derivation {
            conclusion: "incl(y ; x)".parse().unwrap(),
            rule: Axiom::I2(vec![1]),
            children: vec![Derivation { conclusion: ps[0].clone(), rule: Axiom::Premise, children: vec![] }],
        };
        assert!(verify(&bogus, &ps, System::IncOnly).is_err());
        let unlisted = Derivation { conclusion: "incl(y ; x)".parse().unwrap(), rule: Axiom::Premise, children: vec![] };
        assert!(verify(&unlisted, &ps, System::IncOnly).is_err());
        let exc = Derivation {
            conclusion: "excl(y ; x)".parse().unwrap(),
            rule: Axiom::E1,
            children: vec![Derivation { conclusion: "excl(x ; y)".parse().unwrap(), rule: Axiom::Premise, children: vec![] }],
        };
        assert!(verify(&exc, &deps(&["excl(x ; y)"]), System::IncOnly).is_err());
        assert!(verify(&exc, &deps(&["excl(x ; y)"]), System::IncExc).is_ok());
        assert_eq!(Axiom::I2(vec![2, 1]).to_string(), "I2 pi=(2 1)");
    }
}
