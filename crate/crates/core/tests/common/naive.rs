//! Literal transcription of the team semantics clauses: every split and
//! every witness function is enumerated. Exponential, only for tiny inputs.

#![allow(dead_code)]

use std::collections::BTreeSet;

use teamlogic_core::model::{Assignment, Elem, Model};
use teamlogic_core::syntax::{FoAtom, Formula, Term};
use teamlogic_core::Mode;

pub type NTeam = BTreeSet<Assignment>;

fn vals(m: &Model, ts: &[Term], s: &Assignment) -> Vec<Elem> {
    m.eval_terms(ts, s).unwrap()
}

fn lit_holds(m: &Model, f: &Formula, s: &Assignment) -> bool {
    teamlogic_core::tarski::holds(m, f, s).unwrap()
}

fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0u32..(1 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x.clone()).collect())
        .collect()
}

pub fn sat(m: &Model, x: &NTeam, f: &Formula, mode: Mode) -> bool {
    sat_split(m, x, f, mode, mode)
}

/// Like [`sat`] but with separate readings for disjunction and for the
/// existential quantifier.
pub fn sat_split(m: &Model, x: &NTeam, f: &Formula, or_mode: Mode, ex_mode: Mode) -> bool {
    let rec = |y: &NTeam, g: &Formula| sat_split(m, y, g, or_mode, ex_mode);
    let rows: Vec<Assignment> = x.iter().cloned().collect();
    match f {
        Formula::Lit(_) => rows.iter().all(|s| lit_holds(m, f, s)),
        Formula::Dep(ts) => {
            let (last, key) = ts.split_last().unwrap();
            rows.iter().all(|s| {
                rows.iter().all(|t| {
                    vals(m, key, s) != vals(m, key, t)
                        || vals(m, std::slice::from_ref(last), s) == vals(m, std::slice::from_ref(last), t)
                })
            })
        }
        Formula::Indep(a, b, c) => rows.iter().all(|s| {
            rows.iter().all(|t| {
                vals(m, a, s) != vals(m, a, t)
                    || rows.iter().any(|u| {
                        vals(m, a, u) == vals(m, a, s) && vals(m, b, u) == vals(m, b, s) && vals(m, c, u) == vals(m, c, t)
                    })
            })
        }),
        Formula::Incl(a, b) => rows.iter().all(|s| rows.iter().any(|t| vals(m, a, s) == vals(m, b, t))),
        Formula::Excl(a, b) => rows.iter().all(|s| rows.iter().all(|t| vals(m, a, s) != vals(m, b, t))),
        Formula::Equi(a, b) => {
            rows.iter().all(|s| rows.iter().any(|t| vals(m, a, s) == vals(m, b, t)))
                && rows.iter().all(|s| rows.iter().any(|t| vals(m, b, s) == vals(m, a, t)))
        }
        Formula::And(a, b) => rec(x, a) && rec(x, b),
        Formula::Or(a, b) => {
            // Each row goes left, right or (lax only) both.
            let choices: u32 = if or_mode == Mode::Lax { 3 } else { 2 };
            let total = choices.pow(rows.len() as u32);
            (0..total).any(|mut code| {
                let mut y = NTeam::new();
                let mut z = NTeam::new();
                for s in &rows {
                    match code % choices {
                        0 => {
                            y.insert(s.clone());
                        }
                        1 => {
                            z.insert(s.clone());
                        }
                        _ => {
                            y.insert(s.clone());
                            z.insert(s.clone());
                        }
                    }
                    code /= choices;
                }
                rec(&y, a) && rec(&z, b)
            })
        }
        Formula::Forall(v, b) => {
            let ext: NTeam = rows.iter().flat_map(|s| m.elements().map(move |e| s.with(v, e))).collect();
            rec(&ext, b)
        }
        Formula::Exists(v, b) => {
            let elems: Vec<Elem> = m.elements().collect();
            let options: Vec<BTreeSet<Elem>> = match ex_mode {
                Mode::Strict => elems.iter().map(|&e| BTreeSet::from([e])).collect(),
                Mode::Lax => subsets(&elems).into_iter().filter(|s| !s.is_empty()).collect(),
            };
            let k = options.len();
            let total = k.pow(rows.len() as u32);
            (0..total).any(|mut code| {
                let mut ext = NTeam::new();
                for s in &rows {
                    for &e in &options[code % k] {
                        ext.insert(s.with(v, e));
                    }
                    code /= k;
                }
                rec(&ext, b)
            })
        }
    }
}

pub fn to_naive(t: &teamlogic_core::Team) -> NTeam {
    t.assignments().collect()
}

/// First-order equality literal, for building formulas in tests.
pub fn eq(a: &str, b: &str, positive: bool) -> Formula {
    let atom = FoAtom::Eq(Term::var(a), Term::var(b));
    Formula::Lit(teamlogic_core::syntax::Literal { positive, atom })
}
