//! Proptest generators for formulas and teams over a few variables.

#![allow(dead_code)]

use proptest::prelude::*;
use teamlogic_core::model::all_tuples;
use teamlogic_core::syntax::{Formula, Term};
use teamlogic_core::Team;

pub const VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fam {
    Fo,
    Dep,
    Incl,
    Excl,
    Equi,
    Indep,
}

fn var() -> impl Strategy<Value = Term> {
    prop::sample::select(&VARS[..]).prop_map(Term::var)
}

fn vars(n: usize) -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(var(), n)
}

pub fn atom_of(fam: Fam) -> BoxedStrategy<Formula> {
    match fam {
        Fam::Fo => (var(), var(), any::<bool>())
            .prop_map(|(a, b, p)| if p { Formula::eq(a, b) } else { Formula::neq(a, b) })
            .boxed(),
        Fam::Dep => (1..=3usize).prop_flat_map(vars).prop_map(Formula::Dep).boxed(),
        Fam::Incl => (1..=2usize).prop_flat_map(|n| (vars(n), vars(n))).prop_map(|(a, b)| Formula::Incl(a, b)).boxed(),
        Fam::Excl => (1..=2usize).prop_flat_map(|n| (vars(n), vars(n))).prop_map(|(a, b)| Formula::Excl(a, b)).boxed(),
        Fam::Equi => (1..=2usize).prop_flat_map(|n| (vars(n), vars(n))).prop_map(|(a, b)| Formula::Equi(a, b)).boxed(),
        Fam::Indep => (0..=1usize, 1..=2usize, 1..=2usize)
            .prop_flat_map(|(i, j, k)| (vars(i), vars(j), vars(k)))
            .prop_map(|(a, b, c)| Formula::Indep(a, b, c))
            .boxed(),
    }
}

pub fn atom(fams: &[Fam]) -> BoxedStrategy<Formula> {
    let options: Vec<BoxedStrategy<Formula>> = fams.iter().map(|&f| atom_of(f)).collect();
    proptest::strategy::Union::new(options).boxed()
}

pub fn formula(fams: &[Fam], depth: u32) -> BoxedStrategy<Formula> {
    atom(fams)
        .prop_recursive(depth, 16, 2, |inner| {
            let q = prop::sample::select(&VARS[..]);
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (q.clone(), inner.clone()).prop_map(|(v, b)| Formula::exists(v, b)),
                (q, inner).prop_map(|(v, b)| Formula::forall(v, b)),
            ]
        })
        .boxed()
}

/// Teams over `vars` on the domain `{0, 1}` with at most `max_rows` rows.
pub fn team_over(vars: &'static [&'static str], max_rows: usize) -> BoxedStrategy<Team> {
    let all: Vec<Vec<u32>> = all_tuples(2, vars.len()).collect();
    prop::sample::subsequence(all, 0..=max_rows).prop_map(move |rows| Team::new(vars.iter().copied(), rows).unwrap()).boxed()
}

pub fn team(max_rows: usize) -> BoxedStrategy<Team> {
    team_over(&VARS, max_rows)
}
