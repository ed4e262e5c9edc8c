mod common;

use common::naive;
use proptest::prelude::*;
use teamlogic_core::model::{all_tuples, Model};
use teamlogic_core::syntax::{Formula, Term};
use teamlogic_core::{satisfies, Mode, Team};

const VARS: [&str; 3] = ["x", "y", "z"];

fn atom() -> impl Strategy<Value = Formula> {
    let v = || prop::sample::select(&VARS[..]).prop_map(Term::var);
    prop_oneof![
        (v(), v(), any::<bool>()).prop_map(|(a, b, p)| if p { Formula::eq(a, b) } else { Formula::neq(a, b) }),
        (v(), v()).prop_map(|(a, b)| Formula::Incl(vec![a], vec![b])),
        (v(), v(), v(), v()).prop_map(|(a, b, c, d)| Formula::Incl(vec![a, b], vec![c, d])),
        (v(), v()).prop_map(|(a, b)| Formula::Excl(vec![a], vec![b])),
        v().prop_map(|a| Formula::Dep(vec![a])),
        (v(), v()).prop_map(|(a, b)| Formula::Dep(vec![a, b])),
        (v(), v(), v()).prop_map(|(a, b, c)| Formula::Indep(vec![a], vec![b], vec![c])),
        (v(), v()).prop_map(|(a, b)| Formula::Indep(vec![], vec![a], vec![b])),
        (v(), v()).prop_map(|(a, b)| Formula::Equi(vec![a], vec![b])),
    ]
}

fn formula_all(depth: u32) -> impl Strategy<Value = Formula> {
    atom().prop_recursive(depth, 16, 2, move |inner| {
        let q = prop::sample::select(&VARS[..]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (q.clone(), inner.clone()).prop_map(|(v, b)| Formula::exists(v, b)),
            (q, inner).prop_map(|(v, b)| Formula::forall(v, b)),
        ]
    })
}

fn team3(max_rows: usize) -> impl Strategy<Value = Team> {
    let all: Vec<Vec<u32>> = all_tuples(2, 3).collect();
    prop::sample::subsequence(all, 0..=max_rows).prop_map(|rows| Team::new(VARS, rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    // The naive clauses blow up on wide teams, so nesting depth and team
    // size trade off against each other.
    #[test]
    fn search_agrees_with_naive_clauses(f in formula_all(2), t in team3(3), strict in any::<bool>()) {
        check(&f, &t, strict)?;
    }

    #[test]
    fn deeper_formulas_on_tiny_teams(f in formula_all(3), t in team3(1), strict in any::<bool>()) {
        check(&f, &t, strict)?;
    }
}

fn check(f: &Formula, t: &Team, strict: bool) -> Result<(), TestCaseError> {
    let m = Model::numeric(2);
    let mode = if strict { Mode::Strict } else { Mode::Lax };
    let fast = satisfies(&m, t, f, mode).unwrap().as_bool().unwrap();
    let slow = naive::sat(&m, &naive::to_naive(t), f, mode);
    prop_assert_eq!(fast, slow, "{} on {:?} ({})", f, t.rows(), mode);
    Ok(())
}

/// Keyed existential blocks are searched by representatives; compare them
/// with the naive clauses on every small team. The dependence atoms force a
/// single witness per key, so the naive side may pick singletons for the
/// existentials in both readings, which keeps it tractable.
#[test]
fn keyed_blocks_agree_with_naive_clauses() {
    let m = Model::numeric(2);
    let fs = [
        "exists u v . (dep(x, u) /\\ dep(x, v) /\\ ((u = v /\\ x != y) \\/ (u != v /\\ x = y)))",
        "forall z . exists u v . (dep(z, u) /\\ dep(z, v) /\\ ((u = v /\\ z != x) \\/ (u != v /\\ z != y)))",
        "exists u . (dep(u) /\\ (u = x \\/ incl(x ; y)))",
        "exists u v . (dep(y, u) /\\ dep(y, v) /\\ ((u != v /\\ excl(x ; y)) \\/ (u = v /\\ incl(x ; y))))",
    ];
    for f in fs {
        let f: Formula = f.parse().unwrap();
        for t in teamlogic_core::model::enumerate_teams(&m, ["x", "y"], 3) {
            for mode in [Mode::Lax, Mode::Strict] {
                let fast = satisfies(&m, &t, &f, mode).unwrap().as_bool().unwrap();
                let slow = naive::sat_split(&m, &naive::to_naive(&t), &f, mode, Mode::Strict);
                assert_eq!(fast, slow, "{f} on {:?} ({mode})", t.rows());
            }
        }
    }
}
