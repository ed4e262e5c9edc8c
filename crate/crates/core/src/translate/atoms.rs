//! Single-atom translations. The `_with` variants draw fresh variables from
//! a shared generator; the plain ones avoid the atom's own variables.

use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{Formula, FreshVars, Term};

fn terms(names: &[alloc::string::String]) -> Vec<Term> {
    names.iter().map(|n| Term::var(n)).collect()
}

fn cat(parts: &[&[Term]]) -> Vec<Term> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// `=(t1 ... tn)` as `tn ⊥_{t1 ... tn-1} tn`.
pub fn dep_to_indep(ts: &[Term]) -> Formula {
    let (last, key) = ts.split_last().expect("dependence atom has a term");
    Formula::Indep(key.to_vec(), vec![last.clone()], vec![last.clone()])
}

/// `=(t1 ... tn)` as `∀z (z = tn ∨ t1 ... tn-1 z | t1 ... tn)`.
pub fn dep_to_exc(ts: &[Term]) -> Formula {
    dep_to_exc_with(ts, &mut FreshVars::avoiding_terms(ts))
}

pub fn dep_to_exc_with(ts: &[Term], fresh: &mut FreshVars) -> Formula {
    let (last, key) = ts.split_last().expect("dependence atom has a term");
    let z = fresh.next_name();
    let zt = Term::var(&z);
    Formula::forall(
        &z,
        Formula::or(Formula::eq(zt.clone(), last.clone()), Formula::Excl(cat(&[key, &[zt]]), ts.to_vec())),
    )
}

/// `t1 | t2` as
/// `∀z ∃u1 u2 (=(z, u1) ∧ =(z, u2) ∧ ((u1 = u2 ∧ z ≠ t1) ∨ (u1 ≠ u2 ∧ z ≠ t2)))`.
pub fn exc_to_dep(a: &[Term], b: &[Term]) -> Formula {
    exc_to_dep_with(a, b, &mut FreshVars::avoiding_terms(a.iter().chain(b)))
}

pub fn exc_to_dep_with(a: &[Term], b: &[Term], fresh: &mut FreshVars) -> Formula {
    let z = fresh.take(a.len());
    let u = fresh.take(2);
    let zt = terms(&z);
    let (u1, u2) = (Term::var(&u[0]), Term::var(&u[1]));
    let deps = Formula::and(
        Formula::Dep(cat(&[&zt, core::slice::from_ref(&u1)])),
        Formula::Dep(cat(&[&zt, core::slice::from_ref(&u2)])),
    );
    let split = Formula::or(
        Formula::and(Formula::eq(u1.clone(), u2.clone()), Formula::tuple_neq(&zt, a)),
        Formula::and(Formula::neq(u1, u2), Formula::tuple_neq(&zt, b)),
    );
    Formula::forall_all(&z, Formula::exists_all(&u, Formula::and(deps, split)))
}

/// `t1 ⋈ t2` as `t1 ⊆ t2 ∧ t2 ⊆ t1`.
pub fn equi_to_inc(a: &[Term], b: &[Term]) -> Formula {
    Formula::and(Formula::Incl(a.to_vec(), b.to_vec()), Formula::Incl(b.to_vec(), a.to_vec()))
}

/// `t1 ⊆ t2` as `∀u1 u2 ∃z (t2 ⋈ z ∧ (u1 ≠ u2 ∨ z = t1))`.
pub fn inc_to_equi(a: &[Term], b: &[Term]) -> Formula {
    inc_to_equi_with(a, b, &mut FreshVars::avoiding_terms(a.iter().chain(b)))
}

pub fn inc_to_equi_with(a: &[Term], b: &[Term], fresh: &mut FreshVars) -> Formula {
    let u = fresh.take(2);
    let z = fresh.take(a.len());
    let zt = terms(&z);
    let body = Formula::and(
        Formula::Equi(b.to_vec(), zt.clone()),
        Formula::or(Formula::neq(Term::var(&u[0]), Term::var(&u[1])), Formula::tuple_eq(&zt, a)),
    );
    Formula::forall_all(&u, Formula::exists_all(&z, body))
}

/// `t1 ⊆ t2` as
/// `∀v1 v2 z ((z ≠ t1 ∧ z ≠ t2) ∨ (v1 ≠ v2 ∧ z ≠ t2) ∨ ((v1 = v2 ∨ z = t2) ∧ z ⊥ v1 v2))`.
pub fn inc_to_indep(a: &[Term], b: &[Term]) -> Formula {
    inc_to_indep_with(a, b, &mut FreshVars::avoiding_terms(a.iter().chain(b)))
}

pub fn inc_to_indep_with(a: &[Term], b: &[Term], fresh: &mut FreshVars) -> Formula {
    let v = fresh.take(2);
    let z = fresh.take(a.len());
    let zt = terms(&z);
    let (v1, v2) = (Term::var(&v[0]), Term::var(&v[1]));
    let body = Formula::disj([
        Formula::and(Formula::tuple_neq(&zt, a), Formula::tuple_neq(&zt, b)),
        Formula::and(Formula::neq(v1.clone(), v2.clone()), Formula::tuple_neq(&zt, b)),
        Formula::and(
            Formula::or(Formula::eq(v1.clone(), v2.clone()), Formula::tuple_eq(&zt, b)),
            Formula::Indep(Vec::new(), zt.clone(), vec![v1, v2]),
        ),
    ]);
    let all: Vec<_> = v.iter().chain(&z).cloned().collect();
    Formula::forall_all(&all, body)
}

/// `t2 ⊥_{t1} t3` in inclusion/exclusion logic:
///
/// `∀p q r ∃u1 u2 u3 u4 (⋀ =(p q r, ui) ∧ ((u1 ≠ u2 ∧ p q | t1 t2)
///  ∨ (u1 = u2 ∧ u3 ≠ u4 ∧ p r | t1 t3) ∨ (u1 = u2 ∧ u3 = u4 ∧ p q r ⊆ t1 t2 t3)))`
///
/// With `expand` the dependence atoms are rewritten into exclusion atoms.
pub fn indep_to_ie(a: &[Term], b: &[Term], c: &[Term], expand: bool) -> Formula {
    indep_to_ie_with(a, b, c, expand, &mut FreshVars::avoiding_terms(a.iter().chain(b).chain(c)))
}

pub fn indep_to_ie_with(a: &[Term], b: &[Term], c: &[Term], expand: bool, fresh: &mut FreshVars) -> Formula {
    let p = terms(&fresh.take(a.len()));
    let q = terms(&fresh.take(b.len()));
    let r = terms(&fresh.take(c.len()));
    let u = fresh.take(4);
    let ut = terms(&u);
    let pqr = cat(&[&p, &q, &r]);
    let deps = Formula::conj(ut.iter().map(|ui| {
        let ts = cat(&[&pqr, core::slice::from_ref(ui)]);
        if expand {
            dep_to_exc_with(&ts, fresh)
        } else {
            Formula::Dep(ts)
        }
    }));
    let eq = |i: usize, j: usize| Formula::eq(ut[i].clone(), ut[j].clone());
    let neq = |i: usize, j: usize| Formula::neq(ut[i].clone(), ut[j].clone());
    let cases = Formula::disj([
        Formula::and(neq(0, 1), Formula::Excl(cat(&[&p, &q]), cat(&[a, b]))),
        Formula::and(Formula::and(eq(0, 1), neq(2, 3)), Formula::Excl(cat(&[&p, &r]), cat(&[a, c]))),
        Formula::and(Formula::and(eq(0, 1), eq(2, 3)), Formula::Incl(pqr.clone(), cat(&[a, b, c]))),
    ]);
    let bound: Vec<_> = pqr
        .iter()
        .map(|t| match t {
            Term::Var(v) => v.clone(),
            _ => unreachable!("fresh variables"),
        })
        .collect();
    Formula::forall_all(&bound, Formula::exists_all(&u, Formula::and(deps, cases)))
}
