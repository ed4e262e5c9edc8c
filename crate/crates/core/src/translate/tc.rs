//! Inclusion-logic sentence for the complement of a transitive closure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::TranslateError;
use crate::syntax::{Formula, FreshVars, Term};

/// `∃z (a ⊆ z ∧ z ≠ b ∧ ∀w (ψ'(z, w) ∨ w ⊆ z))` where `ψ'` is `¬ψ` in
/// negation normal form. It holds exactly when `b` is not reachable from
/// `a` by zero or more `ψ` steps.
pub fn tc_sentence(
    psi: &Formula,
    xs: &[String],
    ys: &[String],
    a: &[Term],
    b: &[Term],
) -> Result<Formula, TranslateError> {
    let k = xs.len();
    if ys.len() != k || a.len() != k || b.len() != k || k == 0 {
        return Err(TranslateError::Width(format!(
            "|x| = {k}, |y| = {}, |a| = {}, |b| = {}",
            ys.len(),
            a.len(),
            b.len()
        )));
    }
    let neg = psi.negate()?;
    let mut fresh = FreshVars::avoiding_terms(a.iter().chain(b));
    fresh.reserve(psi.all_vars());
    fresh.reserve(xs.iter().chain(ys).cloned());
    let z = fresh.take(k);
    let w = fresh.take(k);
    let map: BTreeMap<String, String> = xs.iter().cloned().zip(z.iter().cloned()).chain(ys.iter().cloned().zip(w.iter().cloned())).collect();
    let zt: Vec<Term> = z.iter().map(|v| Term::var(v)).collect();
    let wt: Vec<Term> = w.iter().map(|v| Term::var(v)).collect();
    let psi2 = neg.rename_free(&map);
    let body = Formula::and(
        Formula::and(Formula::Incl(a.to_vec(), zt.clone()), Formula::tuple_neq(&zt, b)),
        Formula::forall_all(&w, Formula::or(psi2, Formula::Incl(wt, zt))),
    );
    Ok(Formula::exists_all(&z, body))
}

/// The parity sentence over linear orders with successor `S`, first element
/// `0` and last element `e`:
/// `∃z (0 ⊆ z ∧ z ≠ e ∧ ∀w (w ≠ S(S(z)) ∨ w ⊆ z))`.
pub fn odd_cardinality_sentence() -> Formula {
    let x = Term::var("x");
    let ss = Term::App("S".into(), alloc::vec![Term::App("S".into(), alloc::vec![x])]);
    let psi = Formula::eq(Term::var("y"), ss);
    tc_sentence(&psi, &["x".into()], &["y".into()], &[Term::constant("0")], &[Term::constant("e")])
        .expect("first-order step formula")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parity_sentence_shape() {
        assert_eq!(
            odd_cardinality_sentence().to_string(),
            "exists _v0 . (incl(0 ; _v0) /\\ _v0 != e /\\ forall _v1 . (_v1 != S(S(_v0)) \\/ incl(_v1 ; _v0)))"
        );
    }

    #[test]
    fn rejects_bad_input() {
        let dep: Formula = "dep(x, y)".parse().unwrap();
        let c = [Term::constant("c")];
        assert!(matches!(
            tc_sentence(&dep, &["x".into()], &["y".into()], &c, &c),
            Err(TranslateError::NotFirstOrder(_))
        ));
        let e: Formula = "E(x, y)".parse().unwrap();
        assert!(matches!(tc_sentence(&e, &["x".into()], &[], &c, &c), Err(TranslateError::Width(_))));
    }
}
