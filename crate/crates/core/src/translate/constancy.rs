//! Moving constancy atoms to the front of a formula and dropping them from
//! sentences.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::TranslateError;
use crate::syntax::{AtomFamily, Formula, FreshVars, Path, Step, Term};

/// Path of the shallowest, then leftmost, constancy atom.
fn first_constancy(f: &Formula) -> Option<(Path, Term)> {
    f.subformula_instances()
        .into_iter()
        .filter_map(|(p, g)| match g {
            Formula::Dep(ts) if ts.len() == 1 => Some((p, ts[0].clone())),
            _ => None,
        })
        .min_by(|a, b| (a.0 .0.len(), &a.0).cmp(&(b.0 .0.len(), &b.0)))
}

fn replace_at(f: &Formula, path: &[Step], with: &Formula) -> Formula {
    let Some((step, rest)) = path.split_first() else {
        return with.clone();
    };
    match (f, step) {
        (Formula::And(a, b), Step::Left) => Formula::and(replace_at(a, rest, with), (**b).clone()),
        (Formula::And(a, b), Step::Right) => Formula::and((**a).clone(), replace_at(b, rest, with)),
        (Formula::Or(a, b), Step::Left) => Formula::or(replace_at(a, rest, with), (**b).clone()),
        (Formula::Or(a, b), Step::Right) => Formula::or((**a).clone(), replace_at(b, rest, with)),
        (Formula::Exists(v, b), Step::Body) => Formula::exists(v, replace_at(b, rest, with)),
        (Formula::Forall(v, b), Step::Body) => Formula::forall(v, replace_at(b, rest, with)),
        _ => unreachable!("path taken from the formula itself"),
    }
}

/// Replaces the outermost constancy atom `=(t)` by `z = t` and returns the
/// remainder together with `z`.
fn lift_one(f: &Formula, fresh: &mut FreshVars) -> Option<(Formula, String)> {
    let (path, t) = first_constancy(f)?;
    let z = fresh.next_name();
    Some((replace_at(f, &path.0, &Formula::eq(Term::var(&z), t)), z))
}

/// `φ` with one constancy atom `=(t)` lifted: `∃z (=(z) ∧ φ[z = t])`.
pub fn const_pushout(f: &Formula) -> Result<Formula, TranslateError> {
    let mut fresh = FreshVars::avoiding(f);
    let (rest, z) = lift_one(f, &mut fresh).ok_or(TranslateError::NoConstancyAtom)?;
    Ok(Formula::exists(&z, Formula::and(Formula::Dep(alloc::vec![Term::var(&z)]), rest)))
}

fn check_constancy_logic(f: &Formula) -> Result<(), TranslateError> {
    let mut bad = None;
    f.visit(&mut |g| {
        let ok = match g.family() {
            None => true,
            Some(AtomFamily::Dep) => matches!(g, Formula::Dep(ts) if ts.len() == 1),
            Some(_) => false,
        };
        if !ok && bad.is_none() {
            bad = Some(format!("{g}"));
        }
    });
    match bad {
        Some(atom) => Err(TranslateError::NotConstancyLogic(atom)),
        None => Ok(()),
    }
}

/// `∃z1 ... zn (=(z1) ∧ ... ∧ =(zn) ∧ ψ)` with `ψ` first order. First-order
/// input comes back unchanged.
pub fn const_normal_form(f: &Formula) -> Result<Formula, TranslateError> {
    check_constancy_logic(f)?;
    let mut fresh = FreshVars::avoiding(f);
    let mut psi = f.clone();
    let mut zs = Vec::new();
    while let Some((rest, z)) = lift_one(&psi, &mut fresh) {
        psi = rest;
        zs.push(z);
    }
    if zs.is_empty() {
        return Ok(psi);
    }
    let deps = Formula::conj(zs.iter().map(|z| Formula::Dep(alloc::vec![Term::var(z)])));
    Ok(Formula::exists_all(&zs, Formula::and(deps, psi)))
}

fn flatten_and(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        other => out.push(other.clone()),
    }
}

fn all_constancy_on(f: &Formula, prefix: &[String]) -> bool {
    match f {
        Formula::And(a, b) => all_constancy_on(a, prefix) && all_constancy_on(b, prefix),
        Formula::Dep(ts) => matches!(ts.as_slice(), [Term::Var(z)] if prefix.contains(z)),
        _ => false,
    }
}

/// Drops the constancy conjuncts of a normal-form sentence, leaving the
/// first-order sentence `∃z ψ(z)`.
pub fn const_sentence_collapse(f: &Formula) -> Result<Formula, TranslateError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(TranslateError::NotNormalForm(format!("free variable `{v}`")));
    }
    let mut prefix = Vec::new();
    let mut body = f;
    while let Formula::Exists(v, b) = body {
        prefix.push(v.clone());
        body = b;
    }
    if f.is_first_order() {
        return Ok(f.clone());
    }
    let rest = match body {
        Formula::And(l, r) if all_constancy_on(l, &prefix) => (**r).clone(),
        _ => {
            let mut parts = Vec::new();
            flatten_and(body, &mut parts);
            let keep = parts.iter().position(|g| !all_constancy_on(g, &prefix)).unwrap_or(parts.len());
            let tail: Vec<Formula> = parts.split_off(keep);
            match tail.is_empty() {
                // Nothing but constancy atoms: the matrix is trivially true.
                true => {
                    let z = Term::var(&prefix[0]);
                    Formula::eq(z.clone(), z)
                }
                false => Formula::conj(tail),
            }
        }
    };
    if !rest.is_first_order() {
        return Err(TranslateError::NotNormalForm(format!("`{rest}` is not first order")));
    }
    Ok(Formula::exists_all(&prefix, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn pushout_shapes() {
        assert_eq!(const_pushout(&p("dep(x) /\\ R(x)")).unwrap().to_string(), "exists _v0 . (dep(_v0) /\\ (_v0 = x /\\ R(x)))");
        assert_eq!(const_pushout(&p("dep(x)")).unwrap().to_string(), "exists _v0 . (dep(_v0) /\\ _v0 = x)");
        assert_eq!(const_pushout(&p("x = y")), Err(TranslateError::NoConstancyAtom));
        // The shallowest atom goes first even when a deeper one is further left.
        let g = const_pushout(&p("(dep(x) /\\ x = y) \\/ dep(y)")).unwrap();
        assert_eq!(g.to_string(), "exists _v0 . (dep(_v0) /\\ ((dep(x) /\\ x = y) \\/ _v0 = y))");
    }

    #[test]
    fn normal_form_shapes() {
        assert_eq!(
            const_normal_form(&p("dep(x) /\\ dep(y)")).unwrap().to_string(),
            "exists _v0 _v1 . (dep(_v0) /\\ dep(_v1) /\\ (_v0 = x /\\ _v1 = y))"
        );
        let fo = p("forall x . x = y");
        assert_eq!(const_normal_form(&fo).unwrap(), fo);
        assert!(matches!(const_normal_form(&p("dep(x, y)")), Err(TranslateError::NotConstancyLogic(_))));
    }

    #[test]
    fn collapse_shapes() {
        assert_eq!(const_sentence_collapse(&p("exists z . (dep(z) /\\ R(z))")).unwrap().to_string(), "exists z . R(z)");
        let fo = p("exists z . R(z)");
        assert_eq!(const_sentence_collapse(&fo).unwrap(), fo);
        let nf = const_normal_form(&p("exists x . (dep(x) /\\ R(x))")).unwrap();
        assert_eq!(const_sentence_collapse(&nf).unwrap().to_string(), "exists _v0 x . (_v0 = x /\\ R(x))");
        assert!(const_sentence_collapse(&p("dep(x)")).is_err());
        assert!(const_sentence_collapse(&p("exists z . (R(z) /\\ dep(z))")).is_err());
    }
}
