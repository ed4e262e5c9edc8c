//! Bounded semantic implication: search every small relation for one that
//! satisfies the premises but not the goal.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{check_dependency, DbError, DbRelation, Dependency};

pub const DEFAULT_RELATION_BUDGET: u64 = 10_000_000;

fn binomial_sum(n: u128, k: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 0..=k as u128 {
        if i > n {
            break;
        }
        total = total.saturating_add(c);
        c = c.saturating_mul(n - i) / (i + 1);
    }
    total
}

/// Attributes of the instance, in order of first occurrence.
fn instance_attributes(premises: &[Dependency], goal: &Dependency) -> Result<Vec<String>, DbError> {
    let mut attrs: Vec<String> = Vec::new();
    for d in premises.iter().chain(core::iter::once(goal)) {
        if matches!(d, Dependency::Tgd { .. } | Dependency::Egd { .. }) {
            return Err(DbError::Unsupported(format!("`{d}`: bounded implication covers incl, excl and fd")));
        }
        d.check_widths()?;
        for a in d.attributes() {
            if !attrs.contains(&a) {
                attrs.push(a);
            }
        }
    }
    Ok(attrs)
}

/// The first relation (by size, then lexicographically) over the values
/// `0..universe_size` with at most `max_tuples` tuples that satisfies every
/// premise and violates `goal`.
pub fn find_counterexample(
    premises: &[Dependency],
    goal: &Dependency,
    universe_size: usize,
    max_tuples: usize,
    budget: u64,
) -> Result<Option<DbRelation>, DbError> {
    if universe_size == 0 || max_tuples == 0 {
        return Err(DbError::Unsupported("bounds must be positive".into()));
    }
    let attrs = instance_attributes(premises, goal)?;
    let width = attrs.len() as u32;
    let rows: u128 = (universe_size as u128).checked_pow(width).unwrap_or(u128::MAX);
    let needed = binomial_sum(rows, max_tuples);
    if needed > budget as u128 || rows > usize::MAX as u128 {
        return Err(DbError::Budget { needed, budget });
    }
    let rows = rows as usize;
    let values: Vec<String> = (0..universe_size).map(|v| v.to_string()).collect();
    let row = |mut i: usize| -> Vec<String> {
        let mut t = alloc::vec![String::new(); attrs.len()];
        for slot in t.iter_mut().rev() {
            *slot = values[i % universe_size].clone();
            i /= universe_size;
        }
        t
    };
    for k in 0..=max_tuples.min(rows) {
        // Combinations of k row indices in lexicographic order.
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let r = DbRelation::new(attrs.iter().cloned(), idx.iter().map(|&i| row(i)))?;
            let mut premises_hold = true;
            for p in premises {
                if !check_dependency(&r, p)? {
                    premises_hold = false;
                    break;
                }
            }
            if premises_hold && !check_dependency(&r, goal)? {
                return Ok(Some(r));
            }
            // Advance to the next combination.
            let mut i = k;
            while i > 0 && idx[i - 1] == rows - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(None)
}

/// True when no relation within the bounds satisfies the premises and
/// violates the goal. This approximates implication from below: a `false`
/// is always a real counterexample, a `true` only covers small relations.
pub fn semantic_implies(
    premises: &[Dependency],
    goal: &Dependency,
    universe_size: usize,
    max_tuples: usize,
) -> Result<bool, DbError> {
    semantic_implies_with_budget(premises, goal, universe_size, max_tuples, DEFAULT_RELATION_BUDGET)
}

pub fn semantic_implies_with_budget(
    premises: &[Dependency],
    goal: &Dependency,
    universe_size: usize,
    max_tuples: usize,
    budget: u64,
) -> Result<bool, DbError> {
    Ok(find_counterexample(premises, goal, universe_size, max_tuples, budget)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn deps(ss: &[&str]) -> Vec<Dependency> {
        ss.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn transitivity_holds() {
        assert!(semantic_implies(&deps(&["incl(x ; y)", "incl(y ; z)"]), &"incl(x ; z)".parse().unwrap(), 3, 3).unwrap());
        assert!(semantic_implies(&[], &"incl(x ; x)".parse().unwrap(), 2, 4).unwrap());
    }

    #[test]
    fn converse_inclusion_fails_with_two_tuples() {
        let ps = deps(&["incl(x ; y)"]);
        let goal = "incl(y ; x)".parse().unwrap();
        let r = find_counterexample(&ps, &goal, 2, 2, 1000).unwrap().expect("refuted");
        assert_eq!(r.len(), 2);
        let rows: Vec<&Vec<String>> = r.tuples().collect();
        assert_eq!(rows, [&vec!["0".to_string(), "0".to_string()], &vec!["0".to_string(), "1".to_string()]]);
        // A single tuple never refutes it: x ⊆ y forces x = y there.
        assert_eq!(find_counterexample(&ps, &goal, 2, 1, 1000).unwrap(), None);
    }

    #[test]
    fn budget_and_bounds() {
        let goal: Dependency = "incl(a ; b)".parse().unwrap();
        assert!(matches!(find_counterexample(&[], &goal, 3, 3, 10), Err(DbError::Budget { .. })));
        assert!(find_counterexample(&[], &goal, 0, 3, 10).is_err());
        let tgd: Dependency = "tgd: A(x) -> A(x)".parse().unwrap();
        assert!(find_counterexample(&[tgd], &goal, 2, 2, 100).is_err());
        assert_eq!(binomial_sum(9, 3), 1 + 9 + 36 + 84);
    }
}
