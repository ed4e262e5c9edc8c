//! Classical satisfaction of first-order formulas by single assignments.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Assignment, Elem, Model, ModelError};
use crate::syntax::{FoAtom, Formula, Term};

/// Interpretation of the nonlogical symbols.
pub trait Structure {
    fn size(&self) -> usize;
    fn relation(&self, name: &str, args: &[Elem]) -> Result<bool, ModelError>;
    fn function(&self, name: &str, args: &[Elem]) -> Result<Elem, ModelError>;
    fn constant(&self, name: &str) -> Result<Elem, ModelError>;
}

impl Structure for Model {
    fn size(&self) -> usize {
        Model::size(self)
    }

    fn relation(&self, name: &str, args: &[Elem]) -> Result<bool, ModelError> {
        self.holds_relation(name, args)
    }

    fn function(&self, name: &str, args: &[Elem]) -> Result<Elem, ModelError> {
        let f = Model::function(self, name).ok_or_else(|| ModelError::UnknownSymbol(name.into()))?;
        if f.arity != args.len() {
            return Err(ModelError::Arity { name: name.into(), expected: f.arity, got: args.len() });
        }
        Ok(f.apply(self.size(), args))
    }

    fn constant(&self, name: &str) -> Result<Elem, ModelError> {
        Model::constant(self, name).ok_or_else(|| ModelError::UnknownSymbol(name.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TarskiError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("dependency atom `{0}` has no classical meaning")]
    NotFirstOrder(String),
}

/// Variable environment; later bindings shadow earlier ones.
pub type Env<'a> = Vec<(&'a str, Elem)>;

pub fn eval_term<S: Structure + ?Sized>(m: &S, t: &Term, env: &Env<'_>) -> Result<Elem, ModelError> {
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .ok_or_else(|| ModelError::UnboundVariable(v.clone())),
        Term::Const(c) => m.constant(c),
        Term::App(f, args) => {
            let vals = args.iter().map(|a| eval_term(m, a, env)).collect::<Result<Vec<_>, _>>()?;
            m.function(f, &vals)
        }
    }
}

pub fn holds_env<'a, S: Structure + ?Sized>(m: &S, f: &'a Formula, env: &mut Env<'a>) -> Result<bool, TarskiError> {
    Ok(match f {
        Formula::Lit(l) => {
            let v = match &l.atom {
                FoAtom::Eq(a, b) => eval_term(m, a, env)? == eval_term(m, b, env)?,
                FoAtom::Rel(r, args) => {
                    let vals = args.iter().map(|a| eval_term(m, a, env)).collect::<Result<Vec<_>, _>>()?;
                    m.relation(r, &vals)?
                }
            };
            v == l.positive
        }
        Formula::And(a, b) => holds_env(m, a, env)? && holds_env(m, b, env)?,
        Formula::Or(a, b) => holds_env(m, a, env)? || holds_env(m, b, env)?,
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let want = matches!(f, Formula::Exists(..));
            let mut result = !want;
            for e in 0..m.size() as Elem {
                env.push((v, e));
                let r = holds_env(m, b, env);
                env.pop();
                if r? == want {
                    result = want;
                    break;
                }
            }
            result
        }
        other => return Err(TarskiError::NotFirstOrder(format!("{other}"))),
    })
}

/// `M ⊨_s φ` for first-order `φ`.
pub fn holds<S: Structure + ?Sized>(m: &S, f: &Formula, s: &Assignment) -> Result<bool, TarskiError> {
    let mut env: Env<'_> = s.0.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    holds_env(m, f, &mut env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use alloc::vec;

    #[test]
    fn classical_truth() {
        let mut m = Model::numeric(3);
        m.add_relation("R", 2, [vec![0, 1], vec![1, 2]]).unwrap();
        let sig = m.signature();
        let f = parse_formula("forall x . (x = y \\/ exists z . (R(x, z) \\/ R(z, x)))", &sig).unwrap();
        assert!(holds(&m, &f, &[("y", 1)].into_iter().collect()).unwrap());
        let g = parse_formula("exists x . forall z . ~R(z, x)", &sig).unwrap();
        assert!(holds(&m, &g, &Assignment::empty()).unwrap());
        assert!(holds(&m, &parse_formula("x = x", &sig).unwrap(), &Assignment::empty()).is_err());
        assert!(holds(&m, &parse_formula("dep(x)", &sig).unwrap(), &[("x", 0)].into_iter().collect()).is_err());
    }
}
