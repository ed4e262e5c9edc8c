use core::fmt::{self, Display, Formatter, Write};

use super::{FoAtom, Formula, Literal, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                list(f, args)?;
                f.write_char(')')
            }
        }
    }
}

fn list(f: &mut Formatter<'_>, ts: &[Term]) -> fmt::Result {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

fn slots(f: &mut Formatter<'_>, name: &str, parts: &[&[Term]]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(" ; ")?;
        }
        list(f, p)?;
    }
    f.write_char(')')
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.atom {
            FoAtom::Eq(a, b) => write!(f, "{a} {} {b}", if self.positive { "=" } else { "!=" }),
            FoAtom::Rel(r, args) => {
                if !self.positive {
                    f.write_char('~')?;
                }
                write!(f, "{r}(")?;
                list(f, args)?;
                f.write_char(')')
            }
        }
    }
}

fn is_binary(g: &Formula) -> bool {
    matches!(g, Formula::And(..) | Formula::Or(..))
}

/// Operands are parenthesized whenever re-parsing could otherwise change
/// the tree: a left operand of a different connective and any binary right
/// operand or quantifier body.
fn operand(f: &mut Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::Dep(ts) => slots(f, "dep", &[ts]),
            Formula::Indep(a, b, c) => slots(f, "indep", &[a, b, c]),
            Formula::Incl(a, b) => slots(f, "incl", &[a, b]),
            Formula::Excl(a, b) => slots(f, "excl", &[a, b]),
            Formula::Equi(a, b) => slots(f, "equi", &[a, b]),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let same = |g: &Formula| {
                    matches!((self, g), (Formula::And(..), Formula::And(..)) | (Formula::Or(..), Formula::Or(..)))
                };
                operand(f, a, is_binary(a) && !same(a))?;
                f.write_str(if matches!(self, Formula::And(..)) { " /\\ " } else { " \\/ " })?;
                operand(f, b, is_binary(b))
            }
            Formula::Exists(_, _) | Formula::Forall(_, _) => {
                let exists = matches!(self, Formula::Exists(..));
                f.write_str(if exists { "exists" } else { "forall" })?;
                let mut cur = self;
                loop {
                    match cur {
                        Formula::Exists(v, body) if exists => {
                            write!(f, " {v}")?;
                            cur = body;
                        }
                        Formula::Forall(v, body) if !exists => {
                            write!(f, " {v}")?;
                            cur = body;
                        }
                        _ => break,
                    }
                }
                f.write_str(" . ")?;
                operand(f, cur, is_binary(cur))
            }
        }
    }
}
