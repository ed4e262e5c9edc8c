//! Skolem normal forms `∃f ∀x y ((A x ↔ f1(x) = f2(x)) ∧ ψ)` and their
//! inclusion/exclusion counterparts.
//!
//! Text format, one block per line:
//!
//! ```text
//! A/1 ; x: x ; y: ; f1: (x) ; f2: (x) ; psi: f1(x) = f2(x)
//! ```
//!
//! `A/k` gives the arity of the free relation, `x:` and `y:` list the
//! universally quantified variables, each `name: (w1, ...)` declares a
//! function together with its fixed argument tuple, and `psi:` takes the
//! rest of the line.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::eso::{EsoFormula, SoKind, SoSymbol, TEAM_RELATION};
use super::{dep_to_exc_with, TranslateError};
use crate::syntax::{parse_formula_lenient, FoAtom, Formula, FreshVars, Literal, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemNf {
    pub arity: usize,
    pub xs: Vec<String>,
    pub ys: Vec<String>,
    /// Function symbols with their argument tuples; the first two take `xs`.
    pub funcs: Vec<(String, Vec<String>)>,
    pub psi: Formula,
}

fn bad(msg: impl Into<String>) -> TranslateError {
    TranslateError::Unsupported(msg.into())
}

fn words(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()).map(String::from).collect()
}

impl SkolemNf {
    pub fn parse(text: &str) -> Result<SkolemNf, TranslateError> {
        let at = text.find("psi:").ok_or_else(|| bad("missing `psi:` field"))?;
        let (head, psi_text) = (&text[..at], &text[at + 4..]);
        let mut fields = head.split(';').map(str::trim).filter(|f| !f.is_empty());
        let first = fields.next().ok_or_else(|| bad("missing `A/k` header"))?;
        let arity = first
            .strip_prefix("A/")
            .and_then(|k| k.trim().parse::<usize>().ok())
            .ok_or_else(|| bad(format!("expected `A/k`, found `{first}`")))?;
        let (mut xs, mut ys, mut funcs) = (None, None, Vec::new());
        for field in fields {
            let (key, val) = field.split_once(':').ok_or_else(|| bad(format!("field `{field}` lacks `:`")))?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "x" => xs = Some(words(val)),
                "y" => ys = Some(words(val)),
                name => {
                    let inner = val
                        .strip_prefix('(')
                        .and_then(|v| v.strip_suffix(')'))
                        .ok_or_else(|| bad(format!("arguments of `{name}` must be parenthesized")))?;
                    funcs.push((String::from(name), words(inner)));
                }
            }
        }
        let mut sig = Signature::default();
        for (f, w) in &funcs {
            sig.functions.insert(f.clone(), w.len());
        }
        let psi = parse_formula_lenient(psi_text.trim(), &sig).map_err(|e| bad(format!("psi: {e}")))?;
        let nf = SkolemNf {
            arity,
            xs: xs.ok_or_else(|| bad("missing `x:` field"))?,
            ys: ys.unwrap_or_default(),
            funcs,
            psi,
        };
        nf.validate()?;
        Ok(nf)
    }

    pub fn validate(&self) -> Result<(), TranslateError> {
        if self.funcs.len() < 2 {
            return Err(bad("at least two functions are required"));
        }
        if self.xs.len() != self.arity || self.arity == 0 {
            return Err(bad(format!("|x| must equal the arity {} and be positive", self.arity)));
        }
        if self.funcs[0].1 != self.xs || self.funcs[1].1 != self.xs {
            return Err(bad("the first two functions must take exactly x"));
        }
        let scope: BTreeSet<&String> = self.xs.iter().chain(&self.ys).collect();
        if scope.len() != self.xs.len() + self.ys.len() {
            return Err(bad("x and y variables must be distinct"));
        }
        for (f, w) in &self.funcs {
            if let Some(v) = w.iter().find(|v| !scope.contains(v)) {
                return Err(bad(format!("argument `{v}` of `{f}` is not among x y")));
            }
        }
        if !self.psi.is_first_order() || !self.psi.is_quantifier_free() {
            return Err(bad("psi must be quantifier free and first order"));
        }
        if self.psi.signature().relations.contains_key(TEAM_RELATION) {
            return Err(bad(format!("psi must not mention `{TEAM_RELATION}`")));
        }
        if let Some(v) = self.psi.free_vars().into_iter().find(|v| !scope.contains(v)) {
            return Err(bad(format!("psi mentions `{v}` outside x y")));
        }
        let args: BTreeMap<&str, Vec<Term>> =
            self.funcs.iter().map(|(f, w)| (f.as_str(), w.iter().map(|v| Term::var(v)).collect())).collect();
        let mut misuse = None;
        self.psi.visit(&mut |g| {
            for t in g.atom_terms() {
                check_apps(t, &args, &mut misuse);
            }
        });
        match misuse {
            Some(t) => Err(bad(format!("`{t}` is not the declared application"))),
            None => Ok(()),
        }
    }

    fn psi_with(&self, z: &[String]) -> Formula {
        let map: BTreeMap<&str, &String> = self.funcs.iter().map(|(f, _)| f.as_str()).zip(z).collect();
        fn sub(t: &Term, map: &BTreeMap<&str, &String>) -> Term {
            match t {
                Term::App(f, _) if map.contains_key(f.as_str()) => Term::var(map[f.as_str()]),
                Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| sub(a, map)).collect()),
                other => other.clone(),
            }
        }
        self.psi.map_terms(&|t| sub(t, &map))
    }
}

fn check_apps(t: &Term, args: &BTreeMap<&str, Vec<Term>>, misuse: &mut Option<String>) {
    if let Term::App(f, a) = t {
        if let Some(w) = args.get(f.as_str()) {
            if a != w && misuse.is_none() {
                *misuse = Some(format!("{t}"));
            }
        }
        a.iter().for_each(|x| check_apps(x, args, misuse));
    }
}

impl fmt::Display for SkolemNf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A/{} ; x: {} ; y: {}", self.arity, self.xs.join(", "), self.ys.join(", "))?;
        for (name, w) in &self.funcs {
            write!(f, " ; {name}: ({})", w.join(", "))?;
        }
        write!(f, " ; psi: {}", self.psi)
    }
}

/// `Φ*(A) = ∃f ∀x y ((A x ↔ f1(x) = f2(x)) ∧ ψ)`.
pub fn skolemnf_to_eso(nf: &SkolemNf) -> Result<EsoFormula, TranslateError> {
    nf.validate()?;
    let xt: Vec<Term> = nf.xs.iter().map(|v| Term::var(v)).collect();
    let app = |i: usize| Term::App(nf.funcs[i].0.clone(), xt.clone());
    let a = |positive| Formula::Lit(Literal { positive, atom: FoAtom::Rel(TEAM_RELATION.into(), xt.clone()) });
    let iff = Formula::and(
        Formula::or(a(false), Formula::eq(app(0), app(1))),
        Formula::or(a(true), Formula::neq(app(0), app(1))),
    );
    let all: Vec<String> = nf.xs.iter().chain(&nf.ys).cloned().collect();
    Ok(EsoFormula {
        prefix: nf
            .funcs
            .iter()
            .map(|(f, w)| SoSymbol { name: f.clone(), arity: w.len(), kind: SoKind::Function })
            .collect(),
        free: TEAM_RELATION.into(),
        free_arity: nf.arity,
        matrix: Formula::forall_all(&all, Formula::and(iff, nf.psi.clone())),
    })
}

/// `∀x y ∃z (⋀ =(w_i, z_i) ∧ (((x ⊆ v ∧ z1 = z2) ∨ (v | x ∧ z1 ≠ z2)) ∧ ψ'))`
/// where `ψ'` replaces each `f_i(w_i)` by `z_i`. Equivalent to `Φ*` on
/// nonempty teams. The inclusion runs from `x` into `v`: the `z1 = z2` side
/// may only hold values of `x` that some row has in `v`. With `expand` the dependence atoms become exclusion
/// atoms.
pub fn skolemnf_to_ie(nf: &SkolemNf, vs: &[String], expand: bool) -> Result<Formula, TranslateError> {
    nf.validate()?;
    if vs.len() != nf.arity {
        return Err(TranslateError::Width(format!("|v| = {}, arity {}", vs.len(), nf.arity)));
    }
    let mut fresh = FreshVars::avoiding(&nf.psi);
    fresh.reserve(vs.iter().chain(&nf.xs).chain(&nf.ys).cloned());
    fresh.reserve(nf.funcs.iter().map(|(f, _)| f.clone()));
    let x2 = fresh.take(nf.xs.len());
    let y2 = fresh.take(nf.ys.len());
    let z = fresh.take(nf.funcs.len());
    let rename: BTreeMap<String, String> =
        nf.xs.iter().cloned().zip(x2.iter().cloned()).chain(nf.ys.iter().cloned().zip(y2.iter().cloned())).collect();
    let var = |v: &String| Term::var(v);
    let deps = Formula::conj(nf.funcs.iter().zip(&z).map(|((_, w), zi)| {
        let mut ts: Vec<Term> = w.iter().map(|v| var(&rename[v])).collect();
        ts.push(var(zi));
        if expand {
            dep_to_exc_with(&ts, &mut fresh)
        } else {
            Formula::Dep(ts)
        }
    }));
    let vt: Vec<Term> = vs.iter().map(var).collect();
    let xt: Vec<Term> = x2.iter().map(var).collect();
    let (z1, z2) = (var(&z[0]), var(&z[1]));
    let split = Formula::or(
        Formula::and(Formula::Incl(xt.clone(), vt.clone()), Formula::eq(z1.clone(), z2.clone())),
        Formula::and(Formula::Excl(vt, xt), Formula::neq(z1, z2)),
    );
    let psi2 = nf.psi_with(&z).rename_free(&rename);
    let all: Vec<String> = x2.iter().chain(&y2).cloned().collect();
    Ok(Formula::forall_all(&all, Formula::exists_all(&z, Formula::and(deps, Formula::and(split, psi2)))))
}
