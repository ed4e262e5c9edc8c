use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{AtomFamily, FoAtom, Formula, Literal, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Eq,
    Neq,
    And,
    Or,
    Tilde,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let next = bytes.get(i + 1).map(|&(_, c)| c);
        let (tok, len) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '.' => (Tok::Dot, 1),
            '=' => (Tok::Eq, 1),
            '~' => (Tok::Tilde, 1),
            '!' if next == Some('=') => (Tok::Neq, 2),
            '/' if next == Some('\\') => (Tok::And, 2),
            '\\' if next == Some('/') => (Tok::Or, 2),
            c if is_ident_char(c) => {
                let mut j = i;
                while j < bytes.len() && is_ident_char(bytes[j].1) {
                    j += 1;
                }
                let s: String = bytes[i..j].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Ident(s)));
                i = j;
                continue;
            }
            other => return Err(ParseError { pos, message: format!("unexpected character `{other}`") }),
        };
        out.push((pos, tok));
        i += len;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

const KEYWORDS: [&str; 7] = ["exists", "forall", "dep", "indep", "incl", "excl", "equi"];

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    sig: &'a Signature,
    lenient: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, message: String) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), message })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {}", t.describe())),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unit()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.unit()?);
        }
        Ok(f)
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                let pos = self.pos();
                self.bump();
                let inner = self.unit()?;
                inner.negate().map_err(|_| ParseError {
                    pos,
                    message: "negation of a dependency atom is not supported".into(),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                self.bump();
                let mut vs = Vec::new();
                while let Tok::Ident(v) = self.peek().clone() {
                    if KEYWORDS.contains(&v.as_str()) {
                        return self.err(format!("keyword `{v}` cannot be a variable"));
                    }
                    if self.sig.constants.contains(&v) {
                        return self.err(format!("`{v}` is a constant and cannot be bound"));
                    }
                    self.bump();
                    vs.push(v);
                }
                if vs.is_empty() {
                    return self.err(format!("expected a variable after `{kw}`"));
                }
                self.expect(Tok::Dot)?;
                let body = self.unit()?;
                Ok(if kw == "exists" { Formula::exists_all(&vs, body) } else { Formula::forall_all(&vs, body) })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos();
        if let (Tok::Ident(name), Tok::LParen) = (self.peek().clone(), self.peek_at(1).clone()) {
            if let Some(fam) = AtomFamily::from_keyword(&name) {
                self.bump();
                self.bump();
                return self.dependency_atom(fam, start);
            }
            let is_rel = self.sig.relations.contains_key(&name);
            let is_fun = self.sig.functions.contains_key(&name);
            if is_rel {
                return self.relation_atom(name, true);
            }
            if !is_fun {
                if !self.lenient {
                    return self.err(format!("undeclared symbol `{name}`"));
                }
                // Lenient mode: a relation unless an (in)equality follows.
                let save = self.i;
                self.bump();
                self.bump();
                let _ = self.term_list_until(&Tok::RParen)?;
                self.expect(Tok::RParen)?;
                let followed_by_eq = matches!(self.peek(), Tok::Eq | Tok::Neq);
                self.i = save;
                if !followed_by_eq {
                    return self.relation_atom(name, true);
                }
            }
        }
        let lhs = self.term()?;
        let positive = match self.bump() {
            Tok::Eq => true,
            Tok::Neq => false,
            t => {
                return Err(ParseError {
                    pos: start,
                    message: format!("expected an atom, found {} where `=` or `!=` should follow a term", t.describe()),
                })
            }
        };
        let rhs = self.term()?;
        Ok(Formula::Lit(Literal { positive, atom: FoAtom::Eq(lhs, rhs) }))
    }

    fn relation_atom(&mut self, name: String, positive: bool) -> Result<Formula, ParseError> {
        self.bump();
        self.bump();
        let args = self.term_list_until(&Tok::RParen)?;
        self.expect(Tok::RParen)?;
        if let Some(&arity) = self.sig.relations.get(&name) {
            if arity != args.len() {
                return self.err(format!("relation `{name}` has arity {arity}, got {} arguments", args.len()));
            }
        }
        Ok(Formula::Lit(Literal { positive, atom: FoAtom::Rel(name, args) }))
    }

    fn dependency_atom(&mut self, fam: AtomFamily, start: usize) -> Result<Formula, ParseError> {
        let mut slots = Vec::new();
        loop {
            slots.push(self.term_list_until(&Tok::Semi)?);
            match self.bump() {
                Tok::Semi => continue,
                Tok::RParen => break,
                t => return self.err(format!("expected `;` or `)`, found {}", t.describe())),
            }
        }
        let bad = |message: String| Err(ParseError { pos: start, message });
        let kw = fam.keyword();
        match fam {
            AtomFamily::Dep => {
                if slots.len() != 1 || slots[0].is_empty() {
                    return bad("dep takes a nonempty list of terms".into());
                }
                Ok(Formula::Dep(slots.pop().unwrap()))
            }
            AtomFamily::Indep => {
                if slots.len() != 3 {
                    return bad("indep takes three `;`-separated term lists".into());
                }
                if slots[1].is_empty() || slots[2].is_empty() {
                    return bad("the second and third indep slots must be nonempty".into());
                }
                let c = slots.pop().unwrap();
                let b = slots.pop().unwrap();
                let a = slots.pop().unwrap();
                Ok(Formula::Indep(a, b, c))
            }
            _ => {
                if slots.len() != 2 {
                    return bad(format!("{kw} takes two `;`-separated term lists"));
                }
                if slots[0].is_empty() || slots[0].len() != slots[1].len() {
                    return bad(format!("{kw} needs two nonempty term lists of equal length"));
                }
                let b = slots.pop().unwrap();
                let a = slots.pop().unwrap();
                Ok(match fam {
                    AtomFamily::Incl => Formula::Incl(a, b),
                    AtomFamily::Excl => Formula::Excl(a, b),
                    _ => Formula::Equi(a, b),
                })
            }
        }
    }

    /// Comma-separated terms, possibly empty, stopping before `stop` or `)`.
    fn term_list_until(&mut self, stop: &Tok) -> Result<Vec<Term>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == stop || *self.peek() == Tok::RParen {
            return Ok(out);
        }
        out.push(self.term()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.term()?);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return self.err(format!("keyword `{name}` cannot be used as a term"));
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let args = self.term_list_until(&Tok::RParen)?;
            self.expect(Tok::RParen)?;
            match self.sig.functions.get(&name) {
                Some(&arity) if arity != args.len() => {
                    return self.err(format!("function `{name}` has arity {arity}, got {} arguments", args.len()))
                }
                None if !self.lenient => return self.err(format!("undeclared function `{name}`")),
                _ => {}
            }
            if args.is_empty() {
                return self.err(format!("function `{name}` applied to no arguments"));
            }
            return Ok(Term::App(name, args));
        }
        Ok(if self.sig.constants.contains(&name) { Term::Const(name) } else { Term::Var(name) })
    }
}

fn run<T>(
    text: &str,
    sig: &Signature,
    lenient: bool,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser { toks: lex(text)?, i: 0, sig, lenient };
    let out = f(&mut p)?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {} after the end of the expression", p.peek().describe()));
    }
    Ok(out)
}

/// Parses a formula against a signature. Every relation and function
/// symbol must be declared; bare identifiers are constants when declared as
/// such and variables otherwise.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    run(text, sig, false, |p| p.formula())
}

/// Like [`parse_formula`] but infers undeclared symbols: `R(...)` is a
/// relation unless it is followed by `=` or `!=`, in which case it is a
/// function application.
pub fn parse_formula_lenient(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    run(text, sig, true, |p| p.formula())
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    run(text, sig, true, |p| p.term())
}

/// Comma-separated list of terms; the empty string gives the empty list.
pub fn parse_term_list(text: &str, sig: &Signature) -> Result<Vec<Term>, ParseError> {
    run(text, sig, true, |p| p.term_list_until(&Tok::End))
}

impl core::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse_formula_lenient(s, &Signature::default())
    }
}
