//! Terms over the co-Heyting signature `{0, 1, ∨, ∧, −}` and the Heyting
//! signature `{0, 1, ∨, ∧, →}`, with parsing, printing, duality and
//! evaluation.
//!
//! Concrete syntax: `|` join, `&` meet, `\` difference (left associative),
//! `->` implication (right associative). `&` binds tighter than `|`, which
//! binds tighter than `\` and `->`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signature {
    CoHeyting,
    Heyting,
}

impl Signature {
    fn name(self) -> &'static str {
        match self {
            Signature::CoHeyting => "co-Heyting",
            Signature::Heyting => "Heyting",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    Var(Arc<str>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Diff(Box<Term>, Box<Term>),
    Impl(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn diff(a: Term, b: Term) -> Term {
        Term::Diff(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::Impl(Box::new(a), Box::new(b))
    }

    /// The signature the term commits to; `None` for lattice terms, which
    /// belong to both.
    pub fn signature(&self) -> Result<Option<Signature>> {
        fn merge(a: Option<Signature>, b: Option<Signature>) -> Result<Option<Signature>> {
            match (a, b) {
                (Some(x), Some(y)) if x != y => Err(Error::WrongSignature {
                    expected: x.name(),
                    found: y.name(),
                }),
                (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
                (None, None) => Ok(None),
            }
        }
        match self {
            Term::Zero | Term::One | Term::Var(_) => Ok(None),
            Term::Join(a, b) | Term::Meet(a, b) => merge(a.signature()?, b.signature()?),
            Term::Diff(a, b) => merge(
                Some(Signature::CoHeyting),
                merge(a.signature()?, b.signature()?)?,
            ),
            Term::Impl(a, b) => merge(
                Some(Signature::Heyting),
                merge(a.signature()?, b.signature()?)?,
            ),
        }
    }

    /// Fails unless the term is usable in `sig`.
    pub fn require(&self, sig: Signature) -> Result<()> {
        match self.signature()? {
            Some(s) if s != sig => Err(Error::WrongSignature {
                expected: sig.name(),
                found: s.name(),
            }),
            _ => Ok(()),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Arc<str>> {
        fn go(t: &Term, out: &mut Vec<Arc<str>>) {
            match t {
                Term::Zero | Term::One => {}
                Term::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Term::Join(a, b) | Term::Meet(a, b) | Term::Diff(a, b) | Term::Impl(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 1,
            Term::Join(a, b) | Term::Meet(a, b) | Term::Diff(a, b) | Term::Impl(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Term::Diff(..) | Term::Impl(..) => 0,
            Term::Join(..) => 1,
            Term::Meet(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, t: &Term, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        }
        let (op, a, b, pa, pb) = match self {
            Term::Zero => return f.write_str("0"),
            Term::One => return f.write_str("1"),
            Term::Var(v) => return f.write_str(v),
            Term::Diff(a, b) => ("\\", a, b, false, b.prec() == 0),
            Term::Impl(a, b) => ("->", a, b, a.prec() == 0, false),
            Term::Join(a, b) => ("|", a, b, a.prec() < 1, b.prec() <= 1),
            Term::Meet(a, b) => ("&", a, b, a.prec() < 2, b.prec() <= 2),
        };
        side(f, a, pa)?;
        write!(f, " {op} ")?;
        side(f, b, pb)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    LParen,
    RParen,
    Bar,
    Amp,
    Backslash,
    Arrow,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '|' => Tok::Bar,
            '&' => Tok::Amp,
            '\\' => Tok::Backslash,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                match &text[start..=i] {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    s if s.as_bytes()[0].is_ascii_digit() => {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: format!("only 0 and 1 are constants, found `{s}`"),
                        })
                    }
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!(
                        "unexpected character `{}`",
                        text[start..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let first = self.or_expr()?;
        match self.peek() {
            Some(Tok::Backslash) => {
                let mut t = first;
                while self.eat(&Tok::Backslash) {
                    t = Term::diff(t, self.or_expr()?);
                }
                if self.peek() == Some(&Tok::Arrow) {
                    return Err(Error::WrongSignature {
                        expected: Signature::CoHeyting.name(),
                        found: Signature::Heyting.name(),
                    });
                }
                Ok(t)
            }
            Some(Tok::Arrow) => {
                self.at += 1;
                let rest = self.expr()?;
                Ok(Term::implies(first, rest))
            }
            _ => Ok(first),
        }
    }

    fn or_expr(&mut self) -> Result<Term> {
        let mut t = self.and_expr()?;
        while self.eat(&Tok::Bar) {
            t = Term::join(t, self.and_expr()?);
        }
        Ok(t)
    }

    fn and_expr(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.eat(&Tok::Amp) {
            t = Term::meet(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        let pos = self.pos();
        let tok = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        match tok {
            Some(Tok::Zero) => Ok(Term::Zero),
            Some(Tok::One) => Ok(Term::One),
            Some(Tok::Ident(s)) => Ok(Term::var(&s)),
            Some(Tok::LParen) => {
                let t = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::Syntax {
                        pos: self.pos(),
                        msg: "expected `)`".into(),
                    });
                }
                Ok(t)
            }
            Some(other) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected {other:?}"),
            }),
            None => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses a term; with `Some(sig)` the term must fit that signature.
/// Mixing `\` and `->` is always rejected.
pub fn parse_term(text: &str, sig: Option<Signature>) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let t = p.expr()?;
    if p.at < p.toks.len() {
        return Err(Error::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    t.signature()?;
    if let Some(s) = sig {
        t.require(s)?;
    }
    Ok(t)
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// `t*`: swaps `0`/`1` and `∨`/`∧`, and sends `a − b` to `b* → a*` and
/// `a → b` to `b* − a*`. An involution between the two signatures.
pub fn dualize(t: &Term) -> Term {
    match t {
        Term::Zero => Term::One,
        Term::One => Term::Zero,
        Term::Var(v) => Term::Var(v.clone()),
        Term::Join(a, b) => Term::meet(dualize(a), dualize(b)),
        Term::Meet(a, b) => Term::join(dualize(a), dualize(b)),
        Term::Diff(a, b) => Term::implies(dualize(b), dualize(a)),
        Term::Impl(a, b) => Term::diff(dualize(b), dualize(a)),
    }
}

pub type Env = BTreeMap<String, Element>;

/// Evaluates a co-Heyting term in `alg`.
pub fn eval(t: &Term, alg: &Algebra, env: &Env) -> Result<Element> {
    eval_with(t, alg, &|v| env.get(v).cloned())
}

/// Evaluates with an arbitrary variable lookup.
pub fn eval_with(
    t: &Term,
    alg: &Algebra,
    lookup: &dyn Fn(&str) -> Option<Element>,
) -> Result<Element> {
    Ok(match t {
        Term::Zero => alg.bottom(),
        Term::One => alg.top(),
        Term::Var(v) => {
            let e = lookup(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            if !alg.owns(&e) {
                return Err(Error::OwnerMismatch);
            }
            e
        }
        Term::Join(a, b) => alg.join(&eval_with(a, alg, lookup)?, &eval_with(b, alg, lookup)?)?,
        Term::Meet(a, b) => alg.meet(&eval_with(a, alg, lookup)?, &eval_with(b, alg, lookup)?)?,
        Term::Diff(a, b) => alg.diff(&eval_with(a, alg, lookup)?, &eval_with(b, alg, lookup)?)?,
        Term::Impl(..) => {
            return Err(Error::WrongSignature {
                expected: Signature::CoHeyting.name(),
                found: Signature::Heyting.name(),
            })
        }
    })
}

/// `x1 .. xk`, the variable names used by [`slice_term`].
pub fn indexed_var(i: usize) -> String {
    format!("x{i}")
}

/// `P_0 = 1`, `P_{k+1} = (P_k − x_{k+1}) ∧ x_{k+1}`.
pub fn slice_term(k: usize) -> Term {
    (1..=k).fold(Term::One, |p, i| {
        let x = Term::var(&indexed_var(i));
        Term::meet(Term::diff(p, x.clone()), x)
    })
}

/// A random term of the given signature with at most `depth` levels of
/// binary operators.
pub fn random_term<R: Rng + ?Sized>(
    rng: &mut R,
    vars: &[String],
    depth: usize,
    sig: Signature,
) -> Term {
    if depth == 0 || rng.gen_ratio(1, 4) {
        let k = rng.gen_range(0..vars.len() + 2);
        return match k {
            0 => Term::Zero,
            1 => Term::One,
            _ => Term::var(&vars[k - 2]),
        };
    }
    let a = random_term(rng, vars, depth - 1, sig);
    let b = random_term(rng, vars, depth - 1, sig);
    match rng.gen_range(0..3) {
        0 => Term::join(a, b),
        1 => Term::meet(a, b),
        _ => match sig {
            Signature::CoHeyting => Term::diff(a, b),
            Signature::Heyting => Term::implies(a, b),
        },
    }
}

/// One conjunct of a [`Formula`]: `t = 0` or `t != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub term: Term,
    pub nonzero: bool,
}

/// A nonempty conjunction of atoms over co-Heyting terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub atoms: Vec<Atom>,
}

impl Formula {
    pub fn vars(&self) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> = Vec::new();
        for a in &self.atoms {
            for v in a.term.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            write!(f, "{} {} 0", a.term, if a.nonzero { "!=" } else { "=" })?;
        }
        Ok(())
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut atoms = Vec::new();
    let mut offset = 0;
    for part in text.split("&&") {
        let shift = |e: Error| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos: pos + offset,
                msg,
            },
            e => e,
        };
        let (lhs, rhs, nonzero) = if let Some((l, r)) = part.split_once("!=") {
            (l, r, true)
        } else if let Some((l, r)) = part.split_once('=') {
            (l, r, false)
        } else {
            return Err(Error::Syntax {
                pos: offset,
                msg: "expected `t = 0` or `t != 0`".into(),
            });
        };
        if rhs.trim() != "0" {
            return Err(Error::Syntax {
                pos: offset + lhs.len(),
                msg: "right-hand side must be 0".into(),
            });
        }
        let term = parse_term(lhs, Some(Signature::CoHeyting)).map_err(shift)?;
        atoms.push(Atom { term, nonzero });
        offset += part.len() + 2;
    }
    Ok(Formula { atoms })
}

pub fn eval_formula(theta: &Formula, alg: &Algebra, env: &Env) -> Result<bool> {
    for a in &theta.atoms {
        if eval(&a.term, alg, env)?.is_bottom() == a.nonzero {
            return Ok(false);
        }
    }
    Ok(true)
}
