//! Combinator expressions, their λ-translations, bracket abstraction and the
//! extensionality axiom tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{self, Discipline, LTerm, LambdaError};
use crate::normalizer::{lam_equal, normalize, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prim {
    B,
    C,
    CPlus,
    CMinus,
    I,
    W,
    K,
    Tr,
}

impl Prim {
    pub const ALL: [Prim; 8] = [Prim::B, Prim::C, Prim::CPlus, Prim::CMinus, Prim::I, Prim::W, Prim::K, Prim::Tr];

    pub fn symbol(self) -> &'static str {
        match self {
            Prim::B => "B",
            Prim::C => "C",
            Prim::CPlus => "C+",
            Prim::CMinus => "C-",
            Prim::I => "I",
            Prim::W => "W",
            Prim::K => "K",
            Prim::Tr => "Tr",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CTerm {
    Prim(Prim),
    App(Box<CTerm>, Box<CTerm>),
    Bullet(Box<CTerm>),
    /// `a o b`, kept apart from `B a b` only so that expressions print as written.
    Compose(Box<CTerm>, Box<CTerm>),
    ConstRef(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombError {
    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("{prim} is not in the signature {signature}")]
    NotInSignature { prim: &'static str, signature: String },
    #[error("{prim} has no λ-image in the {discipline} calculus")]
    NoImage { prim: &'static str, discipline: Discipline },
    #[error("Tr is syntax only; equality involving it is not decided")]
    TraceEquality,
    #[error("trace extension is only available for BCI and BC±I")]
    TraceNotAllowed,
    #[error("cannot abstract: {0}")]
    Abstraction(String),
    #[error("bullet argument must be an element, found variables in `{0}`")]
    OpenBullet(String),
    #[error("unknown signature `{0}`")]
    UnknownSignature(String),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

impl CTerm {
    pub fn prim(p: Prim) -> CTerm {
        CTerm::Prim(p)
    }

    pub fn app(f: CTerm, a: CTerm) -> CTerm {
        CTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: CTerm, args: impl IntoIterator<Item = CTerm>) -> CTerm {
        args.into_iter().fold(f, CTerm::app)
    }

    pub fn bullet(a: CTerm) -> CTerm {
        CTerm::Bullet(Box::new(a))
    }

    pub fn compose(a: CTerm, b: CTerm) -> CTerm {
        CTerm::Compose(Box::new(a), Box::new(b))
    }

    /// Right-nested composition `t1 o (t2 o (... o tn))`; `I` when empty.
    pub fn compose_all(items: impl IntoIterator<Item = CTerm>) -> CTerm {
        let mut items: Vec<CTerm> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return CTerm::Prim(Prim::I) };
        while let Some(t) = items.pop() {
            acc = CTerm::compose(t, acc);
        }
        acc
    }

    pub fn constant(name: impl Into<String>) -> CTerm {
        CTerm::ConstRef(name.into())
    }

    pub fn prims(&self) -> Vec<Prim> {
        fn go(t: &CTerm, out: &mut Vec<Prim>) {
            match t {
                CTerm::Prim(p) => {
                    if !out.contains(p) {
                        out.push(*p)
                    }
                }
                CTerm::App(a, b) | CTerm::Compose(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                CTerm::Bullet(a) => go(a, out),
                CTerm::ConstRef(_) => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn const_names(&self) -> Vec<String> {
        fn go(t: &CTerm, out: &mut Vec<String>) {
            match t {
                CTerm::ConstRef(c) => {
                    if !out.contains(c) {
                        out.push(c.clone())
                    }
                }
                CTerm::App(a, b) | CTerm::Compose(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                CTerm::Bullet(a) => go(a, out),
                CTerm::Prim(_) => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, CTerm>) -> CTerm {
        match self {
            CTerm::ConstRef(c) => bindings.get(c).cloned().unwrap_or_else(|| self.clone()),
            CTerm::Prim(_) => self.clone(),
            CTerm::App(a, b) => CTerm::app(a.substitute(bindings), b.substitute(bindings)),
            CTerm::Compose(a, b) => CTerm::compose(a.substitute(bindings), b.substitute(bindings)),
            CTerm::Bullet(a) => CTerm::bullet(a.substitute(bindings)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            CTerm::Prim(_) | CTerm::ConstRef(_) => 1,
            CTerm::App(a, b) | CTerm::Compose(a, b) => 1 + a.size() + b.size(),
            CTerm::Bullet(a) => 1 + a.size(),
        }
    }
}

// ---------------------------------------------------------------------------
// concrete syntax

impl FromStr for CTerm {
    type Err = CombError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_comb(s)
    }
}

pub fn parse_comb(text: &str) -> Result<CTerm, CombError> {
    let mut p = CParser { src: text, pos: 0 };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct CParser<'a> {
    src: &'a str,
    pos: usize,
}

enum Tok {
    Ident(String),
    Compose,
    Open,
    Close,
    Star,
}

impl CParser<'_> {
    fn error(&self, message: &str) -> CombError {
        CombError::Parse { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    /// Next token and the position after it, without consuming.
    fn peek(&mut self) -> Option<(Tok, usize)> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let c = rest.chars().next()?;
        let one = self.pos + c.len_utf8();
        match c {
            '(' => Some((Tok::Open, one)),
            ')' => Some((Tok::Close, one)),
            '*' | '•' => Some((Tok::Star, one)),
            '∘' => Some((Tok::Compose, one)),
            c if c.is_alphanumeric() || c == '_' => {
                let len =
                    rest.find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == '\'')).unwrap_or(rest.len());
                let word = &rest[..len];
                let mut end = self.pos + len;
                if word == "o" {
                    return Some((Tok::Compose, end));
                }
                let mut name = word.to_string();
                if word == "C" {
                    if let Some(sign @ ('+' | '-')) = rest[len..].chars().next() {
                        name.push(sign);
                        end += 1;
                    }
                }
                Some((Tok::Ident(name), end))
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<CTerm, CombError> {
        let head = self.app()?;
        if let Some((Tok::Compose, end)) = self.peek() {
            self.pos = end;
            let rest = self.expr()?;
            return Ok(CTerm::compose(head, rest));
        }
        Ok(head)
    }

    fn app(&mut self) -> Result<CTerm, CombError> {
        let mut t = self.postfix()?.ok_or_else(|| self.error("expected a term"))?;
        while let Some(a) = self.postfix()? {
            t = CTerm::app(t, a);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Option<CTerm>, CombError> {
        let Some(mut t) = self.atom()? else { return Ok(None) };
        while let Some((Tok::Star, end)) = self.peek() {
            self.pos = end;
            t = CTerm::bullet(t);
        }
        Ok(Some(t))
    }

    fn atom(&mut self) -> Result<Option<CTerm>, CombError> {
        match self.peek() {
            Some((Tok::Open, end)) => {
                self.pos = end;
                let t = self.expr()?;
                match self.peek() {
                    Some((Tok::Close, end)) => self.pos = end,
                    _ => return Err(self.error("expected `)`")),
                }
                Ok(Some(t))
            }
            Some((Tok::Ident(name), end)) => {
                self.pos = end;
                let prim = Prim::ALL.into_iter().find(|p| p.symbol() == name);
                Ok(Some(match prim {
                    Some(p) => CTerm::Prim(p),
                    None => CTerm::ConstRef(name),
                }))
            }
            Some((Tok::Star, _)) => Err(self.error("`*` must follow a term")),
            Some((Tok::Compose, _)) | Some((Tok::Close, _)) | None => {
                self.skip_ws();
                match self.src[self.pos..].chars().next() {
                    Some(c) if !matches!(c, ')' | 'o' | '∘') => {
                        Err(self.error(&format!("unexpected character `{c}`")))
                    }
                    _ => Ok(None),
                }
            }
        }
    }
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comp(self, f)
    }
}

fn write_comp(t: &CTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        CTerm::Compose(a, b) => {
            match **a {
                CTerm::Compose(..) | CTerm::App(..) => {
                    f.write_str("(")?;
                    write_comp(a, f)?;
                    f.write_str(")")?;
                }
                _ => write_atom(a, f)?,
            }
            f.write_str(" o ")?;
            match **b {
                CTerm::App(..) => {
                    f.write_str("(")?;
                    write_comp(b, f)?;
                    f.write_str(")")
                }
                _ => write_comp(b, f),
            }
        }
        _ => write_app(t, f),
    }
}

fn write_app(t: &CTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        CTerm::App(a, b) => {
            write_app(a, f)?;
            f.write_str(" ")?;
            write_atom(b, f)
        }
        _ => write_atom(t, f),
    }
}

fn write_atom(t: &CTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        CTerm::Prim(p) => f.write_str(p.symbol()),
        CTerm::ConstRef(c) => f.write_str(c),
        CTerm::Bullet(a) => {
            write_atom(a, f)?;
            f.write_str("*")
        }
        _ => {
            f.write_str("(")?;
            write_comp(t, f)?;
            f.write_str(")")
        }
    }
}

// ---------------------------------------------------------------------------
// signatures

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignatureTag {
    BIbullet,
    BCI,
    BCpmI,
    BCIWK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub tag: SignatureTag,
    pub trace_extension: bool,
}

impl Signature {
    pub const PLANAR: Signature = Signature { tag: SignatureTag::BIbullet, trace_extension: false };
    pub const LINEAR: Signature = Signature { tag: SignatureTag::BCI, trace_extension: false };
    pub const BRAIDED: Signature = Signature { tag: SignatureTag::BCpmI, trace_extension: false };
    pub const CARTESIAN: Signature = Signature { tag: SignatureTag::BCIWK, trace_extension: false };

    pub fn new(tag: SignatureTag, trace_extension: bool) -> Result<Self, CombError> {
        if trace_extension && !matches!(tag, SignatureTag::BCI | SignatureTag::BCpmI) {
            return Err(CombError::TraceNotAllowed);
        }
        Ok(Signature { tag, trace_extension })
    }

    pub fn with_trace(self) -> Result<Self, CombError> {
        Signature::new(self.tag, true)
    }

    pub fn discipline(self) -> Discipline {
        match self.tag {
            SignatureTag::BIbullet => Discipline::Planar,
            SignatureTag::BCI => Discipline::Linear,
            SignatureTag::BCpmI => Discipline::Braided,
            SignatureTag::BCIWK => Discipline::Cartesian,
        }
    }

    pub fn for_discipline(d: Discipline) -> Signature {
        match d {
            Discipline::Planar => Signature::PLANAR,
            Discipline::Linear => Signature::LINEAR,
            Discipline::Braided => Signature::BRAIDED,
            Discipline::Cartesian => Signature::CARTESIAN,
        }
    }

    pub fn allows(self, p: Prim) -> bool {
        match p {
            Prim::B | Prim::I => true,
            Prim::C => matches!(self.tag, SignatureTag::BCI | SignatureTag::BCIWK),
            Prim::CPlus | Prim::CMinus => self.tag == SignatureTag::BCpmI,
            Prim::W | Prim::K => self.tag == SignatureTag::BCIWK,
            Prim::Tr => self.trace_extension,
        }
    }

    pub fn check(self, c: &CTerm) -> Result<(), CombError> {
        match c.prims().into_iter().find(|&p| !self.allows(p)) {
            Some(p) => Err(CombError::NotInSignature { prim: p.symbol(), signature: self.to_string() }),
            None => Ok(()),
        }
    }

    pub fn name(self) -> &'static str {
        match self.tag {
            SignatureTag::BIbullet => "BI(_)*",
            SignatureTag::BCI => "BCI",
            SignatureTag::BCpmI => "BC+-I",
            SignatureTag::BCIWK => "BCIWK",
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if self.trace_extension {
            f.write_str("+Tr")?;
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = CombError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let (base, trace) = match lower.strip_suffix("+tr") {
            Some(b) => (b.to_string(), true),
            None => (lower, false),
        };
        let tag = match base.as_str() {
            "bi" | "bi(_)*" | "bibullet" | "planar" => SignatureTag::BIbullet,
            "bci" | "linear" => SignatureTag::BCI,
            "bcpmi" | "bc+-i" | "bc±i" | "braided" => SignatureTag::BCpmI,
            "bciwk" | "cartesian" => SignatureTag::BCIWK,
            _ => return Err(CombError::UnknownSignature(s.to_string())),
        };
        Signature::new(tag, trace)
    }
}

// ---------------------------------------------------------------------------
// translation to λ-terms

fn lam_of(src: &str) -> LTerm {
    lambda::parse(src).expect("built-in λ-term")
}

pub fn prim_lambda(p: Prim) -> Option<LTerm> {
    Some(match p {
        Prim::B => lam_of(r"\f x y. f (x y)"),
        Prim::C => lam_of(r"\f x y. f y x"),
        Prim::CPlus => lam_of(r"\f x y. [{3; 1}] (f y x)"),
        Prim::CMinus => lam_of(r"\f x y. [{3; -1}] (f y x)"),
        Prim::I => lam_of(r"\x. x"),
        Prim::W => lam_of(r"\f x. f x x"),
        Prim::K => lam_of(r"\f x. f"),
        Prim::Tr => return None,
    })
}

fn prim_fits(p: Prim, d: Discipline) -> bool {
    match p {
        Prim::B | Prim::I => true,
        Prim::C => matches!(d, Discipline::Linear | Discipline::Cartesian),
        Prim::CPlus | Prim::CMinus => d == Discipline::Braided,
        Prim::W | Prim::K => d == Discipline::Cartesian,
        Prim::Tr => false,
    }
}

pub fn to_lambda(c: &CTerm, d: Discipline) -> Result<LTerm, CombError> {
    Ok(match c {
        CTerm::Prim(Prim::Tr) => return Err(CombError::TraceEquality),
        CTerm::Prim(p) => {
            if !prim_fits(*p, d) {
                return Err(CombError::NoImage { prim: p.symbol(), discipline: d });
            }
            prim_lambda(*p).expect("non-trace primitive")
        }
        CTerm::App(a, b) => LTerm::app(to_lambda(a, d)?, to_lambda(b, d)?),
        CTerm::Compose(a, b) => LTerm::apps(prim_lambda(Prim::B).expect("B"), [to_lambda(a, d)?, to_lambda(b, d)?]),
        CTerm::Bullet(a) => {
            let inner = to_lambda(a, d)?;
            LTerm::lam(LTerm::app(LTerm::Var(0), lambda::shift(&inner, 1, 0)))
        }
        CTerm::ConstRef(n) => LTerm::Const(n.clone()),
    })
}

/// Equality in the free extensional algebra, decided on λ-translations.
pub fn comb_equal(c1: &CTerm, c2: &CTerm, s: Signature, fuel: usize) -> Result<Verdict, CombError> {
    if c1.prims().contains(&Prim::Tr) || c2.prims().contains(&Prim::Tr) {
        return Err(CombError::TraceEquality);
    }
    s.check(c1)?;
    s.check(c2)?;
    let d = s.discipline();
    Ok(lam_equal(&to_lambda(c1, d)?, &to_lambda(c2, d)?, d, fuel))
}

/// βη-normal form of the λ-translation, printed.
pub fn comb_normal_form(c: &CTerm, s: Signature, fuel: usize) -> Result<Option<LTerm>, CombError> {
    let d = s.discipline();
    let t = to_lambda(c, d)?;
    Ok(normalize(&t, d, fuel).ok())
}

// ---------------------------------------------------------------------------
// polynomials and bracket abstraction

/// A polynomial over the algebra: variables are indexed `0..arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PolyExpr {
    Var(usize),
    Coef(CTerm),
    App(Box<PolyExpr>, Box<PolyExpr>),
}

impl PolyExpr {
    pub fn app(a: PolyExpr, b: PolyExpr) -> PolyExpr {
        PolyExpr::App(Box::new(a), Box::new(b))
    }

    pub fn coef(c: CTerm) -> PolyExpr {
        PolyExpr::Coef(c)
    }

    /// Parses combinator syntax, reading the listed names as variables.
    pub fn parse(text: &str, vars: &[&str]) -> Result<PolyExpr, CombError> {
        PolyExpr::from_cterm(&parse_comb(text)?, vars)
    }

    pub fn from_cterm(c: &CTerm, vars: &[&str]) -> Result<PolyExpr, CombError> {
        let mentions = c.const_names().iter().any(|n| vars.contains(&n.as_str()));
        if !mentions {
            return Ok(PolyExpr::Coef(c.clone()));
        }
        Ok(match c {
            CTerm::ConstRef(n) => PolyExpr::Var(vars.iter().position(|v| v == n).expect("mentioned variable")),
            CTerm::App(a, b) => PolyExpr::app(PolyExpr::from_cterm(a, vars)?, PolyExpr::from_cterm(b, vars)?),
            CTerm::Compose(a, b) => PolyExpr::app(
                PolyExpr::app(PolyExpr::Coef(CTerm::Prim(Prim::B)), PolyExpr::from_cterm(a, vars)?),
                PolyExpr::from_cterm(b, vars)?,
            ),
            CTerm::Bullet(_) => return Err(CombError::OpenBullet(c.to_string())),
            CTerm::Prim(_) => unreachable!("primitives mention no variables"),
        })
    }

    /// Variable occurrences, left to right.
    pub fn occurrences(&self) -> Vec<usize> {
        fn go(p: &PolyExpr, out: &mut Vec<usize>) {
            match p {
                PolyExpr::Var(i) => out.push(*i),
                PolyExpr::Coef(_) => {}
                PolyExpr::App(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    fn mentions(&self, x: usize) -> bool {
        match self {
            PolyExpr::Var(i) => *i == x,
            PolyExpr::Coef(_) => false,
            PolyExpr::App(a, b) => a.mentions(x) || b.mentions(x),
        }
    }

    fn to_cterm(&self) -> Option<CTerm> {
        match self {
            PolyExpr::Var(_) => None,
            PolyExpr::Coef(c) => Some(c.clone()),
            PolyExpr::App(a, b) => Some(CTerm::app(a.to_cterm()?, b.to_cterm()?)),
        }
    }

    /// Replaces `Var(i)` by `args[i]`.
    pub fn instantiate(&self, args: &[CTerm]) -> CTerm {
        match self {
            PolyExpr::Var(i) => args[*i].clone(),
            PolyExpr::Coef(c) => c.clone(),
            PolyExpr::App(a, b) => CTerm::app(a.instantiate(args), b.instantiate(args)),
        }
    }

    pub fn render(&self, names: &[&str]) -> String {
        match self {
            PolyExpr::Var(i) => names.get(*i).map(|s| s.to_string()).unwrap_or(format!("x{i}")),
            PolyExpr::Coef(c) => match c {
                CTerm::Prim(_) | CTerm::ConstRef(_) | CTerm::Bullet(_) => c.to_string(),
                _ => format!("({c})"),
            },
            PolyExpr::App(a, b) => {
                let rb = b.render(names);
                let rb = if matches!(**b, PolyExpr::App(..)) { format!("({rb})") } else { rb };
                format!("{} {}", a.render(names), rb)
            }
        }
    }
}

fn coef(p: Prim) -> PolyExpr {
    PolyExpr::Coef(CTerm::Prim(p))
}

fn app2(f: PolyExpr, a: PolyExpr, b: PolyExpr) -> PolyExpr {
    PolyExpr::app(PolyExpr::app(f, a), b)
}

/// `S = B (B W) (B B C)`, so that `S a b c = a c (b c)`.
pub fn derive_classical_s() -> CTerm {
    parse_comb("B (B W) (B B C)").expect("S")
}

fn star(p: &PolyExpr, x: usize, tag: SignatureTag) -> Result<PolyExpr, CombError> {
    let fail = |why: &str| Err(CombError::Abstraction(why.to_string()));
    if tag == SignatureTag::BCIWK && !p.mentions(x) {
        return Ok(PolyExpr::app(coef(Prim::K), p.clone()));
    }
    match p {
        PolyExpr::Var(i) if *i == x => Ok(coef(Prim::I)),
        PolyExpr::Var(_) | PolyExpr::Coef(_) => fail("the abstracted variable does not occur"),
        PolyExpr::App(t1, t2) => {
            let in1 = t1.mentions(x);
            let in2 = t2.mentions(x);
            match tag {
                SignatureTag::BIbullet | SignatureTag::BCpmI => {
                    if let Some(c2) = t2.to_cterm() {
                        if !in1 {
                            return fail("the abstracted variable does not occur");
                        }
                        Ok(app2(coef(Prim::B), PolyExpr::Coef(CTerm::bullet(c2)), star(t1, x, tag)?))
                    } else if in2 && !in1 {
                        Ok(app2(coef(Prim::B), (**t1).clone(), star(t2, x, tag)?))
                    } else {
                        fail("variables are not in planar order")
                    }
                }
                SignatureTag::BCI | SignatureTag::BCIWK => {
                    if in1 && in2 {
                        if tag == SignatureTag::BCI {
                            return fail("variable used twice in a linear polynomial");
                        }
                        let s = PolyExpr::Coef(derive_classical_s());
                        return Ok(app2(s, star(t1, x, tag)?, star(t2, x, tag)?));
                    }
                    if in2 {
                        Ok(app2(coef(Prim::B), (**t1).clone(), star(t2, x, tag)?))
                    } else if let Some(c2) = t2.to_cterm() {
                        Ok(app2(coef(Prim::B), PolyExpr::Coef(CTerm::bullet(c2)), star(t1, x, tag)?))
                    } else {
                        Ok(app2(coef(Prim::C), star(t1, x, tag)?, (**t2).clone()))
                    }
                }
            }
        }
    }
}

/// Abstracts the variables `arity-1, ..., 0` in turn, giving a closed term `c`
/// with `c q_0 ... q_{n-1} = p[q/x]`.
pub fn bracket_abstract(p: &PolyExpr, arity: usize, s: Signature) -> Result<CTerm, CombError> {
    if arity == 0 {
        return Err(CombError::Abstraction("no variable to abstract".into()));
    }
    let occ = p.occurrences();
    if let Some(&v) = occ.iter().find(|&&v| v >= arity) {
        return Err(CombError::Abstraction(format!("variable {v} exceeds arity {arity}")));
    }
    match s.discipline() {
        Discipline::Planar | Discipline::Braided => {
            if occ != (0..arity).collect::<Vec<_>>() {
                return Err(CombError::Abstraction("planar polynomials use every variable once, in order".into()));
            }
        }
        Discipline::Linear => {
            let mut sorted = occ.clone();
            sorted.sort_unstable();
            if sorted != (0..arity).collect::<Vec<_>>() {
                return Err(CombError::Abstraction("linear polynomials use every variable exactly once".into()));
            }
        }
        Discipline::Cartesian => {}
    }
    let mut cur = p.clone();
    for x in (0..arity).rev() {
        cur = star(&cur, x, s.tag)?;
    }
    Ok(cur.to_cterm().expect("all variables abstracted"))
}

fn fresh_names(prefix: &str, n: usize, avoid: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < n {
        let name = format!("{prefix}{k}");
        if !avoid.contains(&name) {
            out.push(name);
        }
        k += 1;
    }
    out
}

/// `(λ* p) q_0 ... q_{n-1}` against `p[q/x]` at fresh indeterminates.
pub fn beta_check_abstraction(p: &PolyExpr, arity: usize, s: Signature, fuel: usize) -> Result<Verdict, CombError> {
    let abs = bracket_abstract(p, arity, s)?;
    let mut avoid = abs.const_names();
    avoid.extend(p.instantiate(&vec![CTerm::Prim(Prim::I); arity]).const_names());
    let qs: Vec<CTerm> = fresh_names("q", arity, &avoid).into_iter().map(CTerm::ConstRef).collect();
    let lhs = CTerm::apps(abs, qs.clone());
    let rhs = p.instantiate(&qs);
    let d = s.discipline();
    Ok(lam_equal(&to_lambda(&lhs, d)?, &to_lambda(&rhs, d)?, d, fuel))
}

// ---------------------------------------------------------------------------
// axiom tables

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub lhs: CTerm,
    pub rhs: CTerm,
}

/// Metavariables of axiom schemes.
pub const METAVARIABLES: [&str; 3] = ["a", "b", "c"];

impl Axiom {
    pub fn new(name: &str, lhs: &str, rhs: &str) -> Axiom {
        Axiom {
            name: name.to_string(),
            lhs: parse_comb(lhs).expect("axiom lhs"),
            rhs: parse_comb(rhs).expect("axiom rhs"),
        }
    }

    pub fn metavariables(&self) -> Vec<String> {
        let mut names = self.lhs.const_names();
        for n in self.rhs.const_names() {
            if !names.contains(&n) {
                names.push(n);
            }
        }
        names.retain(|n| METAVARIABLES.contains(&n.as_str()));
        names.sort();
        names
    }
}

const PLANAR_ROWS: [(&str, &str, &str); 5] = [
    ("(BI)", "B I", "I"),
    ("(app*)", "(a b)*", "B b* (B a* B)"),
    ("(B*)", "B B* (B B (B B B))", "B (B B) B"),
    ("(I*)", "B I* B", "I"),
    ("(**)", "B a** B", "B (B a*) B"),
];

const LINEAR_ROWS: [(&str, &str, &str); 10] = [
    ("(B)", "B a b c", "a (b c)"),
    ("(C)", "C a b c", "a c b"),
    ("(I)", "I a", "a"),
    ("(lambda)", "B I", "I"),
    ("(rho)", "C B I", "I"),
    ("(alpha)", "(B B) o B", "(C B B) o (B o B)"),
    ("(cox1)", "C o C", "I"),
    ("(cox2)", "(B C) o (B o B)", "(C B C) o (B o B)"),
    ("(cox3)", "(B C) o (C o (B C))", "C o ((B C) o C)"),
    ("(bc)", "(B B) o C", "C o ((B C) o B)"),
];

const CARTESIAN_ROWS: [(&str, &str, &str); 9] = [
    ("(W:1->2)", "W* o B o B", "(B W) o B o B"),
    ("(K:1->0)", "K* o B o B", "B K"),
    ("(co-unit)", "W o K", "I"),
    ("(co-associativity)", "W o W", "W o (B W)"),
    ("(co-commutativity)", "W o C", "W"),
    ("(B comonoid morphism W)", "B o W", "(B W) o W o (B C) o B o (B B)"),
    ("(B comonoid morphism K)", "B o K", "K o K"),
    ("(a* comonoid morphism W)", "a* o W", "a* o a*"),
    ("(a* comonoid morphism K)", "a* o K", "I"),
];

/// Braided rows; `S` stands for a linked sign, `T` for an independent one.
const BRAIDED_ROWS: [(&str, &str, &str); 11] = [
    ("(B)", "B a b c", "a (b c)"),
    ("(C)", "CT a b c", "a c b"),
    ("(I)", "I a", "a"),
    ("(C2)", "C+ a b", "C- a b"),
    ("(lambda)", "B I", "I"),
    ("(rho)", "CT B I", "I"),
    ("(alpha)", "(B B) o B", "(CT B B) o (B o B)"),
    ("(cox1)", "CS o CR", "I"),
    ("(cox2)", "(B CS) o (B o B)", "(CT B CS) o (B o B)"),
    ("(cox3)", "(B CS) o (CS o (B CS))", "CS o ((B CS) o CS)"),
    ("(bc)", "(B B) o CS", "CS o ((B CS) o B)"),
];

fn braided_axioms() -> Vec<Axiom> {
    let mut out = Vec::new();
    for (name, lhs, rhs) in BRAIDED_ROWS {
        let text = format!("{lhs}={rhs}");
        let linked = text.contains("CS");
        let free = text.contains("CT");
        let signs: &[char] = &['+', '-'];
        let linked_choices: &[char] = if linked { signs } else { &['+'] };
        let free_choices: &[char] = if free { signs } else { &['+'] };
        for &s in linked_choices {
            for &t in free_choices {
                let opposite = if s == '+' { '-' } else { '+' };
                let fill = |side: &str| {
                    side.replace("CS", &format!("C{s}"))
                        .replace("CR", &format!("C{opposite}"))
                        .replace("CT", &format!("C{t}"))
                };
                let mut label = name.to_string();
                let mut tags = Vec::new();
                if linked {
                    tags.push(s.to_string());
                }
                if free {
                    tags.push(format!("*={t}"));
                }
                if !tags.is_empty() {
                    label = format!("{label}[{}]", tags.join(","));
                }
                out.push(Axiom::new(&label, &fill(lhs), &fill(rhs)));
            }
        }
    }
    out
}

/// The extensionality table of a signature. The cartesian table contains the
/// BCI rows followed by the comonoid rows.
pub fn axioms(s: Signature) -> Vec<Axiom> {
    let rows = |t: &[(&str, &str, &str)]| -> Vec<Axiom> { t.iter().map(|(n, l, r)| Axiom::new(n, l, r)).collect() };
    match s.tag {
        SignatureTag::BIbullet => rows(&PLANAR_ROWS),
        SignatureTag::BCI => rows(&LINEAR_ROWS),
        SignatureTag::BCpmI => braided_axioms(),
        SignatureTag::BCIWK => {
            let mut v = rows(&LINEAR_ROWS);
            v.extend(rows(&CARTESIAN_ROWS));
            v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub status: AxiomStatus,
    pub lhs_nf: String,
    pub rhs_nf: String,
    pub witness_bindings: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub signature: Signature,
    pub entries: Vec<AxiomResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == AxiomStatus::Pass)
    }

    pub fn count(&self, status: AxiomStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("report serializes")
    }
}

/// Closed sample elements built from `I`, `B`, bullets and opaque constants.
pub fn sample_element(rng: &mut impl Rng, depth: usize) -> CTerm {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => CTerm::Prim(Prim::I),
            1 => CTerm::Prim(Prim::B),
            2 => CTerm::ConstRef("k0".into()),
            _ => CTerm::ConstRef("k1".into()),
        };
    }
    if rng.gen_bool(0.4) {
        CTerm::bullet(sample_element(rng, depth - 1))
    } else {
        CTerm::app(sample_element(rng, depth - 1), sample_element(rng, depth - 1))
    }
}

pub const SAMPLE_DEPTH: usize = 4;

pub fn sample_elements(n: usize, seed: u64) -> Vec<CTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_element(&mut rng, SAMPLE_DEPTH)).collect()
}

fn nf_text(c: &CTerm, s: Signature, fuel: usize) -> String {
    match comb_normal_form(c, s, fuel) {
        Ok(Some(t)) => t.to_string(),
        Ok(None) => "<fuel exhausted>".into(),
        Err(e) => format!("<{e}>"),
    }
}

/// Checks one axiom on `samples` instantiations (once when it has no
/// metavariables).
pub fn check_axiom(ax: &Axiom, s: Signature, samples: usize, seed: u64, fuel: usize) -> AxiomResult {
    let metas = ax.metavariables();
    let rounds = if metas.is_empty() { 1 } else { samples.max(1) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = None;
    for _ in 0..rounds {
        let bindings: BTreeMap<String, CTerm> =
            metas.iter().map(|m| (m.clone(), sample_element(&mut rng, SAMPLE_DEPTH))).collect();
        let lhs = ax.lhs.substitute(&bindings);
        let rhs = ax.rhs.substitute(&bindings);
        let verdict = comb_equal(&lhs, &rhs, s, fuel).unwrap_or(Verdict::Unknown);
        let status = match verdict {
            Verdict::Equal => AxiomStatus::Pass,
            Verdict::NotEqual => AxiomStatus::Fail,
            Verdict::Unknown | Verdict::FuelExhausted => AxiomStatus::Unknown,
        };
        let entry = || AxiomResult {
            axiom: ax.name.clone(),
            status,
            lhs_nf: nf_text(&lhs, s, fuel),
            rhs_nf: nf_text(&rhs, s, fuel),
            witness_bindings: bindings.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        };
        if status != AxiomStatus::Pass {
            return entry();
        }
        if first.is_none() {
            first = Some(entry());
        }
    }
    first.expect("at least one round")
}

pub fn axiom_suite(s: Signature, samples: usize, seed: u64, fuel: usize) -> SuiteReport {
    let table = axioms(s);
    let entries = table
        .par_iter()
        .enumerate()
        .map(|(k, ax)| check_axiom(ax, s, samples, seed.wrapping_add(k as u64), fuel))
        .collect();
    SuiteReport { signature: s, entries }
}
