//! Terms of the planar, linear, braided and cartesian λ-calculi.
//!
//! Variables are de Bruijn indices. A braid node `[s] M` carries a braid whose
//! start is the context order of the node and whose end is the left-to-right
//! order of the free variables of `M`. Strand 1 is the *last* context position
//! (the most recently bound variable), so `σ_1` exchanges the two innermost
//! variables.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::braid::{BraidError, BraidWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Discipline {
    Planar,
    Linear,
    Braided,
    Cartesian,
}

impl Discipline {
    pub const ALL: [Discipline; 4] =
        [Discipline::Planar, Discipline::Linear, Discipline::Braided, Discipline::Cartesian];

    /// Exactly-once usage of every bound variable.
    pub fn is_linear(self) -> bool {
        !matches!(self, Discipline::Cartesian)
    }

    pub fn name(self) -> &'static str {
        match self {
            Discipline::Planar => "planar",
            Discipline::Linear => "linear",
            Discipline::Braided => "braided",
            Discipline::Cartesian => "cartesian",
        }
    }
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Discipline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "planar" => Ok(Discipline::Planar),
            "linear" => Ok(Discipline::Linear),
            "braided" => Ok(Discipline::Braided),
            "cartesian" => Ok(Discipline::Cartesian),
            other => Err(format!("unknown discipline `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LTerm {
    Var(usize),
    Lam(Box<LTerm>),
    App(Box<LTerm>, Box<LTerm>),
    Braid(BraidWord, Box<LTerm>),
    Const(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("{rule} in `{subterm}`")]
    Discipline { rule: String, subterm: String },
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("duplicate context name `{0}`")]
    DuplicateName(String),
}

/// Named free variables; the last name is the innermost (de Bruijn index 0 at
/// the top of a term).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    names: Vec<String>,
}

impl Context {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, LambdaError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(LambdaError::DuplicateName(n.clone()));
            }
        }
        Ok(Context { names })
    }

    pub fn empty() -> Self {
        Context::default()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

impl LTerm {
    pub fn var(i: usize) -> LTerm {
        LTerm::Var(i)
    }

    pub fn lam(body: LTerm) -> LTerm {
        LTerm::Lam(Box::new(body))
    }

    pub fn lams(k: usize, body: LTerm) -> LTerm {
        (0..k).fold(body, |b, _| LTerm::lam(b))
    }

    pub fn app(f: LTerm, a: LTerm) -> LTerm {
        LTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: LTerm, args: impl IntoIterator<Item = LTerm>) -> LTerm {
        args.into_iter().fold(f, LTerm::app)
    }

    pub fn constant(name: impl Into<String>) -> LTerm {
        LTerm::Const(name.into())
    }

    /// `[s] body`, dropping the node when `s` is the trivial braid.
    pub fn braid(s: BraidWord, body: LTerm) -> LTerm {
        let s = s.free_reduced();
        if s.is_trivial() {
            return body;
        }
        match body {
            LTerm::Braid(t, inner) => LTerm::braid(s.compose(&t).expect("strand count of nested braids"), *inner),
            other => LTerm::Braid(s, Box::new(other)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            LTerm::Var(_) | LTerm::Const(_) => 1,
            LTerm::Lam(b) | LTerm::Braid(_, b) => 1 + b.node_count(),
            LTerm::App(f, a) => 1 + f.node_count() + a.node_count(),
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    pub fn has_braids(&self) -> bool {
        match self {
            LTerm::Var(_) | LTerm::Const(_) => false,
            LTerm::Lam(b) => b.has_braids(),
            LTerm::Braid(..) => true,
            LTerm::App(f, a) => f.has_braids() || a.has_braids(),
        }
    }

    /// Removes every braid node.
    pub fn erase_braids(&self) -> LTerm {
        match self {
            LTerm::Var(_) | LTerm::Const(_) => self.clone(),
            LTerm::Lam(b) => LTerm::lam(b.erase_braids()),
            LTerm::Braid(_, b) => b.erase_braids(),
            LTerm::App(f, a) => LTerm::app(f.erase_braids(), a.erase_braids()),
        }
    }

    pub fn constants(&self) -> Vec<String> {
        fn go(t: &LTerm, out: &mut Vec<String>) {
            match t {
                LTerm::Var(_) => {}
                LTerm::Const(c) => {
                    if !out.contains(c) {
                        out.push(c.clone())
                    }
                }
                LTerm::Lam(b) | LTerm::Braid(_, b) => go(b, out),
                LTerm::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Replaces constants by terms (closed replacements expected).
    pub fn instantiate(&self, lookup: &dyn Fn(&str) -> Option<LTerm>) -> LTerm {
        match self {
            LTerm::Var(_) => self.clone(),
            LTerm::Const(c) => lookup(c).unwrap_or_else(|| self.clone()),
            LTerm::Lam(b) => LTerm::lam(b.instantiate(lookup)),
            LTerm::Braid(s, b) => LTerm::Braid(s.clone(), Box::new(b.instantiate(lookup))),
            LTerm::App(f, a) => LTerm::app(f.instantiate(lookup), a.instantiate(lookup)),
        }
    }
}

// ---------------------------------------------------------------------------
// positional braid helpers

/// `wires[p]` is the body position reached by the context position `p`.
pub fn wire_map(s: &BraidWord) -> Vec<usize> {
    let n = s.strands();
    let perm = s.permutation();
    (0..n).map(|p| n - perm.apply(n - p)).collect()
}

/// Block sum listed left to right by context position.
pub fn positional_sum(parts: &[BraidWord]) -> BraidWord {
    let rev: Vec<BraidWord> = parts.iter().rev().cloned().collect();
    BraidWord::direct_sum(&rev)
}

/// Cabling with widths listed by body (end) position, left to right.
pub fn positional_cable(s: &BraidWord, widths: &[usize]) -> Result<BraidWord, BraidError> {
    let rev: Vec<usize> = widths.iter().rev().copied().collect();
    s.cable(&rev)
}

/// If `s` leaves its last `k` positions untouched (`s = u ⊕ 1_k`), returns `u`.
pub fn split_trailing_identity(s: &BraidWord, k: usize) -> Option<BraidWord> {
    let n = s.strands();
    if k > n {
        return None;
    }
    let wires = wire_map(s);
    if (n - k..n).any(|p| wires[p] != p) {
        return None;
    }
    let mut widths = vec![1; n];
    for w in widths.iter_mut().skip(n - k) {
        *w = 0;
    }
    let u = positional_cable(s, &widths).ok()?;
    let back = positional_sum(&[u.clone(), BraidWord::identity(k)]);
    if back.equals(s).ok()? {
        Some(u.free_reduced())
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// free variables, shifting, substitution

/// Free variables of `t` (indices relative to the top of `t`) in context
/// order: left-to-right occurrence order, with each braid node's permutation
/// pulled back to the node's context.
pub fn free_vars(t: &LTerm) -> Vec<usize> {
    match t {
        LTerm::Var(i) => vec![*i],
        LTerm::Const(_) => Vec::new(),
        // bound wires take part in the braids below, so drop them only here
        LTerm::Lam(b) => free_vars(b).into_iter().filter(|&v| v > 0).map(|v| v - 1).collect(),
        LTerm::App(f, a) => {
            let mut out = free_vars(f);
            out.extend(free_vars(a));
            out
        }
        LTerm::Braid(s, b) => {
            let inner = free_vars(b);
            if inner.len() == s.strands() {
                wire_map(s).into_iter().map(|q| inner[q]).collect()
            } else {
                inner
            }
        }
    }
}

pub fn occurs(t: &LTerm, index: usize) -> bool {
    fn go(t: &LTerm, target: usize) -> bool {
        match t {
            LTerm::Var(i) => *i == target,
            LTerm::Const(_) => false,
            LTerm::Lam(b) => go(b, target + 1),
            LTerm::Braid(_, b) => go(b, target),
            LTerm::App(f, a) => go(f, target) || go(a, target),
        }
    }
    go(t, index)
}

/// Adds `by` to every free index `>= cutoff`.
pub fn shift(t: &LTerm, by: usize, cutoff: usize) -> LTerm {
    if by == 0 {
        return t.clone();
    }
    match t {
        LTerm::Var(i) => LTerm::Var(if *i >= cutoff { i + by } else { *i }),
        LTerm::Const(_) => t.clone(),
        LTerm::Lam(b) => LTerm::lam(shift(b, by, cutoff + 1)),
        LTerm::Braid(s, b) => LTerm::Braid(s.clone(), Box::new(shift(b, by, cutoff))),
        LTerm::App(f, a) => LTerm::app(shift(f, by, cutoff), shift(a, by, cutoff)),
    }
}

/// Removes a binder that does not occur: free indices above `cutoff` drop by one.
pub fn unshift(t: &LTerm, cutoff: usize) -> LTerm {
    match t {
        LTerm::Var(i) => {
            debug_assert!(*i != cutoff, "unshift of an occurring variable");
            LTerm::Var(if *i > cutoff { i - 1 } else { *i })
        }
        LTerm::Const(_) => t.clone(),
        LTerm::Lam(b) => LTerm::lam(unshift(b, cutoff + 1)),
        LTerm::Braid(s, b) => LTerm::Braid(s.clone(), Box::new(unshift(b, cutoff))),
        LTerm::App(f, a) => LTerm::app(unshift(f, cutoff), unshift(a, cutoff)),
    }
}

/// `t[arg / index]`; indices above `index` drop by one (the binder is consumed).
///
/// A braid node whose body contains the variable has that wire replaced by as
/// many parallel strands as `arg` has free variables.
pub fn subst(t: &LTerm, index: usize, arg: &LTerm) -> LTerm {
    let width = free_vars(arg).len();
    subst_at(t, index, arg, width, 0)
}

fn subst_at(t: &LTerm, j: usize, arg: &LTerm, width: usize, depth: usize) -> LTerm {
    match t {
        LTerm::Var(i) => {
            if *i == j + depth {
                shift(arg, j + depth, 0)
            } else if *i > j + depth {
                LTerm::Var(i - 1)
            } else {
                LTerm::Var(*i)
            }
        }
        LTerm::Const(_) => t.clone(),
        LTerm::Lam(b) => LTerm::lam(subst_at(b, j, arg, width, depth + 1)),
        LTerm::App(f, a) => LTerm::app(subst_at(f, j, arg, width, depth), subst_at(a, j, arg, width, depth)),
        LTerm::Braid(s, b) => {
            let fv = free_vars(b);
            let body = subst_at(b, j, arg, width, depth);
            let target = j + depth;
            match fv.iter().position(|&v| v == target) {
                Some(q) if fv.len() == s.strands() => {
                    let mut widths = vec![1; fv.len()];
                    widths[q] = width;
                    let cabled = positional_cable(s, &widths).expect("widths match strands");
                    LTerm::braid(cabled, body)
                }
                _ => LTerm::Braid(s.clone(), Box::new(body)),
            }
        }
    }
}

/// Substitution guarded by the exactly-once discipline.
pub fn subst_checked(t: &LTerm, index: usize, arg: &LTerm, d: Discipline) -> Result<LTerm, LambdaError> {
    if d.is_linear() {
        let uses = free_vars(t).iter().filter(|&&v| v == index).count();
        if uses != 1 {
            return Err(LambdaError::Discipline {
                rule: format!("variable #{index} used {uses} times, substitution needs exactly one"),
                subterm: print(t),
            });
        }
    }
    Ok(subst(t, index, arg))
}

/// Structural equality with braid words compared as group elements.
pub fn alpha_eq(t1: &LTerm, t2: &LTerm) -> bool {
    match (t1, t2) {
        (LTerm::Var(a), LTerm::Var(b)) => a == b,
        (LTerm::Const(a), LTerm::Const(b)) => a == b,
        (LTerm::Lam(a), LTerm::Lam(b)) => alpha_eq(a, b),
        (LTerm::App(f1, a1), LTerm::App(f2, a2)) => alpha_eq(f1, f2) && alpha_eq(a1, a2),
        (LTerm::Braid(s, a), LTerm::Braid(t, b)) => s.equals(t).unwrap_or(false) && alpha_eq(a, b),
        (LTerm::Braid(s, a), other) | (other, LTerm::Braid(s, a)) => s.is_trivial() && alpha_eq(a, other),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// disciplines

/// Checks `t` in context `ctx` under `d`; the error names the first violated
/// rule and the offending subterm.
pub fn check_discipline(t: &LTerm, ctx: &Context, d: Discipline) -> Result<(), LambdaError> {
    let n = ctx.len();
    let occ = Checker { d, names: ctx.names() }.usage(t, n)?;
    let mut want: Vec<usize> = (0..n).collect();
    if d == Discipline::Cartesian {
        return Ok(());
    }
    let fail = |rule: &str| Err(LambdaError::Discipline { rule: rule.to_string(), subterm: print_in(t, ctx) });
    if d == Discipline::Linear {
        let mut sorted = occ.clone();
        sorted.sort_unstable();
        if sorted != want {
            return fail("context variables must each be used exactly once");
        }
        return Ok(());
    }
    if occ != want {
        want.sort_unstable();
        let mut sorted = occ.clone();
        sorted.sort_unstable();
        if sorted != want {
            return fail("context variables must each be used exactly once");
        }
        return fail("context variables must be used in context order");
    }
    Ok(())
}

pub fn well_formed(t: &LTerm, d: Discipline) -> bool {
    check_discipline(t, &Context::empty(), d).is_ok()
}

struct Checker<'a> {
    d: Discipline,
    names: &'a [String],
}

impl Checker<'_> {
    fn err(&self, rule: impl Into<String>, t: &LTerm, depth: usize) -> LambdaError {
        let mut names: Vec<String> = self.names.to_vec();
        for k in 0..depth.saturating_sub(names.len()) {
            names.push(format!("#{k}"));
        }
        let ctx = Context { names };
        LambdaError::Discipline { rule: rule.into(), subterm: print_in(t, &ctx) }
    }

    /// Levels of variable occurrences in context order; `depth` is the number
    /// of enclosing binders including the declared context.
    fn usage(&self, t: &LTerm, depth: usize) -> Result<Vec<usize>, LambdaError> {
        match t {
            LTerm::Var(i) => {
                if *i >= depth {
                    return Err(self.err("unbound variable index", t, depth));
                }
                Ok(vec![depth - 1 - i])
            }
            LTerm::Const(_) => Ok(Vec::new()),
            LTerm::App(f, a) => {
                let mut o = self.usage(f, depth)?;
                o.extend(self.usage(a, depth)?);
                Ok(o)
            }
            LTerm::Lam(b) => {
                let mut o = self.usage(b, depth + 1)?;
                let me = depth;
                if self.d == Discipline::Cartesian {
                    o.retain(|&l| l != me);
                    return Ok(o);
                }
                let uses = o.iter().filter(|&&l| l == me).count();
                if uses != 1 {
                    return Err(self.err(format!("bound variable used {uses} times, exactly once required"), t, depth));
                }
                if self.d != Discipline::Linear && o.last() != Some(&me) {
                    let rule = if self.d == Discipline::Braided {
                        "bound variable is not last; exchange needs a braid"
                    } else {
                        "bound variable must be the last one used"
                    };
                    return Err(self.err(rule, t, depth));
                }
                o.retain(|&l| l != me);
                Ok(o)
            }
            LTerm::Braid(s, b) => {
                if self.d != Discipline::Braided {
                    return Err(self.err(format!("braid node outside the braided calculus ({})", self.d), t, depth));
                }
                let inner = self.usage(b, depth)?;
                if inner.len() != s.strands() {
                    return Err(self.err(
                        format!("braid has {} strands but body has {} free wires", s.strands(), inner.len()),
                        t,
                        depth,
                    ));
                }
                Ok(wire_map(s).into_iter().map(|q| inner[q]).collect())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// concrete syntax

pub fn parse(text: &str) -> Result<LTerm, LambdaError> {
    parse_in(text, &Context::empty())
}

/// Parses with `ctx` naming the free variables; other unbound identifiers are
/// constants.
pub fn parse_in(text: &str, ctx: &Context) -> Result<LTerm, LambdaError> {
    let mut p = Parser { src: text, pos: 0, scope: ctx.names().to_vec() };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    scope: Vec<String>,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl Parser<'_> {
    fn error(&self, message: &str) -> LambdaError {
        LambdaError::Parse { pos: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn term(&mut self) -> Result<LTerm, LambdaError> {
        if self.eat('\\') || self.eat('λ') {
            let mut names = Vec::new();
            while let Some(n) = self.ident() {
                names.push(n);
            }
            if names.is_empty() {
                return Err(self.error("expected a binder name"));
            }
            if !self.eat('.') {
                return Err(self.error("expected `.`"));
            }
            let k = names.len();
            self.scope.extend(names);
            let body = self.term()?;
            self.scope.truncate(self.scope.len() - k);
            return Ok(LTerm::lams(k, body));
        }
        let mut t = self.atom()?.ok_or_else(|| self.error("expected a term"))?;
        loop {
            self.skip_ws();
            if self.peek() == Some('\\') || self.peek() == Some('λ') {
                let arg = self.term()?;
                return Ok(LTerm::app(t, arg));
            }
            match self.atom()? {
                Some(a) => t = LTerm::app(t, a),
                None => return Ok(t),
            }
        }
    }

    fn atom(&mut self) -> Result<Option<LTerm>, LambdaError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(Some(t))
            }
            Some('[') => {
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                let close = self.src[start..].find(']').ok_or_else(|| self.error("unterminated braid literal"))?;
                let lit = &self.src[start..start + close];
                let s: BraidWord = lit
                    .trim()
                    .parse()
                    .map_err(|e: BraidError| LambdaError::Parse { pos: start, message: e.to_string() })?;
                self.pos = start + close + 1;
                let body = self.atom()?.ok_or_else(|| self.error("expected a term after a braid"))?;
                Ok(Some(LTerm::Braid(s, Box::new(body))))
            }
            Some(c) if is_ident_char(c) => {
                let name = self.ident().expect("identifier start");
                Ok(Some(match self.scope.iter().rposition(|n| *n == name) {
                    Some(k) => LTerm::Var(self.scope.len() - 1 - k),
                    None => LTerm::Const(name),
                }))
            }
            _ => Ok(None),
        }
    }
}

const BINDER_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn binder_name(level: usize) -> String {
    match BINDER_NAMES.get(level) {
        Some(n) => (*n).to_string(),
        None => format!("x{level}"),
    }
}

pub fn print(t: &LTerm) -> String {
    print_in(t, &Context::empty())
}

/// Prints with generated binder names, avoiding the names of constants and
/// of the context.
pub fn print_in(t: &LTerm, ctx: &Context) -> String {
    let taken: HashSet<String> = t.constants().into_iter().chain(ctx.names().iter().cloned()).collect();
    let mut pr = Printer { scope: ctx.names().to_vec(), taken, next: 0, out: String::new() };
    pr.term(t);
    pr.out
}

struct Printer {
    scope: Vec<String>,
    taken: HashSet<String>,
    next: usize,
    out: String,
}

impl Printer {
    fn fresh(&mut self) -> String {
        loop {
            let n = binder_name(self.next);
            self.next += 1;
            if !self.taken.contains(&n) {
                return n;
            }
        }
    }

    fn term(&mut self, t: &LTerm) {
        if let LTerm::Lam(_) = t {
            let start = self.next;
            let mut names = Vec::new();
            let mut cur = t;
            while let LTerm::Lam(b) = cur {
                names.push(self.fresh());
                cur = b;
            }
            self.out.push('\\');
            self.out.push_str(&names.join(" "));
            self.out.push_str(". ");
            let k = names.len();
            self.scope.extend(names);
            self.term(cur);
            self.scope.truncate(self.scope.len() - k);
            self.next = start;
            return;
        }
        self.app(t);
    }

    fn app(&mut self, t: &LTerm) {
        match t {
            LTerm::App(f, a) => {
                self.app(f);
                self.out.push(' ');
                self.atom(a);
            }
            _ => self.atom(t),
        }
    }

    fn atom(&mut self, t: &LTerm) {
        match t {
            LTerm::Var(i) => match self.scope.len().checked_sub(i + 1) {
                Some(k) => {
                    let n = self.scope[k].clone();
                    self.out.push_str(&n);
                }
                None => self.out.push_str(&format!("#{}", i - self.scope.len())),
            },
            LTerm::Const(c) => self.out.push_str(c),
            LTerm::Braid(s, b) => {
                self.out.push_str(&format!("[{s}] "));
                self.atom(b);
            }
            _ => {
                self.out.push('(');
                self.term(t);
                self.out.push(')');
            }
        }
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Indented tree rendering, one node per line.
pub fn print_tree(t: &LTerm) -> String {
    fn go(t: &LTerm, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        match t {
            LTerm::Var(i) => out.push_str(&format!("var {i}\n")),
            LTerm::Const(c) => out.push_str(&format!("const {c}\n")),
            LTerm::Lam(b) => {
                out.push_str("lam\n");
                go(b, indent + 1, out);
            }
            LTerm::Braid(s, b) => {
                out.push_str(&format!("braid {s}\n"));
                go(b, indent + 1, out);
            }
            LTerm::App(f, a) => {
                out.push_str("app\n");
                go(f, indent + 1, out);
                go(a, indent + 1, out);
            }
        }
    }
    let mut out = String::new();
    go(t, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LTerm {
        parse(s).unwrap()
    }

    #[test]
    fn parses_binders_and_constants() {
        assert_eq!(p(r"\x. x"), LTerm::lam(LTerm::Var(0)));
        let b = p(r"\f x y. f (x y)");
        let body = LTerm::app(LTerm::Var(2), LTerm::app(LTerm::Var(1), LTerm::Var(0)));
        assert_eq!(b, LTerm::lams(3, body));
        assert_eq!(p("a b"), LTerm::app(LTerm::constant("a"), LTerm::constant("b")));
        assert_eq!(p(r"(\f.f)(\x.x)"), LTerm::app(LTerm::lam(LTerm::Var(0)), LTerm::lam(LTerm::Var(0))));
    }

    #[test]
    fn prints_what_it_parses() {
        for src in [r"\x. x", r"\x y z. x (y z)", r"\x y z. [{3; 1}] (x (z y))", "f a (g b)", r"a (\x. x)"] {
            assert_eq!(print(&p(src)), src);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse(r"\x x") {
            Err(LambdaError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse("(x").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn braided_wire_order() {
        let ctx = Context::new(["x", "y"]).unwrap();
        let t = parse_in("[{2; 1}] (y x)", &ctx).unwrap();
        assert_eq!(free_vars(&t), vec![1, 0]);
        let plain = parse_in("x y", &ctx).unwrap();
        assert_eq!(free_vars(&plain), vec![1, 0]);
        assert!(check_discipline(&t, &ctx, Discipline::Braided).is_ok());
        assert!(check_discipline(&parse_in("y x", &ctx).unwrap(), &ctx, Discipline::Braided).is_err());
    }

    #[test]
    fn braided_substitution_cables() {
        // the wire of `m` in `[{3;-2 1}] (x m z)` becomes two wires
        let ctx = Context::new(["x", "m", "z"]).unwrap();
        let t = parse_in("[{3; -2 1}] (m z x)", &ctx).unwrap();
        let fv = free_vars(&t);
        assert_eq!(fv.len(), 3);
        let arg = parse_in("p q", &Context::new(["x", "m", "z", "p", "q"]).unwrap()).unwrap();
        let r = subst(&t, 1, &arg);
        match r {
            LTerm::Braid(s, _) => assert_eq!(s.strands(), 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disciplines() {
        let c = p(r"\x y. y x");
        assert!(!well_formed(&c, Discipline::Planar));
        assert!(well_formed(&c, Discipline::Linear));
        assert!(well_formed(&p(r"\f x y. f (x y)"), Discipline::Planar));
        let w = p(r"\f x. f x x");
        assert!(!well_formed(&w, Discipline::Linear));
        assert!(well_formed(&w, Discipline::Cartesian));
        let m = p(r"\f x y. [{3; 1}] (f (y x))");
        assert!(well_formed(&m, Discipline::Braided));
        assert!(!well_formed(&m, Discipline::Linear));
    }

    #[test]
    fn trailing_identity_split() {
        let s: BraidWord = "{3; 2}".parse().unwrap();
        // σ_2 acts on positions 0 and 1, leaving the last position alone
        let u = split_trailing_identity(&s, 1).unwrap();
        assert_eq!(u, "{2; 1}".parse().unwrap());
        assert!(split_trailing_identity(&"{3; 1}".parse().unwrap(), 1).is_none());
    }
}
