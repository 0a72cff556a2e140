//! β/η normalization and the equality decision for each discipline.
//!
//! In the exactly-once calculi every β-step shrinks the term, so normalization
//! needs no fuel. Braids are floated while reducing: each λ-group ends up with
//! at most one braid directly under its binders, and the root carries the
//! braid on the free variables. Braided equality compares braid-erased
//! skeletons and then solves for the gauge braids bottom-up.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::BraidWord;
use crate::lambda::{
    alpha_eq, free_vars, occurs, positional_sum, shift, split_trailing_identity, subst, unshift, Discipline, LTerm,
};

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
    FuelExhausted,
}

impl Verdict {
    pub fn is_definite(self) -> bool {
        matches!(self, Verdict::Equal | Verdict::NotEqual)
    }

    pub fn from_bool(eq: bool) -> Verdict {
        if eq {
            Verdict::Equal
        } else {
            Verdict::NotEqual
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "Equal",
            Verdict::NotEqual => "NotEqual",
            Verdict::Unknown => "Unknown",
            Verdict::FuelExhausted => "FuelExhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("fuel exhausted after {0} beta steps")]
    FuelExhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Normal order: the leftmost-outermost redex first.
    Outermost,
    /// Applicative order: function and argument are normalized before the
    /// redex is contracted.
    Innermost,
}

/// βη-normal form. Fuel bounds the β-steps of the cartesian calculus only.
pub fn normalize(t: &LTerm, d: Discipline, fuel: usize) -> Result<LTerm, NormError> {
    match d {
        Discipline::Cartesian => Ok(eta_contract(&normalize_with(t, Strategy::Outermost, fuel)?)),
        _ => Ok(linear_normal_form(t)),
    }
}

/// β-normalization without braids under an explicit strategy.
pub fn normalize_with(t: &LTerm, strategy: Strategy, fuel: usize) -> Result<LTerm, NormError> {
    let mut left = fuel;
    let r = match strategy {
        Strategy::Outermost => nf_outer(t, &mut left),
        Strategy::Innermost => nf_inner(t, &mut left),
    };
    r.map_err(|_| NormError::FuelExhausted(fuel))
}

struct OutOfFuel;

fn tick(fuel: &mut usize) -> Result<(), OutOfFuel> {
    if *fuel == 0 {
        return Err(OutOfFuel);
    }
    *fuel -= 1;
    Ok(())
}

fn whnf(t: &LTerm, fuel: &mut usize) -> Result<LTerm, OutOfFuel> {
    let mut args: Vec<LTerm> = Vec::new();
    let mut head = t.clone();
    loop {
        match head {
            LTerm::App(f, a) => {
                args.push(*a);
                head = *f;
            }
            LTerm::Lam(body) if !args.is_empty() => {
                tick(fuel)?;
                let a = args.pop().expect("nonempty");
                head = subst(&body, 0, &a);
            }
            other => {
                head = other;
                break;
            }
        }
    }
    Ok(args.into_iter().rev().fold(head, LTerm::app))
}

fn nf_outer(t: &LTerm, fuel: &mut usize) -> Result<LTerm, OutOfFuel> {
    match whnf(t, fuel)? {
        LTerm::Lam(b) => Ok(LTerm::lam(nf_outer(&b, fuel)?)),
        LTerm::App(f, a) => {
            // the head is neutral, so reducing inside cannot expose a redex here
            let f = nf_outer(&f, fuel)?;
            let a = nf_outer(&a, fuel)?;
            Ok(LTerm::app(f, a))
        }
        LTerm::Braid(s, b) => Ok(LTerm::Braid(s, Box::new(nf_outer(&b, fuel)?))),
        other => Ok(other),
    }
}

fn nf_inner(t: &LTerm, fuel: &mut usize) -> Result<LTerm, OutOfFuel> {
    match t {
        LTerm::Lam(b) => Ok(LTerm::lam(nf_inner(b, fuel)?)),
        LTerm::App(f, a) => {
            let f = nf_inner(f, fuel)?;
            let a = nf_inner(a, fuel)?;
            match f {
                LTerm::Lam(body) => {
                    tick(fuel)?;
                    nf_inner(&subst(&body, 0, &a), fuel)
                }
                f => Ok(LTerm::app(f, a)),
            }
        }
        LTerm::Braid(s, b) => Ok(LTerm::Braid(s.clone(), Box::new(nf_inner(b, fuel)?))),
        other => Ok(other.clone()),
    }
}

// ---------------------------------------------------------------------------
// exactly-once normalization with floating braids

fn wires(t: &LTerm) -> usize {
    free_vars(t).len()
}

/// Returns `(s, r)` with `t = [s] r`, `r` β-normal, and every braid of `r`
/// sitting directly under the binders of a λ-group.
fn float(t: &LTerm) -> (BraidWord, LTerm) {
    match t {
        LTerm::Var(_) => (BraidWord::identity(1), t.clone()),
        LTerm::Const(_) => (BraidWord::identity(0), t.clone()),
        LTerm::Braid(s, b) => {
            let (inner, r) = float(b);
            (s.compose(&inner).expect("braid strands match body wires"), r)
        }
        LTerm::Lam(b) => {
            let (sb, rb) = float(b);
            let n = sb.strands().saturating_sub(1);
            (BraidWord::identity(n), LTerm::lam(push_into(sb, rb)))
        }
        LTerm::App(f, a) => {
            let (sf, rf) = float(f);
            let (sa, ra) = float(a);
            let s = positional_sum(&[sf, sa]);
            match rf {
                LTerm::Lam(body) => {
                    let before = 1 + 1 + body.node_count() + ra.node_count();
                    let reduct = subst(&body, 0, &ra);
                    assert!(reduct.node_count() < before, "beta step did not shrink the term");
                    let (sr, rr) = float(&reduct);
                    (s.compose(&sr).expect("wire count preserved by beta"), rr)
                }
                rf => (s, LTerm::app(rf, ra)),
            }
        }
    }
}

/// `[s] r` with the braid moved under any leading binders of `r`.
fn push_into(s: BraidWord, r: LTerm) -> LTerm {
    match r {
        LTerm::Lam(b) => LTerm::lam(push_into(positional_sum(&[s, BraidWord::identity(1)]), *b)),
        other => LTerm::braid(s, other),
    }
}

fn float_top(t: &LTerm) -> LTerm {
    let (s, r) = float(t);
    push_into(s, r)
}

/// β-normal, η-contracted form for the exactly-once calculi.
fn linear_normal_form(t: &LTerm) -> LTerm {
    let mut cur = float_top(t);
    loop {
        let next = float_top(&eta_contract(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// η-contraction to a fixed point. Under a braid the bound variable must pass
/// straight through (`s = u ⊕ 1`); then `λx.[s](M x)` contracts to `[u] M`.
pub fn eta_contract(t: &LTerm) -> LTerm {
    match t {
        LTerm::Lam(b) => {
            let body = eta_contract(b);
            contract_one(&body).unwrap_or_else(|| LTerm::lam(body))
        }
        LTerm::App(f, a) => LTerm::app(eta_contract(f), eta_contract(a)),
        LTerm::Braid(s, b) => LTerm::braid(s.clone(), eta_contract(b)),
        other => other.clone(),
    }
}

fn contract_one(body: &LTerm) -> Option<LTerm> {
    match body {
        LTerm::App(f, a) if **a == LTerm::Var(0) && !occurs(f, 0) => Some(unshift(f, 0)),
        LTerm::Braid(s, inner) => match &**inner {
            LTerm::App(f, a) if **a == LTerm::Var(0) && !occurs(f, 0) => {
                let u = split_trailing_identity(s, 1)?;
                Some(LTerm::braid(u, unshift(f, 0)))
            }
            _ => None,
        },
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// canonical forms

/// A braid-erased skeleton and one braid per scope. Scope 0 is the root; the
/// other scopes are the λ-groups of the skeleton numbered in pre-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub skeleton: LTerm,
    pub braids: BTreeMap<usize, BraidWord>,
    /// Set when the floated form could not be brought into the group shape.
    pub unknown: bool,
}

struct Group<'a> {
    binders: usize,
    braid: Option<&'a BraidWord>,
    spine: &'a LTerm,
}

fn group(t: &LTerm) -> Group<'_> {
    let mut binders = 0;
    let mut cur = t;
    while let LTerm::Lam(b) = cur {
        binders += 1;
        cur = b;
    }
    match cur {
        LTerm::Braid(s, spine) => Group { binders, braid: Some(s), spine },
        spine => Group { binders, braid: None, spine },
    }
}

impl CanonicalForm {
    pub fn reassemble(&self) -> LTerm {
        let mut next = 0;
        rebuild(&self.skeleton, &self.braids, &mut next)
    }
}

fn rebuild(t: &LTerm, braids: &BTreeMap<usize, BraidWord>, next: &mut usize) -> LTerm {
    let id = *next;
    *next += 1;
    let g = group(t);
    let spine = rebuild_spine(g.spine, braids, next);
    let body = match braids.get(&id) {
        Some(s) => LTerm::braid(s.clone(), spine),
        None => spine,
    };
    LTerm::lams(g.binders, body)
}

fn rebuild_spine(t: &LTerm, braids: &BTreeMap<usize, BraidWord>, next: &mut usize) -> LTerm {
    match t {
        LTerm::App(f, a) => {
            let f = rebuild_spine(f, braids, next);
            LTerm::app(f, rebuild_spine(a, braids, next))
        }
        LTerm::Lam(_) => rebuild(t, braids, next),
        other => other.clone(),
    }
}

fn collect(t: &LTerm, braids: &mut BTreeMap<usize, BraidWord>, ok: &mut bool) {
    let id = braids.len();
    let g = group(t);
    let n = wires(g.spine);
    braids.insert(id, g.braid.cloned().unwrap_or_else(|| BraidWord::identity(n)));
    collect_spine(g.spine, braids, ok);
}

fn collect_spine(t: &LTerm, braids: &mut BTreeMap<usize, BraidWord>, ok: &mut bool) {
    match t {
        LTerm::App(f, a) => {
            collect_spine(f, braids, ok);
            collect_spine(a, braids, ok);
        }
        LTerm::Lam(_) => collect(t, braids, ok),
        LTerm::Braid(..) => *ok = false,
        _ => {}
    }
}

/// Normalizes a braided term and splits it into skeleton and scope braids.
pub fn braid_canonicalize(t: &LTerm) -> CanonicalForm {
    let nf = linear_normal_form(t);
    let mut braids = BTreeMap::new();
    let mut ok = true;
    collect(&nf, &mut braids, &mut ok);
    CanonicalForm { skeleton: nf.erase_braids(), braids, unknown: !ok }
}

// ---------------------------------------------------------------------------
// equality

pub fn lam_equal(t1: &LTerm, t2: &LTerm, d: Discipline, fuel: usize) -> Verdict {
    match d {
        Discipline::Braided => braided_equal(t1, t2),
        Discipline::Cartesian => {
            let (Ok(a), Ok(b)) = (normalize(t1, d, fuel), normalize(t2, d, fuel)) else {
                return Verdict::FuelExhausted;
            };
            Verdict::from_bool(alpha_eq(&a, &b))
        }
        _ => {
            let a = linear_normal_form(t1);
            let b = linear_normal_form(t2);
            Verdict::from_bool(alpha_eq(&a, &b))
        }
    }
}

fn braided_equal(t1: &LTerm, t2: &LTerm) -> Verdict {
    let a = linear_normal_form(t1);
    let b = linear_normal_form(t2);
    let (a, b) = eta_unify(&a, &b).unwrap_or((a, b));
    if a.erase_braids() != b.erase_braids() {
        // forgetting braids is sound, so distinct linear normal forms separate
        let la = linear_normal_form(&t1.erase_braids());
        let lb = linear_normal_form(&t2.erase_braids());
        return if la != lb { Verdict::NotEqual } else { Verdict::Unknown };
    }
    match align(&a, &b) {
        Some(Some(u)) => Verdict::from_bool(u.is_trivial()),
        Some(None) => Verdict::NotEqual,
        None => Verdict::Unknown,
    }
}

struct Parts {
    binders: usize,
    braid: Option<BraidWord>,
    head: LTerm,
    args: Vec<LTerm>,
}

fn parts(t: &LTerm) -> Option<Parts> {
    let g = group(t);
    let mut args = Vec::new();
    let mut head = g.spine;
    while let LTerm::App(f, a) = head {
        args.push((**a).clone());
        head = f;
    }
    if !matches!(head, LTerm::Var(_) | LTerm::Const(_)) {
        return None;
    }
    args.reverse();
    Some(Parts { binders: g.binders, braid: g.braid.cloned(), head: head.clone(), args })
}

impl Parts {
    /// η-expansion by `j` binders: `λ^k.[s] h a` becomes `λ^(k+j).[s ⊕ 1_j] h a x_1..x_j`.
    fn expand(&mut self, j: usize) {
        let wires_before = free_vars(&LTerm::apps(self.head.clone(), self.args.clone())).len();
        self.head = shift(&self.head, j, 0);
        for a in &mut self.args {
            *a = shift(a, j, 0);
        }
        self.args.extend((0..j).rev().map(LTerm::Var));
        let s = self.braid.take().unwrap_or_else(|| BraidWord::identity(wires_before));
        self.braid = Some(positional_sum(&[s, BraidWord::identity(j)]));
        self.binders += j;
    }

    fn assemble(self) -> LTerm {
        let spine = LTerm::apps(self.head, self.args);
        let body = match self.braid {
            Some(s) => LTerm::Braid(s, Box::new(spine)),
            None => spine,
        };
        LTerm::lams(self.binders, body)
    }
}

/// η-expands two floated normal forms towards a common skeleton.
fn eta_unify(a: &LTerm, b: &LTerm) -> Option<(LTerm, LTerm)> {
    let mut pa = parts(a)?;
    let mut pb = parts(b)?;
    if pa.binders < pb.binders {
        pa.expand(pb.binders - pa.binders);
    } else if pb.binders < pa.binders {
        pb.expand(pa.binders - pb.binders);
    }
    if pa.head != pb.head || pa.args.len() != pb.args.len() {
        return None;
    }
    let pairs: Option<Vec<(LTerm, LTerm)>> = pa.args.iter().zip(&pb.args).map(|(x, y)| eta_unify(x, y)).collect();
    let (xs, ys): (Vec<LTerm>, Vec<LTerm>) = pairs?.into_iter().unzip();
    pa.args = xs;
    pb.args = ys;
    Some((pa.assemble(), pb.assemble()))
}

/// For two groups with the same skeleton, finds `u` with `g1 = [u] g2`.
/// `Some(None)` certifies that no such braid exists; `None` means the terms
/// were not in group shape.
fn align(g1: &LTerm, g2: &LTerm) -> Option<Option<BraidWord>> {
    let a = group(g1);
    let b = group(g2);
    let total = wires(a.spine);
    let k = a.binders;
    let gauge = match spine_gauge(a.spine, b.spine)? {
        Some(u) => u,
        None => return Some(None),
    };
    let s1 = a.braid.cloned().unwrap_or_else(|| BraidWord::identity(total));
    let s2 = b.braid.cloned().unwrap_or_else(|| BraidWord::identity(total));
    let d = s1.compose(&gauge).ok()?.compose(&s2.inverse()).ok()?.free_reduced();
    Some(split_trailing_identity(&d, k))
}

fn spine_gauge(t1: &LTerm, t2: &LTerm) -> Option<Option<BraidWord>> {
    let mut parts = Vec::new();
    if !spine_parts(t1, t2, &mut parts)? {
        return Some(None);
    }
    Some(Some(positional_sum(&parts)))
}

fn spine_parts(t1: &LTerm, t2: &LTerm, parts: &mut Vec<BraidWord>) -> Option<bool> {
    match (t1, t2) {
        (LTerm::App(f1, a1), LTerm::App(f2, a2)) => Some(spine_parts(f1, f2, parts)? && spine_parts(a1, a2, parts)?),
        (LTerm::Var(_), LTerm::Var(_)) => {
            parts.push(BraidWord::identity(1));
            Some(true)
        }
        (LTerm::Const(_), LTerm::Const(_)) => Some(true),
        (LTerm::Lam(_), LTerm::Lam(_)) => match align(t1, t2)? {
            Some(u) => {
                parts.push(u);
                Some(true)
            }
            None => Some(false),
        },
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse;

    fn p(s: &str) -> LTerm {
        parse(s).unwrap()
    }

    #[test]
    fn beta_and_eta() {
        let n = normalize(&p(r"(\f.f)(\x.x)"), Discipline::Planar, 1).unwrap();
        assert_eq!(n, p(r"\x. x"));
        let bi = normalize(&p(r"(\f x y. f (x y)) (\z.z)"), Discipline::Planar, 1).unwrap();
        assert_eq!(bi, p(r"\x. x"));
        assert_eq!(eta_contract(&p(r"\x y. f x y")), p("f"));
        assert_eq!(eta_contract(&p(r"\x. x")), p(r"\x. x"));
    }

    #[test]
    fn divergence_needs_fuel() {
        let omega = p(r"(\x. x x)(\x. x x)");
        assert_eq!(normalize(&omega, Discipline::Cartesian, 100), Err(NormError::FuelExhausted(100)));
        assert_eq!(lam_equal(&omega, &omega, Discipline::Cartesian, 50), Verdict::FuelExhausted);
    }

    #[test]
    fn braided_exchanges() {
        let cp = p(r"\f x y. [{3; 1}] (f y x)");
        let cm = p(r"\f x y. [{3; -1}] (f y x)");
        let a = p(r"\x. x");
        let b = p(r"\x y. x y");
        let lhs = LTerm::apps(cp.clone(), [a.clone(), b.clone()]);
        let rhs = LTerm::apps(cm.clone(), [a, b]);
        assert_eq!(lam_equal(&lhs, &rhs, Discipline::Braided, 1), Verdict::Equal);
        assert_eq!(lam_equal(&cp, &cm, Discipline::Braided, 1), Verdict::NotEqual);
        let mp = p(r"\f x y. [{3; 1}] (f (y x))");
        let mm = p(r"\f x y. [{3; -1}] (f (y x))");
        assert_eq!(lam_equal(&mp, &mm, Discipline::Braided, 1), Verdict::NotEqual);
        let cf = braid_canonicalize(&mp);
        assert_eq!(cf.skeleton, braid_canonicalize(&mm).skeleton);
        assert!(alpha_eq(&cf.reassemble(), &normalize(&mp, Discipline::Braided, 1).unwrap()));
    }

    #[test]
    fn cancelling_braids() {
        let t = p(r"\x y. [{2; 1}] ([{2; -1}] (x y))");
        let cf = braid_canonicalize(&t);
        assert!(cf.braids.values().all(BraidWord::is_trivial));
        assert_eq!(cf.skeleton, p(r"\x. x"));
    }

    #[test]
    fn strategies_agree() {
        let t = p(r"(\f x y. f (x y)) (\z. z) (\w. w) q");
        let a = normalize_with(&t, Strategy::Outermost, 100).unwrap();
        let b = normalize_with(&t, Strategy::Innermost, 100).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, p("q"));
    }
}
