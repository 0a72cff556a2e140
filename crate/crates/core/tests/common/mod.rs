//! Shared generators and reference implementations for the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use operadforge::braid::BraidWord;
use operadforge::lambda::{wire_map, Discipline, LTerm};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CONSTANTS: [&str; 3] = ["p", "q", "r"];

/// A random closed term of discipline `d` built within roughly `budget`
/// constructors.
pub fn closed_term(d: Discipline, budget: usize, seed: u64) -> LTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen(&mut rng, d, Vec::new(), 0, budget as i64)
}

/// `vars` are the context levels the term must use, in the order it must use
/// them (for planar and braided terms); `ctx` is the number of binders in scope.
fn gen(rng: &mut ChaCha8Rng, d: Discipline, vars: Vec<usize>, ctx: usize, budget: i64) -> LTerm {
    if d == Discipline::Cartesian {
        return gen_cartesian(rng, ctx, budget);
    }
    let k = vars.len();
    let leaf = budget <= 0 || rng.gen_bool(0.25);
    if k == 0 && leaf {
        return LTerm::constant(*CONSTANTS.choose(rng).unwrap());
    }
    if k == 1 && leaf {
        return LTerm::Var(ctx - 1 - vars[0]);
    }
    if budget > 0 && rng.gen_bool(0.4) {
        let mut inner = vars.clone();
        inner.push(ctx);
        return LTerm::lam(gen(rng, d, inner, ctx + 1, budget - 1));
    }
    let mut vars = vars;
    let mut braid = None;
    match d {
        Discipline::Linear => vars.shuffle(rng),
        Discipline::Braided if k >= 2 && rng.gen_bool(0.5) => {
            let len = rng.gen_range(1..=3);
            let letters: Vec<i32> = (0..len)
                .map(|_| {
                    let i = rng.gen_range(1..k as i32);
                    if rng.gen_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect();
            let s = BraidWord::new(k, letters).unwrap();
            let wires = wire_map(&s);
            let mut body = vec![0; k];
            for (p, &v) in vars.iter().enumerate() {
                body[wires[p]] = v;
            }
            vars = body;
            braid = Some(s);
        }
        _ => {}
    }
    let cut = rng.gen_range(0..=k);
    let share = rng.gen_range(0..=budget.max(0));
    let f = gen(rng, d, vars[..cut].to_vec(), ctx, share - 1);
    let a = gen(rng, d, vars[cut..].to_vec(), ctx, budget - share - 1);
    let body = LTerm::app(f, a);
    match braid {
        Some(s) => LTerm::braid(s, body),
        None => body,
    }
}

fn gen_cartesian(rng: &mut ChaCha8Rng, ctx: usize, budget: i64) -> LTerm {
    if budget <= 0 || rng.gen_bool(0.25) {
        if ctx > 0 && rng.gen_bool(0.8) {
            return LTerm::Var(rng.gen_range(0..ctx));
        }
        return LTerm::constant(*CONSTANTS.choose(rng).unwrap());
    }
    if rng.gen_bool(0.4) {
        return LTerm::lam(gen_cartesian(rng, ctx + 1, budget - 1));
    }
    let share = rng.gen_range(0..=budget);
    LTerm::app(gen_cartesian(rng, ctx, share - 1), gen_cartesian(rng, ctx, budget - share - 1))
}

// ---------------------------------------------------------------------------
// reference normalizer for braid-free terms: textbook de Bruijn substitution,
// leftmost-outermost reduction, then η-contraction to a fixed point

fn lift(t: &LTerm, by: isize, cutoff: usize) -> LTerm {
    match t {
        LTerm::Var(i) if *i >= cutoff => LTerm::Var((*i as isize + by) as usize),
        LTerm::Var(_) | LTerm::Const(_) => t.clone(),
        LTerm::Lam(b) => LTerm::lam(lift(b, by, cutoff + 1)),
        LTerm::App(f, a) => LTerm::app(lift(f, by, cutoff), lift(a, by, cutoff)),
        LTerm::Braid(..) => panic!("reference normalizer is braid-free"),
    }
}

fn replace(t: &LTerm, j: usize, s: &LTerm) -> LTerm {
    match t {
        LTerm::Var(i) if *i == j => s.clone(),
        LTerm::Var(_) | LTerm::Const(_) => t.clone(),
        LTerm::Lam(b) => LTerm::lam(replace(b, j + 1, &lift(s, 1, 0))),
        LTerm::App(f, a) => LTerm::app(replace(f, j, s), replace(a, j, s)),
        LTerm::Braid(..) => panic!("reference normalizer is braid-free"),
    }
}

fn beta(body: &LTerm, arg: &LTerm) -> LTerm {
    lift(&replace(body, 0, &lift(arg, 1, 0)), -1, 0)
}

fn step(t: &LTerm) -> Option<LTerm> {
    match t {
        LTerm::App(f, a) => {
            if let LTerm::Lam(b) = &**f {
                return Some(beta(b, a));
            }
            if let Some(f2) = step(f) {
                return Some(LTerm::app(f2, (**a).clone()));
            }
            step(a).map(|a2| LTerm::app((**f).clone(), a2))
        }
        LTerm::Lam(b) => step(b).map(LTerm::lam),
        _ => None,
    }
}

fn mentions(t: &LTerm, j: usize) -> bool {
    match t {
        LTerm::Var(i) => *i == j,
        LTerm::Const(_) => false,
        LTerm::Lam(b) => mentions(b, j + 1),
        LTerm::App(f, a) => mentions(f, j) || mentions(a, j),
        LTerm::Braid(_, b) => mentions(b, j),
    }
}

fn eta(t: &LTerm) -> LTerm {
    match t {
        LTerm::Lam(b) => {
            let b = eta(b);
            if let LTerm::App(f, a) = &b {
                if **a == LTerm::Var(0) && !mentions(f, 0) {
                    return lift(f, -1, 0);
                }
            }
            LTerm::lam(b)
        }
        LTerm::App(f, a) => LTerm::app(eta(f), eta(a)),
        other => other.clone(),
    }
}

/// Terms growing past this many nodes are given up on.
pub const SIZE_CAP: usize = 2000;

/// βη-normal form by the reference normalizer, `None` past `steps` β-steps or
/// past `SIZE_CAP` nodes.
pub fn reference_nf(t: &LTerm, steps: usize) -> Option<LTerm> {
    let mut t = t.clone();
    for _ in 0..steps {
        if t.node_count() > SIZE_CAP {
            return None;
        }
        match step(&t) {
            Some(next) => t = next,
            None => return Some(eta(&t)),
        }
    }
    None
}

pub fn reference_eta(t: &LTerm) -> LTerm {
    eta(t)
}

/// True when `t` has no β-redex.
pub fn is_beta_normal(t: &LTerm) -> bool {
    step(&t.erase_braids()).is_none()
}

// ---------------------------------------------------------------------------
// Brute-force word problem oracle over B3: moves are insertion or deletion of
// an adjacent inverse pair and the braid relation in either sign. Every move
// is its own inverse, so a path of length 6 exists iff the radius-3 balls
// around both ends meet.
const MAX_LEN: usize = 8;

pub fn moves(w: &[i32]) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for p in 0..w.len().saturating_sub(1) {
        if w[p] == -w[p + 1] {
            let mut v = w[..p].to_vec();
            v.extend_from_slice(&w[p + 2..]);
            out.push(v);
        }
    }
    if w.len() + 2 <= MAX_LEN {
        for p in 0..=w.len() {
            for l in [1, -1, 2, -2] {
                let mut v = w[..p].to_vec();
                v.extend([l, -l]);
                v.extend_from_slice(&w[p..]);
                out.push(v);
            }
        }
    }
    for p in 0..w.len().saturating_sub(2) {
        let (a, b, c) = (w[p], w[p + 1], w[p + 2]);
        if a == c && a.signum() == b.signum() && a.abs() != b.abs() {
            let mut v = w.to_vec();
            v[p] = b;
            v[p + 1] = a;
            v[p + 2] = b;
            out.push(v);
        }
    }
    out
}

pub fn ball(w: Vec<i32>, radius: usize) -> HashSet<Vec<i32>> {
    let mut seen = HashSet::from([w.clone()]);
    let mut frontier = vec![w];
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in &frontier {
            for u in moves(v) {
                if seen.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    seen
}

pub fn all_words(max_len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in [1, -1, 2, -2] {
                let mut v: Vec<i32> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// True when the B3 word reaches the empty word within 6 moves; `identity`
/// is `ball(vec![], 3)`.
pub fn relator_search_trivial(w: &[i32], identity: &HashSet<Vec<i32>>) -> bool {
    ball(w.to_vec(), 3).iter().any(|v| identity.contains(v))
}
