//! Bounded breadth-first search for an equational proof from an axiom table.
//!
//! Independent of the λ-translation, so it cross-checks Equal verdicts of the
//! normalizer on small instances.

use std::collections::{HashMap, VecDeque};

use crate::combinatory::{Axiom, CTerm, Prim, METAVARIABLES};

/// An oriented axiom over terms without the composition sugar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: CTerm,
    pub rhs: CTerm,
}

/// Replaces `a o b` by `B a b`.
pub fn desugar(c: &CTerm) -> CTerm {
    match c {
        CTerm::Compose(a, b) => CTerm::apps(CTerm::Prim(Prim::B), [desugar(a), desugar(b)]),
        CTerm::App(a, b) => CTerm::app(desugar(a), desugar(b)),
        CTerm::Bullet(a) => CTerm::bullet(desugar(a)),
        other => other.clone(),
    }
}

fn is_meta(c: &CTerm) -> bool {
    matches!(c, CTerm::ConstRef(n) if METAVARIABLES.contains(&n.as_str()))
}

/// Both orientations of every axiom, except those whose left side is a bare
/// metavariable or whose right side invents metavariables.
pub fn rules(axioms: &[Axiom]) -> Vec<Rule> {
    let mut out = Vec::new();
    for ax in axioms {
        let l = desugar(&ax.lhs);
        let r = desugar(&ax.rhs);
        for (from, to, tag) in [(&l, &r, "->"), (&r, &l, "<-")] {
            let metas_to = to.const_names();
            let metas_from = from.const_names();
            let invents = metas_to.iter().any(|n| METAVARIABLES.contains(&n.as_str()) && !metas_from.contains(n));
            if is_meta(from) || invents {
                continue;
            }
            out.push(Rule { name: format!("{}{tag}", ax.name), lhs: from.clone(), rhs: to.clone() });
        }
    }
    out
}

fn matches(pat: &CTerm, t: &CTerm, env: &mut HashMap<String, CTerm>) -> bool {
    match pat {
        CTerm::ConstRef(n) if METAVARIABLES.contains(&n.as_str()) => match env.get(n) {
            Some(bound) => bound == t,
            None => {
                env.insert(n.clone(), t.clone());
                true
            }
        },
        CTerm::App(p1, p2) => match t {
            CTerm::App(t1, t2) => matches(p1, t1, env) && matches(p2, t2, env),
            _ => false,
        },
        CTerm::Bullet(p) => match t {
            CTerm::Bullet(u) => matches(p, u, env),
            _ => false,
        },
        other => other == t,
    }
}

fn fill(t: &CTerm, env: &HashMap<String, CTerm>) -> CTerm {
    match t {
        CTerm::ConstRef(n) => env.get(n).cloned().unwrap_or_else(|| t.clone()),
        CTerm::App(a, b) => CTerm::app(fill(a, env), fill(b, env)),
        CTerm::Bullet(a) => CTerm::bullet(fill(a, env)),
        other => other.clone(),
    }
}

/// All terms one rewrite step away.
pub fn step(t: &CTerm, rules: &[Rule]) -> Vec<CTerm> {
    let mut out = Vec::new();
    for r in rules {
        let mut env = HashMap::new();
        if matches(&r.lhs, t, &mut env) {
            out.push(fill(&r.rhs, &env));
        }
    }
    match t {
        CTerm::App(a, b) => {
            out.extend(step(a, rules).into_iter().map(|x| CTerm::app(x, (**b).clone())));
            out.extend(step(b, rules).into_iter().map(|x| CTerm::app((**a).clone(), x)));
        }
        CTerm::Bullet(a) => out.extend(step(a, rules).into_iter().map(CTerm::bullet)),
        _ => {}
    }
    out
}

/// Length of a shortest rewrite path between `a` and `b` of at most `depth`
/// steps, searching from both ends; `None` when none was found within the
/// bounds (`max_size` limits intermediate terms, `cap` the visited set).
pub fn rewrite_search(
    a: &CTerm,
    b: &CTerm,
    rules: &[Rule],
    depth: usize,
    max_size: usize,
    cap: usize,
) -> Option<usize> {
    let a = desugar(a);
    let b = desugar(b);
    if a == b {
        return Some(0);
    }
    let mut seen = [HashMap::from([(a.clone(), 0usize)]), HashMap::from([(b.clone(), 0usize)])];
    let mut frontier = [VecDeque::from([a]), VecDeque::from([b])];
    let mut radius = [0usize, 0usize];
    while radius[0] + radius[1] < depth {
        let side = match (frontier[0].is_empty(), frontier[1].is_empty()) {
            (true, true) => return None,
            (false, true) => 0,
            (true, false) => 1,
            _ if frontier[0].len() <= frontier[1].len() => 0,
            _ => 1,
        };
        let mut next = VecDeque::new();
        for t in frontier[side].drain(..) {
            for u in step(&t, rules) {
                if u.size() > max_size || seen[side].contains_key(&u) {
                    continue;
                }
                if let Some(d) = seen[1 - side].get(&u) {
                    return Some(radius[side] + 1 + d);
                }
                if seen[side].len() >= cap {
                    return None;
                }
                seen[side].insert(u.clone(), radius[side] + 1);
                next.push_back(u);
            }
        }
        radius[side] += 1;
        frontier[side] = next;
    }
    None
}
