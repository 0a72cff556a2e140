//! The internal operad `IA(m) = { a* o B^m }` of a combinatory algebra, its
//! arities, closed structure and braid action, and the syntax of traces.
//!
//! `B^k` denotes the right-nested chain `B o (B o ...)`, which is also `k`-fold
//! application: `B^k f = B (B (... f))`.

use thiserror::Error;

use crate::braid::BraidWord;
use crate::combinatory::{comb_equal, to_lambda, CTerm, CombError, Prim, Signature, SignatureTag};
use crate::lambda::LTerm;
use crate::normalizer::{normalize, Verdict, DEFAULT_FUEL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error("expected {expected} operands, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("`{elem}` is not in IA({m}) ({verdict})")]
    NotMember { elem: String, m: usize, verdict: Verdict },
    #[error("arity certificate for `{0}` is not checked")]
    Unchecked(String),
    #[error("braid on {got} strands acting on IA({expected})")]
    StrandMismatch { expected: usize, got: usize },
    #[error("group action needs BCI or BC+-I, not {0}")]
    NoAction(String),
    #[error("trace needs an arity at least 1 -> 1, got {m} -> {n}")]
    TraceArity { m: usize, n: usize },
    #[error("normal form not reached: {0}")]
    Fuel(String),
}

fn b() -> CTerm {
    CTerm::Prim(Prim::B)
}

fn i() -> CTerm {
    CTerm::Prim(Prim::I)
}

/// `B o B o ... o B` (`k` factors); `I` for `k = 0`.
pub fn b_power(k: usize) -> CTerm {
    CTerm::compose_all(std::iter::repeat_n(b(), k))
}

/// `B (B (... t))` with `k` applications.
pub fn b_apply(k: usize, t: CTerm) -> CTerm {
    (0..k).fold(t, |acc, _| CTerm::app(b(), acc))
}

/// `a* o B^k`, right-nested.
pub fn bullet_chain(a: CTerm, k: usize) -> CTerm {
    let mut items = vec![CTerm::bullet(a)];
    items.extend(std::iter::repeat_n(b(), k));
    CTerm::compose_all(items)
}

/// `a : m -> n` iff `a* o B^(m+1) = (B a) o B^n`.
pub fn has_arity(a: &CTerm, m: usize, n: usize, s: Signature, fuel: usize) -> Result<Verdict, CombError> {
    let lhs = bullet_chain(a.clone(), m + 1);
    let mut rhs = vec![CTerm::app(b(), a.clone())];
    rhs.extend(std::iter::repeat_n(b(), n));
    comb_equal(&lhs, &CTerm::compose_all(rhs), s, fuel)
}

pub const DEFAULT_ARITY_BOUND: usize = 4;

/// The least `(m + n, m)` with `a : m -> n`, both bounded by `bound`.
pub fn infer_arity(a: &CTerm, bound: usize, s: Signature, fuel: usize) -> Result<Option<(usize, usize)>, CombError> {
    for total in 0..=2 * bound {
        for m in 0..=total.min(bound) {
            let n = total - m;
            if n > bound {
                continue;
            }
            if has_arity(a, m, n, s, fuel)? == Verdict::Equal {
                return Ok(Some((m, n)));
            }
        }
    }
    Ok(None)
}

/// `a ∈ IA(m)` iff `a = (a I)* o B^m`.
pub fn in_internal_operad(a: &CTerm, m: usize, s: Signature, fuel: usize) -> Result<Verdict, CombError> {
    comb_equal(a, &bullet_chain(CTerm::app(a.clone(), i()), m), s, fuel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityCert {
    pub elem: CTerm,
    pub m: usize,
    pub n: usize,
    /// True when the arity equation was decided Equal; false for arities that
    /// are only recorded (trace terms have no λ-image).
    pub checked: bool,
}

impl ArityCert {
    pub fn certify(elem: CTerm, m: usize, n: usize, s: Signature, fuel: usize) -> Result<ArityCert, CombError> {
        let checked = has_arity(&elem, m, n, s, fuel)? == Verdict::Equal;
        Ok(ArityCert { elem, m, n, checked })
    }

    pub fn declared(elem: CTerm, m: usize, n: usize) -> ArityCert {
        ArityCert { elem, m, n, checked: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperadElem {
    pub elem: CTerm,
    pub m: usize,
}

impl OperadElem {
    /// Checks membership in `IA(m)`.
    pub fn new(elem: CTerm, m: usize, s: Signature, fuel: usize) -> Result<OperadElem, OperadError> {
        let verdict = in_internal_operad(&elem, m, s, fuel)?;
        if verdict != Verdict::Equal {
            return Err(OperadError::NotMember { elem: elem.to_string(), m, verdict });
        }
        Ok(OperadElem { elem, m })
    }

    /// `a* o B^m`, a member by construction.
    pub fn from_coefficient(a: CTerm, m: usize) -> OperadElem {
        OperadElem { elem: bullet_chain(a, m), m }
    }

    /// For elements already known to be members.
    pub fn unchecked(elem: CTerm, m: usize) -> OperadElem {
        OperadElem { elem, m }
    }

    /// `id = I ∈ IA(1)`.
    pub fn id() -> OperadElem {
        OperadElem { elem: i(), m: 1 }
    }

    /// `app = B ∈ IA(2)`.
    pub fn app() -> OperadElem {
        OperadElem { elem: b(), m: 2 }
    }

    pub fn verify(&self, s: Signature, fuel: usize) -> Result<(), OperadError> {
        OperadElem::new(self.elem.clone(), self.m, s, fuel).map(|_| ())
    }
}

/// `g(f_1, ..., f_n) = f_1 o (B f_2) o ... o (B^(n-1) f_n) o g`. With `verify`
/// the result's membership is re-checked.
pub fn operad_compose(
    g: &OperadElem,
    fs: &[OperadElem],
    s: Signature,
    verify: bool,
) -> Result<OperadElem, OperadError> {
    if fs.len() != g.m {
        return Err(OperadError::ArityMismatch { expected: g.m, got: fs.len() });
    }
    let mut items: Vec<CTerm> = fs.iter().enumerate().map(|(k, f)| b_apply(k, f.elem.clone())).collect();
    items.push(g.elem.clone());
    let out = OperadElem { elem: CTerm::compose_all(items), m: fs.iter().map(|f| f.m).sum() };
    if verify {
        out.verify(s, DEFAULT_FUEL)?;
    }
    Ok(out)
}

/// `λ(t) = (t I)* o B^m` for `t ∈ IA(m + 1)`.
pub fn closed_lambda(t: &OperadElem) -> Result<OperadElem, OperadError> {
    if t.m == 0 {
        return Err(OperadError::ArityMismatch { expected: 1, got: 0 });
    }
    Ok(OperadElem::from_coefficient(CTerm::app(t.elem.clone(), i()), t.m - 1))
}

/// `a ⊗ b = a o (B^n b)` for `a : m -> n`, `b : p -> q`.
pub fn tensor(a: &ArityCert, b: &ArityCert, s: Signature, fuel: usize) -> Result<ArityCert, OperadError> {
    for c in [a, b] {
        if !c.checked {
            return Err(OperadError::Unchecked(c.elem.to_string()));
        }
    }
    let elem = CTerm::compose(a.elem.clone(), b_apply(a.n, b.elem.clone()));
    Ok(ArityCert::certify(elem, a.m + b.m, a.n + b.n, s, fuel)?)
}

/// The element `w_s` with `f·s = w_s o f`: the letter `±i` is
/// `B^(i-1) C` (signed in the braided case), and the letters act in word
/// order, so `w_s` lists them last letter first.
pub fn action_word(s: &BraidWord, sig: Signature) -> Result<CTerm, OperadError> {
    let items: Vec<CTerm> = s
        .letters()
        .iter()
        .rev()
        .map(|&l| {
            let c = match sig.tag {
                SignatureTag::BCpmI if l > 0 => Prim::CPlus,
                SignatureTag::BCpmI => Prim::CMinus,
                _ => Prim::C,
            };
            b_apply(l.unsigned_abs() as usize - 1, CTerm::Prim(c))
        })
        .collect();
    if items.is_empty() {
        return Ok(i());
    }
    Ok(CTerm::compose_all(items))
}

pub fn group_action(f: &OperadElem, s: &BraidWord, sig: Signature) -> Result<OperadElem, OperadError> {
    if !matches!(sig.tag, SignatureTag::BCI | SignatureTag::BCpmI) {
        return Err(OperadError::NoAction(sig.to_string()));
    }
    if s.strands() != f.m {
        return Err(OperadError::StrandMismatch { expected: f.m, got: s.strands() });
    }
    if s.is_empty() {
        return Ok(f.clone());
    }
    Ok(OperadElem { elem: CTerm::compose(action_word(s, sig)?, f.elem.clone()), m: f.m })
}

/// `(f·s)(g_1..g_k) = (f(g_{s⁻¹(1)}..g_{s⁻¹(k)}))·s[j_1..j_k]`.
pub fn check_equivariance(
    f: &OperadElem,
    gs: &[OperadElem],
    s: &BraidWord,
    sig: Signature,
    fuel: usize,
) -> Result<Verdict, OperadError> {
    if gs.len() != f.m || s.strands() != f.m {
        return Err(OperadError::ArityMismatch { expected: f.m, got: gs.len() });
    }
    let lhs = operad_compose(&group_action(f, s, sig)?, gs, sig, false)?;
    // (f·s) feeds input i of f from position image(i)
    let image = s.permutation();
    let permuted: Vec<OperadElem> = (1..=gs.len()).map(|k| gs[image.apply(k) - 1].clone()).collect();
    let widths: Vec<usize> = gs.iter().map(|g| g.m).collect();
    let cabled = s.cable(&widths).expect("one width per strand");
    let rhs = group_action(&operad_compose(f, &permuted, sig, false)?, &cabled, sig)?;
    Ok(comb_equal(&lhs.elem, &rhs.elem, sig, fuel)?)
}

/// The polynomial map `(F f)(a_1..a_n) = f I a_1 ... a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyEvaluator {
    pub source: OperadElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub expr: CTerm,
    pub normal_form: LTerm,
}

pub fn poly_hom_f(f: &OperadElem) -> PolyEvaluator {
    PolyEvaluator { source: f.clone() }
}

impl PolyEvaluator {
    pub fn arity(&self) -> usize {
        self.source.m
    }

    pub fn evaluate(&self, args: &[CTerm], s: Signature, fuel: usize) -> Result<Evaluation, OperadError> {
        if args.len() != self.arity() {
            return Err(OperadError::ArityMismatch { expected: self.arity(), got: args.len() });
        }
        let expr = CTerm::apps(CTerm::app(self.source.elem.clone(), i()), args.iter().cloned());
        let d = s.discipline();
        let normal_form = normalize(&to_lambda(&expr, d)?, d, fuel).map_err(|e| OperadError::Fuel(e.to_string()))?;
        Ok(Evaluation { expr, normal_form })
    }
}

/// The pair `M+ = C+ o B`, `M- = C- o B` in `IA(2)`: distinct elements with the
/// same polynomial map `(a1, a2) ↦ a2 a1`.
pub fn non_faithful_pair() -> (OperadElem, OperadElem) {
    let m = |c| OperadElem { elem: CTerm::compose(CTerm::Prim(c), b()), m: 2 };
    (m(Prim::CPlus), m(Prim::CMinus))
}

// ---------------------------------------------------------------------------
// traces

/// `Tr f` for `f : (m+1) -> (n+1)`, recorded as `m -> n`.
pub fn trace_syntax(f: &ArityCert, s: Signature) -> Result<ArityCert, OperadError> {
    if !s.trace_extension {
        return Err(CombError::TraceNotAllowed.into());
    }
    if f.m == 0 || f.n == 0 {
        return Err(OperadError::TraceArity { m: f.m, n: f.n });
    }
    Ok(ArityCert::declared(CTerm::app(CTerm::Prim(Prim::Tr), f.elem.clone()), f.m - 1, f.n - 1))
}

fn traced_signature(tag: SignatureTag) -> Signature {
    Signature::new(tag, true).expect("trace on BCI or BC+-I")
}

/// `η = Tr (Tr o (B Tr) o (B C) o C) : 0 -> 2` and
/// `ε = Tr (C o (B C) o (B B) o B) : 2 -> 0`.
pub fn eta_eps() -> (ArityCert, ArityCert) {
    let s = traced_signature(SignatureTag::BCI);
    let tr = || CTerm::Prim(Prim::Tr);
    let c = || CTerm::Prim(Prim::C);
    let eta_inner = CTerm::compose_all([tr(), CTerm::app(b(), tr()), CTerm::app(b(), c()), c()]);
    let eps_inner = CTerm::compose_all([c(), CTerm::app(b(), c()), CTerm::app(b(), b()), b()]);
    let eta = trace_syntax(&ArityCert::declared(eta_inner, 1, 3), s).expect("η arity");
    let eps = trace_syntax(&ArityCert::declared(eps_inner, 3, 1), s).expect("ε arity");
    (eta, eps)
}

/// The closure of the braid `σ1³` as a double trace of `C+ o C+ o C+ : 2 -> 2`.
pub fn trefoil() -> ArityCert {
    let s = traced_signature(SignatureTag::BCpmI);
    let cp = || CTerm::Prim(Prim::CPlus);
    let inner = ArityCert::certify(CTerm::compose_all([cp(), cp(), cp()]), 2, 2, Signature::BRAIDED, DEFAULT_FUEL)
        .expect("C+ chain is a braided term");
    let once = trace_syntax(&inner, s).expect("2 -> 2 traces");
    trace_syntax(&once, s).expect("1 -> 1 traces")
}

/// The unit map `t ↦ app(...app(t·I, id)..., id)` with `m` applications.
pub fn unit_map_expression(t: &CTerm, m: usize) -> String {
    let mut out = format!("{t}·I");
    if matches!(t, CTerm::App(..) | CTerm::Compose(..)) {
        out = format!("({t})·I");
    }
    for _ in 0..m {
        out = format!("app({out}, id)");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatory::parse_comb;

    fn c(s: &str) -> CTerm {
        parse_comb(s).unwrap()
    }

    #[test]
    fn b_powers() {
        assert_eq!(b_power(0), c("I"));
        assert_eq!(b_power(3), c("B o B o B"));
        assert_eq!(b_apply(2, c("a")), c("B (B a)"));
        assert_eq!(bullet_chain(c("a"), 2), c("a* o B o B"));
    }

    #[test]
    fn table_arities() {
        let f = DEFAULT_FUEL;
        assert_eq!(infer_arity(&c("B"), 4, Signature::PLANAR, f).unwrap(), Some((2, 1)));
        assert_eq!(infer_arity(&c("I"), 4, Signature::PLANAR, f).unwrap(), Some((0, 0)));
        assert_eq!(infer_arity(&c("K"), 4, Signature::CARTESIAN, f).unwrap(), Some((1, 0)));
    }

    #[test]
    fn trace_printing() {
        let t = trefoil();
        assert_eq!(t.elem.to_string(), "Tr (Tr (C+ o C+ o C+))");
        assert_eq!((t.m, t.n), (0, 0));
        let (eta, eps) = eta_eps();
        assert_eq!(eta.elem.to_string(), "Tr (Tr o (B Tr) o (B C) o C)");
        assert_eq!(eps.elem.to_string(), "Tr (C o (B C) o (B B) o B)");
        assert_eq!((eta.m, eta.n, eps.m, eps.n), (0, 2, 2, 0));
        assert_eq!(unit_map_expression(&c("t"), 2), "app(app(t·I, id), id)");
    }
}
