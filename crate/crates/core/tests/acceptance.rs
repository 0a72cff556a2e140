//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use common::{all_words, ball, closed_term, reference_nf, relator_search_trivial};
use operadforge::braid::BraidWord;
use operadforge::combinatory::{
    axiom_suite, axioms, comb_equal, derive_classical_s, parse_comb, sample_elements, to_lambda, AxiomStatus, CTerm,
    CombError, Signature,
};
use operadforge::lambda::{Discipline, LTerm};
use operadforge::normalizer::{lam_equal, Verdict, DEFAULT_FUEL};
use operadforge::operad::*;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(s: &str) -> CTerm {
    parse_comb(s).unwrap()
}

fn bw(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn verdict(a: &CTerm, b: &CTerm, s: Signature) -> Result<Verdict, String> {
    comb_equal(a, b, s, DEFAULT_FUEL).map_err(|e| e.to_string())
}

fn expect(a: &CTerm, b: &CTerm, s: Signature, want: Verdict) -> Result<(), String> {
    let v = verdict(a, b, s)?;
    check(v == want, || format!("{a} = {b} in {s}: {v}, expected {want}"))
}

fn braid_relations() -> Outcome {
    for (l, r) in [("{4; 1 3}", "{4; 3 1}"), ("{4; 1 2 1}", "{4; 2 1 2}"), ("{4; 2 3 2}", "{4; 3 2 3}")] {
        check(bw(l).equals(&bw(r)).unwrap(), || format!("{l} != {r}"))?;
    }
    check(!bw("{2; 1}").equals(&bw("{2; -1}")).unwrap(), || "σ1 = σ1⁻¹ in B2".into())?;
    let identity = ball(vec![], 3);
    let words = all_words(4);
    let mut trivial = 0;
    for w in &words {
        let oracle = relator_search_trivial(w, &identity);
        let word = BraidWord::new(3, w.clone()).unwrap();
        check(word.is_trivial() == oracle, || format!("{word}: handle reduction disagrees with relator search"))?;
        trivial += oracle as usize;
    }
    Ok(format!("{} B3 words, {trivial} trivial", words.len()))
}

fn cabling() -> Outcome {
    let cabled = bw("{3; -2 1}").cable(&[1, 2, 1]).unwrap();
    check(cabled.equals(&bw("{4; -3 2 1}")).unwrap(), || format!("got {cabled}"))?;
    Ok(format!("{cabled}"))
}

fn suite(s: Signature, names: Option<&[&str]>) -> Outcome {
    let report = axiom_suite(s, 32, 0, DEFAULT_FUEL);
    if let Some(names) = names {
        let got: BTreeSet<&str> = report.entries.iter().map(|e| e.axiom.as_str()).collect();
        let want: BTreeSet<&str> = names.iter().copied().collect();
        check(got == want, || format!("rows {got:?}, expected {want:?}"))?;
    }
    for e in &report.entries {
        check(e.status == AxiomStatus::Pass, || format!("{} {:?}: {} vs {}", e.axiom, e.status, e.lhs_nf, e.rhs_nf))?;
    }
    Ok(format!("{} rows pass", report.entries.len()))
}

fn planar_suite() -> Outcome {
    suite(Signature::PLANAR, Some(&["(BI)", "(app*)", "(B*)", "(I*)", "(**)"]))
}

fn linear_suite() -> Outcome {
    suite(
        Signature::LINEAR,
        Some(&["(B)", "(C)", "(I)", "(lambda)", "(rho)", "(alpha)", "(cox1)", "(cox2)", "(cox3)", "(bc)"]),
    )
}

fn braided_suite() -> Outcome {
    let names: Vec<String> = axioms(Signature::BRAIDED).into_iter().map(|a| a.name).collect();
    for base in ["(C2)", "(cox1)", "(cox2)", "(cox3)", "(bc)"] {
        check(names.iter().any(|n| n.starts_with(base)), || format!("{base} missing"))?;
    }
    suite(Signature::BRAIDED, None)
}

fn cartesian_suite() -> Outcome {
    let table = suite(Signature::CARTESIAN, None)?;
    let s = Signature::CARTESIAN;
    let sc = derive_classical_s();
    let xs = sample_elements(96, 0);
    for k in 0..32 {
        let (a, b, d) = (&xs[3 * k], &xs[3 * k + 1], &xs[3 * k + 2]);
        let lhs = CTerm::apps(sc.clone(), [a.clone(), b.clone(), d.clone()]);
        let rhs = CTerm::apps(a.clone(), [d.clone(), CTerm::app(b.clone(), d.clone())]);
        expect(&lhs, &rhs, s, Verdict::Equal)?;
        expect(&CTerm::apps(c("K"), [a.clone(), b.clone()]), a, s, Verdict::Equal)?;
    }
    Ok(format!("{table}; S = {sc} certified"))
}

fn arity_table() -> Outcome {
    let s = Signature::CARTESIAN;
    let sc = derive_classical_s().to_string();
    let rows = [("I", (0, 0)), ("B", (2, 1)), ("C", (2, 2)), (sc.as_str(), (2, 2)), ("K", (1, 0)), ("W", (1, 2))];
    let infer = |t: &CTerm, bound| infer_arity(t, bound, s, DEFAULT_FUEL).map_err(|e| e.to_string());
    for (t, want) in rows {
        let got = infer(&c(t), DEFAULT_ARITY_BOUND)?;
        check(got == Some(want), || format!("{t}: {got:?}, expected {want:?}"))?;
    }
    for p in sample_elements(5, 1) {
        let got = infer(&CTerm::bullet(p.clone()), DEFAULT_ARITY_BOUND)?;
        check(got == Some((0, 1)), || format!("({p})*: {got:?}"))?;
    }
    // λxy.y x = C I has no arity
    let swap = c("C I");
    let img = to_lambda(&swap, Discipline::Linear).map_err(|e| e.to_string())?;
    let target = operadforge::lambda::parse(r"\x y. y x").unwrap();
    check(lam_equal(&img, &target, Discipline::Linear, DEFAULT_FUEL) == Verdict::Equal, || "C I".into())?;
    let got = infer(&swap, 3)?;
    check(got.is_none(), || format!("λxy.y x: {got:?}"))?;
    Ok("7 rows and 5 bullets reproduced".into())
}

/// The closed λ-term `c` with the constant `hole` replaced by `m`.
fn plug(c: &CTerm, m: &LTerm) -> LTerm {
    let t = to_lambda(c, Discipline::Planar).expect("planar combinators");
    t.instantiate(&|name| (name == "hole").then(|| m.clone()))
}

/// `M f x_1 .. x_k` normalizes to `f N` with `f` not in `N`: the head form
/// `λ f x_1..x_k. f N`, decided by the reference normalizer.
fn head_form(m: &LTerm, k: usize) -> bool {
    let args = std::iter::once(LTerm::constant("hf")).chain((0..k).map(|i| LTerm::constant(format!("hx{i}"))));
    match reference_nf(&LTerm::apps(m.clone(), args), 10_000) {
        Some(LTerm::App(f, n)) => *f == LTerm::constant("hf") && !n.constants().contains(&"hf".to_string()),
        _ => false,
    }
}

fn arity_equivalence() -> Outcome {
    let hole = CTerm::constant("hole");
    let mut terms = Vec::new();
    let mut seed = 0;
    while terms.len() < 200 {
        let t = closed_term(Discipline::Planar, 10, seed);
        seed += 1;
        if t.node_count() <= 25 {
            terms.push(t);
        }
    }
    let counts: Result<Vec<[usize; 4]>, String> = terms
        .par_iter()
        .map(|t| {
            let mut members = [0usize; 4];
            for (m, slot) in members.iter_mut().enumerate() {
                let witness = head_form(t, m);
                let a = plug(&bullet_chain(CTerm::app(hole.clone(), c("I")), m), t);
                let member = lam_equal(&a, t, Discipline::Planar, DEFAULT_FUEL) == Verdict::Equal;
                let lhs = plug(&bullet_chain(hole.clone(), m + 1), t);
                let rhs = plug(&CTerm::compose(CTerm::app(c("B"), hole.clone()), c("B")), t);
                let arity = lam_equal(&lhs, &rhs, Discipline::Planar, DEFAULT_FUEL) == Verdict::Equal;
                check(witness == member && member == arity, || {
                    format!("{t} at m = {m}: head form {witness}, membership {member}, arity {arity}")
                })?;
                *slot = member as usize;
            }
            Ok(members)
        })
        .collect();
    let totals = counts?.iter().fold([0; 4], |acc, c| [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2], acc[3] + c[3]]);
    check(totals.iter().sum::<usize>() > 0, || "no term of any arity m -> 1 was generated".into())?;
    Ok(format!("200 terms agree; members of IA(0..3): {totals:?}"))
}

fn operad_laws() -> Outcome {
    let xs = sample_elements(96, 2);
    let s = Signature::PLANAR;
    let results: Result<Vec<()>, String> = (0..32)
        .into_par_iter()
        .map(|k| {
            let m = k % 3;
            let (a, b, d) = (&xs[3 * k], &xs[3 * k + 1], &xs[3 * k + 2]);
            let g = OperadElem::from_coefficient(a.clone(), 2);
            let f1 = OperadElem::from_coefficient(b.clone(), m);
            let f2 = OperadElem::from_coefficient(d.clone(), 1);
            let oc = |g: &OperadElem, fs: &[OperadElem]| operad_compose(g, fs, s, false).map_err(|e| e.to_string());
            // unit
            expect(&oc(&g, &[OperadElem::id(), OperadElem::id()])?.elem, &g.elem, s, Verdict::Equal)?;
            expect(&oc(&OperadElem::id(), std::slice::from_ref(&g))?.elem, &g.elem, s, Verdict::Equal)?;
            // associativity
            let hs: Vec<OperadElem> =
                (0..m + 1).map(|i| OperadElem::from_coefficient(xs[(k + i) % 96].clone(), 1)).collect();
            let left = oc(&oc(&g, &[f1.clone(), f2.clone()])?, &hs)?;
            let right = oc(&g, &[oc(&f1, &hs[..m])?, oc(&f2, &hs[m..])?])?;
            expect(&left.elem, &right.elem, s, Verdict::Equal)?;
            // closedness round trips
            let t = OperadElem::from_coefficient(a.clone(), m + 1);
            let lt = closed_lambda(&t).map_err(|e| e.to_string())?;
            expect(&CTerm::compose(lt.elem, c("B")), &t.elem, s, Verdict::Equal)?;
            let x = OperadElem::from_coefficient(b.clone(), m);
            let xb = OperadElem::unchecked(CTerm::compose(x.elem.clone(), c("B")), m + 1);
            expect(&closed_lambda(&xb).map_err(|e| e.to_string())?.elem, &x.elem, s, Verdict::Equal)?;
            // exchange law (B^m n) o a = a o (B n) for a : m -> 1
            let exch_l = CTerm::compose(b_apply(m, d.clone()), x.elem.clone());
            let exch_r = CTerm::compose(x.elem.clone(), b_apply(1, d.clone()));
            expect(&exch_l, &exch_r, s, Verdict::Equal)
        })
        .collect();
    results?;
    Ok("unit, associativity, closedness and exchange on 32 samples".into())
}

fn non_faithfulness() -> Outcome {
    let s = Signature::BRAIDED;
    let (mp, mm) = non_faithful_pair();
    expect(&mp.elem, &mm.elem, s, Verdict::NotEqual)?;
    let xs = sample_elements(64, 3);
    for k in 0..32 {
        let (a1, a2) = (xs[2 * k].clone(), xs[2 * k + 1].clone());
        let want = to_lambda(&CTerm::app(a2.clone(), a1.clone()), Discipline::Braided).unwrap();
        for f in [&mp, &mm] {
            let ev = poly_hom_f(f).evaluate(&[a1.clone(), a2.clone()], s, DEFAULT_FUEL).map_err(|e| e.to_string())?;
            let v = lam_equal(&ev.normal_form, &want, Discipline::Braided, DEFAULT_FUEL);
            check(v == Verdict::Equal, || format!("F({})({a1}, {a2}) = {}: {v}", f.elem, ev.normal_form))?;
        }
    }
    Ok(format!("{} != {}, same map on 32 pairs", mp.elem, mm.elem))
}

fn words(k: usize, max_len: usize) -> Vec<BraidWord> {
    let letters: Vec<i32> = (1..k as i32).flat_map(|i| [i, -i]).collect();
    let mut out = vec![BraidWord::identity(k)];
    let mut layer = vec![Vec::<i32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                out.push(BraidWord::new(k, v.clone()).unwrap());
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

fn equivariance() -> Outcome {
    let s = Signature::BRAIDED;
    let mut cases = Vec::new();
    for sample in 0..8u64 {
        let xs = sample_elements(4, 100 + sample);
        for k in 1..=3usize {
            let f = OperadElem::from_coefficient(xs[0].clone(), k);
            for code in 0..3usize.pow(k as u32) {
                let js: Vec<usize> = (0..k).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                let gs: Vec<OperadElem> =
                    js.iter().enumerate().map(|(i, &j)| OperadElem::from_coefficient(xs[i + 1].clone(), j)).collect();
                for w in words(k, 2) {
                    cases.push((f.clone(), gs.clone(), w));
                }
            }
        }
    }
    let total = cases.len();
    cases.par_iter().try_for_each(|(f, gs, w)| {
        let v = check_equivariance(f, gs, w, s, DEFAULT_FUEL).map_err(|e| e.to_string())?;
        let widths: Vec<usize> = gs.iter().map(|g| g.m).collect();
        check(v == Verdict::Equal, || format!("{w} with widths {widths:?} on {}: {v}", f.elem))
    })?;
    Ok(format!("{total} instances"))
}

fn trace_syntax_criterion() -> Outcome {
    let tre = trefoil();
    check(tre.elem.to_string() == "Tr (Tr (C+ o C+ o C+))", || format!("trefoil prints {}", tre.elem))?;
    check((tre.m, tre.n) == (0, 0), || format!("trefoil arity {} -> {}", tre.m, tre.n))?;
    let inner = ArityCert::certify(c("C+ o C+ o C+"), 2, 2, Signature::BRAIDED, DEFAULT_FUEL).unwrap();
    check(inner.checked, || "C+ o C+ o C+ is not 2 -> 2".into())?;
    let (eta, eps) = eta_eps();
    check(eta.elem.to_string() == "Tr (Tr o (B Tr) o (B C) o C)", || format!("η prints {}", eta.elem))?;
    check(eps.elem.to_string() == "Tr (C o (B C) o (B B) o B)", || format!("ε prints {}", eps.elem))?;
    check((eta.m, eta.n, eps.m, eps.n) == (0, 2, 2, 0), || "η/ε arities".into())?;
    let traced = Signature::BRAIDED.with_trace().unwrap();
    let refused = comb_equal(&tre.elem, &tre.elem, traced, DEFAULT_FUEL);
    check(matches!(refused, Err(CombError::TraceEquality)), || format!("equality on Tr gave {refused:?}"))?;
    Ok("trefoil 0 -> 0, η 0 -> 2, ε 2 -> 0; equality refused".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("braid relations", braid_relations),
        ("cabling", cabling),
        ("planar axiom suite", planar_suite),
        ("linear axiom suite", linear_suite),
        ("braided axiom suite", braided_suite),
        ("cartesian axiom suite", cartesian_suite),
        ("arity table", arity_table),
        ("arity characterizations agree", arity_equivalence),
        ("internal operad laws", operad_laws),
        ("non-faithfulness", non_faithfulness),
        ("equivariance", equivariance),
        ("trace syntax", trace_syntax_criterion),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}) [{secs:.2}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
