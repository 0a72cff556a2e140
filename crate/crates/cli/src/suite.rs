//! The library-level checks of the acceptance corpus. The checks that need an
//! independent oracle live in the core crate's `acceptance` test.

use operadforge::braid::BraidWord;
use operadforge::combinatory::{
    axiom_suite, comb_equal, derive_classical_s, parse_comb, sample_elements, AxiomStatus, CTerm, Signature,
};
use operadforge::normalizer::Verdict;
use operadforge::operad::{
    check_equivariance, eta_eps, infer_arity, non_faithful_pair, trefoil, OperadElem, DEFAULT_ARITY_BOUND,
};
use rayon::prelude::*;
use serde_json::json;

use crate::{Failure, Outcome, RunConfig};

type Check = Result<String, String>;
type Named = (&'static str, Box<dyn Fn() -> Check + Send + Sync>);

fn bw(s: &str) -> BraidWord {
    s.parse().expect("built-in braid word")
}

fn c(s: &str) -> CTerm {
    parse_comb(s).expect("built-in term")
}

fn braid_relations() -> Check {
    for (l, r) in [("{4; 1 3}", "{4; 3 1}"), ("{4; 1 2 1}", "{4; 2 1 2}"), ("{4; 2 3 2}", "{4; 3 2 3}")] {
        if !bw(l).equals(&bw(r)).unwrap() {
            return Err(format!("{l} != {r}"));
        }
    }
    if bw("{2; 1}").equals(&bw("{2; -1}")).unwrap() {
        return Err("σ1 = σ1⁻¹".into());
    }
    Ok("three B4 relations hold, σ1 != σ1⁻¹".into())
}

fn cabling() -> Check {
    let cabled = bw("{3; -2 1}").cable(&[1, 2, 1]).map_err(|e| e.to_string())?;
    match cabled.equals(&bw("{4; -3 2 1}")) {
        Ok(true) => Ok(cabled.to_string()),
        _ => Err(format!("cable gave {cabled}")),
    }
}

fn axioms(s: Signature, cfg: RunConfig) -> Check {
    let report = axiom_suite(s, cfg.samples, cfg.seed, cfg.fuel);
    match report.entries.iter().find(|e| e.status != AxiomStatus::Pass) {
        None => Ok(format!("{} rows pass", report.entries.len())),
        Some(e) => Err(format!("{} is {:?}", e.axiom, e.status)),
    }
}

fn arity_table(cfg: RunConfig) -> Check {
    let sc = derive_classical_s();
    let rows = [(c("I"), (0, 0)), (c("B"), (2, 1)), (c("C"), (2, 2)), (sc, (2, 2)), (c("K"), (1, 0)), (c("W"), (1, 2))];
    for (t, want) in rows {
        let got = infer_arity(&t, DEFAULT_ARITY_BOUND, Signature::CARTESIAN, cfg.fuel).map_err(|e| e.to_string())?;
        if got != Some(want) {
            return Err(format!("{t}: {got:?}, expected {want:?}"));
        }
    }
    match infer_arity(&c("C I"), 3, Signature::CARTESIAN, cfg.fuel) {
        Ok(None) => Ok("I, B, C, S, K, W reproduced; C I has none".into()),
        other => Err(format!("C I: {other:?}")),
    }
}

fn non_faithfulness(cfg: RunConfig) -> Check {
    let (mp, mm) = non_faithful_pair();
    match comb_equal(&mp.elem, &mm.elem, Signature::BRAIDED, cfg.fuel) {
        Ok(Verdict::NotEqual) => Ok(format!("{} != {}", mp.elem, mm.elem)),
        other => Err(format!("{other:?}")),
    }
}

fn equivariance(cfg: RunConfig) -> Check {
    let xs = sample_elements(4, cfg.seed);
    let mut count = 0;
    for k in 1..=3usize {
        let f = OperadElem::from_coefficient(xs[0].clone(), k);
        let gs: Vec<OperadElem> = (0..k).map(|i| OperadElem::from_coefficient(xs[i + 1].clone(), i % 3)).collect();
        let letters: Vec<i32> = (1..k as i32).flat_map(|i| [i, -i]).collect();
        let words =
            std::iter::once(BraidWord::identity(k)).chain(letters.iter().map(|&l| BraidWord::new(k, vec![l]).unwrap()));
        for w in words {
            let v = check_equivariance(&f, &gs, &w, Signature::BRAIDED, cfg.fuel).map_err(|e| e.to_string())?;
            if v != Verdict::Equal {
                return Err(format!("{w}: {v}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} instances"))
}

fn traces() -> Check {
    let t = trefoil();
    let (eta, eps) = eta_eps();
    let got =
        [(t.elem.to_string(), t.m, t.n), (eta.elem.to_string(), eta.m, eta.n), (eps.elem.to_string(), eps.m, eps.n)];
    let want = [
        ("Tr (Tr (C+ o C+ o C+))", 0, 0),
        ("Tr (Tr o (B Tr) o (B C) o C)", 0, 2),
        ("Tr (C o (B C) o (B B) o B)", 2, 0),
    ];
    for (g, w) in got.iter().zip(want) {
        if (g.0.as_str(), g.1, g.2) != w {
            return Err(format!("{} : {} -> {}", g.0, g.1, g.2));
        }
    }
    Ok("trefoil 0 -> 0, η 0 -> 2, ε 2 -> 0".into())
}

pub fn run(cfg: RunConfig) -> Outcome {
    let checks: Vec<Named> = vec![
        ("braid-relations", Box::new(braid_relations)),
        ("cabling", Box::new(cabling)),
        ("axioms-planar", Box::new(move || axioms(Signature::PLANAR, cfg))),
        ("axioms-linear", Box::new(move || axioms(Signature::LINEAR, cfg))),
        ("axioms-braided", Box::new(move || axioms(Signature::BRAIDED, cfg))),
        ("axioms-cartesian", Box::new(move || axioms(Signature::CARTESIAN, cfg))),
        ("arity-table", Box::new(move || arity_table(cfg))),
        ("non-faithfulness", Box::new(move || non_faithfulness(cfg))),
        ("equivariance", Box::new(move || equivariance(cfg))),
        ("trace-syntax", Box::new(traces)),
    ];
    let mut results: Vec<(&str, Check)> = checks.into_par_iter().map(|(name, f)| (name, f())).collect();
    results.sort_by_key(|(name, _)| *name);
    if cfg.json {
        let rows: Vec<_> = results
            .iter()
            .map(|(name, r)| match r {
                Ok(d) => json!({ "name": name, "pass": true, "detail": d }),
                Err(d) => json!({ "name": name, "pass": false, "detail": d }),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).expect("report serializes"));
    } else {
        for (name, r) in &results {
            match r {
                Ok(d) => println!("pass {name}: {d}"),
                Err(d) => println!("FAIL {name}: {d}"),
            }
        }
    }
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    if failed > 0 {
        return Err(Failure::failed(format!("{failed} checks fail")));
    }
    Ok(())
}
