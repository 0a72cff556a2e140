use operadforge::combinatory::{axiom_suite, AxiomStatus, Signature};
use operadforge::normalizer::DEFAULT_FUEL;

fn run(s: Signature) {
    let report = axiom_suite(s, 32, 0, DEFAULT_FUEL);
    for e in &report.entries {
        if e.status != AxiomStatus::Pass {
            eprintln!("{:?}", e);
        }
    }
    assert!(report.passed(), "{s}");
}

#[test]
fn planar_table() {
    run(Signature::PLANAR);
}

#[test]
fn linear_table() {
    run(Signature::LINEAR);
}

#[test]
fn braided_table() {
    run(Signature::BRAIDED);
}

#[test]
fn cartesian_table() {
    run(Signature::CARTESIAN);
}
