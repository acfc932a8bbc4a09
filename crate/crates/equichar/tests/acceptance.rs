//! End-to-end acceptance checks: each test runs one property suite over
//! the seeded catalogs and prints a single pass/fail line.

use equichar::harness::{self, SuiteOutcome};

const SEED: u64 = 0x5eed_0001;

fn report(outcome: SuiteOutcome) {
    let status = if outcome.passed() { "pass" } else { "FAIL" };
    println!("[{status}] {} ({} cases)", outcome.name, outcome.cases);
    for f in outcome.failures.iter().take(10) {
        println!("        failed: {f}");
    }
    assert!(
        outcome.passed(),
        "{} failed on {} of {} cases",
        outcome.name,
        outcome.failures.len(),
        outcome.cases
    );
}

#[test]
fn coinduction_traces_match_the_raw_enumeration() {
    report(harness::suite_coinduction_oracle(SEED));
}

#[test]
fn mackey_decomposition_holds_for_all_subgroup_pairs() {
    report(harness::suite_mackey(SEED));
}

#[test]
fn adjunction_units_and_counits_invert_exactly_when_expected() {
    report(harness::suite_adjunction());
}

#[test]
fn untwisting_trace_identity_holds_over_the_full_window() {
    report(harness::suite_scholie());
}

#[test]
fn untwisting_criterion_agrees_with_direct_compatibility() {
    report(harness::suite_descent_criterion(SEED));
}

#[test]
fn truncated_checks_agree_with_full_checks() {
    report(harness::suite_truncation(SEED));
}

#[test]
fn compatibility_is_closed_under_the_operations() {
    report(harness::suite_closure(SEED));
}

#[test]
fn inertia_invariants_match_the_projector_formula() {
    report(harness::suite_inertia_invariants(SEED));
}

#[test]
fn duality_is_an_involution_and_exchanges_pushforwards() {
    report(harness::suite_duality());
}

#[test]
fn point_homomorphisms_have_the_predicted_images() {
    report(harness::suite_point_homs());
}
