//! One test per acceptance criterion; each prints a single pass/fail line.

use icorr::suite::*;

fn assert_criterion(r: CriterionReport) {
    println!(
        "criterion {:>2} ({}): {}",
        r.index,
        r.name,
        if r.ok { "PASS" } else { "FAIL" }
    );
    assert!(r.ok, "criterion {} ({}) failed:\n  {}", r.index, r.name, r.details.join("\n  "));
}

#[test]
fn criterion_01_printed_series() {
    assert_criterion(criterion_1());
}

#[test]
fn criterion_02_closed_form_fixtures() {
    assert_criterion(criterion_2());
}

#[test]
fn criterion_03_route_equivalence() {
    assert_criterion(criterion_3());
}

#[test]
fn criterion_04_ode_sweep() {
    assert_criterion(criterion_4());
}

#[test]
fn criterion_05_cosgrove_okamoto() {
    assert_criterion(criterion_5());
}

#[test]
fn criterion_06_factorization() {
    assert_criterion(criterion_6());
}

#[test]
fn criterion_07_boundary_recursion() {
    assert_criterion(criterion_7());
}

#[test]
fn criterion_08_identity_suites() {
    assert_criterion(criterion_8());
}

#[test]
fn criterion_09_symmetry() {
    assert_criterion(criterion_9());
}

#[test]
fn criterion_10_negative_controls() {
    assert_criterion(criterion_10());
}
