//! The acceptance gate: one test per criterion, each printing its verdict
//! line. Run with `cargo test -p carshare --test acceptance -- --nocapture`
//! to see the lines; `carshare verify` prints the same battery.

use carshare::acceptance::{
    criterion_1, criterion_10, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, CriterionOutcome,
};

fn gate(outcome: CriterionOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_gba_tightness() {
    gate(criterion_1());
}

#[test]
fn criterion_02_argba_tightness() {
    gate(criterion_2());
}

#[test]
fn criterion_03_prgba_tightness() {
    gate(criterion_3());
}

#[test]
fn criterion_04_prargba_tightness() {
    gate(criterion_4());
}

#[test]
fn criterion_05_agba_tightness() {
    gate(criterion_5());
}

#[test]
fn criterion_06_oracle_equivalence() {
    gate(criterion_6());
}

#[test]
fn criterion_07_induction_suite() {
    gate(criterion_7());
}

#[test]
fn criterion_08_exhaustive_no_violation() {
    gate(criterion_8());
}

#[test]
fn criterion_09_lemma_suite() {
    gate(criterion_9());
}

#[test]
fn criterion_10_monte_carlo_coherence() {
    gate(criterion_10());
}
