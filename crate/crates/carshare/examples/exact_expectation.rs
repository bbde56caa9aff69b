//! Exact expected profit by coin-branch enumeration, cross-checked by a
//! seeded Monte Carlo run on the same fixture.

use carshare::fixtures;
use carshare::harness::{exact_expectation, monte_carlo, DEFAULT_COIN_LIMIT};
use carshare::policies::PolicyId;
use carshare::rat::{parse_rat, rat_to_f64};

fn main() {
    for (policy, name) in [
        (PolicyId::PrGba, "prgba_k5"),
        (PolicyId::PrArgba, "thm8_k2"),
        (PolicyId::Agba, "agba_k100"),
    ] {
        let instance = fixtures::load(name).unwrap();
        let exact = exact_expectation(policy, &instance, DEFAULT_COIN_LIMIT).unwrap();
        let mc = monte_carlo(policy, &instance, 100_000, 7);
        let exact_mean = rat_to_f64(&parse_rat(&exact.alg).unwrap());
        println!("{policy} on {name}:");
        println!("  exact  E[alg] = {} = {exact_mean:.6}", exact.alg);
        println!("  exact  ratio  = {} (opt {})", exact.ratio, exact.opt);
        println!(
            "  monte  mean   = {:.6} +- {:.6} (99% CI [{:.6}, {:.6}], {} trials, seed {})",
            mc.mean, mc.std_error, mc.ci99_lo, mc.ci99_hi, mc.trials, mc.seed
        );
        assert!((mc.mean - exact_mean).abs() <= 3.0 * mc.std_error);
        println!();
    }

    // per-stage expected decisions are part of the report
    let instance = fixtures::load("prgba_k5").unwrap();
    let report = exact_expectation(PolicyId::PrGba, &instance, DEFAULT_COIN_LIMIT).unwrap();
    println!("per-stage expected decisions on prgba_k5:");
    for (i, row) in report.stages.iter().enumerate() {
        println!("  stage {}: demand ({}, {}) -> E ({}, {})", i + 1, row.il, row.ir, row.gl, row.gr);
    }
}
