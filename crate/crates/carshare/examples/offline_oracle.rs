//! The exact offline optimum: DP result, witness schedule, validation, and
//! the brute-force enumerator agreeing with the DP on a small instance.

use carshare::model::StageDecision;
use carshare::oracle::{enumerate_schedules, opt_dp, validate_schedule};
use carshare::{Instance, StageDemand};

fn main() {
    let instance = Instance::simultaneous(
        4,
        vec![StageDemand::new(4, 4), StageDemand::new(4, 0), StageDemand::new(0, 4)],
    )
    .unwrap();
    println!("instance: {}", instance.to_json());

    let res = opt_dp(&instance);
    println!("optimum profit: {}", res.profit);
    println!("witness (ol, or, idle) per stage:");
    for (i, (ol, or, of)) in res.per_stage().iter().enumerate() {
        println!("  stage {}: ({ol}, {or}, {of})", i + 1);
    }
    assert!(validate_schedule(&instance, &res.schedule).is_ok());

    // cross-check against every feasible schedule
    let all = enumerate_schedules(instance.k(), &instance.demands(), 1 << 32).unwrap();
    let best = all.iter().map(|s| s.profit()).max().unwrap();
    println!("enumerated {} feasible schedules, max profit {best}", all.len());
    assert_eq!(best, res.profit);

    // the validator names the first violated bound
    let bad = carshare::Schedule::new(4, vec![StageDecision::new(4, 0); 3]);
    match bad {
        Ok(s) => println!("validation: {:?}", validate_schedule(&instance, &s)),
        Err(e) => println!("rejected at construction: {e}"),
    }
}
