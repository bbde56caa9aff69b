//! The six-sequence induction trace on a worst-case instance: the online
//! side must dominate delta times the offline side at every stage, for
//! every feasible offline schedule.

use carshare::fixtures;
use carshare::harness::{
    check_all_offline_schedules, expected_rows, induction_check, realized_load, theorem_delta,
    DEFAULT_COIN_LIMIT,
};
use carshare::oracle::opt_dp;
use carshare::policies::PolicyId;
use carshare::rat::format_rat;

fn main() {
    let instance = fixtures::load("thm6_k4").unwrap();
    let policy = PolicyId::Gba;
    let k = instance.k();
    let load = realized_load(&instance);
    let delta = theorem_delta(policy, k, &load);
    println!("instance: {}", instance.to_json());
    println!("policy {policy}, delta = {}\n", format_rat(&delta));

    let (rows, _) = expected_rows(policy, &instance, DEFAULT_COIN_LIMIT).unwrap();
    let opt = opt_dp(&instance);
    let trace = induction_check(&instance, &rows, &opt.schedule, delta.clone()).unwrap();

    println!("stage |     A     B |     X     Y |     U     V");
    for i in 0..trace.a.len() {
        println!(
            "{:5} | {:>5} {:>5} | {:>5} {:>5} | {:>5} {:>5}",
            i + 1,
            format_rat(&trace.a[i]),
            format_rat(&trace.b[i]),
            format_rat(&trace.x[i]),
            format_rat(&trace.y[i]),
            format_rat(&trace.u[i]),
            format_rat(&trace.v[i]),
        );
    }

    // the same inequalities hold against every feasible offline schedule,
    // not just the optimum
    let checked = check_all_offline_schedules(k, &instance.demands(), &rows, &delta).unwrap();
    println!("\nall {checked} feasible offline schedules satisfy the three inequalities");

    // a delta of 1 is impossible here: the adversary instance costs 4/3
    let err = check_all_offline_schedules(k, &instance.demands(), &rows, &carshare::rat::rat(1, 1)).unwrap_err();
    println!(
        "delta = 1 breaks: {} at stage {} against offline {:?}",
        err.inequality, err.stage, err.offline
    );
}
