//! The runnable verification battery: ten criteria, each with its exact
//! tolerance and a wall-clock budget pinned in code. `carshare verify` and
//! the `acceptance` integration test both drive this module.

use crate::adversaries::{exhaustive_worst, theorem6, theorem7, theorem8, theorem9};
use crate::fixtures;
use crate::fuzz::{demand_grid, fuzz_corpus};
use crate::harness::{
    check_all_offline_schedules, exact_expectation, expected_rows, induction_check, monte_carlo,
    realized_load, theorem_delta, theorem_ratio_bound, DEFAULT_COIN_LIMIT,
};
use crate::model::{Instance, StageDecision};
use crate::oracle::{for_each_schedule, opt_dp, opt_dp_counts, validate_schedule};
use crate::policies::{alpha_beta, Agba, Argba, Gba, PolicyId, PrArgba, PrGba};
use crate::rat::{parse_rat, rat, rat_u64, Rat};
use num_traits::One;
use std::time::{Duration, Instant};

/// Seed for the shared fuzz corpora.
const FUZZ_SEED: u64 = 2024;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let limit = self
            .limit
            .map(|l| format!(", limit {:.0?}", l))
            .unwrap_or_default();
        format!(
            "criterion {:02} {} {} — {} ({:.3?}{})",
            self.id, verdict, self.name, self.detail, self.elapsed, limit
        )
    }
}

fn finish(
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    started: Instant,
    result: Result<String, String>,
) -> CriterionOutcome {
    let elapsed = started.elapsed();
    let within = limit.map_or(true, |l| elapsed <= l);
    match result {
        Ok(detail) if within => CriterionOutcome { id, name, passed: true, detail, elapsed, limit },
        Ok(detail) => CriterionOutcome {
            id,
            name,
            passed: false,
            detail: format!("{detail}; exceeded time limit"),
            elapsed,
            limit,
        },
        Err(detail) => CriterionOutcome { id, name, passed: false, detail, elapsed, limit },
    }
}

/// Criterion 1: the stage-model adversary pins GBA at exactly
/// `2k/(k + floor(k/2))` for every k in 2..=200.
pub fn criterion_1() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        for k in 2u64..=200 {
            let out = theorem6(&Gba, k).map_err(|e| e.to_string())?;
            let want = Rat::new((2 * k).into(), (k + k / 2).into());
            if out.ratio != want {
                return Err(format!("k={k}: ratio {} != {}", out.ratio, want));
            }
        }
        Ok("theorem-6 ratio equals 2k/(k+floor(k/2)) for k=2..=200".into())
    };
    finish(1, "gba-tightness", Some(Duration::from_secs(1)), started, run())
}

/// Criterion 2: the request-model adversary pins ARGBA at exactly
/// `2k/(k + floor(k/3))` for k in 2..=200, and the supporting inequality
/// `2k/(k+floor(k/3)) <= k/floor(2k/3)` holds for k in 2..=10_000.
pub fn criterion_2() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        for k in 2u64..=200 {
            let out = theorem7(&Argba, k).map_err(|e| e.to_string())?;
            let want = Rat::new((2 * k).into(), (k + k / 3).into());
            if out.ratio != want {
                return Err(format!("k={k}: ratio {} != {}", out.ratio, want));
            }
        }
        for k in 2u64..=10_000 {
            // cross-multiplied: 2*floor(2k/3) <= k + floor(k/3)
            if 2 * (2 * k / 3) > k + k / 3 {
                return Err(format!("inequality fails at k={k}"));
            }
        }
        Ok("theorem-7 ratio equals 2k/(k+floor(k/3)) for k=2..=200; inequality holds to 10^4".into())
    };
    finish(2, "argba-tightness", Some(Duration::from_secs(1)), started, run())
}

/// Criterion 3: the load-bounded adversary at R=2 pins PrGBA at exactly 4/3
/// for every k in 2..=100.
pub fn criterion_3() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        let two = rat(2, 1);
        for k in 2u64..=100 {
            let out = theorem9(&PrGba, k, &two, DEFAULT_COIN_LIMIT).map_err(|e| e.to_string())?;
            if out.ratio != rat(4, 3) {
                return Err(format!("k={k}: ratio {} != 4/3", out.ratio));
            }
        }
        Ok("theorem-9 (R=2) expected ratio is exactly 4/3 for k=2..=100".into())
    };
    finish(3, "prgba-tightness", Some(Duration::from_secs(1)), started, run())
}

/// Criterion 4: the expectation-branching request adversary pins PrARGBA at
/// exactly 3/2 for every k in 2..=100.
pub fn criterion_4() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        for k in 2u64..=100 {
            let out = theorem8(&PrArgba, k, DEFAULT_COIN_LIMIT).map_err(|e| e.to_string())?;
            if out.ratio != rat(3, 2) {
                return Err(format!("k={k}: ratio {} != 3/2", out.ratio));
            }
        }
        Ok("theorem-8 expected ratio is exactly 3/2 for k=2..=100".into())
    };
    finish(4, "prargba-tightness", Some(Duration::from_secs(1)), started, run())
}

/// Criterion 5: AGBA meets `(2+R)/3` exactly on every integral `(k, R)`
/// pair with k <= 100 and R in {1, 11/10, 5/4, 3/2, 7/4, 2}; in particular
/// (k=20, R=11/10) gives 31/30 <= 1.034.
pub fn criterion_5() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        let rs = [rat(1, 1), rat(11, 10), rat(5, 4), rat(3, 2), rat(7, 4), rat(2, 1)];
        let mut pairs = 0u32;
        for r in &rs {
            for k in 2u64..=100 {
                if !(r * rat_u64(k)).is_integer() {
                    continue;
                }
                let out = theorem9(&Agba, k, r, DEFAULT_COIN_LIMIT).map_err(|e| e.to_string())?;
                let want = (rat(2, 1) + r) / rat(3, 1);
                if out.ratio != want {
                    return Err(format!("k={k} R={r}: ratio {} != {}", out.ratio, want));
                }
                pairs += 1;
            }
        }
        let headline = theorem9(&Agba, 20, &rat(11, 10), DEFAULT_COIN_LIMIT).map_err(|e| e.to_string())?;
        if headline.ratio != rat(31, 30) {
            return Err(format!("headline ratio {} != 31/30", headline.ratio));
        }
        if headline.ratio > parse_rat("1.034").unwrap() {
            return Err("31/30 > 1.034".into());
        }
        Ok(format!("expected ratio equals (2+R)/3 on {pairs} integral (k, R) pairs; (20, 11/10) -> 31/30"))
    };
    finish(5, "agba-tightness", Some(Duration::from_secs(2)), started, run())
}

/// Criterion 6: the DP optimum equals the exhaustive-enumeration maximum on
/// every instance with k in {1,2,3}, up to 3 stages, demands up to 2k.
pub fn criterion_6() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        let mut instances = 0u64;
        for k in 1u64..=3 {
            for n in 1usize..=3 {
                for demands in demand_grid(2 * k, n) {
                    let dp = opt_dp_counts(k, &demands).profit;
                    let mut best = 0u64;
                    for_each_schedule(k, &demands, u128::MAX, &mut |s| {
                        best = best.max(s.iter().map(StageDecision::total).sum());
                    })
                    .map_err(|e| e.to_string())?;
                    if dp != best {
                        return Err(format!("k={k} demands={demands:?}: dp {dp} != enumerated {best}"));
                    }
                    instances += 1;
                }
            }
        }
        Ok(format!("DP equals enumeration on {instances} instances"))
    };
    finish(6, "oracle-equivalence", Some(Duration::from_secs(60)), started, run())
}

/// Criterion 7: the induction inequalities hold for every policy with its
/// registry delta — against every feasible offline schedule on the
/// exhaustive grid (k in {2,3}, up to 3 stages, demands up to 2k), and
/// against the DP witness on 1000 fuzzed instances per k in {2,3,5,8},
/// where the realized ratio must also stay within the theorem bound.
pub fn criterion_7() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        let mut grid_checks = 0u64;
        for k in [2u64, 3] {
            for n in 1usize..=3 {
                for demands in demand_grid(2 * k, n) {
                    let instance = Instance::simultaneous(k, demands.clone()).unwrap();
                    let load = realized_load(&instance);
                    for policy in PolicyId::ALL {
                        let (rows, _) = expected_rows(policy, &instance, DEFAULT_COIN_LIMIT)
                            .map_err(|e| e.to_string())?;
                        let delta = theorem_delta(policy, k, &load);
                        match check_all_offline_schedules(k, &demands, &rows, &delta) {
                            Ok(count) => grid_checks += count,
                            Err(ce) => {
                                return Err(format!(
                                    "{policy} k={k} demands={demands:?}: {} at stage {} vs offline {:?}",
                                    ce.inequality, ce.stage, ce.offline
                                ))
                            }
                        }
                    }
                }
            }
        }

        let mut fuzz_checks = 0u64;
        for k in [2u64, 3, 5, 8] {
            for instance in fuzz_corpus(k, 1000, FUZZ_SEED) {
                let opt = opt_dp(&instance);
                let load = realized_load(&instance);
                for policy in PolicyId::ALL {
                    let (rows, alg) = expected_rows(policy, &instance, DEFAULT_COIN_LIMIT)
                        .map_err(|e| e.to_string())?;
                    let delta = theorem_delta(policy, k, &load);
                    induction_check(&instance, &rows, &opt.schedule, delta)
                        .map_err(|e| format!("{policy} k={k} {}: {e}", instance.to_json()))?;
                    // OPT dominance and the theorem bound, exact
                    if alg > rat_u64(opt.profit) {
                        return Err(format!("{policy} k={k}: alg exceeds OPT on {}", instance.to_json()));
                    }
                    if opt.profit > 0 {
                        let bound = theorem_ratio_bound(policy, k, &load);
                        if rat_u64(opt.profit) > bound * &alg {
                            return Err(format!(
                                "{policy} k={k}: ratio beyond theorem bound on {}",
                                instance.to_json()
                            ));
                        }
                    }
                    fuzz_checks += 1;
                }
            }
        }
        Ok(format!(
            "grid: {grid_checks} offline schedules clean across 5 policies; fuzz: {fuzz_checks} (policy, instance) pairs clean"
        ))
    };
    finish(7, "induction-suite", Some(Duration::from_secs(300)), started, run())
}

/// Criterion 8: brute-force worst-instance search over two-stage instances
/// with demands up to 2k both attains and never exceeds GBA's bound for
/// k in {2,3,4}.
pub fn criterion_8() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        for k in [2u64, 3, 4] {
            let policy = PolicyId::Gba.build();
            let out = exhaustive_worst(&policy, k, 2, 2 * k, 1 << 40, DEFAULT_COIN_LIMIT)
                .map_err(|e| e.to_string())?;
            let want = Rat::new((2 * k).into(), (k + k / 2).into());
            if out.ratio != want {
                return Err(format!(
                    "k={k}: exhaustive worst {} != {} (witness {})",
                    out.ratio,
                    want,
                    out.instance.to_json()
                ));
            }
        }
        Ok("search attains 2k/(k+floor(k/2)) and never exceeds it for k in {2,3,4}".into())
    };
    finish(8, "exhaustive-no-violation", Some(Duration::from_secs(120)), started, run())
}

/// Criterion 9: target identities hold exactly for all 0 <= il, ir <= k
/// <= 50, and every DP witness on the fuzz corpus replays within the
/// per-stage feasibility bounds.
pub fn criterion_9() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        for k in 1u64..=50 {
            for il in 0..=k {
                for ir in 0..=k {
                    let t = alpha_beta(il, ir, k);
                    if t.alpha > rat_u64(il) || t.beta > rat_u64(ir) {
                        return Err(format!("target exceeds demand at k={k} il={il} ir={ir}"));
                    }
                    if &t.alpha + &t.beta > rat_u64(k) {
                        return Err(format!("alpha+beta > k at k={k} il={il} ir={ir}"));
                    }
                    let delta = (rat(3, 1) / (rat(2, 1) + &t.load)).min(Rat::one());
                    if rat_u64(k) + &t.alpha != &delta * (rat_u64(k) + rat_u64(il))
                        || rat_u64(k) + &t.beta != &delta * (rat_u64(k) + rat_u64(ir))
                    {
                        return Err(format!("scaling identity fails at k={k} il={il} ir={ir}"));
                    }
                }
            }
        }
        let mut witnesses = 0u64;
        for k in [2u64, 3, 5, 8] {
            for instance in fuzz_corpus(k, 1000, FUZZ_SEED) {
                let opt = opt_dp(&instance);
                validate_schedule(&instance, &opt.schedule)
                    .map_err(|e| format!("witness invalid on {}: {e}", instance.to_json()))?;
                witnesses += 1;
            }
        }
        Ok(format!("target identities exhaustive to k=50; {witnesses} DP witnesses feasible"))
    };
    finish(9, "lemma-suite", Some(Duration::from_secs(30)), started, run())
}

/// Criterion 10: for each randomized fixture, a 10^5-trial Monte Carlo mean
/// lies within three standard errors of the exact expectation, and rerunning
/// with the same seed reproduces byte-identical output.
pub fn criterion_10() -> CriterionOutcome {
    let started = Instant::now();
    let run = || {
        let trials = 100_000u64;
        let seed = 424_242u64;
        for (policy, instance) in fixtures::randomized_fixtures() {
            let exact = exact_expectation(policy, &instance, DEFAULT_COIN_LIMIT).map_err(|e| e.to_string())?;
            let exact_mean = crate::rat::rat_to_f64(&parse_rat(&exact.alg).unwrap());
            let a = monte_carlo(policy, &instance, trials, seed);
            let b = monte_carlo(policy, &instance, trials, seed);
            let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
            if ja != jb {
                return Err(format!("{policy}: same seed produced different bytes"));
            }
            if a.sample_std == 0.0 {
                return Err(format!("{policy}: fixture shows no randomness"));
            }
            if (a.mean - exact_mean).abs() > 3.0 * a.std_error {
                return Err(format!(
                    "{policy}: mean {} vs exact {} exceeds 3 SE ({})",
                    a.mean, exact_mean, a.std_error
                ));
            }
        }
        Ok("4 randomized fixtures within 3 SE of exact expectation; byte-identical reruns".into())
    };
    finish(10, "monte-carlo-coherence", None, started, run())
}

pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
