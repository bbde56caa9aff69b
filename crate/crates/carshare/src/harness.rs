//! Evaluation harness: realized runs, exact expectations, Monte Carlo
//! cross-checks, the six-sequence induction tracer, and report emission.

use crate::coin::{enumerate_branches, CoinBudgetExceeded, CoinSource, NoCoins, SeededCoins};
use crate::model::{transition, Allocation, Instance, Model, Schedule, StageDecision, StageDemand};
use crate::oracle::{opt_dp, validate_schedule, ValidationError};
use crate::policies::{Policy, PolicyId};
use crate::rat::{format_rat, rat, rat_to_f64, rat_u64, Rat};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default per-run coin budget for exact expectations (2^30 branches).
pub const DEFAULT_COIN_LIMIT: usize = 30;

/// Inverse competitive-ratio target `delta` per policy: the single source
/// of truth the acceptance checks test against. `load` is the realized
/// maximum stage load (after per-direction capping at `k`) and only matters
/// for the adaptive policy, where it is clamped into [1, 2].
pub fn theorem_delta(policy: PolicyId, k: u64, load: &Rat) -> Rat {
    match policy {
        PolicyId::Gba => Rat::new((k + k / 2).into(), (2 * k).into()),
        PolicyId::Argba => Rat::new((k + k / 3).into(), (2 * k).into()),
        PolicyId::PrGba => rat(3, 4),
        PolicyId::PrArgba => rat(2, 3),
        PolicyId::Agba => {
            let r = load.clone().max(Rat::one()).min(rat(2, 1));
            rat(3, 1) / (rat(2, 1) + r)
        }
    }
}

/// The matching upper bound on the competitive ratio, `1/delta`.
pub fn theorem_ratio_bound(policy: PolicyId, k: u64, load: &Rat) -> Rat {
    theorem_delta(policy, k, load).recip()
}

/// Maximum stage load `(il + ir)/k` over the instance, with per-direction
/// demands capped at `k` first; always at most 2.
pub fn realized_load(instance: &Instance) -> Rat {
    let k = instance.k();
    instance
        .demands()
        .iter()
        .map(|d| rat_u64(d.capped(k).total()) / rat_u64(k))
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Runs a policy over a whole instance with the given coin source. Stage
/// policies consume stage counts, request policies consume streams; the
/// converse model is adapted (projection, or the canonical L-then-R
/// ordering).
pub fn run_policy(policy: &Policy, instance: &Instance, coin: &mut dyn CoinSource) -> Vec<StageDecision> {
    let k = instance.k();
    let mut alloc = Allocation::initial(k);
    let mut out = Vec::with_capacity(instance.num_stages());
    match policy {
        Policy::Stage(p) => {
            for demand in instance.demands() {
                let d = p.decide(&alloc, demand, coin);
                alloc = transition(&alloc, d).expect("policy decisions are feasible");
                out.push(d);
            }
        }
        Policy::Request(p) => {
            for stream in instance.streams() {
                let mut stage = p.begin_stage(&alloc);
                for r in stream {
                    stage.step(r, coin);
                }
                let d = stage.tally();
                alloc = transition(&alloc, d).expect("tally is feasible");
                out.push(d);
            }
        }
    }
    out
}

/// How a policy's native interface relates to the instance's model; `None`
/// when they agree.
fn adaptation_note(policy: PolicyId, instance: &Instance) -> Option<String> {
    match (policy.is_stage_policy(), instance.model()) {
        (true, Model::F) => Some(format!(
            "stage policy `{policy}` evaluated on the stage-count projection of a sequential instance"
        )),
        (false, Model::S) => Some(format!(
            "request policy `{policy}` evaluated on the canonical L-then-R ordering of a count instance"
        )),
        _ => None,
    }
}

/// The six proof sequences for one run, stages 1..=n, plus the target
/// `delta`. `a`/`x`/`u` are the online side (expected values for randomized
/// policies), `b`/`y`/`v` the offline side.
#[derive(Clone, Debug)]
pub struct InductionTrace {
    pub delta: Rat,
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
    pub x: Vec<Rat>,
    pub y: Vec<Rat>,
    pub u: Vec<Rat>,
    pub v: Vec<Rat>,
}

/// Builds the trace from per-stage online `(gl, gr)` (rational to admit
/// expectations) and an offline decision sequence of the same length.
pub fn induction_trace(
    k: u64,
    alg_rows: &[(Rat, Rat)],
    offline: &[StageDecision],
    delta: Rat,
) -> InductionTrace {
    assert_eq!(alg_rows.len(), offline.len(), "trace needs equal stage counts");
    let kr = rat_u64(k);
    let mut t = InductionTrace {
        delta,
        a: Vec::new(),
        b: Vec::new(),
        x: Vec::new(),
        y: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
    };
    let (mut a_prev, mut b_prev) = (Rat::zero(), Rat::zero());
    for ((gl, gr), off) in alg_rows.iter().zip(offline) {
        let (ol, or) = (rat_u64(off.gl), rat_u64(off.gr));
        t.x.push(&a_prev + &kr + gr);
        t.y.push(&b_prev + &kr + &or);
        t.u.push(&a_prev + &kr + gl);
        t.v.push(&b_prev + &kr + &ol);
        a_prev = &a_prev + gl + gr;
        b_prev = &b_prev + &ol + &or;
        t.a.push(a_prev.clone());
        t.b.push(b_prev.clone());
    }
    t
}

/// Which of the three inequalities failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// A_n >= delta * B_n
    Profit,
    /// X_n >= delta * Y_n
    RFlood,
    /// U_n >= delta * V_n
    LFlood,
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Inequality::Profit => "(i) A >= dB",
            Inequality::RFlood => "(ii) X >= dY",
            Inequality::LFlood => "(iii) U >= dV",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("stage {stage}: {inequality} fails: lhs {lhs}, rhs {rhs}", lhs = format_rat(lhs), rhs = format_rat(rhs))]
pub struct InductionViolation {
    /// 1-based stage index.
    pub stage: usize,
    pub inequality: Inequality,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Debug, Error)]
pub enum InductionError {
    #[error("offline schedule invalid: {0}")]
    Offline(#[from] ValidationError),
    #[error(transparent)]
    Violation(#[from] InductionViolation),
}

/// Checks the three inequalities at every stage of a trace.
pub fn check_trace(trace: &InductionTrace) -> Result<(), InductionViolation> {
    for i in 0..trace.a.len() {
        let checks = [
            (Inequality::Profit, &trace.a[i], &trace.b[i]),
            (Inequality::RFlood, &trace.x[i], &trace.y[i]),
            (Inequality::LFlood, &trace.u[i], &trace.v[i]),
        ];
        for (inequality, lhs, rhs) in checks {
            let bound = &trace.delta * rhs;
            if *lhs < bound {
                return Err(InductionViolation {
                    stage: i + 1,
                    inequality,
                    lhs: lhs.clone(),
                    rhs: bound,
                });
            }
        }
    }
    Ok(())
}

/// Validates `offline` against the instance, then checks the induction
/// inequalities of the online rows against it at every stage. The offline
/// side may be any feasible schedule, not just the optimum.
pub fn induction_check(
    instance: &Instance,
    alg_rows: &[(Rat, Rat)],
    offline: &Schedule,
    delta: Rat,
) -> Result<InductionTrace, InductionError> {
    validate_schedule(instance, offline)?;
    let trace = induction_trace(instance.k(), alg_rows, offline.decisions(), delta);
    check_trace(&trace)?;
    Ok(trace)
}

/// First counterexample found when sweeping all feasible offline schedules.
#[derive(Clone, Debug)]
pub struct OfflineCounterexample {
    pub offline: Vec<StageDecision>,
    pub stage: usize,
    pub inequality: Inequality,
}

/// Checks the induction inequalities against *every* feasible offline
/// schedule of `(k, demands)` and returns how many were checked.
///
/// This is the exhaustive counterpart of [`induction_check`]: the online
/// side is fixed per instance, so each stage's comparison reduces to one
/// integer multiply against precomputed thresholds and the sweep over
/// offline prefixes shares work along the enumeration tree. Agreement with
/// the rational reference path is pinned by tests.
pub fn check_all_offline_schedules(
    k: u64,
    demands: &[StageDemand],
    alg_rows: &[(Rat, Rat)],
    delta: &Rat,
) -> Result<u64, Box<OfflineCounterexample>> {
    assert_eq!(demands.len(), alg_rows.len());
    let n = demands.len();
    let dp = delta.numer().to_i128().expect("delta numerator fits i128");
    let dq = delta.denom().to_i128().expect("delta denominator fits i128");

    // per stage: (lhs * dq, dp * denom) for each of the three inequalities,
    // so that `lhs >= delta * rhs_int` becomes `lhs_num >= coef * rhs_int`
    let mut thresholds = Vec::with_capacity(n);
    let mut a_prev = Rat::zero();
    let kr = rat_u64(k);
    for (gl, gr) in alg_rows {
        let a_i = &a_prev + gl + gr;
        let x_base = &a_prev + &kr + gr; // Y_i = B_{i-1} + k + or
        let u_base = &a_prev + &kr + gl;
        let pack = |r: &Rat| -> (i128, i128) {
            (
                r.numer().to_i128().expect("trace numerator fits i128") * dq,
                dp * r.denom().to_i128().expect("trace denominator fits i128"),
            )
        };
        thresholds.push((pack(&a_i), pack(&x_base), pack(&u_base)));
        a_prev = a_i;
    }

    struct Sweep<'a> {
        k: u64,
        demands: &'a [StageDemand],
        thresholds: &'a [((i128, i128), (i128, i128), (i128, i128))],
        prefix: Vec<StageDecision>,
        checked: u64,
    }

    impl Sweep<'_> {
        fn go(
            &mut self,
            stage: usize,
            b_prev: i128,
            at0: u64,
            at1: u64,
        ) -> Result<(), Box<OfflineCounterexample>> {
            if stage == self.demands.len() {
                self.checked += 1;
                return Ok(());
            }
            let demand = self.demands[stage];
            let ((a_num, a_coef), (x_num, x_coef), (u_num, u_coef)) = self.thresholds[stage];
            let max_l = demand.il.min(self.k - at1);
            for ol in 0..=max_l {
                let max_r = demand.ir.min(self.k - at0).min(self.k - ol);
                for or in 0..=max_r {
                    let b_i = b_prev + (ol + or) as i128;
                    let fail = if a_num < a_coef * b_i {
                        Some(Inequality::Profit)
                    } else if x_num < x_coef * (b_prev + (self.k + or) as i128) {
                        Some(Inequality::RFlood)
                    } else if u_num < u_coef * (b_prev + (self.k + ol) as i128) {
                        Some(Inequality::LFlood)
                    } else {
                        None
                    };
                    self.prefix.push(StageDecision::new(ol, or));
                    if let Some(inequality) = fail {
                        return Err(Box::new(OfflineCounterexample {
                            offline: self.prefix.clone(),
                            stage: stage + 1,
                            inequality,
                        }));
                    }
                    self.go(stage + 1, b_i, or, ol)?;
                    self.prefix.pop();
                }
            }
            Ok(())
        }
    }

    let mut sweep = Sweep { k, demands, thresholds: &thresholds, prefix: Vec::new(), checked: 0 };
    sweep.go(0, 0, 0, 0)?;
    Ok(sweep.checked)
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("policy `{0}` is randomized: --seed is required")]
    MissingSeed(PolicyId),
    #[error(transparent)]
    CoinBudget(#[from] CoinBudgetExceeded),
}

/// One evaluated (policy, instance) pair, serializable to the report JSON.
#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub policy: String,
    pub k: u64,
    pub model: String,
    pub seed: Option<u64>,
    pub digest: String,
    pub stages: Vec<StageRow>,
    /// Online profit as `p/q` (an integer for realized runs).
    pub alg: String,
    pub opt: u64,
    /// `opt/alg` as `p/q`, `"1"` for 0/0, `"inf"` when alg = 0 < opt.
    pub ratio: String,
    pub ratio_decimal: Option<f64>,
    /// Realized maximum stage load, capped, as `p/q`.
    #[serde(rename = "R")]
    pub r: String,
    pub trace: TraceJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRow {
    pub il: u64,
    pub ir: u64,
    pub gl: String,
    pub gr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(rename = "V")]
    pub v: Vec<String>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "policy,k,model,seed,digest,alg,opt,ratio,ratio_decimal,R"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.policy,
            self.k,
            self.model,
            self.seed.map_or(String::new(), |s| s.to_string()),
            self.digest,
            self.alg,
            self.opt,
            self.ratio,
            self.ratio_decimal.map_or(String::new(), |d| format!("{d}")),
            self.r,
        )
    }
}

fn build_report(
    policy: PolicyId,
    instance: &Instance,
    seed: Option<u64>,
    rows: Vec<(Rat, Rat)>,
    alg: Rat,
) -> EvalReport {
    let k = instance.k();
    let opt = opt_dp(instance);
    let load = realized_load(instance);
    let delta = theorem_delta(policy, k, &load);
    let trace = induction_trace(k, &rows, opt.schedule.decisions(), delta);
    let (ratio, ratio_decimal) = if alg.is_zero() {
        if opt.profit == 0 {
            ("1".to_string(), Some(1.0))
        } else {
            ("inf".to_string(), None)
        }
    } else {
        let ratio = rat_u64(opt.profit) / &alg;
        let dec = rat_to_f64(&ratio);
        (format_rat(&ratio), Some(dec))
    };
    let demands = instance.demands();
    let stages = demands
        .iter()
        .zip(&rows)
        .map(|(d, (gl, gr))| StageRow { il: d.il, ir: d.ir, gl: format_rat(gl), gr: format_rat(gr) })
        .collect();
    let fmt_all = |v: &[Rat]| v.iter().map(format_rat).collect::<Vec<_>>();
    EvalReport {
        policy: policy.name().to_string(),
        k,
        model: instance.model().to_string(),
        seed,
        digest: instance.digest(),
        stages,
        alg: format_rat(&alg),
        opt: opt.profit,
        ratio,
        ratio_decimal,
        r: format_rat(&load),
        trace: TraceJson {
            a: fmt_all(&trace.a),
            b: fmt_all(&trace.b),
            x: fmt_all(&trace.x),
            y: fmt_all(&trace.y),
            u: fmt_all(&trace.u),
            v: fmt_all(&trace.v),
        },
        note: adaptation_note(policy, instance),
    }
}

/// Realized run of a policy on an instance. Randomized policies require a
/// seed; deterministic ones ignore it.
pub fn evaluate(policy: PolicyId, instance: &Instance, seed: Option<u64>) -> Result<EvalReport, EvalError> {
    let built = policy.build();
    let decisions = if policy.is_randomized() {
        let seed = seed.ok_or(EvalError::MissingSeed(policy))?;
        run_policy(&built, instance, &mut SeededCoins::new(seed))
    } else {
        run_policy(&built, instance, &mut NoCoins)
    };
    let rows: Vec<(Rat, Rat)> = decisions.iter().map(|d| (rat_u64(d.gl), rat_u64(d.gr))).collect();
    let alg = rat_u64(decisions.iter().map(StageDecision::total).sum());
    Ok(build_report(policy, instance, policy.is_randomized().then_some(seed.unwrap_or(0)), rows, alg))
}

/// Per-stage expected decisions and the expected total profit of a policy
/// on an instance, by exhaustive coin-branch enumeration.
pub fn expected_rows(
    policy: PolicyId,
    instance: &Instance,
    coin_limit: usize,
) -> Result<(Vec<(Rat, Rat)>, Rat), CoinBudgetExceeded> {
    let built = policy.build();
    let branches = enumerate_branches(coin_limit, |coin| run_policy(&built, instance, coin))?;
    let n = instance.num_stages();
    let mut rows = vec![(Rat::zero(), Rat::zero()); n];
    let mut alg = Rat::zero();
    for b in &branches {
        for (row, d) in rows.iter_mut().zip(&b.value) {
            row.0 += &b.weight * rat_u64(d.gl);
            row.1 += &b.weight * rat_u64(d.gr);
        }
        alg += &b.weight * rat_u64(b.value.iter().map(StageDecision::total).sum());
    }
    Ok((rows, alg))
}

/// Exact-expectation evaluation: the report's `alg`, per-stage rows and
/// trace are expectations over all coin outcomes. Deterministic policies
/// yield the same report as [`evaluate`].
pub fn exact_expectation(
    policy: PolicyId,
    instance: &Instance,
    coin_limit: usize,
) -> Result<EvalReport, CoinBudgetExceeded> {
    let (rows, alg) = expected_rows(policy, instance, coin_limit)?;
    Ok(build_report(policy, instance, None, rows, alg))
}

/// Monte Carlo estimate of the expected profit.
#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub policy: String,
    pub k: u64,
    pub digest: String,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub sample_std: f64,
    pub std_error: f64,
    pub ci99_lo: f64,
    pub ci99_hi: f64,
}

/// Seeded, reproducible Monte Carlo evaluation; the 99% interval uses the
/// normal approximation (z = 2.5758).
pub fn monte_carlo(policy: PolicyId, instance: &Instance, trials: u64, seed: u64) -> McReport {
    assert!(trials >= 1, "need at least one trial");
    let built = policy.build();
    let mut coins = SeededCoins::new(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..trials {
        let profit: u64 = run_policy(&built, instance, &mut coins).iter().map(StageDecision::total).sum();
        let p = profit as f64;
        sum += p;
        sum_sq += p * p;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 { (sum_sq - sum * sum / n).max(0.0) / (n - 1.0) } else { 0.0 };
    let sample_std = var.sqrt();
    let std_error = sample_std / n.sqrt();
    let z = 2.5758293035489004;
    McReport {
        policy: policy.name().to_string(),
        k: instance.k(),
        digest: instance.digest(),
        trials,
        seed,
        mean,
        sample_std,
        std_error,
        ci99_lo: mean - z * std_error,
        ci99_hi: mean + z * std_error,
    }
}

/// One sweep row: a policy played against an adversary at one `(k, R)`.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub policy: PolicyId,
    pub k: u64,
    pub r: Option<Rat>,
    pub ratio: Rat,
}

pub fn sweep_csv_header() -> &'static str {
    "policy,k,R,ratio,ratio_decimal"
}

pub fn sweep_row_csv(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{}",
        row.policy,
        row.k,
        row.r.as_ref().map_or(String::new(), format_rat),
        format_rat(&row.ratio),
        rat_to_f64(&row.ratio),
    )
}
