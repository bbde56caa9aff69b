//! Adaptive adversary constructions and a worst-instance search.
//!
//! The four constructions are numbered 6 through 9, matching the
//! `--theorem` ids the CLI exposes. Each one observes the policy only
//! through its decision interface (plus exact expected decisions for the
//! randomized ones), builds the request sequence that punishes what it saw,
//! and reports the realized instance together with the policy's exact
//! profit, the offline optimum, and their ratio.

use crate::coin::{enumerate_branches, CoinBudgetExceeded, NoCoins};
use crate::model::{transition, Allocation, Direction, Instance, StageDemand};
use crate::oracle::{enumeration_bound, opt_dp, opt_dp_counts, EnumerationBudget};
use crate::policies::{expected_stage_decision, RequestPolicy, StagePolicy};
use crate::rat::{format_rat, rat, rat_u64, Rat};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Default per-run coin budget for exact expectations.
pub const DEFAULT_COIN_LIMIT: usize = 30;

/// Outcome of playing an adversary against a policy.
#[derive(Clone, Debug)]
pub struct AdversaryOutcome {
    /// The realized request sequence.
    pub instance: Instance,
    /// Exact (expected, for randomized policies) profit of the policy.
    pub alg_profit: Rat,
    /// Offline optimum of the realized instance.
    pub opt_profit: u64,
    /// `opt / alg`.
    pub ratio: Rat,
}

impl AdversaryOutcome {
    fn from_parts(instance: Instance, alg_profit: Rat) -> Self {
        let opt_profit = opt_dp(&instance).profit;
        assert!(!alg_profit.is_zero(), "adversary outcome with zero online profit");
        let ratio = rat_u64(opt_profit) / &alg_profit;
        AdversaryOutcome { instance, alg_profit, opt_profit, ratio }
    }
}

/// Adversary identifiers, one per lower-bound construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    T6,
    T7,
    T8,
    T9,
}

impl Theorem {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            6 => Some(Theorem::T6),
            7 => Some(Theorem::T7),
            8 => Some(Theorem::T8),
            9 => Some(Theorem::T9),
            _ => None,
        }
    }

    pub fn number(&self) -> u8 {
        match self {
            Theorem::T6 => 6,
            Theorem::T7 => 7,
            Theorem::T8 => 8,
            Theorem::T9 => 9,
        }
    }
}

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("theorem {theorem} drives deterministic policies only; use --theorem 9 with --R 2 for randomized ones")]
    RandomizedPolicy { theorem: u8 },
    #[error("R*k must be an integer, got R = {r} with k = {k}")]
    NonIntegralRk { r: String, k: u64 },
    #[error("R must lie in [1, 2], got {r}")]
    ROutOfRange { r: String },
    #[error(transparent)]
    CoinBudget(#[from] CoinBudgetExceeded),
}

/// Stage-model adversary for deterministic policies: floods `k` requests in
/// both directions, then counter-floods the direction the policy kept the
/// least capacity for (ties go to the `R` flood).
pub fn theorem6(policy: &dyn StagePolicy, k: u64) -> Result<AdversaryOutcome, AdversaryError> {
    if !policy.deterministic() {
        return Err(AdversaryError::RandomizedPolicy { theorem: 6 });
    }
    let start = Allocation::initial(k);
    let d1 = policy.decide(&start, StageDemand::new(k, k), &mut NoCoins);
    let stage2 =
        if d1.gl <= k / 2 { StageDemand::new(0, k) } else { StageDemand::new(k, 0) };
    let alloc = transition(&start, d1).expect("policy decisions are feasible");
    let d2 = policy.decide(&alloc, stage2, &mut NoCoins);
    let instance = Instance::simultaneous(k, vec![StageDemand::new(k, k), stage2]).unwrap();
    Ok(AdversaryOutcome::from_parts(instance, rat_u64(d1.total() + d2.total())))
}

/// Request-model adversary for deterministic policies: streams `k` `L`
/// requests; if at most `floor(2k/3)` are accepted the game ends there,
/// otherwise `k` `R` requests finish stage 1 and `k` `L` requests form
/// stage 2.
pub fn theorem7(policy: &dyn RequestPolicy, k: u64) -> Result<AdversaryOutcome, AdversaryError> {
    if !policy.deterministic() {
        return Err(AdversaryError::RandomizedPolicy { theorem: 7 });
    }
    let start = Allocation::initial(k);
    let mut stage1 = policy.begin_stage(&start);
    let mut accepted = 0u64;
    for _ in 0..k {
        if stage1.step(Direction::L, &mut NoCoins) {
            accepted += 1;
        }
    }
    if accepted <= 2 * k / 3 {
        let instance = Instance::sequential(k, vec![vec![Direction::L; k as usize]]).unwrap();
        return Ok(AdversaryOutcome::from_parts(instance, rat_u64(accepted)));
    }
    for _ in 0..k {
        stage1.step(Direction::R, &mut NoCoins);
    }
    let d1 = stage1.tally();
    let alloc = transition(&start, d1).expect("tally is feasible");
    let mut stage2 = policy.begin_stage(&alloc);
    let mut second = 0u64;
    for _ in 0..k {
        if stage2.step(Direction::L, &mut NoCoins) {
            second += 1;
        }
    }
    let instance = Instance::sequential(k, vec![two_direction_stream(k), vec![Direction::L; k as usize]]).unwrap();
    Ok(AdversaryOutcome::from_parts(instance, rat_u64(d1.total() + second)))
}

fn two_direction_stream(k: u64) -> Vec<Direction> {
    let mut s = vec![Direction::L; k as usize];
    s.extend(std::iter::repeat(Direction::R).take(k as usize));
    s
}

/// Expectation-branching variant of [`theorem7`] for any request policy.
/// The branch compares the exact expected stage-1 acceptance against
/// `floor(2k/3)`, so a deterministic policy takes exactly the branch
/// [`theorem7`] would. Profits are exact expectations.
pub fn theorem8(
    policy: &dyn RequestPolicy,
    k: u64,
    coin_limit: usize,
) -> Result<AdversaryOutcome, AdversaryError> {
    let start = Allocation::initial(k);
    let probe = enumerate_branches(coin_limit, |coin| {
        let mut stage = policy.begin_stage(&start);
        let mut accepted = 0u64;
        for _ in 0..k {
            if stage.step(Direction::L, coin) {
                accepted += 1;
            }
        }
        accepted
    })?;
    let expected_first: Rat = probe.iter().map(|b| &b.weight * rat_u64(b.value)).sum();

    if expected_first <= rat_u64(2 * k / 3) {
        let instance = Instance::sequential(k, vec![vec![Direction::L; k as usize]]).unwrap();
        return Ok(AdversaryOutcome::from_parts(instance, expected_first));
    }

    let branches = enumerate_branches(coin_limit, |coin| {
        let mut total = 0u64;
        let mut alloc = start;
        for stream in [two_direction_stream(k), vec![Direction::L; k as usize]] {
            let mut stage = policy.begin_stage(&alloc);
            for r in stream {
                stage.step(r, coin);
            }
            let d = stage.tally();
            total += d.total();
            alloc = transition(&alloc, d).expect("tally is feasible");
        }
        total
    })?;
    let alg: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value)).sum();
    let instance = Instance::sequential(k, vec![two_direction_stream(k), vec![Direction::L; k as usize]]).unwrap();
    Ok(AdversaryOutcome::from_parts(instance, alg))
}

/// Load-bounded stage-model adversary for any stage policy. Requests
/// `floor(Rk/2)` `L` and `ceil(Rk/2)` `R` in stage 1, compares the policy's
/// exact expected `L` acceptance against the stage-1 `L` target, and floods
/// whichever direction that comparison exposes (ties go to the `R` flood).
pub fn theorem9(
    policy: &dyn StagePolicy,
    k: u64,
    r: &Rat,
    coin_limit: usize,
) -> Result<AdversaryOutcome, AdversaryError> {
    if r < &Rat::one() || r > &rat(2, 1) {
        return Err(AdversaryError::ROutOfRange { r: format_rat(r) });
    }
    let rk = r * rat_u64(k);
    if !rk.is_integer() {
        return Err(AdversaryError::NonIntegralRk { r: format_rat(r), k });
    }
    let rk = rk.to_integer().to_u64().expect("R*k fits u64");
    let il1 = rk / 2;
    let ir1 = rk - il1;
    let stage1 = StageDemand::new(il1, ir1);
    // ((1 - R)k + 3*floor(Rk/2)) / (2 + R)
    let alpha = ((Rat::one() - r) * rat_u64(k) + rat(3, 1) * rat_u64(il1)) / (rat(2, 1) + r);

    let start = Allocation::initial(k);
    let (expected_l, _) = expected_stage_decision(policy, &start, stage1, coin_limit)?;
    let stage2 = if expected_l <= alpha { StageDemand::new(0, k) } else { StageDemand::new(k, 0) };

    let branches = enumerate_branches(coin_limit, |coin| {
        let d1 = policy.decide(&start, stage1, coin);
        let alloc = transition(&start, d1).expect("policy decisions are feasible");
        let d2 = policy.decide(&alloc, stage2, coin);
        d1.total() + d2.total()
    })?;
    let alg: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value)).sum();
    let instance = Instance::simultaneous(k, vec![stage1, stage2]).unwrap();
    Ok(AdversaryOutcome::from_parts(instance, alg))
}

/// How the worst-instance search feeds a request policy.
///
/// Searching every interleaving is hopeless and the implemented request
/// policies are count-driven, so only a stage's counts plus the two
/// canonical orderings (all `L` first, all `R` first) are explored; the
/// ordering that hurts the policy more is charged. This is a completeness
/// caveat, not an exact worst case over orderings.
#[derive(Clone, Copy)]
enum SearchSubject<'a> {
    Stage(&'a dyn StagePolicy),
    Request(&'a dyn RequestPolicy),
}

/// Exhaustively searches all stage-count instances with `stages` stages and
/// per-direction demand at most `cap`, returning the instance with the
/// largest `opt / E[alg]`. Ties keep the lexicographically first witness.
pub fn exhaustive_worst(
    policy: &crate::policies::Policy,
    k: u64,
    stages: usize,
    cap: u64,
    budget: u128,
    coin_limit: usize,
) -> Result<AdversaryOutcome, ExhaustiveError> {
    let subject = match policy {
        crate::policies::Policy::Stage(p) => SearchSubject::Stage(p.as_ref()),
        crate::policies::Policy::Request(p) => SearchSubject::Request(p.as_ref()),
    };
    let required = enumeration_bound(cap, stages);
    if required > budget {
        return Err(ExhaustiveError::Budget(EnumerationBudget { required, budget }));
    }

    let mut best: Option<AdversaryOutcome> = None;
    let mut demands = vec![StageDemand::new(0, 0); stages];
    loop {
        let alg = expected_profit(subject, k, &demands, coin_limit)?;
        let opt = opt_dp_counts(k, &demands).profit;
        let ratio = if alg.is_zero() {
            assert_eq!(opt, 0, "online profit zero on a servable instance");
            Rat::one()
        } else {
            rat_u64(opt) / &alg
        };
        if best.as_ref().map_or(true, |b| ratio > b.ratio) {
            best = Some(AdversaryOutcome {
                instance: Instance::simultaneous(k, demands.clone()).unwrap(),
                alg_profit: alg,
                opt_profit: opt,
                ratio,
            });
        }
        if !advance(&mut demands, cap) {
            break;
        }
    }
    Ok(best.expect("at least the all-zero instance was searched"))
}

#[derive(Debug, Error)]
pub enum ExhaustiveError {
    #[error(transparent)]
    Budget(EnumerationBudget),
    #[error(transparent)]
    CoinBudget(#[from] CoinBudgetExceeded),
}

fn advance(demands: &mut [StageDemand], cap: u64) -> bool {
    for d in demands.iter_mut() {
        if d.ir < cap {
            d.ir += 1;
            return true;
        }
        d.ir = 0;
        if d.il < cap {
            d.il += 1;
            return true;
        }
        d.il = 0;
    }
    false
}

fn expected_profit(
    subject: SearchSubject<'_>,
    k: u64,
    demands: &[StageDemand],
    coin_limit: usize,
) -> Result<Rat, CoinBudgetExceeded> {
    match subject {
        SearchSubject::Stage(p) => {
            let branches = enumerate_branches(coin_limit, |coin| {
                let mut alloc = Allocation::initial(k);
                let mut total = 0u64;
                for demand in demands {
                    let d = p.decide(&alloc, *demand, coin);
                    total += d.total();
                    alloc = transition(&alloc, d).expect("policy decisions are feasible");
                }
                total
            })?;
            Ok(branches.iter().map(|b| &b.weight * rat_u64(b.value)).sum())
        }
        SearchSubject::Request(p) => {
            let mut worst: Option<Rat> = None;
            for l_first in [true, false] {
                let branches = enumerate_branches(coin_limit, |coin| {
                    let mut alloc = Allocation::initial(k);
                    let mut total = 0u64;
                    for demand in demands {
                        let mut stage = p.begin_stage(&alloc);
                        let (a, b, first) = if l_first {
                            (demand.il, demand.ir, Direction::L)
                        } else {
                            (demand.ir, demand.il, Direction::R)
                        };
                        let second = if first == Direction::L { Direction::R } else { Direction::L };
                        for _ in 0..a {
                            stage.step(first, coin);
                        }
                        for _ in 0..b {
                            stage.step(second, coin);
                        }
                        let d = stage.tally();
                        total += d.total();
                        alloc = transition(&alloc, d).expect("tally is feasible");
                    }
                    total
                })?;
                let alg: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value)).sum();
                worst = Some(match worst {
                    None => alg,
                    Some(w) => w.min(alg),
                });
            }
            Ok(worst.unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::{Agba, Argba, Gba, PolicyId, PrArgba, PrGba};

    #[test]
    fn theorem6_gba_traces() {
        // k=4: GBA splits (2,2), adversary floods R, capacity for it is 2
        let out = theorem6(&Gba, 4).unwrap();
        assert_eq!(out.alg_profit, rat_u64(6));
        assert_eq!(out.opt_profit, 8);
        assert_eq!(out.ratio, rat(4, 3));
        assert_eq!(out.instance.demands(), vec![StageDemand::new(4, 4), StageDemand::new(0, 4)]);

        // k=5: GBA takes (3,2), the L flood hits capacity 2
        let out = theorem6(&Gba, 5).unwrap();
        assert_eq!(out.alg_profit, rat_u64(7));
        assert_eq!(out.opt_profit, 10);
        assert_eq!(out.ratio, rat(10, 7));
        assert_eq!(out.instance.demands()[1], StageDemand::new(5, 0));

        // k=2
        let out = theorem6(&Gba, 2).unwrap();
        assert_eq!(out.alg_profit, rat_u64(3));
        assert_eq!(out.ratio, rat(4, 3));
    }

    #[test]
    fn theorem6_rejects_randomized() {
        assert!(matches!(
            theorem6(&PrGba, 4),
            Err(AdversaryError::RandomizedPolicy { theorem: 6 })
        ));
        assert!(matches!(theorem6(&Agba, 4), Err(AdversaryError::RandomizedPolicy { .. })));
    }

    #[test]
    fn theorem7_argba_traces() {
        // k=3: accepts floor(2k/3)=2, adversary stops
        let out = theorem7(&Argba, 3).unwrap();
        assert_eq!(out.alg_profit, rat_u64(2));
        assert_eq!(out.opt_profit, 3);
        assert_eq!(out.ratio, rat(3, 2));
        assert_eq!(out.instance.num_stages(), 1);

        // k=4: accepts ceil(8/3)=3 > 2, game continues
        let out = theorem7(&Argba, 4).unwrap();
        assert_eq!(out.alg_profit, rat_u64(5));
        assert_eq!(out.opt_profit, 8);
        assert_eq!(out.ratio, rat(8, 5));

        // k=2: accepts both L's, stage 2 capacity is zero
        let out = theorem7(&Argba, 2).unwrap();
        assert_eq!(out.alg_profit, rat_u64(2));
        assert_eq!(out.opt_profit, 4);
        assert_eq!(out.ratio, rat(2, 1));
    }

    #[test]
    fn theorem8_matches_theorem7_for_deterministic() {
        for k in 2u64..=12 {
            let via7 = theorem7(&Argba, k).unwrap();
            let via8 = theorem8(&Argba, k, DEFAULT_COIN_LIMIT).unwrap();
            assert_eq!(via7.alg_profit, via8.alg_profit, "k={k}");
            assert_eq!(via7.instance, via8.instance, "k={k}");
        }
    }

    #[test]
    fn theorem8_prargba_exact_expectations() {
        // k=2: E[stage-1 accepts] = 4/3 > floor(4/3) = 1, so the game
        // continues, and E[alg] = 2 + 2/3
        let out = theorem8(&PrArgba, 2, DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.alg_profit, rat(8, 3));
        assert_eq!(out.opt_profit, 4);
        assert_eq!(out.ratio, rat(3, 2));
        assert_eq!(out.instance.num_stages(), 2);

        // k=3: integral threshold, no coins, reduces to the stopped game
        let out = theorem8(&PrArgba, 3, DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.alg_profit, rat_u64(2));
        assert_eq!(out.ratio, rat(3, 2));
        assert_eq!(out.instance.num_stages(), 1);
    }

    #[test]
    fn theorem9_examples() {
        // AGBA at full load: expected split is exactly alpha = k/2
        let out = theorem9(&Agba, 100, &rat(2, 1), DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.alg_profit, rat_u64(150));
        assert_eq!(out.opt_profit, 200);
        assert_eq!(out.ratio, rat(4, 3));

        // the headline light-load point
        let out = theorem9(&Agba, 20, &rat(11, 10), DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.ratio, rat(31, 30));

        // GBA is not adaptive: at R = 3/2 it still splits evenly and pays 7/6
        let out = theorem9(&Gba, 100, &rat(3, 2), DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.alg_profit, rat_u64(150));
        assert_eq!(out.opt_profit, 175);
        assert_eq!(out.ratio, rat(7, 6));
    }

    #[test]
    fn theorem9_validates_r() {
        assert!(matches!(
            theorem9(&Agba, 10, &rat(5, 2), DEFAULT_COIN_LIMIT),
            Err(AdversaryError::ROutOfRange { .. })
        ));
        assert!(matches!(
            theorem9(&Agba, 10, &rat(11, 10) , DEFAULT_COIN_LIMIT).map(|_| ()),
            Ok(())
        ));
        assert!(matches!(
            theorem9(&Agba, 7, &rat(11, 10), DEFAULT_COIN_LIMIT),
            Err(AdversaryError::NonIntegralRk { .. })
        ));
    }

    #[test]
    fn exhaustive_worst_gba_small() {
        let policy = PolicyId::Gba.build();
        let out = exhaustive_worst(&policy, 2, 2, 4, 1 << 24, DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.ratio, rat(4, 3));
        let out = exhaustive_worst(&policy, 3, 2, 6, 1 << 24, DEFAULT_COIN_LIMIT).unwrap();
        assert_eq!(out.ratio, rat(3, 2));
    }

    #[test]
    fn exhaustive_budget_refusal() {
        let policy = PolicyId::Gba.build();
        assert!(matches!(
            exhaustive_worst(&policy, 3, 3, 6, 100, DEFAULT_COIN_LIMIT),
            Err(ExhaustiveError::Budget(_))
        ));
    }
}
