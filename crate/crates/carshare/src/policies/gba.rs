//! Greedy balanced stage policies.
//!
//! The decision has three regimes. When one direction is uncritical (its
//! capacity or its demand is at most `floor(k/2)`), serve it greedily first
//! and fill the other direction with what remains. Otherwise both directions
//! could soak up more than half the fleet, and the only safe move is an even
//! split.

use super::{prrd, StagePolicy};
use crate::coin::CoinSource;
use crate::model::{Allocation, StageDecision, StageDemand};
use crate::rat::rat;

/// Which regime a stage falls into. Exposed for tests that assert the
/// decision case coverage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum GbaBranch {
    /// Serve `L` greedily, then `R` with the remainder.
    GreedyL,
    /// Serve `R` greedily, then `L` with the remainder.
    GreedyR,
    /// Both directions heavy: split the fleet.
    Balanced,
}

pub(crate) fn gba_branch(alloc: &Allocation, demand: StageDemand) -> GbaBranch {
    let half = alloc.k() / 2;
    if alloc.cap_l() <= half || demand.il <= half {
        GbaBranch::GreedyL
    } else if alloc.cap_r() <= half || demand.ir <= half {
        GbaBranch::GreedyR
    } else {
        GbaBranch::Balanced
    }
}

fn greedy_l_first(alloc: &Allocation, demand: StageDemand) -> StageDecision {
    let k = alloc.k();
    let gl = demand.il.min(alloc.cap_l());
    let gr = demand.ir.min(alloc.cap_r()).min(k - gl);
    StageDecision::new(gl, gr)
}

fn greedy_r_first(alloc: &Allocation, demand: StageDemand) -> StageDecision {
    let k = alloc.k();
    let gr = demand.ir.min(alloc.cap_r());
    let gl = demand.il.min(alloc.cap_l()).min(k - gr);
    StageDecision::new(gl, gr)
}

/// Deterministic greedy balanced policy. In the balanced regime it accepts
/// `ceil(k/2)` of `L` and `floor(k/2)` of `R`.
pub struct Gba;

impl StagePolicy for Gba {
    fn decide(&self, alloc: &Allocation, demand: StageDemand, _coin: &mut dyn CoinSource) -> StageDecision {
        let k = alloc.k();
        match gba_branch(alloc, demand) {
            GbaBranch::GreedyL => greedy_l_first(alloc, demand),
            GbaBranch::GreedyR => greedy_r_first(alloc, demand),
            GbaBranch::Balanced => StageDecision::new(k - k / 2, k / 2),
        }
    }

    fn deterministic(&self) -> bool {
        true
    }
}

/// Probabilistic variant: the balanced split draws `gr` by rounding `k/2`
/// up or down with equal expectation, so `E[gl] = E[gr] = k/2` exactly even
/// for odd `k`. Greedy regimes consume no randomness.
pub struct PrGba;

impl StagePolicy for PrGba {
    fn decide(&self, alloc: &Allocation, demand: StageDemand, coin: &mut dyn CoinSource) -> StageDecision {
        let k = alloc.k();
        match gba_branch(alloc, demand) {
            GbaBranch::GreedyL => greedy_l_first(alloc, demand),
            GbaBranch::GreedyR => greedy_r_first(alloc, demand),
            GbaBranch::Balanced => {
                let gr = prrd(&rat(k as i64, 2), coin).expect("k/2 is non-negative");
                StageDecision::new(k - gr, gr)
            }
        }
    }

    fn deterministic(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{enumerate_branches, NoCoins};
    use crate::model::is_feasible;
    use crate::rat::{rat, rat_u64, Rat};

    fn decide_gba(alloc: Allocation, il: u64, ir: u64) -> StageDecision {
        Gba.decide(&alloc, StageDemand::new(il, ir), &mut NoCoins)
    }

    #[test]
    fn gba_worked_stage_decisions() {
        let start = Allocation::initial(100);
        // light on both sides: plain greedy
        assert_eq!(decide_gba(start, 60, 20), StageDecision::new(60, 20));
        // heavy L, light R: greedy but as balanced as possible
        assert_eq!(decide_gba(start, 100, 30), StageDecision::new(70, 30));
        // heavy both: even split
        assert_eq!(decide_gba(start, 100, 100), StageDecision::new(50, 50));
    }

    #[test]
    fn gba_balanced_split_odd_k() {
        // odd k: L gets the ceiling, R the floor
        assert_eq!(decide_gba(Allocation::initial(5), 5, 5), StageDecision::new(3, 2));
    }

    #[test]
    fn gba_branch_priority() {
        // both greedy conditions hold: the L-greedy branch wins
        let alloc = Allocation::new(0, 2, 0);
        assert_eq!(gba_branch(&alloc, StageDemand::new(1, 1)), GbaBranch::GreedyL);
        assert_eq!(decide_gba(alloc, 1, 1), StageDecision::new(1, 1));
    }

    #[test]
    fn prgba_matches_gba_off_the_balanced_branch() {
        let start = Allocation::initial(100);
        // NoCoins panics on any draw, so this also proves no coin is used
        let d = PrGba.decide(&start, StageDemand::new(60, 20), &mut NoCoins);
        assert_eq!(d, StageDecision::new(60, 20));
    }

    #[test]
    fn prgba_balanced_even_k_is_deterministic() {
        let d = PrGba.decide(&Allocation::initial(4), StageDemand::new(4, 4), &mut NoCoins);
        assert_eq!(d, StageDecision::new(2, 2));
    }

    #[test]
    fn prgba_balanced_odd_k_distribution() {
        let alloc = Allocation::initial(5);
        let branches =
            enumerate_branches(1, |coin| PrGba.decide(&alloc, StageDemand::new(5, 5), coin)).unwrap();
        assert_eq!(branches.len(), 2);
        let e_gr: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value.gr)).sum();
        assert_eq!(e_gr, rat(5, 2));
        for b in &branches {
            assert!(b.value == StageDecision::new(3, 2) || b.value == StageDecision::new(2, 3));
            assert_eq!(b.weight, rat(1, 2));
        }
    }

    #[test]
    fn decisions_respect_case_split() {
        // every GBA decision satisfies one of (L1) gl=il, (L2) gl=cap_l,
        // (L3) gl=k-gr >= floor(k/2), and symmetrically for gr
        for k in 2u64..=7 {
            for at0 in 0..=k {
                for at1 in 0..=(k - at0) {
                    let alloc = Allocation::new(at0, k - at0 - at1, at1);
                    for il in 0..=2 * k {
                        for ir in 0..=2 * k {
                            let demand = StageDemand::new(il, ir);
                            let d = Gba.decide(&alloc, demand, &mut NoCoins);
                            assert!(is_feasible(&alloc, demand, d), "infeasible {d:?} for {alloc} {demand:?}");
                            let l_case = d.gl == il
                                || d.gl == alloc.cap_l()
                                || (d.gl == k - d.gr && d.gl >= k / 2);
                            let r_case = d.gr == ir
                                || d.gr == alloc.cap_r()
                                || (d.gr == k - d.gl && d.gr >= k / 2);
                            assert!(l_case && r_case, "case split broken: {d:?} for {alloc} {demand:?}");
                        }
                    }
                }
            }
        }
    }
}
