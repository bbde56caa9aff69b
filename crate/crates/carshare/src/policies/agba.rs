//! Load-adaptive stage policy.
//!
//! Instead of always aiming at an even split, this policy computes per-stage
//! acceptance targets `alpha` (for `L`) and `beta` (for `R`) from the stage
//! load `R_i = (il + ir)/k`. Under full load (`R_i = 2`) the targets recover
//! the even split; under lighter load they tilt toward the heavier
//! direction, and for `R_i < 1` they equal the raw demands. When a target is
//! unreachable from the current allocation the policy turns greedy.

use super::{prrd, StagePolicy};
use crate::coin::CoinSource;
use crate::model::{Allocation, StageDecision, StageDemand};
use crate::rat::{rat_u64, Rat};
use num_bigint::BigInt;

/// Per-stage acceptance targets, as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaBeta {
    pub alpha: Rat,
    pub beta: Rat,
    /// The stage load `(il + ir) / k`.
    pub load: Rat,
}

/// Computes the targets for a stage whose demand is already capped at `k`
/// per direction. For load at least 1, `alpha + beta = k` exactly.
pub fn alpha_beta(il: u64, ir: u64, k: u64) -> AlphaBeta {
    debug_assert!(il <= k && ir <= k, "alpha_beta expects capped demand");
    let load = Rat::new(BigInt::from(il + ir), BigInt::from(k));
    if il + ir >= k {
        // ((1 - R)k + 3*il) / (2 + R) with R = (il+ir)/k, cleared of fractions:
        // k(k + 2*il - ir) / (2k + il + ir); the numerator is non-negative
        // because ir <= k.
        let den = BigInt::from(2 * k + il + ir);
        let alpha = Rat::new(BigInt::from(k) * BigInt::from(k + 2 * il - ir), den.clone());
        let beta = Rat::new(BigInt::from(k) * BigInt::from(k + 2 * ir - il), den);
        AlphaBeta { alpha, beta, load }
    } else {
        AlphaBeta { alpha: rat_u64(il), beta: rat_u64(ir), load }
    }
}

/// The adaptive policy. Demands above `k` per direction are capped on
/// entry; extra same-direction requests can never help.
pub struct Agba;

impl StagePolicy for Agba {
    fn decide(&self, alloc: &Allocation, demand: StageDemand, coin: &mut dyn CoinSource) -> StageDecision {
        let k = alloc.k();
        let demand = demand.capped(k);
        let targets = alpha_beta(demand.il, demand.ir, k);
        if rat_u64(alloc.cap_l()) < targets.alpha {
            // cannot reach the L target: take all L capacity; R is then
            // limited to the servers already at location 1
            let gl = alloc.cap_l();
            let gr = demand.ir.min(alloc.at1);
            StageDecision::new(gl, gr)
        } else if rat_u64(alloc.cap_r()) < targets.beta {
            let gr = alloc.cap_r();
            let gl = demand.il.min(alloc.at0);
            StageDecision::new(gl, gr)
        } else {
            // both targets reachable: round the L target, give R the rest.
            // Under load >= 1 the targets sum to k so E[gr] = beta; under
            // load < 1 the min caps R at its (integral) demand = beta.
            let gl = prrd(&targets.alpha, coin).expect("alpha is non-negative");
            let gr = (k - gl).min(demand.ir);
            StageDecision::new(gl, gr)
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
    use crate::rat::{rat, rat_u64};
    use num_traits::One;

    #[test]
    fn targets_for_uneven_heavy_stage() {
        let t = alpha_beta(50, 100, 100);
        assert_eq!(t.alpha, rat(200, 7));
        assert_eq!(t.beta, rat(500, 7));
        assert_eq!(&t.alpha + &t.beta, rat_u64(100));
        assert_eq!(t.load, rat(3, 2));
    }

    #[test]
    fn targets_at_full_load_recover_even_split() {
        for k in [2u64, 5, 100] {
            let t = alpha_beta(k, k, k);
            assert_eq!(t.alpha, Rat::new(BigInt::from(k), BigInt::from(2)));
            assert_eq!(t.beta, t.alpha);
        }
    }

    #[test]
    fn targets_under_light_load_are_the_demands() {
        let t = alpha_beta(0, 0, 4);
        assert_eq!(t.alpha, rat_u64(0));
        assert_eq!(t.beta, rat_u64(0));
        let t = alpha_beta(2, 1, 4);
        assert_eq!(t.alpha, rat_u64(2));
        assert_eq!(t.beta, rat_u64(1));
    }

    #[test]
    fn target_identities_small_exhaustive() {
        // alpha <= il, beta <= ir, alpha + beta <= k, and
        // k + alpha = d*(k + il) with d = min(1, 3/(2 + load))
        for k in 1u64..=12 {
            for il in 0..=k {
                for ir in 0..=k {
                    let t = alpha_beta(il, ir, k);
                    assert!(t.alpha <= rat_u64(il));
                    assert!(t.beta <= rat_u64(ir));
                    assert!(&t.alpha + &t.beta <= rat_u64(k));
                    let delta = (rat(3, 1) / (rat(2, 1) + &t.load)).min(Rat::one());
                    assert_eq!(rat_u64(k) + &t.alpha, &delta * (rat_u64(k) + rat_u64(il)));
                    assert_eq!(rat_u64(k) + &t.beta, &delta * (rat_u64(k) + rat_u64(ir)));
                    if il + ir >= k {
                        assert_eq!(&t.alpha + &t.beta, rat_u64(k));
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_when_load_below_one() {
        // both targets reachable and integral: accepts the raw demands
        let d = Agba.decide(&Allocation::initial(4), StageDemand::new(2, 1), &mut NoCoins);
        assert_eq!(d, StageDecision::new(2, 1));
    }

    #[test]
    fn capacity_starved_side_goes_greedy() {
        // no L capacity at all: alpha unreachable, R served from at1 only
        let d = Agba.decide(&Allocation::new(0, 0, 4), StageDemand::new(4, 4), &mut NoCoins);
        assert_eq!(d, StageDecision::new(0, 4));
    }

    #[test]
    fn balanced_branch_rounds_the_target() {
        let alloc = Allocation::initial(100);
        let branches =
            enumerate_branches(1, |coin| Agba.decide(&alloc, StageDemand::new(50, 100), coin)).unwrap();
        assert_eq!(branches.len(), 2);
        let e_gl: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value.gl)).sum();
        let e_gr: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value.gr)).sum();
        assert_eq!(e_gl, rat(200, 7));
        assert_eq!(e_gr, rat(500, 7));
        for b in &branches {
            assert!(b.value.gl == 28 || b.value.gl == 29);
            assert_eq!(b.value.total(), 100);
        }
    }

    #[test]
    fn decisions_always_feasible() {
        for k in 2u64..=6 {
            for at0 in 0..=k {
                for at1 in 0..=(k - at0) {
                    let alloc = Allocation::new(at0, k - at0 - at1, at1);
                    for il in 0..=2 * k + 1 {
                        for ir in 0..=2 * k + 1 {
                            let demand = StageDemand::new(il, ir);
                            let branches =
                                enumerate_branches(1, |coin| Agba.decide(&alloc, demand, coin)).unwrap();
                            for b in branches {
                                assert!(
                                    is_feasible(&alloc, demand, b.value),
                                    "infeasible {:?} for {alloc} {demand:?}",
                                    b.value
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
