//! Accept/reject policies for sequentially arriving requests.
//!
//! Per direction and stage, a request is accepted iff three gates pass:
//! the count of same-direction requests *received before it* is below the
//! stage-start capacity for that direction, below the exact threshold
//! `2k/3`, and the stage still has an idle server (`gl + gr < k`).
//!
//! The threshold test deliberately uses the before-receipt count. Testing
//! the post-increment counter instead would cap a direction one short of
//! its capacity, making a full-capacity tally unreachable; with the
//! before-count, a saturated direction ends at exactly `min(capacity,
//! ceil(2k/3))` idle servers permitting.

use super::{assert_probability, RequestPolicy, RequestStage};
use crate::coin::CoinSource;
use crate::model::{Allocation, Direction, StageDecision};
use crate::rat::rat;

/// Deterministic accept/reject policy.
pub struct Argba;

impl RequestPolicy for Argba {
    fn begin_stage(&self, alloc: &Allocation) -> Box<dyn RequestStage> {
        Box::new(ArgbaStage::new(alloc, false))
    }

    fn deterministic(&self) -> bool {
        true
    }
}

/// Probabilistic variant. When a request sits exactly on the fractional
/// boundary (its before-count equals `floor(2k/3)` with `2k/3` not an
/// integer) and the other two gates pass, it is accepted with probability
/// `frac(2k/3)`, so a saturated direction's expected tally is exactly
/// `2k/3`. With `3 | 2k` no boundary exists and the policy degenerates to
/// the deterministic one without consuming randomness.
pub struct PrArgba;

impl RequestPolicy for PrArgba {
    fn begin_stage(&self, alloc: &Allocation) -> Box<dyn RequestStage> {
        Box::new(ArgbaStage::new(alloc, true))
    }

    fn deterministic(&self) -> bool {
        false
    }
}

/// Per-stage cursor shared by both request policies.
pub struct ArgbaStage {
    k: u64,
    cap_l: u64,
    cap_r: u64,
    /// Requests of each direction received so far (incremented after the
    /// accept test, so the test sees the before-count).
    al: u64,
    ar: u64,
    gl: u64,
    gr: u64,
    probabilistic: bool,
}

impl ArgbaStage {
    fn new(alloc: &Allocation, probabilistic: bool) -> Self {
        ArgbaStage {
            k: alloc.k(),
            cap_l: alloc.cap_l(),
            cap_r: alloc.cap_r(),
            al: 0,
            ar: 0,
            gl: 0,
            gr: 0,
            probabilistic,
        }
    }

    fn admit(&mut self, before: u64, cap: u64, coin: &mut dyn CoinSource) -> bool {
        if before >= cap || self.gl + self.gr >= self.k {
            return false;
        }
        let three_b = 3 * before;
        let two_k = 2 * self.k;
        if three_b >= two_k {
            return false;
        }
        // boundary request: 0 < 2k/3 - before < 1
        if self.probabilistic && three_b + 3 > two_k {
            let p = rat((two_k - three_b) as i64, 3);
            assert_probability(&p);
            return coin.flip(&p);
        }
        true
    }
}

impl RequestStage for ArgbaStage {
    fn step(&mut self, r: Direction, coin: &mut dyn CoinSource) -> bool {
        match r {
            Direction::L => {
                let accept = self.admit(self.al, self.cap_l, coin);
                self.al += 1;
                if accept {
                    self.gl += 1;
                }
                accept
            }
            Direction::R => {
                let accept = self.admit(self.ar, self.cap_r, coin);
                self.ar += 1;
                if accept {
                    self.gr += 1;
                }
                accept
            }
        }
    }

    fn tally(&self) -> StageDecision {
        StageDecision::new(self.gl, self.gr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{enumerate_branches, NoCoins};
    use crate::model::{is_feasible, transition, StageDemand};
    use crate::policies::run_stream_stage;
    use crate::rat::{rat, rat_u64, Rat};
    use proptest::prelude::*;

    fn feed(policy: &dyn RequestPolicy, alloc: &Allocation, stream: &[Direction]) -> Vec<bool> {
        let mut stage = policy.begin_stage(alloc);
        stream.iter().map(|r| stage.step(*r, &mut NoCoins)).collect()
    }

    #[test]
    fn argba_threshold_blocks_third_request() {
        // k=3: 2k/3 = 2, so the third L sees a before-count of 2 and is cut off
        let answers = feed(&Argba, &Allocation::initial(3), &[Direction::L; 5]);
        assert_eq!(answers, vec![true, true, false, false, false]);
    }

    #[test]
    fn argba_l_flood_then_r_flood() {
        // k=4: accepts ceil(8/3)=3 L's, then one R up to the k-cap
        let alloc = Allocation::initial(4);
        let mut stream = vec![Direction::L; 4];
        stream.extend([Direction::R; 4]);
        let d = run_stream_stage(&Argba, &alloc, &stream, &mut NoCoins);
        assert_eq!(d, StageDecision::new(3, 1));
    }

    #[test]
    fn argba_no_capacity_rejects() {
        let answers = feed(&Argba, &Allocation::new(0, 0, 3), &[Direction::L]);
        assert_eq!(answers, vec![false]);
    }

    #[test]
    fn prargba_boundary_distribution_k2() {
        // k=2: first L sure (4/3 - 0 >= 1), second at the boundary w.p. 1/3,
        // third always rejected; E[gl] = 4/3
        let alloc = Allocation::initial(2);
        let branches =
            enumerate_branches(4, |coin| run_stream_stage(&PrArgba, &alloc, &[Direction::L; 3], coin))
                .unwrap();
        assert_eq!(branches.len(), 2);
        let e_gl: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value.gl)).sum();
        assert_eq!(e_gl, rat(4, 3));
        for b in &branches {
            if b.value.gl == 2 {
                assert_eq!(b.weight, rat(1, 3));
            } else {
                assert_eq!(b.value.gl, 1);
                assert_eq!(b.weight, rat(2, 3));
            }
        }
    }

    #[test]
    fn prargba_integral_threshold_uses_no_coin() {
        // k=3: 2k/3 integral, identical to ARGBA; NoCoins proves no draw
        let alloc = Allocation::initial(3);
        let d = run_stream_stage(&PrArgba, &alloc, &[Direction::L; 5], &mut NoCoins);
        assert_eq!(d, StageDecision::new(2, 0));
    }

    #[test]
    fn prargba_k4_expected_tally() {
        // two sure accepts, the third w.p. 2/3: E[gl] = 8/3
        let alloc = Allocation::initial(4);
        let branches =
            enumerate_branches(4, |coin| run_stream_stage(&PrArgba, &alloc, &[Direction::L; 4], coin))
                .unwrap();
        let e_gl: Rat = branches.iter().map(|b| &b.weight * rat_u64(b.value.gl)).sum();
        assert_eq!(e_gl, rat(8, 3));
    }

    #[test]
    fn argba_final_tallies_respect_case_split() {
        // final tallies satisfy one of (L1) gl=il, (L2) gl=cap_l,
        // (L3) gl=ceil(2k/3), (L4) gl+gr=k with both >= floor(k/3);
        // symmetrically for gr
        for k in 2u64..=7 {
            let ceil_two_thirds = (2 * k).div_ceil(3);
            for at0 in 0..=k {
                for at1 in 0..=(k - at0) {
                    let alloc = Allocation::new(at0, k - at0 - at1, at1);
                    for il in 0..=(2 * k).min(6) {
                        for ir in 0..=(2 * k).min(6) {
                            let mut stream = vec![Direction::L; il as usize];
                            stream.extend(std::iter::repeat(Direction::R).take(ir as usize));
                            let d = run_stream_stage(&Argba, &alloc, &stream, &mut NoCoins);
                            assert!(is_feasible(&alloc, StageDemand::new(il, ir), d));
                            let l_case = d.gl == il
                                || d.gl == alloc.cap_l()
                                || d.gl == ceil_two_thirds
                                || (d.total() == k && d.gl >= k / 3 && d.gr >= k / 3);
                            let r_case = d.gr == ir
                                || d.gr == alloc.cap_r()
                                || d.gr == ceil_two_thirds
                                || (d.total() == k && d.gl >= k / 3 && d.gr >= k / 3);
                            assert!(l_case && r_case, "tally {d:?} out of cases for {alloc} il={il} ir={ir}");
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rejection_is_monotone_per_direction(
            k in 2u64..8,
            at0 in 0u64..8,
            at1 in 0u64..8,
            bits in proptest::collection::vec(any::<bool>(), 0..24),
            seed in any::<u64>(),
        ) {
            prop_assume!(at0 + at1 <= k);
            let alloc = Allocation::new(at0, k - at0 - at1, at1);
            let stream: Vec<Direction> =
                bits.iter().map(|b| if *b { Direction::L } else { Direction::R }).collect();
            let mut coins = crate::coin::SeededCoins::new(seed);
            let mut stage = PrArgba.begin_stage(&alloc);
            let mut l_rejected = false;
            let mut r_rejected = false;
            for r in &stream {
                let accepted = stage.step(*r, &mut coins);
                match r {
                    Direction::L => {
                        if l_rejected {
                            prop_assert!(!accepted);
                        }
                        l_rejected |= !accepted;
                    }
                    Direction::R => {
                        if r_rejected {
                            prop_assert!(!accepted);
                        }
                        r_rejected |= !accepted;
                    }
                }
            }
            // and the tally replays into a feasible transition
            let d = stage.tally();
            prop_assert!(transition(&alloc, d).is_ok());
        }
    }
}
