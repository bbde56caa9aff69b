//! Randomness contract for the randomized policies.
//!
//! A policy draws at most one coin per probabilistic rounding, and only when
//! the argument is genuinely fractional, so deterministic branches are
//! bit-reproducible regardless of seed. Coins are exact Bernoulli draws: the
//! probability is a reduced rational and the sampler compares a uniform
//! integer below the denominator against the numerator, never a float.

use crate::rat::Rat;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub trait CoinSource {
    /// Returns true with probability exactly `p_up`. Callers only flip on
    /// strictly fractional probabilities (0 < p_up < 1).
    fn flip(&mut self, p_up: &Rat) -> bool;
}

/// Seeded source for reproducible realized runs.
pub struct SeededCoins {
    rng: ChaCha8Rng,
}

impl SeededCoins {
    pub fn new(seed: u64) -> Self {
        SeededCoins { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl CoinSource for SeededCoins {
    fn flip(&mut self, p_up: &Rat) -> bool {
        debug_assert!(!p_up.is_zero() && *p_up < Rat::one(), "coin probability must be in (0,1)");
        let num = p_up.numer().to_u64().expect("coin numerator fits u64");
        let den = p_up.denom().to_u64().expect("coin denominator fits u64");
        self.rng.gen_range(0..den) < num
    }
}

/// Source for runs that must not consume randomness; flipping is a bug.
pub struct NoCoins;

impl CoinSource for NoCoins {
    fn flip(&mut self, _p_up: &Rat) -> bool {
        panic!("deterministic run drew a coin");
    }
}

/// Replays a run along a scripted outcome prefix, recording every flip.
/// Flips beyond the script resolve to `false`.
struct ScriptCoins {
    script: Vec<bool>,
    path: Vec<(Rat, bool)>,
}

impl CoinSource for ScriptCoins {
    fn flip(&mut self, p_up: &Rat) -> bool {
        let outcome = self.script.get(self.path.len()).copied().unwrap_or(false);
        self.path.push((p_up.clone(), outcome));
        outcome
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("coin budget exceeded: a single run drew {used} coins, limit {limit}")]
pub struct CoinBudgetExceeded {
    pub used: usize,
    pub limit: usize,
}

/// One leaf of the coin-outcome tree.
#[derive(Clone, Debug)]
pub struct Branch<T> {
    /// Probability of this exact outcome path; weights over all branches sum to 1.
    pub weight: Rat,
    pub value: T,
}

/// Enumerates every coin-outcome path of `run` by replaying it once per
/// leaf. Works for any run shape: later flips may depend on earlier
/// outcomes. Errors out when one path draws more than `limit` coins.
pub fn enumerate_branches<T>(
    limit: usize,
    mut run: impl FnMut(&mut dyn CoinSource) -> T,
) -> Result<Vec<Branch<T>>, CoinBudgetExceeded> {
    let mut pending: Vec<Vec<bool>> = vec![Vec::new()];
    let mut out = Vec::new();
    while let Some(script) = pending.pop() {
        let scripted = script.len();
        let mut coins = ScriptCoins { script, path: Vec::new() };
        let value = run(&mut coins);
        if coins.path.len() > limit {
            return Err(CoinBudgetExceeded { used: coins.path.len(), limit });
        }
        // Every flip past the scripted prefix went `false`; queue its `true`
        // sibling so the whole tree gets visited exactly once.
        for j in scripted..coins.path.len() {
            let mut sibling: Vec<bool> = coins.path[..j].iter().map(|(_, o)| *o).collect();
            sibling.push(true);
            pending.push(sibling);
        }
        let weight = coins.path.iter().fold(Rat::one(), |w, (p, o)| {
            if *o {
                w * p
            } else {
                w * (Rat::one() - p)
            }
        });
        out.push(Branch { weight, value });
    }
    Ok(out)
}

/// Expectation of a rational-valued branch enumeration.
pub fn expectation(branches: &[Branch<Rat>]) -> Rat {
    branches.iter().fold(Rat::zero(), |acc, b| acc + &b.weight * &b.value)
}
