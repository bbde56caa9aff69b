//! The five online acceptance policies behind two interfaces.
//!
//! Stage policies (`gba`, `prgba`, `agba`) see a stage's full demand before
//! committing to accepted counts. Request policies (`argba`, `prargba`)
//! answer each request immediately as it arrives. Every decision a policy
//! returns is feasible for the allocation it was given.

mod agba;
mod argba;
mod gba;

pub use agba::{alpha_beta, Agba, AlphaBeta};
pub use argba::{Argba, ArgbaStage, PrArgba};
pub use gba::{Gba, PrGba};

use crate::coin::{enumerate_branches, CoinBudgetExceeded, CoinSource};
use crate::model::{Allocation, Direction, StageDecision, StageDemand};
use crate::rat::{format_rat, rat_u64, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Policy identifiers as exposed on the CLI and in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolicyId {
    Gba,
    Argba,
    PrGba,
    PrArgba,
    Agba,
}

impl PolicyId {
    pub const ALL: [PolicyId; 5] =
        [PolicyId::Gba, PolicyId::Argba, PolicyId::PrGba, PolicyId::PrArgba, PolicyId::Agba];

    pub fn name(&self) -> &'static str {
        match self {
            PolicyId::Gba => "gba",
            PolicyId::Argba => "argba",
            PolicyId::PrGba => "prgba",
            PolicyId::PrArgba => "prargba",
            PolicyId::Agba => "agba",
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, PolicyId::PrGba | PolicyId::PrArgba | PolicyId::Agba)
    }

    /// True for policies that decide a whole stage at once.
    pub fn is_stage_policy(&self) -> bool {
        matches!(self, PolicyId::Gba | PolicyId::PrGba | PolicyId::Agba)
    }

    pub fn build(&self) -> Policy {
        match self {
            PolicyId::Gba => Policy::Stage(Box::new(Gba)),
            PolicyId::PrGba => Policy::Stage(Box::new(PrGba)),
            PolicyId::Agba => Policy::Stage(Box::new(Agba)),
            PolicyId::Argba => Policy::Request(Box::new(Argba)),
            PolicyId::PrArgba => Policy::Request(Box::new(PrArgba)),
        }
    }
}

impl std::fmt::Display for PolicyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown policy `{0}` (expected one of: gba, argba, prgba, prargba, agba)")]
pub struct UnknownPolicy(pub String);

impl std::str::FromStr for PolicyId {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gba" => Ok(PolicyId::Gba),
            "argba" => Ok(PolicyId::Argba),
            "prgba" => Ok(PolicyId::PrGba),
            "prargba" => Ok(PolicyId::PrArgba),
            "agba" => Ok(PolicyId::Agba),
            other => Err(UnknownPolicy(other.to_string())),
        }
    }
}

/// Simultaneous-decision interface: the whole stage demand is visible.
pub trait StagePolicy {
    fn decide(&self, alloc: &Allocation, demand: StageDemand, coin: &mut dyn CoinSource) -> StageDecision;

    fn deterministic(&self) -> bool;
}

/// Sequential interface. A stage run is obtained from `begin_stage`, which
/// makes "step before begin" unrepresentable; the final tally is read off
/// the cursor once the stage's requests are exhausted.
pub trait RequestPolicy {
    fn begin_stage(&self, alloc: &Allocation) -> Box<dyn RequestStage>;

    fn deterministic(&self) -> bool;
}

pub trait RequestStage {
    /// Immediate accept (true) or reject (false) for one request.
    fn step(&mut self, r: Direction, coin: &mut dyn CoinSource) -> bool;

    /// Accepted counts so far; the stage decision once the stream ends.
    fn tally(&self) -> StageDecision;
}

/// A policy instance behind whichever of the two interfaces it implements.
pub enum Policy {
    Stage(Box<dyn StagePolicy>),
    Request(Box<dyn RequestPolicy>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrrdError {
    #[error("prrd argument must be non-negative, got {0}")]
    Negative(String),
}

/// Probabilistic rounding: returns `ceil(x)` with probability `frac(x)`,
/// else `floor(x)`, so the expectation is exactly `x`. Integral arguments
/// consume no randomness.
pub fn prrd(x: &Rat, coin: &mut dyn CoinSource) -> Result<u64, PrrdError> {
    if x.is_negative() {
        return Err(PrrdError::Negative(format_rat(x)));
    }
    let floor = x.floor();
    let frac = x - &floor;
    let base = floor.to_integer().to_u64().expect("prrd argument fits u64");
    if frac.is_zero() {
        Ok(base)
    } else if coin.flip(&frac) {
        Ok(base + 1)
    } else {
        Ok(base)
    }
}

/// Runs one stage of a request policy over a stream and returns the tally.
pub fn run_stream_stage(
    policy: &dyn RequestPolicy,
    alloc: &Allocation,
    stream: &[Direction],
    coin: &mut dyn CoinSource,
) -> StageDecision {
    let mut stage = policy.begin_stage(alloc);
    for r in stream {
        stage.step(*r, coin);
    }
    stage.tally()
}

/// Exact expected `(gl, gr)` of a stage policy on one stage, by coin-branch
/// enumeration.
pub fn expected_stage_decision(
    policy: &dyn StagePolicy,
    alloc: &Allocation,
    demand: StageDemand,
    limit: usize,
) -> Result<(Rat, Rat), CoinBudgetExceeded> {
    let branches = enumerate_branches(limit, |coin| policy.decide(alloc, demand, coin))?;
    Ok(combine(branches.iter().map(|b| (&b.weight, b.value))))
}

/// Exact expected `(gl, gr)` of a request policy over one stage's stream.
pub fn expected_stream_decision(
    policy: &dyn RequestPolicy,
    alloc: &Allocation,
    stream: &[Direction],
    limit: usize,
) -> Result<(Rat, Rat), CoinBudgetExceeded> {
    let branches = enumerate_branches(limit, |coin| run_stream_stage(policy, alloc, stream, coin))?;
    Ok(combine(branches.iter().map(|b| (&b.weight, b.value))))
}

fn combine<'a>(it: impl Iterator<Item = (&'a Rat, StageDecision)>) -> (Rat, Rat) {
    let (mut el, mut er) = (Rat::zero(), Rat::zero());
    for (w, d) in it {
        el += w * rat_u64(d.gl);
        er += w * rat_u64(d.gr);
    }
    (el, er)
}

/// Exact expected decision of any policy on a single stage. Count-shaped
/// inputs reach request policies as the canonical L-then-R stream.
pub fn expected_decision(
    id: PolicyId,
    alloc: &Allocation,
    demand: StageDemand,
    limit: usize,
) -> Result<(Rat, Rat), CoinBudgetExceeded> {
    match id.build() {
        Policy::Stage(p) => expected_stage_decision(p.as_ref(), alloc, demand, limit),
        Policy::Request(p) => {
            let mut stream = vec![Direction::L; demand.il as usize];
            stream.extend(std::iter::repeat(Direction::R).take(demand.ir as usize));
            expected_stream_decision(p.as_ref(), alloc, &stream, limit)
        }
    }
}

/// Checks that the expectation contract of randomness is respected:
/// deterministic policies must never flip.
pub(crate) fn assert_probability(p: &Rat) {
    debug_assert!(p > &Rat::zero() && p < &Rat::one(), "flip probability out of (0,1): {p}");
}
