//! A verification lab for online two-location vehicle sharing with `k`
//! servers.
//!
//! Requests arrive in discrete stages and either ride from location 0 to 1
//! or back; unused servers relocate for free between stages. The crate
//! provides:
//!
//! - [`model`]: instances, allocations, stage decisions, the transition
//!   rule, and the JSON interchange format;
//! - [`policies`]: five online acceptance policies — `gba`, `prgba` and
//!   `agba` decide a whole stage at once, `argba` and `prargba` answer each
//!   request immediately;
//! - [`oracle`]: the exact offline optimum by dynamic programming, an
//!   exhaustive schedule enumerator that double-checks it, and a schedule
//!   validator;
//! - [`adversaries`]: the four adaptive request constructions that realize
//!   each policy's worst case, plus a brute-force worst-instance search;
//! - [`harness`]: realized and exact-expectation evaluation, Monte Carlo
//!   cross-checks, the six-sequence induction tracer, and report emission;
//! - [`acceptance`]: the runnable verification battery behind
//!   `carshare verify`.
//!
//! Everything that feeds a decision or a verdict is an exact rational; see
//! [`rat`]. Start with the `examples/` directory: each file exercises one
//! capability end to end.

pub mod acceptance;
pub mod adversaries;
pub mod coin;
pub mod fixtures;
pub mod fuzz;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod policies;
pub mod rat;

pub use model::{
    Allocation, Direction, Instance, Model, Schedule, StageDecision, StageDemand,
};
pub use policies::PolicyId;
pub use rat::Rat;
