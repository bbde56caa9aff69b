//! Domain types for two-location scheduling instances.
//!
//! Time is a sequence of discrete stages. A request either rides from
//! location 0 to 1 (`L`) or from 1 to 0 (`R`) and occupies one server for
//! one stage; serving any request is worth one unit of profit. Servers not
//! used in a stage float: they can be repositioned to either location for
//! free before the next stage, so the allocation entering stage `i+1` is
//! fully determined by the counts accepted in stage `i`.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Request direction: `L` picks up at location 0, `R` at location 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    L,
    R,
}

/// Per-stage request counts for the simultaneous-decision model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct StageDemand {
    pub il: u64,
    pub ir: u64,
}

impl StageDemand {
    pub fn new(il: u64, ir: u64) -> Self {
        StageDemand { il, ir }
    }

    pub fn total(&self) -> u64 {
        self.il + self.ir
    }

    /// Componentwise clamp, used by policies that never benefit from more
    /// than `cap` requests per direction.
    pub fn capped(&self, cap: u64) -> StageDemand {
        StageDemand { il: self.il.min(cap), ir: self.ir.min(cap) }
    }
}

/// Which arrival model an instance uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Simultaneous: the whole stage demand is visible before deciding.
    S,
    /// Sequential: requests arrive one by one and need an immediate answer.
    F,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::S => "S",
            Model::F => "F",
        })
    }
}

/// Server availability at a stage boundary: `at0` can serve `L`, `at1` can
/// serve `R`, and `floating` can be repositioned to serve either.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Allocation {
    pub at0: u64,
    pub floating: u64,
    pub at1: u64,
}

impl Allocation {
    /// The allocation before stage 1: every server floats.
    pub fn initial(k: u64) -> Self {
        Allocation { at0: 0, floating: k, at1: 0 }
    }

    pub fn new(at0: u64, floating: u64, at1: u64) -> Self {
        Allocation { at0, floating, at1 }
    }

    pub fn k(&self) -> u64 {
        self.at0 + self.floating + self.at1
    }

    /// Servers able to pick up at location 0 this stage.
    pub fn cap_l(&self) -> u64 {
        self.at0 + self.floating
    }

    /// Servers able to pick up at location 1 this stage.
    pub fn cap_r(&self) -> u64 {
        self.at1 + self.floating
    }
}

impl std::fmt::Display for Allocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}, {}]", self.at0, self.floating, self.at1)
    }
}

/// Accepted counts for one stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct StageDecision {
    pub gl: u64,
    pub gr: u64,
}

impl StageDecision {
    pub fn new(gl: u64, gr: u64) -> Self {
        StageDecision { gl, gr }
    }

    pub fn total(&self) -> u64 {
        self.gl + self.gr
    }
}

/// The bound a decision can violate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    DemandL,
    DemandR,
    Capacity0,
    Capacity1,
    KCap,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::DemandL => "demand-cap-l",
            BoundKind::DemandR => "demand-cap-r",
            BoundKind::Capacity0 => "capacity-0",
            BoundKind::Capacity1 => "capacity-1",
            BoundKind::KCap => "k-cap",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{bound} violated: got {got}, limit {limit}")]
pub struct InfeasibleDecision {
    pub bound: BoundKind,
    pub got: u64,
    pub limit: u64,
}

/// Capacity feasibility of `d` under `prev` (demand not considered).
fn check_capacity(prev: &Allocation, d: StageDecision) -> Result<(), InfeasibleDecision> {
    let k = prev.k();
    if d.gl > prev.cap_l() {
        return Err(InfeasibleDecision { bound: BoundKind::Capacity0, got: d.gl, limit: prev.cap_l() });
    }
    if d.gr > prev.cap_r() {
        return Err(InfeasibleDecision { bound: BoundKind::Capacity1, got: d.gr, limit: prev.cap_r() });
    }
    if d.total() > k {
        return Err(InfeasibleDecision { bound: BoundKind::KCap, got: d.total(), limit: k });
    }
    Ok(())
}

/// Full feasibility of `d` under `prev` and `demand`, reporting the first
/// violated bound (demand caps, then capacities, then the k-cap).
pub fn check_feasible(
    prev: &Allocation,
    demand: StageDemand,
    d: StageDecision,
) -> Result<(), InfeasibleDecision> {
    if d.gl > demand.il {
        return Err(InfeasibleDecision { bound: BoundKind::DemandL, got: d.gl, limit: demand.il });
    }
    if d.gr > demand.ir {
        return Err(InfeasibleDecision { bound: BoundKind::DemandR, got: d.gr, limit: demand.ir });
    }
    check_capacity(prev, d)
}

/// True iff `d.gl <= min(demand.il, cap_l)`, `d.gr <= min(demand.ir, cap_r)`
/// and `d.gl + d.gr <= k`. These three bounds are jointly sufficient: once
/// `gl` takes `max(0, gl - at0)` floating servers, the residual capacity for
/// `gr` is exactly `min(cap_r, k - gl)`.
pub fn is_feasible(prev: &Allocation, demand: StageDemand, d: StageDecision) -> bool {
    check_feasible(prev, demand, d).is_ok()
}

/// Advances the allocation across a stage: servers that served `L` end at
/// location 1, servers that served `R` end at location 0, everything else
/// floats. Fails when `d` is not capacity-feasible under `prev`.
pub fn transition(prev: &Allocation, d: StageDecision) -> Result<Allocation, InfeasibleDecision> {
    check_capacity(prev, d)?;
    let k = prev.k();
    Ok(Allocation { at0: d.gr, floating: k - d.total(), at1: d.gl })
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("stage {stage}: {source}")]
pub struct ScheduleInfeasible {
    /// 1-based stage index.
    pub stage: usize,
    pub source: InfeasibleDecision,
}

/// A full per-stage decision sequence for `k` servers.
///
/// Construction replays the allocation chain from the all-floating start and
/// rejects any decision that is not capacity-feasible, so a `Schedule` value
/// is always consistent with some demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    k: u64,
    decisions: Vec<StageDecision>,
}

impl Schedule {
    pub fn new(k: u64, decisions: Vec<StageDecision>) -> Result<Self, ScheduleInfeasible> {
        let mut alloc = Allocation::initial(k);
        for (i, d) in decisions.iter().enumerate() {
            alloc = transition(&alloc, *d).map_err(|source| ScheduleInfeasible { stage: i + 1, source })?;
        }
        Ok(Schedule { k, decisions })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn decisions(&self) -> &[StageDecision] {
        &self.decisions
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    /// Total accepted requests (unit profit per request).
    pub fn profit(&self) -> u64 {
        self.decisions.iter().map(StageDecision::total).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stages {
    Counts(Vec<StageDemand>),
    Streams(Vec<Vec<Direction>>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("k must be at least 1, got {0}")]
    KTooSmall(u64),
    #[error("an instance needs at least one stage")]
    NoStages,
}

/// A problem instance: server count plus per-stage demand.
///
/// In-memory instances accept any `k >= 1` (the offline oracle is meaningful
/// for a single server); the JSON interchange format additionally requires
/// `k >= 2`, matching the online model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    k: u64,
    stages: Stages,
}

impl Instance {
    pub fn simultaneous(k: u64, demands: Vec<StageDemand>) -> Result<Self, InstanceError> {
        if k < 1 {
            return Err(InstanceError::KTooSmall(k));
        }
        if demands.is_empty() {
            return Err(InstanceError::NoStages);
        }
        Ok(Instance { k, stages: Stages::Counts(demands) })
    }

    pub fn sequential(k: u64, streams: Vec<Vec<Direction>>) -> Result<Self, InstanceError> {
        if k < 1 {
            return Err(InstanceError::KTooSmall(k));
        }
        if streams.is_empty() {
            return Err(InstanceError::NoStages);
        }
        Ok(Instance { k, stages: Stages::Streams(streams) })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn model(&self) -> Model {
        match self.stages {
            Stages::Counts(_) => Model::S,
            Stages::Streams(_) => Model::F,
        }
    }

    pub fn num_stages(&self) -> usize {
        match &self.stages {
            Stages::Counts(v) => v.len(),
            Stages::Streams(v) => v.len(),
        }
    }

    /// Per-stage counts. For sequential instances this is the projection
    /// that forgets arrival order.
    pub fn demands(&self) -> Vec<StageDemand> {
        match &self.stages {
            Stages::Counts(v) => v.clone(),
            Stages::Streams(v) => v
                .iter()
                .map(|s| {
                    let il = s.iter().filter(|d| **d == Direction::L).count() as u64;
                    StageDemand::new(il, s.len() as u64 - il)
                })
                .collect(),
        }
    }

    /// Per-stage request streams. Counts expand to the canonical ordering:
    /// all `L` requests first, then all `R` requests.
    pub fn streams(&self) -> Vec<Vec<Direction>> {
        match &self.stages {
            Stages::Streams(v) => v.clone(),
            Stages::Counts(v) => v
                .iter()
                .map(|d| {
                    let mut s = vec![Direction::L; d.il as usize];
                    s.extend(std::iter::repeat(Direction::R).take(d.ir as usize));
                    s
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        parse_instance(text)
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    fn to_value(&self) -> Value {
        let stages: Vec<Value> = match &self.stages {
            Stages::Counts(v) => v.iter().map(|d| json!({"il": d.il, "ir": d.ir})).collect(),
            Stages::Streams(v) => v
                .iter()
                .map(|s| {
                    let seq: String =
                        s.iter().map(|d| if *d == Direction::L { 'L' } else { 'R' }).collect();
                    json!({ "seq": seq })
                })
                .collect(),
        };
        json!({"k": self.k, "model": self.model().to_string(), "stages": stages})
    }

    /// Stable content digest of the canonical JSON form.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_json().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `k` must be an integer, got {0}")]
    KNotInteger(Value),
    #[error("field `k` must be at least 2, got {0}")]
    KTooSmall(i64),
    #[error("field `model` must be \"S\" or \"F\", got {0}")]
    BadModel(Value),
    #[error("field `stages` must be a non-empty array")]
    EmptyStages,
    #[error("stage {stage}: field `{field}` must be a non-negative integer, got {value}")]
    BadCount { stage: usize, field: &'static str, value: Value },
    #[error("stage {stage}: expected {expected} for model {model}")]
    StageKind { stage: usize, model: Model, expected: &'static str },
    #[error("stage {stage}: character `{ch}` in `seq` is not one of {{L, R}}")]
    BadChar { stage: usize, ch: char },
}

fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let root: Value = serde_json::from_str(text)?;
    let k_val = root.get("k").cloned().unwrap_or(Value::Null);
    let k = k_val.as_i64().ok_or_else(|| ParseError::KNotInteger(k_val.clone()))?;
    if k < 2 {
        return Err(ParseError::KTooSmall(k));
    }
    let model_val = root.get("model").cloned().unwrap_or(Value::Null);
    let model = match model_val.as_str() {
        Some("S") => Model::S,
        Some("F") => Model::F,
        _ => return Err(ParseError::BadModel(model_val)),
    };
    let stages = root
        .get("stages")
        .and_then(Value::as_array)
        .filter(|v| !v.is_empty())
        .ok_or(ParseError::EmptyStages)?;

    match model {
        Model::S => {
            let mut demands = Vec::with_capacity(stages.len());
            for (idx, st) in stages.iter().enumerate() {
                let stage = idx + 1;
                if st.get("seq").is_some() || !st.is_object() {
                    return Err(ParseError::StageKind { stage, model, expected: "an object with `il` and `ir`" });
                }
                let field = |name: &'static str| -> Result<u64, ParseError> {
                    let v = st.get(name).cloned().unwrap_or(Value::Null);
                    match v.as_i64() {
                        Some(n) if n >= 0 => Ok(n as u64),
                        _ => Err(ParseError::BadCount { stage, field: name, value: v }),
                    }
                };
                demands.push(StageDemand::new(field("il")?, field("ir")?));
            }
            Ok(Instance { k: k as u64, stages: Stages::Counts(demands) })
        }
        Model::F => {
            let mut streams = Vec::with_capacity(stages.len());
            for (idx, st) in stages.iter().enumerate() {
                let stage = idx + 1;
                let seq = st
                    .get("seq")
                    .and_then(Value::as_str)
                    .ok_or(ParseError::StageKind { stage, model, expected: "an object with a `seq` string" })?;
                let mut stream = Vec::with_capacity(seq.len());
                for ch in seq.chars() {
                    match ch {
                        'L' => stream.push(Direction::L),
                        'R' => stream.push(Direction::R),
                        _ => return Err(ParseError::BadChar { stage, ch }),
                    }
                }
                streams.push(stream);
            }
            Ok(Instance { k: k as u64, stages: Stages::Streams(streams) })
        }
    }
}
