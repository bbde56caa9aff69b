//! Bundled fixture instances, embedded so the binary is self-contained.
//! The same files live in the crate's `fixtures/` directory for direct use
//! with `--instance`.

use crate::model::Instance;
use crate::policies::PolicyId;

pub const ALL: &[(&str, &str)] = &[
    ("thm6_k2", include_str!("../fixtures/thm6_k2.json")),
    ("thm6_k4", include_str!("../fixtures/thm6_k4.json")),
    ("thm6_k5", include_str!("../fixtures/thm6_k5.json")),
    ("thm7_k3", include_str!("../fixtures/thm7_k3.json")),
    ("thm7_k4", include_str!("../fixtures/thm7_k4.json")),
    ("thm8_k2", include_str!("../fixtures/thm8_k2.json")),
    ("thm9_k20_r11over10", include_str!("../fixtures/thm9_k20_r11over10.json")),
    ("thm9_k100_r2", include_str!("../fixtures/thm9_k100_r2.json")),
    ("prgba_k5", include_str!("../fixtures/prgba_k5.json")),
    ("prargba_k2", include_str!("../fixtures/prargba_k2.json")),
    ("agba_k100", include_str!("../fixtures/agba_k100.json")),
    ("gba_k100_greedy", include_str!("../fixtures/gba_k100_greedy.json")),
    ("gba_k100_semi", include_str!("../fixtures/gba_k100_semi.json")),
    ("gba_k100_balanced", include_str!("../fixtures/gba_k100_balanced.json")),
    ("opt_k2_pipeline", include_str!("../fixtures/opt_k2_pipeline.json")),
    ("opt_k4", include_str!("../fixtures/opt_k4.json")),
];

pub fn load(name: &str) -> Option<Instance> {
    let (_, text) = ALL.iter().find(|(n, _)| *n == name)?;
    Some(Instance::from_json(text).expect("bundled fixtures parse"))
}

/// The fixture `verify --alg <id> --k <n>` checks against.
pub fn fixture_for(policy: PolicyId, k: u64) -> Option<&'static str> {
    match (policy, k) {
        (PolicyId::Gba, 2) => Some("thm6_k2"),
        (PolicyId::Gba, 4) => Some("thm6_k4"),
        (PolicyId::Gba, 5) => Some("thm6_k5"),
        (PolicyId::Argba, 3) => Some("thm7_k3"),
        (PolicyId::Argba, 4) => Some("thm7_k4"),
        (PolicyId::PrGba, 5) => Some("prgba_k5"),
        (PolicyId::PrArgba, 2) => Some("thm8_k2"),
        (PolicyId::Agba, 100) => Some("agba_k100"),
        (PolicyId::Agba, 20) => Some("thm9_k20_r11over10"),
        _ => None,
    }
}

/// The fixtures with genuinely random behavior, used by the Monte Carlo
/// coherence check.
pub fn randomized_fixtures() -> Vec<(PolicyId, Instance)> {
    vec![
        (PolicyId::PrGba, load("prgba_k5").unwrap()),
        (PolicyId::PrArgba, load("thm8_k2").unwrap()),
        (PolicyId::PrArgba, load("prargba_k2").unwrap()),
        (PolicyId::Agba, load("agba_k100").unwrap()),
    ]
}
