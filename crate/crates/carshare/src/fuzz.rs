//! Seeded instance generators shared by the verification suites.

use crate::model::{Instance, StageDemand};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random count-model instance: 1..=`max_stages` stages with per-direction
/// demand up to `max_demand` (above `k` on purpose, to exercise capping).
pub fn fuzz_s_instance(rng: &mut ChaCha8Rng, k: u64, max_stages: usize, max_demand: u64) -> Instance {
    let n = rng.gen_range(1..=max_stages);
    let demands =
        (0..n).map(|_| StageDemand::new(rng.gen_range(0..=max_demand), rng.gen_range(0..=max_demand))).collect();
    Instance::simultaneous(k, demands).unwrap()
}

/// The seeded corpus the acceptance checks share: `count` instances for one
/// `k`, up to 5 stages, demands up to `2k + 2`.
pub fn fuzz_corpus(k: u64, count: usize, seed: u64) -> Vec<Instance> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k);
    (0..count).map(|_| fuzz_s_instance(&mut rng, k, 5, 2 * k + 2)).collect()
}

/// All demand vectors with `stages` stages and per-direction demand at most
/// `cap`, in odometer order.
pub fn demand_grid(cap: u64, stages: usize) -> impl Iterator<Item = Vec<StageDemand>> {
    let mut current = Some(vec![StageDemand::new(0, 0); stages]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = current.as_mut().unwrap();
        let mut advanced = false;
        for d in next.iter_mut() {
            if d.ir < cap {
                d.ir += 1;
                advanced = true;
                break;
            }
            d.ir = 0;
            if d.il < cap {
                d.il += 1;
                advanced = true;
                break;
            }
            d.il = 0;
        }
        if !advanced {
            current = None;
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size_is_exact() {
        assert_eq!(demand_grid(2, 1).count(), 9);
        assert_eq!(demand_grid(2, 2).count(), 81);
        assert_eq!(demand_grid(1, 3).count(), 64);
    }

    #[test]
    fn corpus_is_reproducible() {
        let a = fuzz_corpus(3, 10, 99);
        let b = fuzz_corpus(3, 10, 99);
        assert_eq!(a, b);
        assert!(a.iter().all(|i| i.k() == 3 && i.num_stages() >= 1));
    }
}
