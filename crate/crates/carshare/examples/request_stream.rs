//! Per-request accept/reject traces of the sequential policies.

use carshare::coin::{NoCoins, SeededCoins};
use carshare::policies::{Argba, PrArgba, RequestPolicy};
use carshare::{Allocation, Direction};

fn trace(label: &str, policy: &dyn RequestPolicy, alloc: &Allocation, stream: &[Direction], seed: Option<u64>) {
    let mut seeded;
    let mut none;
    let coin: &mut dyn carshare::coin::CoinSource = match seed {
        Some(s) => {
            seeded = SeededCoins::new(s);
            &mut seeded
        }
        None => {
            none = NoCoins;
            &mut none
        }
    };
    let mut stage = policy.begin_stage(alloc);
    print!("{label}: ");
    for r in stream {
        let mark = match (r, stage.step(*r, coin)) {
            (Direction::L, true) => "L+",
            (Direction::L, false) => "L-",
            (Direction::R, true) => "R+",
            (Direction::R, false) => "R-",
        };
        print!("{mark} ");
    }
    let d = stage.tally();
    println!("  -> stage tally ({}, {})", d.gl, d.gr);
}

fn main() {
    let k = 4;
    let start = Allocation::initial(k);
    println!("k = {k}, allocation {start}; '+' accepted, '-' rejected\n");

    let mut stream = vec![Direction::L; 4];
    stream.extend([Direction::R; 4]);

    // deterministic: 3 = ceil(2k/3) L's, then R's up to the k-cap
    trace("argba  ", &Argba, &start, &stream, None);

    // probabilistic: the third L sits on the 8/3 boundary and is accepted
    // with probability 2/3, different seeds realize different tallies
    for seed in 0..3 {
        trace(&format!("prargba (seed {seed})"), &PrArgba, &start, &stream, Some(seed));
    }

    // no capacity at location 0: every L bounces immediately
    let stranded = Allocation::new(0, 0, 4);
    println!("\nallocation {stranded}:");
    trace("argba  ", &Argba, &stranded, &[Direction::L; 3], None);
}
