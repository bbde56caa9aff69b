//! Single-stage decisions of the three stage policies across demand
//! regimes, starting from a fresh all-floating fleet of 100 servers.

use carshare::coin::{NoCoins, SeededCoins};
use carshare::policies::{alpha_beta, Agba, Gba, PrGba, StagePolicy};
use carshare::rat::format_rat;
use carshare::{Allocation, StageDemand};

fn main() {
    let k = 100;
    let start = Allocation::initial(k);
    println!("k = {k}, allocation {start}\n");

    println!("gba:");
    for (il, ir, regime) in [
        (60, 20, "light both sides: plain greedy"),
        (100, 30, "heavy L: greedy, as balanced as possible"),
        (100, 100, "heavy both: even split"),
    ] {
        let d = Gba.decide(&start, StageDemand::new(il, ir), &mut NoCoins);
        println!("  demand ({il:3}, {ir:3}) -> accept ({:3}, {:3})   {regime}", d.gl, d.gr);
    }

    // with an odd fleet the even split has a leftover server; prgba flips
    // one exact coin for it
    let k_odd = 5;
    let start_odd = Allocation::initial(k_odd);
    let gba = Gba.decide(&start_odd, StageDemand::new(5, 5), &mut NoCoins);
    println!("\nk = {k_odd}, demand (5, 5):");
    println!("  gba   -> ({}, {})", gba.gl, gba.gr);
    for seed in 0..4 {
        let d = PrGba.decide(&start_odd, StageDemand::new(5, 5), &mut SeededCoins::new(seed));
        println!("  prgba -> ({}, {})   seed {seed}", d.gl, d.gr);
    }

    // the adaptive policy aims at per-stage targets computed from the load
    println!("\nagba targets at k = {k}:");
    for (il, ir) in [(50u64, 100u64), (100, 100), (30, 40)] {
        let t = alpha_beta(il.min(k), ir.min(k), k);
        println!(
            "  demand ({il:3}, {ir:3}): load {}, alpha {}, beta {}",
            format_rat(&t.load),
            format_rat(&t.alpha),
            format_rat(&t.beta)
        );
    }
    for seed in 0..3 {
        let d = Agba.decide(&start, StageDemand::new(50, 100), &mut SeededCoins::new(seed));
        println!("  agba on (50, 100) -> ({}, {})   seed {seed}", d.gl, d.gr);
    }
}
