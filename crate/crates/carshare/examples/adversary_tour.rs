//! Plays each adversary construction against its policy for a few fleet
//! sizes and compares the realized ratio with the closed form.

use carshare::adversaries::{theorem6, theorem7, theorem8, theorem9, DEFAULT_COIN_LIMIT};
use carshare::policies::{Agba, Argba, Gba, PrArgba, PrGba};
use carshare::rat::{format_rat, rat, Rat};

fn main() {
    println!("theorem 6 vs gba (closed form 2k/(k + floor(k/2))):");
    for k in [2u64, 4, 5, 9, 50] {
        let out = theorem6(&Gba, k).unwrap();
        let want = Rat::new((2 * k).into(), (k + k / 2).into());
        println!(
            "  k={k:3}: alg {} / opt {} -> ratio {}   (expected {})",
            format_rat(&out.alg_profit),
            out.opt_profit,
            format_rat(&out.ratio),
            format_rat(&want)
        );
        assert_eq!(out.ratio, want);
    }

    println!("\ntheorem 7 vs argba (closed form 2k/(k + floor(k/3))):");
    for k in [2u64, 3, 4, 5, 50] {
        let out = theorem7(&Argba, k).unwrap();
        let stopped = if out.instance.num_stages() == 1 { "adversary stopped early" } else { "full two stages" };
        println!("  k={k:3}: ratio {}   ({stopped})", format_rat(&out.ratio));
    }

    println!("\ntheorem 8 vs prargba (expected ratio is 3/2 for every k):");
    for k in [2u64, 3, 7, 40] {
        let out = theorem8(&PrArgba, k, DEFAULT_COIN_LIMIT).unwrap();
        println!("  k={k:3}: E[alg] {} / opt {} -> {}", format_rat(&out.alg_profit), out.opt_profit, format_rat(&out.ratio));
        assert_eq!(out.ratio, rat(3, 2));
    }

    println!("\ntheorem 9 vs prgba at R=2 (expected ratio is 4/3 for every k):");
    for k in [2u64, 5, 99] {
        let out = theorem9(&PrGba, k, &rat(2, 1), DEFAULT_COIN_LIMIT).unwrap();
        println!("  k={k:3}: ratio {}", format_rat(&out.ratio));
        assert_eq!(out.ratio, rat(4, 3));
    }

    println!("\ntheorem 9 vs agba (expected ratio is (2+R)/3):");
    for (k, r) in [(20u64, rat(11, 10)), (20, rat(3, 2)), (20, rat(2, 1)), (100, rat(5, 4))] {
        let out = theorem9(&Agba, k, &r, DEFAULT_COIN_LIMIT).unwrap();
        let want = (rat(2, 1) + &r) / rat(3, 1);
        println!("  k={k:3}, R={}: ratio {} (= {})", format_rat(&r), format_rat(&out.ratio), format_rat(&want));
        assert_eq!(out.ratio, want);
    }

    // the adaptive policy strictly beats the balanced one under light load
    let gba_ratio = theorem9(&Gba, 100, &rat(3, 2), DEFAULT_COIN_LIMIT).unwrap().ratio;
    let agba_ratio = theorem9(&Agba, 100, &rat(3, 2), DEFAULT_COIN_LIMIT).unwrap().ratio;
    println!(
        "\nat R = 3/2, k = 100: gba pays {}, agba only {}",
        format_rat(&gba_ratio),
        format_rat(&agba_ratio)
    );
    assert!(agba_ratio < gba_ratio);
}
