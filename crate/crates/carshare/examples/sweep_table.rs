//! Ratio tables over k: the CSV the CLI's `sweep` subcommand emits.

use carshare::adversaries::{theorem6, theorem7, theorem9, DEFAULT_COIN_LIMIT};
use carshare::harness::{sweep_csv_header, sweep_row_csv, SweepRow};
use carshare::policies::{Agba, Argba, Gba, PolicyId};
use carshare::rat::{rat, rat_u64};

fn main() {
    let mut rows: Vec<SweepRow> = Vec::new();

    for k in 2u64..=10 {
        let out = theorem6(&Gba, k).unwrap();
        rows.push(SweepRow { policy: PolicyId::Gba, k, r: None, ratio: out.ratio });
    }
    for k in 2u64..=10 {
        let out = theorem7(&Argba, k).unwrap();
        rows.push(SweepRow { policy: PolicyId::Argba, k, r: None, ratio: out.ratio });
    }
    let k = 20;
    for r in [rat(1, 1), rat(11, 10), rat(3, 2), rat(2, 1)] {
        if !(&r * rat_u64(k)).is_integer() {
            continue;
        }
        let out = theorem9(&Agba, k, &r, DEFAULT_COIN_LIMIT).unwrap();
        rows.push(SweepRow { policy: PolicyId::Agba, k, r: Some(r), ratio: out.ratio });
    }

    println!("{}", sweep_csv_header());
    for row in &rows {
        println!("{}", sweep_row_csv(row));
    }
}
