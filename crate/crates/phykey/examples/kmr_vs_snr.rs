//! Key mismatch rate versus SNR for all five extractors and three estimator
//! qualities — a desk-scale version of the KMR curves.
//!
//! ```sh
//! cargo run --release --example kmr_vs_snr
//! ```

use phykey::harness::{run_sweep, ExperimentConfig, Pair};
use phykey::keygen::Algorithm;

fn main() -> phykey::Result<()> {
    let config = ExperimentConfig {
        master_seed: Some(1),
        trials: 500,
        ..Default::default()
    };
    let report = run_sweep(&config)?;

    for &e in &config.e_list {
        println!("\ne = {e}  (Alice-Bob KMR)");
        print!("{:>6}", "snr");
        for alg in Algorithm::ALL {
            print!("{:>10}", alg.name());
        }
        println!();
        for &snr in &config.snr_grid_db {
            print!("{snr:>6}");
            for alg in Algorithm::ALL {
                let row = report.find(alg, Pair::AliceBob, snr, e, None).unwrap();
                print!("{:>10.4}", row.mean_kmr);
            }
            println!();
        }
    }

    println!("\ne = {}  (Alice-Eve KMR, independent channel)", config.e_list[0]);
    for &snr in &config.snr_grid_db {
        let row = report
            .find(Algorithm::Niakg, Pair::AliceEve, snr, config.e_list[0], None)
            .unwrap();
        println!("{snr:>6}{:>10.4}  (niakg)", row.mean_kmr);
    }
    println!("\nmismatch falls with SNR and with better estimators (smaller e);");
    println!("Eve stays pinned near 0.5 regardless.");
    Ok(())
}
