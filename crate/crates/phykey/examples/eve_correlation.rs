//! What a nearby eavesdropper buys: Eve's channel is mixed with the
//! legitimate one as `h_e = ρ·h_ab + (1-ρ)·h_i`, and her key mismatch rate
//! against Alice drops as ρ grows — but a gap to Bob remains even at
//! ρ = 0.99.
//!
//! ```sh
//! cargo run --release --example eve_correlation
//! ```

use phykey::harness::{run_correlation, ExperimentConfig, Pair};
use phykey::keygen::Algorithm;

fn main() -> phykey::Result<()> {
    let config = ExperimentConfig {
        master_seed: Some(3),
        trials: 600,
        snr_grid_db: vec![10.0],
        algorithms: vec![Algorithm::Niakg],
        ..Default::default()
    };
    let report = run_correlation(&config)?;

    let e = config.e_list.iter().copied().fold(f64::INFINITY, f64::min);
    let snr = config.snr_grid_db[0];
    println!("niakg at {snr} dB, e = {e}:");
    let ab = report.find(Algorithm::Niakg, Pair::AliceBob, snr, e, None).unwrap();

    let mut rhos = config.rho_list.clone();
    rhos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("{:>6} {:>10}", "rho", "AE kmr");
    for &rho in &rhos {
        let row = report
            .find(Algorithm::Niakg, Pair::AliceEve, snr, e, Some(rho))
            .unwrap();
        let bar = "#".repeat((row.mean_kmr * 100.0) as usize);
        println!("{rho:>6} {:>10.4}  {bar}", row.mean_kmr);
    }
    println!("{:>6} {:>10.4}  (Alice-Bob reference)", "-", ab.mean_kmr);
    Ok(())
}
