//! Key bits per OFDM block as a function of the subblock size.
//!
//! NIKG yields `G·(⌊log2 C(n,1)⌋ + log2 n)` bits and NIAKG adds one
//! amplitude bit per subcarrier, so small subblocks win: n = 4 maximizes
//! both.
//!
//! ```sh
//! cargo run --example key_lengths
//! ```

use phykey::harness::{run_lengths, ExperimentConfig};

fn main() -> phykey::Result<()> {
    let config = ExperimentConfig {
        master_seed: Some(5),
        ..Default::default()
    };
    let rows = run_lengths(&config)?;
    println!("N = {} subcarriers", config.n_subcarriers);
    println!("{:>4} {:>4} {:>10} {:>11}", "n", "G", "NIKG bits", "NIAKG bits");
    for r in &rows {
        println!(
            "{:>4} {:>4} {:>10} {:>11}",
            r.subblock_size, r.num_subblocks, r.nikg_bits, r.niakg_bits
        );
    }
    println!("\nmeasured on one random channel; equals the closed-form maximum when");
    println!("no subblock is degenerate (all-equal magnitudes never happen in practice)");
    Ok(())
}
