//! Sample a multipath channel, look at its power delay profile and
//! frequency response, and take a noisy observation of it.
//!
//! ```sh
//! cargo run --example channel_basics
//! ```

use phykey::channel::{
    exponential_pdp, frequency_response, observe_channel, sample_channel, ImperfectionParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> phykey::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let num_taps = 9;
    let n_subcarriers = 128;

    let pdp = exponential_pdp(num_taps, 1.0);
    println!("exponential power delay profile (L = {num_taps}):");
    for (l, p) in pdp.iter().enumerate() {
        println!("  tap {l}: {p:.4} {}", "#".repeat((p * 80.0) as usize));
    }

    let channel = sample_channel(num_taps, &mut rng)?;
    println!("\none realization, instantaneous power {:.4}", channel.total_power());

    let cfr = frequency_response(&channel, n_subcarriers)?;
    let mags = cfr.magnitudes();
    let peak = mags.iter().cloned().fold(0.0f64, f64::max);
    println!("\n|H[k]| over {n_subcarriers} subcarriers (deep fades are the gaps):");
    for row in 0..8 {
        let level = peak * (8 - row) as f64 / 8.0;
        let line: String = mags
            .iter()
            .step_by(2)
            .map(|&m| if m >= level { '#' } else { ' ' })
            .collect();
        println!("  {line}");
    }

    // Parseval ties the two domains together
    let freq_power: f64 = cfr.gains.iter().map(|g| g.norm_sqr()).sum::<f64>() / n_subcarriers as f64;
    println!("\nParseval check: time {:.6} vs frequency {:.6}", channel.total_power(), freq_power);

    // a noisy estimate of the same response
    let params = ImperfectionParams::new(0.01, 20.0)?;
    let observed = observe_channel(&cfr, &params, &mut rng)?;
    let err: f64 = observed
        .gains
        .iter()
        .zip(&cfr.gains)
        .map(|(o, t)| (o - t).norm_sqr())
        .sum::<f64>()
        / n_subcarriers as f64;
    println!(
        "observation with e = {} at {} dB: σ² = {:.2e}, measured error {:.2e}",
        params.e,
        params.snr_db,
        params.noise_variance(),
        err
    );
    Ok(())
}
