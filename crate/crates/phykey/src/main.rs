//! Command-line front end over the [`phykey::harness`] experiment engine.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phykey::harness::{
    collect_key_streams, generate_keys, run_correlation, run_lengths, run_nist, run_sweep,
    write_bitstreams, ExperimentConfig,
};
use phykey::keygen::Algorithm;
use phykey::nist::{nist_suite, parse_ascii_bits};
use phykey::Result;

#[derive(Parser)]
#[command(
    name = "phykey",
    version,
    about = "Physical-layer key generation experiments: channel simulation, key extraction, KMR/KGR sweeps, and randomness testing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// KMR / effective-KGR curves over the (SNR, e) grid with an independent eavesdropper
    Sweep(RunArgs),
    /// Eavesdropper KMR/KGR versus correlation factor at the smallest configured e
    Correlation(RunArgs),
    /// NIKG/NIAKG key lengths for subblock sizes 4, 8, 16, 32
    Lengths(RunArgs),
    /// Randomness battery on concatenated keys (or on an existing bitstream file)
    Nist(NistArgs),
    /// Single-shot key generation from one seeded channel
    Keygen(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file mirroring the experiment fields; flags override it
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed (required, here or in the config file)
    #[arg(long)]
    seed: Option<u64>,

    /// Subcarriers per OFDM block
    #[arg(long)]
    n_subcarriers: Option<usize>,

    /// Subcarriers per subblock
    #[arg(long)]
    subblock_size: Option<usize>,

    /// Channel taps
    #[arg(long)]
    taps: Option<usize>,

    /// SNR grid in dB, comma separated
    #[arg(long, value_delimiter = ',')]
    snr: Option<Vec<f64>>,

    /// Estimator-quality scales, comma separated
    #[arg(long, value_delimiter = ',')]
    e: Option<Vec<f64>>,

    /// Eve correlation factors, comma separated
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,

    /// Key extractors to run
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,

    /// Monte-Carlo trials per point
    #[arg(long)]
    trials: Option<usize>,

    /// Output directory for CSV curves and bitstreams
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl RunArgs {
    fn build(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.master_seed = Some(seed);
        }
        if let Some(n) = self.n_subcarriers {
            config.n_subcarriers = n;
        }
        if let Some(n) = self.subblock_size {
            config.subblock_size = n;
        }
        if let Some(l) = self.taps {
            config.num_taps = l;
        }
        if let Some(snr) = &self.snr {
            config.snr_grid_db = snr.clone();
        }
        if let Some(e) = &self.e {
            config.e_list = e.clone();
        }
        if let Some(rho) = &self.rho {
            config.rho_list = rho.clone();
        }
        if let Some(algorithms) = &self.algorithms {
            config.algorithms = algorithms.clone();
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        if let Some(dir) = &self.output_dir {
            config.output_dir = dir.clone();
        }
        config.validate()?;
        config.seed()?; // fail early when no seed was provided anywhere
        Ok(config)
    }
}

#[derive(Args)]
struct NistArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Significance level for the pass/fail flags
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,

    /// Run the battery on an existing ASCII '0'/'1' file instead of simulating
    #[arg(long)]
    input: Option<PathBuf>,

    /// With --input: test each line as its own stream instead of one
    /// concatenated stream
    #[arg(long)]
    per_line: bool,
}

fn cmd_sweep(args: &RunArgs) -> Result<()> {
    let config = args.build()?;
    let report = run_sweep(&config)?;
    let csv_path = config.output_dir.join("sweep.csv");
    report.write_csv(&csv_path)?;
    println!("wrote {} rows to {}", report.rows.len(), csv_path.display());

    let streams = collect_key_streams(&config)?;
    let paths = write_bitstreams(&config.output_dir, &streams)?;
    let point = config.best_point();
    for path in paths {
        println!(
            "wrote bitstream {} (snr {} dB, e {})",
            path.display(),
            point.snr_db,
            point.e
        );
    }
    Ok(())
}

fn cmd_correlation(args: &RunArgs) -> Result<()> {
    let config = args.build()?;
    let report = run_correlation(&config)?;
    let csv_path = config.output_dir.join("correlation.csv");
    report.write_csv(&csv_path)?;
    println!("wrote {} rows to {}", report.rows.len(), csv_path.display());
    Ok(())
}

fn cmd_lengths(args: &RunArgs) -> Result<()> {
    let config = args.build()?;
    let rows = run_lengths(&config)?;
    println!("N={}", config.n_subcarriers);
    println!("{:>4} {:>4} {:>10} {:>11}", "n", "G", "NIKG bits", "NIAKG bits");
    for r in &rows {
        println!(
            "{:>4} {:>4} {:>10} {:>11}",
            r.subblock_size, r.num_subblocks, r.nikg_bits, r.niakg_bits
        );
    }
    Ok(())
}

fn cmd_nist(args: &NistArgs) -> Result<()> {
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path)?;
        if args.per_line {
            for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
                let bits = parse_ascii_bits(line)?;
                let report = nist_suite(&bits, args.alpha)?;
                println!("stream {i}:");
                print!("{report}");
            }
        } else {
            let bits = parse_ascii_bits(&text)?;
            let report = nist_suite(&bits, args.alpha)?;
            print!("{report}");
        }
        return Ok(());
    }

    let config = args.run.build()?;
    let point = config.best_point();
    println!(
        "battery on {} concatenated keys per algorithm (snr {} dB, e {})",
        config.trials, point.snr_db, point.e
    );
    for (alg, report) in run_nist(&config, args.alpha)? {
        println!("\n{alg}: {}", if report.all_passed() { "all tests passed" } else { "FAILED" });
        print!("{report}");
    }
    let streams = collect_key_streams(&config)?;
    for path in write_bitstreams(&config.output_dir, &streams)? {
        println!("wrote bitstream {}", path.display());
    }
    Ok(())
}

fn cmd_keygen(args: &RunArgs) -> Result<()> {
    let config = args.build()?;
    let point = config.best_point();
    println!(
        "keys from one seeded channel (seed {}, snr {} dB, e {})",
        config.seed()?,
        point.snr_db,
        point.e
    );
    for key in generate_keys(&config)? {
        println!("{:<6} {:>3} bits  {}", key.algorithm(), key.len(), key.to_ascii());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Correlation(args) => cmd_correlation(args),
        Command::Lengths(args) => cmd_lengths(args),
        Command::Nist(args) => cmd_nist(args),
        Command::Keygen(args) => cmd_keygen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
