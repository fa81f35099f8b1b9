//! Monte-Carlo experiment engine.
//!
//! Every experiment is a pure function of an [`ExperimentConfig`] including
//! its master seed. Per-trial randomness comes from independently seeded
//! streams derived as `mix(mix(mix(master) ^ trial) ^ stream_tag)`, one
//! stream per role (channel, Eve channel, per-node noise, interleaver).
//! Because the channel and noise-shape streams depend only on the trial
//! index, sweeps reuse common random numbers across (SNR, e) points, which
//! sharpens every monotonicity comparison. Trials run in parallel and are
//! reduced in trial order, so results never depend on scheduling.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    correlated_eve_channel, frequency_response, observe_channel, sample_channel, Cfr,
    ImperfectionParams,
};
use crate::error::{Error, Result};
use crate::keygen::{make_interleaver, Algorithm, BitString, SubblockPartition};
use crate::metrics::{kgr, kmr};
use crate::nist::{nist_suite, TestReport};

/// Experiment parameters; serializable as a flat JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Subcarriers per OFDM block (N).
    pub n_subcarriers: usize,
    /// Subcarriers per subblock (n).
    pub subblock_size: usize,
    /// Channel taps (L).
    pub num_taps: usize,
    /// SNR grid in dB.
    pub snr_grid_db: Vec<f64>,
    /// Estimator-quality scales to sweep.
    pub e_list: Vec<f64>,
    /// Eavesdropper correlation factors for the correlation sweep.
    pub rho_list: Vec<f64>,
    /// Key extractors to run.
    pub algorithms: Vec<Algorithm>,
    /// Monte-Carlo trials per sweep point.
    pub trials: usize,
    /// Master seed; required (there is no implicit entropy source).
    pub master_seed: Option<u64>,
    /// Where CSV curves and bitstreams get written.
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_subcarriers: 128,
            subblock_size: 4,
            num_taps: 9,
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            e_list: vec![0.01, 0.001, 0.0001],
            rho_list: vec![0.99, 0.98, 0.95, 0.90, 0.80, 0.60, 0.0],
            algorithms: Algorithm::ALL.to_vec(),
            trials: 2000,
            master_seed: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_subcarriers == 0 || self.subblock_size == 0 {
            return Err(Error::Config("block sizes must be positive".into()));
        }
        if !self.n_subcarriers.is_multiple_of(self.subblock_size) {
            return Err(Error::Config(format!(
                "subblock size {} does not divide {} subcarriers",
                self.subblock_size, self.n_subcarriers
            )));
        }
        if self.num_taps == 0 || self.num_taps > self.n_subcarriers {
            return Err(Error::Config("tap count must lie in 1..=N".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("at least one trial is required".into()));
        }
        if self.e_list.iter().any(|&e| e < 0.0) {
            return Err(Error::Config("estimator scales must be nonnegative".into()));
        }
        if self.rho_list.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
            return Err(Error::Config("correlation factors must lie in [0,1]".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("select at least one algorithm".into()));
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64> {
        self.master_seed
            .ok_or_else(|| Error::Config("a master seed is required (--seed)".into()))
    }

    /// Load from a JSON file.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{path:?}: {e}")))
    }

    /// The cleanest operating point of the grid: highest SNR, smallest e.
    pub fn best_point(&self) -> TrialPoint {
        let snr = self
            .snr_grid_db
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let e = self.e_list.iter().copied().fold(f64::INFINITY, f64::min);
        TrialPoint {
            snr_db: snr,
            e,
            rho: None,
        }
    }
}

/// One (SNR, e, correlation) operating point. `rho = None` draws the
/// eavesdropper channel independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialPoint {
    pub snr_db: f64,
    pub e: f64,
    pub rho: Option<f64>,
}

/// Which node pair a record compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    AliceBob,
    AliceEve,
}

impl Pair {
    pub fn label(&self) -> &'static str {
        match self {
            Pair::AliceBob => "AB",
            Pair::AliceEve => "AE",
        }
    }
}

/// Per-trial, per-algorithm, per-pair outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub algorithm: Algorithm,
    pub snr_db: f64,
    pub e: f64,
    pub rho: Option<f64>,
    pub pair: Pair,
    pub key_len: usize,
    pub kmr: f64,
    pub kgr_eff: f64,
}

/// Independent RNG streams per trial.
#[derive(Debug, Clone, Copy)]
enum Stream {
    Channel = 0,
    EveChannel = 1,
    AliceNoise = 2,
    BobNoise = 3,
    EveNoise = 4,
    Interleaver = 5,
}

fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn derive_seed(master: u64, trial: u64, stream: Stream) -> u64 {
    mix(mix(mix(master) ^ trial) ^ stream as u64)
}

fn stream_rng(master: u64, trial: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, trial, stream))
}

/// The three nodes' keys for every selected algorithm in one trial.
pub struct TrialKeys {
    pub alice: Vec<BitString>,
    pub bob: Vec<BitString>,
    pub eve: Vec<BitString>,
}

/// Generate the per-node observations and keys for one trial at one point.
pub fn trial_keys(config: &ExperimentConfig, point: &TrialPoint, trial: u64) -> Result<TrialKeys> {
    let master = config.seed()?;
    let n = config.n_subcarriers;

    let h_ab = sample_channel(config.num_taps, &mut stream_rng(master, trial, Stream::Channel))?;
    let true_cfr = frequency_response(&h_ab, n)?;

    let mut eve_rng = stream_rng(master, trial, Stream::EveChannel);
    let h_eve = match point.rho {
        Some(rho) => correlated_eve_channel(&h_ab, rho, &mut eve_rng)?,
        None => sample_channel(config.num_taps, &mut eve_rng)?,
    };
    let eve_cfr = frequency_response(&h_eve, n)?;

    let params = ImperfectionParams::new(point.e, point.snr_db)?;
    let obs_alice = observe_channel(
        &true_cfr,
        &params,
        &mut stream_rng(master, trial, Stream::AliceNoise),
    )?;
    let obs_bob = observe_channel(
        &true_cfr,
        &params,
        &mut stream_rng(master, trial, Stream::BobNoise),
    )?;
    let obs_eve = observe_channel(
        &eve_cfr,
        &params,
        &mut stream_rng(master, trial, Stream::EveNoise),
    )?;

    // Eve knows the algorithm and the public interleaver seed.
    let ilv = make_interleaver(n, derive_seed(master, trial, Stream::Interleaver))?;
    let part = SubblockPartition::new(n, config.subblock_size)?;

    let extract_all = |obs: &Cfr| -> Result<Vec<BitString>> {
        config
            .algorithms
            .iter()
            .map(|alg| alg.extract(obs, &ilv, &part))
            .collect()
    };
    Ok(TrialKeys {
        alice: extract_all(&obs_alice)?,
        bob: extract_all(&obs_bob)?,
        eve: extract_all(&obs_eve)?,
    })
}

/// Run one trial and score both node pairs for every algorithm.
pub fn run_trial(
    config: &ExperimentConfig,
    point: &TrialPoint,
    trial: u64,
) -> Result<Vec<TrialRecord>> {
    let keys = trial_keys(config, point, trial)?;
    let n = config.n_subcarriers;
    let mut records = Vec::with_capacity(config.algorithms.len() * 2);
    for (i, &algorithm) in config.algorithms.iter().enumerate() {
        let alice = &keys.alice[i];
        for (pair, other) in [(Pair::AliceBob, &keys.bob[i]), (Pair::AliceEve, &keys.eve[i])] {
            let cmp = kmr(alice, other)?;
            records.push(TrialRecord {
                trial,
                algorithm,
                snr_db: point.snr_db,
                e: point.e,
                rho: match pair {
                    Pair::AliceBob => None,
                    Pair::AliceEve => point.rho,
                },
                pair,
                key_len: alice.len(),
                kmr: cmp.kmr,
                kgr_eff: kgr(alice, n, Some(&cmp)),
            });
        }
    }
    Ok(records)
}

/// All trials at one operating point, in parallel, in trial order.
pub fn run_point(config: &ExperimentConfig, point: &TrialPoint) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| run_trial(config, point, trial))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// One aggregated curve point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub pair: Pair,
    pub snr_db: f64,
    pub e: f64,
    pub rho: Option<f64>,
    pub mean_kmr: f64,
    pub mean_kgr: f64,
    pub trials: usize,
}

/// Aggregated sweep results, one row per (algorithm, pair, point).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Render as CSV with the fixed column set.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,pair,snr_db,e,rho,mean_kmr,mean_kgr,trials\n");
        for r in &self.rows {
            let rho = r.rho.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6},{}\n",
                r.algorithm,
                r.pair.label(),
                r.snr_db,
                r.e,
                rho,
                r.mean_kmr,
                r.mean_kgr,
                r.trials
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Look up one aggregated row.
    pub fn find(
        &self,
        algorithm: Algorithm,
        pair: Pair,
        snr_db: f64,
        e: f64,
        rho: Option<f64>,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.algorithm == algorithm
                && r.pair == pair
                && r.snr_db == snr_db
                && r.e == e
                && match (r.rho, rho) {
                    (None, None) => true,
                    (Some(a), Some(b)) => (a - b).abs() < 1e-12,
                    _ => false,
                }
        })
    }
}

fn aggregate(config: &ExperimentConfig, point: &TrialPoint, records: &[TrialRecord]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &algorithm in &config.algorithms {
        for pair in [Pair::AliceBob, Pair::AliceEve] {
            let subset: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.algorithm == algorithm && r.pair == pair)
                .collect();
            if subset.is_empty() {
                continue;
            }
            let trials = subset.len();
            let mean_kmr = subset.iter().map(|r| r.kmr).sum::<f64>() / trials as f64;
            let mean_kgr = subset.iter().map(|r| r.kgr_eff).sum::<f64>() / trials as f64;
            rows.push(SweepRow {
                algorithm,
                pair,
                snr_db: point.snr_db,
                e: point.e,
                rho: match pair {
                    Pair::AliceBob => None,
                    Pair::AliceEve => point.rho,
                },
                mean_kmr,
                mean_kgr,
                trials,
            });
        }
    }
    rows
}

/// The full (SNR × e) sweep with an independent eavesdropper: the KMR and
/// effective-KGR curves.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let mut report = SweepReport::default();
    for &e in &config.e_list {
        for &snr_db in &config.snr_grid_db {
            let point = TrialPoint {
                snr_db,
                e,
                rho: None,
            };
            let records = run_point(config, &point)?;
            report.rows.extend(aggregate(config, &point, &records));
        }
    }
    Ok(report)
}

/// The eavesdropper-correlation sweep: AE rows per (ρ, SNR) at the smallest
/// configured e, with the (ρ-independent) AB rows emitted once per SNR.
pub fn run_correlation(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let e = config.e_list.iter().copied().fold(f64::INFINITY, f64::min);
    let mut report = SweepReport::default();
    for &snr_db in &config.snr_grid_db {
        for (i, &rho) in config.rho_list.iter().enumerate() {
            let point = TrialPoint {
                snr_db,
                e,
                rho: Some(rho),
            };
            let records = run_point(config, &point)?;
            let rows = aggregate(config, &point, &records);
            if i == 0 {
                // Alice-Bob rows do not depend on ρ; keep the first set.
                report.rows.extend(rows.iter().filter(|r| r.pair == Pair::AliceBob).cloned());
            }
            report
                .rows
                .extend(rows.into_iter().filter(|r| r.pair == Pair::AliceEve));
        }
    }
    Ok(report)
}

/// One row of the key-length table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthsRow {
    pub subblock_size: usize,
    pub num_subblocks: usize,
    pub nikg_bits: usize,
    pub niakg_bits: usize,
}

/// Measure NIKG/NIAKG key lengths for subblock sizes {4, 8, 16, 32} on one
/// seeded channel realization.
pub fn run_lengths(config: &ExperimentConfig) -> Result<Vec<LengthsRow>> {
    let master = config.seed()?;
    let n = config.n_subcarriers;
    let h = sample_channel(config.num_taps, &mut stream_rng(master, 0, Stream::Channel))?;
    let cfr = frequency_response(&h, n)?;
    let ilv = make_interleaver(n, derive_seed(master, 0, Stream::Interleaver))?;
    let mut rows = Vec::new();
    for subblock in [4usize, 8, 16, 32] {
        if !n.is_multiple_of(subblock) {
            continue;
        }
        let part = SubblockPartition::new(n, subblock)?;
        let nikg_key = Algorithm::Nikg.extract(&cfr, &ilv, &part)?;
        let niakg_key = Algorithm::Niakg.extract(&cfr, &ilv, &part)?;
        rows.push(LengthsRow {
            subblock_size: subblock,
            num_subblocks: part.g,
            nikg_bits: nikg_key.len(),
            niakg_bits: niakg_key.len(),
        });
    }
    Ok(rows)
}

/// Concatenated Alice key streams per algorithm from `trials` independent
/// channels at the cleanest operating point.
pub fn collect_key_streams(config: &ExperimentConfig) -> Result<Vec<(Algorithm, Vec<BitString>)>> {
    config.validate()?;
    let point = config.best_point();
    let all: Vec<TrialKeys> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| trial_keys(config, &point, trial))
        .collect::<Result<_>>()?;
    Ok(config
        .algorithms
        .iter()
        .enumerate()
        .map(|(i, &alg)| {
            (
                alg,
                all.iter().map(|keys| keys.alice[i].clone()).collect::<Vec<_>>(),
            )
        })
        .collect())
}

/// Run the randomness battery on the concatenated per-algorithm streams.
pub fn run_nist(config: &ExperimentConfig, alpha: f64) -> Result<Vec<(Algorithm, TestReport)>> {
    collect_key_streams(config)?
        .into_iter()
        .map(|(alg, keys)| {
            let stream: Vec<u8> = keys.iter().flat_map(|k| k.bits().to_vec()).collect();
            Ok((alg, nist_suite(&stream, alpha)?))
        })
        .collect()
}

/// Single-shot key generation: Alice's keys from one seeded channel at the
/// cleanest operating point.
pub fn generate_keys(config: &ExperimentConfig) -> Result<Vec<BitString>> {
    config.validate()?;
    let keys = trial_keys(config, &config.best_point(), 0)?;
    Ok(keys.alice)
}

/// Write one ASCII bitstream file per algorithm (one key per line).
/// Returns the written paths.
pub fn write_bitstreams(
    dir: &Path,
    streams: &[(Algorithm, Vec<BitString>)],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (alg, keys) in streams {
        let path = dir.join(format!("keys_{alg}.txt"));
        let mut text = String::new();
        for key in keys {
            text.push_str(&key.to_ascii());
            text.push('\n');
        }
        std::fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}
