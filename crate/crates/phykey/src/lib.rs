//! Physical-layer secret key generation from OFDM subchannels.
//!
//! Two nodes sharing a reciprocal multipath channel can harvest matching
//! secret bits from their channel estimates. This crate simulates the whole
//! pipeline end to end:
//!
//! * [`channel`] — multipath Rayleigh realizations with an exponential power
//!   delay profile, their frequency responses, noisy observations, and
//!   correlated eavesdropper channels;
//! * [`signal`] — the pilot transmit/receive chain and least-squares channel
//!   estimation, a signal-level alternative to direct observation;
//! * [`keygen`] — five key extractors: the subcarrier number/indices codebook
//!   scheme (NIKG), its joint amplitude extension (NIAKG), and the CKG, IKG,
//!   and JKG baselines;
//! * [`metrics`] — key mismatch rate and effective key generation rate;
//! * [`nist`] — the eight-test statistical randomness battery with P-values
//!   from hand-rolled erfc/incomplete-gamma kernels;
//! * [`harness`] — reproducible Monte-Carlo sweeps over SNR, estimator
//!   quality, and eavesdropper correlation, with CSV and bitstream outputs.
//!
//! Every random quantity flows from explicit seeded generators, so any
//! experiment is a pure function of its configuration. See `examples/` for
//! one runnable program per capability.

pub mod channel;
pub mod error;
pub mod harness;
pub mod keygen;
pub mod metrics;
pub mod nist;
pub mod signal;

pub use error::{Error, Result};
