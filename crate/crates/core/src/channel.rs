//! Rayleigh multipath channel with a uniform power delay profile.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Time-domain impulse response of `M` taps.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTaps {
    taps: Vec<Complex64>,
}

impl ChannelTaps {
    /// Wraps explicit taps; at least one is required.
    pub fn new(taps: Vec<Complex64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidParameter(
                "channel needs at least one tap".into(),
            ));
        }
        Ok(Self { taps })
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn num_taps(&self) -> usize {
        self.taps.len()
    }

    /// Total tap energy `Σ|h_m|²`.
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|h| h.norm_sqr()).sum()
    }
}

/// One channel draw together with its frequency response.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    taps: ChannelTaps,
    response: Vec<Complex64>,
    squared_gains: Vec<f64>,
}

impl ChannelRealization {
    pub fn taps(&self) -> &ChannelTaps {
        &self.taps
    }

    pub fn response(&self) -> &[Complex64] {
        &self.response
    }

    /// Per-subcarrier power gains `|H(i)|²`.
    pub fn squared_gains(&self) -> &[f64] {
        &self.squared_gains
    }

    pub fn num_subcarriers(&self) -> usize {
        self.response.len()
    }
}

/// Draws `num_taps` i.i.d. circularly-symmetric complex Gaussian taps, each
/// with variance `1/num_taps`, so the expected total tap energy is one.
pub fn sample_taps<R: Rng + ?Sized>(num_taps: usize, rng: &mut R) -> Result<ChannelTaps> {
    if num_taps == 0 {
        return Err(Error::InvalidParameter(
            "num_taps must be at least 1".into(),
        ));
    }
    // Real and imaginary parts each carry half of the per-tap variance.
    let sigma = (0.5 / num_taps as f64).sqrt();
    let taps = (0..num_taps)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(sigma * re, sigma * im)
        })
        .collect();
    Ok(ChannelTaps { taps })
}

/// Evaluates `H(i) = Σ_m h_m e^{-j2πmi/N}` for every subcarrier by direct summation.
pub fn frequency_response(
    taps: &ChannelTaps,
    num_subcarriers: usize,
) -> Result<ChannelRealization> {
    let m = taps.num_taps();
    if num_subcarriers == 0 || m > num_subcarriers {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= M <= N, got M = {m}, N = {num_subcarriers}"
        )));
    }
    let n = num_subcarriers;
    // Twiddles indexed by (m·i) mod N keep the phase argument small.
    let twiddles: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
        .collect();
    let response: Vec<Complex64> = (0..n)
        .map(|i| {
            taps.taps
                .iter()
                .enumerate()
                .map(|(tap, h)| h * twiddles[(tap * i) % n])
                .sum()
        })
        .collect();
    let squared_gains = response.iter().map(|h| h.norm_sqr()).collect();
    Ok(ChannelRealization {
        taps: taps.clone(),
        response,
        squared_gains,
    })
}

/// Convenience wrapper: sample taps and compute the response in one go.
pub fn draw_channel<R: Rng + ?Sized>(
    num_taps: usize,
    num_subcarriers: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if num_taps > num_subcarriers {
        return Err(Error::InvalidParameter(format!(
            "need M <= N, got M = {num_taps}, N = {num_subcarriers}"
        )));
    }
    let taps = sample_taps(num_taps, rng)?;
    frequency_response(&taps, num_subcarriers)
}
