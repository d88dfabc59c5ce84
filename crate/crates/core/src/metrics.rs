//! Sum capacity, system BER and Monte Carlo averaging.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitLoadResult;
use crate::power::PowerVector;
use crate::qfunc::q_function;
use crate::rng::{trial_rng, TrialRng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitySample {
    /// Bits per OFDM symbol.
    pub value: f64,
    pub realization: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerSample {
    pub value: f64,
    pub realization: u64,
}

/// `Σ log2(1 + P_i g_i / σ²)`.
pub fn capacity_of(powers: &[f64], squared_gains: &[f64], noise_var: f64) -> f64 {
    powers
        .iter()
        .zip(squared_gains)
        .map(|(p, g)| (p * g / noise_var).ln_1p())
        .sum::<f64>()
        / std::f64::consts::LN_2
}

/// Capacity of `powers` over the true channel gains.
pub fn sum_capacity(
    powers: &PowerVector,
    true_squared_gains: &[f64],
    noise_var: f64,
    realization: u64,
) -> Result<CapacitySample> {
    if powers.len() != true_squared_gains.len() {
        return Err(Error::InvalidInput(format!(
            "{} powers for {} subcarriers",
            powers.len(),
            true_squared_gains.len()
        )));
    }
    if !(noise_var > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise variance {noise_var} must be positive"
        )));
    }
    Ok(CapacitySample {
        value: capacity_of(powers.powers(), true_squared_gains, noise_var),
        realization,
    })
}

/// Approximate symbol error `4Q(√(3Pg/(σ²(2^c - 1))))` of square QAM, clipped to 1.
pub fn subcarrier_symbol_error(
    power: f64,
    true_gain_sq: f64,
    noise_var: f64,
    bits: u32,
) -> Result<f64> {
    if bits == 0 || !bits.is_multiple_of(2) || bits > crate::bits::MAX_BITS {
        return Err(Error::InvalidParameter(format!(
            "symbol error needs 2, 4 or 6 bits per symbol, got {bits}"
        )));
    }
    if !(power >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "power {power} must be non-negative"
        )));
    }
    let levels = ((1u64 << bits) - 1) as f64;
    let arg = (3.0 * power * true_gain_sq / (noise_var * levels)).sqrt();
    Ok((4.0 * q_function(arg)).min(1.0))
}

/// Average over all `N` subcarriers of symbol error divided by bits per
/// symbol; unloaded subcarriers contribute zero.
pub fn system_ber(
    bits: &[u32],
    powers: &[f64],
    true_squared_gains: &[f64],
    noise_var: f64,
    realization: u64,
) -> Result<BerSample> {
    if bits.len() != powers.len() || bits.len() != true_squared_gains.len() {
        return Err(Error::InvalidInput(
            "bit, power and gain vectors differ in length".into(),
        ));
    }
    if bits.iter().all(|&c| c == 0) {
        return Err(Error::UndefinedBer);
    }
    let mut total = 0.0;
    for ((&c, &p), &g) in bits.iter().zip(powers).zip(true_squared_gains) {
        if c > 0 {
            total += subcarrier_symbol_error(p, g, noise_var, c)? / c as f64;
        }
    }
    Ok(BerSample {
        value: total / bits.len() as f64,
        realization,
    })
}

/// [`system_ber`] using the loader's own powers.
pub fn system_ber_of(
    load: &BitLoadResult,
    true_squared_gains: &[f64],
    noise_var: f64,
    realization: u64,
) -> Result<BerSample> {
    system_ber(
        load.bits(),
        load.powers(),
        true_squared_gains,
        noise_var,
        realization,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

impl MeanEstimate {
    /// Mean and standard error of `samples`, summed in index order.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let stderr = if samples.len() > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            trials: samples.len() as u64,
        }
    }
}

/// Evaluates `evaluator` on `num_trials` independent streams derived from
/// `master_seed`. Trials run in parallel; samples are reduced in trial order
/// so the result does not depend on scheduling.
pub fn monte_carlo_samples<F>(evaluator: F, num_trials: u64, master_seed: u64) -> Result<Vec<f64>>
where
    F: Fn(u64, &mut TrialRng) -> Result<f64> + Sync,
{
    (0..num_trials)
        .into_par_iter()
        .map(|t| evaluator(t, &mut trial_rng(master_seed, t)))
        .collect()
}

pub fn monte_carlo_mean<F>(evaluator: F, num_trials: u64, master_seed: u64) -> Result<MeanEstimate>
where
    F: Fn(u64, &mut TrialRng) -> Result<f64> + Sync,
{
    if num_trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let samples = monte_carlo_samples(evaluator, num_trials, master_seed)?;
    Ok(MeanEstimate::from_samples(&samples))
}
