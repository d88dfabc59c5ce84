//! Greedy minimum-power bit loading for square QAM.
//!
//! Each subcarrier carries `c ∈ {0, 2, 4, 6}` bits (off, 4-, 16-, 64-QAM).
//! Holding the symbol-error target `P_e` requires
//!
//! ```text
//! f(c) = σ² (2^c - 1) / (3 α) · [Q⁻¹(P_e / 4)]²
//! ```
//!
//! on a subcarrier with squared gain `α`. The loader adds two bits at a time
//! wherever the power increment `f(c + 2) - f(c)` is smallest.

use serde::{Deserialize, Serialize};

use crate::qfunc::q_inverse;
use crate::{Error, Result};

/// Bits per symbol of 64-QAM, the largest constellation.
pub const MAX_BITS: u32 = 6;

/// Power of the squared gain in the denominator of `f(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainExponent {
    /// `3·α`, consistent with the symbol-error expression `4Q(√(3Pα/(σ²(2^c-1))))`.
    #[default]
    One,
    /// `3·α²`, the alternative printed form.
    Two,
}

/// Fixed parameters of the power function `f(c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    noise_var: f64,
    target_symbol_error: f64,
    exponent: GainExponent,
    // [Q⁻¹(P_e/4)]²
    margin: f64,
}

impl PowerModel {
    pub fn new(noise_var: f64, target_symbol_error: f64, exponent: GainExponent) -> Result<Self> {
        if !(noise_var > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise variance {noise_var} must be positive"
            )));
        }
        if !(target_symbol_error > 0.0 && target_symbol_error < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target symbol error {target_symbol_error} must lie in (0, 1)"
            )));
        }
        let root = q_inverse(target_symbol_error / 4.0)?;
        Ok(Self {
            noise_var,
            target_symbol_error,
            exponent,
            margin: root * root,
        })
    }

    pub fn target_symbol_error(&self) -> f64 {
        self.target_symbol_error
    }

    /// Power needed to carry `bits` on a subcarrier with squared gain `gain_sq`.
    pub fn required_power(&self, bits: u32, gain_sq: f64) -> Result<f64> {
        if bits > MAX_BITS || !bits.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "bits per symbol must be one of 0, 2, 4, 6; got {bits}"
            )));
        }
        if !(gain_sq > 0.0) {
            return Err(Error::InvalidInput(format!(
                "squared gain {gain_sq} must be positive"
            )));
        }
        Ok(self.power_unchecked(bits, gain_sq))
    }

    fn power_unchecked(&self, bits: u32, gain_sq: f64) -> f64 {
        if bits == 0 {
            return 0.0;
        }
        let denom = match self.exponent {
            GainExponent::One => 3.0 * gain_sq,
            GainExponent::Two => 3.0 * gain_sq * gain_sq,
        };
        self.noise_var * ((1u64 << bits) - 1) as f64 / denom * self.margin
    }
}

/// Standalone form of [`PowerModel::required_power`].
pub fn required_power(
    bits: u32,
    gain_sq: f64,
    noise_var: f64,
    target_symbol_error: f64,
) -> Result<f64> {
    PowerModel::new(noise_var, target_symbol_error, GainExponent::One)?
        .required_power(bits, gain_sq)
}

/// Outcome of a bit-loading run.
#[derive(Debug, Clone, PartialEq)]
pub struct BitLoadResult {
    bits: Vec<u32>,
    powers: Vec<f64>,
    target_symbol_error: f64,
}

impl BitLoadResult {
    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn total_bits(&self) -> u32 {
        self.bits.iter().sum()
    }

    pub fn total_power(&self) -> f64 {
        self.powers.iter().sum()
    }

    pub fn target_symbol_error(&self) -> f64 {
        self.target_symbol_error
    }

    /// Constellation sizes `2^c`.
    pub fn constellations(&self) -> Vec<u32> {
        self.bits.iter().map(|&c| 1 << c).collect()
    }
}

/// Loads `total_bits` bits two at a time onto the subcarrier with the
/// cheapest power increment (lowest index on ties), capped at `max_bits`.
pub fn greedy_allocate(
    gain_estimates: &[f64],
    total_bits: u32,
    model: &PowerModel,
    max_bits: u32,
) -> Result<BitLoadResult> {
    if max_bits > MAX_BITS || !max_bits.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "max bits per subcarrier must be even and at most {MAX_BITS}, got {max_bits}"
        )));
    }
    if !total_bits.is_multiple_of(2)
        || total_bits as usize > max_bits as usize * gain_estimates.len()
    {
        return Err(Error::InvalidParameter(format!(
            "total bits {total_bits} must be even and at most {max_bits} x {}",
            gain_estimates.len()
        )));
    }
    if let Some(g) = gain_estimates.iter().find(|g| !(**g > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "squared gain {g} must be positive"
        )));
    }

    let n = gain_estimates.len();
    let mut bits = vec![0u32; n];
    let step = |c: u32, g: f64| model.power_unchecked(c + 2, g) - model.power_unchecked(c, g);
    let mut increments: Vec<f64> = gain_estimates.iter().map(|&g| step(0, g)).collect();
    for _ in 0..total_bits / 2 {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if bits[i] >= max_bits {
                continue;
            }
            if best.is_none_or(|b| increments[i] < increments[b]) {
                best = Some(i);
            }
        }
        let i = best
            .ok_or_else(|| Error::InconsistentState("no subcarrier can take more bits".into()))?;
        bits[i] += 2;
        increments[i] = step(bits[i], gain_estimates[i]);
    }
    let powers = bits
        .iter()
        .zip(gain_estimates)
        .map(|(&c, &g)| model.power_unchecked(c, g))
        .collect();
    Ok(BitLoadResult {
        bits,
        powers,
        target_symbol_error: model.target_symbol_error(),
    })
}

/// Rescales the loaded powers so they sum to `total_power`; bits are untouched.
pub fn scale_to_budget(result: &BitLoadResult, total_power: f64) -> Result<Vec<f64>> {
    let current = result.total_power();
    if current > 0.0 {
        let factor = total_power / current;
        return Ok(result.powers.iter().map(|p| p * factor).collect());
    }
    if result.total_bits() > 0 {
        return Err(Error::InconsistentState(
            "bits are loaded but the allocation uses no power".into(),
        ));
    }
    Ok(result.powers.clone())
}
