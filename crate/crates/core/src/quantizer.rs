//! Uniform scalar quantization of squared gains and feedback bit accounting.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default clamp ceiling for squared gains. `|H(i)|²` is Exp(1), so about
/// 1.8% of the mass sits above it.
pub const DEFAULT_UPPER: f64 = 4.0;

/// Largest supported resolution; bin indices are `u64`.
pub const MAX_BITS_PER_VALUE: u32 = 64;

/// A uniform quantizer on `[lower, upper]` with `2^bits_per_value` bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizerSpec {
    bits_per_value: u32,
    lower: f64,
    upper: f64,
}

impl QuantizerSpec {
    pub fn new(bits_per_value: u32, lower: f64, upper: f64) -> Result<Self> {
        if bits_per_value > MAX_BITS_PER_VALUE {
            return Err(Error::InvalidParameter(format!(
                "bits_per_value {bits_per_value} exceeds {MAX_BITS_PER_VALUE}"
            )));
        }
        if !(upper > lower) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "quantizer range [{lower}, {upper}] is empty"
            )));
        }
        Ok(Self {
            bits_per_value,
            lower,
            upper,
        })
    }

    /// Quantizer over the default gain range `[0, 4]`.
    pub fn for_gains(bits_per_value: u32) -> Result<Self> {
        Self::new(bits_per_value, 0.0, DEFAULT_UPPER)
    }

    pub fn bits_per_value(&self) -> u32 {
        self.bits_per_value
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Number of reconstruction levels, `2^bits` (as a float, since 2^64 overflows).
    pub fn num_levels(&self) -> f64 {
        2f64.powi(self.bits_per_value as i32)
    }

    /// Bin width Δ.
    pub fn step(&self) -> f64 {
        (self.upper - self.lower) / self.num_levels()
    }

    fn max_index(&self) -> u64 {
        if self.bits_per_value == 0 {
            0
        } else {
            u64::MAX >> (64 - self.bits_per_value)
        }
    }

    /// Maps a value to its bin; values above `upper` land in the top bin.
    pub fn encode(&self, value: f64) -> Result<u64> {
        if self.bits_per_value == 0 {
            return Err(Error::InvalidParameter(
                "encode needs at least one bit".into(),
            ));
        }
        if value.is_nan() || value < self.lower {
            return Err(Error::InvalidInput(format!(
                "value {value} is below the quantizer floor {}",
                self.lower
            )));
        }
        let bin = ((value - self.lower) / self.step()).floor();
        let max = self.max_index();
        if bin >= max as f64 {
            Ok(max)
        } else {
            Ok(bin as u64)
        }
    }

    /// Bin midpoint `lower + (index + 1/2)·Δ`.
    pub fn decode(&self, index: u64) -> Result<f64> {
        if self.bits_per_value == 0 || index > self.max_index() {
            return Err(Error::InvalidInput(format!(
                "bin index {index} out of range for {} bits",
                self.bits_per_value
            )));
        }
        Ok(self.lower + (index as f64 + 0.5) * self.step())
    }

    /// `decode(encode(value))`.
    pub fn quantize(&self, value: f64) -> Result<f64> {
        self.decode(self.encode(value)?)
    }
}

/// Equal split of the feedback budget across `num_nodes` gains; the
/// remainder `total_bits mod num_nodes` is unused.
pub fn bits_per_node(total_bits: u32, num_nodes: usize) -> Result<u32> {
    if num_nodes < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two nodes, got {num_nodes}"
        )));
    }
    if (total_bits as usize) < num_nodes {
        return Err(Error::InsufficientFeedback {
            bits: total_bits,
            nodes: num_nodes,
        });
    }
    Ok((total_bits as usize / num_nodes) as u32)
}

/// `ceil(log2(r))` for `r >= 1`.
pub fn ceil_log2(r: usize) -> u32 {
    assert!(r >= 1, "ceil_log2 of zero");
    usize::BITS - (r - 1).leading_zeros()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeedbackScheme {
    OnOff,
    InterpolatedGains,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeedbackPayload {
    /// One activation flag per cluster.
    Flags(Vec<bool>),
    /// One quantizer bin index per interpolation node.
    Bins(Vec<u64>),
}

/// What the receiver sends back for one channel realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackWord {
    pub scheme: FeedbackScheme,
    #[serde(rename = "K")]
    pub num_values: usize,
    #[serde(rename = "R")]
    pub spacing: usize,
    pub bits_per_value: u32,
    pub payload: FeedbackPayload,
    pub bit_cost: u32,
}

impl FeedbackWord {
    /// Cluster flags; costs one bit per cluster plus `ceil(log2 R)` for the cluster size.
    pub fn on_off(flags: Vec<bool>, cluster_size: usize) -> Self {
        let bit_cost = flags.len() as u32 + ceil_log2(cluster_size);
        Self {
            scheme: FeedbackScheme::OnOff,
            num_values: flags.len(),
            spacing: cluster_size,
            bits_per_value: 1,
            payload: FeedbackPayload::Flags(flags),
            bit_cost,
        }
    }

    /// Quantizes node gains; costs `K · bits_per_value`.
    pub fn interpolated_gains(
        node_gains: &[f64],
        spacing: usize,
        spec: &QuantizerSpec,
    ) -> Result<Self> {
        let bins = node_gains
            .iter()
            .map(|&g| spec.encode(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            scheme: FeedbackScheme::InterpolatedGains,
            num_values: bins.len(),
            spacing,
            bits_per_value: spec.bits_per_value(),
            bit_cost: bins.len() as u32 * spec.bits_per_value(),
            payload: FeedbackPayload::Bins(bins),
        })
    }

    /// Reconstructed node gains for an interpolated-gains word.
    pub fn node_values(&self, spec: &QuantizerSpec) -> Result<Vec<f64>> {
        match &self.payload {
            FeedbackPayload::Bins(bins) => bins.iter().map(|&b| spec.decode(b)).collect(),
            FeedbackPayload::Flags(_) => Err(Error::InvalidInput(
                "on/off feedback carries no node gains".into(),
            )),
        }
    }

    pub fn flags(&self) -> Option<&[bool]> {
        match &self.payload {
            FeedbackPayload::Flags(f) => Some(f),
            FeedbackPayload::Bins(_) => None,
        }
    }
}
