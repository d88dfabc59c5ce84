//! Scheme composition, Monte Carlo runs, parameter sweeps and figure bundles.
//!
//! Every trial draws one channel from the evaluation stream of the master
//! seed, so two schemes run with the same seed see the same channels.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{greedy_allocate, scale_to_budget, GainExponent, PowerModel, MAX_BITS};
use crate::channel::draw_channel;
use crate::interpolation::{interpolate, Method, NodePlan};
use crate::metrics::{capacity_of, monte_carlo_mean, system_ber, MeanEstimate};
use crate::power::{
    allocate_from_flags, cluster_averages, cluster_flags, default_threshold_grid,
    optimize_threshold, uniform_allocate, waterfill, ClusterPlan,
};
use crate::quantizer::{bits_per_node, ceil_log2, FeedbackWord, QuantizerSpec};
use crate::rng::{training_rng, TrialRng};
use crate::{Error, Result, GAIN_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    OnoffClustered,
    WaterfillLinearInterp,
    WaterfillQuadraticInterp,
    WaterfillPerfect,
    Uniform,
    BitloadLinearInterp,
    BitloadQuadraticInterp,
    BitloadPerfect,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::OnoffClustered,
        Scheme::WaterfillLinearInterp,
        Scheme::WaterfillQuadraticInterp,
        Scheme::WaterfillPerfect,
        Scheme::Uniform,
        Scheme::BitloadLinearInterp,
        Scheme::BitloadQuadraticInterp,
        Scheme::BitloadPerfect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::OnoffClustered => "onoff_clustered",
            Scheme::WaterfillLinearInterp => "waterfill_linear_interp",
            Scheme::WaterfillQuadraticInterp => "waterfill_quadratic_interp",
            Scheme::WaterfillPerfect => "waterfill_perfect",
            Scheme::Uniform => "uniform",
            Scheme::BitloadLinearInterp => "bitload_linear_interp",
            Scheme::BitloadQuadraticInterp => "bitload_quadratic_interp",
            Scheme::BitloadPerfect => "bitload_perfect",
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Scheme::BitloadLinearInterp
            | Scheme::BitloadQuadraticInterp
            | Scheme::BitloadPerfect => Metric::Ber,
            _ => Metric::Capacity,
        }
    }

    /// Interpolation method for the schemes that feed back node gains.
    pub fn interpolation(self) -> Option<Method> {
        match self {
            Scheme::WaterfillLinearInterp | Scheme::BitloadLinearInterp => Some(Method::Linear),
            Scheme::WaterfillQuadraticInterp | Scheme::BitloadQuadraticInterp => {
                Some(Method::Quadratic)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scheme::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!(
                    "unknown scheme '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Capacity,
    Ber,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Capacity => "capacity",
            Metric::Ber => "ber",
        })
    }
}

/// Everything needed to run one scheme at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub n: usize,
    pub m: usize,
    /// Number of clusters (on/off) or interpolation nodes.
    pub k: Option<usize>,
    /// Cluster size (on/off) or nominal node spacing.
    pub r: Option<usize>,
    /// Feedback budget for node gains.
    pub b: u32,
    /// Bits per OFDM symbol for bit loading.
    pub c_b: u32,
    pub p_t: f64,
    pub noise_var: f64,
    /// Target symbol error for bit loading.
    pub p_e: f64,
    pub trials: u64,
    pub seed: u64,
    pub training_trials: u64,
    /// Feed back unquantized node gains (infinite-rate reference).
    pub ideal_nodes: bool,
    pub gain_exponent: GainExponent,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::WaterfillLinearInterp,
            n: 128,
            m: 10,
            k: None,
            r: None,
            b: 128,
            c_b: 128,
            p_t: 1.0,
            noise_var: 0.1,
            p_e: 1e-3,
            trials: 3000,
            seed: 1,
            training_trials: 500,
            ideal_nodes: false,
            gain_exponent: GainExponent::One,
        }
    }
}

/// Node/cluster count used when neither `k` nor `r` is set.
pub const DEFAULT_K: usize = 32;

impl SchemeConfig {
    pub fn with_scheme(scheme: Scheme) -> Self {
        Self {
            scheme,
            ..Self::default()
        }
    }

    /// Total SNR `P_T / σ²` in dB.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.p_t / self.noise_var).log10()
    }

    pub fn set_snr_db(&mut self, snr_db: f64) {
        self.p_t = 10f64.powf(snr_db / 10.0) * self.noise_var;
    }

    /// Resolved `(K, R)` pair.
    ///
    /// On/off: `K = ceil(N/R)`, with `R = ceil(N/K)` when only `K` is given.
    /// Everything else: `R = floor((N-1)/(K-1))` from `K`, or `K = ceil(N/R)`
    /// when only `R` is given (then `R` is the nominal spacing).
    pub fn resolved_kr(&self) -> (usize, usize) {
        let n = self.n.max(1);
        if self.scheme == Scheme::OnoffClustered {
            let r = match (self.k, self.r) {
                (_, Some(r)) => r,
                (Some(k), None) => n.div_ceil(k.max(1)),
                (None, None) => n.div_ceil(DEFAULT_K.min(n)),
            };
            (n.div_ceil(r.max(1)), r)
        } else {
            match (self.k, self.r) {
                (Some(k), _) => (k, node_spacing(n, k)),
                (None, Some(r)) => (n.div_ceil(r.max(1)), r),
                (None, None) => {
                    let k = DEFAULT_K.min(n);
                    (k, node_spacing(n, k))
                }
            }
        }
    }

    /// Checks parameter domains and cross-field consistency.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.m == 0 || self.m > self.n {
            return bad(format!("m must lie in 1..={}, got {}", self.n, self.m));
        }
        if let Some(k) = self.k {
            if k == 0 || k > self.n {
                return bad(format!("k must lie in 1..={}, got {k}", self.n));
            }
        }
        if let Some(r) = self.r {
            if r == 0 || r > self.n {
                return bad(format!("r must lie in 1..={}, got {r}", self.n));
            }
        }
        if let (Some(k), Some(r)) = (self.k, self.r) {
            if !kr_consistent(self.n, k, r) {
                return bad(format!(
                    "k = {k} and r = {r} are inconsistent for n = {}",
                    self.n
                ));
            }
        }
        if !(self.p_t > 0.0) || !self.p_t.is_finite() {
            return bad(format!("p_t must be positive, got {}", self.p_t));
        }
        if !(self.noise_var > 0.0) || !self.noise_var.is_finite() {
            return bad(format!(
                "noise_var must be positive, got {}",
                self.noise_var
            ));
        }
        if !(self.p_e > 0.0 && self.p_e < 1.0) {
            return bad(format!("p_e must lie in (0, 1), got {}", self.p_e));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.scheme == Scheme::OnoffClustered && self.training_trials == 0 {
            return bad("training_trials must be at least 1".into());
        }
        if self.scheme.metric() == Metric::Ber
            && (!self.c_b.is_multiple_of(2)
                || self.c_b as usize > MAX_BITS as usize * self.n
                || self.c_b == 0)
        {
            return bad(format!(
                "c_b must be even and in 2..={}, got {}",
                MAX_BITS as usize * self.n,
                self.c_b
            ));
        }
        if let Some(method) = self.scheme.interpolation() {
            let (k, _) = self.resolved_kr();
            let min = if method == Method::Quadratic { 3 } else { 2 };
            if k < min || k > self.n {
                return bad(format!(
                    "{} needs {min} <= k <= n, got k = {k}",
                    self.scheme
                ));
            }
            if !self.ideal_nodes {
                bits_per_node(self.b, k)?;
            }
        }
        Ok(())
    }

    /// Feedback bits one realization costs under this scheme.
    pub fn feedback_bits(&self) -> Result<u32> {
        let (k, r) = self.resolved_kr();
        match self.scheme {
            Scheme::OnoffClustered => Ok(k as u32 + ceil_log2(r)),
            s if s.interpolation().is_some() => {
                if self.ideal_nodes {
                    Ok(0)
                } else {
                    Ok(k as u32 * bits_per_node(self.b, k)?)
                }
            }
            _ => Ok(0),
        }
    }
}

fn node_spacing(n: usize, k: usize) -> usize {
    if k >= 2 {
        (n - 1) / (k - 1)
    } else {
        n
    }
}

/// True when `k` and `r` agree under either the cluster or the node relation.
pub fn kr_consistent(n: usize, k: usize, r: usize) -> bool {
    n.div_ceil(r) == k || (k >= 2 && node_spacing(n, k) == r)
}

/// One (configuration, metric) result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: SchemeConfig,
    pub metric: Metric,
    pub k: usize,
    pub r: usize,
    pub mean: f64,
    pub stderr: f64,
    pub feedback_bits: u32,
    /// Trained on/off threshold, when the scheme uses one.
    pub threshold: Option<f64>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ExperimentRecord {
    pub fn estimate(&self) -> MeanEstimate {
        MeanEstimate {
            mean: self.mean,
            stderr: self.stderr,
            trials: self.config.trials,
        }
    }
}

/// Per-configuration state shared by all trials.
enum Prepared {
    OnOff {
        plan: ClusterPlan,
    },
    Waterfill {
        nodes: Option<NodeFeedback>,
    },
    Uniform,
    Bitload {
        nodes: Option<NodeFeedback>,
        model: PowerModel,
    },
}

struct NodeFeedback {
    plan: NodePlan,
    method: Method,
    quantizer: Option<QuantizerSpec>,
}

impl NodeFeedback {
    fn new(config: &SchemeConfig, method: Method) -> Result<Self> {
        let (k, _) = config.resolved_kr();
        let plan = NodePlan::new(config.n, k)?;
        let quantizer = if config.ideal_nodes {
            None
        } else {
            Some(QuantizerSpec::for_gains(bits_per_node(config.b, k)?)?)
        };
        Ok(Self {
            plan,
            method,
            quantizer,
        })
    }

    /// Receiver quantizes the node gains; transmitter interpolates what it gets.
    fn reconstruct(&self, squared_gains: &[f64], budget: u32) -> Result<Vec<f64>> {
        let node_gains = self.plan.sample(squared_gains)?;
        let received = match &self.quantizer {
            Some(q) => {
                let word = FeedbackWord::interpolated_gains(&node_gains, self.plan.spacing(), q)?;
                if word.bit_cost > budget {
                    return Err(Error::InconsistentState(format!(
                        "feedback word uses {} of {budget} bits",
                        word.bit_cost
                    )));
                }
                word.node_values(q)?
            }
            None => node_gains,
        };
        Ok(interpolate(self.method, &self.plan, &received)?.into_values())
    }
}

fn floored(gains: &[f64]) -> Vec<f64> {
    gains.iter().map(|&g| g.max(GAIN_FLOOR)).collect()
}

fn training_set(config: &SchemeConfig) -> Result<Vec<Vec<f64>>> {
    (0..config.training_trials)
        .into_par_iter()
        .map(|d| {
            let mut rng = training_rng(config.seed, d);
            Ok(draw_channel(config.m, config.n, &mut rng)?
                .squared_gains()
                .to_vec())
        })
        .collect()
}

impl Prepared {
    fn new(config: &SchemeConfig) -> Result<(Self, Option<f64>)> {
        Ok(match config.scheme {
            Scheme::OnoffClustered => {
                let (_, r) = config.resolved_kr();
                let plan = ClusterPlan::new(config.n, r, 0.0)?;
                let training = training_set(config)?;
                let mu = optimize_threshold(
                    &training,
                    &plan,
                    config.noise_var,
                    config.p_t,
                    &default_threshold_grid(),
                )?;
                (
                    Prepared::OnOff {
                        plan: plan.with_threshold(mu)?,
                    },
                    Some(mu),
                )
            }
            Scheme::WaterfillLinearInterp | Scheme::WaterfillQuadraticInterp => {
                let method = config.scheme.interpolation().expect("interpolating scheme");
                (
                    Prepared::Waterfill {
                        nodes: Some(NodeFeedback::new(config, method)?),
                    },
                    None,
                )
            }
            Scheme::WaterfillPerfect => (Prepared::Waterfill { nodes: None }, None),
            Scheme::Uniform => (Prepared::Uniform, None),
            Scheme::BitloadLinearInterp
            | Scheme::BitloadQuadraticInterp
            | Scheme::BitloadPerfect => {
                let model = PowerModel::new(config.noise_var, config.p_e, config.gain_exponent)?;
                let nodes = match config.scheme.interpolation() {
                    Some(method) => Some(NodeFeedback::new(config, method)?),
                    None => None,
                };
                (Prepared::Bitload { nodes, model }, None)
            }
        })
    }

    fn evaluate(&self, config: &SchemeConfig, rng: &mut TrialRng) -> Result<f64> {
        let channel = draw_channel(config.m, config.n, rng)?;
        let truth = channel.squared_gains();
        match self {
            Prepared::OnOff { plan } => {
                let flags = cluster_flags(&cluster_averages(truth, plan)?, plan)?;
                let word = FeedbackWord::on_off(flags, plan.cluster_size());
                let flags = word.flags().expect("on/off payload");
                let powers = allocate_from_flags(flags, plan, config.p_t)?;
                Ok(capacity_of(powers.powers(), truth, config.noise_var))
            }
            Prepared::Waterfill { nodes } => {
                let estimate = match nodes {
                    Some(fb) => fb.reconstruct(truth, config.b)?,
                    None => floored(truth),
                };
                let powers = waterfill(&estimate, config.noise_var, config.p_t)?;
                Ok(capacity_of(powers.powers(), truth, config.noise_var))
            }
            Prepared::Uniform => {
                let powers = uniform_allocate(config.n, config.p_t)?;
                Ok(capacity_of(powers.powers(), truth, config.noise_var))
            }
            Prepared::Bitload { nodes, model } => {
                let estimate = match nodes {
                    Some(fb) => fb.reconstruct(truth, config.b)?,
                    None => floored(truth),
                };
                let load = greedy_allocate(&estimate, config.c_b, model, MAX_BITS)?;
                let powers = scale_to_budget(&load, config.p_t)?;
                Ok(system_ber(load.bits(), &powers, truth, config.noise_var, 0)?.value)
            }
        }
    }
}

/// Runs one scheme over `config.trials` channel draws.
pub fn run_scheme(config: &SchemeConfig) -> Result<ExperimentRecord> {
    config.validate()?;
    let start = Instant::now();
    let (prepared, threshold) = Prepared::new(config)?;
    let estimate = monte_carlo_mean(
        |_, rng| prepared.evaluate(config, rng),
        config.trials,
        config.seed,
    )?;
    let (k, r) = config.resolved_kr();
    Ok(ExperimentRecord {
        config: config.clone(),
        metric: config.scheme.metric(),
        k,
        r,
        mean: estimate.mean,
        stderr: estimate.stderr,
        feedback_bits: config.feedback_bits()?,
        threshold,
        wall_time: start.elapsed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    K,
    R,
    B,
    M,
    Snr,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(Axis::K),
            "r" => Ok(Axis::R),
            "b" => Ok(Axis::B),
            "m" => Ok(Axis::M),
            "snr" | "snr_db" => Ok(Axis::Snr),
            _ => Err(Error::InvalidParameter(format!(
                "unknown sweep axis '{s}'; expected one of K, R, B, M, SNR"
            ))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::K => "K",
            Axis::R => "R",
            Axis::B => "B",
            Axis::M => "M",
            Axis::Snr => "SNR",
        })
    }
}

fn as_count(axis: Axis, v: f64) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v < u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameter(format!(
            "{axis} values must be non-negative integers, got {v}"
        )))
    }
}

/// Applies one axis value to a copy of `base`.
pub fn at_point(base: &SchemeConfig, axis: Axis, value: f64) -> Result<SchemeConfig> {
    let mut c = base.clone();
    match axis {
        Axis::K => {
            c.k = Some(as_count(axis, value)?);
            c.r = None;
        }
        Axis::R => {
            c.r = Some(as_count(axis, value)?);
            c.k = None;
        }
        Axis::B => c.b = as_count(axis, value)? as u32,
        Axis::M => c.m = as_count(axis, value)?,
        Axis::Snr => c.set_snr_db(value),
    }
    Ok(c)
}

/// One record per value, in order, all sharing the base seed.
pub fn sweep(axis: Axis, values: &[f64], base: &SchemeConfig) -> Result<Vec<ExperimentRecord>> {
    values
        .iter()
        .map(|&v| run_scheme(&at_point(base, axis, v)?))
        .collect()
}

/// One curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub base: SchemeConfig,
}

/// Node counts used for the interpolation curves.
pub const INTERP_K_GRID: [usize; 14] = [2, 3, 4, 6, 8, 12, 15, 16, 20, 24, 32, 48, 64, 128];
pub const CLUSTER_K_GRID: [usize; 8] = [1, 2, 4, 8, 16, 32, 64, 128];
pub const CAPACITY_SNR_GRID: [f64; 7] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
pub const BER_SNR_GRID: [f64; 8] = [10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0];
pub const BER_R_GRID: [usize; 6] = [2, 4, 8, 16, 32, 64];

pub const FIGURES: std::ops::RangeInclusive<u32> = 1..=6;

fn counts(values: impl IntoIterator<Item = usize>) -> Vec<f64> {
    values.into_iter().map(|v| v as f64).collect()
}

fn feasible_k(min_k: usize, budget: u32) -> Vec<f64> {
    counts(
        INTERP_K_GRID
            .into_iter()
            .filter(|&k| k >= min_k && k <= budget as usize),
    )
}

/// Curve set for figure `id` (1..=6).
pub fn figure_bundle(id: u32) -> Result<Vec<SweepSpec>> {
    let base = |scheme: Scheme| SchemeConfig::with_scheme(scheme);
    let mut specs = Vec::new();
    match id {
        1 => {
            for m in [5, 10] {
                for scheme in [Scheme::OnoffClustered, Scheme::WaterfillPerfect] {
                    specs.push(SweepSpec {
                        axis: Axis::K,
                        values: counts(CLUSTER_K_GRID),
                        base: SchemeConfig { m, ..base(scheme) },
                    });
                }
            }
        }
        2 => {
            for (scheme, min_k) in [
                (Scheme::WaterfillLinearInterp, 3),
                (Scheme::WaterfillQuadraticInterp, 3),
                (Scheme::WaterfillPerfect, 3),
                (Scheme::Uniform, 3),
            ] {
                specs.push(SweepSpec {
                    axis: Axis::K,
                    values: feasible_k(min_k, 128),
                    base: SchemeConfig {
                        b: 128,
                        ..base(scheme)
                    },
                });
            }
        }
        3 => {
            for b in [32, 64, 128] {
                specs.push(SweepSpec {
                    axis: Axis::K,
                    values: feasible_k(2, b),
                    base: SchemeConfig {
                        b,
                        ..base(Scheme::WaterfillLinearInterp)
                    },
                });
            }
            specs.push(SweepSpec {
                axis: Axis::K,
                values: feasible_k(2, 128),
                base: SchemeConfig {
                    ideal_nodes: true,
                    ..base(Scheme::WaterfillLinearInterp)
                },
            });
            specs.push(SweepSpec {
                axis: Axis::K,
                values: feasible_k(2, 128),
                base: base(Scheme::WaterfillPerfect),
            });
        }
        4 => {
            let curves = [
                (Scheme::OnoffClustered, 128),
                (Scheme::WaterfillLinearInterp, 32),
                (Scheme::WaterfillQuadraticInterp, 32),
                (Scheme::WaterfillPerfect, 32),
                (Scheme::Uniform, 32),
            ];
            for (scheme, k) in curves {
                specs.push(SweepSpec {
                    axis: Axis::Snr,
                    values: CAPACITY_SNR_GRID.to_vec(),
                    base: SchemeConfig {
                        b: 128,
                        k: Some(k),
                        ..base(scheme)
                    },
                });
            }
        }
        5 => {
            for r in [4, 8, 16, 32] {
                for scheme in [Scheme::BitloadLinearInterp, Scheme::BitloadQuadraticInterp] {
                    specs.push(SweepSpec {
                        axis: Axis::Snr,
                        values: BER_SNR_GRID.to_vec(),
                        base: SchemeConfig {
                            m: 6,
                            b: 128,
                            c_b: 128,
                            r: Some(r),
                            ..base(scheme)
                        },
                    });
                }
            }
            specs.push(SweepSpec {
                axis: Axis::Snr,
                values: BER_SNR_GRID.to_vec(),
                base: SchemeConfig {
                    m: 6,
                    b: 128,
                    c_b: 128,
                    ..base(Scheme::BitloadPerfect)
                },
            });
        }
        6 => {
            for m in [3, 12, 20] {
                for scheme in [Scheme::BitloadLinearInterp, Scheme::BitloadPerfect] {
                    let mut cfg = SchemeConfig {
                        m,
                        b: 64,
                        c_b: 128,
                        ..base(scheme)
                    };
                    cfg.set_snr_db(30.0);
                    specs.push(SweepSpec {
                        axis: Axis::R,
                        values: counts(BER_R_GRID),
                        base: cfg,
                    });
                }
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "figure id must lie in 1..=6, got {id}"
            )))
        }
    }
    Ok(specs)
}

/// Overrides applied to every curve of a bundle.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub training_trials: Option<u64>,
}

impl RunOverrides {
    pub fn apply(&self, config: &mut SchemeConfig) {
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(t) = self.trials {
            config.trials = t;
        }
        if let Some(t) = self.training_trials {
            config.training_trials = t;
        }
    }
}

/// Runs every curve of figure `id`, in bundle order.
pub fn run_figure(id: u32, overrides: RunOverrides) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::new();
    for mut spec in figure_bundle(id)? {
        overrides.apply(&mut spec.base);
        out.extend(sweep(spec.axis, &spec.values, &spec.base)?);
    }
    Ok(out)
}
