//! Transmit power allocation under a total-power constraint.

use rayon::prelude::*;

use crate::metrics::capacity_of;
use crate::{Error, Result};

/// Per-subcarrier powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerVector {
    powers: Vec<f64>,
    water_level: Option<f64>,
}

impl PowerVector {
    pub fn new(powers: Vec<f64>) -> Self {
        Self {
            powers,
            water_level: None,
        }
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn into_powers(self) -> Vec<f64> {
        self.powers
    }

    /// Water level γ, set by [`waterfill`] only.
    pub fn water_level(&self) -> Option<f64> {
        self.water_level
    }

    pub fn total(&self) -> f64 {
        self.powers.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }
}

/// Exact water-filling: `P_i = [γ - σ²/α_i]⁺` with γ chosen so that `Σ P_i = P_T`.
pub fn waterfill(gains: &[f64], noise_var: f64, total_power: f64) -> Result<PowerVector> {
    if gains.is_empty() {
        return Err(Error::InvalidInput("no subcarriers to fill".into()));
    }
    if let Some(g) = gains.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "gain {g} must be positive and finite"
        )));
    }
    if !(noise_var > 0.0) || !(total_power > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise variance {noise_var} and total power {total_power} must be positive"
        )));
    }
    let floors: Vec<f64> = gains.iter().map(|g| noise_var / g).collect();
    let mut order: Vec<usize> = (0..floors.len()).collect();
    order.sort_by(|&a, &b| floors[a].total_cmp(&floors[b]).then(a.cmp(&b)));

    // Largest active-set size n whose level γ(n) still clears the n-th floor.
    let mut prefix = 0.0;
    let mut level = total_power + floors[order[0]];
    for (n, &i) in order.iter().enumerate() {
        prefix += floors[i];
        let candidate = (total_power + prefix) / (n + 1) as f64;
        if candidate > floors[i] {
            level = candidate;
        } else {
            break;
        }
    }
    let powers = floors.iter().map(|&f| (level - f).max(0.0)).collect();
    Ok(PowerVector {
        powers,
        water_level: Some(level),
    })
}

/// Uniform allocation `P_T / N`.
pub fn uniform_allocate(num_subcarriers: usize, total_power: f64) -> Result<PowerVector> {
    if num_subcarriers == 0 {
        return Err(Error::InvalidParameter(
            "need at least one subcarrier".into(),
        ));
    }
    Ok(PowerVector::new(vec![
        total_power / num_subcarriers as f64;
        num_subcarriers
    ]))
}

/// Partition of `0..N` into `K = ceil(N/R)` clusters of `R` adjacent
/// subcarriers (the last one possibly shorter) with an activation threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPlan {
    num_subcarriers: usize,
    cluster_size: usize,
    threshold: f64,
}

impl ClusterPlan {
    pub fn new(num_subcarriers: usize, cluster_size: usize, threshold: f64) -> Result<Self> {
        if num_subcarriers == 0 || cluster_size == 0 || cluster_size > num_subcarriers {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= R <= N, got R = {cluster_size}, N = {num_subcarriers}"
            )));
        }
        if !(threshold >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold {threshold} must be >= 0"
            )));
        }
        Ok(Self {
            num_subcarriers,
            cluster_size,
            threshold,
        })
    }

    /// Plan with `K` clusters: `R = ceil(N/K)`, so the realized cluster count
    /// is `ceil(N/R)`, which can be below `K` when `K` does not divide `N`.
    pub fn with_clusters(
        num_subcarriers: usize,
        num_clusters: usize,
        threshold: f64,
    ) -> Result<Self> {
        if num_clusters == 0 || num_clusters > num_subcarriers {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= K <= N, got K = {num_clusters}, N = {num_subcarriers}"
            )));
        }
        Self::new(
            num_subcarriers,
            num_subcarriers.div_ceil(num_clusters),
            threshold,
        )
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }

    pub fn num_clusters(&self) -> usize {
        self.num_subcarriers.div_ceil(self.cluster_size)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn with_threshold(&self, threshold: f64) -> Result<Self> {
        Self::new(self.num_subcarriers, self.cluster_size, threshold)
    }

    /// Subcarrier range of cluster `k`.
    pub fn cluster(&self, k: usize) -> std::ops::Range<usize> {
        let start = k * self.cluster_size;
        start..(start + self.cluster_size).min(self.num_subcarriers)
    }

    pub fn clusters(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        (0..self.num_clusters()).map(|k| self.cluster(k))
    }
}

/// Mean squared gain of every cluster, the short tail averaged over its own size.
pub fn cluster_averages(squared_gains: &[f64], plan: &ClusterPlan) -> Result<Vec<f64>> {
    if squared_gains.len() != plan.num_subcarriers() {
        return Err(Error::InvalidInput(format!(
            "expected {} gains, got {}",
            plan.num_subcarriers(),
            squared_gains.len()
        )));
    }
    Ok(plan
        .clusters()
        .map(|r| {
            let len = r.len() as f64;
            squared_gains[r].iter().sum::<f64>() / len
        })
        .collect())
}

/// Activation flags at the plan's threshold. When nothing clears it, the
/// strongest cluster (lowest index on ties) is switched on.
pub fn cluster_flags(averages: &[f64], plan: &ClusterPlan) -> Result<Vec<bool>> {
    if averages.len() != plan.num_clusters() {
        return Err(Error::InvalidInput(format!(
            "expected {} cluster averages, got {}",
            plan.num_clusters(),
            averages.len()
        )));
    }
    let mut flags: Vec<bool> = averages.iter().map(|&a| a >= plan.threshold()).collect();
    if !flags.iter().any(|&f| f) {
        let mut best = 0;
        for (k, &a) in averages.iter().enumerate() {
            if a > averages[best] {
                best = k;
            }
        }
        flags[best] = true;
    }
    Ok(flags)
}

/// Equal power `P_T / N_A` on each subcarrier of an active cluster, where
/// `N_A` counts active subcarriers.
pub fn allocate_from_flags(
    flags: &[bool],
    plan: &ClusterPlan,
    total_power: f64,
) -> Result<PowerVector> {
    if flags.len() != plan.num_clusters() {
        return Err(Error::InvalidInput(format!(
            "expected {} flags, got {}",
            plan.num_clusters(),
            flags.len()
        )));
    }
    let active: usize = plan
        .clusters()
        .zip(flags)
        .filter(|(_, &on)| on)
        .map(|(r, _)| r.len())
        .sum();
    let mut powers = vec![0.0; plan.num_subcarriers()];
    if active == 0 {
        return Ok(PowerVector::new(powers));
    }
    let share = total_power / active as f64;
    for (r, _) in plan.clusters().zip(flags).filter(|(_, &on)| on) {
        powers[r].fill(share);
    }
    Ok(PowerVector::new(powers))
}

pub fn onoff_allocate(
    averages: &[f64],
    plan: &ClusterPlan,
    total_power: f64,
) -> Result<PowerVector> {
    let flags = cluster_flags(averages, plan)?;
    allocate_from_flags(&flags, plan, total_power)
}

/// `count` evenly spaced thresholds on `[0, upper]`, both ends included.
pub fn threshold_grid(upper: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..count)
            .map(|i| upper * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Default search grid: 200 points on `[0, 4]`.
pub fn default_threshold_grid() -> Vec<f64> {
    threshold_grid(crate::quantizer::DEFAULT_UPPER, 200)
}

/// Picks the grid threshold with the highest mean on/off capacity over the
/// training gains. Ties go to the smaller threshold.
pub fn optimize_threshold(
    training_gains: &[Vec<f64>],
    plan: &ClusterPlan,
    noise_var: f64,
    total_power: f64,
    grid: &[f64],
) -> Result<f64> {
    if training_gains.is_empty() || grid.is_empty() {
        return Err(Error::InvalidParameter(
            "threshold search needs training draws and a non-empty grid".into(),
        ));
    }
    let averages = training_gains
        .iter()
        .map(|g| cluster_averages(g, plan))
        .collect::<Result<Vec<_>>>()?;

    let mut sorted: Vec<f64> = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Grid points are scored in parallel, then reduced in ascending order.
    let means = sorted
        .par_iter()
        .map(|&mu| {
            let candidate = plan.with_threshold(mu)?;
            let mut total = 0.0;
            for (gains, avg) in training_gains.iter().zip(&averages) {
                let p = onoff_allocate(avg, &candidate, total_power)?;
                total += capacity_of(p.powers(), gains, noise_var);
            }
            Ok(total / training_gains.len() as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = (f64::NEG_INFINITY, sorted[0]);
    for (&mu, &mean) in sorted.iter().zip(&means) {
        if mean > best.0 {
            best = (mean, mu);
        }
    }
    Ok(best.1)
}
