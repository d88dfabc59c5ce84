//! Transmitter-side reconstruction of the squared-gain vector from node gains.
//!
//! Nodes sit at `0, R, 2R, …, (K-2)R, N-1` with `R = floor((N-1)/(K-1))`, so
//! the node set always spans the band even when `K-1` does not divide `N-1`.
//! Each inter-node segment is filled by exactly one interpolant:
//!
//! * linear: the line through the segment's two end nodes;
//! * quadratic: the Lagrange parabola through nodes `(j-1, j, j+1)` for the
//!   segment starting at node `j`, shifted to `(0, 1, 2)` for the first
//!   segment, with the last two segments sharing nodes `(K-3, K-2, K-1)`.
//!
//! Reconstructed values are floored at [`GAIN_FLOOR`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result, GAIN_FLOOR};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodePlan {
    num_subcarriers: usize,
    spacing: usize,
    node_indices: Vec<usize>,
}

impl NodePlan {
    pub fn new(num_subcarriers: usize, num_nodes: usize) -> Result<Self> {
        if num_nodes < 2 || num_nodes > num_subcarriers {
            return Err(Error::InvalidParameter(format!(
                "need 2 <= K <= N, got K = {num_nodes}, N = {num_subcarriers}"
            )));
        }
        let spacing = (num_subcarriers - 1) / (num_nodes - 1);
        let mut node_indices: Vec<usize> = (0..num_nodes - 1).map(|k| k * spacing).collect();
        node_indices.push(num_subcarriers - 1);
        Ok(Self {
            num_subcarriers,
            spacing,
            node_indices,
        })
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn num_nodes(&self) -> usize {
        self.node_indices.len()
    }

    /// Nominal node spacing `R`; the final gap may be longer.
    pub fn spacing(&self) -> usize {
        self.spacing
    }

    pub fn node_indices(&self) -> &[usize] {
        &self.node_indices
    }

    /// Picks the node gains out of a full squared-gain vector.
    pub fn sample(&self, squared_gains: &[f64]) -> Result<Vec<f64>> {
        if squared_gains.len() != self.num_subcarriers {
            return Err(Error::InvalidInput(format!(
                "expected {} gains, got {}",
                self.num_subcarriers,
                squared_gains.len()
            )));
        }
        Ok(self
            .node_indices
            .iter()
            .map(|&i| squared_gains[i])
            .collect())
    }
}

/// Alias matching the operation name used in configs and docs.
pub fn make_node_plan(num_subcarriers: usize, num_nodes: usize) -> Result<NodePlan> {
    NodePlan::new(num_subcarriers, num_nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Linear,
    Quadratic,
}

/// Reconstructed squared gains `α̂(0..N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainEstimate {
    values: Vec<f64>,
    method: Method,
    plan: NodePlan,
    node_values: Vec<f64>,
}

impl GainEstimate {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn plan(&self) -> &NodePlan {
        &self.plan
    }

    pub fn node_values(&self) -> &[f64] {
        &self.node_values
    }
}

fn check_nodes(plan: &NodePlan, node_values: &[f64]) -> Result<()> {
    if node_values.len() != plan.num_nodes() {
        return Err(Error::InvalidInput(format!(
            "expected {} node values, got {}",
            plan.num_nodes(),
            node_values.len()
        )));
    }
    if let Some(v) = node_values.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::InvalidInput(format!("node value {v} is negative")));
    }
    Ok(())
}

pub fn interpolate_linear(plan: &NodePlan, node_values: &[f64]) -> Result<GainEstimate> {
    check_nodes(plan, node_values)?;
    let nodes = plan.node_indices();
    let mut values = vec![0.0; plan.num_subcarriers()];
    for seg in 0..nodes.len() - 1 {
        let (x0, x1) = (nodes[seg], nodes[seg + 1]);
        let (a, b) = (node_values[seg], node_values[seg + 1]);
        let width = (x1 - x0) as f64;
        values[x0] = a;
        for (r, slot) in values[x0 + 1..x1].iter_mut().enumerate() {
            *slot = a + (b - a) * (r + 1) as f64 / width;
        }
    }
    values[nodes[nodes.len() - 1]] = node_values[nodes.len() - 1];
    Ok(finish(values, Method::Linear, plan, node_values))
}

pub fn interpolate_quadratic(plan: &NodePlan, node_values: &[f64]) -> Result<GainEstimate> {
    check_nodes(plan, node_values)?;
    let k = plan.num_nodes();
    if k < 3 {
        return Err(Error::NeedsThreeNodes(k));
    }
    let nodes = plan.node_indices();
    let mut values = vec![0.0; plan.num_subcarriers()];
    for seg in 0..k - 1 {
        let start = quadratic_window(seg, k);
        let xs = [
            nodes[start] as f64,
            nodes[start + 1] as f64,
            nodes[start + 2] as f64,
        ];
        let ys = [
            node_values[start],
            node_values[start + 1],
            node_values[start + 2],
        ];
        values[nodes[seg]] = node_values[seg];
        for i in nodes[seg] + 1..nodes[seg + 1] {
            values[i] = lagrange3(xs, ys, i as f64);
        }
    }
    values[nodes[k - 1]] = node_values[k - 1];
    Ok(finish(values, Method::Quadratic, plan, node_values))
}

/// First node of the three used for segment `seg` (between nodes `seg` and `seg + 1`).
pub fn quadratic_window(seg: usize, num_nodes: usize) -> usize {
    let last = num_nodes - 3;
    if seg >= last {
        last
    } else {
        seg.saturating_sub(1)
    }
}

fn lagrange3(xs: [f64; 3], ys: [f64; 3], x: f64) -> f64 {
    let [x0, x1, x2] = xs;
    let l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    ys[0] * l0 + ys[1] * l1 + ys[2] * l2
}

fn finish(
    mut values: Vec<f64>,
    method: Method,
    plan: &NodePlan,
    node_values: &[f64],
) -> GainEstimate {
    for v in values.iter_mut() {
        if !(*v >= GAIN_FLOOR) {
            *v = GAIN_FLOOR;
        }
    }
    GainEstimate {
        values,
        method,
        plan: plan.clone(),
        node_values: node_values.to_vec(),
    }
}

/// Dispatches on `method`.
pub fn interpolate(method: Method, plan: &NodePlan, node_values: &[f64]) -> Result<GainEstimate> {
    match method {
        Method::Linear => interpolate_linear(plan, node_values),
        Method::Quadratic => interpolate_quadratic(plan, node_values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use rand::Rng;

    #[test]
    fn plan_examples() {
        let p = NodePlan::new(128, 32).unwrap();
        assert_eq!(p.spacing(), 4);
        let mut expect: Vec<usize> = (0..31).map(|k| 4 * k).collect();
        expect.push(127);
        assert_eq!(p.node_indices(), expect.as_slice());

        let p = NodePlan::new(8, 2).unwrap();
        assert_eq!(p.spacing(), 7);
        assert_eq!(p.node_indices(), &[0, 7]);

        let p = NodePlan::new(128, 15).unwrap();
        assert_eq!(p.spacing(), 9);
        assert_eq!(p.node_indices()[13], 117);
        assert_eq!(*p.node_indices().last().unwrap(), 127);

        assert!(NodePlan::new(8, 1).is_err());
        assert!(NodePlan::new(8, 9).is_err());
    }

    #[test]
    fn plan_invariants_hold_for_all_k() {
        for n in [2usize, 3, 9, 64, 128] {
            for k in 2..=n {
                let p = NodePlan::new(n, k).unwrap();
                let idx = p.node_indices();
                assert_eq!(idx.len(), k);
                assert!(idx.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(idx[k - 1], n - 1);
                assert!((k - 2) * p.spacing() < n - 1);
            }
        }
    }

    #[test]
    fn window_assignment() {
        // K = 6: segments 0..5
        let starts: Vec<usize> = (0..5).map(|s| quadratic_window(s, 6)).collect();
        assert_eq!(starts, vec![0, 0, 1, 3, 3]);
        let starts: Vec<usize> = (0..2).map(|s| quadratic_window(s, 3)).collect();
        assert_eq!(starts, vec![0, 0]);
        let starts: Vec<usize> = (0..3).map(|s| quadratic_window(s, 4)).collect();
        assert_eq!(starts, vec![0, 1, 1]);
    }

    #[test]
    fn linear_ramp() {
        let p = NodePlan::new(8, 2).unwrap();
        let est = interpolate_linear(&p, &[0.0, 7.0]).unwrap();
        assert_eq!(
            est.values(),
            &[GAIN_FLOOR, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
        );
    }

    #[test]
    fn constants_are_preserved() {
        let p = NodePlan::new(128, 15).unwrap();
        let nodes = vec![0.7; 15];
        for m in [Method::Linear, Method::Quadratic] {
            let est = interpolate(m, &p, &nodes).unwrap();
            assert!(est.values().iter().all(|v| (v - 0.7).abs() < 1e-14));
        }
    }

    #[test]
    fn quadratic_reproduces_parabola() {
        let p = NodePlan::new(9, 3).unwrap();
        assert_eq!(p.node_indices(), &[0, 4, 8]);
        let est = interpolate_quadratic(&p, &[0.0, 16.0, 64.0]).unwrap();
        for (i, v) in est.values().iter().enumerate().skip(1) {
            let want = (i * i) as f64;
            assert!((v - want).abs() <= 1e-9 * want);
        }
        assert_eq!(est.values()[0], GAIN_FLOOR);
    }

    #[test]
    fn quadratic_needs_three_nodes() {
        let p = NodePlan::new(8, 2).unwrap();
        assert!(matches!(
            interpolate_quadratic(&p, &[1.0, 2.0]),
            Err(Error::NeedsThreeNodes(2))
        ));
    }

    #[test]
    fn length_mismatch_and_negative_rejected() {
        let p = NodePlan::new(16, 4).unwrap();
        assert!(matches!(
            interpolate_linear(&p, &[1.0; 3]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            interpolate_quadratic(&p, &[1.0, -1.0, 1.0, 1.0]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn nodes_hit_exactly_and_full_plan_is_identity() {
        let mut rng = trial_rng(8, 0);
        let gains: Vec<f64> = (0..128).map(|_| rng.random_range(0.01..3.0)).collect();
        for k in [3, 15, 32, 128] {
            let p = NodePlan::new(128, k).unwrap();
            let nodes = p.sample(&gains).unwrap();
            for m in [Method::Linear, Method::Quadratic] {
                let est = interpolate(m, &p, &nodes).unwrap();
                for (&i, &v) in p.node_indices().iter().zip(&nodes) {
                    assert_eq!(est.values()[i], v);
                }
                if k == 128 {
                    assert_eq!(est.values(), gains.as_slice());
                }
            }
        }
    }

    #[test]
    fn outputs_are_floored() {
        let p = NodePlan::new(64, 8).unwrap();
        let nodes = [3.0, 0.0, 3.0, 0.0, 3.0, 0.0, 3.0, 0.0];
        let est = interpolate_quadratic(&p, &nodes).unwrap();
        assert_eq!(est.values().len(), 64);
        assert!(est.values().iter().all(|&v| v >= GAIN_FLOOR));
    }
}
