//! Built-in oracle checks run by the `selftest` subcommand.

use num_complex::Complex64;

use crate::bits::{greedy_allocate, required_power, GainExponent, PowerModel};
use crate::channel::{draw_channel, frequency_response, sample_taps, ChannelTaps};
use crate::interpolation::{interpolate_linear, interpolate_quadratic, NodePlan};
use crate::metrics::{capacity_of, subcarrier_symbol_error, system_ber};
use crate::power::{cluster_averages, onoff_allocate, waterfill, ClusterPlan};
use crate::qfunc::{q_function, q_inverse};
use crate::quantizer::{bits_per_node, QuantizerSpec};
use crate::rng::trial_rng;
use crate::{Result, GAIN_FLOOR};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<bool>;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Simpson integration of the Gaussian density on `[x, 40]`.
fn q_by_quadrature(x: f64) -> f64 {
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let steps = 200_000;
    let h = (40.0 - x) / steps as f64;
    let mut s = pdf(x) + pdf(40.0);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * pdf(x + i as f64 * h);
    }
    s * h / 3.0
}

const CHECKS: &[(&str, Check)] = &[
    ("channel: unit tap is flat", || {
        let taps = ChannelTaps::new(vec![Complex64::new(1.0, 0.0)])?;
        Ok(frequency_response(&taps, 8)?
            .squared_gains()
            .iter()
            .all(|&g| g == 1.0))
    }),
    ("channel: pure delay has unit gain", || {
        let taps = ChannelTaps::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])?;
        Ok(frequency_response(&taps, 8)?
            .squared_gains()
            .iter()
            .all(|&g| close(g, 1.0, 1e-15)))
    }),
    ("channel: Parseval", || {
        let mut rng = trial_rng(1, 0);
        for _ in 0..100 {
            let ch = draw_channel(10, 128, &mut rng)?;
            let f = ch.squared_gains().iter().sum::<f64>() / 128.0;
            if ((f - ch.taps().energy()) / ch.taps().energy()).abs() > 1e-10 {
                return Ok(false);
            }
        }
        Ok(true)
    }),
    ("channel: mean tap energy is one", || {
        let mut rng = trial_rng(2, 0);
        let mut total = 0.0;
        for _ in 0..10_000 {
            total += sample_taps(10, &mut rng)?.energy();
        }
        Ok((total / 10_000.0 - 1.0).abs() <= 0.03)
    }),
    ("quantizer: encode/decode examples", || {
        Ok(QuantizerSpec::new(1, 0.0, 4.0)?.encode(1.0)? == 0
            && QuantizerSpec::new(2, 0.0, 4.0)?.encode(9.0)? == 3
            && QuantizerSpec::new(3, 0.0, 4.0)?.encode(2.5)? == 5
            && QuantizerSpec::new(1, 0.0, 4.0)?.decode(0)? == 1.0
            && QuantizerSpec::new(3, 0.0, 4.0)?.decode(5)? == 2.75)
    }),
    ("quantizer: bit split", || {
        Ok(bits_per_node(128, 32)? == 4
            && bits_per_node(128, 128)? == 1
            && bits_per_node(64, 8)? == 8)
    }),
    ("interpolation: node plans", || {
        let a = NodePlan::new(128, 32)?;
        let b = NodePlan::new(8, 2)?;
        let c = NodePlan::new(128, 15)?;
        Ok(a.spacing() == 4 && b.node_indices() == [0, 7] && c.spacing() == 9)
    }),
    ("interpolation: linear ramp", || {
        let est = interpolate_linear(&NodePlan::new(8, 2)?, &[0.0, 7.0])?;
        Ok(est.values() == [GAIN_FLOOR, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
    }),
    ("interpolation: quadratic reproduces x^2", || {
        let est = interpolate_quadratic(&NodePlan::new(9, 3)?, &[0.0, 16.0, 64.0])?;
        Ok((1..9).all(|i| close(est.values()[i], (i * i) as f64, 1e-9)))
    }),
    ("power: water-filling examples", || {
        let a = waterfill(&[1.0, 0.1], 0.1, 1.0)?;
        let b = waterfill(&[1.0, 0.01], 0.1, 1.0)?;
        Ok(close(a.powers()[0], 0.95, 1e-12)
            && close(a.powers()[1], 0.05, 1e-12)
            && close(b.water_level().unwrap_or(0.0), 1.1, 1e-12)
            && b.powers() == [1.0, 0.0])
    }),
    ("power: cluster averages and on/off", || {
        let ramp: Vec<f64> = (0..8).map(f64::from).collect();
        let plan = ClusterPlan::new(8, 4, 2.0)?;
        let avg = cluster_averages(&ramp, &plan)?;
        let tail = cluster_averages(&ramp[..7], &ClusterPlan::new(7, 4, 0.0)?)?;
        let p = onoff_allocate(&avg, &plan, 1.0)?;
        Ok(avg == [1.5, 5.5]
            && tail == [1.5, 5.0]
            && p.powers() == [0.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.25, 0.25])
    }),
    ("qfunc: matches quadrature", || {
        Ok([-3.0, 0.0, 1.2815515655, 4.0]
            .iter()
            .all(|&x| (q_function(x) - q_by_quadrature(x)).abs() <= 1e-9))
    }),
    ("qfunc: inverse", || {
        Ok(q_inverse(0.5)? == 0.0
            && (q_inverse(q_function(2.0))? - 2.0).abs() < 1e-9
            && (q_inverse(1e-3)? - 3.0902).abs() < 1e-3)
    }),
    ("bits: required power", || {
        let pe = 4.0 * q_function(30f64.sqrt());
        Ok(required_power(0, 1.0, 0.1, 1e-3)? == 0.0
            && close(required_power(2, 1.0, 0.1, pe)?, 3.0, 1e-8))
    }),
    ("bits: greedy examples", || {
        let m = PowerModel::new(0.1, 1e-3, GainExponent::One)?;
        Ok(greedy_allocate(&[4.0, 1.0], 2, &m, 6)?.bits() == [2, 0]
            && greedy_allocate(&[1.0, 1.0], 4, &m, 6)?.bits() == [2, 2])
    }),
    ("metrics: capacity examples", || {
        Ok(close(capacity_of(&[1.0], &[1.0], 0.1), 11f64.log2(), 1e-12)
            && close(
                capacity_of(&[0.5, 0.5], &[1.0, 1.0], 0.1),
                2.0 * 6f64.log2(),
                1e-12,
            ))
    }),
    ("metrics: symbol error and BER", || {
        let p = subcarrier_symbol_error(1.0, 1.0, 0.1, 2)?;
        let ber = system_ber(&[0, 2, 0, 0], &[0.0, 1.0, 0.0, 0.0], &[1.0; 4], 0.1, 0)?;
        Ok(subcarrier_symbol_error(0.0, 1.0, 0.1, 2)? == 1.0
            && (p - 3.13e-3).abs() < 1e-5
            && close(ber.value, p / 8.0, 1e-15))
    }),
];

/// Runs every built-in check; errors count as failures.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(passed) => CheckOutcome {
                name,
                passed,
                detail: String::new(),
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}
