//! End-to-end acceptance checks.
//!
//! Each test writes one `PASS`/`FAIL` line straight to stdout, so the lines
//! show up even without `--nocapture`. Add `--test-threads=1` to get them in order.

use std::io::Write;
use std::sync::OnceLock;

use ofdm_feedback::bits::{greedy_allocate, GainExponent, PowerModel, MAX_BITS};
use ofdm_feedback::channel::draw_channel;
use ofdm_feedback::experiment::{
    run_figure, run_scheme, ExperimentRecord, RunOverrides, Scheme, SchemeConfig,
};
use ofdm_feedback::interpolation::{interpolate_linear, interpolate_quadratic, NodePlan};
use ofdm_feedback::metrics::capacity_of;
use ofdm_feedback::output::emit_csv;
use ofdm_feedback::power::waterfill;
use ofdm_feedback::qfunc::{q_function, q_inverse};
use ofdm_feedback::rng::trial_rng;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

const TRIALS: u64 = 3000;
const SEEDS: [u64; 2] = [1, 2];

static FIGURES: [[OnceLock<Vec<ExperimentRecord>>; 2]; 7] =
    [const { [const { OnceLock::new() }; 2] }; 7];

fn figure(id: u32, seed_idx: usize) -> &'static [ExperimentRecord] {
    FIGURES[id as usize][seed_idx].get_or_init(|| {
        let overrides = RunOverrides {
            seed: Some(SEEDS[seed_idx]),
            trials: Some(TRIALS),
            training_trials: None,
        };
        run_figure(id, overrides).expect("figure run")
    })
}

fn report(index: u32, title: &str, outcomes: &[(bool, String)]) {
    let passed = outcomes.iter().all(|(ok, _)| *ok);
    let detail: Vec<&str> = outcomes.iter().map(|(_, d)| d.as_str()).collect();
    let line = format!(
        "{} [{index:>2}] {title}: {}\n",
        if passed { "PASS" } else { "FAIL" },
        detail.join(" | ")
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(passed, "[{index}] {title}: {}", detail.join(" | "));
}

fn rows<'a>(
    records: &'a [ExperimentRecord],
    pick: impl Fn(&ExperimentRecord) -> bool + 'a,
) -> Vec<&'a ExperimentRecord> {
    records.iter().filter(|r| pick(r)).collect()
}

fn best(records: &[&ExperimentRecord]) -> (usize, f64) {
    records.iter().fold((0, f64::NEG_INFINITY), |acc, r| {
        if r.mean > acc.1 {
            (r.k, r.mean)
        } else {
            acc
        }
    })
}

fn gap(value: f64, reference: f64) -> f64 {
    1.0 - value / reference
}

fn seed_label(idx: usize) -> String {
    format!("seed {}", SEEDS[idx])
}

#[test]
fn onoff_gap_at_32_clusters_and_monotone_in_k() {
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(1, s);
            let mut onoff = rows(fig, |r| {
                r.config.scheme == Scheme::OnoffClustered && r.config.m == 10
            });
            onoff.sort_by_key(|r| r.k);
            let perfect = rows(fig, |r| {
                r.config.scheme == Scheme::WaterfillPerfect && r.config.m == 10
            })[0]
                .mean;
            let at32 = onoff.iter().find(|r| r.k == 32).expect("K=32 point").mean;
            let g = gap(at32, perfect);
            let mut monotone = true;
            for w in onoff.windows(2).filter(|w| w[1].k <= 32) {
                let tol = 2.0 * w[0].stderr.max(w[1].stderr);
                monotone &= w[1].mean >= w[0].mean - tol;
            }
            let ok = (0.05..=0.15).contains(&g) && monotone;
            (
                ok,
                format!(
                    "{}: gap {:.2}%, monotone to K=32 {monotone}",
                    seed_label(s),
                    100.0 * g
                ),
            )
        })
        .collect();
    report(
        1,
        "on/off clustered capacity at K=32 within 10% +/- 5 of water-filling",
        &outcomes,
    );
}

#[test]
fn quadratic_dominates_linear_and_tracks_perfect() {
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(2, s);
            let quad = rows(fig, |r| r.config.scheme == Scheme::WaterfillQuadraticInterp);
            let lin = rows(fig, |r| r.config.scheme == Scheme::WaterfillLinearInterp);
            let perfect = rows(fig, |r| r.config.scheme == Scheme::WaterfillPerfect)[0].mean;
            let losing: Vec<String> = quad
                .iter()
                .filter_map(|q| {
                    let l = lin.iter().find(|l| l.k == q.k).expect("paired K");
                    (q.mean < l.mean).then(|| format!("K={} ({:.3}<{:.3})", q.k, q.mean, l.mean))
                })
                .collect();
            let (best_k, best_q) = best(&quad);
            let g = gap(best_q, perfect);
            let ok = losing.is_empty() && g <= 0.08;
            (
                ok,
                format!(
                    "{}: best quadratic K={best_k} gap {:.2}%, quadratic below linear at {}",
                    seed_label(s),
                    100.0 * g,
                    if losing.is_empty() {
                        "no K".to_string()
                    } else {
                        losing.join(", ")
                    }
                ),
            )
        })
        .collect();
    report(
        2,
        "quadratic >= linear at every K and best quadratic within 8% of perfect",
        &outcomes,
    );
}

#[test]
fn feedback_budget_costs_capacity() {
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(3, s);
            let at = |b: u32| {
                best(&rows(fig, |r| {
                    r.config.scheme == Scheme::WaterfillLinearInterp
                        && !r.config.ideal_nodes
                        && r.config.b == b
                }))
            };
            let (k32, c32) = at(32);
            let (k64, _) = at(64);
            let (k128, c128) = at(128);
            let drop = gap(c32, c128);
            let ok = (0.04..=0.10).contains(&drop) && k128 >= k64;
            (
                ok,
                format!(
                    "{}: B=32 drop {:.2}% (best K {k32}), best K at B=128 {k128} vs B=64 {k64}",
                    seed_label(s),
                    100.0 * drop
                ),
            )
        })
        .collect();
    report(
        3,
        "B=32 is 4-10% below B=128 and optimal K grows with B",
        &outcomes,
    );
}

#[test]
fn one_bit_per_subcarrier_onoff_near_optimum() {
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(1, s);
            let onoff = rows(fig, |r| {
                r.config.scheme == Scheme::OnoffClustered && r.config.m == 10 && r.k == 128
            })[0];
            let perfect = rows(fig, |r| {
                r.config.scheme == Scheme::WaterfillPerfect && r.config.m == 10
            })[0]
                .mean;
            let g = gap(onoff.mean, perfect);
            (
                (0.04..=0.10).contains(&g),
                format!(
                    "{}: gap {:.2}% with {} bits",
                    seed_label(s),
                    100.0 * g,
                    onoff.feedback_bits
                ),
            )
        })
        .collect();
    report(
        4,
        "unclustered on/off with B=N within 4-10% of water-filling",
        &outcomes,
    );
}

#[test]
fn low_snr_gain_and_high_snr_convergence() {
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(4, s);
            let at = |snr: f64| rows(fig, move |r| (r.config.snr_db() - snr).abs() < 1e-9);
            let low = at(0.0);
            let uniform = low
                .iter()
                .find(|r| r.config.scheme == Scheme::Uniform)
                .expect("uniform")
                .mean;
            let best_feedback = low
                .iter()
                .filter(|r| r.feedback_bits > 0)
                .map(|r| r.mean)
                .fold(f64::NEG_INFINITY, f64::max);
            let gain = best_feedback / uniform - 1.0;
            let mut spreads = Vec::new();
            let mut converged = true;
            let mut snrs: Vec<f64> = fig
                .iter()
                .map(|r| r.config.snr_db())
                .filter(|&x| x >= 25.0 - 1e-9)
                .collect();
            snrs.sort_by(f64::total_cmp);
            snrs.dedup();
            for snr in snrs {
                let point = at(snr);
                let hi = point
                    .iter()
                    .map(|r| r.mean)
                    .fold(f64::NEG_INFINITY, f64::max);
                let lo = point.iter().map(|r| r.mean).fold(f64::INFINITY, f64::min);
                let spread = (hi - lo) / hi;
                converged &= spread <= 0.05;
                let feedback_lo = point
                    .iter()
                    .filter(|r| r.config.scheme != Scheme::Uniform)
                    .map(|r| r.mean)
                    .fold(f64::INFINITY, f64::min);
                spreads.push(format!(
                    "{snr} dB {:.2}% (without uniform {:.2}%)",
                    100.0 * spread,
                    100.0 * (hi - feedback_lo) / hi
                ));
            }
            let ok = gain >= 0.60 && converged;
            (
                ok,
                format!(
                    "{}: 0 dB gain over uniform {:.1}%, spread {}",
                    seed_label(s),
                    100.0 * gain,
                    spreads.join(", ")
                ),
            )
        })
        .collect();
    report(
        5,
        "feedback beats uniform by >= 60% at 0 dB and schemes converge within 5% at >= 25 dB",
        &outcomes,
    );
}

#[test]
fn proposed_schemes_beat_uniform() {
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(4, s);
            let point = rows(fig, |r| (r.config.snr_db() - 10.0).abs() < 1e-9);
            let uniform = point
                .iter()
                .find(|r| r.config.scheme == Scheme::Uniform)
                .expect("uniform")
                .mean;
            let mut ok = true;
            let mut detail = Vec::new();
            for r in point.iter().filter(|r| r.feedback_bits > 0) {
                let g = r.mean / uniform - 1.0;
                ok &= g > 0.30;
                detail.push(format!("{} +{:.1}%", r.config.scheme, 100.0 * g));
            }
            (ok, format!("{}: {}", seed_label(s), detail.join(", ")))
        })
        .collect();
    report(
        6,
        "proposed schemes beat uniform by > 30% at P_T=1",
        &outcomes,
    );
}

#[test]
fn optimal_cluster_size_shrinks_with_delay_spread() {
    let expected = [(3usize, 16usize), (12, 8), (20, 4)];
    let outcomes: Vec<_> = (0..SEEDS.len())
        .map(|s| {
            let fig = figure(6, s);
            let optimal: Vec<usize> = expected
                .iter()
                .map(|&(m, _)| {
                    rows(fig, |r| {
                        r.config.scheme == Scheme::BitloadLinearInterp && r.config.m == m
                    })
                    .into_iter()
                    .min_by(|a, b| a.mean.total_cmp(&b.mean))
                    .expect("R sweep")
                    .r
                })
                .collect();
            let non_increasing = optimal.windows(2).all(|w| w[1] <= w[0]);
            let matches = optimal
                .iter()
                .zip(&expected)
                .filter(|(got, (_, want))| *got == want)
                .count();
            let ok = non_increasing && matches >= 2;
            (
                ok,
                format!(
                    "{}: optimal R for M=3,12,20 = {optimal:?} ({matches} exact)",
                    seed_label(s)
                ),
            )
        })
        .collect();
    report(
        7,
        "BER-optimal R non-increasing in M with at least two exact matches",
        &outcomes,
    );
}

fn grid_search_capacity(gains: &[f64], noise: f64, total: f64) -> f64 {
    let floors: Vec<f64> = gains.iter().map(|g| noise / g).collect();
    let base = floors.iter().copied().fold(f64::INFINITY, f64::min);
    let points = 10_000;
    (1..=points)
        .map(|i| {
            let level = base + total * i as f64 / points as f64;
            let raw: Vec<f64> = floors.iter().map(|f| (level - f).max(0.0)).collect();
            let sum: f64 = raw.iter().sum();
            let powers: Vec<f64> = raw.iter().map(|p| p * total / sum).collect();
            capacity_of(&powers, gains, noise)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn waterfilling_matches_grid_search_and_kkt() {
    let mut rng = trial_rng(8, 0);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let n = 2 + i % 2;
        let gains: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
        let noise = rng.random_range(0.01..1.0);
        let total = rng.random_range(0.1..4.0);
        let exact = capacity_of(
            waterfill(&gains, noise, total).unwrap().powers(),
            &gains,
            noise,
        );
        worst = worst.max((exact - grid_search_capacity(&gains, noise, total)).abs());
    }
    let mut kkt = 0.0f64;
    for t in 0..1000 {
        let ch = draw_channel(10, 128, &mut trial_rng(9, t)).unwrap();
        let gains = ch.squared_gains();
        let alloc = waterfill(gains, 0.1, 1.0).unwrap();
        let level = alloc.water_level().unwrap();
        kkt = kkt.max((alloc.total() - 1.0).abs());
        for (p, g) in alloc.powers().iter().zip(gains) {
            let floor = 0.1 / g;
            let slack = if *p > 0.0 {
                (p + floor - level).abs()
            } else {
                (level - floor).max(0.0)
            };
            kkt = kkt.max(slack);
        }
    }
    let ok = worst <= 1e-6 && kkt <= 1e-9;
    report(
        8,
        "water-filling equals grid search and satisfies KKT",
        &[(
            ok,
            format!("max capacity diff {worst:.2e}, max KKT residual {kkt:.2e}"),
        )],
    );
}

fn exhaustive_min_power(gains: &[f64], total_bits: u32, model: &PowerModel) -> f64 {
    let levels = [0u32, 2, 4, 6];
    let n = gains.len();
    let mut bestp = f64::INFINITY;
    for code in 0..4usize.pow(n as u32) {
        let mut c = code;
        let mut bits = 0;
        let mut power = 0.0;
        for g in gains {
            let b = levels[c % 4];
            c /= 4;
            bits += b;
            power += model.required_power(b, *g).unwrap();
        }
        if bits == total_bits {
            bestp = bestp.min(power);
        }
    }
    bestp
}

#[test]
fn greedy_bit_loading_matches_exhaustive_search() {
    let model = PowerModel::new(0.1, 1e-3, GainExponent::One).unwrap();
    let mut rng = trial_rng(10, 0);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..500 {
        let gains: Vec<f64> = (0..4)
            .map(|_| Exp1.sample(&mut rng))
            .map(|g: f64| g.max(1e-6))
            .collect();
        for n in 1..=4 {
            for c_b in (0..=8).step_by(2).filter(|&c| c <= MAX_BITS * n as u32) {
                let g = &gains[..n];
                let greedy = greedy_allocate(g, c_b, &model, MAX_BITS)
                    .unwrap()
                    .total_power();
                let exact = exhaustive_min_power(g, c_b, &model);
                let rel = if exact == 0.0 {
                    greedy.abs()
                } else {
                    (greedy - exact).abs() / exact
                };
                worst = worst.max(rel);
                cases += 1;
            }
        }
    }
    report(
        9,
        "greedy bit loading reaches the exhaustive minimum power",
        &[(
            worst <= 1e-9,
            format!("{cases} instances, max relative diff {worst:.2e}"),
        )],
    );
}

#[test]
fn interpolation_is_exact_and_converges() {
    let mut poly_err = 0.0f64;
    let mut node_err = 0.0f64;
    for k in [3usize, 4, 8, 15, 32, 64, 128] {
        let plan = NodePlan::new(128, k).unwrap();
        let p = |x: f64| 2.0 + 0.03 * x + 0.0004 * x * x;
        let nodes: Vec<f64> = plan.node_indices().iter().map(|&i| p(i as f64)).collect();
        let quad = interpolate_quadratic(&plan, &nodes).unwrap();
        for (i, v) in quad.values().iter().enumerate() {
            poly_err = poly_err.max((v - p(i as f64)).abs() / p(i as f64));
        }
        let lin = interpolate_linear(&plan, &nodes).unwrap();
        for (j, &i) in plan.node_indices().iter().enumerate() {
            node_err = node_err.max((quad.values()[i] - nodes[j]).abs());
            node_err = node_err.max((lin.values()[i] - nodes[j]).abs());
        }
    }
    let config = |scheme| SchemeConfig {
        k: Some(128),
        b: 128 * 16,
        trials: 1000,
        ..SchemeConfig::with_scheme(scheme)
    };
    let perfect = run_scheme(&config(Scheme::WaterfillPerfect)).unwrap().mean;
    let mut limit = Vec::new();
    let mut limit_ok = true;
    for scheme in [
        Scheme::WaterfillLinearInterp,
        Scheme::WaterfillQuadraticInterp,
    ] {
        let g = gap(run_scheme(&config(scheme)).unwrap().mean, perfect).abs();
        limit_ok &= g <= 0.005;
        limit.push(format!("{scheme} {:.3}%", 100.0 * g));
    }
    let ok = poly_err <= 1e-9 && node_err == 0.0 && limit_ok;
    report(
        10,
        "interpolation reproduces quadratics, hits nodes, and converges at K=N",
        &[(
            ok,
            format!(
                "poly rel err {poly_err:.2e}, node err {node_err:.1e}, K=N gap {}",
                limit.join(", ")
            ),
        )],
    );
}

/// Simpson integration of the Gaussian density on `[x, 40]`.
fn q_by_quadrature(x: f64) -> f64 {
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let steps = 100_000;
    let h = (40.0 - x) / steps as f64;
    let mut s = pdf(x) + pdf(40.0);
    for i in 1..steps {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * pdf(x + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn q_function_matches_integral_and_inverts() {
    let mut err = 0.0f64;
    let mut round = 0.0f64;
    for i in 0..1000 {
        let x = -8.0 + 16.0 * i as f64 / 999.0;
        let q = q_function(x);
        err = err.max((q - q_by_quadrature(x)).abs());
        if q > 0.0 && q < 1.0 {
            round = round.max((q_function(q_inverse(q).unwrap()) - q).abs() / q);
        }
    }
    let ok = err <= 1e-9 && round <= 1e-9;
    report(
        11,
        "Q function matches quadrature and inverse round-trips",
        &[(
            ok,
            format!("max abs err {err:.2e}, max round-trip rel err {round:.2e}"),
        )],
    );
}

#[test]
fn channel_statistics() {
    let mut parseval = 0.0f64;
    let mut sum = 0.0;
    let draws = 10_000u64;
    for t in 0..draws {
        let ch = draw_channel(10, 128, &mut trial_rng(12, t)).unwrap();
        let total: f64 = ch.squared_gains().iter().sum();
        let energy = ch.taps().energy();
        parseval = parseval.max((total / 128.0 - energy).abs() / energy);
        sum += total;
    }
    let mean = sum / (draws as f64 * 128.0);
    let ok = parseval <= 1e-10 && (mean - 1.0).abs() <= 0.03;
    report(
        12,
        "Parseval per realization and unit mean subcarrier gain",
        &[(
            ok,
            format!("max Parseval rel err {parseval:.2e}, E|H|^2 = {mean:.4}"),
        )],
    );
}

fn figure_csv(id: u32, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let records = pool
        .install(|| {
            run_figure(
                id,
                RunOverrides {
                    seed: Some(7),
                    trials: Some(200),
                    training_trials: Some(100),
                },
            )
        })
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    emit_csv(&records, &path).unwrap();
    std::fs::read(path).unwrap()
}

#[test]
fn figure_output_is_deterministic() {
    let mut detail = Vec::new();
    let mut ok = true;
    for id in 1..=6 {
        let reference = figure_csv(id, 1);
        let same = [1usize, 4, 8]
            .iter()
            .all(|&t| figure_csv(id, t) == reference);
        ok &= same;
        detail.push(format!(
            "fig{id} {}",
            if same { "identical" } else { "differs" }
        ));
    }
    report(
        13,
        "figure CSV byte-identical across re-runs and thread counts",
        &[(ok, detail.join(", "))],
    );
}
