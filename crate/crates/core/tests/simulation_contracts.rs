//! Determinism, common-random-numbers and convergence contracts of the
//! Monte Carlo engine.

use estbias::{
    bias_curve, compute_bias, draw_actuals, simulate_expected_bias, BiasMeasure,
    EffortDistribution, EstimationRecord, LogNormalEffort, SimulationConfig,
};

fn figure_dist() -> LogNormalEffort {
    LogNormalEffort::from_mean_sd(236.0, 126.0).unwrap()
}

fn bits(xs: &[f64]) -> Vec<u64> {
    xs.iter().map(|x| x.to_bits()).collect()
}

/// Identical (seed, n_draws) must give bit-identical draws for any chunk
/// size and any thread count.
#[test]
fn draws_depend_only_on_seed_and_count() {
    let dist = figure_dist();
    let reference = draw_actuals(&dist, &SimulationConfig::new(10_000, 42));

    for chunk_size in [1usize, 100, 4096, 8192, 1 << 20] {
        let cfg = SimulationConfig {
            n_draws: 10_000,
            seed: 42,
            chunk_size,
        };
        assert_eq!(
            bits(&reference),
            bits(&draw_actuals(&dist, &cfg)),
            "chunk_size {chunk_size} changed the draws"
        );
    }

    for threads in [1usize, 2, 7] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let draws = pool.install(|| draw_actuals(&dist, &SimulationConfig::new(10_000, 42)));
        assert_eq!(
            bits(&reference),
            bits(&draws),
            "{threads} threads changed the draws"
        );
    }

    // a different seed must give different draws
    let other = draw_actuals(&dist, &SimulationConfig::new(10_000, 43));
    assert_ne!(bits(&reference), bits(&other));

    // a prefix relationship holds across n_draws, as the blocks are fixed
    let longer = draw_actuals(&dist, &SimulationConfig::new(12_000, 42));
    assert_eq!(bits(&reference), bits(&longer[..10_000]));
}

/// Simulation results themselves are bit-stable across thread counts.
#[test]
fn simulated_bias_is_bit_stable_across_parallelism() {
    let dist = figure_dist();
    let cfg = SimulationConfig::new(50_000, 9);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| simulate_expected_bias(&dist, 236.0, BiasMeasure::MeanReAct, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(8);
    assert_eq!(a.expected_bias.to_bits(), b.expected_bias.to_bits());
    assert_eq!(
        a.std_error.unwrap().to_bits(),
        b.std_error.unwrap().to_bits()
    );
}

/// The curve and single-point paths see the same actuals (common random
/// numbers), so their results agree bitwise.
#[test]
fn bias_curve_shares_draws_with_single_point_simulation() {
    let dist = figure_dist();
    let cfg = SimulationConfig::new(10_000, 5);
    let grid = [162.0, 208.2, 236.0];
    for measure in [BiasMeasure::MeanReAct, BiasMeasure::MdLogErr] {
        let curve = bias_curve(&dist, &grid, measure, &cfg).unwrap();
        assert_eq!(curve.len(), grid.len());
        for point in &curve {
            let single = simulate_expected_bias(&dist, point.estimate, measure, &cfg).unwrap();
            assert_eq!(
                point.expected_bias.to_bits(),
                single.expected_bias.to_bits()
            );
        }
    }

    // the draw checksum is the same draw set both paths consumed
    let sum_a: f64 = draw_actuals(&dist, &cfg).iter().sum();
    let sum_b: f64 = draw_actuals(&dist, &cfg).iter().sum();
    assert_eq!(sum_a.to_bits(), sum_b.to_bits());
}

/// The engine is a thin wrapper over `compute_bias` on a synthetic dataset.
#[test]
fn simulation_agrees_with_compute_bias_over_the_same_records() {
    let dist = figure_dist();
    let cfg = SimulationConfig::new(2_001, 31);
    let records: Vec<_> = draw_actuals(&dist, &cfg)
        .into_iter()
        .enumerate()
        .map(|(i, actual)| EstimationRecord::new(format!("run-{i}"), 210.0, actual).unwrap())
        .collect();
    for measure in BiasMeasure::ALL {
        let simulated = simulate_expected_bias(&dist, 210.0, measure, &cfg).unwrap();
        let direct = compute_bias(&records, measure).unwrap();
        assert_eq!(
            simulated.expected_bias.to_bits(),
            direct.to_bits(),
            "{measure}"
        );
    }
}

/// Expected relative error against actuals is linear in the estimate:
/// the mean of per-draw scores equals `1 - e * mean(1/act)` over the same
/// draws, up to summation roundoff.
#[test]
fn re_act_linearity_identity_per_run() {
    let dist = figure_dist();
    let cfg = SimulationConfig::new(10_000, 3);
    let draws = draw_actuals(&dist, &cfg);
    let recip_mean = draws.iter().map(|a| 1.0 / a).sum::<f64>() / draws.len() as f64;
    for estimate in [120.0, 183.65, 236.0, 400.0] {
        let point = simulate_expected_bias(&dist, estimate, BiasMeasure::MeanReAct, &cfg).unwrap();
        let affine = 1.0 - estimate * recip_mean;
        assert!(
            (point.expected_bias - affine).abs() < 1e-9,
            "estimate {estimate}: {} vs {affine}",
            point.expected_bias
        );
    }
}

/// At the distribution mean, mean relative error against the estimate is
/// centered on zero: within 4 standard errors in at least 99 of 100 seeds.
#[test]
fn mean_re_est_converges_across_seeds() {
    let dist = figure_dist();
    let mut within = 0;
    for seed in 0..100u64 {
        let cfg = SimulationConfig::new(10_000, seed);
        let point =
            simulate_expected_bias(&dist, dist.mean(), BiasMeasure::MeanReEst, &cfg).unwrap();
        if point.expected_bias.abs() < 4.0 * point.std_error.unwrap() {
            within += 1;
        }
    }
    assert!(within >= 99, "only {within} of 100 seeds within 4 SE");
}

/// Seeded sample statistics of a million draws sit within 4 standard errors
/// of the closed-form statistics.
#[test]
fn sampling_matches_closed_form_statistics() {
    let dist = figure_dist();
    let cfg = SimulationConfig::new(1_000_000, 1);
    let mut draws = draw_actuals(&dist, &cfg);
    let n = draws.len() as f64;

    let sample_mean = draws.iter().sum::<f64>() / n;
    let se_mean = 126.0 / n.sqrt();
    assert!(
        (sample_mean - dist.mean()).abs() < 4.0 * se_mean,
        "mean {sample_mean}"
    );

    let sample_recip = draws.iter().map(|a| 1.0 / a).sum::<f64>() / n;
    // sd(1/X) = E[1/X] * sqrt(exp(sigma^2) - 1)
    let sd_recip =
        dist.reciprocal_mean() * ((dist.sigma_log() * dist.sigma_log()).exp() - 1.0).sqrt();
    assert!(
        (sample_recip - dist.reciprocal_mean()).abs() < 4.0 * sd_recip / n.sqrt(),
        "reciprocal mean {sample_recip}"
    );

    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sample_median = (draws[499_999] + draws[500_000]) / 2.0;
    // SE of the sample median: 1 / (2 f(median) sqrt(n))
    let density_at_median = 0.3989422804014327 / (dist.median() * dist.sigma_log());
    let se_median = 1.0 / (2.0 * density_at_median * n.sqrt());
    assert!(
        (sample_median - dist.median()).abs() < 4.0 * se_median,
        "median {sample_median}"
    );
}
