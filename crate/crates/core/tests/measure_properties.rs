//! Property tests for the per-record forms and the seven measures.

use estbias::{compute_bias, per_record_score, BiasMeasure, EstimationRecord, PerRecordForm};
use proptest::prelude::*;

fn rec(est: f64, act: f64) -> EstimationRecord {
    EstimationRecord::new("p", est, act).unwrap()
}

/// Strictly positive efforts away from the extremes of the f64 range.
fn effort() -> impl Strategy<Value = f64> {
    (0.01f64..1.0e6).prop_map(|x| x)
}

fn dataset(max_len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((effort(), effort()), 1..max_len)
}

const FORMS: [PerRecordForm; 4] = [
    PerRecordForm::Deviation,
    PerRecordForm::RelToActual,
    PerRecordForm::RelToEstimate,
    PerRecordForm::LogRatio,
];

const MEDIAN_MEASURES: [BiasMeasure; 4] = [
    BiasMeasure::MedianDev,
    BiasMeasure::MedianReAct,
    BiasMeasure::MedianReEst,
    BiasMeasure::MdLogErr,
];

proptest! {
    /// All four forms carry the sign of `act - est`, and are zero together.
    #[test]
    fn sign_coherence_across_forms(est in effort(), act in effort()) {
        let r = rec(est, act);
        let reference = (act - est).signum();
        for form in FORMS {
            let score = per_record_score(&r, form).unwrap();
            if act == est {
                prop_assert_eq!(score, 0.0);
            } else {
                prop_assert_eq!(score.signum(), reference, "{:?}", form);
            }
        }
    }

    /// Relative-to-actual scores stay below 1; relative-to-estimate above -1.
    #[test]
    fn relative_scores_respect_their_open_bounds(est in effort(), act in effort()) {
        let r = rec(est, act);
        prop_assert!(per_record_score(&r, PerRecordForm::RelToActual).unwrap() < 1.0);
        prop_assert!(per_record_score(&r, PerRecordForm::RelToEstimate).unwrap() > -1.0);
    }

    /// Swapping estimated and actual in every record negates MdLogErr
    /// bitwise, and turns each relative-to-actual score into the negated
    /// relative-to-estimate score.
    #[test]
    fn estimate_actual_swap_antisymmetry(pairs in dataset(40)) {
        let records: Vec<_> = pairs.iter().map(|&(e, a)| rec(e, a)).collect();
        let swapped: Vec<_> = pairs.iter().map(|&(e, a)| rec(a, e)).collect();

        let forward = compute_bias(&records, BiasMeasure::MdLogErr).unwrap();
        let backward = compute_bias(&swapped, BiasMeasure::MdLogErr).unwrap();
        prop_assert_eq!(forward, -backward);

        for (r, s) in records.iter().zip(&swapped) {
            let re_act = per_record_score(r, PerRecordForm::RelToActual).unwrap();
            let re_est_swapped = per_record_score(s, PerRecordForm::RelToEstimate).unwrap();
            prop_assert_eq!(re_act, -re_est_swapped);
        }
    }

    /// Scaling every effort by a power of two leaves the relative measures
    /// bit-identical and scales the deviation measures by the same factor.
    #[test]
    fn scale_invariance_is_exact_for_powers_of_two(pairs in dataset(30), k in -8i32..=8) {
        let c = 2f64.powi(k);
        let records: Vec<_> = pairs.iter().map(|&(e, a)| rec(e, a)).collect();
        let scaled: Vec<_> = pairs.iter().map(|&(e, a)| rec(c * e, c * a)).collect();

        for m in [
            BiasMeasure::MeanReAct,
            BiasMeasure::MeanReEst,
            BiasMeasure::MedianReAct,
            BiasMeasure::MedianReEst,
        ] {
            let base = compute_bias(&records, m).unwrap();
            let after = compute_bias(&scaled, m).unwrap();
            prop_assert_eq!(base, after, "{}", m);
        }
        for m in [BiasMeasure::MeanDev, BiasMeasure::MedianDev] {
            let base = compute_bias(&records, m).unwrap();
            let after = compute_bias(&scaled, m).unwrap();
            prop_assert_eq!(c * base, after, "{}", m);
        }
        // each log is rounded at a different argument, so MdLogErr is
        // invariant only to evaluation accuracy
        let base = compute_bias(&records, BiasMeasure::MdLogErr).unwrap();
        let after = compute_bias(&scaled, BiasMeasure::MdLogErr).unwrap();
        prop_assert!((base - after).abs() <= 1e-12 * (1.0 + base.abs()));
    }

    /// Over an odd dataset the four median-based measures agree in sign:
    /// every per-record form preserves the sign of `act - est`, so the
    /// central order statistic sits on the same side of zero for each.
    #[test]
    fn median_measures_share_sign_for_odd_datasets(pairs in dataset(31)) {
        let mut pairs = pairs;
        if pairs.len() % 2 == 0 {
            pairs.pop();
        }
        prop_assume!(!pairs.is_empty());
        let records: Vec<_> = pairs.iter().map(|&(e, a)| rec(e, a)).collect();
        let sign = |x: f64| {
            if x > 0.0 { 1 } else if x < 0.0 { -1 } else { 0 }
        };
        let signs: Vec<i32> = MEDIAN_MEASURES
            .iter()
            .map(|&m| sign(compute_bias(&records, m).unwrap()))
            .collect();
        prop_assert!(signs.windows(2).all(|w| w[0] == w[1]), "signs {:?}", signs);
    }

    /// Scaling by an arbitrary positive factor preserves the relative
    /// measures to floating-point accuracy.
    #[test]
    fn scale_invariance_holds_for_general_factors(pairs in dataset(30), c in 0.001f64..1000.0) {
        let records: Vec<_> = pairs.iter().map(|&(e, a)| rec(e, a)).collect();
        let scaled: Vec<_> = pairs.iter().map(|&(e, a)| rec(c * e, c * a)).collect();
        for m in [
            BiasMeasure::MeanReAct,
            BiasMeasure::MeanReEst,
            BiasMeasure::MedianReAct,
            BiasMeasure::MedianReEst,
            BiasMeasure::MdLogErr,
        ] {
            let base = compute_bias(&records, m).unwrap();
            let after = compute_bias(&scaled, m).unwrap();
            prop_assert!((base - after).abs() <= 1e-9 * (1.0 + base.abs()), "{}", m);
        }
    }

}

/// An odd dataset with distinct actuals, estimated at its sample median,
/// scores exactly zero under every median-based measure.
#[test]
fn median_matching_is_exact_for_odd_distinct_datasets() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for n in [1usize, 3, 5, 9, 21, 101] {
        let mut distinct = std::collections::BTreeSet::new();
        while distinct.len() < n {
            distinct.insert(rng.random_range(1..4_000_000u64));
        }
        let actuals: Vec<f64> = distinct.iter().map(|&v| v as f64 * 0.25).collect();
        let median = actuals[n / 2];
        let records: Vec<_> = actuals
            .iter()
            .map(|&a| EstimationRecord::new("p", median, a).unwrap())
            .collect();
        for m in MEDIAN_MEASURES {
            assert_eq!(compute_bias(&records, m).unwrap(), 0.0, "{m} at n = {n}");
        }
    }
}

/// A dataset estimated at a dyadic-friendly sample mean scores exactly zero
/// under both mean-matching measures; arbitrary data gets within roundoff.
#[test]
fn mean_matching_at_the_sample_mean() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        // integer actuals balanced around a power-of-two mean keep every
        // score a dyadic rational, so the zeros are bitwise
        let n = rng.random_range(2..40usize);
        let mean = 2f64.powi(rng.random_range(10..14));
        let mut deviations: Vec<i64> = (0..n - 1).map(|_| rng.random_range(-9..=9)).collect();
        let balance: i64 = -deviations.iter().sum::<i64>();
        deviations.push(balance);
        let records: Vec<_> = deviations
            .iter()
            .map(|&d| EstimationRecord::new("p", mean, mean + d as f64).unwrap())
            .collect();
        assert_eq!(compute_bias(&records, BiasMeasure::MeanDev).unwrap(), 0.0);
        assert_eq!(compute_bias(&records, BiasMeasure::MeanReEst).unwrap(), 0.0);
    }

    // arbitrary positive reals: zero up to accumulated roundoff
    for _ in 0..50 {
        let n = rng.random_range(2..40usize);
        let actuals: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..5000.0f64)).collect();
        let mean = actuals.iter().sum::<f64>() / n as f64;
        let records: Vec<_> = actuals
            .iter()
            .map(|&a| EstimationRecord::new("p", mean, a).unwrap())
            .collect();
        let dev = compute_bias(&records, BiasMeasure::MeanDev).unwrap();
        let re_est = compute_bias(&records, BiasMeasure::MeanReEst).unwrap();
        assert!(dev.abs() < 1e-9, "MeanDev {dev}");
        assert!(re_est.abs() < 1e-12, "MeanReEst {re_est}");
    }
}
