//! The product of two fair dice: a finite distribution with exact statistics.

use rand::distr::{Distribution, Uniform};
use rand::RngCore;

use crate::distributions::EffortDistribution;

/// Number of equally likely (d1, d2) outcomes.
pub const DICE_OUTCOMES: u32 = 36;

/// One atom of the dice-product support: `outcome` occurs in `count` of the
/// 36 equally likely throws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DiceAtom {
    pub outcome: u32,
    pub count: u32,
}

impl DiceAtom {
    /// `count / 36` as a float.
    pub fn probability(&self) -> f64 {
        f64::from(self.count) / f64::from(DICE_OUTCOMES)
    }
}

/// Distribution of the product of two independent fair six-sided dice.
///
/// Mean 12.25, median 10, mode 6 (6 and 12 occur equally often; the tie is
/// broken toward 6). `E[1/X] = (49/120)^2 = 2401/14400` by independence of
/// the two dice.
#[derive(Debug, Clone)]
pub struct DiceProduct {
    atoms: Vec<DiceAtom>,
    die: Uniform<u32>,
}

impl DiceProduct {
    pub fn new() -> Self {
        let mut counts = std::collections::BTreeMap::new();
        for d1 in 1..=6u32 {
            for d2 in 1..=6u32 {
                *counts.entry(d1 * d2).or_insert(0u32) += 1;
            }
        }
        let atoms = counts
            .into_iter()
            .map(|(outcome, count)| DiceAtom { outcome, count })
            .collect();
        DiceProduct {
            atoms,
            die: Uniform::new_inclusive(1u32, 6).expect("1..=6 is a valid range"),
        }
    }

    /// The exact 18-atom support, ordered by outcome, counts summing to 36.
    pub fn enumerate(&self) -> &[DiceAtom] {
        &self.atoms
    }
}

impl Default for DiceProduct {
    fn default() -> Self {
        Self::new()
    }
}

impl EffortDistribution for DiceProduct {
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let d1 = self.die.sample(rng);
        let d2 = self.die.sample(rng);
        f64::from(d1 * d2)
    }

    fn mean(&self) -> f64 {
        12.25
    }

    fn median(&self) -> f64 {
        10.0
    }

    /// 6, with the 6-vs-12 tie broken low.
    fn mode(&self) -> f64 {
        6.0
    }

    fn variance(&self) -> f64 {
        // E[X^2] - E[X]^2 = 8281/36 - 2401/16 = 11515/144
        11515.0 / 144.0
    }

    fn reciprocal_mean(&self) -> f64 {
        2401.0 / 14400.0
    }

    fn cdf(&self, x: f64) -> f64 {
        let below: u32 = self
            .atoms
            .iter()
            .filter(|a| f64::from(a.outcome) <= x)
            .map(|a| a.count)
            .sum();
        f64::from(below) / f64::from(DICE_OUTCOMES)
    }

    fn support_atoms(&self) -> Option<Vec<(f64, f64)>> {
        Some(
            self.atoms
                .iter()
                .map(|a| (f64::from(a.outcome), a.probability()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_has_eighteen_atoms_summing_to_all_outcomes() {
        let dice = DiceProduct::new();
        let atoms = dice.enumerate();
        assert_eq!(atoms.len(), 18);
        assert_eq!(atoms.iter().map(|a| a.count).sum::<u32>(), 36);
        assert!(atoms.iter().all(|a| (1..=36).contains(&a.outcome)));
        let total: f64 = atoms.iter().map(|a| a.probability()).sum();
        assert_eq!(total, 1.0);
    }

    #[test]
    fn expectation_from_enumeration_is_exact() {
        let dice = DiceProduct::new();
        let mean: f64 = dice
            .enumerate()
            .iter()
            .map(|a| f64::from(a.outcome * a.count))
            .sum::<f64>()
            / 36.0;
        assert_eq!(mean, 12.25);
        assert_eq!(dice.mean(), 12.25);
    }

    #[test]
    fn median_splits_the_outcomes_in_half() {
        let dice = DiceProduct::new();
        let p_le: f64 = dice.cdf(10.0);
        let p_ge: f64 = dice
            .enumerate()
            .iter()
            .filter(|a| a.outcome >= 10)
            .map(|a| a.probability())
            .sum();
        assert!(p_le >= 0.5, "P(X <= 10) = {p_le}");
        assert!(p_ge >= 0.5, "P(X >= 10) = {p_ge}");
        assert_eq!(dice.median(), 10.0);
    }

    #[test]
    fn mode_tie_is_broken_toward_six() {
        let dice = DiceProduct::new();
        let count_of = |v: u32| {
            dice.enumerate()
                .iter()
                .find(|a| a.outcome == v)
                .map(|a| a.count)
                .unwrap_or(0)
        };
        assert_eq!(count_of(6), 4);
        assert_eq!(count_of(12), 4);
        assert!(dice.enumerate().iter().all(|a| a.count <= 4));
        assert_eq!(dice.mode(), 6.0);
    }

    #[test]
    fn reciprocal_mean_is_the_squared_single_die_value() {
        let dice = DiceProduct::new();
        let from_atoms: f64 = dice
            .enumerate()
            .iter()
            .map(|a| a.probability() / f64::from(a.outcome))
            .sum();
        assert!((from_atoms - 2401.0 / 14400.0).abs() < 1e-15);
        assert_eq!(dice.reciprocal_mean(), 2401.0 / 14400.0);
        assert!((dice.harmonic_point() - 14400.0 / 2401.0).abs() < 1e-12);
    }

    #[test]
    fn variance_matches_enumeration() {
        let dice = DiceProduct::new();
        let ex2: f64 = dice
            .enumerate()
            .iter()
            .map(|a| a.probability() * f64::from(a.outcome * a.outcome))
            .sum();
        let var = ex2 - 12.25 * 12.25;
        assert!((var - dice.variance()).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_a_step_function_reaching_one() {
        let dice = DiceProduct::new();
        assert_eq!(dice.cdf(36.0), 1.0);
        assert_eq!(dice.cdf(0.5), 0.0);
        assert_eq!(dice.cdf(1.0), 1.0 / 36.0);
        // right-continuity at an atom: cdf(10) includes the atom at 10
        assert_eq!(dice.cdf(10.0), 19.0 / 36.0);
        assert!(dice.cdf(9.999) < dice.cdf(10.0));
    }

    #[test]
    fn sampled_values_stay_on_the_support() {
        use rand::SeedableRng;
        let dice = DiceProduct::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = dice.sample(&mut rng);
            let v = x as u32;
            assert_eq!(f64::from(v), x);
            assert!(dice.enumerate().iter().any(|a| a.outcome == v));
        }
    }
}
