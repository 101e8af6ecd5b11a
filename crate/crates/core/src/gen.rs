//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::SppGame;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub n: usize,
    pub m: usize,
    /// Values are drawn from `{0, 1, ..., max_value} / denominator`.
    pub max_value: u32,
    /// Budgets are drawn from `{1, ..., max_budget} / denominator`.
    pub max_budget: u32,
    pub denominator: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n: 2,
            m: 2,
            max_value: 8,
            max_budget: 8,
            denominator: 1,
        }
    }
}

/// A random valid game. Zero columns and rows are repaired by giving one
/// random entry a positive value, so every draw is usable.
pub fn random_game<T: Scalar>(seed: u64, cfg: &GenConfig) -> SppGame<T> {
    assert!(cfg.n >= 1 && cfg.m >= 1 && cfg.max_value >= 1 && cfg.max_budget >= 1 && cfg.denominator >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = i64::from(cfg.denominator);
    let mut raw: Vec<Vec<u32>> = (0..cfg.n)
        .map(|_| (0..cfg.m).map(|_| rng.gen_range(0..=cfg.max_value)).collect())
        .collect();
    for j in 0..cfg.m {
        if raw.iter().all(|row| row[j] == 0) {
            let i = rng.gen_range(0..cfg.n);
            raw[i][j] = rng.gen_range(1..=cfg.max_value);
        }
    }
    for row in raw.iter_mut() {
        if row.iter().all(|&v| v == 0) {
            let j = rng.gen_range(0..cfg.m);
            row[j] = rng.gen_range(1..=cfg.max_value);
        }
    }
    let values = raw
        .iter()
        .map(|row| row.iter().map(|&v| T::from_frac(i64::from(v), den)).collect())
        .collect();
    let budgets = (0..cfg.n)
        .map(|_| T::from_frac(i64::from(rng.gen_range(1..=cfg.max_budget)), den))
        .collect();
    SppGame::new(values, budgets, None).expect("repaired draw is valid")
}
