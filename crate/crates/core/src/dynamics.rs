//! Adaptive pacing: every buyer nudges its multiplier by `±η` each day in
//! response to its budget signal, goods are shared by the smooth allocation,
//! and a day counts as converged only when the recent trajectory is flat and
//! the exact verifier accepts the current profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::game::{ApproxParams, SppGame};
use crate::io::{fmt_mat, fmt_vec};
use crate::scalar::Scalar;
use crate::verify::{smooth_allocation, verify_smooth, VerifyReport};

/// Which way a buyer moves after exhausting its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Exhausted buyers back off, others bid up.
    #[default]
    Coherent,
    /// Exhausted buyers bid up, others back off.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("step size must be positive, got {0}")]
    Step(String),
    #[error("perturbation must lie in (0, 1), got {0}")]
    Perturbation(String),
    #[error("gamma must lie in [0, 1), got {0}")]
    Gamma(String),
    #[error("horizon and window must be at least 1")]
    Horizon,
    #[error("dynamics run on games without reserve prices")]
    Reserves,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsConfig<T> {
    eta: T,
    delta: T,
    gamma: T,
    horizon: usize,
    window: usize,
    pub direction: Direction,
    pub seed: u64,
}

impl<T: Scalar> DynamicsConfig<T> {
    /// `eta` is the daily step, `delta` the smooth-allocation perturbation,
    /// `gamma` the budget slack the convergence check is certified at.
    pub fn new(eta: T, delta: T, gamma: T, horizon: usize, window: usize) -> Result<Self, DynamicsError> {
        if !eta.is_positive() {
            return Err(DynamicsError::Step(eta.canonical()));
        }
        if !delta.is_positive() || delta >= T::one() {
            return Err(DynamicsError::Perturbation(delta.canonical()));
        }
        if gamma.is_negative() || gamma >= T::one() {
            return Err(DynamicsError::Gamma(gamma.canonical()));
        }
        if horizon == 0 || window == 0 {
            return Err(DynamicsError::Horizon);
        }
        Ok(Self {
            eta,
            delta,
            gamma,
            horizon,
            window,
            direction: Direction::Coherent,
            seed: 0,
        })
    }

    pub fn eta(&self) -> &T {
        &self.eta
    }

    pub fn delta(&self) -> &T {
        &self.delta
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn params(&self) -> ApproxParams<T> {
        ApproxParams::new(self.delta.clone(), self.gamma.clone()).expect("checked in new")
    }
}

/// Day `d` holds the profile bid on that day and what it cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory<T> {
    pub profiles: Vec<Vec<T>>,
    pub expenditures: Vec<Vec<T>>,
    /// First day whose profile was certified; the run stops there.
    pub converged_day: Option<usize>,
    pub params: ApproxParams<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn converged(&self) -> bool {
        self.converged_day.is_some()
    }

    pub fn days(&self) -> usize {
        self.profiles.len()
    }

    pub fn final_profile(&self) -> &[T] {
        self.profiles.last().expect("at least one day")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "converged_day": self.converged_day,
            "delta": self.params.delta.canonical(),
            "gamma": self.params.gamma.canonical(),
            "alpha": fmt_mat(&self.profiles),
            "expenditures": fmt_mat(&self.expenditures),
        })
    }
}

fn initial_profile<T: Scalar>(n: usize, seed: u64) -> Vec<T> {
    const STEPS: i64 = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| T::from_frac(rng.gen_range(0..=STEPS), STEPS)).collect()
}

fn clip<T: Scalar>(v: T) -> T {
    if v.is_negative() {
        T::zero()
    } else if v > T::one() {
        T::one()
    } else {
        v
    }
}

/// Every multiplier stayed within a band of width `2η` over the last
/// `window` days.
fn flat<T: Scalar>(profiles: &[Vec<T>], window: usize, eta: &T) -> bool {
    if profiles.len() < window {
        return false;
    }
    let recent = &profiles[profiles.len() - window..];
    let band = eta.clone() + eta.clone();
    (0..recent[0].len()).all(|i| {
        let lo = recent.iter().map(|p| &p[i]).min().expect("window >= 1");
        let hi = recent.iter().map(|p| &p[i]).max().expect("window >= 1");
        hi.clone() - lo.clone() <= band
    })
}

/// Runs up to `horizon` days from a seeded starting profile.
pub fn simulate<T: Scalar>(game: &SppGame<T>, config: &DynamicsConfig<T>) -> Result<Trajectory<T>, DynamicsError> {
    if game.has_reserves() {
        return Err(DynamicsError::Reserves);
    }
    let params = config.params();
    let mut alpha = initial_profile::<T>(game.n(), config.seed);
    let mut profiles = Vec::with_capacity(config.horizon);
    let mut expenditures = Vec::with_capacity(config.horizon);
    let mut converged_day = None;
    for day in 0..config.horizon {
        let x = smooth_allocation(game, &alpha, &config.delta);
        let spend = game.expenditures(&alpha, &x);
        profiles.push(alpha.clone());
        expenditures.push(spend.clone());
        if flat(&profiles, config.window, &config.eta)
            && verify_smooth(game, &alpha, &params).expect("shape checked").passed()
        {
            converged_day = Some(day);
            break;
        }
        alpha = alpha
            .iter()
            .zip(&spend)
            .enumerate()
            .map(|(i, (a, s))| {
                let exhausted = s >= game.budget(i);
                let down = match config.direction {
                    Direction::Coherent => exhausted,
                    Direction::Literal => !exhausted,
                };
                if down {
                    clip(a.clone() - config.eta.clone())
                } else {
                    clip(a.clone() + config.eta.clone())
                }
            })
            .collect();
    }
    Ok(Trajectory {
        profiles,
        expenditures,
        converged_day,
        params,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport<T> {
    pub converged_day: Option<usize>,
    /// `verify_smooth` on the final profile.
    pub report: VerifyReport<T>,
}

impl<T: Scalar> ConvergenceReport<T> {
    /// Only a converged trajectory whose final profile verifies is a claim.
    pub fn certified(&self) -> bool {
        self.converged_day.is_some() && self.report.passed()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let status = if self.certified() {
            "converged"
        } else if self.converged_day.is_some() {
            "converged-unverified"
        } else {
            "unconverged"
        };
        serde_json::json!({
            "status": status,
            "converged_day": self.converged_day,
            "final": self.report.to_json(),
        })
    }
}

/// Re-checks the final profile under `params` with the standalone verifier.
pub fn convergence_report<T: Scalar>(
    trajectory: &Trajectory<T>,
    game: &SppGame<T>,
    params: &ApproxParams<T>,
) -> ConvergenceReport<T> {
    let report = verify_smooth(game, trajectory.final_profile(), params).expect("trajectory fits the game");
    ConvergenceReport {
        converged_day: trajectory.converged_day,
        report,
    }
}

/// Summary row for sweeps: converged day and final profile.
pub fn summary<T: Scalar>(trajectory: &Trajectory<T>) -> serde_json::Value {
    serde_json::json!({
        "converged_day": trajectory.converged_day,
        "days": trajectory.days(),
        "final": fmt_vec(trajectory.final_profile()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational as R;

    fn r(p: i64, q: i64) -> R {
        R::from_frac(p, q)
    }

    fn config(horizon: usize) -> DynamicsConfig<R> {
        DynamicsConfig::new(r(1, 64), r(1, 8), r(1, 4), horizon, 8).unwrap()
    }

    #[test]
    fn config_invariants() {
        assert!(matches!(DynamicsConfig::new(r(0, 1), r(1, 8), r(0, 1), 10, 2), Err(DynamicsError::Step(_))));
        assert!(matches!(DynamicsConfig::new(r(1, 8), r(1, 1), r(0, 1), 10, 2), Err(DynamicsError::Perturbation(_))));
        assert_eq!(DynamicsConfig::new(r(1, 8), r(1, 8), r(0, 1), 0, 2), Err(DynamicsError::Horizon));
    }

    #[test]
    fn single_unconstrained_buyer_climbs_to_one() {
        let g = SppGame::new(vec![vec![R::from_i64(1)]], vec![R::from_i64(1)], None).unwrap();
        for seed in 0..5 {
            let mut cfg = config(200);
            cfg.seed = seed;
            let tr = simulate(&g, &cfg).unwrap();
            assert!(tr.expenditures.iter().all(|e| e[0] == R::from_i64(0)));
            assert!(tr.converged());
            assert_eq!(tr.final_profile(), [R::from_i64(1)]);
            assert!(convergence_report(&tr, &g, &cfg.params()).certified());
        }
    }

    #[test]
    fn deterministic_and_clipped() {
        let g = SppGame::new(
            vec![vec![R::from_i64(3), R::from_i64(1)], vec![R::from_i64(2), R::from_i64(4)]],
            vec![R::from_i64(1), R::from_i64(2)],
            None,
        )
        .unwrap();
        let mut cfg = config(300);
        cfg.seed = 9;
        let a = simulate(&g, &cfg).unwrap();
        assert_eq!(a, simulate(&g, &cfg).unwrap());
        assert!(a.profiles.iter().flatten().all(|v| *v >= R::from_i64(0) && *v <= R::from_i64(1)));
        cfg.seed = 10;
        assert_ne!(a.profiles[0], simulate(&g, &cfg).unwrap().profiles[0]);
    }

    #[test]
    fn literal_direction_runs_away() {
        // A lone buyer with a tight budget: the literal rule bids up after
        // overspending, so it sits at 1 over budget and never certifies.
        let g = SppGame::new(
            vec![vec![R::from_i64(4), R::from_i64(4)], vec![R::from_i64(2), R::from_i64(0)]],
            vec![R::from_i64(1), R::from_i64(8)],
            None,
        )
        .unwrap();
        let mut cfg = config(300);
        cfg.direction = Direction::Literal;
        let tr = simulate(&g, &cfg).unwrap();
        let rep = convergence_report(&tr, &g, &cfg.params());
        assert!(!tr.converged());
        assert!(!rep.certified());
        assert_eq!(rep.to_json()["status"], "unconverged");
    }
}
