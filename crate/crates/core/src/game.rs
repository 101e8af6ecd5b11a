//! Second-price pacing games: the instance model, bids, prices and payments,
//! and the auxiliary-buyer transform for reserve prices.

use std::ops::Deref;

use num_traits::Signed;
use thiserror::Error;

use crate::scalar::{is_unit_interval, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("game needs at least one buyer and one good (got n={n}, m={m})")]
    Empty { n: usize, m: usize },
    #[error("values row {row} has {got} entries, expected {expected}")]
    RaggedValues {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("{what} has length {got}, expected {expected}")]
    Length {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("value v[{buyer}][{good}] = {value} is negative")]
    NegativeValue {
        buyer: usize,
        good: usize,
        value: String,
    },
    #[error("budget of buyer {buyer} is {value}, must be positive")]
    NonPositiveBudget { buyer: usize, value: String },
    #[error("reserve of good {good} is {value}, must be nonnegative")]
    NegativeReserve { good: usize, value: String },
    #[error("good {good} has no buyer with a positive value")]
    UnvaluedGood { good: usize },
    #[error("buyer {buyer} has no good with a positive value")]
    UninterestedBuyer { buyer: usize },
    #[error("game has no reserve prices to transform")]
    NoReserves,
    #[error("pacing multiplier {index} = {value} is outside [0, 1]")]
    MultiplierRange { index: usize, value: String },
    #[error("allocation x[{buyer}][{good}] = {value} is outside [0, 1]")]
    AllocationRange {
        buyer: usize,
        good: usize,
        value: String,
    },
    #[error("good {good} is over-allocated: column sum {sum} > 1")]
    OverAllocated { good: usize, sum: String },
    #[error("allocation is {rows}x{cols}, profile has {n} buyers")]
    CandidateShape { rows: usize, cols: usize, n: usize },
    #[error("auxiliary buyer has multiplier {value}, expected 1; candidate is not an equilibrium of the transformed game")]
    AuxiliaryPaced { value: String },
}

/// A second-price pacing game: `n` budget-constrained buyers, `m` goods,
/// each good sold in its own single-slot second-price auction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SppGame<T> {
    values: Vec<Vec<T>>,
    budgets: Vec<T>,
    reserves: Option<Vec<T>>,
}

impl<T: Scalar> SppGame<T> {
    pub fn new(
        values: Vec<Vec<T>>,
        budgets: Vec<T>,
        reserves: Option<Vec<T>>,
    ) -> Result<Self, GameError> {
        let n = values.len();
        let m = values.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(GameError::Empty { n, m });
        }
        for (row, r) in values.iter().enumerate() {
            if r.len() != m {
                return Err(GameError::RaggedValues {
                    row,
                    got: r.len(),
                    expected: m,
                });
            }
            for (good, v) in r.iter().enumerate() {
                if v.is_negative() {
                    return Err(GameError::NegativeValue {
                        buyer: row,
                        good,
                        value: v.canonical(),
                    });
                }
            }
        }
        if budgets.len() != n {
            return Err(GameError::Length {
                what: "budgets",
                got: budgets.len(),
                expected: n,
            });
        }
        if let Some((buyer, b)) = budgets.iter().enumerate().find(|(_, b)| !b.is_positive()) {
            return Err(GameError::NonPositiveBudget {
                buyer,
                value: b.canonical(),
            });
        }
        if let Some(r) = &reserves {
            if r.len() != m {
                return Err(GameError::Length {
                    what: "reserves",
                    got: r.len(),
                    expected: m,
                });
            }
            if let Some((good, v)) = r.iter().enumerate().find(|(_, v)| v.is_negative()) {
                return Err(GameError::NegativeReserve {
                    good,
                    value: v.canonical(),
                });
            }
        }
        for good in 0..m {
            if !values.iter().any(|row| row[good].is_positive()) {
                return Err(GameError::UnvaluedGood { good });
            }
        }
        for (buyer, row) in values.iter().enumerate() {
            if !row.iter().any(Signed::is_positive) {
                return Err(GameError::UninterestedBuyer { buyer });
            }
        }
        Ok(Self {
            values,
            budgets,
            reserves,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn m(&self) -> usize {
        self.values[0].len()
    }

    pub fn value(&self, buyer: usize, good: usize) -> &T {
        &self.values[buyer][good]
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    pub fn budget(&self, buyer: usize) -> &T {
        &self.budgets[buyer]
    }

    pub fn budgets(&self) -> &[T] {
        &self.budgets
    }

    pub fn reserves(&self) -> Option<&[T]> {
        self.reserves.as_deref()
    }

    pub fn has_reserves(&self) -> bool {
        self.reserves.is_some()
    }

    /// `r_j`, zero when the game carries no reserves.
    pub fn reserve(&self, good: usize) -> T {
        self.reserves
            .as_ref()
            .map_or_else(T::zero, |r| r[good].clone())
    }

    pub fn bid(&self, alpha: &[T], buyer: usize, good: usize) -> T {
        alpha[buyer].clone() * self.values[buyer][good].clone()
    }

    /// `h_j(α) = max_i α_i v_ij`.
    pub fn highest_bid(&self, alpha: &[T], good: usize) -> T {
        (0..self.n())
            .map(|i| self.bid(alpha, i, good))
            .fold(T::zero(), |m, b| if b > m { b } else { m })
    }

    /// `p_j(α)`: the second largest bid counted with multiplicity, so a tied
    /// top bid prices at `h_j`. A lone bidder faces price zero.
    pub fn second_price(&self, alpha: &[T], good: usize) -> T {
        let mut top = T::zero();
        let mut second = T::zero();
        for i in 0..self.n() {
            let b = self.bid(alpha, i, good);
            if b > top {
                second = std::mem::replace(&mut top, b);
            } else if b > second {
                second = b;
            }
        }
        second
    }

    /// `H_j(α) = max{h_j(α), r_j}`.
    pub fn winning_threshold(&self, alpha: &[T], good: usize) -> T {
        std::cmp::max(self.highest_bid(alpha, good), self.reserve(good))
    }

    /// Unit price of good `j`: `p_j(α)` without reserves, `P_j(α) = max{p_j(α), r_j}` with them.
    pub fn price(&self, alpha: &[T], good: usize) -> T {
        let p = self.second_price(alpha, good);
        match &self.reserves {
            Some(r) => std::cmp::max(p, r[good].clone()),
            None => p,
        }
    }

    pub fn prices(&self, alpha: &[T]) -> Vec<T> {
        (0..self.m()).map(|j| self.price(alpha, j)).collect()
    }

    /// `Σ_j x_ij · price_j`.
    pub fn expenditure(&self, alpha: &[T], allocation: &[Vec<T>], buyer: usize) -> T {
        let prices = self.prices(alpha);
        spend_at(&allocation[buyer], &prices)
    }

    pub fn expenditures(&self, alpha: &[T], allocation: &[Vec<T>]) -> Vec<T> {
        let prices = self.prices(alpha);
        allocation.iter().map(|row| spend_at(row, &prices)).collect()
    }

    /// Sum of every value entry.
    pub fn total_value(&self) -> T {
        self.values
            .iter()
            .flatten()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Largest `bits(numer) + bits(denom)` over the positive values.
    pub fn max_value_bits(&self) -> u64 {
        self.values
            .iter()
            .flatten()
            .filter(|v| v.is_positive())
            .map(Scalar::bit_size)
            .max()
            .unwrap_or(0)
    }

    /// Replaces reserves by an auxiliary last buyer who values good `j` at
    /// `r_j` and can afford anything (budget = all values plus all reserves).
    pub fn reserve_transform(&self) -> Result<SppGame<T>, GameError> {
        let reserves = self.reserves.as_ref().ok_or(GameError::NoReserves)?;
        let budget = reserves
            .iter()
            .fold(self.total_value(), |acc, r| acc + r.clone());
        let mut values = self.values.clone();
        values.push(reserves.clone());
        let mut budgets = self.budgets.clone();
        budgets.push(budget);
        SppGame::new(values, budgets, None)
    }

    /// Same values and budgets, reserves dropped.
    pub fn without_reserves(&self) -> SppGame<T> {
        SppGame {
            values: self.values.clone(),
            budgets: self.budgets.clone(),
            reserves: None,
        }
    }
}


pub(crate) fn spend_at<T: Scalar>(row: &[T], prices: &[T]) -> T {
    row.iter()
        .zip(prices)
        .fold(T::zero(), |acc, (x, p)| acc + x.clone() * p.clone())
}

/// Pacing multipliers `α ∈ [0,1]^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PacingProfile<T>(Vec<T>);

impl<T: Scalar> PacingProfile<T> {
    pub fn new(alpha: Vec<T>) -> Result<Self, GameError> {
        if let Some((index, v)) = alpha.iter().enumerate().find(|(_, a)| !is_unit_interval(*a)) {
            return Err(GameError::MultiplierRange {
                index,
                value: v.canonical(),
            });
        }
        Ok(Self(alpha))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![T::one(); n])
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for PacingProfile<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Fractional allocation `x ∈ [0,1]^{n×m}` with every column summing to at most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation<T>(Vec<Vec<T>>);

impl<T: Scalar> Allocation<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self, GameError> {
        let m = rows.first().map_or(0, Vec::len);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(GameError::RaggedValues {
                    row,
                    got: r.len(),
                    expected: m,
                });
            }
            for (good, v) in r.iter().enumerate() {
                if !is_unit_interval(v) {
                    return Err(GameError::AllocationRange {
                        buyer: row,
                        good,
                        value: v.canonical(),
                    });
                }
            }
        }
        for good in 0..m {
            let sum = rows.iter().fold(T::zero(), |acc, r| acc + r[good].clone());
            if sum > T::one() {
                return Err(GameError::OverAllocated {
                    good,
                    sum: sum.canonical(),
                });
            }
        }
        Ok(Self(rows))
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self(vec![vec![T::zero(); m]; n])
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.0
    }

    pub fn get(&self, buyer: usize, good: usize) -> &T {
        &self.0[buyer][good]
    }

    pub fn column_sum(&self, good: usize) -> T {
        self.0.iter().fold(T::zero(), |acc, r| acc + r[good].clone())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn m(&self) -> usize {
        self.0.first().map_or(0, Vec::len)
    }

    pub fn into_inner(self) -> Vec<Vec<T>> {
        self.0
    }
}

impl<T> Deref for Allocation<T> {
    type Target = [Vec<T>];

    fn deref(&self) -> &[Vec<T>] {
        &self.0
    }
}

/// A pacing profile paired with an allocation, to be checked against one of
/// the equilibrium notions in [`crate::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquilibriumCandidate<T> {
    pub profile: PacingProfile<T>,
    pub allocation: Allocation<T>,
}

impl<T: Scalar> EquilibriumCandidate<T> {
    pub fn new(profile: PacingProfile<T>, allocation: Allocation<T>) -> Result<Self, GameError> {
        if allocation.n() != profile.len() {
            return Err(GameError::CandidateShape {
                rows: allocation.n(),
                cols: allocation.m(),
                n: profile.len(),
            });
        }
        Ok(Self {
            profile,
            allocation,
        })
    }

    pub fn from_parts(alpha: Vec<T>, x: Vec<Vec<T>>) -> Result<Self, GameError> {
        Self::new(PacingProfile::new(alpha)?, Allocation::new(x)?)
    }

    pub fn alpha(&self) -> &[T] {
        &self.profile
    }

    pub fn x(&self) -> &[Vec<T>] {
        &self.allocation
    }

    pub fn matches(&self, game: &SppGame<T>) -> bool {
        self.profile.len() == game.n() && self.allocation.n() == game.n() && self.allocation.m() == game.m()
    }

    /// Drops the auxiliary (last) buyer added by [`SppGame::reserve_transform`].
    /// Whatever the auxiliary buyer won is read as unsold.
    pub fn strip_auxiliary(&self) -> Result<EquilibriumCandidate<T>, GameError> {
        let aux = self
            .profile
            .last()
            .ok_or(GameError::CandidateShape { rows: 0, cols: 0, n: 0 })?;
        if !aux.is_one() {
            return Err(GameError::AuxiliaryPaced {
                value: aux.canonical(),
            });
        }
        let n = self.profile.len() - 1;
        let alpha = self.profile[..n].to_vec();
        let x = self.allocation[..n].to_vec();
        EquilibriumCandidate::from_parts(alpha, x)
    }
}


/// `(δ, γ)` for approximate equilibria; both in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApproxParams<T> {
    pub delta: T,
    pub gamma: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{name} = {value} must lie in [0, 1)")]
pub struct ParamRangeError {
    pub name: &'static str,
    pub value: String,
}

impl<T: Scalar> ApproxParams<T> {
    pub fn new(delta: T, gamma: T) -> Result<Self, ParamRangeError> {
        for (name, v) in [("delta", &delta), ("gamma", &gamma)] {
            if v.is_negative() || *v >= T::one() {
                return Err(ParamRangeError {
                    name,
                    value: v.canonical(),
                });
            }
        }
        Ok(Self { delta, gamma })
    }

    pub fn exact() -> Self {
        Self {
            delta: T::zero(),
            gamma: T::zero(),
        }
    }
}
