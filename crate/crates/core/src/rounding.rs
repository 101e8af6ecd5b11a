//! Rounding a `(δ, γ/2)`-approximate equilibrium into a `γ`-approximate one
//! in which every winner's bid ties the highest bid exactly.
//!
//! Buyers are merged into components along goods where a winner trails the
//! top bid; each merge rescales the trailing component up to the tie, and a
//! final uniform shrink by `(1 − δ)^{2^n}` restores the budgets.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::game::{ApproxParams, EquilibriumCandidate, SppGame};
use crate::io::fmt_vec;
use crate::scalar::{pow_two_power, Scalar};
use crate::verify::{verify_approx, VerifyReport};

/// Lower bound on how far above one any product of at most `2n` value
/// ratios can be: every such `z > 1` has `z ≥ 1 + 2^{−max_denominator_bits}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioBound {
    pub max_denominator_bits: u64,
}

impl RatioBound {
    /// A ratio of two products of at most `2n` values each has a denominator
    /// of at most `2n · max(bits(p) + bits(q))` bits.
    pub fn for_game<T: Scalar>(game: &SppGame<T>) -> Self {
        Self {
            max_denominator_bits: 2 * game.n() as u64 * game.max_value_bits(),
        }
    }

    /// `1 + 2^{−bits}`, the smallest ratio product above one that can occur.
    pub fn smallest_gap<T: Scalar>(&self) -> T {
        T::one() + T::one() / two_pow::<T>(self.max_denominator_bits)
    }
}

fn two_pow<T: Scalar>(e: u64) -> T {
    crate::scalar::pow(&T::from_i64(2), e)
}

fn ceil_log2_inverse<T: Scalar>(x: &T) -> u64 {
    let mut e = 0;
    let mut p = T::one();
    while p.clone() * x.clone() < T::one() {
        p = p * T::from_i64(2);
        e += 1;
    }
    e
}

/// Smallest `δ = 2^{−N}` (starting from a sufficient closed form) for which
/// `(1 − δ)^{2^n} > 1 − γ/2` and `(1 − δ)^{2^n} z > 1` for every ratio
/// product `z > 1`. Both predicates are checked exactly.
pub fn choose_delta<T: Scalar>(game: &SppGame<T>, gamma: &T) -> T {
    let n = game.n() as u64;
    let bound = RatioBound::for_game(game);
    let half_gamma = gamma.clone() / T::from_i64(2);
    let b = bound.max_denominator_bits;
    let mut big_n = (n + b + 1).max(n + 1 + ceil_log2_inverse(&half_gamma));
    let gap = bound.smallest_gap::<T>();
    loop {
        let delta = T::one() / two_pow::<T>(big_n);
        let shrink = pow_two_power(&(T::one() - delta.clone()), game.n() as u32);
        if shrink > T::one() - half_gamma.clone() && shrink * gap.clone() > T::one() {
            return delta;
        }
        big_n += 1;
    }
}

/// Buyers joined by tie edges; each edge remembers the good that created it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGraph {
    parent: Vec<usize>,
    edges: Vec<(usize, usize, usize)>,
}

impl ComponentGraph {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            edges: Vec::new(),
        }
    }

    pub fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Adds `{a, b}` labelled `good`; refuses edges inside one component.
    pub fn join(&mut self, a: usize, b: usize, good: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.edges.push((a, b, good));
        true
    }

    pub fn component(&self, i: usize) -> Vec<usize> {
        let root = self.find(i);
        (0..self.parent.len()).filter(|&a| self.find(a) == root).collect()
    }

    /// `(a, b, good)` in insertion order.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }
}

/// One pass of the merge loop: winner `buyer` trailed `top` on `good` and
/// its component was scaled by `factor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundStep<T> {
    pub good: usize,
    pub buyer: usize,
    pub top: usize,
    pub factor: T,
    pub component: Vec<usize>,
    pub alpha_after: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome<T> {
    pub alpha: Vec<T>,
    pub steps: Vec<RoundStep<T>>,
    pub graph: ComponentGraph,
    /// `(1 − δ)^{2^n}`.
    pub shrink: T,
}

#[derive(Debug, Clone, Serialize)]
struct StepDoc {
    good: usize,
    buyer: usize,
    top: usize,
    factor: String,
    component: Vec<usize>,
    alpha_after: Vec<String>,
}

impl<T: Scalar> RoundOutcome<T> {
    pub fn trace_json(&self) -> serde_json::Value {
        let steps: Vec<StepDoc> = self
            .steps
            .iter()
            .map(|s| StepDoc {
                good: s.good,
                buyer: s.buyer,
                top: s.top,
                factor: s.factor.canonical(),
                component: s.component.clone(),
                alpha_after: fmt_vec(&s.alpha_after),
            })
            .collect();
        serde_json::json!({
            "steps": steps,
            "shrink": self.shrink.canonical(),
            "alpha": fmt_vec(&self.alpha),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundError<T: Scalar> {
    #[error("input is not a (delta, gamma/2)-approximate equilibrium:\n{0}")]
    Precondition(VerifyReport<T>),
    #[error("candidate does not match the game")]
    Shape,
    #[error("buyers {0} and {1} are already in one component")]
    Cycle(usize, usize),
    #[error("invariant broken after iteration {iteration}: {what}")]
    Invariant { iteration: usize, what: InvariantKind },
    #[error("{0} buyers; rounding supports at most {MAX_ROUND_BUYERS}")]
    TooManyBuyers(usize),
}

/// `(1 − δ)^{2^n}` has about `2^n · bits(δ)` bits, so rounding refuses
/// larger games.
pub const MAX_ROUND_BUYERS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    EdgeRatio,
    ComponentSeparation,
    WinnerBand,
    IterationCount,
    Sandwich,
    ExactTies,
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvariantKind::EdgeRatio => "tie edge no longer ties its good",
            InvariantKind::ComponentSeparation => "same-component bids neither equal nor well separated",
            InvariantKind::WinnerBand => "winner fell below the shrinking band",
            InvariantKind::IterationCount => "more than n - 1 merges",
            InvariantKind::Sandwich => "rounded profile leaves the sandwich",
            InvariantKind::ExactTies => "winner does not tie the highest bid",
        };
        f.write_str(s)
    }
}

fn winners<T: Scalar>(x: &[Vec<T>], m: usize) -> Vec<Vec<usize>> {
    (0..m)
        .map(|j| (0..x.len()).filter(|&i| x[i][j].is_positive()).collect())
        .collect()
}

fn check_iteration<T: Scalar>(
    game: &SppGame<T>,
    alpha: &[T],
    graph: &ComponentGraph,
    won: &[Vec<usize>],
    shrink: &T,
    one_minus_delta: &T,
    iteration: usize,
) -> Result<(), RoundError<T>> {
    let fail = |what| Err(RoundError::Invariant { iteration, what });
    for &(a, b, j) in graph.edges() {
        if game.bid(alpha, a, j) != game.bid(alpha, b, j) {
            return fail(InvariantKind::EdgeRatio);
        }
    }
    let n = game.n();
    for a in 0..n {
        for b in a + 1..n {
            if !graph.same(a, b) {
                continue;
            }
            for j in 0..game.m() {
                let (x, y) = (game.bid(alpha, a, j), game.bid(alpha, b, j));
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                if lo != hi && lo >= shrink.clone() * hi {
                    return fail(InvariantKind::ComponentSeparation);
                }
            }
        }
    }
    let band = pow_two_power(one_minus_delta, iteration as u32);
    for (j, w) in won.iter().enumerate() {
        let floor = band.clone() * game.highest_bid(alpha, j);
        if w.iter().any(|&i| game.bid(alpha, i, j) < floor) {
            return fail(InvariantKind::WinnerBand);
        }
    }
    if iteration + 1 > n {
        return fail(InvariantKind::IterationCount);
    }
    Ok(())
}

/// Runs the merge loop on `(α*, x*)` and returns `α' = (1 − δ)^{2^n} α`.
/// Winner sets come from `x*` and never change. Every documented invariant
/// is re-checked after each iteration and on the output.
pub fn round<T: Scalar>(
    game: &SppGame<T>,
    alpha_star: &[T],
    x_star: &[Vec<T>],
    delta: &T,
) -> Result<RoundOutcome<T>, RoundError<T>> {
    let (n, m) = (game.n(), game.m());
    if n > MAX_ROUND_BUYERS {
        return Err(RoundError::TooManyBuyers(n));
    }
    let candidate = EquilibriumCandidate::from_parts(alpha_star.to_vec(), x_star.to_vec())
        .map_err(|_| RoundError::Shape)?;
    if !candidate.matches(game) {
        return Err(RoundError::Shape);
    }
    let won = winners(x_star, m);
    let one_minus_delta = T::one() - delta.clone();
    let wide = ApproxParams {
        delta: delta.clone(),
        gamma: T::zero(),
    };
    let pre = verify_approx(game, &candidate, &wide).map_err(|_| RoundError::Shape)?;
    if pre.has(crate::verify::Condition::A) {
        return Err(RoundError::Precondition(pre));
    }
    let shrink = pow_two_power(&one_minus_delta, n as u32);
    let mut alpha = alpha_star.to_vec();
    let mut graph = ComponentGraph::new(n);
    let mut steps = Vec::new();
    check_iteration(game, &alpha, &graph, &won, &shrink, &one_minus_delta, 0)?;
    loop {
        let pick = (0..m).find_map(|j| {
            let h = game.highest_bid(&alpha, j);
            let i = *won[j].iter().find(|&&i| game.bid(&alpha, i, j) < h)?;
            let k = (0..n).find(|&k| game.bid(&alpha, k, j) == h).expect("max is attained");
            Some((j, i, k, h))
        });
        let Some((j, i, k, h)) = pick else { break };
        if graph.same(i, k) {
            return Err(RoundError::Cycle(i, k));
        }
        let factor = h / game.bid(&alpha, i, j);
        let component = graph.component(i);
        for &a in &component {
            alpha[a] = alpha[a].clone() * factor.clone();
        }
        graph.join(i, k, j);
        steps.push(RoundStep {
            good: j,
            buyer: i,
            top: k,
            factor,
            component,
            alpha_after: alpha.clone(),
        });
        check_iteration(game, &alpha, &graph, &won, &shrink, &one_minus_delta, steps.len())?;
    }
    let alpha: Vec<T> = alpha.into_iter().map(|a| a * shrink.clone()).collect();
    let iteration = steps.len();
    let fail = |what| Err(RoundError::Invariant { iteration, what });
    for (a, s) in alpha.iter().zip(alpha_star) {
        if *a > *s || *a < shrink.clone() * s.clone() {
            return fail(InvariantKind::Sandwich);
        }
    }
    for (j, w) in won.iter().enumerate() {
        let h = game.highest_bid(&alpha, j);
        if w.iter().any(|&i| game.bid(&alpha, i, j) != h) {
            return fail(InvariantKind::ExactTies);
        }
    }
    Ok(RoundOutcome {
        alpha,
        steps,
        graph,
        shrink,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxToGammaError<T: Scalar> {
    #[error(transparent)]
    Round(#[from] RoundError<T>),
    #[error("input is not a (delta, gamma/2)-approximate equilibrium:\n{0}")]
    Precondition(VerifyReport<T>),
    #[error("rounded candidate fails the gamma-approximate check:\n{0}")]
    Output(VerifyReport<T>),
}

/// Rounds a `(δ, γ/2)`-approximate equilibrium into `(α', x*)`, which is a
/// `(0, γ)`-approximate equilibrium.
pub fn approx_to_gamma<T: Scalar>(
    game: &SppGame<T>,
    candidate: &EquilibriumCandidate<T>,
    delta: &T,
    gamma: &T,
) -> Result<(EquilibriumCandidate<T>, RoundOutcome<T>), ApproxToGammaError<T>> {
    let pre_params = ApproxParams {
        delta: delta.clone(),
        gamma: gamma.clone() / T::from_i64(2),
    };
    let pre = verify_approx(game, candidate, &pre_params).map_err(|_| RoundError::Shape)?;
    if !pre.passed() {
        return Err(ApproxToGammaError::Precondition(pre));
    }
    let outcome = round(game, candidate.alpha(), candidate.x(), delta)?;
    let rounded = EquilibriumCandidate::from_parts(outcome.alpha.clone(), candidate.x().to_vec())
        .map_err(|_| RoundError::Shape)?;
    let post_params = ApproxParams {
        delta: T::zero(),
        gamma: gamma.clone(),
    };
    let post = verify_approx(game, &rounded, &post_params).map_err(|_| RoundError::Shape)?;
    if !post.passed() {
        return Err(ApproxToGammaError::Output(post));
    }
    Ok((rounded, outcome))
}
