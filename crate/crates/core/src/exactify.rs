//! From a `γ`-approximate equilibrium with exact winner ties to an exact
//! equilibrium: read off the support, pose the linear program that keeps the
//! support and minimises the pacing slack `τ`, solve it exactly, and rebuild
//! the allocation from the payments. Also the end-to-end solver.

use serde::Serialize;
use thiserror::Error;

use crate::game::{ApproxParams, EquilibriumCandidate, GameError, SppGame};
use crate::lp::{self, LinearProgram, LpError, LpSolution, Relation};
use crate::rounding::{approx_to_gamma, choose_delta, ApproxToGammaError, RoundOutcome};
use crate::scalar::Scalar;
use crate::sperner::{solve_smooth, Schedule, SmoothSolution};
use crate::verify::{verify_approx, verify_exact, verify_reserve, VerifyReport};

/// Support of a `γ`-approximate equilibrium `(α', x')`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SupportInfo {
    /// Buyers with `α'_i ≥ 1 − γ`.
    pub paced_ok: Vec<usize>,
    /// Per good, the buyers with `x'_ij p_j(α') > 0`.
    pub winners: Vec<Vec<usize>>,
    /// Per good, the smallest top bidder.
    pub top: Vec<usize>,
    /// Per good, the smallest bidder other than `top` attaining the best
    /// bid among everyone except `top`.
    pub second: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum ExactifyError<T: Scalar> {
    #[error("support extraction needs at least two buyers")]
    SingleBuyer,
    #[error("candidate does not match the game")]
    Shape,
    #[error("the support LP is {0}")]
    Lp(LpError),
    #[error("optimal slack is {0}, not zero; shrink gamma and retry")]
    PositiveSlack(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("pipeline gave up at gamma = {gamma} (last slack {tau}): {reason}")]
    Exhausted {
        gamma: String,
        tau: String,
        reason: String,
        /// The smallest `γ` whose attempt completed, with its
        /// `γ`-approximate equilibrium.
        approximate: Option<Box<(T, EquilibriumCandidate<T>)>>,
    },
    #[error("final candidate failed verification:\n{0}")]
    Unverified(VerifyReport<T>),
}

pub fn extract_support<T: Scalar>(
    game: &SppGame<T>,
    alpha: &[T],
    x: &[Vec<T>],
    gamma: &T,
) -> Result<SupportInfo, ExactifyError<T>> {
    let (n, m) = (game.n(), game.m());
    if n < 2 {
        return Err(ExactifyError::SingleBuyer);
    }
    if alpha.len() != n || x.len() != n || x.iter().any(|r| r.len() != m) {
        return Err(ExactifyError::Shape);
    }
    let floor = T::one() - gamma.clone();
    let paced_ok = (0..n).filter(|&i| alpha[i] >= floor).collect();
    let prices = game.prices(alpha);
    let mut winners = Vec::with_capacity(m);
    let mut top = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    for j in 0..m {
        winners.push(
            (0..n)
                .filter(|&i| (x[i][j].clone() * prices[j].clone()).is_positive())
                .collect(),
        );
        let bids: Vec<T> = (0..n).map(|i| game.bid(alpha, i, j)).collect();
        let s = argmax_first(&bids, None);
        top.push(s);
        second.push(argmax_first(&bids, Some(s)));
    }
    Ok(SupportInfo {
        paced_ok,
        winners,
        top,
        second,
    })
}

fn argmax_first<T: Scalar>(bids: &[T], skip: Option<usize>) -> usize {
    let mut best: Option<usize> = None;
    for (i, b) in bids.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        if best.map_or(true, |k| *b > bids[k]) {
            best = Some(i);
        }
    }
    best.expect("at least one eligible bidder")
}

/// The support LP with its variable layout: `α_i` is column `i`, `q_ij` is
/// column `n + i·m + j`, and `τ` is the last column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpInstance<T> {
    pub program: LinearProgram<T>,
    pub n: usize,
    pub m: usize,
}

impl<T: Scalar> LpInstance<T> {
    pub fn alpha_var(&self, i: usize) -> usize {
        i
    }

    pub fn q_var(&self, i: usize, j: usize) -> usize {
        self.n + i * self.m + j
    }

    pub fn tau_var(&self) -> usize {
        self.n + self.n * self.m
    }

    /// `(α, q, τ)` packed into one assignment.
    pub fn point(&self, alpha: &[T], q: &[Vec<T>], tau: &T) -> Vec<T> {
        let mut v = alpha.to_vec();
        v.extend(q.iter().flatten().cloned());
        v.push(tau.clone());
        v
    }
}

/// Minimise `τ` over `(α, q, τ)` keeping the support fixed:
/// off-support payments vanish; `top` outbids everyone and `second` outbids
/// everyone but `top`; winners tie the top bid; a good's payments sum to the
/// second bid; budgets hold; buyers in `paced_ok` have `α_i ≥ 1 − τ` and the
/// others spend at least `(1 − τ) B_i`; `α ≤ 1`.
pub fn build_lp<T: Scalar>(game: &SppGame<T>, support: &SupportInfo) -> LpInstance<T> {
    let (n, m) = (game.n(), game.m());
    let mut names: Vec<String> = (0..n).map(|i| format!("alpha_{i}")).collect();
    for i in 0..n {
        for j in 0..m {
            names.push(format!("q_{i}_{j}"));
        }
    }
    names.push("tau".into());
    let mut inst = LpInstance {
        program: LinearProgram::new(names),
        n,
        m,
    };
    let (tau, one, zero) = (inst.tau_var(), T::one(), T::zero());
    inst.program.objective = vec![(tau, one.clone())];
    let bid = |i: usize, j: usize| (inst.alpha_var(i), game.value(i, j).clone());
    let neg = |(v, c): (usize, T)| (v, -c);
    let mut rows: Vec<(String, Vec<(usize, T)>, Relation, T)> = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if !support.winners[j].contains(&i) {
                rows.push((format!("off_{i}_{j}"), vec![(inst.q_var(i, j), one.clone())], Relation::Eq, zero.clone()));
            }
        }
    }
    for j in 0..m {
        let (s, t) = (support.top[j], support.second[j]);
        for k in 0..n {
            let terms = if k == s { vec![] } else { vec![bid(s, j), neg(bid(k, j))] };
            rows.push((format!("top_{j}_{k}"), terms, Relation::Ge, zero.clone()));
        }
        for k in (0..n).filter(|&k| k != s) {
            let terms = if k == t { vec![] } else { vec![bid(t, j), neg(bid(k, j))] };
            rows.push((format!("second_{j}_{k}"), terms, Relation::Ge, zero.clone()));
        }
        for &i in &support.winners[j] {
            let terms = if i == s { vec![] } else { vec![bid(i, j), neg(bid(s, j))] };
            rows.push((format!("a_{j}_{i}"), terms, Relation::Ge, zero.clone()));
        }
        let mut terms: Vec<(usize, T)> = (0..n).map(|k| (inst.q_var(k, j), one.clone())).collect();
        terms.push(neg(bid(t, j)));
        rows.push((format!("b_{j}"), terms, Relation::Eq, zero.clone()));
    }
    for i in 0..n {
        let pay: Vec<(usize, T)> = (0..m).map(|j| (inst.q_var(i, j), one.clone())).collect();
        rows.push((format!("c_{i}"), pay.clone(), Relation::Le, game.budget(i).clone()));
        if support.paced_ok.contains(&i) {
            rows.push((format!("d_{i}"), vec![(inst.alpha_var(i), one.clone()), (tau, one.clone())], Relation::Ge, one.clone()));
        } else {
            let mut terms = pay;
            terms.push((tau, game.budget(i).clone()));
            rows.push((format!("d_{i}"), terms, Relation::Ge, game.budget(i).clone()));
        }
        rows.push((format!("cap_{i}"), vec![(inst.alpha_var(i), one.clone())], Relation::Le, one.clone()));
    }
    for (label, terms, rel, rhs) in rows {
        inst.program.add(label, terms, rel, rhs);
    }
    inst
}

/// Payments `q'_ij = x'_ij p_j(α')` of a candidate.
pub fn payments<T: Scalar>(game: &SppGame<T>, alpha: &[T], x: &[Vec<T>]) -> Vec<Vec<T>> {
    let prices = game.prices(alpha);
    x.iter()
        .map(|row| row.iter().zip(&prices).map(|(a, p)| a.clone() * p.clone()).collect())
        .collect()
}

/// Labels of LP constraints violated by `(α', x' p(α'), γ)`; empty for any
/// genuine `γ`-approximate equilibrium with exact ties.
pub fn check_feasible_point<T: Scalar>(
    game: &SppGame<T>,
    lp: &LpInstance<T>,
    alpha: &[T],
    x: &[Vec<T>],
    gamma: &T,
) -> Vec<String> {
    let point = lp.point(alpha, &payments(game, alpha, x), gamma);
    lp.program.violated(&point)
}

pub fn solve_lp_exact<T: Scalar>(lp: &LpInstance<T>) -> Result<LpSolution<T>, ExactifyError<T>> {
    lp::solve(&lp.program).map_err(ExactifyError::Lp)
}

/// `x_ij = q_ij / p_j(α)` on goods with a positive price; a free good goes
/// entirely to its top bidder.
pub fn extract_exact<T: Scalar>(
    game: &SppGame<T>,
    lp: &LpInstance<T>,
    solution: &LpSolution<T>,
    support: &SupportInfo,
) -> Result<EquilibriumCandidate<T>, ExactifyError<T>> {
    let tau = &solution.values[lp.tau_var()];
    if !tau.is_zero() {
        return Err(ExactifyError::PositiveSlack(tau.canonical()));
    }
    let (n, m) = (game.n(), game.m());
    let alpha: Vec<T> = (0..n).map(|i| solution.values[lp.alpha_var(i)].clone()).collect();
    let prices = game.prices(&alpha);
    let mut x = vec![vec![T::zero(); m]; n];
    for j in 0..m {
        if prices[j].is_positive() {
            for (i, row) in x.iter_mut().enumerate() {
                row[j] = solution.values[lp.q_var(i, j)].clone() / prices[j].clone();
            }
        } else {
            x[support.top[j]][j] = T::one();
        }
    }
    Ok(EquilibriumCandidate::from_parts(alpha, x)?)
}

#[derive(Debug, Clone)]
pub struct PipelineConfig<T> {
    pub initial_gamma: T,
    pub max_halvings: u32,
    /// Tried in order at each `γ` until one refinement run succeeds.
    pub schedules: Vec<Schedule>,
}

impl<T: Scalar> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            initial_gamma: T::from_frac(1, 16),
            max_halvings: 12,
            schedules: Schedule::ladder(),
        }
    }
}

/// Every intermediate object of one `γ` attempt.
#[derive(Debug, Clone)]
pub struct Attempt<T> {
    pub gamma: T,
    pub delta: T,
    pub smooth: SmoothSolution<T>,
    pub rounded: EquilibriumCandidate<T>,
    pub round: RoundOutcome<T>,
    pub support: SupportInfo,
    pub lp: LpInstance<T>,
    pub solution: LpSolution<T>,
}

impl<T: Scalar> Attempt<T> {
    pub fn tau(&self) -> &T {
        &self.solution.values[self.lp.tau_var()]
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput<T> {
    pub candidate: EquilibriumCandidate<T>,
    /// Empty when the game was solved directly (one buyer).
    pub attempts: Vec<Attempt<T>>,
    /// Set when reserves were handled through the auxiliary buyer.
    pub transformed: Option<SppGame<T>>,
}

/// Runs one `γ` attempt: smooth `(δ, γ/2)` equilibrium, rounding, support LP.
pub fn attempt<T: Scalar>(
    game: &SppGame<T>,
    gamma: &T,
    schedules: &[Schedule],
) -> Result<Attempt<T>, ExactifyError<T>> {
    let delta = choose_delta(game, gamma);
    let half = gamma.clone() / T::from_i64(2);
    let params = ApproxParams {
        delta: delta.clone(),
        gamma: half,
    };
    let exhausted = |reason: String| ExactifyError::Exhausted {
        gamma: gamma.canonical(),
        tau: "none".into(),
        reason,
        approximate: None,
    };
    let mut last = None;
    let mut smooth = None;
    for schedule in schedules {
        match solve_smooth(game, &params, schedule) {
            Ok(s) => {
                smooth = Some(s);
                break;
            }
            Err(e) => last = Some(e),
        }
    }
    let smooth = match (smooth, last) {
        (Some(s), _) => s,
        (None, Some(e)) => return Err(exhausted(e.to_string())),
        (None, None) => return Err(exhausted("no refinement schedule given".into())),
    };
    let start = EquilibriumCandidate::from_parts(smooth.alpha.clone(), smooth.allocation.clone())?;
    let (rounded, round) = approx_to_gamma(game, &start, &delta, gamma)
        .map_err(|e: ApproxToGammaError<T>| exhausted(e.to_string()))?;
    let support = extract_support(game, rounded.alpha(), rounded.x(), gamma)?;
    let lp = build_lp(game, &support);
    let solution = solve_lp_exact(&lp)?;
    Ok(Attempt {
        gamma: gamma.clone(),
        delta,
        smooth,
        rounded,
        round,
        support,
        lp,
        solution,
    })
}

/// Halves `γ` until the support LP reaches zero slack, then returns the
/// exact equilibrium it encodes, re-verified. Reserve prices are handled by
/// the auxiliary-buyer transform and checked against the reserve conditions.
pub fn solve_exact_pipeline<T: Scalar>(
    game: &SppGame<T>,
    config: &PipelineConfig<T>,
) -> Result<PipelineOutput<T>, ExactifyError<T>> {
    if game.has_reserves() {
        let transformed = game.reserve_transform()?;
        let inner = solve_exact_pipeline(&transformed, config)?;
        let candidate = inner.candidate.strip_auxiliary()?;
        let report = verify_reserve(game, &candidate).map_err(|_| ExactifyError::Shape)?;
        if !report.passed() {
            return Err(ExactifyError::Unverified(report));
        }
        return Ok(PipelineOutput {
            candidate,
            attempts: inner.attempts,
            transformed: Some(transformed),
        });
    }
    if game.n() == 1 {
        let candidate = EquilibriumCandidate::from_parts(vec![T::one()], vec![vec![T::one(); game.m()]])?;
        return finish(game, candidate, Vec::new());
    }
    let mut gamma = config.initial_gamma.clone();
    let mut attempts = Vec::new();
    for _ in 0..=config.max_halvings {
        let a = match attempt(game, &gamma, &config.schedules) {
            Ok(a) => a,
            Err(ExactifyError::Exhausted { gamma, reason, .. }) => {
                return Err(exhausted_from(&attempts, gamma, reason));
            }
            Err(e) => return Err(e),
        };
        if a.tau().is_zero() {
            let candidate = extract_exact(game, &a.lp, &a.solution, &a.support)?;
            attempts.push(a);
            return finish(game, candidate, attempts);
        }
        attempts.push(a);
        gamma = gamma / T::from_i64(2);
    }
    Err(exhausted_from(&attempts, gamma.canonical(), "slack stayed positive".into()))
}

fn exhausted_from<T: Scalar>(attempts: &[Attempt<T>], gamma: String, reason: String) -> ExactifyError<T> {
    let last = attempts.last();
    ExactifyError::Exhausted {
        gamma,
        tau: last.map_or("none".into(), |a| a.tau().canonical()),
        reason,
        approximate: last.map(|a| Box::new((a.gamma.clone(), a.rounded.clone()))),
    }
}

fn finish<T: Scalar>(
    game: &SppGame<T>,
    candidate: EquilibriumCandidate<T>,
    attempts: Vec<Attempt<T>>,
) -> Result<PipelineOutput<T>, ExactifyError<T>> {
    let report = verify_exact(game, &candidate).map_err(|_| ExactifyError::Shape)?;
    if !report.passed() {
        return Err(ExactifyError::Unverified(report));
    }
    Ok(PipelineOutput {
        candidate,
        attempts,
        transformed: None,
    })
}

/// True when `candidate` is a `(0, γ)`-approximate equilibrium.
pub fn is_gamma_approximate<T: Scalar>(game: &SppGame<T>, candidate: &EquilibriumCandidate<T>, gamma: &T) -> bool {
    let p = ApproxParams {
        delta: T::zero(),
        gamma: gamma.clone(),
    };
    verify_approx(game, candidate, &p).is_ok_and(|r| r.passed())
}
