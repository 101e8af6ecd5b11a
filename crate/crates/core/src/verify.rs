//! Certifying checks for exact, approximate, smooth and reserve pacing
//! equilibria, the well-supported Nash condition, and a brute-force grid
//! oracle for tiny instances.
//!
//! Every check reports all violations with both sides of the failed
//! inequality, not just a verdict.

use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::flow::{feasible_flow, BoundedEdge};
use crate::game::{ApproxParams, EquilibriumCandidate, SppGame};
use crate::io::fmt_mat;
use crate::scalar::{positive_part, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// Only (near-)highest bidders win.
    A,
    /// Goods with a positive bid are fully allocated.
    B,
    /// Budgets are respected.
    C,
    /// No (excessive) unnecessary pacing.
    D,
    /// Well-supported condition of the row player.
    Row,
    /// Well-supported condition of the column player.
    Column,
    /// A multiplier bound on a gadget profile.
    Bound,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::D => "d",
            Condition::Row => "row",
            Condition::Column => "column",
            Condition::Bound => "bound",
        };
        f.write_str(s)
    }
}

/// One failed inequality. `relation` spells out what should have held
/// between `lhs` and `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<T> {
    pub condition: Condition,
    pub buyer: Option<usize>,
    pub good: Option<usize>,
    pub lhs: T,
    pub rhs: T,
    pub relation: &'static str,
}

impl<T: Scalar> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.condition)?;
        if let Some(i) = self.buyer {
            write!(f, " buyer {i}")?;
        }
        if let Some(j) = self.good {
            write!(f, " good {j}")?;
        }
        write!(
            f,
            ": {} violated with lhs = {}, rhs = {}",
            self.relation,
            self.lhs.canonical(),
            self.rhs.canonical()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport<T> {
    pub violations: Vec<Violation<T>>,
    /// The allocation that was checked when the verifier derived it itself.
    pub allocation: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> VerifyReport<T> {
    pub fn new(violations: Vec<Violation<T>>) -> Self {
        Self {
            violations,
            allocation: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let violations: Vec<_> = self
            .violations
            .iter()
            .map(|v| {
                serde_json::json!({
                    "condition": v.condition,
                    "buyer": v.buyer,
                    "good": v.good,
                    "relation": v.relation,
                    "lhs": v.lhs.canonical(),
                    "rhs": v.rhs.canonical(),
                })
            })
            .collect();
        let mut doc = serde_json::json!({ "passed": self.passed(), "violations": violations });
        if let Some(x) = &self.allocation {
            doc["allocation"] = serde_json::json!(fmt_mat(x));
        }
        doc
    }
}

impl<T: Scalar> fmt::Display for VerifyReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        writeln!(f, "fail: {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("candidate shape does not match a game with {n} buyers and {m} goods")]
    Shape { n: usize, m: usize },
    #[error("game has reserve prices; use the reserve verifier or transform the game first")]
    ReservesPresent,
    #[error("{what} is not a probability distribution")]
    NotDistribution { what: &'static str },
    #[error("cost matrices must be square and of equal size {n}")]
    MatrixShape { n: usize },
}

fn check_shape<T: Scalar>(
    game: &SppGame<T>,
    candidate: &EquilibriumCandidate<T>,
) -> Result<(), VerifyError> {
    if candidate.matches(game) {
        Ok(())
    } else {
        Err(VerifyError::Shape {
            n: game.n(),
            m: game.m(),
        })
    }
}

fn no_reserves<T: Scalar>(game: &SppGame<T>) -> Result<(), VerifyError> {
    if game.has_reserves() {
        Err(VerifyError::ReservesPresent)
    } else {
        Ok(())
    }
}

fn column_sum<T: Scalar>(x: &[Vec<T>], good: usize) -> T {
    x.iter().fold(T::zero(), |acc, r| acc + r[good].clone())
}

/// Conditions (a)-(d) of an exact pacing equilibrium, all with exact equality.
pub fn verify_exact<T: Scalar>(
    game: &SppGame<T>,
    candidate: &EquilibriumCandidate<T>,
) -> Result<VerifyReport<T>, VerifyError> {
    verify_approx(game, candidate, &ApproxParams::exact())
}

/// The `(δ, γ)`-relaxed conditions. Full allocation (b) stays exact.
pub fn verify_approx<T: Scalar>(
    game: &SppGame<T>,
    candidate: &EquilibriumCandidate<T>,
    params: &ApproxParams<T>,
) -> Result<VerifyReport<T>, VerifyError> {
    check_shape(game, candidate)?;
    no_reserves(game)?;
    let alpha = candidate.alpha();
    let x = candidate.x();
    let keep_bid = T::one() - params.delta.clone();
    let keep_budget = T::one() - params.gamma.clone();
    let mut out = Vec::new();
    for j in 0..game.m() {
        let h = game.highest_bid(alpha, j);
        let floor = keep_bid.clone() * h.clone();
        for (i, row) in x.iter().enumerate() {
            if row[j].is_positive() {
                let bid = game.bid(alpha, i, j);
                if bid < floor {
                    out.push(Violation {
                        condition: Condition::A,
                        buyer: Some(i),
                        good: Some(j),
                        lhs: bid,
                        rhs: floor.clone(),
                        relation: "winner bid >= (1 - delta) * highest bid",
                    });
                }
            }
        }
        let sum = column_sum(x, j);
        if h.is_positive() && !sum.is_one() {
            out.push(Violation {
                condition: Condition::B,
                buyer: None,
                good: Some(j),
                lhs: sum,
                rhs: T::one(),
                relation: "allocated fraction == 1",
            });
        }
    }
    let spends = game.expenditures(alpha, x);
    for (i, spend) in spends.into_iter().enumerate() {
        let budget = game.budget(i).clone();
        if spend > budget {
            out.push(Violation {
                condition: Condition::C,
                buyer: Some(i),
                good: None,
                lhs: spend.clone(),
                rhs: budget.clone(),
                relation: "expenditure <= budget",
            });
        }
        let slack = keep_budget.clone() * budget;
        if spend < slack && alpha[i] < keep_budget {
            out.push(Violation {
                condition: Condition::D,
                buyer: Some(i),
                good: None,
                lhs: alpha[i].clone(),
                rhs: keep_budget.clone(),
                relation: "under-spending buyer has multiplier >= 1 - gamma",
            });
        }
    }
    Ok(VerifyReport::new(out))
}

/// The allocation a profile induces with clipped surpluses over `(1 - δ) h_j`.
/// A good nobody bids on is left unallocated.
pub fn smooth_allocation<T: Scalar>(game: &SppGame<T>, alpha: &[T], delta: &T) -> Vec<Vec<T>> {
    let mut x = vec![vec![T::zero(); game.m()]; game.n()];
    let keep = T::one() - delta.clone();
    for j in 0..game.m() {
        let floor = keep.clone() * game.highest_bid(alpha, j);
        let surplus: Vec<T> = (0..game.n())
            .map(|i| positive_part(game.bid(alpha, i, j) - floor.clone()))
            .collect();
        let total = surplus.iter().fold(T::zero(), |a, s| a + s.clone());
        if total.is_zero() {
            continue;
        }
        for (i, s) in surplus.into_iter().enumerate() {
            x[i][j] = s / total.clone();
        }
    }
    x
}

/// Checks a profile together with its smooth allocation. The report carries
/// the induced allocation.
pub fn verify_smooth<T: Scalar>(
    game: &SppGame<T>,
    alpha: &[T],
    params: &ApproxParams<T>,
) -> Result<VerifyReport<T>, VerifyError> {
    no_reserves(game)?;
    if alpha.len() != game.n() || alpha.iter().any(|a| a.is_negative() || *a > T::one()) {
        return Err(VerifyError::Shape {
            n: game.n(),
            m: game.m(),
        });
    }
    let x = smooth_allocation(game, alpha, &params.delta);
    let candidate = EquilibriumCandidate::from_parts(alpha.to_vec(), x.clone())
        .expect("smooth allocations are valid");
    let mut report = verify_approx(game, &candidate, params)?;
    report.allocation = Some(x);
    Ok(report)
}

/// Equilibrium conditions under reserve prices: winners bid exactly the
/// winning threshold `max(h_j, r_j)` and pay `max(p_j, r_j)`. A game without
/// reserves is treated as having all-zero reserves.
pub fn verify_reserve<T: Scalar>(
    game: &SppGame<T>,
    candidate: &EquilibriumCandidate<T>,
) -> Result<VerifyReport<T>, VerifyError> {
    check_shape(game, candidate)?;
    let alpha = candidate.alpha();
    let x = candidate.x();
    let mut out = Vec::new();
    for j in 0..game.m() {
        let threshold = game.winning_threshold(alpha, j);
        for (i, row) in x.iter().enumerate() {
            if row[j].is_positive() {
                let bid = game.bid(alpha, i, j);
                if bid != threshold {
                    out.push(Violation {
                        condition: Condition::A,
                        buyer: Some(i),
                        good: Some(j),
                        lhs: bid,
                        rhs: threshold.clone(),
                        relation: "winner bid == max(highest bid, reserve)",
                    });
                }
            }
        }
        let sum = column_sum(x, j);
        if game.highest_bid(alpha, j) > game.reserve(j) && !sum.is_one() {
            out.push(Violation {
                condition: Condition::B,
                buyer: None,
                good: Some(j),
                lhs: sum,
                rhs: T::one(),
                relation: "allocated fraction == 1",
            });
        }
    }
    for (i, spend) in game.expenditures(alpha, x).into_iter().enumerate() {
        let budget = game.budget(i).clone();
        if spend > budget {
            out.push(Violation {
                condition: Condition::C,
                buyer: Some(i),
                good: None,
                lhs: spend,
                rhs: budget,
                relation: "expenditure <= budget",
            });
        } else if spend < budget && !alpha[i].is_one() {
            out.push(Violation {
                condition: Condition::D,
                buyer: Some(i),
                good: None,
                lhs: alpha[i].clone(),
                rhs: T::one(),
                relation: "under-spending buyer has multiplier == 1",
            });
        }
    }
    Ok(VerifyReport::new(out))
}

fn check_distribution<T: Scalar>(p: &[T], n: usize, what: &'static str) -> Result<(), VerifyError> {
    let sum = p.iter().fold(T::zero(), |a, v| a + v.clone());
    if p.len() != n || p.iter().any(Signed::is_negative) || !sum.is_one() {
        return Err(VerifyError::NotDistribution { what });
    }
    Ok(())
}


/// ε-well-supported Nash check for a cost-minimising bimatrix game: every
/// strategy played with positive probability costs at most ε more than a best
/// response.
pub fn verify_wsne<T: Scalar>(
    a: &[Vec<T>],
    b: &[Vec<T>],
    x: &[T],
    y: &[T],
    epsilon: &T,
) -> Result<VerifyReport<T>, VerifyError> {
    let n = a.len();
    let square = |m: &[Vec<T>]| m.len() == n && m.iter().all(|r| r.len() == n);
    if n == 0 || !square(a) || !square(b) {
        return Err(VerifyError::MatrixShape { n });
    }
    check_distribution(x, n, "x")?;
    check_distribution(y, n, "y")?;
    let dot = |row: &mut dyn Iterator<Item = T>, w: &[T]| {
        row.zip(w).fold(T::zero(), |acc, (c, p)| acc + c * p.clone())
    };
    let row_cost: Vec<T> = (0..n)
        .map(|i| dot(&mut a[i].iter().cloned(), y))
        .collect();
    let col_cost: Vec<T> = (0..n)
        .map(|j| dot(&mut (0..n).map(|i| b[i][j].clone()), x))
        .collect();
    let mut out = Vec::new();
    for (cond, cost, play) in [(Condition::Row, &row_cost, x), (Condition::Column, &col_cost, y)] {
        let best = cost.iter().min().expect("n >= 1").clone() + epsilon.clone();
        for (s, c) in cost.iter().enumerate() {
            if play[s].is_positive() && *c > best {
                out.push(Violation {
                    condition: cond,
                    buyer: Some(s),
                    good: None,
                    lhs: c.clone(),
                    rhs: best.clone(),
                    relation: "cost of played strategy <= best cost + epsilon",
                });
            }
        }
    }
    Ok(VerifyReport::new(out))
}

/// Scans `α ∈ {0, 1/K, ..., 1}^n` in lexicographic order and returns the
/// first profile for which [`complete_allocation`] succeeds (goods push their
/// price to eligible buyers, buyers absorb between their slack floor and
/// their budget). Runs on the current rayon
/// pool; the result does not depend on the pool size.
pub fn oracle_grid_search<T: Scalar>(
    game: &SppGame<T>,
    resolution: u32,
    params: &ApproxParams<T>,
) -> Result<Option<EquilibriumCandidate<T>>, VerifyError> {
    no_reserves(game)?;
    let n = game.n();
    let side = u64::from(resolution) + 1;
    let total = side
        .checked_pow(n as u32)
        .expect("grid too large for an exhaustive oracle");
    let k = T::from_i64(i64::from(resolution));
    let found = (0..total).into_par_iter().find_map_first(|mut idx| {
        let mut alpha = vec![T::zero(); n];
        for a in alpha.iter_mut().rev() {
            *a = T::from_i64((idx % side) as i64) / k.clone();
            idx /= side;
        }
        complete_allocation(game, &alpha, params)
    });
    Ok(found)
}

/// Looks for an allocation that turns `alpha` into a `(δ, γ)`-approximate
/// equilibrium (exact when both are zero). Near-top bidders share each good;
/// the split is an exact bounded flow.
pub fn complete_allocation<T: Scalar>(
    game: &SppGame<T>,
    alpha: &[T],
    params: &ApproxParams<T>,
) -> Option<EquilibriumCandidate<T>> {
    let (n, m) = (game.n(), game.m());
    let keep_bid = T::one() - params.delta.clone();
    let keep_budget = T::one() - params.gamma.clone();
    let floors: Vec<T> = (0..n)
        .map(|i| {
            if alpha[i] < keep_budget {
                keep_budget.clone() * game.budget(i).clone()
            } else {
                T::zero()
            }
        })
        .collect();
    let mut x = vec![vec![T::zero(); m]; n];
    let mut eligible: Vec<Vec<usize>> = Vec::with_capacity(m);
    let prices = game.prices(alpha);
    for j in 0..m {
        let h = game.highest_bid(alpha, j);
        let floor = keep_bid.clone() * h.clone();
        let c: Vec<usize> = if h.is_positive() {
            (0..n).filter(|&i| game.bid(alpha, i, j) >= floor).collect()
        } else {
            Vec::new()
        };
        if !c.is_empty() && prices[j].is_zero() {
            x[c[0]][j] = T::one();
        }
        eligible.push(c);
    }
    // Cheap necessary condition before building the flow.
    for i in 0..n {
        if floors[i].is_positive() {
            let reach = (0..m)
                .filter(|&j| eligible[j].contains(&i))
                .fold(T::zero(), |acc, j| acc + prices[j].clone());
            if reach < floors[i] {
                return None;
            }
        }
    }
    let paid: Vec<usize> = (0..m)
        .filter(|&j| !eligible[j].is_empty() && prices[j].is_positive())
        .collect();
    let (s, t) = (0, 1);
    let good_node = |j: usize| 2 + j;
    let buyer_node = |i: usize| 2 + m + i;
    let mut edges = Vec::new();
    for &j in &paid {
        edges.push(BoundedEdge {
            u: s,
            v: good_node(j),
            lower: prices[j].clone(),
            upper: prices[j].clone(),
        });
    }
    let mut links = Vec::new();
    for &j in &paid {
        for &i in &eligible[j] {
            links.push((edges.len(), i, j));
            edges.push(BoundedEdge {
                u: good_node(j),
                v: buyer_node(i),
                lower: T::zero(),
                upper: prices[j].clone(),
            });
        }
    }
    for i in 0..n {
        edges.push(BoundedEdge {
            u: buyer_node(i),
            v: t,
            lower: floors[i].clone(),
            upper: game.budget(i).clone(),
        });
    }
    let flow = feasible_flow(2 + m + n, s, t, &edges)?;
    for (e, i, j) in links {
        x[i][j] = flow[e].clone() / prices[j].clone();
    }
    let candidate = EquilibriumCandidate::from_parts(alpha.to_vec(), x).ok()?;
    let report = verify_approx(game, &candidate, params).ok()?;
    report.passed().then_some(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational as R;

    fn r(p: i64, q: i64) -> R {
        R::from_frac(p, q)
    }

    fn column(v: &[i64], b: &[R]) -> SppGame<R> {
        SppGame::new(v.iter().map(|&x| vec![R::from_i64(x)]).collect(), b.to_vec(), None).unwrap()
    }

    fn cand(alpha: &[R], x: &[R]) -> EquilibriumCandidate<R> {
        EquilibriumCandidate::from_parts(alpha.to_vec(), x.iter().map(|v| vec![v.clone()]).collect()).unwrap()
    }

    fn params(d: R, g: R) -> ApproxParams<R> {
        ApproxParams::new(d, g).unwrap()
    }

    #[test]
    fn exact_examples() {
        let solo = column(&[1], &[r(1, 1)]);
        assert!(verify_exact(&solo, &cand(&[r(1, 1)], &[r(1, 1)])).unwrap().passed());

        let g = column(&[2, 1], &[r(1, 2), r(10, 1)]);
        let eq = cand(&[r(1, 2), r(1, 1)], &[r(1, 2), r(1, 2)]);
        assert!(verify_exact(&g, &eq).unwrap().passed());

        let bad = cand(&[r(1, 2), r(1, 1)], &[r(1, 1), r(0, 1)]);
        let rep = verify_exact(&g, &bad).unwrap();
        let c = rep.violations.iter().find(|v| v.condition == Condition::C).unwrap();
        assert_eq!(c.buyer, Some(0));
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (r(1, 1), r(1, 2)));
    }

    #[test]
    fn approx_examples() {
        let delta = r(1, 10);
        let g = column(&[1, 1], &[r(10, 1), r(10, 1)]);
        let both = cand(&[r(1, 1), r(1, 1) - delta.clone() / r(2, 1)], &[r(1, 2), r(1, 2)]);
        assert!(!verify_approx(&g, &both, &params(delta.clone(), r(0, 1))).unwrap().has(Condition::A));
        assert!(verify_approx(&g, &both, &params(delta / r(4, 1), r(0, 1))).unwrap().has(Condition::A));

        let gamma = r(1, 4);
        let idle = cand(&[r(3, 4), r(1, 1)], &[r(0, 1), r(1, 1)]);
        assert!(!verify_approx(&g, &idle, &params(r(0, 1), gamma)).unwrap().has(Condition::D));
    }

    #[test]
    fn smooth_examples() {
        let g = column(&[1, 1], &[r(10, 1), r(10, 1)]);
        let d = r(1, 10);
        assert_eq!(smooth_allocation(&g, &[r(1, 1), r(1, 1)], &d), vec![vec![r(1, 2)], vec![r(1, 2)]]);
        assert_eq!(smooth_allocation(&g, &[r(1, 1), r(9, 10)], &d), vec![vec![r(1, 1)], vec![r(0, 1)]]);
        assert_eq!(smooth_allocation(&g, &[r(1, 1), r(19, 20)], &d), vec![vec![r(2, 3)], vec![r(1, 3)]]);
        assert_eq!(smooth_allocation(&g, &[r(0, 1), r(0, 1)], &d), vec![vec![r(0, 1)], vec![r(0, 1)]]);

        let solo = column(&[1], &[r(1, 1)]);
        assert!(verify_smooth(&solo, &[r(1, 1)], &params(d.clone(), d.clone())).unwrap().passed());
        let tie = column(&[1, 1], &[r(1, 2), r(1, 2)]);
        let rep = verify_smooth(&tie, &[r(1, 1), r(1, 1)], &params(d.clone(), d)).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.allocation.unwrap(), vec![vec![r(1, 2)], vec![r(1, 2)]]);
    }

    #[test]
    fn reserve_examples() {
        let g = SppGame::new(vec![vec![r(4, 1)]], vec![r(1, 1)], Some(vec![r(2, 1)])).unwrap();
        assert!(verify_reserve(&g, &cand(&[r(1, 2)], &[r(1, 2)])).unwrap().passed());
        let over = verify_reserve(&g, &cand(&[r(1, 1)], &[r(1, 1)])).unwrap();
        let c = &over.violations[0];
        assert_eq!((c.condition, c.lhs.clone(), c.rhs.clone()), (Condition::C, r(2, 1), r(1, 1)));
        let idle = verify_reserve(&g, &cand(&[r(1, 4)], &[r(0, 1)])).unwrap();
        assert!(idle.has(Condition::D));
        assert_eq!(verify_exact(&g, &cand(&[r(1, 2)], &[r(1, 2)])), Err(VerifyError::ReservesPresent));
    }

    #[test]
    fn wsne_examples() {
        let a = vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]];
        let b = vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]];
        let half = [r(1, 2), r(1, 2)];
        assert!(verify_wsne(&a, &b, &half, &half, &r(0, 1)).unwrap().passed());
        let pure = [r(1, 1), r(0, 1)];
        let rep = verify_wsne(&a, &b, &pure, &pure, &r(0, 1)).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].condition, Condition::Column);
        assert_eq!((rep.violations[0].lhs.clone(), rep.violations[0].rhs.clone()), (r(1, 1), r(0, 1)));
        assert!(verify_wsne(&a, &b, &pure, &pure, &r(1, 1)).unwrap().passed());
        assert!(verify_wsne(&a, &b, &[r(1, 1), r(1, 1)], &pure, &r(0, 1)).is_err());
    }

    #[test]
    fn oracle_examples() {
        let exact = ApproxParams::exact();
        let solo = column(&[1], &[r(1, 1)]);
        let c = oracle_grid_search(&solo, 4, &exact).unwrap().unwrap();
        assert_eq!(c.alpha(), &[r(1, 1)]);

        let g = column(&[2, 1], &[r(1, 2), r(10, 1)]);
        let c = oracle_grid_search(&g, 64, &exact).unwrap().unwrap();
        assert_eq!(c.alpha(), &[r(1, 2), r(1, 1)]);
        assert_eq!(c.x(), &[vec![r(1, 2)], vec![r(1, 2)]]);
        assert!(verify_exact(&g, &c).unwrap().passed());

        let rich = column(&[2, 1], &[r(10, 1), r(10, 1)]);
        let c = oracle_grid_search(&rich, 4, &exact).unwrap().unwrap();
        assert_eq!(c.alpha(), &[r(1, 1), r(1, 1)]);
        assert_eq!(c.x(), &[vec![r(1, 1)], vec![r(0, 1)]]);
    }

    #[test]
    fn report_json_lists_witnesses() {
        let g = column(&[2, 1], &[r(1, 2), r(10, 1)]);
        let rep = verify_exact(&g, &cand(&[r(1, 2), r(1, 1)], &[r(1, 1), r(0, 1)])).unwrap();
        let doc = rep.to_json();
        assert_eq!(doc["passed"], false);
        assert_eq!(doc["violations"][0]["condition"], "c");
        assert_eq!(doc["violations"][0]["lhs"], "1/1");
    }
}
