//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use pacing::exactify::{solve_exact_pipeline, ExactifyError, PipelineConfig, PipelineOutput};
use pacing::gen::{random_game, GenConfig};
use pacing::lp::{LinearProgram, Relation};
use pacing::reduction::{BimatrixGame, BuyerName, GoodName};
use pacing::{Game, Rational as R, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn r(p: i64, q: i64) -> R {
    R::from_frac(p, q)
}

pub fn int(v: i64) -> R {
    R::from_i64(v)
}

/// Random games with `n, m ∈ {1, 2, 3}`, integer values `≤ 8` and integer
/// budgets in `1..=8`; the shape cycles with the seed.
pub fn suite_game(seed: u64) -> Game {
    let cfg = GenConfig {
        n: 1 + (seed % 3) as usize,
        m: 1 + ((seed / 3) % 3) as usize,
        max_value: 8,
        max_budget: 8,
        denominator: 1,
    };
    random_game(seed, &cfg)
}

pub const SUITE_SIZE: u64 = 216;

pub struct Case {
    pub seed: u64,
    pub game: Game,
    pub outcome: Result<PipelineOutput<R>, ExactifyError<R>>,
    pub elapsed: Duration,
}

pub struct Suite {
    pub cases: Vec<Case>,
    pub wall: Duration,
}

/// The pipeline run once over the whole suite, shared across tests.
pub fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let start = Instant::now();
        let cases = (0..SUITE_SIZE)
            .into_par_iter()
            .map(|seed| {
                let game = suite_game(seed);
                let t = Instant::now();
                let outcome = solve_exact_pipeline(&game, &PipelineConfig::default());
                Case {
                    seed,
                    game,
                    outcome,
                    elapsed: t.elapsed(),
                }
            })
            .collect();
        Suite {
            cases,
            wall: start.elapsed(),
        }
    })
}

/// Written straight to stdout so the line shows even when the harness
/// captures a passing test's output.
pub fn report(criterion: u32, title: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {criterion} [{title}]: {verdict} ({detail})");
    let _ = out.flush();
}

// ---------------------------------------------------------------------------
// Linear programming by brute-force vertex enumeration.

struct Row {
    coeffs: Vec<R>,
    relation: Relation,
    rhs: R,
}

fn rows_of(lp: &LinearProgram<R>) -> Vec<Row> {
    let k = lp.vars();
    let mut rows: Vec<Row> = lp
        .constraints
        .iter()
        .map(|c| {
            let mut coeffs = vec![R::zero(); k];
            for (v, a) in &c.terms {
                coeffs[*v] = coeffs[*v].clone() + a.clone();
            }
            Row {
                coeffs,
                relation: c.relation,
                rhs: c.rhs.clone(),
            }
        })
        .collect();
    for v in 0..k {
        let mut coeffs = vec![R::zero(); k];
        coeffs[v] = R::one();
        rows.push(Row {
            coeffs,
            relation: Relation::Ge,
            rhs: R::zero(),
        });
    }
    rows
}

/// Solves the square system, `None` when singular.
fn solve_square(mut a: Vec<Vec<R>>, mut b: Vec<R>) -> Option<Vec<R>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone() / a[col][col].clone();
                for c in col..k {
                    let d = f.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - d;
                }
                let d = f * b[col].clone();
                b[r] = b[r].clone() - d;
            }
        }
    }
    Some((0..k).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Optimal objective of a bounded LP over `x ≥ 0`, or `None` if infeasible.
pub fn vertex_optimum(lp: &LinearProgram<R>) -> Option<R> {
    let rows = rows_of(lp);
    let k = lp.vars();
    let feasible = |x: &[R]| {
        rows.iter().all(|row| {
            let lhs = row.coeffs.iter().zip(x).fold(R::zero(), |acc, (a, v)| acc + a.clone() * v.clone());
            row.relation.holds(&lhs, &row.rhs)
        })
    };
    let mut best: Option<R> = None;
    for pick in combinations(rows.len(), k) {
        let a = pick.iter().map(|&i| rows[i].coeffs.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].rhs.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let obj = lp.objective_value(&x);
                if best.as_ref().map_or(true, |b| obj < *b) {
                    best = Some(obj);
                }
            }
        }
    }
    best
}

/// A random LP with up to six variables, bounded by `Σx ≤ 8`.
pub fn random_lp(seed: u64) -> LinearProgram<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=6);
    let rows = rng.gen_range(1..=5);
    let mut lp = LinearProgram::new((0..k).map(|v| format!("x{v}")).collect());
    lp.objective = (0..k).map(|v| (v, int(rng.gen_range(-3..=3)))).collect();
    for c in 0..rows {
        let terms = (0..k).map(|v| (v, int(rng.gen_range(-3..=3)))).collect();
        let relation = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        lp.add(format!("row{c}"), terms, relation, int(rng.gen_range(-4..=6)));
    }
    lp.add("box", (0..k).map(|v| (v, R::one())).collect(), Relation::Le, int(8));
    lp
}

// ---------------------------------------------------------------------------
// Gadget closed forms, evaluated by name.

pub fn random_bimatrix(n: usize, seed: u64) -> BimatrixGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = || (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=1)).collect()).collect::<Vec<Vec<i64>>>();
    let a = m();
    let b = m();
    BimatrixGame::new(a, b).unwrap()
}

fn pow(base: &R, e: u32) -> R {
    (0..e).fold(R::one(), |acc, _| acc * base.clone())
}

/// `delta` is `None` for the exact gadget.
pub fn expected_value(bm: &BimatrixGame, delta: Option<&R>, buyer: BuyerName, good: GoodName) -> R {
    let n = bm.n();
    let nn = int(n as i64);
    let n4 = pow(&nn, 4);
    let nu = r(1, 16 * n as i64);
    let a = |s: usize, t: usize| int(i64::from(bm.a(s, t)));
    let b = |s: usize, t: usize| int(i64::from(bm.b(s, t)));
    match (buyer, good) {
        (BuyerName::C { p, s }, GoodName::N { p: q, s: u, i }) if p == q => {
            if u == s && i == s {
                R::one()
            } else if u == s {
                if delta.is_some() {
                    int(16)
                } else {
                    int(2)
                }
            } else if i == s {
                R::one()
            } else {
                R::zero()
            }
        }
        (BuyerName::C { p, s }, GoodName::E { p: q, s: u, i }) => {
            if p == q && u == s {
                R::one()
            } else if p == 1 && q == 2 && i == s {
                nu * b(s, u)
            } else if p == 2 && q == 1 && i == s {
                nu * a(u, s)
            } else {
                R::zero()
            }
        }
        (BuyerName::C { p, s }, GoodName::T { p: q, s: u }) if p == q && s == u => int(2) * n4,
        (BuyerName::T, GoodName::T { .. }) => match delta {
            Some(d) => (R::one() - d.clone()) * n4,
            None => n4,
        },
        (BuyerName::T, GoodName::E { p: 1, s, i }) => nu * a(s, i) / int(2),
        (BuyerName::T, GoodName::E { p: 2, s, i }) => nu * b(i, s) / int(2),
        (BuyerName::D { p, s }, GoodName::N { p: q, s: u, i }) if p == q && s == u && i == s => R::one(),
        _ => R::zero(),
    }
}

pub fn expected_budget(bm: &BimatrixGame, approx: bool, buyer: BuyerName) -> R {
    let n = bm.n();
    let nn = int(n as i64);
    let nu = r(1, 16 * n as i64);
    match buyer {
        BuyerName::C { p, s } => {
            let mut total = nn.clone() / int(2) + pow(&nn, 4) + r(1, 4);
            if !approx {
                total = total - nu.clone();
            }
            for t in 0..n {
                let cost = if p == 1 { bm.a(s, t) } else { bm.b(t, s) };
                total = total + nu.clone() * int(i64::from(cost)) / int(2);
            }
            total
        }
        BuyerName::T => pow(&nn, 7),
        BuyerName::D { .. } => nu,
    }
}
