//! Simplicial search for smooth approximate equilibria.
//!
//! Directions `β` live on the grid `{k ∈ ℕ^n : Σ k = K}` of the standard
//! simplex, triangulated by Kuhn's (Freudenthal's) rule. A grid point is
//! colored by the buyer who stops first when `β` is scaled up until some
//! buyer reaches multiplier one or runs out of budget. That coloring is
//! Sperner, so some subsimplex carries every color, and its vertices are
//! candidate smooth approximate equilibria.
//!
//! Fine grids are searched by zooming: a panchromatic subsimplex at
//! resolution `K` seeds a small window at `2K`, colored with boundary
//! overrides so that the window coloring is Sperner too.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::game::{ApproxParams, SppGame};
use crate::game::spend_at;
use crate::scalar::Scalar;
use crate::verify::{smooth_allocation, verify_smooth, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpernerError {
    #[error("delta must lie in (0, 1), got {0}")]
    DeltaRange(String),
    #[error("game has reserve prices; transform it first")]
    Reserves,
    #[error("grid point {coords:?} does not sum to resolution {resolution} over {n} buyers")]
    BadPoint {
        coords: Vec<u64>,
        resolution: u64,
        n: usize,
    },
    #[error("resolution {resolution} is below the buyer count {n}")]
    Coarse { resolution: u64, n: usize },
    #[error("no panchromatic subsimplex found within the walk budget at resolution {resolution}")]
    WalkBudget { resolution: u64 },
    #[error("refinement budget exhausted; largest resolution tried was {largest}")]
    Exhausted { largest: u64 },
}

/// `k / K` on the simplex grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    coords: Vec<u64>,
    resolution: u64,
}

impl GridPoint {
    pub fn new(coords: Vec<u64>, resolution: u64) -> Result<Self, SpernerError> {
        let sum = coords.iter().try_fold(0u64, |a, &c| a.checked_add(c));
        if coords.is_empty() || resolution == 0 || sum != Some(resolution) {
            return Err(SpernerError::BadPoint {
                n: coords.len(),
                coords,
                resolution,
            });
        }
        Ok(Self { coords, resolution })
    }

    /// The corner `K e_i`.
    pub fn corner(n: usize, i: usize, resolution: u64) -> Self {
        let mut coords = vec![0; n];
        coords[i] = resolution;
        Self { coords, resolution }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn resolution(&self) -> u64 {
        self.resolution
    }

    pub fn beta<T: Scalar>(&self) -> Vec<T> {
        let k = scalar_u64::<T>(self.resolution);
        self.coords
            .iter()
            .map(|&c| scalar_u64::<T>(c) / k.clone())
            .collect()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})/{}", parts.join(","), self.resolution)
    }
}

fn scalar_u64<T: Scalar>(v: u64) -> T {
    match i64::try_from(v) {
        Ok(x) => T::from_i64(x),
        Err(_) => T::from_i64((v >> 1) as i64) * T::from_i64(2) + T::from_i64((v & 1) as i64),
    }
}

/// Kuhn subsimplex: vertex `t` is `base + Σ_{u<t} (e_{path[u]} − e_{path[u]+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subsimplex {
    base: GridPoint,
    path: Vec<usize>,
}

impl Subsimplex {
    /// Fails unless `path` is a permutation of `0..n-1` and every vertex is on the grid.
    pub fn new(base: GridPoint, path: Vec<usize>) -> Option<Self> {
        let d = base.coords.len() - 1;
        let mut seen = vec![false; d];
        if path.len() != d || path.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return None;
        }
        let s = Self { base, path };
        kuhn_vertices(&s.base.coords, &s.path).map(|_| s)
    }

    pub fn base(&self) -> &GridPoint {
        &self.base
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn vertices(&self) -> Vec<GridPoint> {
        kuhn_vertices(&self.base.coords, &self.path)
            .expect("validated on construction")
            .into_iter()
            .map(|coords| GridPoint {
                coords,
                resolution: self.base.resolution,
            })
            .collect()
    }

    /// Largest coordinate gap between two vertices, in grid units.
    pub fn linf_diameter(&self) -> u64 {
        let vs = self.vertices();
        let mut best = 0;
        for a in &vs {
            for b in &vs {
                for (x, y) in a.coords.iter().zip(&b.coords) {
                    best = best.max(x.abs_diff(*y));
                }
            }
        }
        best
    }
}

fn kuhn_vertices(base: &[u64], path: &[usize]) -> Option<Vec<Vec<u64>>> {
    let mut out = Vec::with_capacity(path.len() + 1);
    let mut cur = base.to_vec();
    out.push(cur.clone());
    for &p in path {
        cur[p] += 1;
        cur[p + 1] = cur[p + 1].checked_sub(1)?;
        out.push(cur.clone());
    }
    Some(out)
}

/// A rational or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopResult<T> {
    pub t_each: Vec<Extended<T>>,
    pub t_star: T,
    pub color: usize,
}

fn check_inputs<T: Scalar>(game: &SppGame<T>, delta: &T) -> Result<(), SpernerError> {
    if !delta.is_positive() || *delta >= T::one() {
        return Err(SpernerError::DeltaRange(delta.canonical()));
    }
    if game.has_reserves() {
        return Err(SpernerError::Reserves);
    }
    Ok(())
}

fn check_point<T: Scalar>(game: &SppGame<T>, point: &GridPoint) -> Result<(), SpernerError> {
    if point.coords.len() != game.n() {
        return Err(SpernerError::BadPoint {
            coords: point.coords.clone(),
            resolution: point.resolution,
            n: game.n(),
        });
    }
    Ok(())
}

fn stop_unchecked<T: Scalar>(game: &SppGame<T>, beta: &[T], delta: &T) -> StopResult<T> {
    let x = smooth_allocation(game, beta, delta);
    let prices = game.prices(beta);
    let t_each: Vec<Extended<T>> = (0..game.n())
        .map(|i| {
            let cap = (!beta[i].is_zero()).then(|| T::one() / beta[i].clone());
            let spend = spend_at(&x[i], &prices);
            let budget = (!spend.is_zero()).then(|| game.budget(i).clone() / spend);
            match (cap, budget) {
                (Some(a), Some(b)) => Extended::Finite(std::cmp::min(a, b)),
                (Some(a), None) | (None, Some(a)) => Extended::Finite(a),
                (None, None) => Extended::Infinite,
            }
        })
        .collect();
    let (color, t_star) = t_each
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match t {
            Extended::Finite(v) => Some((i, v)),
            Extended::Infinite => None,
        })
        .fold(None::<(usize, &T)>, |best, (i, v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, v)| (i, v.clone()))
        .expect("some coordinate of a simplex point is positive");
    StopResult {
        t_each,
        t_star,
        color,
    }
}

/// Per-buyer stop times `t_i(β)`, their minimum `t*(β)`, and the smallest
/// minimising buyer.
pub fn stop_time<T: Scalar>(
    game: &SppGame<T>,
    point: &GridPoint,
    delta: &T,
) -> Result<StopResult<T>, SpernerError> {
    check_inputs(game, delta)?;
    check_point(game, point)?;
    Ok(stop_unchecked(game, &point.beta::<T>(), delta))
}

pub fn color<T: Scalar>(game: &SppGame<T>, point: &GridPoint, delta: &T) -> Result<usize, SpernerError> {
    stop_time(game, point, delta).map(|s| s.color)
}

/// `α = t*(β) β` together with the smooth allocation at `β`.
pub fn extract_profile<T: Scalar>(
    game: &SppGame<T>,
    vertex: &GridPoint,
    delta: &T,
) -> Result<(Vec<T>, Vec<Vec<T>>), SpernerError> {
    check_inputs(game, delta)?;
    check_point(game, vertex)?;
    let beta = vertex.beta::<T>();
    let stop = stop_unchecked(game, &beta, delta);
    let alpha = beta.iter().map(|b| b.clone() * stop.t_star.clone()).collect();
    Ok((alpha, smooth_allocation(game, &beta, delta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Scan every subsimplex in lexicographic order.
    Exhaustive,
    /// Search seeded random windows, growing a window toward any face where
    /// the true coloring had to be overridden; restart elsewhere when the
    /// window outgrows `max_points`.
    RestartWalk {
        seed: u64,
        restarts: u32,
        max_points: usize,
    },
}

/// A window `{k : k ≥ lower, Σ k = K}`, itself a scaled copy of the simplex.
#[derive(Debug, Clone)]
struct Window {
    lower: Vec<u64>,
    side: u64,
    resolution: u64,
}

impl Window {
    fn full(n: usize, resolution: u64) -> Self {
        Self {
            lower: vec![0; n],
            side: resolution,
            resolution,
        }
    }

    fn around(points: &[Vec<u64>], radius: u64, resolution: u64) -> Self {
        let n = points[0].len();
        let lower: Vec<u64> = (0..n)
            .map(|i| {
                let lo = points.iter().map(|p| p[i]).min().expect("nonempty");
                lo.saturating_sub(radius)
            })
            .collect();
        let side = resolution - lower.iter().sum::<u64>();
        Self {
            lower,
            side,
            resolution,
        }
    }

    fn point_count(&self) -> u128 {
        let d = self.lower.len() as u128 - 1;
        let s = u128::from(self.side);
        (1..=d).fold(1u128, |acc, i| acc.saturating_mul(s + i) / i)
    }

    fn grow(&mut self, faces: &[usize]) {
        let step = self.side.max(1);
        for &i in faces {
            let dropped = self.lower[i].min(step);
            self.lower[i] -= dropped;
            self.side += dropped;
        }
    }
}

/// All `λ ∈ ℕ^n` with `Σ λ = s`, lexicographically.
fn compositions(n: usize, s: u64) -> Vec<Vec<u64>> {
    fn rec(prefix: &mut Vec<u64>, n: usize, left: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(prefix, n, left - c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, s, &mut out);
    out
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

type ColorCache = HashMap<Vec<u64>, usize>;

enum WindowOutcome {
    Found(Subsimplex, Vec<usize>),
    /// Every panchromatic subsimplex of the window uses an overridden color;
    /// the listed faces are where the window blocks the true coloring.
    Blocked(Vec<usize>),
}

fn fill_colors<T: Scalar>(
    game: &SppGame<T>,
    delta: &T,
    window: &Window,
    locals: &[Vec<u64>],
    cache: &mut ColorCache,
) {
    let missing: Vec<Vec<u64>> = locals
        .iter()
        .map(|l| l.iter().zip(&window.lower).map(|(a, b)| a + b).collect::<Vec<u64>>())
        .filter(|g| !cache.contains_key(g))
        .collect();
    let k = scalar_u64::<T>(window.resolution);
    let colored: Vec<(Vec<u64>, usize)> = missing
        .into_par_iter()
        .map(|g| {
            let beta: Vec<T> = g.iter().map(|&c| scalar_u64::<T>(c) / k.clone()).collect();
            let c = stop_unchecked(game, &beta, delta).color;
            (g, c)
        })
        .collect();
    cache.extend(colored);
}

fn search_window<T: Scalar>(
    game: &SppGame<T>,
    delta: &T,
    window: &Window,
    cache: &mut ColorCache,
) -> WindowOutcome {
    let n = game.n();
    let locals = compositions(n, window.side);
    fill_colors(game, delta, window, &locals, cache);
    let perms = permutations(n - 1);
    let mut blocked: Vec<usize> = Vec::new();
    for base in &locals {
        for path in &perms {
            let Some(verts) = kuhn_vertices(base, path) else {
                continue;
            };
            let mut seen = vec![false; n];
            let mut overridden = Vec::new();
            let mut true_colors = Vec::with_capacity(n);
            for lam in &verts {
                let global: Vec<u64> = lam.iter().zip(&window.lower).map(|(a, b)| a + b).collect();
                let t = cache[&global];
                let shown = if lam[t] > 0 {
                    t
                } else {
                    overridden.push(t);
                    lam.iter().position(|&c| c > 0).expect("window side is positive")
                };
                seen[shown] = true;
                true_colors.push(t);
            }
            if !seen.iter().all(|&s| s) {
                continue;
            }
            if overridden.is_empty() {
                let global_base: Vec<u64> = base.iter().zip(&window.lower).map(|(a, b)| a + b).collect();
                let simplex = Subsimplex {
                    base: GridPoint {
                        coords: global_base,
                        resolution: window.resolution,
                    },
                    path: path.clone(),
                };
                return WindowOutcome::Found(simplex, true_colors);
            }
            for f in overridden {
                if !blocked.contains(&f) {
                    blocked.push(f);
                }
            }
        }
    }
    blocked.sort_unstable();
    WindowOutcome::Blocked(blocked)
}

/// Searches a window, growing it toward blocked faces until a genuine
/// panchromatic subsimplex appears or the window exceeds `max_points`.
fn search_growing<T: Scalar>(
    game: &SppGame<T>,
    delta: &T,
    mut window: Window,
    max_points: usize,
    cache: &mut ColorCache,
) -> Option<(Subsimplex, Vec<usize>)> {
    loop {
        if window.point_count() > max_points as u128 && window.side < window.resolution {
            return None;
        }
        match search_window(game, delta, &window, cache) {
            WindowOutcome::Found(s, c) => return Some((s, c)),
            WindowOutcome::Blocked(faces) => {
                let faces: Vec<usize> = faces.into_iter().filter(|&f| window.lower[f] > 0).collect();
                if faces.is_empty() {
                    // Unreachable for a Sperner coloring; kept as a guard.
                    return None;
                }
                window.grow(&faces);
            }
        }
    }
}

/// A subsimplex of the resolution-`K` grid whose vertices carry all `n`
/// colors, with the colors listed vertex by vertex.
pub fn find_panchromatic<T: Scalar>(
    game: &SppGame<T>,
    delta: &T,
    resolution: u64,
    strategy: Strategy,
) -> Result<(Subsimplex, Vec<usize>), SpernerError> {
    check_inputs(game, delta)?;
    let n = game.n();
    if resolution < n as u64 {
        return Err(SpernerError::Coarse { resolution, n });
    }
    let mut cache = ColorCache::new();
    match strategy {
        Strategy::Exhaustive => {
            search_growing(game, delta, Window::full(n, resolution), usize::MAX, &mut cache)
                .ok_or(SpernerError::WalkBudget { resolution })
        }
        Strategy::RestartWalk {
            seed,
            restarts,
            max_points,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let radius = (2 * n as u64).min(resolution);
            for _ in 0..=restarts {
                let center = random_point(&mut rng, n, resolution);
                let window = Window::around(&[center], radius, resolution);
                if let Some(found) = search_growing(game, delta, window, max_points, &mut cache) {
                    return Ok(found);
                }
            }
            Err(SpernerError::WalkBudget { resolution })
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, resolution: u64) -> Vec<u64> {
    let mut cuts: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(0..=resolution)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(resolution - prev);
    out
}

/// Refinement schedule for [`solve_smooth`]: resolutions `initial · 2^ℓ` for
/// `ℓ = 0..levels`. After the first level only a window of `radius` grid
/// units around the previous subsimplex is searched, grown up to
/// `max_points` grid points when the coloring is blocked at its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub initial: u64,
    pub levels: u32,
    pub radius: u64,
    pub max_points: usize,
    /// Level `K` colors with `max(δ, blur / K)` (capped at 1/2) so the smooth
    /// allocation's transition band spans a few grid cells at every level.
    pub blur: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            initial: 8,
            levels: 64,
            radius: 4,
            max_points: 50_000,
            blur: 64,
        }
    }
}

impl Schedule {
    /// The default followed by wider fallbacks; zoom failures depend on the
    /// path, so a different blur or window usually gets through.
    pub fn ladder() -> Vec<Schedule> {
        let base = Schedule::default();
        vec![
            base,
            Schedule { blur: 128, ..base },
            Schedule { blur: 256, ..base },
            Schedule { blur: 16, ..base },
            Schedule {
                radius: 8,
                max_points: 400_000,
                ..base
            },
        ]
    }
}

#[derive(Debug, Clone)]
pub struct SmoothSolution<T> {
    pub alpha: Vec<T>,
    pub allocation: Vec<Vec<T>>,
    pub simplex: Subsimplex,
    pub colors: Vec<usize>,
    /// Index of the vertex the profile was extracted from.
    pub vertex: usize,
    pub report: VerifyReport<T>,
}

impl<T> SmoothSolution<T> {
    pub fn resolution(&self) -> u64 {
        self.simplex.base.resolution
    }
}

/// Refines the grid until a vertex of a panchromatic subsimplex yields a
/// profile that passes [`verify_smooth`] at `(δ, γ)`.
pub fn solve_smooth<T: Scalar>(
    game: &SppGame<T>,
    params: &ApproxParams<T>,
    schedule: &Schedule,
) -> Result<SmoothSolution<T>, SpernerError> {
    check_inputs(game, &params.delta)?;
    let n = game.n();
    let mut resolution = schedule.initial.max(n as u64);
    let mut window = Window::full(n, resolution);
    let mut largest = resolution;
    for level in 0..schedule.levels.max(1) {
        let mut cache = ColorCache::new();
        let budget = if level == 0 { usize::MAX } else { schedule.max_points };
        let blurred = T::from_i64(schedule.blur as i64) / scalar_u64::<T>(resolution);
        let search_delta = std::cmp::max(params.delta.clone(), blurred);
        let search_delta = std::cmp::min(search_delta, T::from_frac(1, 2));
        let Some((simplex, colors)) = search_growing(game, &search_delta, window, budget, &mut cache) else {
            break;
        };
        largest = resolution;
        for (vertex, v) in simplex.vertices().iter().enumerate() {
            let (alpha, _) = extract_profile(game, v, &params.delta)?;
            let report = verify_smooth(game, &alpha, params).expect("shapes agree");
            if report.passed() {
                let allocation = report.allocation.clone().expect("smooth report carries x");
                return Ok(SmoothSolution {
                    alpha,
                    allocation,
                    simplex,
                    colors,
                    vertex,
                    report,
                });
            }
        }
        let Some(next) = resolution.checked_mul(2).filter(|&k| k < 1 << 62) else {
            break;
        };
        let doubled: Vec<Vec<u64>> = simplex
            .vertices()
            .iter()
            .map(|v| v.coords.iter().map(|c| c * 2).collect())
            .collect();
        resolution = next;
        window = Window::around(&doubled, schedule.radius, resolution);
    }
    Err(SpernerError::Exhausted { largest })
}

/// `log2(1/ω)` for the worst-case grid width `ω` that guarantees every
/// panchromatic subsimplex certifies a smooth `(δ, γ)`-approximate
/// equilibrium: `ω = min(B_min, 1) / (2^{|G|} / δ)^{10000} · γ / 2`, with
/// `|G|` the total bit size of the instance's numbers. The number itself is
/// far too large to be useful; [`solve_smooth`] refines adaptively instead.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaBound {
    pub game_bits: u64,
    pub log2_inverse: f64,
}

pub fn omega_bound<T: Scalar>(game: &SppGame<T>, params: &ApproxParams<T>) -> OmegaBound {
    let game_bits: u64 = game
        .values()
        .iter()
        .flatten()
        .chain(game.budgets())
        .chain(game.reserves().unwrap_or(&[]))
        .map(Scalar::bit_size)
        .sum();
    omega_from_bits(game_bits, game, params)
}

fn omega_from_bits<T: Scalar>(game_bits: u64, game: &SppGame<T>, params: &ApproxParams<T>) -> OmegaBound {
    let b_min = game.budgets().iter().min().expect("n >= 1").clone();
    let floor = std::cmp::min(b_min, T::one());
    let log2 = |v: &T| log2_exact(v);
    let log2_inverse = 10_000.0 * (game_bits as f64 - log2(&params.delta)) - log2(&floor) - log2(&params.gamma) + 1.0;
    OmegaBound {
        game_bits,
        log2_inverse,
    }
}

/// `log2` of a positive scalar, exact on powers of two.
fn log2_exact<T: Scalar>(v: &T) -> f64 {
    let mut x = v.clone();
    let two = T::from_i64(2);
    let mut e = 0.0;
    while x >= two {
        x = x / two.clone();
        e += 1.0;
    }
    while x < T::one() {
        x = x * two.clone();
        e -= 1.0;
    }
    e + x.to_f64().log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational as R;

    fn r(p: i64, q: i64) -> R {
        R::from_frac(p, q)
    }

    fn one_good(v: &[i64], b: &[R]) -> SppGame<R> {
        SppGame::new(v.iter().map(|&x| vec![R::from_i64(x)]).collect(), b.to_vec(), None).unwrap()
    }

    fn pt(c: &[u64], k: u64) -> GridPoint {
        GridPoint::new(c.to_vec(), k).unwrap()
    }

    #[test]
    fn stop_time_examples() {
        let d = r(1, 10);
        let g = one_good(&[1, 1], &[r(10, 1), r(10, 1)]);
        let s = stop_time(&g, &pt(&[1, 1], 2), &d).unwrap();
        assert_eq!(s.t_each, vec![Extended::Finite(r(2, 1)), Extended::Finite(r(2, 1))]);
        assert_eq!((s.t_star, s.color), (r(2, 1), 0));

        let s = stop_time(&g, &pt(&[1, 0], 1), &d).unwrap();
        assert_eq!(s.t_each, vec![Extended::Finite(r(1, 1)), Extended::Infinite]);
        assert_eq!(s.color, 0);

        let tight = one_good(&[1, 1], &[r(1, 4), r(10, 1)]);
        let s = stop_time(&tight, &pt(&[1, 1], 2), &d).unwrap();
        assert_eq!(s.t_each[0], Extended::Finite(r(1, 1)));
        assert_eq!((s.t_star, s.color), (r(1, 1), 0));

        assert!(stop_time(&g, &pt(&[1, 1], 2), &r(0, 1)).is_err());
    }

    #[test]
    fn corners_and_faces() {
        let d = r(1, 10);
        let g = one_good(&[3, 1, 2], &[r(1, 1), r(2, 1), r(1, 2)]);
        for i in 0..3 {
            assert_eq!(color(&g, &GridPoint::corner(3, i, 6), &d).unwrap(), i);
        }
        assert_ne!(color(&g, &pt(&[0, 3, 3], 6), &d).unwrap(), 0);
        assert_eq!(color(&one_good(&[1, 1], &[r(10, 1), r(10, 1)]), &pt(&[2, 2], 4), &d).unwrap(), 0);
    }

    #[test]
    fn kuhn_geometry() {
        let s = Subsimplex::new(pt(&[1, 2, 1], 4), vec![1, 0]).unwrap();
        let v: Vec<Vec<u64>> = s.vertices().iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(v, vec![vec![1, 2, 1], vec![1, 3, 0], vec![2, 2, 0]]);
        assert!(s.linf_diameter() <= 1);
        assert!(Subsimplex::new(pt(&[1, 2, 0], 3), vec![1, 0]).is_none());
        assert!(Subsimplex::new(pt(&[1, 2, 0], 3), vec![0, 0]).is_none());
        // K^{n-1} subsimplices tile the grid.
        for (n, k) in [(2usize, 5u64), (3, 4), (4, 3)] {
            let count = compositions(n, k)
                .iter()
                .flat_map(|b| permutations(n - 1).into_iter().map(move |p| (b.clone(), p)))
                .filter(|(b, p)| kuhn_vertices(b, p).is_some())
                .count();
            assert_eq!(count as u64, k.pow(n as u32 - 1));
        }
    }

    #[test]
    fn panchromatic_examples() {
        let d = r(1, 10);
        let g = one_good(&[1, 1], &[r(1, 4), r(10, 1)]);
        let (s, colors) = find_panchromatic(&g, &d, 8, Strategy::Exhaustive).unwrap();
        let mut sorted = colors.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1]);
        for (v, c) in s.vertices().iter().zip(&colors) {
            assert_eq!(color(&g, v, &d).unwrap(), *c);
        }
        let solo = one_good(&[1], &[r(1, 1)]);
        let (s, colors) = find_panchromatic(&solo, &d, 1, Strategy::Exhaustive).unwrap();
        assert_eq!((s.vertices().len(), colors), (1, vec![0]));

        let walk = Strategy::RestartWalk {
            seed: 3,
            restarts: 4,
            max_points: 10_000,
        };
        let g3 = SppGame::new(
            vec![vec![r(3, 1), r(1, 1)], vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(2, 1)]],
            vec![r(1, 1), r(1, 2), r(2, 1)],
            None,
        )
        .unwrap();
        let (s, colors) = find_panchromatic(&g3, &d, 64, walk).unwrap();
        let mut sorted = colors;
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert_eq!(s.base().resolution(), 64);
    }

    #[test]
    fn extract_examples() {
        let d = r(1, 10);
        let solo = one_good(&[1], &[r(1, 1)]);
        assert_eq!(extract_profile(&solo, &pt(&[5], 5), &d).unwrap(), (vec![r(1, 1)], vec![vec![r(1, 1)]]));
        let g = one_good(&[1, 1], &[r(10, 1), r(10, 1)]);
        let (a, x) = extract_profile(&g, &pt(&[1, 1], 2), &d).unwrap();
        assert_eq!(a, vec![r(1, 1), r(1, 1)]);
        assert_eq!(x, vec![vec![r(1, 2)], vec![r(1, 2)]]);
        let tight = one_good(&[1, 1], &[r(1, 4), r(10, 1)]);
        let (a, x) = extract_profile(&tight, &pt(&[1, 1], 2), &d).unwrap();
        assert_eq!(a, vec![r(1, 2), r(1, 2)]);
        assert_eq!(tight.expenditure(&a, &x, 0), r(1, 4));
    }

    #[test]
    fn solve_smooth_examples() {
        let p = ApproxParams::new(r(1, 10), r(1, 10)).unwrap();
        let solo = one_good(&[1], &[r(1, 1)]);
        assert_eq!(solve_smooth(&solo, &p, &Schedule::default()).unwrap().alpha, vec![r(1, 1)]);

        let g = one_good(&[2, 1], &[r(1, 2), r(10, 1)]);
        let sol = solve_smooth(&g, &p, &Schedule::default()).unwrap();
        assert!(sol.report.passed());
        assert!((sol.alpha[0].to_f64() - 0.5).abs() < 0.1);

        let sym = one_good(&[1, 1], &[r(10, 1), r(10, 1)]);
        let sol = solve_smooth(&sym, &p, &Schedule::default()).unwrap();
        assert_eq!(sol.alpha, vec![r(1, 1), r(1, 1)]);
    }

    #[test]
    fn omega_structure() {
        let g = one_good(&[2, 1], &[r(1, 2), r(10, 1)]);
        let p = ApproxParams::new(r(1, 8), r(1, 4)).unwrap();
        let base = omega_bound(&g, &p);
        let half_gamma = omega_bound(&g, &ApproxParams::new(r(1, 8), r(1, 8)).unwrap());
        assert_eq!(half_gamma.log2_inverse - base.log2_inverse, 1.0);
        let half_delta = omega_bound(&g, &ApproxParams::new(r(1, 16), r(1, 4)).unwrap());
        assert_eq!(half_delta.log2_inverse - base.log2_inverse, 10_000.0);
        let doubled = omega_from_bits(2 * base.game_bits, &g, &p);
        assert!(doubled.log2_inverse - base.log2_inverse >= 10_000.0);
    }
}
