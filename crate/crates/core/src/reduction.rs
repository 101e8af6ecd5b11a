//! Hardness gadgets: a `{0,1}`-cost bimatrix game becomes a pacing game
//! whose equilibria encode Nash equilibria, plus the maps back.
//!
//! Indexing is fixed. Buyers are `C(1,·)`, `C(2,·)`, `T`, `D(1,·)`, `D(2,·)`;
//! goods are all `N(p,s)_i`, then all `E(p,s)_i`, then all `T(p,s)`, each
//! block lexicographic in `(p, s, i)`. Names print 1-based, the accessors
//! take `p ∈ {1, 2}` and 0-based `s`, `i`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{ApproxParams, EquilibriumCandidate, ParamRangeError, SppGame};
use crate::io::{self, IoError};
use crate::lp::{self, LinearProgram, Relation};
use crate::scalar::{half, pow, positive_part, Scalar};
use crate::verify::{Condition, VerifyReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimatrixError {
    #[error("bimatrix game needs n >= 1")]
    Empty,
    #[error("matrix {which} is not {n}x{n}")]
    NotSquare { which: char, n: usize },
    #[error("{which}[{row}][{col}] = {value}, entries must be 0 or 1")]
    Entry {
        which: char,
        row: usize,
        col: usize,
        value: i64,
    },
}

#[derive(Deserialize)]
struct RawBimatrix {
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>,
}

/// Two `n×n` cost matrices with entries in `{0, 1}`. Both players minimise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBimatrix")]
pub struct BimatrixGame {
    a: Vec<Vec<u8>>,
    b: Vec<Vec<u8>>,
}

impl TryFrom<RawBimatrix> for BimatrixGame {
    type Error = BimatrixError;

    fn try_from(raw: RawBimatrix) -> Result<Self, BimatrixError> {
        Self::new(raw.a, raw.b)
    }
}

impl BimatrixGame {
    pub fn new(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> Result<Self, BimatrixError> {
        let n = a.len();
        if n == 0 {
            return Err(BimatrixError::Empty);
        }
        let mut out = Vec::with_capacity(2);
        for (which, m) in [('A', a), ('B', b)] {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(BimatrixError::NotSquare { which, n });
            }
            for (row, r) in m.iter().enumerate() {
                if let Some((col, &value)) = r.iter().enumerate().find(|(_, v)| !matches!(v, 0 | 1)) {
                    return Err(BimatrixError::Entry { which, row, col, value });
                }
            }
            out.push(m.into_iter().map(|r| r.into_iter().map(|v| v as u8).collect()).collect());
        }
        let b = out.pop().expect("two matrices");
        let a = out.pop().expect("two matrices");
        Ok(Self { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, s: usize, t: usize) -> u8 {
        self.a[s][t]
    }

    pub fn b(&self, s: usize, t: usize) -> u8 {
        self.b[s][t]
    }

    pub fn cost_a<T: Scalar>(&self) -> Vec<Vec<T>> {
        to_scalar(&self.a)
    }

    pub fn cost_b<T: Scalar>(&self) -> Vec<Vec<T>> {
        to_scalar(&self.b)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        io::to_pretty(self)
    }
}

fn to_scalar<T: Scalar>(m: &[Vec<u8>]) -> Vec<Vec<T>> {
    m.iter()
        .map(|r| r.iter().map(|&v| T::from_i64(i64::from(v))).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuyerName {
    C { p: u8, s: usize },
    T,
    D { p: u8, s: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoodName {
    N { p: u8, s: usize, i: usize },
    E { p: u8, s: usize, i: usize },
    T { p: u8, s: usize },
}

impl fmt::Display for BuyerName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BuyerName::C { p, s } => write!(f, "C({p},{})", s + 1),
            BuyerName::T => f.write_str("T"),
            BuyerName::D { p, s } => write!(f, "D({p},{})", s + 1),
        }
    }
}

impl fmt::Display for GoodName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GoodName::N { p, s, i } => write!(f, "N({p},{})_{}", s + 1, i + 1),
            GoodName::E { p, s, i } => write!(f, "E({p},{})_{}", s + 1, i + 1),
            GoodName::T { p, s } => write!(f, "T({p},{})", s + 1),
        }
    }
}

/// Which gadget a game was built as; the approximate one remembers `(δ, γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GadgetVariant<T> {
    Exact,
    Approx { delta: T, gamma: T },
}

/// Name ↔ index maps of a gadget over an `n×n` bimatrix game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GadgetIndex<T> {
    n: usize,
    pub variant: GadgetVariant<T>,
}

fn side(p: u8) -> usize {
    assert!(p == 1 || p == 2, "player must be 1 or 2, got {p}");
    usize::from(p - 1)
}

impl<T: Scalar> GadgetIndex<T> {
    pub fn new(n: usize, variant: GadgetVariant<T>) -> Self {
        assert!(n >= 1);
        Self { n, variant }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn buyer_count(&self) -> usize {
        4 * self.n + 1
    }

    pub fn good_count(&self) -> usize {
        4 * self.n * self.n + 2 * self.n
    }

    pub fn c(&self, p: u8, s: usize) -> usize {
        side(p) * self.n + s
    }

    pub fn t(&self) -> usize {
        2 * self.n
    }

    pub fn d(&self, p: u8, s: usize) -> usize {
        2 * self.n + 1 + side(p) * self.n + s
    }

    pub fn n_good(&self, p: u8, s: usize, i: usize) -> usize {
        (side(p) * self.n + s) * self.n + i
    }

    pub fn e_good(&self, p: u8, s: usize, i: usize) -> usize {
        2 * self.n * self.n + self.n_good(p, s, i)
    }

    pub fn t_good(&self, p: u8, s: usize) -> usize {
        4 * self.n * self.n + side(p) * self.n + s
    }

    pub fn buyer_name(&self, index: usize) -> Option<BuyerName> {
        let n = self.n;
        let p = |k: usize| if k < n { 1 } else { 2 };
        match index {
            k if k < 2 * n => Some(BuyerName::C { p: p(k), s: k % n }),
            k if k == 2 * n => Some(BuyerName::T),
            k if k < 4 * n + 1 => {
                let k = k - 2 * n - 1;
                Some(BuyerName::D { p: p(k), s: k % n })
            }
            _ => None,
        }
    }

    pub fn good_name(&self, index: usize) -> Option<GoodName> {
        let n = self.n;
        let block = 2 * n * n;
        let split = |k: usize| (if k < n * n { 1 } else { 2 }, (k / n) % n, k % n);
        if index < block {
            let (p, s, i) = split(index);
            Some(GoodName::N { p, s, i })
        } else if index < 2 * block {
            let (p, s, i) = split(index - block);
            Some(GoodName::E { p, s, i })
        } else if index < 2 * block + 2 * n {
            let k = index - 2 * block;
            Some(GoodName::T {
                p: if k < n { 1 } else { 2 },
                s: k % n,
            })
        } else {
            None
        }
    }

    pub fn buyer_index(&self, name: BuyerName) -> Option<usize> {
        let ok = |p: u8, s: usize| (p == 1 || p == 2) && s < self.n;
        match name {
            BuyerName::C { p, s } if ok(p, s) => Some(self.c(p, s)),
            BuyerName::T => Some(self.t()),
            BuyerName::D { p, s } if ok(p, s) => Some(self.d(p, s)),
            _ => None,
        }
    }

    pub fn good_index(&self, name: GoodName) -> Option<usize> {
        let ok = |p: u8, s: usize, i: usize| (p == 1 || p == 2) && s < self.n && i < self.n;
        match name {
            GoodName::N { p, s, i } if ok(p, s, i) => Some(self.n_good(p, s, i)),
            GoodName::E { p, s, i } if ok(p, s, i) => Some(self.e_good(p, s, i)),
            GoodName::T { p, s } if ok(p, s, 0) => Some(self.t_good(p, s)),
            _ => None,
        }
    }

    pub fn buyer_names(&self) -> Vec<String> {
        (0..self.buyer_count())
            .map(|k| self.buyer_name(k).expect("in range").to_string())
            .collect()
    }

    pub fn good_names(&self) -> Vec<String> {
        (0..self.good_count())
            .map(|k| self.good_name(k).expect("in range").to_string())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let (variant, delta, gamma) = match &self.variant {
            GadgetVariant::Exact => ("exact", None, None),
            GadgetVariant::Approx { delta, gamma } => ("approx", Some(delta.canonical()), Some(gamma.canonical())),
        };
        io::to_pretty(&IndexFile {
            n: self.n,
            variant: variant.into(),
            delta,
            gamma,
            buyers: self.buyer_names(),
            goods: self.good_names(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, IndexFileError> {
        let file: IndexFile = serde_json::from_str(text).map_err(|e| IndexFileError::Json(e.to_string()))?;
        if file.n == 0 {
            return Err(IndexFileError::Malformed("n must be positive".into()));
        }
        let scalar = |field: &'static str, v: &Option<String>| -> Result<T, IndexFileError> {
            let text = v
                .as_deref()
                .ok_or_else(|| IndexFileError::Malformed(format!("approx index needs {field}")))?;
            T::parse(text).map_err(|e| IndexFileError::Malformed(e.to_string()))
        };
        let variant = match file.variant.as_str() {
            "exact" => GadgetVariant::Exact,
            "approx" => GadgetVariant::Approx {
                delta: scalar("delta", &file.delta)?,
                gamma: scalar("gamma", &file.gamma)?,
            },
            other => return Err(IndexFileError::Malformed(format!("unknown variant {other:?}"))),
        };
        let index = Self::new(file.n, variant);
        if file.buyers != index.buyer_names() || file.goods != index.good_names() {
            return Err(IndexFileError::Malformed("name lists do not match the fixed order".into()));
        }
        Ok(index)
    }
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    n: usize,
    variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<String>,
    buyers: Vec<String>,
    goods: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexFileError {
    #[error("index file is not valid JSON: {0}")]
    Json(String),
    #[error("index file: {0}")]
    Malformed(String),
}

/// A pair of mixed strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedProfile<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> MixedProfile<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "x": io::fmt_vec(&self.x), "y": io::fmt_vec(&self.y) })
    }
}

/// `ν = 1/(16n)`
pub fn nu<T: Scalar>(n: usize) -> T {
    T::from_frac(1, 16 * n as i64)
}

/// The exact gadget.
pub fn build_exact_gadget<T: Scalar>(bimatrix: &BimatrixGame) -> (SppGame<T>, GadgetIndex<T>) {
    build(bimatrix, GadgetVariant::Exact)
}

/// The approximate gadget. [`default_approx_params`] gives the usual
/// `δ = γ = 1/n⁷`. Both must lie in `[0, 1)`.
pub fn build_approx_gadget<T: Scalar>(
    bimatrix: &BimatrixGame,
    delta: T,
    gamma: T,
) -> Result<(SppGame<T>, GadgetIndex<T>), ParamRangeError> {
    let ApproxParams { delta, gamma } = ApproxParams::new(delta, gamma)?;
    Ok(build(bimatrix, GadgetVariant::Approx { delta, gamma }))
}

/// `δ = γ = 1/n⁷`, and the well-supported slack `ε = 1/n` it buys. At
/// `n = 1` this gives `δ = 1`, which [`build_approx_gadget`] rejects.
pub fn default_approx_params<T: Scalar>(n: usize) -> (T, T, T) {
    let n = T::from_i64(n as i64);
    let d = T::one() / pow(&n, 7);
    (d.clone(), d, T::one() / n)
}

fn build<T: Scalar>(bimatrix: &BimatrixGame, variant: GadgetVariant<T>) -> (SppGame<T>, GadgetIndex<T>) {
    let n = bimatrix.n();
    let index = GadgetIndex::new(n, variant);
    let nt = T::from_i64(n as i64);
    let n4 = pow(&nt, 4);
    let nu: T = nu(n);
    let a = bimatrix.cost_a::<T>();
    let b = bimatrix.cost_b::<T>();
    let (off_diagonal, threshold_value, minus_nu) = match &index.variant {
        GadgetVariant::Exact => (T::from_i64(2), n4.clone(), nu.clone()),
        GadgetVariant::Approx { delta, .. } => (T::from_i64(16), (T::one() - delta.clone()) * n4.clone(), T::zero()),
    };
    let mut v = vec![vec![T::zero(); index.good_count()]; index.buyer_count()];
    let mut budgets = vec![T::zero(); index.buyer_count()];
    let base = nt.clone() / T::from_i64(2) + n4.clone() + T::from_frac(1, 4) - minus_nu;
    for p in [1u8, 2] {
        for s in 0..n {
            let c = index.c(p, s);
            for i in 0..n {
                v[c][index.n_good(p, s, i)] = if i == s { T::one() } else { off_diagonal.clone() };
                if i != s {
                    v[c][index.n_good(p, i, s)] = T::one();
                }
                v[c][index.e_good(p, s, i)] = T::one();
            }
            v[c][index.t_good(p, s)] = T::from_i64(2) * n4.clone();
            let mut budget = base.clone();
            for t in 0..n {
                if p == 1 {
                    v[c][index.e_good(2, t, s)] = nu.clone() * b[s][t].clone();
                    budget = budget + nu.clone() * a[s][t].clone() / T::from_i64(2);
                } else {
                    v[c][index.e_good(1, t, s)] = nu.clone() * a[t][s].clone();
                    budget = budget + nu.clone() * b[t][s].clone() / T::from_i64(2);
                }
            }
            budgets[c] = budget;
            let d = index.d(p, s);
            v[d][index.n_good(p, s, s)] = T::one();
            budgets[d] = nu.clone();
        }
    }
    let t = index.t();
    for p in [1u8, 2] {
        for s in 0..n {
            v[t][index.t_good(p, s)] = threshold_value.clone();
            for u in 0..n {
                let cost = if p == 1 { a[s][u].clone() } else { b[u][s].clone() };
                v[t][index.e_good(p, s, u)] = nu.clone() * cost / T::from_i64(2);
            }
        }
    }
    budgets[t] = pow(&nt, 7);
    let game = SppGame::new(v, budgets, None).expect("gadget values link every buyer and good");
    (game, index)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("profile has {got} entries, gadget has {expected} buyers")]
    Shape { got: usize, expected: usize },
    #[error("alpha({buyer}) = {value} is outside {range}")]
    Range {
        buyer: String,
        value: String,
        range: &'static str,
    },
    #[error("player {player} weights sum to zero; nothing to normalize")]
    ZeroNormalizer { player: u8 },
    #[error("extraction for the {0} gadget called on the other variant")]
    Variant(&'static str),
}

fn normalize<T: Scalar>(w: Vec<T>, player: u8) -> Result<Vec<T>, ExtractError> {
    let total = w.iter().fold(T::zero(), |acc, v| acc + v.clone());
    if total.is_zero() {
        return Err(ExtractError::ZeroNormalizer { player });
    }
    Ok(w.into_iter().map(|v| v / total.clone()).collect())
}

fn check_len<T: Scalar>(game: &SppGame<T>, index: &GadgetIndex<T>, alpha: &[T]) -> Result<(), ExtractError> {
    let expected = index.buyer_count();
    if alpha.len() != expected || game.n() != expected || game.m() != index.good_count() {
        return Err(ExtractError::Shape {
            got: alpha.len(),
            expected,
        });
    }
    Ok(())
}

/// `x_s ∝ α(C(1,s)) − 1/2`, `y_s ∝ α(C(2,s)) − 1/2`. Every `C` multiplier must
/// lie in `[1/2, 1)`.
pub fn extract_nash_exact<T: Scalar>(
    game: &SppGame<T>,
    index: &GadgetIndex<T>,
    alpha: &[T],
) -> Result<MixedProfile<T>, ExtractError> {
    check_len(game, index, alpha)?;
    let n = index.n();
    let mut parts = Vec::with_capacity(2);
    for p in [1u8, 2] {
        let mut w = Vec::with_capacity(n);
        for s in 0..n {
            let a = &alpha[index.c(p, s)];
            if *a < half() || *a >= T::one() {
                return Err(ExtractError::Range {
                    buyer: BuyerName::C { p, s }.to_string(),
                    value: a.canonical(),
                    range: "[1/2, 1)",
                });
            }
            w.push(a.clone() - half());
        }
        parts.push(normalize(w, p)?);
    }
    let y = parts.pop().expect("two players");
    let x = parts.pop().expect("two players");
    Ok(MixedProfile { x, y })
}

/// `x_s ∝ [α(C(1,s)) − α(T)/2]⁺`, likewise `y`. Requires the approximate
/// variant, `C` multipliers in `[(1−δ)²/2, 7/8]` and `α(T) ≥ 1 − γ`.
pub fn extract_nash_approx<T: Scalar>(
    game: &SppGame<T>,
    index: &GadgetIndex<T>,
    alpha: &[T],
) -> Result<MixedProfile<T>, ExtractError> {
    check_len(game, index, alpha)?;
    let GadgetVariant::Approx { delta, gamma } = &index.variant else {
        return Err(ExtractError::Variant("approximate"));
    };
    let n = index.n();
    let keep = T::one() - delta.clone();
    let lo = keep.clone() * keep / T::from_i64(2);
    let hi = T::from_frac(7, 8);
    let t = &alpha[index.t()];
    if *t < T::one() - gamma.clone() || *t > T::one() {
        return Err(ExtractError::Range {
            buyer: BuyerName::T.to_string(),
            value: t.canonical(),
            range: "[1 - gamma, 1]",
        });
    }
    let cut = t.clone() / T::from_i64(2);
    let mut parts = Vec::with_capacity(2);
    for p in [1u8, 2] {
        let mut w = Vec::with_capacity(n);
        for s in 0..n {
            let a = &alpha[index.c(p, s)];
            if *a < lo || *a > hi {
                return Err(ExtractError::Range {
                    buyer: BuyerName::C { p, s }.to_string(),
                    value: a.canonical(),
                    range: "[(1 - delta)^2 / 2, 7/8]",
                });
            }
            w.push(positive_part(a.clone() - cut.clone()));
        }
        parts.push(normalize(w, p)?);
    }
    let y = parts.pop().expect("two players");
    let x = parts.pop().expect("two players");
    Ok(MixedProfile { x, y })
}

/// Checks the multiplier structure every equilibrium of the gadget has.
/// Exact: `α(T) = 1`, `1/2 ≤ α(C) < 1`, `α(D) = α(C)`. Approximate:
/// `α(T) ≥ 1 − γ`, `(1−δ)²/2 ≤ α(C) ≤ 7/8`,
/// `(1−δ)α(C) ≤ α(D) ≤ α(C)/(1−δ)`.
pub fn check_gadget_pe_lemmas<T: Scalar>(
    index: &GadgetIndex<T>,
    candidate: &EquilibriumCandidate<T>,
) -> VerifyReport<T> {
    let alpha = candidate.alpha();
    assert_eq!(alpha.len(), index.buyer_count(), "candidate does not fit the gadget");
    let mut out = Vec::new();
    let mut need = |ok: bool, buyer: usize, lhs: &T, rhs: T, relation: &'static str| {
        if !ok {
            out.push(Violation {
                condition: Condition::Bound,
                buyer: Some(buyer),
                good: None,
                lhs: lhs.clone(),
                rhs,
                relation,
            });
        }
    };
    let t = index.t();
    match &index.variant {
        GadgetVariant::Exact => {
            need(alpha[t].is_one(), t, &alpha[t], T::one(), "alpha(T) = 1");
            for p in [1u8, 2] {
                for s in 0..index.n() {
                    let (c, d) = (index.c(p, s), index.d(p, s));
                    let ac = &alpha[c];
                    need(*ac >= half(), c, ac, half(), "alpha(C) >= 1/2");
                    need(*ac < T::one(), c, ac, T::one(), "alpha(C) < 1");
                    need(alpha[d] == *ac, d, &alpha[d], ac.clone(), "alpha(D) = alpha(C)");
                }
            }
        }
        GadgetVariant::Approx { delta, gamma } => {
            let floor = T::one() - gamma.clone();
            need(alpha[t] >= floor, t, &alpha[t], floor, "alpha(T) >= 1 - gamma");
            let keep = T::one() - delta.clone();
            let lo = keep.clone() * keep.clone() / T::from_i64(2);
            let hi = T::from_frac(7, 8);
            for p in [1u8, 2] {
                for s in 0..index.n() {
                    let (c, d) = (index.c(p, s), index.d(p, s));
                    let ac = &alpha[c];
                    need(*ac >= lo, c, ac, lo.clone(), "alpha(C) >= (1 - delta)^2 / 2");
                    need(*ac <= hi, c, ac, hi.clone(), "alpha(C) <= 7/8");
                    let below = keep.clone() * ac.clone();
                    let above = ac.clone() / keep.clone();
                    need(alpha[d] >= below, d, &alpha[d], below, "alpha(D) >= (1 - delta) alpha(C)");
                    need(alpha[d] <= above, d, &alpha[d], above, "alpha(D) <= alpha(C) / (1 - delta)");
                }
            }
        }
    }
    VerifyReport::new(out)
}

/// Every strategy in `rows` costs exactly the best-response value `u` against
/// some opponent mix supported on `cols`; strategies outside `rows` cost at
/// least `u`. Returns that mix.
fn indifferent_mix<T: Scalar>(cost: &[Vec<T>], rows: &[usize], cols: &[usize]) -> Option<Vec<T>> {
    let n = cost.len();
    let mut names: Vec<String> = cols.iter().map(|j| format!("w_{j}")).collect();
    names.push("u".into());
    let u = cols.len();
    let mut prog = LinearProgram::new(names);
    prog.add("sum", (0..u).map(|k| (k, T::one())).collect(), Relation::Eq, T::one());
    for r in 0..n {
        let mut terms: Vec<(usize, T)> = cols.iter().enumerate().map(|(k, &j)| (k, cost[r][j].clone())).collect();
        terms.push((u, -T::one()));
        let rel = if rows.contains(&r) { Relation::Eq } else { Relation::Ge };
        prog.add(format!("cost_{r}"), terms, rel, T::zero());
    }
    let sol = lp::solve(&prog).ok()?;
    let mut mix = vec![T::zero(); n];
    for (k, &j) in cols.iter().enumerate() {
        mix[j] = sol.values[k].clone();
    }
    Some(mix)
}

/// An exact Nash equilibrium by support enumeration: support pairs are tried
/// by total size, then lexicographically by bitmask, and each pair is an
/// exact LP feasibility problem. Exponential in `n`; meant for `n ≤ 4`.
pub fn support_enumeration_nash<T: Scalar>(bimatrix: &BimatrixGame) -> MixedProfile<T> {
    let n = bimatrix.n();
    assert!(n < 16, "support enumeration is only for tiny games");
    let a = bimatrix.cost_a::<T>();
    // Column player's costs, transposed so rows are its own strategies.
    let bt: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| T::from_i64(i64::from(bimatrix.b(i, j)))).collect())
        .collect();
    let members = |mask: u32| -> Vec<usize> { (0..n).filter(|k| mask & (1 << k) != 0).collect() };
    let mut pairs: Vec<(u32, u32)> = (1..1u32 << n).flat_map(|sx| (1..1u32 << n).map(move |sy| (sx, sy))).collect();
    pairs.sort_by_key(|&(sx, sy)| (sx.count_ones() + sy.count_ones(), sx, sy));
    for (sx, sy) in pairs {
        let (rows, cols) = (members(sx), members(sy));
        let Some(y) = indifferent_mix(&a, &rows, &cols) else {
            continue;
        };
        let Some(x) = indifferent_mix(&bt, &cols, &rows) else {
            continue;
        };
        return MixedProfile { x, y };
    }
    unreachable!("every finite bimatrix game has a Nash equilibrium")
}

/// Reads a bimatrix file.
pub fn parse_bimatrix(text: &str) -> Result<BimatrixGame, IoError> {
    Ok(BimatrixGame::from_json(text)?)
}
