//! Exact linear programming: a dense two-phase simplex method with Bland's
//! pivoting rule over any [`Scalar`]. Variables are implicitly nonnegative.

use std::fmt;

use thiserror::Error;

use crate::scalar::{ParseScalarError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    pub fn holds<T: Scalar>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint<T> {
    pub label: String,
    pub terms: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn lhs(&self, x: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (v, c)| acc + c.clone() * x[*v].clone())
    }

    pub fn satisfied_by(&self, x: &[T]) -> bool {
        self.relation.holds(&self.lhs(x), &self.rhs)
    }
}

/// `minimize Σ objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearProgram<T> {
    pub names: Vec<String>,
    pub objective: Vec<(usize, T)>,
    pub constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(names: Vec<String>) -> Self {
        Self {
            names,
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.names.len()
    }

    pub fn add(&mut self, label: impl Into<String>, terms: Vec<(usize, T)>, relation: Relation, rhs: T) {
        self.constraints.push(Constraint {
            label: label.into(),
            terms,
            relation,
            rhs,
        });
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .fold(T::zero(), |acc, (v, c)| acc + c.clone() * x[*v].clone())
    }

    /// Labels of constraints `x` violates, including negativity.
    pub fn violated(&self, x: &[T]) -> Vec<String> {
        let mut out: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_negative())
            .map(|(i, _)| format!("{} >= 0", self.names[i]))
            .collect();
        out.extend(
            self.constraints
                .iter()
                .filter(|c| !c.satisfied_by(x))
                .map(|c| c.label.clone()),
        );
        out
    }

    /// Plain-text listing: a `vars` line, a `minimize` line, then one
    /// `label: coeff name ... rel rhs` line per constraint.
    pub fn to_text(&self) -> String {
        let term = |(v, c): &(usize, T)| format!("{} {}", c.canonical(), self.names[*v]);
        let mut out = format!("vars: {}\n", self.names.join(" "));
        let obj: Vec<String> = self.objective.iter().map(term).collect();
        out.push_str(&format!("minimize: {}\n", obj.join(" + ")));
        for c in &self.constraints {
            let lhs: Vec<String> = c.terms.iter().map(term).collect();
            let lhs = if lhs.is_empty() { "0/1".to_string() } else { lhs.join(" + ") };
            out.push_str(&format!("{}: {} {} {}\n", c.label, lhs, c.relation.symbol(), c.rhs.canonical()));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, LpParseError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty()).enumerate();
        let bad = |line: usize, what: &str| LpParseError::Syntax {
            line: line + 1,
            what: what.to_string(),
        };
        let (_, first) = lines.next().ok_or_else(|| bad(0, "missing vars line"))?;
        let names: Vec<String> = first
            .strip_prefix("vars:")
            .ok_or_else(|| bad(0, "expected `vars:`"))?
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let mut lp = LinearProgram::new(names);
        let parse_terms = |lp: &LinearProgram<T>, line: usize, s: &str| -> Result<Vec<(usize, T)>, LpParseError> {
            let s = s.trim();
            if s.is_empty() || s == "0/1" {
                return Ok(Vec::new());
            }
            s.split(" + ")
                .map(|t| {
                    let (c, name) = t.trim().split_once(' ').ok_or_else(|| bad(line, "term needs coefficient and name"))?;
                    let v = lp
                        .names
                        .iter()
                        .position(|n| n == name.trim())
                        .ok_or_else(|| bad(line, "unknown variable"))?;
                    Ok((v, T::parse(c).map_err(|e| LpParseError::Number { line: line + 1, source: e })?))
                })
                .collect()
        };
        let (_, second) = lines.next().ok_or_else(|| bad(1, "missing minimize line"))?;
        let obj = second
            .strip_prefix("minimize:")
            .ok_or_else(|| bad(1, "expected `minimize:`"))?;
        lp.objective = parse_terms(&lp, 1, obj)?;
        for (line, text) in lines {
            let (label, body) = text.split_once(": ").ok_or_else(|| bad(line, "missing label"))?;
            let (rel, (lhs, rhs)) = [(Relation::Le, "<="), (Relation::Ge, ">="), (Relation::Eq, "=")]
                .into_iter()
                .find_map(|(r, sym)| body.split_once(&format!(" {sym} ")).map(|p| (r, p)))
                .ok_or_else(|| bad(line, "missing relation"))?;
            let terms = parse_terms(&lp, line, lhs)?;
            let rhs = T::parse(rhs).map_err(|e| LpParseError::Number { line: line + 1, source: e })?;
            lp.add(label, terms, rel, rhs);
        }
        Ok(lp)
    }
}

impl<T: Scalar> fmt::Display for LinearProgram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpParseError {
    #[error("line {line}: {what}")]
    Syntax { line: usize, what: String },
    #[error("line {line}: {source}")]
    Number { line: usize, source: ParseScalarError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution<T> {
    pub values: Vec<T>,
    pub objective: T,
    /// Basic columns at the optimum: structural variables are `0..vars`,
    /// slack and surplus columns follow in constraint order.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded below")]
    Unbounded,
}

struct Tableau<T> {
    /// `rows × (cols + 1)`; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` for the current basis, restricted to `allowed` columns.
    fn reduced(&self, cost: &[T], col: usize) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(cost[col].clone(), |acc, (row, &b)| acc - cost[b].clone() * row[col].clone())
    }

    /// Bland's rule: lowest-index improving column, then lowest-index basic
    /// variable among the ratio-test ties.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Result<(), LpError> {
        loop {
            let Some(enter) = (0..allowed).find(|&c| !self.basis.contains(&c) && self.reduced(cost, c).is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = row[self.cols].clone() / row[enter].clone();
                leave = match leave {
                    Some((lr, lv)) if lv < ratio || (lv == ratio && self.basis[lr] < self.basis[r]) => Some((lr, lv)),
                    _ => Some((r, ratio)),
                };
            }
            let (r, _) = leave.ok_or(LpError::Unbounded)?;
            self.pivot(r, enter);
        }
    }

    fn value(&self, cost: &[T]) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(T::zero(), |acc, (row, &b)| acc + cost[b].clone() * row[self.cols].clone())
    }
}

/// Solves to an exact optimal basic solution.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    let nv = lp.vars();
    let rows_in: Vec<(Vec<T>, Relation, T)> = lp
        .constraints
        .iter()
        .map(|c| {
            let mut dense = vec![T::zero(); nv];
            for (v, a) in &c.terms {
                dense[*v] = dense[*v].clone() + a.clone();
            }
            if c.rhs.is_negative() {
                (dense.into_iter().map(|a| -a).collect(), c.relation.flipped(), -c.rhs.clone())
            } else {
                (dense, c.relation, c.rhs.clone())
            }
        })
        .collect();
    let slack_count = rows_in.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let art_count = rows_in.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let real = nv + slack_count;
    let cols = real + art_count;
    let mut rows = Vec::with_capacity(rows_in.len());
    let mut basis = Vec::with_capacity(rows_in.len());
    let (mut next_slack, mut next_art) = (nv, real);
    for (dense, rel, rhs) in rows_in {
        let mut row = dense;
        row.resize(cols + 1, T::zero());
        row[cols] = rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = T::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -T::one();
                next_slack += 1;
                row[next_art] = T::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = T::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, cols };

    let mut phase1 = vec![T::zero(); cols];
    for c in phase1.iter_mut().skip(real) {
        *c = T::one();
    }
    tab.optimize(&phase1, cols).expect("phase one is bounded below by zero");
    if tab.value(&phase1).is_positive() {
        return Err(LpError::Infeasible);
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= real {
            match (0..real).find(|&c| !tab.rows[r][c].is_zero()) {
                Some(c) => tab.pivot(r, c),
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase2 = vec![T::zero(); cols];
    for (v, c) in &lp.objective {
        phase2[*v] = phase2[*v].clone() + c.clone();
    }
    tab.optimize(&phase2, real)?;
    let mut values = vec![T::zero(); nv];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        if b < nv {
            values[b] = row[cols].clone();
        }
    }
    let objective = lp.objective_value(&values);
    let mut basis = tab.basis.clone();
    basis.sort_unstable();
    Ok(LpSolution {
        values,
        objective,
        basis,
    })
}
