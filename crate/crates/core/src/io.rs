//! JSON instance and equilibrium files. Rationals travel as `"p/q"` strings so
//! round trips are bit-exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{EquilibriumCandidate, GameError, SppGame};
use crate::scalar::{ParseScalarError, Scalar};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {source}")]
    Number {
        field: String,
        source: ParseScalarError,
    },
    #[error("field `{field}` has length {got}, expected {expected}")]
    Dimension {
        field: String,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFile {
    pub n: usize,
    pub m: usize,
    pub values: Vec<Vec<String>>,
    pub budgets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reserves: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumFile {
    pub alpha: Vec<String>,
    pub x: Vec<Vec<String>>,
}

pub fn fmt_vec<T: Scalar>(v: &[T]) -> Vec<String> {
    v.iter().map(Scalar::canonical).collect()
}

pub fn fmt_mat<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| fmt_vec(r)).collect()
}

pub fn parse_vec<T: Scalar>(field: &str, v: &[String]) -> Result<Vec<T>, IoError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| {
            T::parse(s).map_err(|source| IoError::Number {
                field: format!("{field}[{i}]"),
                source,
            })
        })
        .collect()
}

pub fn parse_mat<T: Scalar>(field: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<T>>, IoError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| parse_vec(&format!("{field}[{i}]"), r))
        .collect()
}

fn check_len(field: &str, got: usize, expected: usize) -> Result<(), IoError> {
    if got != expected {
        return Err(IoError::Dimension {
            field: field.to_string(),
            got,
            expected,
        });
    }
    Ok(())
}

impl GameFile {
    pub fn from_game<T: Scalar>(game: &SppGame<T>) -> Self {
        Self {
            n: game.n(),
            m: game.m(),
            values: fmt_mat(game.values()),
            budgets: fmt_vec(game.budgets()),
            reserves: game.reserves().map(fmt_vec),
        }
    }

    pub fn to_game<T: Scalar>(&self) -> Result<SppGame<T>, IoError> {
        check_len("values", self.values.len(), self.n)?;
        for (i, row) in self.values.iter().enumerate() {
            check_len(&format!("values[{i}]"), row.len(), self.m)?;
        }
        check_len("budgets", self.budgets.len(), self.n)?;
        if let Some(r) = &self.reserves {
            check_len("reserves", r.len(), self.m)?;
        }
        let values = parse_mat("values", &self.values)?;
        let budgets = parse_vec("budgets", &self.budgets)?;
        let reserves = self
            .reserves
            .as_ref()
            .map(|r| parse_vec("reserves", r))
            .transpose()?;
        Ok(SppGame::new(values, budgets, reserves)?)
    }
}

impl EquilibriumFile {
    pub fn from_candidate<T: Scalar>(c: &EquilibriumCandidate<T>) -> Self {
        Self {
            alpha: fmt_vec(c.alpha()),
            x: fmt_mat(c.x()),
        }
    }

    pub fn to_candidate<T: Scalar>(&self) -> Result<EquilibriumCandidate<T>, IoError> {
        let alpha = parse_vec("alpha", &self.alpha)?;
        check_len("x", self.x.len(), alpha.len())?;
        let x = parse_mat("x", &self.x)?;
        Ok(EquilibriumCandidate::from_parts(alpha, x)?)
    }
}

pub fn parse_game<T: Scalar>(text: &str) -> Result<SppGame<T>, IoError> {
    serde_json::from_str::<GameFile>(text)?.to_game()
}

pub fn serialize_game<T: Scalar>(game: &SppGame<T>) -> String {
    to_pretty(&GameFile::from_game(game))
}

pub fn parse_equilibrium<T: Scalar>(text: &str) -> Result<EquilibriumCandidate<T>, IoError> {
    serde_json::from_str::<EquilibriumFile>(text)?.to_candidate()
}

pub fn serialize_equilibrium<T: Scalar>(c: &EquilibriumCandidate<T>) -> String {
    to_pretty(&EquilibriumFile::from_candidate(c))
}

pub(crate) fn to_pretty<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("string-keyed documents always serialize")
}
