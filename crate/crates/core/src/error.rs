use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which end of the half-line an analytic tail check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    /// `x -> 0+` (or `u -> -inf` in log coordinates).
    Zero,
    /// `x -> +inf`.
    Infinity,
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Zero => write!(f, "0+"),
            End::Infinity => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid phi-function: {0}")]
    InvalidPhi(String),
    #[error("not an N-function: segment {segment} has slope {slope} <= 1")]
    NotNFunction { segment: usize, slope: f64 },
    #[error("no admissible root: {0}")]
    NoRoot(String),
    #[error("modular diverges at {end}")]
    Divergent { end: End },
    #[error("empty input: {0}")]
    Empty(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
