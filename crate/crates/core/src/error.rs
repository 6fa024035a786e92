// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the operator-growth pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: String, right: String },

    #[error("Pauli string support exceeds {max} sites")]
    SupportOverflow { max: u32 },

    #[error("operator term budget exceeded: {terms} terms > {budget}")]
    TermBudget { terms: usize, budget: usize },

    #[error("moment sequence too short: need {needed} moments, have {have}")]
    TooFewMoments { needed: usize, have: usize },

    #[error("moment degeneracy at index {index}: Hankel determinant vanishes")]
    MomentDegeneracy { index: usize },

    #[error("precision ladder exceeded cap of {cap} bits without reaching {digits} stable digits")]
    LadderCap { cap: u32, digits: u32 },

    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    #[error("normalized bi-Lanczos needs square roots; exact scalars support only the monic recursion")]
    SqrtUnavailable,

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("correlator does not decay: {0}")]
    NonDecaying(String),

    #[error("crossover formula outside its domain: {0}")]
    Domain(String),

    #[error("regime not found: {0}")]
    RegimeNotFound(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("csv schema error in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
