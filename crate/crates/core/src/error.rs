//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parametric oscillator at or above threshold: chi = {chi} must be < kappa_c = {kappa_c}")]
    ThresholdViolation { chi: f64, kappa_c: f64 },

    #[error("non-positive rate: {name} = {value} must be > 0")]
    NonPositiveRate { name: &'static str, value: f64 },

    #[error("negative input: {name} = {value} must be >= 0")]
    NegativeInput { name: &'static str, value: f64 },

    #[error("non-finite input: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error(
        "infeasible squeezing target: (1 - s0)/xi = {ratio} must be < 1 \
         (no below-threshold oscillator realizes S(0) = {s0} at purity xi = {xi})"
    )]
    Infeasible { s0: f64, xi: f64, ratio: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("model is not cooling: gamma + Gamma = {total_rate} must be > 0")]
    NotCooling { total_rate: f64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("unstable drift: stability margin = {margin} (largest eigenvalue real part) must be < 0")]
    UnstableModel { margin: f64 },

    #[error("steady-state solver failure: {0}")]
    SolverFailure(String),

    #[error("no interior minimum in the search window [{lo}, {hi}]: objective is monotone")]
    NoMinimumInWindow { lo: f64, hi: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("config line {line}: cannot parse `{text}`")]
    ConfigParse { line: usize, text: String },

    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("config is missing required key `{0}`")]
    MissingKey(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
