//! Distribution property testing in the huge object model.
//!
//! A distribution over `{0,1}^n` is accessed by drawing vector-valued samples
//! and querying individual bits of the sampled vectors, with exact accounting
//! of both resources. On top of that access model this crate provides:
//!
//! - exact Earth Mover Distance with normalized Hamming ground metric, plus
//!   assignment-based matrix distances ([`metrics`]),
//! - the sample-and-query learner for clusterable distributions and the
//!   testers for bounded-VC properties derived from it ([`cluster`]),
//! - the secret/Reed-Solomon/final encoding stack ([`codes`]) and the
//!   adaptive gap tester built on it ([`gap`]),
//! - generators for hard and easy instance families ([`instances`]),
//! - the tester abstraction with the exponential and quadratic
//!   adaptive-to-non-adaptive simulations ([`transforms`]).
//!
//! Every randomized component takes an explicit 64-bit seed and is
//! bit-reproducible across runs and platforms.

pub mod bits;
pub mod cluster;
pub mod codes;
pub mod dist;
pub mod gap;
pub mod instances;
pub mod metrics;
pub mod oracle;
pub mod seeding;
pub mod transforms;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Binary verdict of a tester.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown sample id {0}")]
    UnknownSample(usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("gave up after {attempts} attempts: {reason}")]
    AttemptCap { attempts: usize, reason: String },
    #[error("tester exceeded declared budget: {0}")]
    TesterBudget(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
