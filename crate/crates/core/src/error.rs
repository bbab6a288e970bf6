use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::ode::SolutionTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length {len} is not a power of two (expected N = 2^n with n >= {min_qubits})")]
    NotPowerOfTwo { len: usize, min_qubits: u32 },

    #[error("index {index} out of range for N = {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("n = {n} exceeds the configured resource cap of {max} qubits")]
    ResourceLimit { n: u32, max: u32 },

    #[error("non-finite value {value} at position {index} ({context})")]
    NonFinite {
        context: &'static str,
        index: usize,
        value: f64,
    },

    #[error("state vector norm {norm} is not 1 (tolerance {tolerance:e})")]
    NonUnitNorm { norm: f64, tolerance: f64 },

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("sampled measurement mode requires a shot count")]
    MissingShots,

    #[error("shift margin epsilon must be strictly positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid domain [{lo}, {hi}]")]
    InvalidDomain { lo: f64, hi: f64 },

    #[error("unknown built-in problem `{0}` (known: riccati, beer_system)")]
    UnknownProblem(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("Picard iteration diverged in sweep {iteration}: {reason}")]
    Divergence {
        iteration: usize,
        reason: String,
        trace: Box<SolutionTrace>,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Returns `n` such that `len == 2^n`, requiring `n >= min_qubits`.
pub(crate) fn qubits_for_len(len: usize, min_qubits: u32) -> Result<u32> {
    if len.is_power_of_two() && len.trailing_zeros() >= min_qubits {
        Ok(len.trailing_zeros())
    } else {
        Err(Error::NotPowerOfTwo { len, min_qubits })
    }
}

pub(crate) fn check_finite(values: &[f64], context: &'static str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            context,
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}
