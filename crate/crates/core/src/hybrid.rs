//! Sign-safe Walsh-Hadamard transform through the simulated quantum
//! register.
//!
//! Measurement only yields `|amplitude|²`, so signs are lost. Replacing the
//! first input component by `b0 = ε + Σ|a_k|` makes every transformed
//! component strictly positive; the shift only adds the constant
//! `δ = (b0 - a0)/sqrt(N)` to each output component, which is removed
//! classically afterwards.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_finite, qubits_for_len, Error, Result};
use crate::quantum::{MeasurementResult, StateVector};
use crate::transform::OpCount;

pub const DEFAULT_SEED: u64 = 0x5EED_2023;

/// Relative factor of the default shift margin `ε = 1e-3 (1 + Σ|a_k|)`.
pub const DEFAULT_EPSILON_FACTOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasurementMode {
    #[default]
    Exact,
    Sampled,
}

impl fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementMode::Exact => f.write_str("exact"),
            MeasurementMode::Sampled => f.write_str("sampled"),
        }
    }
}

impl FromStr for MeasurementMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(MeasurementMode::Exact),
            "sampled" => Ok(MeasurementMode::Sampled),
            other => Err(format!("unknown measurement mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridConfig {
    /// Shift margin; `None` selects `1e-3 (1 + Σ|a_k|)` per input.
    pub epsilon: Option<f64>,
    pub mode: MeasurementMode,
    pub shots: Option<u64>,
    pub seed: u64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self::exact()
    }
}

impl HybridConfig {
    pub fn exact() -> Self {
        Self {
            epsilon: None,
            mode: MeasurementMode::Exact,
            shots: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn sampled(shots: u64, seed: u64) -> Self {
        Self {
            epsilon: None,
            mode: MeasurementMode::Sampled,
            shots: Some(shots),
            seed,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if let Some(eps) = self.epsilon {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(Error::InvalidEpsilon(eps));
            }
        }
        if self.mode == MeasurementMode::Sampled {
            match self.shots {
                None => return Err(Error::MissingShots),
                Some(0) => return Err(Error::ZeroShots),
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// Intermediate quantities of one hybrid transform.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridTrace {
    pub epsilon: f64,
    pub b0: f64,
    /// `‖ṽ‖₂` of the shifted vector.
    pub c: f64,
    pub delta: f64,
    pub probabilities: Vec<f64>,
    pub output: Vec<f64>,
    /// Sampled mode only: components with `|c sqrt(p_k) - δ| < c/sqrt(shots)`.
    pub sub_resolution: Vec<bool>,
    /// Classical pre/post-processing work.
    pub ops: OpCount,
}

/// True iff `v[0] > Σ_{k>=1} |v[k]|`, which makes every component of the
/// transform strictly positive.
pub fn sign_safe(v: &[f64]) -> bool {
    match v.split_first() {
        Some((first, rest)) => *first > rest.iter().map(|x| x.abs()).sum::<f64>(),
        None => false,
    }
}

/// Walsh-Hadamard transform of an arbitrary real vector via the shifted,
/// normalized state, an `H^{⊗n}` layer and probability measurement.
pub fn hybrid_wht(v: &[f64], cfg: &HybridConfig) -> Result<(Vec<f64>, HybridTrace)> {
    qubits_for_len(v.len(), 0)?;
    check_finite(v, "hybrid transform input")?;
    cfg.validate()?;

    let len = v.len();
    let mut ops = OpCount::default();

    let abs_sum: f64 = v.iter().map(|a| a.abs()).sum();
    let epsilon = cfg
        .epsilon
        .unwrap_or(DEFAULT_EPSILON_FACTOR * (1.0 + abs_sum));
    // b0 = ε + Σ_k |a_k|
    let b0 = epsilon + abs_sum;
    ops.additions += len as u64;

    let c = (b0 * b0 + v[1..].iter().map(|a| a * a).sum::<f64>()).sqrt();
    ops.multiplications += len as u64;
    ops.additions += len as u64 - 1;
    ops.square_roots += 1;

    let mut shifted = Vec::with_capacity(len);
    shifted.push(b0 / c);
    shifted.extend(v[1..].iter().map(|a| a / c));
    ops.multiplications += len as u64;

    let state = StateVector::prepare(&shifted)?.apply_hadamard_all();
    let measurement = match cfg.mode {
        MeasurementMode::Exact => state.measure_exact(),
        MeasurementMode::Sampled => {
            // validated above
            let shots = cfg.shots.unwrap_or(1);
            state.measure_sampled(shots, cfg.seed)?
        }
    };
    let probabilities = measurement.estimated_probabilities();
    if measurement.is_sampled() {
        ops.multiplications += len as u64;
    }

    let delta = (b0 - v[0]) * (1.0 / (len as f64).sqrt());
    ops.additions += 1;
    ops.multiplications += 1;

    let output: Vec<f64> = probabilities.iter().map(|p| c * p.sqrt() - delta).collect();
    ops.square_roots += len as u64;
    ops.multiplications += len as u64;
    ops.additions += len as u64;

    let sub_resolution = match measurement {
        MeasurementResult::Sampled { shots, .. } => {
            let floor = c / (shots as f64).sqrt();
            output.iter().map(|x| x.abs() < floor).collect()
        }
        MeasurementResult::Exact { .. } => vec![false; len],
    };

    let trace = HybridTrace {
        epsilon,
        b0,
        c,
        delta,
        probabilities,
        output: output.clone(),
        sub_resolution,
        ops,
    };
    Ok((output, trace))
}

/// Classical-side operation count of an exact-mode [`hybrid_wht`] call on a
/// length-`len` input. Counts do not depend on the input values.
pub fn classical_side_opcount(len: usize) -> Result<OpCount> {
    qubits_for_len(len, 0)?;
    let (_, trace) = hybrid_wht(&vec![0.0; len], &HybridConfig::exact())?;
    Ok(trace.ops)
}
