//! Real-amplitude statevector simulator for the single circuit used here:
//! amplitude loading, a Hadamard gate on every qubit, then measurement in
//! the computational basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_finite, qubits_for_len, Error, Result};

/// Tolerance on `‖v‖₂ = 1` accepted by [`StateVector::prepare`].
pub const PREPARE_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<f64>,
    n: u32,
}

impl StateVector {
    /// Loads `v` as amplitudes. `v` must already be unit-norm.
    pub fn prepare(v: &[f64]) -> Result<Self> {
        let n = qubits_for_len(v.len(), 0)?;
        check_finite(v, "state amplitude")?;
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > PREPARE_NORM_TOLERANCE {
            return Err(Error::NonUnitNorm {
                norm,
                tolerance: PREPARE_NORM_TOLERANCE,
            });
        }
        Ok(Self {
            amplitudes: v.to_vec(),
            n,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize, n: u32) -> Result<Self> {
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, bound: dim });
        }
        let mut amplitudes = vec![0.0; dim];
        amplitudes[index] = 1.0;
        Ok(Self { amplitudes, n })
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Single-qubit Hadamard on `qubit` (bit `qubit` of the basis index).
    pub fn apply_hadamard(&mut self, qubit: u32) {
        let stride = 1usize << qubit;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (zero, one) = block.split_at_mut(stride);
            for (a0, a1) in zero.iter_mut().zip(one.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = h * (x + y);
                *a1 = h * (x - y);
            }
        }
    }

    /// `H^{⊗n}`: one Hadamard sweep per qubit.
    pub fn apply_hadamard_all(mut self) -> Self {
        for q in 0..self.n {
            self.apply_hadamard(q);
        }
        self
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    pub fn measure_exact(&self) -> MeasurementResult {
        MeasurementResult::Exact {
            probabilities: self.probabilities(),
        }
    }

    /// Draws `shots` independent computational-basis outcomes.
    pub fn measure_sampled(&self, shots: u64, seed: u64) -> Result<MeasurementResult> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let mut cdf = Vec::with_capacity(self.amplitudes.len());
        let mut acc = 0.0;
        for p in self.probabilities() {
            acc += p;
            cdf.push(acc);
        }
        // absorb rounding so every draw lands in some bin
        let total = acc;
        let last = cdf.len() - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; self.amplitudes.len()];
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let k = cdf.partition_point(|&c| c <= u).min(last);
            counts[k] += 1;
        }
        Ok(MeasurementResult::Sampled {
            counts,
            shots,
            seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementResult {
    Exact {
        probabilities: Vec<f64>,
    },
    Sampled {
        counts: Vec<u64>,
        shots: u64,
        seed: u64,
    },
}

impl MeasurementResult {
    /// Exact probabilities, or observed frequencies `counts/shots`.
    pub fn estimated_probabilities(&self) -> Vec<f64> {
        match self {
            MeasurementResult::Exact { probabilities } => probabilities.clone(),
            MeasurementResult::Sampled { counts, shots, .. } => {
                let shots = *shots as f64;
                counts.iter().map(|&c| c as f64 / shots).collect()
            }
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, MeasurementResult::Sampled { .. })
    }
}
