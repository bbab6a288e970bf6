//! Classical Walsh-Hadamard transforms in the natural ordering.
//!
//! Both directions use the symmetric `1/sqrt(N)` normalization, so the
//! transform is unitary and its own inverse.

use std::ops::{Add, AddAssign};

use crate::error::{check_finite, qubits_for_len, Result};
use crate::walsh::{character_sign, SampledFunction, SpectralVector, WalshOrdering};

/// Arithmetic operation tally for one counting scope.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    /// Additions and subtractions.
    pub additions: u64,
    /// Multiplications and divisions.
    pub multiplications: u64,
    pub square_roots: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.additions + self.multiplications + self.square_roots
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        self.additions += rhs.additions;
        self.multiplications += rhs.multiplications;
        self.square_roots += rhs.square_roots;
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(mut self, rhs: Self) -> OpCount {
        self += rhs;
        self
    }
}

/// Dense `O(N^2)` transform straight from the character table.
pub fn wht_naive(v: &[f64]) -> Result<Vec<f64>> {
    qubits_for_len(v.len(), 0)?;
    let scale = 1.0 / (v.len() as f64).sqrt();
    Ok((0..v.len())
        .map(|k| {
            let sum: f64 = v
                .iter()
                .enumerate()
                .map(|(x, &vx)| f64::from(character_sign(k, x)) * vx)
                .sum();
            sum * scale
        })
        .collect())
}

/// In-place butterfly without the final scaling: computes `M v` for the
/// `±1` character matrix `M`. Exact whenever the sums are representable.
pub(crate) fn butterfly_unnormalized(data: &mut [f64], ops: &mut OpCount) {
    let len = data.len();
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        ops.additions += len as u64;
        half *= 2;
    }
}

/// In-place fast transform; tallies `N log2 N` additions and `N` scalings.
pub fn fwht_in_place(data: &mut [f64], ops: &mut OpCount) -> Result<()> {
    qubits_for_len(data.len(), 0)?;
    butterfly_unnormalized(data, ops);
    let scale = 1.0 / (data.len() as f64).sqrt();
    for x in data.iter_mut() {
        *x *= scale;
    }
    ops.multiplications += data.len() as u64;
    Ok(())
}

pub fn fwht_counted(v: &[f64]) -> Result<(Vec<f64>, OpCount)> {
    let mut out = v.to_vec();
    let mut ops = OpCount::default();
    fwht_in_place(&mut out, &mut ops)?;
    Ok((out, ops))
}

pub fn fwht(v: &[f64]) -> Result<Vec<f64>> {
    fwht_counted(v).map(|(out, _)| out)
}

/// Inverse transform. The normalized transform is an involution.
pub fn iwht(v: &[f64]) -> Result<Vec<f64>> {
    fwht(v)
}

/// Natural-ordered spectrum of a sampled function.
pub fn spectrum(f: &SampledFunction) -> Result<SpectralVector> {
    SpectralVector::new(fwht(f.values())?, WalshOrdering::Natural)
}

/// Samples on `domain` recovered from a spectrum in either ordering.
pub fn synthesize(s: &SpectralVector, domain: (f64, f64)) -> Result<SampledFunction> {
    let natural = s.reordered(WalshOrdering::Natural);
    let values = iwht(natural.coeffs())?;
    check_finite(&values, "synthesized sample")?;
    SampledFunction::new(values, domain)
}
