//! Walsh functions in natural (character) and sequency ordering.
//!
//! In the natural ordering row `k` of the transform matrix is the character
//! `χ_k(x) = (-1)^popcount(k & x)` of `(Z/2Z)^n`; the matrix is the n-fold
//! Kronecker power of `[[1, 1], [1, -1]]`. The sequency ordering sorts the
//! same functions by their number of sign changes on `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_finite, qubits_for_len, Error, Result};

/// Default cap on `n` for materialized `2^n x 2^n` tables.
pub const DEFAULT_MAX_QUBITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WalshOrdering {
    #[default]
    Natural,
    Sequency,
}

impl fmt::Display for WalshOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalshOrdering::Natural => f.write_str("natural"),
            WalshOrdering::Sequency => f.write_str("sequency"),
        }
    }
}

impl FromStr for WalshOrdering {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "natural" | "hadamard" => Ok(WalshOrdering::Natural),
            "sequency" | "walsh" => Ok(WalshOrdering::Sequency),
            other => Err(format!("unknown Walsh ordering `{other}`")),
        }
    }
}

fn check_index(index: usize, n: u32) -> Result<usize> {
    let bound = 1usize
        .checked_shl(n)
        .filter(|_| n < usize::BITS)
        .ok_or(Error::ResourceLimit {
            n,
            max: usize::BITS - 1,
        })?;
    if index < bound {
        Ok(bound)
    } else {
        Err(Error::IndexOutOfRange { index, bound })
    }
}

/// `χ_k(x) = (-1)^popcount(k & x)` for `k, x < 2^n`.
pub fn character_eval(k: usize, x: usize, n: u32) -> Result<i8> {
    check_index(k, n)?;
    check_index(x, n)?;
    Ok(character_sign(k, x))
}

#[inline]
pub(crate) fn character_sign(k: usize, x: usize) -> i8 {
    if (k & x).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Dense `N x N` matrix of `±1` entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    n: u32,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.dim() + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        let dim = self.dim();
        &self.entries[row * dim..(row + 1) * dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.dim())
    }
}

/// Character table of `(Z/2Z)^n` with the default resource cap.
pub fn character_table(n: u32) -> Result<SignMatrix> {
    character_table_capped(n, DEFAULT_MAX_QUBITS)
}

pub fn character_table_capped(n: u32, max_qubits: u32) -> Result<SignMatrix> {
    if n == 0 {
        return Err(Error::InvalidConfig(
            "character table needs at least one qubit".into(),
        ));
    }
    if n > max_qubits {
        return Err(Error::ResourceLimit { n, max: max_qubits });
    }
    let dim = 1usize << n;
    let mut entries = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        entries.extend((0..dim).map(|x| character_sign(k, x)));
    }
    Ok(SignMatrix { n, entries })
}

/// Cell index of `t` on the uniform `N`-cell partition of `[0, 1]`.
/// Cells are left-closed; `t = 1` belongs to the last cell.
fn cell_of(t: f64, dim: usize) -> Option<usize> {
    if !(0.0..=1.0).contains(&t) {
        return None;
    }
    Some(((t * dim as f64) as usize).min(dim - 1))
}

/// Value of Walsh function `k` at `t`, or 0 outside `[0, 1]`.
pub fn walsh_value(k: usize, t: f64, n: u32, ordering: WalshOrdering) -> Result<i8> {
    let dim = check_index(k, n)?;
    let natural = match ordering {
        WalshOrdering::Natural => k,
        WalshOrdering::Sequency => sequency_to_natural(k, n),
    };
    Ok(cell_of(t, dim).map_or(0, |cell| character_sign(natural, cell)))
}

/// Sequency-ordered Walsh function evaluated straight from the two-scale
/// recursion `W_{2j}(x) = W_j(2x) + (-1)^j W_j(2x-1)`,
/// `W_{2j+1}(x) = W_j(2x) - (-1)^j W_j(2x-1)`.
///
/// Independent of the permutation machinery; used as its oracle.
pub fn sequency_walsh_recursive(j: usize, x: f64) -> i8 {
    if !(0.0..=1.0).contains(&x) {
        return 0;
    }
    if j == 0 {
        return 1;
    }
    let half = j / 2;
    if x < 0.5 {
        sequency_walsh_recursive(half, 2.0 * x)
    } else {
        // second half carries (-1)^half, negated again for odd j
        let flip = (half % 2 == 1) ^ (j % 2 == 1);
        let v = sequency_walsh_recursive(half, 2.0 * x - 1.0);
        if flip {
            -v
        } else {
            v
        }
    }
}

fn reverse_bits(x: usize, n: u32) -> usize {
    if n == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - n)
    }
}

fn gray(x: usize) -> usize {
    x ^ (x >> 1)
}

fn gray_inverse(mut g: usize) -> usize {
    let mut shift = 1;
    while shift < usize::BITS {
        g ^= g >> shift;
        shift <<= 1;
    }
    g
}

/// Natural (Hadamard) index of the sequency-`s` Walsh function.
pub fn sequency_to_natural(s: usize, n: u32) -> usize {
    reverse_bits(gray(s), n)
}

/// Sequency of the natural-index-`k` Walsh function.
pub fn natural_to_sequency(k: usize, n: u32) -> usize {
    gray_inverse(reverse_bits(k, n))
}

/// Index map between orderings: `p[i]` is the index, in `to`, of the
/// function that has index `i` in `from`.
pub fn ordering_permutation(n: u32, from: WalshOrdering, to: WalshOrdering) -> Vec<usize> {
    let dim = 1usize << n;
    (0..dim)
        .map(|i| match (from, to) {
            (WalshOrdering::Natural, WalshOrdering::Sequency) => natural_to_sequency(i, n),
            (WalshOrdering::Sequency, WalshOrdering::Natural) => sequency_to_natural(i, n),
            _ => i,
        })
        .collect()
}

/// `sal_j = W_{2j-1}` in sequency ordering (`j >= 1`).
pub fn sal(j: usize) -> Option<usize> {
    (j >= 1).then(|| 2 * j - 1)
}

/// `cal_j = W_{2j}` in sequency ordering.
pub fn cal(j: usize) -> usize {
    2 * j
}

/// Function values at the `N` cell midpoints of `[t_lo, t_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    values: Vec<f64>,
    domain: (f64, f64),
    n: u32,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        let n = qubits_for_len(values.len(), 1)?;
        check_domain(domain)?;
        Ok(Self { values, domain, n })
    }

    /// Samples on the unit interval.
    pub fn unit(values: Vec<f64>) -> Result<Self> {
        Self::new(values, (0.0, 1.0))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn midpoint(&self, m: usize) -> f64 {
        midpoint(self.domain, self.len(), m)
    }

    pub fn midpoints(&self) -> Vec<f64> {
        midpoint_grid(self.domain, self.len())
    }
}

fn check_domain((lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidDomain { lo, hi })
    }
}

fn midpoint((lo, hi): (f64, f64), len: usize, m: usize) -> f64 {
    lo + (hi - lo) * (2 * m + 1) as f64 / (2 * len) as f64
}

/// Midpoints `t_m = t_lo + (t_hi - t_lo)(2m+1)/(2N)`.
pub fn midpoint_grid(domain: (f64, f64), len: usize) -> Vec<f64> {
    (0..len).map(|m| midpoint(domain, len, m)).collect()
}

/// Samples `f` at the `2^n` midpoints of `domain`.
pub fn discretize<F>(f: F, n: u32, domain: (f64, f64)) -> Result<SampledFunction>
where
    F: Fn(f64) -> f64,
{
    if n == 0 || n >= usize::BITS {
        return Err(Error::InvalidConfig(format!(
            "resolution exponent n = {n} out of range"
        )));
    }
    check_domain(domain)?;
    let values: Vec<f64> = midpoint_grid(domain, 1 << n).into_iter().map(f).collect();
    check_finite(&values, "sampled function value")?;
    SampledFunction::new(values, domain)
}

/// Walsh-domain coefficients as produced by the unitary transform
/// (`1/sqrt(N)` normalization).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    coeffs: Vec<f64>,
    ordering: WalshOrdering,
    n: u32,
}

impl SpectralVector {
    pub fn new(coeffs: Vec<f64>, ordering: WalshOrdering) -> Result<Self> {
        let n = qubits_for_len(coeffs.len(), 0)?;
        Ok(Self {
            coeffs,
            ordering,
            n,
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn ordering(&self) -> WalshOrdering {
        self.ordering
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Weights `c_k` of the expansion `f(t) = Σ c_k W_k(t)`, i.e. the
    /// coefficients divided by `sqrt(N)`.
    pub fn expansion_weights(&self) -> Vec<f64> {
        let scale = 1.0 / (self.len() as f64).sqrt();
        self.coeffs.iter().map(|c| c * scale).collect()
    }

    /// Same coefficients listed in another ordering.
    pub fn reordered(&self, to: WalshOrdering) -> Self {
        if to == self.ordering {
            return self.clone();
        }
        let perm = ordering_permutation(self.n, self.ordering, to);
        let mut coeffs = vec![0.0; self.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[perm[i]] = c;
        }
        Self {
            coeffs,
            ordering: to,
            n: self.n,
        }
    }
}

/// Evaluates `(1/sqrt(N)) Σ_k coeffs[k] W_k(t)` on the unit interval.
pub fn reconstruct(s: &SpectralVector, t: f64) -> f64 {
    let weights = s.expansion_weights();
    weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            // k < 2^n by construction
            let sign = walsh_value(k, t, s.n, s.ordering).unwrap_or(0);
            w * f64::from(sign)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sign_changes(row: &[i8]) -> usize {
        row.windows(2).filter(|w| w[0] != w[1]).count()
    }

    #[test]
    fn character_examples() {
        assert_eq!(character_eval(1, 1, 1).unwrap(), -1);
        for x in 0..8 {
            assert_eq!(character_eval(0, x, 3).unwrap(), 1);
        }
        assert_eq!(character_eval(3, 3, 2).unwrap(), 1);
        assert!(matches!(
            character_eval(4, 0, 2),
            Err(Error::IndexOutOfRange { index: 4, bound: 4 })
        ));
        assert!(character_eval(0, 9, 3).is_err());
    }

    #[test]
    fn small_character_tables() {
        let t1 = character_table(1).unwrap();
        assert_eq!(t1.row(0), &[1, 1]);
        assert_eq!(t1.row(1), &[1, -1]);

        let t2 = character_table(2).unwrap();
        let expected: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];
        for (row, want) in t2.rows().zip(expected.iter()) {
            assert_eq!(row, want);
        }
        assert!(character_table(3).unwrap().row(0).iter().all(|&s| s == 1));
    }

    #[test]
    fn character_table_is_kronecker_power() {
        let base = [[1i8, 1], [1, -1]];
        let mut kron = vec![vec![1i8]];
        for n in 1..=6u32 {
            let dim = kron.len() * 2;
            let mut next = vec![vec![0i8; dim]; dim];
            for (i, row) in next.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v =
                        base[i / kron.len()][j / kron.len()] * kron[i % kron.len()][j % kron.len()];
                }
            }
            kron = next;
            let table = character_table(n).unwrap();
            for (i, row) in kron.iter().enumerate() {
                assert_eq!(table.row(i), row.as_slice(), "n={n} row {i}");
            }
        }
    }

    #[test]
    fn character_table_cap() {
        assert!(matches!(
            character_table_capped(5, 4),
            Err(Error::ResourceLimit { n: 5, max: 4 })
        ));
        assert!(matches!(
            character_table(21),
            Err(Error::ResourceLimit { n: 21, max: 20 })
        ));
    }

    #[test]
    fn closure_under_products() {
        let table = character_table(4).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                for x in 0..16 {
                    assert_eq!(table.get(i, x) * table.get(j, x), table.get(i ^ j, x));
                }
            }
        }
    }

    #[test]
    fn walsh_value_examples() {
        assert_eq!(walsh_value(0, 0.3, 2, WalshOrdering::Natural).unwrap(), 1);
        assert_eq!(walsh_value(2, 0.6, 2, WalshOrdering::Natural).unwrap(), -1);
        assert_eq!(
            walsh_value(5, 0.9, 3, WalshOrdering::Sequency).unwrap(),
            sequency_walsh_recursive(5, 0.9)
        );
        // endpoints and outside
        assert_eq!(walsh_value(1, 1.0, 2, WalshOrdering::Natural).unwrap(), -1);
        assert_eq!(
            walsh_value(1, 1.0001, 2, WalshOrdering::Natural).unwrap(),
            0
        );
        assert_eq!(walsh_value(3, -0.1, 2, WalshOrdering::Sequency).unwrap(), 0);
        assert!(walsh_value(4, 0.5, 2, WalshOrdering::Natural).is_err());
    }

    #[test]
    fn recursive_definition_examples() {
        assert_eq!(sequency_walsh_recursive(0, 0.5), 1);
        assert_eq!(sequency_walsh_recursive(1, 0.75), -1);
        assert_eq!(sequency_walsh_recursive(1, 0.25), 1);
        assert_eq!(sequency_walsh_recursive(3, 1.5), 0);
        // W_6(0.1) = W_3(0.2) = W_1(0.4) = W_0(0.8)
        assert_eq!(sequency_walsh_recursive(3, 0.2), 1);
        assert_eq!(sequency_walsh_recursive(6, 0.1), 1);
    }

    #[test]
    fn permutation_small_cases() {
        assert_eq!(
            ordering_permutation(1, WalshOrdering::Natural, WalshOrdering::Sequency),
            vec![0, 1]
        );
        // zero crossings of Table 2 rows: [0, 3, 1, 2]
        let table = character_table(2).unwrap();
        let crossings: Vec<usize> = table.rows().map(sign_changes).collect();
        assert_eq!(crossings, vec![0, 3, 1, 2]);
        assert_eq!(
            ordering_permutation(2, WalshOrdering::Natural, WalshOrdering::Sequency),
            crossings
        );
    }

    #[test]
    fn permutation_round_trip_is_identity() {
        for n in 1..=10 {
            let fwd = ordering_permutation(n, WalshOrdering::Natural, WalshOrdering::Sequency);
            let back = ordering_permutation(n, WalshOrdering::Sequency, WalshOrdering::Natural);
            for (i, &p) in fwd.iter().enumerate() {
                assert_eq!(back[p], i);
            }
            let same = ordering_permutation(n, WalshOrdering::Sequency, WalshOrdering::Sequency);
            assert!(same.iter().enumerate().all(|(i, &p)| i == p));
        }
    }

    #[test]
    fn sequency_rows_match_recursion_n3_brute_force() {
        // match each recursive W_s against the table rows at midpoints
        let n = 3;
        let table = character_table(n).unwrap();
        for s in 0..8 {
            let samples: Vec<i8> = (0..8)
                .map(|m| sequency_walsh_recursive(s, (2 * m + 1) as f64 / 16.0))
                .collect();
            let matching: Vec<usize> = (0..8)
                .filter(|&k| table.row(k) == samples.as_slice())
                .collect();
            assert_eq!(matching, vec![sequency_to_natural(s, n)]);
        }
    }

    #[test]
    fn symmetry_of_sequency_functions() {
        for n in 1..=5u32 {
            let dim = 1usize << n;
            for s in 0..dim {
                for m in 0..dim {
                    let a = walsh_value(
                        s,
                        (2 * m + 1) as f64 / (2 * dim) as f64,
                        n,
                        WalshOrdering::Sequency,
                    )
                    .unwrap();
                    let b = walsh_value(
                        s,
                        (2 * (dim - 1 - m) + 1) as f64 / (2 * dim) as f64,
                        n,
                        WalshOrdering::Sequency,
                    )
                    .unwrap();
                    if s % 2 == 0 {
                        assert_eq!(a, b);
                    } else {
                        assert_eq!(a, -b);
                    }
                }
            }
        }
    }

    #[test]
    fn sal_cal_helpers() {
        assert_eq!(sal(0), None);
        assert_eq!(sal(1), Some(1));
        assert_eq!(sal(3), Some(5));
        assert_eq!(cal(0), 0);
        assert_eq!(cal(2), 4);
    }

    #[test]
    fn discretize_examples() {
        let f = discretize(|t| (PI * t).cos(), 2, (0.0, 1.0)).unwrap();
        let want = [PI / 8.0, 3.0 * PI / 8.0, 5.0 * PI / 8.0, 7.0 * PI / 8.0].map(f64::cos);
        assert_eq!(f.values(), &want);

        let t = discretize(|t| t, 2, (0.0, 1.0)).unwrap();
        assert_eq!(t.values(), &[0.125, 0.375, 0.625, 0.875]);

        let z = discretize(|_| 0.0, 3, (0.0, 1.0)).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));

        let shifted = discretize(|t| t, 1, (1.0, 3.0)).unwrap();
        assert_eq!(shifted.values(), &[1.5, 2.5]);
    }

    #[test]
    fn discretize_rejects_non_finite() {
        assert!(matches!(
            discretize(|t| 1.0 / (t - 0.125), 2, (0.0, 1.0)),
            Err(Error::NonFinite { index: 0, .. })
        ));
        assert!(discretize(|t| t, 2, (1.0, 1.0)).is_err());
    }

    #[test]
    fn sampled_function_requires_power_of_two() {
        assert!(SampledFunction::unit(vec![1.0; 3]).is_err());
        assert!(SampledFunction::unit(vec![1.0]).is_err());
        assert!(SampledFunction::unit(vec![1.0; 8]).is_ok());
    }

    #[test]
    fn reconstruct_ramp_expansion() {
        let s = SpectralVector::new(vec![0.0, 0.54, 1.305, 0.0], WalshOrdering::Natural).unwrap();
        let w1 = f64::from(walsh_value(1, 0.3, 2, WalshOrdering::Natural).unwrap());
        let w2 = f64::from(walsh_value(2, 0.3, 2, WalshOrdering::Natural).unwrap());
        let want = 0.25 * (1.08 * w1 + 2.61 * w2);
        assert!((reconstruct(&s, 0.3) - want).abs() < 1e-15);

        let zero = SpectralVector::new(vec![0.0; 8], WalshOrdering::Sequency).unwrap();
        for t in [0.0, 0.2, 0.5, 1.0] {
            assert_eq!(reconstruct(&zero, t), 0.0);
        }
    }

    #[test]
    fn reorder_preserves_reconstruction() {
        let s = SpectralVector::new(
            vec![0.3, -1.0, 2.0, 0.5, 0.25, -0.75, 1.5, 0.0],
            WalshOrdering::Natural,
        )
        .unwrap();
        let q = s.reordered(WalshOrdering::Sequency);
        for m in 0..8 {
            let t = (2 * m + 1) as f64 / 16.0;
            assert!((reconstruct(&s, t) - reconstruct(&q, t)).abs() < 1e-14);
        }
        assert_eq!(q.reordered(WalshOrdering::Natural), s);
    }
}
