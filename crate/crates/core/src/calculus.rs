//! Walsh-domain operational matrices in the natural ordering.
//!
//! `J` is the midpoint antiderivative operator on `N` cells: for a
//! piecewise-constant `f`, `(J f)[m] = ∫_0^{t_m} f`. The integration matrix
//! is its conjugate `I_N = H J H` by the normalized Hadamard matrix, and the
//! differentiation matrix is `D_N = H J⁻¹ H = I_N⁻¹`. Every entry of both is
//! a dyadic rational, so they are built exactly with the `±1` butterfly and
//! a final division by `N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{qubits_for_len, Error, Result};
use crate::hybrid::{hybrid_wht, HybridConfig};
use crate::transform::{butterfly_unnormalized, fwht_in_place, OpCount};
use crate::walsh::{SampledFunction, SpectralVector, WalshOrdering, DEFAULT_MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Integration,
    Differentiation,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::Integration => f.write_str("integration"),
            MatrixKind::Differentiation => f.write_str("differentiation"),
        }
    }
}

/// Sparse row-compressed `N x N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationalMatrix {
    kind: MatrixKind,
    n: u32,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl OperationalMatrix {
    fn from_columns(kind: MatrixKind, n: u32, columns: &[Vec<f64>]) -> Self {
        let dim = columns.len();
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_start.push(0);
        for r in 0..dim {
            for (c, column) in columns.iter().enumerate() {
                let v = column[r];
                if v != 0.0 {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_start.push(cols.len());
        }
        Self {
            kind,
            n,
            row_start,
            cols,
            values,
        }
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero `(column, value)` pairs of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_start[r]..self.row_start[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r)
            .find(|&(col, _)| col == c)
            .map_or(0.0, |(_, v)| v)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        (0..dim)
            .map(|r| {
                let mut row = vec![0.0; dim];
                for (c, v) in self.row(r) {
                    row[c] = v;
                }
                row
            })
            .collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_counted(x, &mut OpCount::default())
    }

    fn apply_counted(&self, x: &[f64], ops: &mut OpCount) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "operand length must match matrix size");
        ops.multiplications += self.nnz() as u64;
        ops.additions += self.nnz().saturating_sub(self.dim()) as u64;
        (0..self.dim())
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }
}

fn check_resolution(len: usize) -> Result<u32> {
    let n = qubits_for_len(len, 1)?;
    if n > DEFAULT_MAX_QUBITS {
        return Err(Error::ResourceLimit {
            n,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    Ok(n)
}

/// Dense midpoint antiderivative operator: `J[m][j] = 1/N` for `j < m`,
/// `1/(2N)` for `j = m`, `0` above the diagonal.
pub fn time_integration_operator(len: usize) -> Result<Vec<Vec<f64>>> {
    check_resolution(len)?;
    let (full, half) = (1.0 / len as f64, 0.5 / len as f64);
    Ok((0..len)
        .map(|m| {
            (0..len)
                .map(|j| match j.cmp(&m) {
                    std::cmp::Ordering::Less => full,
                    std::cmp::Ordering::Equal => half,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect())
}

/// `J f` in `O(N)`.
fn apply_time_integration(f: &[f64]) -> Vec<f64> {
    let len = f.len() as f64;
    let mut acc = 0.0;
    f.iter()
        .map(|&v| {
            let out = acc + v / (2.0 * len);
            acc += v / len;
            out
        })
        .collect()
}

/// `J⁻¹ x` by forward substitution on the lower-triangular `J`.
fn apply_inverse_time_integration(x: &[f64]) -> Vec<f64> {
    let len = x.len() as f64;
    let mut prefix = 0.0;
    x.iter()
        .map(|&v| {
            let y = 2.0 * len * (v - prefix / len);
            prefix += y;
            y
        })
        .collect()
}

/// `M T M / N` where `M` is the `±1` character matrix, column by column.
fn conjugate(n: u32, kind: MatrixKind, op: fn(&[f64]) -> Vec<f64>) -> OperationalMatrix {
    let dim = 1usize << n;
    let mut scratch = OpCount::default();
    let columns: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            butterfly_unnormalized(&mut e, &mut scratch);
            let mut col = op(&e);
            butterfly_unnormalized(&mut col, &mut scratch);
            for v in col.iter_mut() {
                *v /= dim as f64;
            }
            col
        })
        .collect();
    OperationalMatrix::from_columns(kind, n, &columns)
}

type MatrixCache = HashMap<(MatrixKind, u32), Arc<OperationalMatrix>>;

fn memo() -> &'static Mutex<MatrixCache> {
    static CACHE: OnceLock<Mutex<MatrixCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: MatrixKind, len: usize) -> Result<Arc<OperationalMatrix>> {
    let n = check_resolution(len)?;
    if let Some(m) = memo()
        .lock()
        .expect("matrix cache poisoned")
        .get(&(kind, n))
    {
        return Ok(Arc::clone(m));
    }
    let built = Arc::new(match kind {
        MatrixKind::Integration => conjugate(n, kind, apply_time_integration),
        MatrixKind::Differentiation => conjugate(n, kind, apply_inverse_time_integration),
    });
    let mut cache = memo().lock().expect("matrix cache poisoned");
    Ok(Arc::clone(cache.entry((kind, n)).or_insert(built)))
}

/// Walsh-domain integration matrix `I_N` (natural ordering).
pub fn integration_matrix(len: usize) -> Result<Arc<OperationalMatrix>> {
    cached(MatrixKind::Integration, len)
}

/// Walsh-domain differentiation matrix `D_N = I_N⁻¹`.
pub fn differentiation_matrix(len: usize) -> Result<Arc<OperationalMatrix>> {
    cached(MatrixKind::Differentiation, len)
}

/// Applies `I_N` to a spectrum; the result is the spectrum of the
/// antiderivative on the unit interval.
pub fn integrate_spectrum(s: &SpectralVector) -> Result<SpectralVector> {
    let natural = s.reordered(WalshOrdering::Natural);
    let matrix = integration_matrix(natural.len())?;
    SpectralVector::new(matrix.apply(natural.coeffs()), WalshOrdering::Natural)
}

/// Transform used on both sides of the integration matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum IntegrationBackend {
    #[default]
    Classical,
    Hybrid(HybridConfig),
}

impl IntegrationBackend {
    fn transform(&self, v: &[f64], ops: &mut OpCount) -> Result<Vec<f64>> {
        match self {
            IntegrationBackend::Classical => {
                let mut out = v.to_vec();
                fwht_in_place(&mut out, ops)?;
                Ok(out)
            }
            IntegrationBackend::Hybrid(cfg) => {
                let (out, trace) = hybrid_wht(v, cfg)?;
                *ops += trace.ops;
                Ok(out)
            }
        }
    }
}

/// Midpoint samples of `∫_{t_lo}^{t} f`, computed as `H(I_N H(f))` and
/// rescaled by the domain length.
pub fn integrate_sampled(
    f: &SampledFunction,
    backend: &IntegrationBackend,
) -> Result<SampledFunction> {
    integrate_sampled_counted(f, backend, &mut OpCount::default())
}

pub fn integrate_sampled_counted(
    f: &SampledFunction,
    backend: &IntegrationBackend,
    ops: &mut OpCount,
) -> Result<SampledFunction> {
    let matrix = integration_matrix(f.len())?;
    let spectrum = backend.transform(f.values(), ops)?;
    let integrated = matrix.apply_counted(&spectrum, ops);
    let mut values = backend.transform(&integrated, ops)?;
    let (lo, hi) = f.domain();
    let width = hi - lo;
    if width != 1.0 {
        for v in values.iter_mut() {
            *v *= width;
        }
        ops.multiplications += values.len() as u64;
    }
    SampledFunction::new(values, f.domain())
}
