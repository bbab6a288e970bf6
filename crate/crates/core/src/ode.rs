//! Picard iteration for `dx_i/dt = f_i(x_1..x_m, t)`, `x_i(t_lo) = q_i`, in
//! integral form: every sweep sets `x_i = q_i + ∫ f_i(x_prev, s) ds` with the
//! integral taken through the Walsh integration matrix.

use std::fmt;
use std::str::FromStr;

use crate::calculus::{integrate_sampled_counted, IntegrationBackend};
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::hybrid::{HybridConfig, MeasurementMode};
use crate::transform::OpCount;
use crate::walsh::{midpoint_grid, SampledFunction, DEFAULT_MAX_QUBITS};

/// Magnitude above which an iterate is treated as divergent.
pub const DIVERGENCE_CAP: f64 = 1e12;

pub const DEFAULT_TOL: f64 = 1e-12;

/// One component `f_i` of the right-hand side.
pub trait Rhs: Send + Sync {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, EvalError>;
}

impl Rhs for Expr {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, EvalError> {
        Expr::eval(self, x, t)
    }
}

struct NativeRhs<F>(F);

impl<F> Rhs for NativeRhs<F>
where
    F: Fn(&[f64], f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, EvalError> {
        Ok((self.0)(x, t))
    }
}

/// Wraps a plain closure as an [`Rhs`].
pub fn rhs_fn<F>(f: F) -> Box<dyn Rhs>
where
    F: Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
{
    Box::new(NativeRhs(f))
}

pub struct IVProblem {
    name: String,
    rhs: Vec<Box<dyn Rhs>>,
    initial: Vec<f64>,
    domain: (f64, f64),
    n: u32,
}

impl fmt::Debug for IVProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IVProblem")
            .field("name", &self.name)
            .field("m", &self.rhs.len())
            .field("initial", &self.initial)
            .field("domain", &self.domain)
            .field("n", &self.n)
            .finish()
    }
}

impl IVProblem {
    pub fn new(
        name: impl Into<String>,
        rhs: Vec<Box<dyn Rhs>>,
        initial: Vec<f64>,
        domain: (f64, f64),
        n: u32,
    ) -> Result<Self> {
        if rhs.is_empty() {
            return Err(Error::InvalidProblem(
                "at least one equation is required".into(),
            ));
        }
        if rhs.len() != initial.len() {
            return Err(Error::InvalidProblem(format!(
                "{} right-hand sides but {} initial values",
                rhs.len(),
                initial.len()
            )));
        }
        if let Some(q) = initial.iter().find(|q| !q.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "non-finite initial value {q}"
            )));
        }
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidDomain { lo, hi });
        }
        check_resolution(n)?;
        Ok(Self {
            name: name.into(),
            rhs,
            initial,
            domain,
            n,
        })
    }

    pub fn with_resolution(mut self, n: u32) -> Result<Self> {
        check_resolution(n)?;
        self.n = n;
        Ok(self)
    }

    pub fn with_domain(mut self, domain: (f64, f64)) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidDomain { lo, hi });
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn m(&self) -> usize {
        self.rhs.len()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn check_resolution(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidProblem(
            "resolution exponent n must be >= 1".into(),
        ));
    }
    if n > DEFAULT_MAX_QUBITS {
        return Err(Error::ResourceLimit {
            n,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverBackend {
    #[default]
    Classical,
    HybridExact,
    HybridSampled,
}

impl fmt::Display for SolverBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverBackend::Classical => "classical",
            SolverBackend::HybridExact => "hybrid-exact",
            SolverBackend::HybridSampled => "hybrid-sampled",
        })
    }
}

impl FromStr for SolverBackend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "classical" => Ok(SolverBackend::Classical),
            "hybrid-exact" => Ok(SolverBackend::HybridExact),
            "hybrid-sampled" => Ok(SolverBackend::HybridSampled),
            other => Err(format!("unknown solver backend `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub n_max: usize,
    pub tol: f64,
    pub backend: SolverBackend,
    /// Shift margin, shots and seed for the hybrid backends. The mode field
    /// is overridden by `backend`.
    pub hybrid: HybridConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_max: 20,
            tol: DEFAULT_TOL,
            backend: SolverBackend::Classical,
            hybrid: HybridConfig::exact(),
        }
    }
}

impl SolverConfig {
    /// Runs exactly `n_max` sweeps (tolerance 0 never triggers).
    pub fn sweeps(n_max: usize) -> Self {
        Self {
            n_max,
            tol: 0.0,
            ..Self::default()
        }
    }

    pub fn with_backend(mut self, backend: SolverBackend) -> Self {
        self.backend = backend;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::InvalidConfig("n_max must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tol must be >= 0, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// Integration backend for the `call`-th integral of the run. Sampled
    /// runs advance the seed per call so the shot noise is not replayed.
    fn integration_backend(&self, call: u64) -> IntegrationBackend {
        match self.backend {
            SolverBackend::Classical => IntegrationBackend::Classical,
            SolverBackend::HybridExact => IntegrationBackend::Hybrid(HybridConfig {
                mode: MeasurementMode::Exact,
                ..self.hybrid.clone()
            }),
            SolverBackend::HybridSampled => IntegrationBackend::Hybrid(HybridConfig {
                mode: MeasurementMode::Sampled,
                seed: self.hybrid.seed.wrapping_add(call),
                ..self.hybrid.clone()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace {
    /// `snapshots[sweep][var]` holds the midpoint samples after each sweep.
    pub snapshots: Vec<Vec<Vec<f64>>>,
    pub iterations_run: usize,
    pub converged: bool,
    /// `max_i ‖x_i^{new} - x_i^{old}‖∞` of the last sweep.
    pub residual: f64,
    pub ops: OpCount,
}

/// Solves `p` by Jacobi-style Picard sweeps starting from `x_i ≡ q_i`.
pub fn picard_solve(
    p: &IVProblem,
    cfg: &SolverConfig,
) -> Result<(Vec<SampledFunction>, SolutionTrace)> {
    cfg.validate()?;
    let len = p.len();
    let grid = midpoint_grid(p.domain, len);
    let mut current: Vec<Vec<f64>> = p.initial.iter().map(|&q| vec![q; len]).collect();
    let mut trace = SolutionTrace {
        snapshots: Vec::new(),
        iterations_run: 0,
        converged: false,
        residual: f64::INFINITY,
        ops: OpCount::default(),
    };
    let mut state = vec![0.0; p.m()];
    let mut calls = 0u64;

    for sweep in 1..=cfg.n_max {
        let diverged = |trace: &SolutionTrace, reason: String| Error::Divergence {
            iteration: sweep,
            reason,
            trace: Box::new(trace.clone()),
        };

        let mut next = Vec::with_capacity(p.m());
        for (i, f) in p.rhs.iter().enumerate() {
            let mut values = Vec::with_capacity(len);
            for (s, &t) in grid.iter().enumerate() {
                for (slot, x) in state.iter_mut().zip(&current) {
                    *slot = x[s];
                }
                let v = f
                    .eval(&state, t)
                    .map_err(|e| diverged(&trace, format!("f{} at t = {t}: {e}", i + 1)))?;
                if !v.is_finite() {
                    return Err(diverged(&trace, format!("f{} is {v} at t = {t}", i + 1)));
                }
                values.push(v);
            }
            let sampled = SampledFunction::new(values, p.domain)?;
            let backend = cfg.integration_backend(calls);
            calls += 1;
            let integral = integrate_sampled_counted(&sampled, &backend, &mut trace.ops)?;
            let q = p.initial[i];
            next.push(
                integral
                    .into_values()
                    .into_iter()
                    .map(|v| q + v)
                    .collect::<Vec<f64>>(),
            );
        }

        let residual = next
            .iter()
            .zip(&current)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        trace.snapshots.push(next.clone());
        trace.iterations_run = sweep;
        trace.residual = residual;
        current = next;

        if let Some(v) = current
            .iter()
            .flatten()
            .find(|v| v.is_nan() || v.abs() > DIVERGENCE_CAP)
        {
            return Err(diverged(
                &trace,
                format!("iterate magnitude {v} exceeds {DIVERGENCE_CAP:e}"),
            ));
        }
        if residual < cfg.tol {
            trace.converged = true;
            break;
        }
    }

    let solution = current
        .into_iter()
        .map(|v| SampledFunction::new(v, p.domain))
        .collect::<Result<Vec<_>>>()?;
    Ok((solution, trace))
}

pub const BUILTIN_PROBLEMS: [&str; 2] = ["riccati", "beer_system"];

/// Default resolution exponent of the built-in problems (`N = 4`).
pub const BUILTIN_DEFAULT_N: u32 = 2;

pub fn builtin_problem(name: &str) -> Result<IVProblem> {
    match name {
        "riccati" => IVProblem::new(
            name,
            vec![rhs_fn(|x, _| x[0].powi(2) + x[0] + 1.0)],
            vec![-0.5],
            (0.0, 1.0),
            BUILTIN_DEFAULT_N,
        ),
        "beer_system" => IVProblem::new(
            name,
            vec![
                rhs_fn(|x, _| x[1]),
                rhs_fn(|x, _| -(3.0 * x[0] * x[1] + x[0].powi(3))),
            ],
            vec![0.0, 1.0],
            (0.0, 1.0),
            BUILTIN_DEFAULT_N,
        ),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// Right-hand sides of the built-in problems in the expression language.
pub fn builtin_rhs_source(name: &str) -> Result<&'static [&'static str]> {
    match name {
        "riccati" => Ok(&["x1^2 + x1 + 1"]),
        "beer_system" => Ok(&["x2", "-(3*x1*x2 + x1^3)"]),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// Closed-form solution of a built-in problem.
pub fn analytic_reference(name: &str, t: f64) -> Result<Vec<f64>> {
    match name {
        "riccati" => {
            let r3 = 3f64.sqrt();
            Ok(vec![0.5 * (r3 * (r3 * t / 2.0).tan() - 1.0)])
        }
        "beer_system" => {
            let d = t * t + 2.0;
            Ok(vec![2.0 * t / d, (4.0 - 2.0 * t * t) / (d * d)])
        }
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}
