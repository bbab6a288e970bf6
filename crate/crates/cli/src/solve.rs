use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use wht_core::expr::Expr;
use wht_core::hybrid::MeasurementMode;
use wht_core::ode::{
    analytic_reference, builtin_problem, picard_solve, IVProblem, Rhs, SolutionTrace,
    SolverBackend, SolverConfig,
};
use wht_core::walsh::{midpoint_grid, SampledFunction};
use wht_core::Error as CoreError;

use crate::error::{CliError, CliResult};
use crate::io::{csv_string, ensure_dir, fmt_value};
use crate::report::RunReport;
use crate::{check_qubits, max_qubits, SolveArgs, SolveBackend};

fn build_problem(args: &SolveArgs, domain: (f64, f64)) -> CliResult<IVProblem> {
    match &args.problem {
        Some(name) => Ok(builtin_problem(name)?
            .with_resolution(args.n)?
            .with_domain(domain)?),
        None => {
            let m = args.rhs.len();
            if args.init.len() != m {
                return Err(CliError::Usage(format!(
                    "{m} right-hand sides but {} initial values",
                    args.init.len()
                )));
            }
            let rhs = args
                .rhs
                .iter()
                .map(|src| Expr::parse(src, m).map(|e| Box::new(e) as Box<dyn Rhs>))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CoreError::from)?;
            Ok(IVProblem::new(
                "custom",
                rhs,
                args.init.clone(),
                domain,
                args.n,
            )?)
        }
    }
}

fn solver_config(args: &SolveArgs) -> CliResult<SolverConfig> {
    let (backend, mode) = match args.backend {
        SolveBackend::Classical => (SolverBackend::Classical, MeasurementMode::Exact),
        SolveBackend::HybridExact => (SolverBackend::HybridExact, MeasurementMode::Exact),
        SolveBackend::HybridSampled => (SolverBackend::HybridSampled, MeasurementMode::Sampled),
    };
    Ok(SolverConfig {
        n_max: args.nmax,
        tol: args.tol,
        backend,
        hybrid: args.hybrid.config(mode)?,
    })
}

/// Analytic values at the midpoints, when the problem has a closed form
/// valid on the requested domain.
fn references(p: &IVProblem, builtin: bool, grid: &[f64]) -> Option<Vec<Vec<f64>>> {
    if !builtin || p.domain().0 != 0.0 {
        return None;
    }
    grid.iter()
        .map(|&t| analytic_reference(p.name(), t).ok())
        .collect()
}

fn write_solution(
    dir: &Path,
    p: &IVProblem,
    solution: &[SampledFunction],
    refs: Option<&[Vec<f64>]>,
) -> CliResult<(Vec<PathBuf>, Vec<f64>)> {
    let grid = midpoint_grid(p.domain(), p.len());
    let mut paths = Vec::new();
    let mut max_errors = Vec::new();
    for (i, x) in solution.iter().enumerate() {
        let mut worst: f64 = 0.0;
        let rows = grid.iter().enumerate().map(|(s, &t)| {
            let value = x.values()[s];
            let (reference, error) = match refs {
                Some(r) => {
                    let e = value - r[s][i];
                    worst = worst.max(e.abs());
                    (fmt_value(r[s][i]), fmt_value(e))
                }
                None => (String::new(), String::new()),
            };
            vec![fmt_value(t), fmt_value(value), reference, error]
        });
        let csv = csv_string(&["t", "x", "reference", "error"], rows.collect::<Vec<_>>())?;
        let path = dir.join(format!("{}_x{}.csv", p.name(), i + 1));
        std::fs::write(&path, csv).map_err(|e| CliError::io(&path, e))?;
        paths.push(path);
        max_errors.push(worst);
    }
    Ok((paths, max_errors))
}

fn write_trace(dir: &Path, p: &IVProblem, trace: &SolutionTrace) -> CliResult<PathBuf> {
    let grid = midpoint_grid(p.domain(), p.len());
    let mut rows = Vec::new();
    for (sweep, snapshot) in trace.snapshots.iter().enumerate() {
        for (i, x) in snapshot.iter().enumerate() {
            for (t, v) in grid.iter().zip(x) {
                rows.push(vec![
                    (sweep + 1).to_string(),
                    format!("x{}", i + 1),
                    fmt_value(*t),
                    fmt_value(*v),
                ]);
            }
        }
    }
    let csv = csv_string(&["sweep", "variable", "t", "x"], rows)?;
    let path = dir.join(format!("{}_trace.csv", p.name()));
    std::fs::write(&path, csv).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn run(args: &SolveArgs) -> CliResult<()> {
    check_qubits(args.n, max_qubits()?)?;
    let domain = match args.domain.as_deref() {
        Some([lo, hi]) => (*lo, *hi),
        Some(_) => return Err(CliError::Usage("--domain takes exactly two values".into())),
        None => (0.0, 1.0),
    };
    let problem = build_problem(args, domain)?;
    let cfg = solver_config(args)?;
    let dir = ensure_dir(&args.out_dir)?;

    let start = Instant::now();
    let (solution, trace) = match picard_solve(&problem, &cfg) {
        Ok(r) => r,
        Err(CoreError::Divergence {
            iteration,
            reason,
            trace,
        }) => {
            if args.trace {
                write_trace(&dir, &problem, &trace)?;
            }
            return Err(CoreError::Divergence {
                iteration,
                reason,
                trace,
            }
            .into());
        }
        Err(e) => return Err(e.into()),
    };
    let elapsed = start.elapsed().as_secs_f64();

    let grid = midpoint_grid(problem.domain(), problem.len());
    let refs = references(&problem, args.problem.is_some(), &grid);
    let (mut outputs, max_errors) = write_solution(&dir, &problem, &solution, refs.as_deref())?;
    if args.trace {
        outputs.push(write_trace(&dir, &problem, &trace)?);
    }

    let mut report = RunReport::new("solve");
    report.backend = Some(cfg.backend.to_string());
    report.n = Some(args.n);
    report.iterations = Some(trace.iterations_run);
    report.elapsed_seconds = elapsed;
    report.op_counts = Some(trace.ops.into());
    report.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
    report.details = json!({
        "problem": problem.name(),
        "m": problem.m(),
        "domain": [domain.0, domain.1],
        "converged": trace.converged,
        "residual": trace.residual,
        "max_abs_error": refs.as_ref().map(|_| max_errors),
    });
    report.emit(args.report.as_deref())
}
