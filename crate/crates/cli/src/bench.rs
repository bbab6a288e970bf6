use std::time::{Duration, Instant};

use serde_json::json;
use wht_core::hybrid::{hybrid_wht, HybridConfig};
use wht_core::transform::{fwht_counted, wht_naive};
use wht_core::OpCount;

use crate::error::{CliError, CliResult};
use crate::io::{csv_string, write_output};
use crate::report::RunReport;
use crate::transform::naive_opcount;
use crate::{check_qubits, max_qubits, BenchArgs, BenchBackend};

pub const HEADER: [&str; 7] = [
    "N",
    "backend",
    "additions",
    "multiplications",
    "square_roots",
    "total",
    "wall_time_s",
];

fn backend_name(b: BenchBackend) -> &'static str {
    match b {
        BenchBackend::Naive => "naive",
        BenchBackend::Fast => "fast",
        BenchBackend::HybridExact => "hybrid-exact",
    }
}

/// Fixed input so repeated runs see identical data.
fn input(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| ((i * 7919) % 1000) as f64 / 1000.0 - 0.5)
        .collect()
}

/// Operation counts of one transform; for the hybrid backend only the
/// classical pre- and post-processing is counted.
fn run_once(backend: BenchBackend, v: &[f64]) -> CliResult<OpCount> {
    Ok(match backend {
        BenchBackend::Naive => {
            wht_naive(v)?;
            naive_opcount(v.len())
        }
        BenchBackend::Fast => fwht_counted(v)?.1,
        BenchBackend::HybridExact => hybrid_wht(v, &HybridConfig::exact())?.1.ops,
    })
}

pub fn run(args: &BenchArgs) -> CliResult<()> {
    if args.repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let cap = max_qubits()?;
    for &len in &args.sizes {
        if !len.is_power_of_two() {
            return Err(CliError::Usage(format!("size {len} is not a power of two")));
        }
        check_qubits(len.trailing_zeros(), cap)?;
    }

    let start = Instant::now();
    let mut rows = Vec::new();
    for &backend in &args.backend {
        for &len in &args.sizes {
            let v = input(len);
            let mut best = Duration::MAX;
            let mut counts = None;
            for _ in 0..args.repeats {
                let t0 = Instant::now();
                let ops = run_once(backend, &v)?;
                best = best.min(t0.elapsed());
                debug_assert!(counts.is_none_or(|c| c == ops));
                counts = Some(ops);
            }
            let ops = counts.unwrap_or_default();
            rows.push(vec![
                len.to_string(),
                backend_name(backend).to_string(),
                ops.additions.to_string(),
                ops.multiplications.to_string(),
                ops.square_roots.to_string(),
                ops.total().to_string(),
                format!("{:.9}", best.as_secs_f64()),
            ]);
        }
    }
    let csv = csv_string(&HEADER, rows)?;
    write_output(args.output.as_deref(), &csv)?;

    let mut report = RunReport::new("bench");
    report.backend = Some(
        args.backend
            .iter()
            .map(|b| backend_name(*b))
            .collect::<Vec<_>>()
            .join(","),
    );
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    report.outputs = args
        .output
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    report.details = json!({ "sizes": args.sizes, "repeats": args.repeats });
    report.emit(args.report.as_deref())
}
