use std::time::Instant;

use serde_json::json;
use wht_core::hybrid::{hybrid_wht, MeasurementMode};
use wht_core::transform::{fwht_counted, wht_naive};
use wht_core::OpCount;

use crate::error::{CliError, CliResult};
use crate::io::{format_vector, read_vector, write_output};
use crate::report::RunReport;
use crate::{check_qubits, max_qubits, TransformArgs, TransformBackend};

/// Counts for the dense transform: `N - 1` additions and `N` sign
/// multiplications per output, plus the `N` final scalings.
pub fn naive_opcount(len: usize) -> OpCount {
    let len = len as u64;
    OpCount {
        additions: len * (len - 1),
        multiplications: len * len + len,
        square_roots: 0,
    }
}

pub fn backend_name(b: TransformBackend) -> &'static str {
    match b {
        TransformBackend::Naive => "naive",
        TransformBackend::Fast => "fast",
        TransformBackend::HybridExact => "hybrid-exact",
        TransformBackend::HybridSampled => "hybrid-sampled",
    }
}

pub fn run(args: &TransformArgs) -> CliResult<()> {
    let input = read_vector(&args.input)?;
    if !input.len().is_power_of_two() {
        return Err(CliError::Usage(format!(
            "{}: {} values is not a power of two",
            args.input.display(),
            input.len()
        )));
    }
    let n = input.len().trailing_zeros();
    check_qubits(n, max_qubits()?)?;

    // The normalized transform is an involution, so --inverse applies the
    // same operator; the flag is recorded in the report.
    let start = Instant::now();
    let (output, ops, details) = match args.backend {
        TransformBackend::Naive => (wht_naive(&input)?, naive_opcount(input.len()), json!({})),
        TransformBackend::Fast => {
            let (out, ops) = fwht_counted(&input)?;
            (out, ops, json!({}))
        }
        TransformBackend::HybridExact | TransformBackend::HybridSampled => {
            let mode = if args.backend == TransformBackend::HybridExact {
                MeasurementMode::Exact
            } else {
                MeasurementMode::Sampled
            };
            let cfg = args.hybrid.config(mode)?;
            let (out, trace) = hybrid_wht(&input, &cfg)?;
            let flagged: Vec<usize> = trace
                .sub_resolution
                .iter()
                .enumerate()
                .filter_map(|(k, &f)| f.then_some(k))
                .collect();
            let details = json!({
                "epsilon": trace.epsilon,
                "b0": trace.b0,
                "c": trace.c,
                "delta": trace.delta,
                "shots": cfg.shots,
                "seed": (mode == MeasurementMode::Sampled).then_some(cfg.seed),
                "sub_resolution": flagged,
            });
            (out, trace.ops, details)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    write_output(args.output.as_deref(), &format_vector(&output))?;

    let mut report = RunReport::new("transform");
    report.backend = Some(backend_name(args.backend).to_string());
    report.n = Some(n);
    report.elapsed_seconds = elapsed;
    report.op_counts = Some(ops.into());
    report.outputs = args
        .output
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    report.details = json!({ "inverse": args.inverse, "input": args.input.display().to_string(), "hybrid": details });
    report.emit(args.report.as_deref())
}
