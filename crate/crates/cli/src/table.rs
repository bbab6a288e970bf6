use wht_core::calculus::{differentiation_matrix, integration_matrix};
use wht_core::walsh::character_table_capped;

use crate::error::{CliError, CliResult};
use crate::io::{fmt_value, write_output};
use crate::{check_qubits, max_qubits, TableArgs, TableKind};

/// Headerless CSV of exact matrix entries, one matrix row per line.
pub fn render(kind: TableKind, n: u32, cap: u32) -> CliResult<String> {
    check_qubits(n, cap)?;
    let rows: Vec<Vec<String>> = match kind {
        TableKind::Character => character_table_capped(n, cap)?
            .rows()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect(),
        TableKind::Integration | TableKind::Differentiation => {
            if n == 0 {
                return Err(CliError::Usage("operational matrices need n >= 1".into()));
            }
            let m = if kind == TableKind::Integration {
                integration_matrix(1 << n)?
            } else {
                differentiation_matrix(1 << n)?
            };
            (0..m.dim())
                .map(|r| {
                    let mut row = vec![fmt_value(0.0); m.dim()];
                    for (c, v) in m.row(r) {
                        row[c] = fmt_value(v);
                    }
                    row
                })
                .collect()
        }
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn run(args: &TableArgs) -> CliResult<()> {
    let csv = render(args.kind, args.n, max_qubits()?)?;
    write_output(args.output.as_deref(), &csv)
}
