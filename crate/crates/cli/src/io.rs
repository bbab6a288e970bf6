//! Plain-text vector files and CSV output.
//!
//! Vector files hold one decimal value per line. Blank lines and lines
//! starting with `#` are skipped.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

pub fn parse_vector(text: &str, path: &Path) -> CliResult<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| CliError::MalformedInput {
            path: path.to_path_buf(),
            line: i + 1,
            text: trimmed.to_string(),
        })?;
        values.push(value);
    }
    Ok(values)
}

pub fn read_vector(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_vector(&text, path)
}

/// Shortest representation that parses back to the same value; `-0` is
/// printed as `0`.
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        v.to_string()
    }
}

pub fn format_vector(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&fmt_value(*v));
        out.push('\n');
    }
    out
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, contents).map_err(|e| CliError::io(p, e)),
        _ => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn csv_string(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn ensure_dir(dir: &Path) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    Ok(dir.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let v = parse_vector("# ramp\n0.125\n\n  0.375 \n# end\n5e-1\n", Path::new("x")).unwrap();
        assert_eq!(v, vec![0.125, 0.375, 0.5]);
    }

    #[test]
    fn reports_bad_line() {
        match parse_vector("1\n2\nabc\n", Path::new("in.txt")) {
            Err(CliError::MalformedInput { line, text, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(text, "abc");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn value_formatting_round_trips() {
        assert_eq!(fmt_value(-0.0), "0");
        assert_eq!(fmt_value(0.0625), "0.0625");
        assert_eq!(fmt_value(-8.0), "-8");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_value(x).parse::<f64>().unwrap(), x);
    }
}
