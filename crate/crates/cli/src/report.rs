use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use wht_core::OpCount;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct OpCounts {
    pub additions: u64,
    pub multiplications: u64,
    pub square_roots: u64,
    pub total: u64,
}

impl From<OpCount> for OpCounts {
    fn from(c: OpCount) -> Self {
        Self {
            additions: c.additions,
            multiplications: c.multiplications,
            square_roots: c.square_roots,
            total: c.total(),
        }
    }
}

/// Summary of one command run, written as a JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub subcommand: String,
    pub backend: Option<String>,
    pub n: Option<u32>,
    pub iterations: Option<usize>,
    pub elapsed_seconds: f64,
    pub op_counts: Option<OpCounts>,
    pub outputs: Vec<String>,
    pub details: Value,
}

impl RunReport {
    pub fn new(subcommand: &str) -> Self {
        Self {
            command: std::env::args().collect(),
            subcommand: subcommand.to_string(),
            backend: None,
            n: None,
            iterations: None,
            elapsed_seconds: 0.0,
            op_counts: None,
            outputs: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Writes to `path`, or to stderr when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> CliResult<()> {
        let json = self.to_json()?;
        match path {
            Some(p) => std::fs::write(p, json).map_err(|e| CliError::io(p, e)),
            None => {
                eprint!("{json}");
                Ok(())
            }
        }
    }
}
