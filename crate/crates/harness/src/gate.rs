use std::collections::HashMap;
use std::fmt::Write;
use std::path::Path;

use sha2::{Digest, Sha256};
use spark_core::bench::{check, BenchInputs, BenchParams, Benchmark, KernelOutput};

use crate::error::{HarnessError, Result};

/// Hex SHA-256 of a kernel output's JSON.
pub fn checksum(output_json: &str) -> String {
    Sha256::digest(output_json.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

type CellKey = (Benchmark, String);

/// Oracle gate with memoized verdicts.
///
/// The oracle runs once per (benchmark, input, checksum): configurations
/// that reproduce an already judged output reuse its verdict.
#[derive(Debug, Default)]
pub struct OracleGate {
    inputs: HashMap<CellKey, BenchInputs>,
    verdicts: HashMap<(CellKey, String), std::result::Result<(), String>>,
}

impl OracleGate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of oracle evaluations so far.
    pub fn oracle_calls(&self) -> usize {
        self.verdicts.len()
    }

    /// Returns the output's checksum if the oracle accepts it.
    pub fn admit(
        &mut self,
        benchmark: Benchmark,
        input: &str,
        data_dir: &Path,
        params: &BenchParams,
        output_json: &str,
    ) -> Result<String> {
        let sum = checksum(output_json);
        let key = (benchmark, input.to_string());
        let verdict_key = (key.clone(), sum.clone());
        if !self.verdicts.contains_key(&verdict_key) {
            if !self.inputs.contains_key(&key) {
                let loaded = BenchInputs::load(benchmark, input, data_dir, *params)?;
                self.inputs.insert(key.clone(), loaded);
            }
            let verdict = match KernelOutput::from_json(output_json) {
                Err(e) => Err(format!("unreadable output: {e}")),
                Ok(output) => {
                    let report = check(&self.inputs[&key], &output)?;
                    if report.passed {
                        Ok(())
                    } else {
                        Err(report.detail)
                    }
                }
            };
            self.verdicts.insert(verdict_key.clone(), verdict);
        }
        match &self.verdicts[&verdict_key] {
            Ok(()) => Ok(sum),
            Err(detail) => Err(HarnessError::OracleMismatch {
                benchmark: benchmark.to_string(),
                input: input.to_string(),
                detail: detail.clone(),
            }),
        }
    }
}
