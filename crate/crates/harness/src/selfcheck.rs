use std::path::Path;

use spark_core::bench::{
    check, run_cell, Aggregator, BenchInputs, BenchParams, Benchmark, TimingPolicy,
};
use spark_core::mat_io::{published, read_matrix_market, validate_characteristics};
use spark_core::verify::{self, CaseResult};

use crate::error::Result;

/// Case counts of the seeded suites.
pub const ORACLE_CASES: usize = 200;
pub const INVARIANT_CASES: usize = 100;
pub const BANDWIDTH_CASES: usize = 50;
const GATE_FIXTURES: u64 = 5;

/// One titled group of checks. Informational sections never fail a run.
#[derive(Debug, Clone)]
pub struct Section {
    pub title: String,
    pub informational: bool,
    pub results: Vec<CaseResult>,
}

impl Section {
    fn new(title: &str, informational: bool, results: Vec<CaseResult>) -> Self {
        Self {
            title: title.to_string(),
            informational,
            results,
        }
    }

    pub fn passed(&self) -> bool {
        self.informational || self.results.iter().all(|r| r.passed)
    }

    /// Per-kernel tallies followed by each failing case. Carries no timing,
    /// so equal inputs give equal text.
    pub fn render(&self) -> String {
        let mut out = format!("== {}\n", self.title);
        for (kernel, passed, total) in verify::summarize(&self.results) {
            let tag = if self.informational {
                "INFO"
            } else if passed == total {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!("{tag} {kernel} {passed}/{total}\n"));
        }
        for r in self.results.iter().filter(|r| !r.passed) {
            let tag = if self.informational {
                "  note"
            } else {
                "  fail"
            };
            out.push_str(&format!("{tag} {} [{}]: {}\n", r.kernel, r.case, r.detail));
        }
        out
    }
}

fn gate_case(inputs: &BenchInputs, case: &str) -> Result<CaseResult> {
    let policy = TimingPolicy::new(0, 3, Aggregator::Min)?;
    let (_, output) = run_cell(inputs, &policy)?;
    let report = check(inputs, &output)?;
    Ok(CaseResult {
        kernel: inputs.benchmark.name(),
        case: case.to_string(),
        passed: report.passed,
        detail: report.detail,
    })
}

/// Every registered benchmark, through the same path timed cells take,
/// checked by the oracle gate on small generated inputs.
pub fn gate_on_fixtures() -> Result<Vec<CaseResult>> {
    let params = BenchParams {
        jacobi_iterations: 10,
        pcg_iterations: 50,
        spmatmat_cols: 3,
        mesh_cells: (6, 5),
    };
    let mut out = Vec::new();
    for benchmark in Benchmark::ALL {
        for seed in 0..GATE_FIXTURES {
            let inputs = if benchmark.takes_matrix() {
                let m = if benchmark == Benchmark::Pcg {
                    verify::spd_fixture(seed)?
                } else {
                    verify::random_fixture(seed)?
                };
                BenchInputs::for_matrix(benchmark, m, params)?
            } else {
                BenchInputs::for_mesh(verify::jittered_mesh(seed)?, params)
            };
            out.push(gate_case(&inputs, &format!("fixture {seed}"))?);
        }
    }
    Ok(out)
}

/// Characteristics and every benchmark's gate on the collection matrices
/// found in `data_dir`. Missing files are skipped.
pub fn collection_matrices(data_dir: &Path) -> Result<(Vec<CaseResult>, Vec<String>)> {
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for expected in published() {
        let path = data_dir.join(format!("{}.mtx", expected.name));
        if !path.is_file() {
            notes.push(format!(
                "{} not found in {}",
                expected.name,
                data_dir.display()
            ));
            continue;
        }
        let (m, meta) = read_matrix_market(&path)?;
        if meta.synthetic {
            notes.push(format!("{} is a synthetic stand-in", expected.name));
        }
        let validation = validate_characteristics(&meta, &expected);
        out.push(CaseResult {
            kernel: "characteristics",
            case: expected.name.clone(),
            passed: validation.passed,
            detail: validation.mismatches.join("; "),
        });
        for benchmark in Benchmark::ALL.into_iter().filter(|b| b.takes_matrix()) {
            let inputs = BenchInputs::for_matrix(benchmark, m.clone(), BenchParams::default())?;
            out.push(gate_case(&inputs, &expected.name)?);
        }
    }
    Ok((out, notes))
}

/// All verification sections in a fixed order.
pub fn verify_all(data_dir: &Path) -> Result<(Vec<Section>, Vec<String>)> {
    let (collection, notes) = collection_matrices(data_dir)?;
    let sections = vec![
        Section::new(
            "kernels against dense oracles",
            false,
            verify::oracle_equivalence(ORACLE_CASES, 0)?,
        ),
        Section::new(
            "structural invariants",
            false,
            verify::structural_invariants(INVARIANT_CASES, 0)?,
        ),
        Section::new(
            "bandwidth reduction",
            false,
            verify::bandwidth_reduction(BANDWIDTH_CASES, 0)?,
        ),
        Section::new(
            "bandwidth observations",
            true,
            verify::bandwidth_observations(BANDWIDTH_CASES, 0)?,
        ),
        Section::new("benchmark gate on fixtures", false, gate_on_fixtures()?),
        Section::new("collection matrices", false, collection),
    ];
    Ok((sections, notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_fixtures_pass() {
        for r in gate_on_fixtures().unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn render_marks_failures() {
        let s = Section::new(
            "t",
            false,
            vec![CaseResult {
                kernel: "k",
                case: "c".into(),
                passed: false,
                detail: "d".into(),
            }],
        );
        assert!(!s.passed());
        assert_eq!(s.render(), "== t\nFAIL k 0/1\n  fail k [c]: d\n");
    }
}
