//! Acceptance suite: one PASS or FAIL line per criterion.
//!
//! Runs sequentially so the timed grid of criterion 6 has the machine to
//! itself. The process fails when any criterion fails, except criterion 2
//! when the collection matrices are absent; set `SPARK_REQUIRE_COLLECTION=1`
//! to make that case fail too. `SPARK_DATA_DIR` points at the directory
//! holding the collection matrices (default: `data/` in the workspace).

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use spark_core::bench::{BenchParams, Benchmark, TimingPolicy, NO_MATRIX};
use spark_core::mat_io::{read_matrix_market, standins, write_matrix_market, WriteOptions};
use spark_core::verify;
use spark_harness::{
    aggregate, collect, default_configs, parse_spark_dat, report, run_suite, spark_dat_path,
    BenchRecord, BuildPerConfig, SuiteContext,
};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    /// A failure that does not fail the process.
    tolerated: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            tolerated: false,
            detail: detail.into(),
        }
    }
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn collection_dir() -> PathBuf {
    std::env::var_os("SPARK_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace().join("data"))
}

fn spark(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spark"))
        .args(args)
        .output()
        .expect("spark binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn tally(results: &[verify::CaseResult]) -> (bool, String) {
    let summary = verify::summarize(results);
    let passed = summary.iter().all(|(_, p, t)| p == t);
    let text: Vec<String> = summary
        .iter()
        .map(|(k, p, t)| format!("{k} {p}/{t}"))
        .collect();
    (passed, text.join(", "))
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (
        took < limit,
        format!("{:.1} s of {} s", took.as_secs_f64(), limit.as_secs()),
    )
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let results = verify::oracle_equivalence(200, 0).expect("suite runs");
    let (ok, text) = tally(&results);
    let (fast, took) = within(Duration::from_secs(60), start);
    Verdict::new(ok && fast, format!("{text}; {took}"))
}

/// Dimensions, stored entries and symmetry class of the five collection
/// matrices as published.
const PUBLISHED: [(&str, usize, usize, &str); 5] = [
    ("add32", 4960, 23884, "none"),
    ("utm5940", 5940, 83842, "none"),
    ("sherman3", 5005, 20033, "structural"),
    ("codecs4812.dc", 4812, 45192, "none"),
    ("bcsstk13", 2003, 42943, "symmetric"),
];

fn field<'a>(output: &'a str, key: &str) -> &'a str {
    output
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or("")
        .trim()
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let dir = collection_dir();
    let mut missing = Vec::new();
    let mut mismatches = Vec::new();
    let mut entry_warnings = Vec::new();
    for (name, n, entries, symmetry) in PUBLISHED {
        let path = dir.join(format!("{name}.mtx"));
        let synthetic =
            path.is_file() && read_matrix_market(&path).map_or(true, |(_, m)| m.synthetic);
        if !path.is_file() || synthetic {
            missing.push(name);
            continue;
        }
        let (code, out) = spark(&["inspect", path.to_str().expect("utf-8 path")]);
        let dims = format!("{n} x {n}");
        if code != 0 || field(&out, "dimensions:") != dims || field(&out, "symmetry:") != symmetry {
            mismatches.push(format!("{name}: exit {code}, {}", out.replace('\n', "; ")));
        }
        if field(&out, "entries:") != entries.to_string() {
            entry_warnings.push(format!("{name} has {} entries", field(&out, "entries:")));
        }
    }
    let (fast, took) = within(Duration::from_secs(10), start);
    if !missing.is_empty() {
        let require = std::env::var("SPARK_REQUIRE_COLLECTION").is_ok_and(|v| v == "1");
        return Verdict {
            passed: false,
            tolerated: !require && mismatches.is_empty(),
            detail: format!(
                "collection matrices not available in {} ({}); synthetic stand-ins cannot reproduce the published table",
                dir.display(),
                missing.join(", ")
            ),
        };
    }
    let mut detail = if mismatches.is_empty() {
        "dimensions and symmetry match for all five".to_string()
    } else {
        mismatches.join(" | ")
    };
    if !entry_warnings.is_empty() {
        detail.push_str(&format!("; warning: {}", entry_warnings.join(", ")));
    }
    Verdict::new(mismatches.is_empty() && fast, format!("{detail}; {took}"))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let results = verify::structural_invariants(100, 0).expect("suite runs");
    let (ok, text) = tally(&results);
    let (fast, took) = within(Duration::from_secs(30), start);
    Verdict::new(ok && fast, format!("{text}; {took}"))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let results = verify::bandwidth_reduction(50, 0).expect("suite runs");
    let (ok, text) = tally(&results);
    let observed = verify::bandwidth_observations(50, 0).expect("suite runs");
    let widened = observed.iter().filter(|r| !r.passed).count();
    let (fast, took) = within(Duration::from_secs(10), start);
    Verdict::new(
        ok && fast,
        format!(
            "{text}; sparse bands in natural order widened in {widened}/{} (not asserted); {took}",
            observed.len()
        ),
    )
}

fn fixtures() -> PathBuf {
    workspace().join("crates/harness/tests/fixtures")
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let exp = tempfile::tempdir().expect("temp dir");
    aggregate(&fixtures().join("results"), exp.path()).expect("fixture aggregates");
    let written = fs::read(spark_dat_path(exp.path())).expect("spark.dat written");
    let golden = fs::read(fixtures().join("spark.dat.golden")).expect("golden present");
    let identical = written == golden;
    let text = String::from_utf8(written).expect("ascii");
    let round_trip = text
        .lines()
        .all(|l| l.parse::<BenchRecord>().is_ok_and(|r| r.to_string() == l));
    let (fast, took) = within(Duration::from_secs(1), start);
    Verdict::new(
        identical && round_trip && fast,
        format!(
            "byte-identical {identical}, {} lines round-trip {round_trip}; {took}",
            text.lines().count()
        ),
    )
}

/// Real collection matrices when all five are present, stand-ins otherwise.
fn grid_data(scratch: &Path) -> (PathBuf, &'static str) {
    let real = collection_dir();
    let all_real = PUBLISHED.iter().all(|(name, ..)| {
        let p = real.join(format!("{name}.mtx"));
        p.is_file() && read_matrix_market(&p).is_ok_and(|(_, m)| !m.synthetic)
    });
    if all_real {
        return (real, "collection matrices");
    }
    let data = scratch.join("data");
    fs::create_dir_all(&data).expect("data dir");
    for s in standins().expect("stand-ins build") {
        let opts = WriteOptions {
            symmetric: s.symmetric_storage,
            synthetic: true,
            comments: Vec::new(),
        };
        write_matrix_market(&data.join(format!("{}.mtx", s.name)), &s.matrix, &opts)
            .expect("stand-in written");
    }
    (data, "synthetic stand-ins")
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let scratch = tempfile::tempdir().expect("temp dir");
    let (data_dir, source) = grid_data(scratch.path());
    let matrices: Vec<String> = PUBLISHED.iter().map(|(n, ..)| n.to_string()).collect();
    let ctx = SuiteContext {
        data_dir: std::path::absolute(&data_dir).expect("absolute path"),
        results_root: scratch.path().join("results"),
        policy: TimingPolicy::default(),
        params: BenchParams::default(),
    };
    let builds = Path::new(env!("CARGO_TARGET_TMPDIR")).join("spark-builds");
    let mut executor = BuildPerConfig::new(workspace(), builds);
    let configs = default_configs();
    let suite =
        run_suite(&mut executor, &configs, &Benchmark::ALL, &matrices, &ctx).expect("suite starts");
    let failures: Vec<String> = suite
        .failures()
        .map(|c| {
            format!(
                "{} {} {}: {:?}",
                c.config,
                c.benchmark,
                c.input,
                c.result.as_ref().err()
            )
        })
        .collect();
    let expected_cells = configs.len() * (8 * matrices.len() + 1);

    let exp = scratch.path().join("exp");
    let agg = aggregate(&ctx.results_root, &exp).expect("aggregates");
    let summary = report(&spark_dat_path(&exp), &exp.join("report")).expect("reports");
    let charts: BTreeSet<String> = summary
        .charts
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    let wanted: BTreeSet<String> = matrices
        .iter()
        .map(String::as_str)
        .chain([NO_MATRIX])
        .map(|m| format!("{m}.svg"))
        .collect();
    let families = fs::read_to_string(exp.join("report/families.csv")).unwrap_or_default();
    let family_rows: Vec<String> = families
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{} {} {}", f[0], f[1], f[3])
        })
        .collect();
    let both_families = configs.iter().filter(|c| !c.is_base()).all(|c| {
        ["pointer", "array"].iter().all(|fam| {
            family_rows
                .iter()
                .any(|r| r.starts_with(&format!("{} {fam} ", c.id)))
        })
    });
    let (fast, took) = within(Duration::from_secs(15 * 60), start);
    let passed = failures.is_empty()
        && suite.cells.len() == expected_cells
        && agg.records.len() == expected_cells
        && charts == wanted
        && both_families
        && fast;
    let mut detail = format!(
        "{} cells on {source}, {} gate failures, {} charts, geomean speedup by family: {}; {took}",
        suite.cells.len(),
        failures.len(),
        charts.len(),
        family_rows.join(", ")
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; {}", failures.join(" | ")));
    }
    Verdict::new(passed, detail)
}

fn criterion_7() -> Verdict {
    let data = collection_dir();
    let data = data.to_str().expect("utf-8 path");
    let first = spark(&["verify", "--data-dir", data]);
    let second = spark(&["verify", "--data-dir", data]);
    let verify_same = first == second && first.0 == 0;

    let results = fixtures().join("results");
    let a = collect(&results).expect("aggregates").to_text();
    let exp = tempfile::tempdir().expect("temp dir");
    let exp_dir = exp.path().to_str().expect("utf-8 path");
    let results_dir = results.to_str().expect("utf-8 path");
    let mut bytes = Vec::new();
    for _ in 0..2 {
        let (code, _) = spark(&[
            "aggregate",
            "--results-dir",
            results_dir,
            "--exp-dir",
            exp_dir,
        ]);
        assert_eq!(code, 0, "aggregate succeeds");
        bytes.push(fs::read(spark_dat_path(exp.path())).expect("spark.dat written"));
    }
    let aggregate_same = bytes[0] == bytes[1] && bytes[0] == a.as_bytes();
    let lines_valid = parse_spark_dat(&a, &results).is_ok();
    Verdict::new(
        verify_same && aggregate_same && lines_valid,
        format!(
            "verify outputs identical {} (exit {}), aggregate outputs identical {aggregate_same}",
            first == second,
            first.0
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence", criterion_1),
        ("published matrix characteristics", criterion_2),
        ("structural invariants", criterion_3),
        ("bandwidth reduction", criterion_4),
        ("spark.dat bit-exactness", criterion_5),
        ("full grid methodology", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut hard_failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {} ({name}): {}", i + 1, v.detail);
        if !v.passed && !v.tolerated {
            hard_failures += 1;
        }
    }
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
