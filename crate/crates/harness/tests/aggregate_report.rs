use std::fs;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use spark_harness::{aggregate, collect, parse_spark_dat, report, spark_dat_path, BenchRecord};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

#[test]
fn golden_tree_aggregates_byte_identically() {
    let exp = tempfile::tempdir().unwrap();
    let agg = aggregate(&fixtures().join("results"), exp.path()).unwrap();
    let written = fs::read(spark_dat_path(exp.path())).unwrap();
    let golden = fs::read(fixtures().join("spark.dat.golden")).unwrap();
    assert_eq!(written, golden);
    assert_eq!(agg.skipped.len(), 1);
    assert_eq!(agg.skipped[0].benchmark, "PCG");
}

#[test]
fn aggregation_is_repeatable() {
    let a = collect(&fixtures().join("results")).unwrap().to_text();
    let b = collect(&fixtures().join("results")).unwrap().to_text();
    assert_eq!(a, b);
}

#[test]
fn every_golden_line_round_trips() {
    let text = fs::read_to_string(fixtures().join("spark.dat.golden")).unwrap();
    for line in text.lines() {
        let rec: BenchRecord = line.parse().unwrap();
        assert_eq!(rec.to_string(), line);
        if rec.id == "base" {
            assert_eq!(rec.reftime, rec.time);
        }
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn missing_base_is_an_error() {
    let root = tempfile::tempdir().unwrap();
    fs::create_dir_all(root.path().join("O2")).unwrap();
    assert!(collect(root.path()).is_err());
}

#[test]
fn report_rows_charts_and_families() {
    let exp = tempfile::tempdir().unwrap();
    aggregate(&fixtures().join("results"), exp.path()).unwrap();
    let out = exp.path().join("report");
    let summary = report(&spark_dat_path(exp.path()), &out).unwrap();
    let dat = fs::read_to_string(spark_dat_path(exp.path())).unwrap();
    let non_base = dat.lines().filter(|l| !l.starts_with("base ")).count();
    assert_eq!(summary.rows, non_base);
    let csv = fs::read_to_string(out.join("speedups.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("id,benchmark,matrix,speedup"));
    assert_eq!(csv.lines().count(), non_base + 1);
    assert!(csv.contains("O2,SPMATVEC,add32,2.000919\n"));
    let names: Vec<String> = summary
        .charts
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, ["add32.svg", "none.svg"]);
    let families = fs::read_to_string(out.join("families.csv")).unwrap();
    assert!(families.contains("O2,array,2,"));
    assert!(families.contains("O2,pointer,1,"));
    assert!(summary.notice.is_none());

    let again = exp.path().join("again");
    report(&spark_dat_path(exp.path()), &again).unwrap();
    for name in ["add32.svg", "none.svg", "speedups.csv", "families.csv"] {
        assert_eq!(
            fs::read(out.join(name)).unwrap(),
            fs::read(again.join(name)).unwrap()
        );
    }
}

#[test]
fn single_matrix_two_configs_gives_bar_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let dat = dir.path().join("spark.dat");
    fs::write(
        &dat,
        "O2 SPMATVEC m 1.000000 0.500000\nO2 TRMAT m 1.000000 0.800000\n\
         O3 SPMATVEC m 1.000000 0.400000\nO3 TRMAT m 1.000000 0.900000\n\
         base SPMATVEC m 1.000000 1.000000\nbase TRMAT m 1.000000 1.000000\n",
    )
    .unwrap();
    let summary = report(&dat, &dir.path().join("r")).unwrap();
    assert_eq!(summary.charts.len(), 1);
    let svg = fs::read_to_string(&summary.charts[0]).unwrap();
    assert_eq!(svg.matches("<title>").count(), 4);
}

#[test]
fn empty_input_gives_notice() {
    let dir = tempfile::tempdir().unwrap();
    let dat = dir.path().join("spark.dat");
    fs::write(&dat, "").unwrap();
    let summary = report(&dat, &dir.path().join("r")).unwrap();
    assert!(summary.notice.is_some());
    assert!(summary.charts.is_empty());
    let csv = fs::read_to_string(dir.path().join("r/speedups.csv")).unwrap();
    assert_eq!(csv, "id,benchmark,matrix,speedup\n");
}

fn field() -> impl Strategy<Value = String> {
    "[A-Za-z0-9_.-]{1,12}"
}

proptest! {
    #[test]
    fn parse_after_format_is_identity(
        id in field(), bench in field(), matrix in field(),
        ref_us in 1u64..10_000_000_000, time_us in 1u64..10_000_000_000,
    ) {
        let rec = BenchRecord::new(&id, &bench, &matrix, ref_us as f64 / 1e6, time_us as f64 / 1e6).unwrap();
        let line = rec.to_string();
        let back: BenchRecord = line.parse().unwrap();
        prop_assert_eq!(back.to_string(), line);
        prop_assert_eq!(&back.id, &id);
        prop_assert!((back.reftime - rec.reftime).abs() <= 5e-7);
    }

    #[test]
    fn lines_parse_back_from_spark_dat(records in prop::collection::vec(
        (field(), field(), field(), 1u64..1_000_000_000, 1u64..1_000_000_000), 0..20)
    ) {
        let text: String = records
            .iter()
            .map(|(i, b, m, r, t)| {
                format!("{}\n", BenchRecord::new(i, b, m, *r as f64 / 1e6, *t as f64 / 1e6).unwrap())
            })
            .collect();
        let parsed = parse_spark_dat(&text, Path::new("x")).unwrap();
        let again: String = parsed.iter().map(|r| format!("{r}\n")).collect();
        prop_assert_eq!(again, text);
    }
}
