use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use spark_core::bench::Benchmark;

use crate::config::BASE;
use crate::error::{HarnessError, Result};
use crate::record::{parse_spark_dat, BenchRecord};

pub const SPEEDUPS_CSV: &str = "speedups.csv";
pub const FAMILIES_CSV: &str = "families.csv";

/// What [`report`] wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub charts: Vec<PathBuf>,
    /// Data rows in the speedup CSV.
    pub rows: usize,
    /// Set when there was nothing to report.
    pub notice: Option<String>,
}

/// Family of a benchmark name; names outside the registry count as "other".
fn family_of(benchmark: &str) -> String {
    benchmark
        .parse::<Benchmark>()
        .map(|b| b.family().to_string())
        .unwrap_or_else(|_| "other".into())
}

/// Registry order first, then any unknown names alphabetically.
fn benchmark_order(name: &str) -> (usize, String) {
    let rank = Benchmark::ALL
        .iter()
        .position(|b| b.name() == name)
        .unwrap_or(Benchmark::ALL.len());
    (rank, name.to_string())
}

/// Writes one chart per matrix, the speedup CSV and per-family geometric
/// means. Reference lines carry no speedup information and are left out.
pub fn report(spark_dat: &Path, out_dir: &Path) -> Result<ReportSummary> {
    let text = fs::read_to_string(spark_dat).map_err(|e| HarnessError::io(spark_dat, e))?;
    let records = parse_spark_dat(&text, spark_dat)?;
    let compared: Vec<&BenchRecord> = records.iter().filter(|r| r.id != BASE).collect();
    fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let write = |name: &str, body: String| {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(|e| HarnessError::io(&path, e))?;
        Ok::<_, HarnessError>(path)
    };

    let mut csv = String::from("id,benchmark,matrix,speedup\n");
    for r in &compared {
        let _ = writeln!(
            csv,
            "{},{},{},{:.6}",
            r.id,
            r.benchmark,
            r.matrix,
            r.speedup()
        );
    }
    write(SPEEDUPS_CSV, csv)?;
    write(FAMILIES_CSV, families_csv(&compared))?;

    let mut by_matrix: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for r in &compared {
        by_matrix.entry(r.matrix.as_str()).or_default().push(r);
    }
    let mut charts = Vec::new();
    for (matrix, rows) in &by_matrix {
        charts.push(write(&format!("{matrix}.svg"), chart_svg(matrix, rows))?);
    }
    let notice = compared.is_empty().then(|| {
        format!(
            "{} holds no configuration other than {BASE}; nothing to compare",
            spark_dat.display()
        )
    });
    if let Some(n) = &notice {
        log::warn!("{n}");
    }
    Ok(ReportSummary {
        charts,
        rows: compared.len(),
        notice,
    })
}

/// `id,family,cells,geomean_speedup`, one row per configuration and family.
fn families_csv(records: &[&BenchRecord]) -> String {
    let mut groups: BTreeMap<(&str, String), Vec<f64>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.id.as_str(), family_of(&r.benchmark)))
            .or_default()
            .push(r.speedup());
    }
    let mut out = String::from("id,family,cells,geomean_speedup\n");
    for ((id, family), speedups) in &groups {
        let _ = writeln!(
            out,
            "{id},{family},{},{:.6}",
            speedups.len(),
            geomean(speedups)
        );
    }
    out
}

pub fn geomean(xs: &[f64]) -> f64 {
    (xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp()
}

const PALETTE: [&str; 6] = [
    "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377",
];
const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Grouped bars: benchmarks along x, one bar per configuration, speedup on
/// y with a dashed line at parity.
fn chart_svg(matrix: &str, rows: &[&BenchRecord]) -> String {
    let mut benchmarks: Vec<&str> = rows.iter().map(|r| r.benchmark.as_str()).collect();
    benchmarks.sort_by_key(|b| benchmark_order(b));
    benchmarks.dedup();
    let mut ids: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
    ids.sort();
    ids.dedup();
    let lookup: BTreeMap<(&str, &str), f64> = rows
        .iter()
        .map(|r| ((r.id.as_str(), r.benchmark.as_str()), r.speedup()))
        .collect();

    let peak = lookup.values().fold(1.0f64, |m, &s| m.max(s));
    let y_max = (peak * 1.1 * 2.0).ceil() / 2.0;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_of = |s: f64| TOP + plot_h * (1.0 - s / y_max);
    let group_w = plot_w / benchmarks.len() as f64;
    let bar_w = group_w * 0.8 / ids.len() as f64;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(matrix)
    );
    let mut tick = 0.0;
    while tick <= y_max + 1e-9 {
        let y = y_of(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#dddddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{tick:.1}</text>"##,
            WIDTH - RIGHT,
            LEFT - 6.0,
            y + 4.0
        );
        tick += if y_max > 5.0 { 1.0 } else { 0.5 };
    }
    for (g, bench) in benchmarks.iter().enumerate() {
        let gx = LEFT + group_w * (g as f64 + 0.1);
        for (k, id) in ids.iter().enumerate() {
            let Some(&s) = lookup.get(&(*id, *bench)) else {
                continue;
            };
            let y = y_of(s);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.1}" y="{y:.1}" width="{bar_w:.1}" height="{:.1}" fill="{}"><title>{} {}: {s:.3}</title></rect>"#,
                gx + bar_w * k as f64,
                TOP + plot_h - y,
                PALETTE[k % PALETTE.len()],
                escape(id),
                escape(bench)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + group_w * (g as f64 + 0.5),
            TOP + plot_h + 16.0,
            escape(bench)
        );
    }
    let unity = y_of(1.0);
    let _ = writeln!(
        svg,
        r##"<line class="unity" x1="{LEFT}" y1="{unity:.1}" x2="{:.1}" y2="{unity:.1}" stroke="#000000" stroke-dasharray="4 3"/>"##,
        WIDTH - RIGHT
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.1}" stroke="#000000"/><text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">speedup over {BASE}</text>"##,
        TOP + plot_h,
        TOP + plot_h / 2.0
    );
    for (k, id) in ids.iter().enumerate() {
        let x = LEFT + 110.0 * k as f64;
        let y = HEIGHT - 20.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{y:.1}">{}</text>"#,
            y - 9.0,
            PALETTE[k % PALETTE.len()],
            x + 14.0,
            escape(id)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
