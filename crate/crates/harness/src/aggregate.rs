use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::BASE;
use crate::error::{HarnessError, Result};
use crate::record::BenchRecord;
use crate::results::{parse_time_file_name, read_seconds};

/// Location of the aggregated file below the experiment root.
pub fn spark_dat_path(exp_root: &Path) -> PathBuf {
    exp_root.join("data").join("spark.dat")
}

/// A cell present for some configuration but not for the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedCell {
    pub id: String,
    pub benchmark: String,
    pub matrix: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    /// Sorted by (id, benchmark, matrix).
    pub records: Vec<BenchRecord>,
    pub skipped: Vec<SkippedCell>,
}

impl Aggregation {
    /// The file contents: one LF-terminated line per record.
    pub fn to_text(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Times as written: rounded to whole microseconds and never below one, so
/// every line parses back to the record it came from.
fn on_disk_seconds(t: f64) -> f64 {
    let micros = (t * 1e6).round().max(1.0);
    format!("{:.6}", micros / 1e6)
        .parse()
        .expect("formatted float parses")
}

type Cells = BTreeMap<(String, String), f64>;

fn read_config_dir(dir: &Path) -> Result<Cells> {
    let mut cells = Cells::new();
    for entry in fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))? {
        let entry = entry.map_err(|e| HarnessError::io(dir, e))?;
        let name = entry.file_name();
        let Some((benchmark, matrix)) = name.to_str().and_then(parse_time_file_name) else {
            continue;
        };
        let seconds = read_seconds(&entry.path())?;
        cells.insert((benchmark.to_string(), matrix.to_string()), seconds);
    }
    Ok(cells)
}

/// Collects every configuration's cells and pairs them with the reference.
/// Depends only on the tree's contents, never on directory listing order.
pub fn collect(results_root: &Path) -> Result<Aggregation> {
    let base_dir = results_root.join(BASE);
    if !base_dir.is_dir() {
        return Err(HarnessError::MissingBase);
    }
    let mut configs = BTreeMap::new();
    for entry in fs::read_dir(results_root).map_err(|e| HarnessError::io(results_root, e))? {
        let entry = entry.map_err(|e| HarnessError::io(results_root, e))?;
        if !entry.path().is_dir() {
            continue;
        }
        let Some(id) = entry.file_name().to_str().map(str::to_string) else {
            continue;
        };
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            log::warn!("ignoring results directory {id:?}");
            continue;
        }
        configs.insert(id, read_config_dir(&entry.path())?);
    }
    let base = configs[BASE].clone();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (id, cells) in &configs {
        for ((benchmark, matrix), &time) in cells {
            let Some(&reftime) = base.get(&(benchmark.clone(), matrix.clone())) else {
                log::warn!("{id} {benchmark} {matrix}: no {BASE} measurement, skipped");
                skipped.push(SkippedCell {
                    id: id.clone(),
                    benchmark: benchmark.clone(),
                    matrix: matrix.clone(),
                });
                continue;
            };
            records.push(BenchRecord::new(
                id,
                benchmark,
                matrix,
                on_disk_seconds(reftime),
                on_disk_seconds(time),
            )?);
        }
    }
    records.sort_by(|a, b| (&a.id, &a.benchmark, &a.matrix).cmp(&(&b.id, &b.benchmark, &b.matrix)));
    Ok(Aggregation { records, skipped })
}

/// Writes `exp_root/data/spark.dat` from the results tree.
pub fn aggregate(results_root: &Path, exp_root: &Path) -> Result<Aggregation> {
    let agg = collect(results_root)?;
    let path = spark_dat_path(exp_root);
    let dir = path.parent().expect("spark.dat has a parent");
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    fs::write(&path, agg.to_text()).map_err(|e| HarnessError::io(&path, e))?;
    Ok(agg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_times_positive() {
        assert_eq!(on_disk_seconds(1.2345674), 1.234567);
        assert_eq!(on_disk_seconds(1e-9), 0.000001);
        assert_eq!(on_disk_seconds(0.0000026), 0.000003);
    }
}
