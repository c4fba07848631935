use std::fs;
use std::path::{Path, PathBuf};

use spark_core::bench::{Timing, TimingPolicy};

use crate::error::{HarnessError, Result};

/// `results/<id>/<benchmark>__<matrix>.time`.
pub fn time_file_path(results_root: &Path, id: &str, benchmark: &str, matrix: &str) -> PathBuf {
    results_root
        .join(id)
        .join(format!("{benchmark}__{matrix}.time"))
}

/// Splits a time file name into benchmark and matrix.
pub fn parse_time_file_name(name: &str) -> Option<(&str, &str)> {
    let stem = name.strip_suffix(".time")?;
    let (benchmark, matrix) = stem.split_once("__")?;
    (!benchmark.is_empty() && !matrix.is_empty()).then_some((benchmark, matrix))
}

/// Contents of one time file: the aggregate on the first line, metadata
/// after it.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeRecord {
    pub seconds: f64,
    pub timing: Timing,
    pub policy: TimingPolicy,
    pub checksum: String,
    pub build_flags: String,
}

impl TimeRecord {
    pub fn to_text(&self) -> String {
        let samples: Vec<String> = self.timing.samples.iter().map(|s| s.to_string()).collect();
        format!(
            "{}\nsamples = {}\nmedian = {}\nmin = {}\ndispersed = {}\npolicy = {}\nchecksum = {}\nflags = {}\n",
            self.seconds,
            samples.join(" "),
            self.timing.median,
            self.timing.min,
            self.timing.dispersed,
            self.policy,
            self.checksum,
            self.build_flags,
        )
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        }
        fs::write(path, self.to_text()).map_err(|e| HarnessError::io(path, e))
    }
}

/// Reads the aggregate seconds from the first line of a time file.
pub fn read_seconds(path: &Path) -> Result<f64> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let first = text.lines().next().unwrap_or("").trim();
    first
        .parse::<f64>()
        .ok()
        .filter(|s| *s > 0.0 && s.is_finite())
        .ok_or_else(|| HarnessError::Record {
            path: path.to_path_buf(),
            line: 1,
            msg: format!("expected positive seconds, got {first:?}"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spark_core::bench::Aggregator;

    #[test]
    fn names_round_trip() {
        let p = time_file_path(Path::new("results"), "O2", "ASM", "none");
        assert_eq!(p, Path::new("results/O2/ASM__none.time"));
        let name = p.file_name().unwrap().to_str().unwrap();
        assert_eq!(parse_time_file_name(name), Some(("ASM", "none")));
        assert_eq!(parse_time_file_name("x.time"), None);
        assert_eq!(parse_time_file_name("A__b.txt"), None);
    }

    #[test]
    fn first_line_is_the_aggregate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("base/TRMAT__m.time");
        let rec = TimeRecord {
            seconds: 0.00125,
            timing: Timing::from_samples(vec![0.00125, 0.0013, 0.0012], Aggregator::Median),
            policy: TimingPolicy::default(),
            checksum: "abc".into(),
            build_flags: "-C opt-level=0".into(),
        };
        rec.write(&path).unwrap();
        assert_eq!(read_seconds(&path).unwrap(), 0.00125);
        fs::write(&path, "0\n").unwrap();
        assert!(read_seconds(&path).is_err());
    }
}
