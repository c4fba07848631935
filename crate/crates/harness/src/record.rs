use std::fmt;
use std::str::FromStr;

use crate::error::{HarnessError, Result};

/// One line of `spark.dat`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub id: String,
    pub benchmark: String,
    pub matrix: String,
    pub reftime: f64,
    pub time: f64,
}

impl BenchRecord {
    pub fn new(id: &str, benchmark: &str, matrix: &str, reftime: f64, time: f64) -> Result<Self> {
        let bad = |msg: String| HarnessError::Record {
            path: "spark.dat".into(),
            line: 0,
            msg,
        };
        for (what, field) in [("id", id), ("benchmark", benchmark), ("matrix", matrix)] {
            if field.is_empty() || field.chars().any(char::is_whitespace) {
                return Err(bad(format!("{what} {field:?} is empty or has whitespace")));
            }
        }
        if !(reftime > 0.0 && reftime.is_finite()) || !(time > 0.0 && time.is_finite()) {
            return Err(bad(format!(
                "times must be positive, got {reftime} and {time}"
            )));
        }
        Ok(Self {
            id: id.into(),
            benchmark: benchmark.into(),
            matrix: matrix.into(),
            reftime,
            time,
        })
    }

    /// `reftime / time`: above 1 means faster than the reference.
    pub fn speedup(&self) -> f64 {
        self.reftime / self.time
    }
}

/// `id benchmark matrix reftime time`, times with six fractional digits.
impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {:.6} {:.6}",
            self.id, self.benchmark, self.matrix, self.reftime, self.time
        )
    }
}

impl FromStr for BenchRecord {
    type Err = HarnessError;

    fn from_str(line: &str) -> Result<Self> {
        let bad = |msg: String| HarnessError::Record {
            path: "spark.dat".into(),
            line: 0,
            msg,
        };
        let fields: Vec<&str> = line.split(' ').collect();
        let [id, benchmark, matrix, reftime, time] = fields[..] else {
            return Err(bad(format!(
                "expected 5 single-space separated fields in {line:?}"
            )));
        };
        let seconds = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("time {s:?} is not a number")))
        };
        BenchRecord::new(id, benchmark, matrix, seconds(reftime)?, seconds(time)?)
    }
}

/// Parses a whole `spark.dat`, reporting the failing line.
pub fn parse_spark_dat(text: &str, path: &std::path::Path) -> Result<Vec<BenchRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.parse().map_err(|e| match e {
                HarnessError::Record { msg, .. } => HarnessError::Record {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg,
                },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_examples() {
        let r = BenchRecord::new("base", "SPMATVEC", "add32", 1.234567, 1.234567).unwrap();
        assert_eq!(r.to_string(), "base SPMATVEC add32 1.234567 1.234567");
        let r = BenchRecord::new("opt", "SPMATVEC", "add32", 1.234, 0.617).unwrap();
        assert_eq!(r.to_string(), "opt SPMATVEC add32 1.234000 0.617000");
        assert_eq!(r.to_string().parse::<BenchRecord>().unwrap(), r);
    }

    #[test]
    fn speedup_convention() {
        let s = |a, b| BenchRecord::new("x", "B", "m", a, b).unwrap().speedup();
        assert_eq!(s(2.0, 1.0), 2.0);
        assert_eq!(s(1.5, 1.5), 1.0);
        assert_eq!(s(1.0, 2.0), 0.5);
    }

    #[test]
    fn rejects_malformed_lines() {
        for line in [
            "base SPMATVEC add32 1.0",
            "base  SPMATVEC add32 1.0 1.0",
            "base SPMATVEC add32 0.000000 1.0",
            "base SPMATVEC add32 x 1.0",
            "base SPMATVEC add32 1.0 -1.0",
        ] {
            assert!(line.parse::<BenchRecord>().is_err(), "{line}");
        }
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err =
            parse_spark_dat("a B m 1.0 1.0\nbad\n", std::path::Path::new("s.dat")).unwrap_err();
        assert!(matches!(err, HarnessError::Record { line: 2, .. }));
    }
}
