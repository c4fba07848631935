use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::CsrMatrix;

/// Comment line written into generated files so they are never mistaken for
/// collection matrices.
pub const SYNTHETIC_MARKER: &str = "% spark: synthetic stand-in";

/// Symmetry class of a stored matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    Structural,
    Symmetric,
}

impl Symmetry {
    /// Classifies a matrix by comparing it with its transpose.
    pub fn classify(m: &CsrMatrix) -> Self {
        if m.is_symmetric() {
            Symmetry::Symmetric
        } else if m.is_pattern_symmetric() {
            Symmetry::Structural
        } else {
            Symmetry::None
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::None => "none",
            Symmetry::Structural => "structural",
            Symmetry::Symmetric => "symmetric",
        })
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "no" => Ok(Symmetry::None),
            "structural" => Ok(Symmetry::Structural),
            "symmetric" | "yes" => Ok(Symmetry::Symmetric),
            other => Err(Error::Parameter(format!(
                "unknown symmetry class '{other}'"
            ))),
        }
    }
}

/// Characteristics of an ingested matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub name: String,
    pub n_rows: usize,
    pub n_cols: usize,
    /// Entries stored in the file, before symmetric mirroring.
    pub entries: usize,
    pub symmetry: Symmetry,
    /// Set when the file carries [`SYNTHETIC_MARKER`].
    pub synthetic: bool,
}

impl MatrixMeta {
    pub fn new(
        name: &str,
        n_rows: usize,
        n_cols: usize,
        entries: usize,
        symmetry: Symmetry,
    ) -> Self {
        Self {
            name: name.to_string(),
            n_rows,
            n_cols,
            entries,
            symmetry,
            synthetic: false,
        }
    }
}

/// Reads a coordinate-format Matrix Market file into CSR.
///
/// Files tagged `symmetric` store the lower triangle; off-diagonal entries
/// are mirrored so the returned matrix is complete. The metadata counts
/// the stored entries only.
pub fn read_matrix_market(path: &Path) -> Result<(CsrMatrix, MatrixMeta)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = matrix_name(path);
    parse_matrix_market(BufReader::new(file), path, &name)
}

/// Matrix name derived from a file path (`data/add32.mtx` gives `add32`).
pub fn matrix_name(path: &Path) -> String {
    let file = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    file.strip_suffix(".mtx").unwrap_or(&file).to_string()
}

pub fn parse_matrix_market<R: BufRead>(
    reader: R,
    path: &Path,
    name: &str,
) -> Result<(CsrMatrix, MatrixMeta)> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let symmetric = parse_header(&header).map_err(|e| match e {
        Error::Parameter(msg) => parse_err(1, msg),
        other => other,
    })?;

    let mut synthetic = false;
    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut stored = 0usize;
    let mut last_line = 1;

    for (line_no, line) in lines {
        last_line = line_no;
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.starts_with('%') {
            if trimmed.starts_with(SYNTHETIC_MARKER) {
                synthetic = true;
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(
                        line_no,
                        "size line needs rows, cols, entries".into(),
                    ));
                }
                let nums: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(line_no, format!("bad size line: {e}")))?;
                if symmetric && nums[0] != nums[1] {
                    return Err(parse_err(line_no, "symmetric matrix must be square".into()));
                }
                size = Some((nums[0], nums[1], nums[2]));
                triplets.reserve(if symmetric { 2 * nums[2] } else { nums[2] });
            }
            Some((n_rows, n_cols, declared)) => {
                if fields.len() < 3 {
                    return Err(parse_err(line_no, "entry needs row, col, value".into()));
                }
                if stored == declared {
                    return Err(parse_err(
                        line_no,
                        format!("more entries than the {declared} declared"),
                    ));
                }
                let row: usize = fields[0]
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad row index: {e}")))?;
                let col: usize = fields[1]
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad column index: {e}")))?;
                let value: f64 = fields[2]
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad value: {e}")))?;
                if row == 0 || col == 0 || row > n_rows || col > n_cols {
                    return Err(parse_err(
                        line_no,
                        format!("index ({row}, {col}) outside {n_rows}x{n_cols}"),
                    ));
                }
                if symmetric && col > row {
                    return Err(parse_err(
                        line_no,
                        format!("entry ({row}, {col}) above the diagonal in a symmetric file"),
                    ));
                }
                let (r, c) = (row - 1, col - 1);
                triplets.push((r, c, value));
                if symmetric && r != c {
                    triplets.push((c, r, value));
                }
                stored += 1;
            }
        }
    }

    let (n_rows, n_cols, declared) =
        size.ok_or_else(|| parse_err(last_line, "missing size line".into()))?;
    if stored != declared {
        return Err(parse_err(
            last_line,
            format!("expected {declared} entries, found {stored}"),
        ));
    }
    let m = CsrMatrix::from_triplets(n_rows, n_cols, &triplets)?;
    let symmetry = if symmetric {
        Symmetry::Symmetric
    } else {
        Symmetry::classify(&m)
    };
    let meta = MatrixMeta {
        name: name.to_string(),
        n_rows,
        n_cols,
        entries: stored,
        symmetry,
        synthetic,
    };
    Ok((m, meta))
}

// Returns whether the file is tagged symmetric.
fn parse_header(header: &str) -> Result<bool> {
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(Error::Parameter("missing %%MatrixMarket banner".into()));
    }
    if tokens.len() != 5 || tokens[1] != "matrix" {
        return Err(Error::Parameter(format!("malformed banner '{header}'")));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::Unsupported(format!("{} format", tokens[2])));
    }
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        "pattern" => {
            return Err(Error::Unsupported(
                "pattern-only file carries no values".into(),
            ))
        }
        other => return Err(Error::Unsupported(format!("{other} field"))),
    }
    match tokens[4].as_str() {
        "general" => Ok(false),
        "symmetric" => Ok(true),
        other => Err(Error::Unsupported(format!("{other} symmetry"))),
    }
}

/// Options for [`write_matrix_market`].
#[derive(Debug, Clone, Default)]
pub struct WriteOptions {
    /// Store only the lower triangle under a `symmetric` banner.
    pub symmetric: bool,
    /// Add [`SYNTHETIC_MARKER`] to the header comments.
    pub synthetic: bool,
    pub comments: Vec<String>,
}

pub fn write_matrix_market(path: &Path, m: &CsrMatrix, opts: &WriteOptions) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_matrix_market_to(&mut w, m, opts).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_matrix_market_to<W: Write>(
    w: &mut W,
    m: &CsrMatrix,
    opts: &WriteOptions,
) -> Result<()> {
    if opts.symmetric && !m.is_symmetric() {
        return Err(Error::Precondition(
            "symmetric storage requested for an unsymmetric matrix".into(),
        ));
    }
    let io = |e| Error::io("<matrix market output>", e);
    let kind = if opts.symmetric {
        "symmetric"
    } else {
        "general"
    };
    writeln!(w, "%%MatrixMarket matrix coordinate real {kind}").map_err(io)?;
    if opts.synthetic {
        writeln!(w, "{SYNTHETIC_MARKER}").map_err(io)?;
    }
    for c in &opts.comments {
        writeln!(w, "% {c}").map_err(io)?;
    }
    let stored: Vec<_> = m
        .triplets()
        .filter(|&(r, c, _)| !opts.symmetric || c <= r)
        .collect();
    writeln!(w, "{} {} {}", m.n_rows(), m.n_cols(), stored.len()).map_err(io)?;
    for (r, c, v) in stored {
        writeln!(w, "{} {} {:e}", r + 1, c + 1, v).map_err(io)?;
    }
    Ok(())
}
