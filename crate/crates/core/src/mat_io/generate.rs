use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::CsrMatrix;

/// One diagonal band for [`gen_banded`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    /// Column minus row; positive offsets lie above the main diagonal.
    pub offset: isize,
    /// Probability that a position on the band is stored.
    pub density: f64,
    /// Inclusive range of uniformly drawn values.
    pub range: (f64, f64),
}

impl Band {
    pub fn new(offset: isize, density: f64) -> Self {
        Self {
            offset,
            density,
            range: (-1.0, 1.0),
        }
    }
}

/// Banded matrix with a full main diagonal.
///
/// Band positions are stored with probability `density` and carry values
/// drawn from the band's range. Unless a band with offset 0 supplies the
/// diagonal values, each diagonal entry is set to one more than the larger
/// of its row and column off-diagonal absolute sums, which makes the matrix
/// strictly diagonally dominant in both directions.
pub fn gen_banded(n: usize, bands: &[Band], seed: u64) -> Result<CsrMatrix> {
    if n == 0 {
        return Err(Error::Parameter("dimension must be positive".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for b in bands {
        if b.offset.unsigned_abs() >= n {
            return Err(Error::Parameter(format!(
                "band offset {} outside (-{n}, {n})",
                b.offset
            )));
        }
        if !seen.insert(b.offset) {
            return Err(Error::Parameter(format!(
                "band offset {} repeated",
                b.offset
            )));
        }
        if !(0.0..=1.0).contains(&b.density) {
            return Err(Error::Parameter(format!(
                "band density {} outside [0, 1]",
                b.density
            )));
        }
        if b.range.0 > b.range.1 || !b.range.0.is_finite() || !b.range.1.is_finite() {
            return Err(Error::Parameter(format!(
                "band value range {:?} invalid",
                b.range
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    let mut row_abs = vec![0.0f64; n];
    let mut col_abs = vec![0.0f64; n];
    let mut diag_band = None;
    for b in bands {
        if b.offset == 0 {
            diag_band = Some(*b);
            continue;
        }
        let rows = if b.offset > 0 {
            0..n - b.offset as usize
        } else {
            b.offset.unsigned_abs()..n
        };
        for r in rows {
            let c = (r as isize + b.offset) as usize;
            if rng.gen::<f64>() < b.density {
                let v = rng.gen_range(b.range.0..=b.range.1);
                row_abs[r] += v.abs();
                col_abs[c] += v.abs();
                triplets.push((r, c, v));
            }
        }
    }
    for i in 0..n {
        let v = match diag_band {
            Some(b) => rng.gen_range(b.range.0..=b.range.1),
            None => row_abs[i].max(col_abs[i]) + 1.0,
        };
        triplets.push((i, i, v));
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// Sparse symmetric positive definite matrix.
///
/// Each strictly-lower position is populated with probability
/// `min(0.5, 5 / n)` with a value uniform in `[-1, 1]`, mirrored to the
/// upper triangle; the diagonal is the row absolute sum plus one.
pub fn gen_spd(n: usize, seed: u64) -> Result<CsrMatrix> {
    if n == 0 {
        return Err(Error::Parameter("dimension must be positive".into()));
    }
    let p = (5.0 / n as f64).min(0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    let mut row_abs = vec![0.0f64; n];
    for i in 0..n {
        for j in 0..i {
            if rng.gen::<f64>() < p {
                let v: f64 = rng.gen_range(-1.0..=1.0);
                triplets.push((i, j, v));
                triplets.push((j, i, v));
                row_abs[i] += v.abs();
                row_abs[j] += v.abs();
            }
        }
    }
    for (i, s) in row_abs.iter().enumerate() {
        triplets.push((i, i, s + 1.0));
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// Uniformly random sparsity pattern with values in `[-1, 1]`.
pub fn gen_random(n_rows: usize, n_cols: usize, density: f64, seed: u64) -> Result<CsrMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parameter(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    for r in 0..n_rows {
        for c in 0..n_cols {
            if rng.gen::<f64>() < density {
                triplets.push((r, c, rng.gen_range(-1.0..=1.0)));
            }
        }
    }
    CsrMatrix::from_triplets(n_rows, n_cols, &triplets)
}

/// Replaces (or inserts) the diagonal with one more than the larger of the
/// row and column off-diagonal absolute sums.
pub fn with_dominant_diagonal(m: &CsrMatrix) -> Result<CsrMatrix> {
    m.require_square("diagonal dominance")?;
    let n = m.n_rows();
    let mut row_abs = vec![0.0f64; n];
    let mut col_abs = vec![0.0f64; n];
    let mut triplets: Vec<_> = m.triplets().filter(|&(r, c, _)| r != c).collect();
    for &(r, c, v) in &triplets {
        row_abs[r] += v.abs();
        col_abs[c] += v.abs();
    }
    triplets.extend((0..n).map(|i| (i, i, row_abs[i].max(col_abs[i]) + 1.0)));
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// Arrow matrix: full first row and column plus the diagonal.
pub fn gen_arrow(n: usize) -> Result<CsrMatrix> {
    if n == 0 {
        return Err(Error::Parameter("dimension must be positive".into()));
    }
    let mut triplets = vec![(0, 0, n as f64)];
    for i in 1..n {
        triplets.push((0, i, 1.0));
        triplets.push((i, 0, 1.0));
        triplets.push((i, i, n as f64));
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_bands_gives_diagonal() {
        let m = gen_banded(5, &[], 0).unwrap();
        assert_eq!(m.nnz(), 5);
        assert!(m.triplets().all(|(r, c, v)| r == c && v == 1.0));
    }

    #[test]
    fn full_tridiagonal_count() {
        let m = gen_banded(100, &[Band::new(1, 1.0), Band::new(-1, 1.0)], 7).unwrap();
        assert_eq!(m.nnz(), 298);
    }

    #[test]
    fn banded_is_deterministic() {
        let bands = [Band::new(3, 0.4), Band::new(-2, 0.7)];
        assert_eq!(
            gen_banded(50, &bands, 9).unwrap(),
            gen_banded(50, &bands, 9).unwrap()
        );
        assert_ne!(
            gen_banded(50, &bands, 9).unwrap(),
            gen_banded(50, &bands, 10).unwrap()
        );
    }

    #[test]
    fn banded_parameter_errors() {
        assert!(gen_banded(0, &[], 0).is_err());
        assert!(gen_banded(4, &[Band::new(4, 0.5)], 0).is_err());
        assert!(gen_banded(4, &[Band::new(-4, 0.5)], 0).is_err());
        assert!(gen_banded(4, &[Band::new(1, 1.5)], 0).is_err());
        assert!(gen_banded(4, &[Band::new(1, 0.5), Band::new(1, 0.2)], 0).is_err());
    }

    #[test]
    fn explicit_diagonal_band_sets_values() {
        let band = Band {
            offset: 0,
            density: 0.1,
            range: (2.0, 2.0),
        };
        let m = gen_banded(6, &[band], 1).unwrap();
        assert_eq!(m.nnz(), 6);
        assert!(m.values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn banded_entries_stay_on_requested_bands() {
        let m = gen_banded(40, &[Band::new(5, 0.5), Band::new(-3, 0.5)], 2).unwrap();
        for (r, c, _) in m.triplets() {
            let off = c as isize - r as isize;
            assert!(off == 0 || off == 5 || off == -3);
        }
    }

    #[test]
    fn spd_single_entry() {
        let m = gen_spd(1, 3).unwrap();
        assert_eq!(m.nnz(), 1);
        assert!(m.values()[0] > 0.0);
    }

    #[test]
    fn spd_is_symmetric_and_dominant() {
        let m = gen_spd(30, 11).unwrap();
        assert!(m.is_symmetric());
        for r in 0..30 {
            let (cols, vals) = m.row(r);
            let off: f64 = cols
                .iter()
                .zip(vals)
                .filter(|(&c, _)| c != r)
                .map(|(_, v)| v.abs())
                .sum();
            assert!(m.get(r, r).unwrap() > off);
        }
    }

    #[test]
    fn arrow_shape() {
        let m = gen_arrow(6).unwrap();
        assert_eq!(m.nnz(), 6 + 2 * 5);
        assert!(m.is_symmetric());
    }
}
