use super::generate::{gen_banded, Band};
use super::symmetrize_lower;
use crate::error::Result;
use crate::types::CsrMatrix;

/// A synthetic matrix shaped like one of the collection matrices.
///
/// Dimensions and symmetry class follow the published characteristics;
/// sparsity comes from diagonal bands, so entry counts are approximate.
#[derive(Debug, Clone)]
pub struct StandIn {
    pub name: &'static str,
    pub matrix: CsrMatrix,
    /// Write with a `symmetric` banner (lower triangle only).
    pub symmetric_storage: bool,
}

fn paired(offsets: &[isize], up: f64, down: f64) -> Vec<Band> {
    offsets
        .iter()
        .flat_map(|&o| [Band::new(o, up), Band::new(-o, down)])
        .collect()
}

/// Builds the five stand-ins; deterministic.
pub fn standins() -> Result<Vec<StandIn>> {
    let add32 = gen_banded(4960, &paired(&[1, 40, 97], 0.55, 0.4), 32)?;
    let utm5940 = gen_banded(
        5940,
        &paired(&[1, 2, 3, 5, 8, 13, 21, 34, 55, 89], 0.85, 0.45),
        5940,
    )?;
    let sherman3 = gen_banded(5005, &paired(&[1, 35], 1.0, 1.0), 3)?;
    let codecs = gen_banded(
        4812,
        &[
            Band::new(1, 0.9),
            Band::new(-1, 0.9),
            Band::new(4, 0.8),
            Band::new(-6, 0.7),
            Band::new(17, 0.75),
            Band::new(-23, 0.6),
            Band::new(31, 0.6),
            Band::new(-47, 0.55),
            Band::new(60, 0.5),
            Band::new(-80, 0.5),
            Band::new(-99, 0.5),
        ],
        4812,
    )?;
    let lower: Vec<Band> = (1..=40).map(|o| Band::new(-o, 0.49)).collect();
    let bcsstk13 = spd_from_lower(&gen_banded(2003, &lower, 13)?)?;

    Ok(vec![
        StandIn {
            name: "add32",
            matrix: add32,
            symmetric_storage: false,
        },
        StandIn {
            name: "utm5940",
            matrix: utm5940,
            symmetric_storage: false,
        },
        StandIn {
            name: "sherman3",
            matrix: sherman3,
            symmetric_storage: false,
        },
        StandIn {
            name: "codecs4812.dc",
            matrix: codecs,
            symmetric_storage: false,
        },
        StandIn {
            name: "bcsstk13",
            matrix: bcsstk13,
            symmetric_storage: true,
        },
    ])
}

// Mirrors the lower triangle and rebuilds a dominant diagonal.
fn spd_from_lower(m: &CsrMatrix) -> Result<CsrMatrix> {
    super::generate::with_dominant_diagonal(&symmetrize_lower(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat_io::{published_entry, Symmetry};

    #[test]
    fn standins_match_published_shape() {
        for s in standins().unwrap() {
            let expected = published_entry(s.name).unwrap();
            assert_eq!(s.matrix.n_rows(), expected.n_rows, "{}", s.name);
            assert_eq!(
                Symmetry::classify(&s.matrix),
                expected.symmetry,
                "{}",
                s.name
            );
            assert_eq!(
                s.symmetric_storage,
                expected.symmetry == Symmetry::Symmetric
            );
        }
    }
}
