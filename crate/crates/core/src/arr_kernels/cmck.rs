use crate::error::{Error, Result};
use crate::types::{CsrMatrix, Permutation};

/// Scratch state of a Cuthill-McKee run.
#[derive(Debug, Clone)]
pub struct CmckWork {
    /// Off-diagonal entry count per node.
    pub degrees: Vec<usize>,
    /// `labeled[v]` iff `v` is already in `order`.
    pub labeled: Vec<bool>,
    /// Old node indices in new-label order; filled front to back.
    pub order: Vec<usize>,
    /// Next position of `order` to expand.
    pub head: usize,
}

impl CmckWork {
    pub fn new(m: &CsrMatrix) -> Self {
        let n = m.n_rows();
        let degrees = (0..n)
            .map(|i| {
                let (cols, _) = m.row(i);
                cols.len() - usize::from(cols.binary_search(&i).is_ok())
            })
            .collect();
        Self {
            degrees,
            labeled: vec![false; n],
            order: Vec::with_capacity(n),
            head: 0,
        }
    }
}

/// Maximum `|row - col|` over stored entries.
pub fn bandwidth(m: &CsrMatrix) -> Result<usize> {
    m.require_square("bandwidth")?;
    Ok(m.triplets()
        .map(|(r, c, _)| r.abs_diff(c))
        .max()
        .unwrap_or(0))
}

/// Cuthill-McKee ordering of a pattern-symmetric matrix.
///
/// Returns `forward[old] = new`. Each component is seeded from its
/// unlabeled node of least degree; expanded nodes append their unlabeled
/// neighbours by ascending degree. Degree ties go to the lowest index.
pub fn cmck(m: &CsrMatrix) -> Result<Permutation> {
    m.require_square("Cuthill-McKee")?;
    if !m.is_pattern_symmetric() {
        return Err(Error::Precondition(
            "Cuthill-McKee needs a structurally symmetric matrix".into(),
        ));
    }
    let mut work = CmckWork::new(m);
    cmck_order(m, &mut work);
    Permutation::from_inverse(work.order)
}

/// Fills `work.order` without checking preconditions.
///
/// Candidate selection is a repeated scan for the strictly smallest degree,
/// so the first minimum in index order is kept.
pub fn cmck_order(m: &CsrMatrix, work: &mut CmckWork) {
    let n = m.n_rows();
    let ia = m.row_ptr();
    let ja = m.col_ind();
    let deg = &work.degrees;
    let consd = &mut work.labeled;
    let parray = &mut work.order;

    while parray.len() < n {
        let mut low = usize::MAX;
        let mut lowl = usize::MAX;
        for i in 0..n {
            if consd[i] || deg[i] >= low {
                continue;
            }
            low = deg[i];
            lowl = i;
        }
        consd[lowl] = true;
        parray.push(lowl);

        while work.head < parray.len() {
            let node = parray[work.head];
            work.head += 1;
            loop {
                let mut low = usize::MAX;
                let mut lowl = usize::MAX;
                for &j in &ja[ia[node]..ia[node + 1]] {
                    if consd[j] || deg[j] >= low {
                        continue;
                    }
                    low = deg[j];
                    lowl = j;
                }
                if lowl == usize::MAX {
                    break;
                }
                consd[lowl] = true;
                parray.push(lowl);
            }
        }
    }
}
