use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A relabeling of `0..n`.
///
/// `forward[old] = new` and `inverse[new] = old`. For example the forward
/// map `[2, 0, 1]` sends row 0 to position 2, so applying it symmetrically
/// to `diag(a, b, c)` yields `diag(b, c, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// Validates `forward` as a bijection and derives the inverse.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (old, &new) in forward.iter().enumerate() {
            if new >= n || inverse[new] != usize::MAX {
                return Err(Error::Precondition(format!(
                    "not a permutation: label {new} invalid or repeated"
                )));
            }
            inverse[new] = old;
        }
        Ok(Self { forward, inverse })
    }

    /// Builds from the list of old indices in new-label order.
    pub fn from_inverse(inverse: Vec<usize>) -> Result<Self> {
        let p = Self::from_forward(inverse)?;
        Ok(Self {
            forward: p.inverse,
            inverse: p.forward,
        })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_consistent() {
        let p = Permutation::from_forward(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse(), &[1, 2, 0]);
        let q = Permutation::from_inverse(vec![1, 2, 0]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_forward(vec![0, 0]).is_err());
        assert!(Permutation::from_forward(vec![0, 2]).is_err());
    }
}
