//! Explicit rank tables: one integer per subset.
//!
//! Tables are the interchange and oracle form for small ground sets, and the
//! one representation that may legitimately violate the matroid axioms — the
//! Escher scan runs on raw tables precisely to certify that would-be
//! amalgams are not matroids.

use thiserror::Error;

use crate::ground::{GroundSet, Subset};
use crate::matroid::{Matroid, RankOracle};

#[derive(Debug, Error)]
pub enum RankTableError {
    #[error("rank tables support at most {max} elements, got {got}")]
    TooLarge { max: usize, got: usize },
    #[error("table has {got} entries, expected {expected}")]
    WrongSize { got: usize, expected: usize },
}

/// Rank value for every subset of a ground set of at most 20 elements,
/// indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    ground: GroundSet,
    ranks: Vec<u8>,
}

impl RankTable {
    pub const MAX_ELEMENTS: usize = 20;

    pub fn new(ground: GroundSet, ranks: Vec<u8>) -> Result<Self, RankTableError> {
        let n = ground.len();
        if n > Self::MAX_ELEMENTS {
            return Err(RankTableError::TooLarge {
                max: Self::MAX_ELEMENTS,
                got: n,
            });
        }
        if ranks.len() != 1 << n {
            return Err(RankTableError::WrongSize {
                got: ranks.len(),
                expected: 1 << n,
            });
        }
        Ok(RankTable { ground, ranks })
    }

    pub fn from_fn(
        ground: GroundSet,
        f: impl Fn(&Subset) -> usize,
    ) -> Result<Self, RankTableError> {
        let n = ground.len();
        if n > Self::MAX_ELEMENTS {
            return Err(RankTableError::TooLarge {
                max: Self::MAX_ELEMENTS,
                got: n,
            });
        }
        let ranks = (0u32..1 << n)
            .map(|mask| f(&Self::mask_to_subset(n, mask)) as u8)
            .collect();
        Ok(RankTable { ground, ranks })
    }

    /// Interchange form of a matroid.
    pub fn from_oracle<O: RankOracle>(oracle: &O) -> Result<Self, RankTableError> {
        Self::from_fn(oracle.ground().clone(), |s| oracle.rank_subset(s))
    }

    pub fn mask_to_subset(n: usize, mask: u32) -> Subset {
        Subset::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn subset_to_mask(s: &Subset) -> u32 {
        s.iter().fold(0u32, |m, i| m | 1 << i)
    }

    pub fn rank_mask(&self, mask: u32) -> usize {
        self.ranks[mask as usize] as usize
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reconstructs the lattice of flats and validates the matroid axioms.
    pub fn to_matroid(&self, name: Option<String>) -> Result<Matroid, crate::matroid::MatroidError> {
        Matroid::from_rank_oracle(self, name)
    }
}

impl RankOracle for RankTable {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }
    fn rank_subset(&self, x: &Subset) -> usize {
        self.rank_mask(Self::subset_to_mask(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip_uniform() {
        let m = crate::generators::uniform(2, 4).unwrap();
        let t = RankTable::from_oracle(&m).unwrap();
        assert_eq!(t.rank_mask(0b0111), 2);
        assert_eq!(t.rank_mask(0b0001), 1);
        let back = t.to_matroid(None).unwrap();
        assert_eq!(back, m);
    }
}
