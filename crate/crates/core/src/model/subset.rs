use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Number of elements in the ground set `{0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("ground set must be non-empty".into()));
        }
        Ok(GroundSet(n))
    }

    pub fn size(self) -> usize {
        self.0
    }
}

/// A subset of the ground set, stored as a membership mask.
///
/// Ordering is lexicographic on the sorted member lists, so `{} < {0} < {0,1} < {1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    mask: Vec<bool>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Subset {
            mask: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &k in members {
            if k >= n {
                return Err(Error::InvalidSubset(format!(
                    "index {k} out of range for ground set of size {n}"
                )));
            }
            mask[k] = true;
        }
        Ok(Subset { mask })
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Subset { mask }
    }

    /// Subset whose members are the set bits of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Subset {
            mask: (0..n).map(|k| bits >> k & 1 == 1).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, k: usize) -> bool {
        self.mask.get(k).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| b.then_some(k))
    }

    /// Indicator vector `e_A`.
    pub fn indicator(&self) -> Vec<f64> {
        self.mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    pub fn insert(&mut self, k: usize) {
        self.mask[k] = true;
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}
