use crate::error::{Error, Result};

/// Nonnegative weight vector in `[0, 1]^n`, stored by its support.
///
/// Entries are sorted by index and strictly positive; zero weights are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseWeights {
    entries: Vec<(usize, f64)>,
    total: f64,
}

impl SparseWeights {
    /// Builds a weight vector over a ground set of size `n`. Duplicate indices are rejected.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut kept = Vec::new();
        for (k, w) in entries {
            if k >= n {
                return Err(Error::InvalidSubset(format!(
                    "weight index {k} out of range for n = {n}"
                )));
            }
            if !w.is_finite() || w < 0.0 || w > 1.0 + 1e-12 {
                return Err(Error::InvalidWeight(format!(
                    "weight {w} at index {k} outside [0, 1]"
                )));
            }
            if w > 0.0 {
                kept.push((k, w.min(1.0)));
            }
        }
        kept.sort_by_key(|&(k, _)| k);
        if let Some(pair) = kept.windows(2).find(|p| p[0].0 == p[1].0) {
            return Err(Error::InvalidWeight(format!(
                "duplicate weight index {}",
                pair[0].0
            )));
        }
        let total = kept.iter().map(|&(_, w)| w).sum();
        Ok(SparseWeights {
            entries: kept,
            total,
        })
    }

    pub fn from_dense(w: &[f64]) -> Result<Self> {
        SparseWeights::new(w.len(), w.iter().copied().enumerate())
    }

    /// The indicator vector `e_S`.
    pub fn indicator(n: usize, members: &[usize]) -> Result<Self> {
        SparseWeights::new(n, members.iter().map(|&k| (k, 1.0)))
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `w · 1`
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|&(k, _)| k)
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|&(k, w)| w * x[k]).sum()
    }

    pub fn dot_mask(&self, mask: &[bool]) -> f64 {
        self.entries
            .iter()
            .filter(|&&(k, _)| mask[k])
            .map(|&(_, w)| w)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for &(k, w) in &self.entries {
            out[k] = w;
        }
        out
    }

    /// `max ‖v‖²` over `{v : 0 ≤ v ≤ w, v · 1 = y}`, attained by filling the largest weights first.
    pub fn max_sq_norm(&self, y: f64) -> f64 {
        let mut ws: Vec<f64> = self.entries.iter().map(|&(_, w)| w).collect();
        ws.sort_by(|a, b| b.total_cmp(a));
        let mut rest = y.max(0.0);
        let mut acc = 0.0;
        for w in ws {
            if rest <= 0.0 {
                break;
            }
            let take = w.min(rest);
            acc += take * take;
            rest -= take;
        }
        acc
    }
}
