use crate::error::{Error, Result};

use super::Subset;

pub const BRUTE_FORCE_MAX_N: usize = 24;
pub const SUBMODULARITY_MAX_N: usize = 14;

/// Evaluation contract for set functions with `f(∅) = 0`.
pub trait SetFunction {
    fn ground_size(&self) -> usize;

    fn eval_mask(&self, mask: &[bool]) -> f64;

    fn eval_set(&self, a: &Subset) -> f64 {
        self.eval_mask(a.mask())
    }

    /// Values `f(S_0), .., f(S_m)` of the prefixes `S_i = {order[0], .., order[i-1]}`.
    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut mask = vec![false; self.ground_size()];
        let mut out = Vec::with_capacity(order.len() + 1);
        out.push(self.eval_mask(&mask));
        for &k in order {
            mask[k] = true;
            out.push(self.eval_mask(&mask));
        }
        out
    }
}

/// Set function given by a closure over membership masks.
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[bool]) -> f64> FnSetFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnSetFunction { n, f }
    }
}

impl<F: Fn(&[bool]) -> f64> SetFunction for FnSetFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval_mask(&self, mask: &[bool]) -> f64 {
        (self.f)(mask)
    }
}

/// Absolute tolerance `abs · max(1, scale)` for exact-identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-9)
    }
}

impl Tolerance {
    pub fn scaled(self, scale: f64) -> f64 {
        self.0 * scale.abs().max(1.0)
    }
}

/// Indices sorted by descending `x`, ascending index on ties.
pub fn descending_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
    order
}

/// Value and subgradient of the Lovász extension at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct LovaszPoint {
    pub value: f64,
    pub subgradient: Vec<f64>,
    /// Sorting permutation used; the subgradient depends on it when `x` has ties.
    pub order: Vec<usize>,
    /// `f(S_0), .., f(S_n)` along `order`.
    pub prefix_values: Vec<f64>,
}

/// Lovász extension by the sorted-prefix formula.
pub fn lovasz<F: SetFunction + ?Sized>(f: &F, x: &[f64]) -> Result<LovaszPoint> {
    let n = f.ground_size();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("non-finite point".into()));
    }
    let order = descending_order(x);
    let prefix_values = f.prefix_values(&order);
    let mut subgradient = vec![0.0; n];
    let mut value = 0.0;
    for (i, &k) in order.iter().enumerate() {
        let gain = prefix_values[i + 1] - prefix_values[i];
        subgradient[k] = gain;
        value += x[k] * gain;
    }
    Ok(LovaszPoint {
        value,
        subgradient,
        order,
        prefix_values,
    })
}

/// Exact minimum over all subsets.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceMin {
    pub value: f64,
    /// Every minimizer (within tolerance), in lexicographic order.
    pub argmins: Vec<Subset>,
}

pub fn brute_force_minimize<F: SetFunction + ?Sized>(f: &F) -> Result<BruteForceMin> {
    let n = f.ground_size();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let count = 1u64 << n;
    let mut mask = vec![false; n];
    let eval_bits = |bits: u64, mask: &mut Vec<bool>| {
        for (k, m) in mask.iter_mut().enumerate() {
            *m = bits >> k & 1 == 1;
        }
        f.eval_mask(mask)
    };
    let mut best = f64::INFINITY;
    for bits in 0..count {
        best = best.min(eval_bits(bits, &mut mask));
    }
    let tol = Tolerance::default().scaled(best);
    let mut argmins = Vec::new();
    for bits in 0..count {
        if eval_bits(bits, &mut mask) <= best + tol {
            argmins.push(Subset::from_bits(n, bits));
        }
    }
    argmins.sort();
    Ok(BruteForceMin {
        value: best,
        argmins,
    })
}

/// Outcome of an exhaustive submodularity audit.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularityCheck {
    pub ok: bool,
    /// A pair `(A, B)` with `f(A ∪ B) + f(A ∩ B) > f(A) + f(B)`.
    pub witness: Option<(Subset, Subset)>,
    /// Largest violation found (`≤ 0` when submodular).
    pub max_violation: f64,
}

pub fn check_submodular<F: SetFunction + ?Sized>(f: &F) -> Result<SubmodularityCheck> {
    check_submodular_with_tol(f, Tolerance::default())
}

/// Checks `f(A ∪ B) + f(A ∩ B) ≤ f(A) + f(B)` over all pairs.
///
/// Uses the equivalent local form `f(S+k) + f(S+l) ≥ f(S+k+l) + f(S)` for `k, l ∉ S`, which
/// costs `O(2^n n²)` instead of `O(4^n)`. The witness returned is `(S+k, S+l)`.
pub fn check_submodular_with_tol<F: SetFunction + ?Sized>(
    f: &F,
    tol: Tolerance,
) -> Result<SubmodularityCheck> {
    let n = f.ground_size();
    if n > SUBMODULARITY_MAX_N {
        return Err(Error::Capacity {
            n,
            max: SUBMODULARITY_MAX_N,
        });
    }
    let count = 1usize << n;
    let mut mask = vec![false; n];
    let table: Vec<f64> = (0..count)
        .map(|bits| {
            for (k, m) in mask.iter_mut().enumerate() {
                *m = bits >> k & 1 == 1;
            }
            f.eval_mask(&mask)
        })
        .collect();
    let scale = table.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let limit = tol.scaled(scale);
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for s in 0..count {
        for k in (0..n).filter(|&k| s >> k & 1 == 0) {
            for l in (k + 1..n).filter(|&l| s >> l & 1 == 0) {
                let (sk, sl) = (s | 1 << k, s | 1 << l);
                let violation = table[sk | 1 << l] + table[s] - table[sk] - table[sl];
                if violation > worst {
                    worst = violation;
                    if violation > limit {
                        witness = Some((sk, sl));
                    }
                }
            }
        }
    }
    Ok(SubmodularityCheck {
        ok: witness.is_none(),
        witness: witness.map(|(a, b)| (Subset::from_bits(n, a as u64), Subset::from_bits(n, b as u64))),
        max_violation: if worst.is_finite() { worst } else { 0.0 },
    })
}
