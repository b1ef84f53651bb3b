//! Projected subgradient descent on the exact Lovász extension, used as a reference point in
//! benchmarks.

use std::time::Instant;

use crate::certify::round_to_sets;
use crate::error::{Error, Result};
use crate::model::{lovasz, DecomposableFunction, Subset};
use crate::solver::{gap_from_grad, TraceRow};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub x_final: Vec<f64>,
    pub best_set: Subset,
    pub best_value: f64,
    /// Smallest `max_{z∈[0,1]^n} g·(x − z)` seen; bounds `f(best_set) − min f`.
    pub best_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
}

/// Runs `x ← P(x − g/√(t+1))` from `½1` until the linearized gap drops to `epsilon` or the
/// budget runs out. Each step costs one Lovász subgradient; rounding reuses its prefix values.
pub fn projected_subgradient(
    f: &DecomposableFunction,
    epsilon: f64,
    max_iters: usize,
) -> Result<BaselineResult> {
    if !(epsilon > 0.0) {
        return Err(Error::Parameter(format!("epsilon = {epsilon} must be > 0")));
    }
    let start = Instant::now();
    let n = f.n();
    let mut x = vec![0.5; n];
    let mut best_set = Subset::empty(n);
    let mut best_value = 0.0;
    let mut best_gap = f64::INFINITY;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    for t in 0..max_iters {
        let p = lovasz(f, &x)?;
        iterations = t + 1;
        let (i, &v) = p
            .prefix_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("prefix values are never empty");
        if v < best_value {
            best_value = v;
            best_set = Subset::from_indices(n, &p.order[..i])?;
        }
        let gap = gap_from_grad(&x, &p.subgradient);
        best_gap = best_gap.min(gap);
        trace.push(TraceRow {
            iter: t,
            f_mu: p.value,
            gap,
            best_f: best_value,
            cert_gap: None,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        if gap <= epsilon {
            converged = true;
            break;
        }
        let step = 1.0 / (t as f64 + 1.0).sqrt();
        for (xk, g) in x.iter_mut().zip(&p.subgradient) {
            *xk = (*xk - step * g).clamp(0.0, 1.0);
        }
    }
    let r = round_to_sets(&x, f)?;
    if r.value < best_value {
        best_value = r.value;
        best_set = r.sets[0].clone();
    }
    Ok(BaselineResult {
        x_final: x,
        best_set,
        best_value,
        best_gap,
        iterations,
        converged,
        trace,
    })
}
