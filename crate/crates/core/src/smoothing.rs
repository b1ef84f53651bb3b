//! Smoothed Lovász extensions of threshold and concave potentials.
//!
//! For a threshold potential `min(y, w · e_A)` the smoothed extension is
//!
//! ```text
//! Ψ^μ(x) = max_{v ∈ D(w, y)} v · x − (μ/2)‖v‖²,   D(w, y) = {v : 0 ≤ v ≤ w, v · 1 = y}
//! ```
//!
//! whose gradient is the projection of `x/μ` onto `D(w, y)`:
//! `v* = clamp((x − t*)/μ, 0, w)` with `t*` the root of `ρ(t) = clamp((x − t)/μ, 0, w) · 1 = y`.
//! `ρ` is piecewise linear in `t`, so `t*` is resolved exactly on its segment after sorting
//! the breakpoints `{x[k]} ∪ {x[k] − μ w[k]}`.
//!
//! Concave potentials are reduced to thresholds through their kinks:
//! `φ(s) = φ'(T) s + Σ_m drop_m · min(s, y_m)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ConcavePotential, DecomposableFunction, SparseWeights, ThresholdPotential};

/// Value and gradient of a smoothed extension at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedGradientResult {
    pub value: f64,
    pub grad: Vec<f64>,
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("smoothing parameter mu = {mu} must be > 0")))
    }
}

fn check_point(x: &[f64], w: &SparseWeights) -> Result<()> {
    if let Some(k) = w.max_index() {
        if k >= x.len() {
            return Err(Error::LengthMismatch {
                expected: k + 1,
                got: x.len(),
            });
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("non-finite point".into()));
    }
    Ok(())
}

fn check_level(w: &SparseWeights, y: f64) -> Result<f64> {
    let total = w.total();
    let slack = 1e-12 * total.max(1.0);
    if !y.is_finite() || y < -slack || y > total + slack {
        return Err(Error::InfeasibleThreshold { y, total });
    }
    Ok(y.clamp(0.0, total))
}

/// `ρ(t) = Σ_k clamp((x[k] − t)/μ, 0, w[k])`; continuous, piecewise linear, nonincreasing.
pub fn rho(x: &[f64], w: &SparseWeights, mu: f64, t: f64) -> Result<f64> {
    check_mu(mu)?;
    check_point(x, w)?;
    Ok(rho_unchecked(x, w, mu, t))
}

fn rho_unchecked(x: &[f64], w: &SparseWeights, mu: f64, t: f64) -> f64 {
    w.entries()
        .iter()
        .map(|&(k, wk)| ((x[k] - t) / mu).clamp(0.0, wk))
        .sum()
}

/// Breakpoint of `ρ`: passing `t` downward activates (`+1`) or saturates (`-1`) a component.
#[derive(Debug, Clone, Copy)]
struct Event {
    t: f64,
    delta: i32,
}

/// Reusable buffers for threshold projections.
#[derive(Debug, Default)]
struct Scratch {
    events: Vec<Event>,
    v: Vec<f64>,
}

fn fill_events(x: &[f64], w: &SparseWeights, mu: f64, events: &mut Vec<Event>) {
    events.clear();
    for &(k, wk) in w.entries() {
        events.push(Event { t: x[k], delta: 1 });
        events.push(Event {
            t: x[k] - mu * wk,
            delta: -1,
        });
    }
    events.sort_by(|a, b| b.t.total_cmp(&a.t));
}

fn t_star_from_events(x: &[f64], w: &SparseWeights, mu: f64, y: f64, events: &[Event]) -> f64 {
    let total = w.total();
    let entries = w.entries();
    if entries.is_empty() {
        return 0.0;
    }
    if y <= 0.0 {
        return entries.iter().map(|&(k, _)| x[k]).fold(f64::NEG_INFINITY, f64::max);
    }
    if y >= total {
        return entries
            .iter()
            .map(|&(k, wk)| x[k] - mu * wk)
            .fold(f64::INFINITY, f64::min);
    }
    let tol = 1e-12 * total.max(1.0);
    let mut rho = 0.0;
    let mut active: i64 = 0;
    let mut t_prev = events[0].t;
    let mut i = 0;
    while i < events.len() {
        let te = events[i].t;
        let rho_e = rho + active as f64 * (t_prev - te) / mu;
        if active > 0 && rho_e > y + tol {
            return t_prev - (y - rho) * mu / active as f64;
        }
        let mut j = i;
        while j < events.len() && events[j].t == te {
            active += events[j].delta as i64;
            j += 1;
        }
        if rho_e >= y - tol {
            if active == 0 {
                // ρ is flat at level y down to the next breakpoint
                return match events.get(j) {
                    Some(next) => 0.5 * (te + next.t),
                    None => te,
                };
            }
            return te;
        }
        rho = rho_e;
        t_prev = te;
        i = j;
    }
    events[events.len() - 1].t
}

/// Root `t*` of `ρ(t) = y`.
///
/// Non-unique roots follow a fixed convention: `max x` for `y = 0`, `min (x − μw)` for
/// `y = w · 1`, and the midpoint of the solution interval for interior flat segments.
pub fn solve_t_star(x: &[f64], w: &SparseWeights, mu: f64, y: f64) -> Result<f64> {
    check_mu(mu)?;
    check_point(x, w)?;
    let y = check_level(w, y)?;
    let mut events = Vec::new();
    fill_events(x, w, mu, &mut events);
    Ok(t_star_from_events(x, w, mu, y, &events))
}

/// Projects `x/μ` onto `D(w, y)`; writes `v*` (aligned with `w.entries()`) into `scratch.v`
/// and returns `v* · x − (μ/2)‖v*‖²`.
fn project_threshold(x: &[f64], w: &SparseWeights, y: f64, mu: f64, scratch: &mut Scratch) -> f64 {
    scratch.v.clear();
    let entries = w.entries();
    if let [(k, wk), (l, wl)] = *entries {
        if wk == 1.0 && wl == 1.0 && y == 1.0 {
            let (vk, vl) = two_potential_pair(x[k], x[l], mu);
            scratch.v.extend([vk, vl]);
            return vk * x[k] + vl * x[l] - 0.5 * mu * (vk * vk + vl * vl);
        }
    }
    fill_events(x, w, mu, &mut scratch.events);
    let t = t_star_from_events(x, w, mu, y, &scratch.events);
    let mut value = 0.0;
    let mut sq = 0.0;
    for &(k, wk) in entries {
        let v = ((x[k] - t) / mu).clamp(0.0, wk);
        value += v * x[k];
        sq += v * v;
        scratch.v.push(v);
    }
    value - 0.5 * mu * sq
}

/// Smoothed extension of `min(y, w · e_A)` and its gradient `v*`.
///
/// `x` may lie outside the unit cube; the projection is well defined for any real point.
pub fn smoothed_threshold(
    x: &[f64],
    w: &SparseWeights,
    y: f64,
    mu: f64,
) -> Result<SmoothedGradientResult> {
    check_mu(mu)?;
    check_point(x, w)?;
    let y = check_level(w, y)?;
    let mut scratch = Scratch::default();
    let value = project_threshold(x, w, y, mu, &mut scratch);
    let mut grad = vec![0.0; x.len()];
    for (&(k, _), &v) in w.entries().iter().zip(&scratch.v) {
        grad[k] = v;
    }
    Ok(SmoothedGradientResult { value, grad })
}

fn two_potential_pair(xk: f64, xl: f64, mu: f64) -> (f64, f64) {
    let diff = xk - xl;
    if diff >= mu {
        (1.0, 0.0)
    } else if -diff >= mu {
        (0.0, 1.0)
    } else {
        let s = diff / mu;
        (0.5 * (1.0 + s), 0.5 * (1.0 - s))
    }
}

/// Gradient of the smoothed `min(1, e_kl · e_A)` in closed form.
pub fn two_potential_grad(x: &[f64], k: usize, l: usize, mu: f64) -> Result<Vec<f64>> {
    check_mu(mu)?;
    if k == l {
        return Err(Error::Parameter(format!("2-potential needs k != l, got {k}")));
    }
    if k.max(l) >= x.len() {
        return Err(Error::LengthMismatch {
            expected: k.max(l) + 1,
            got: x.len(),
        });
    }
    let (vk, vl) = two_potential_pair(x[k], x[l], mu);
    let mut grad = vec![0.0; x.len()];
    grad[k] = vk;
    grad[l] = vl;
    Ok(grad)
}

/// Piecewise-linear structure of `y ↦ v*(y)` for fixed `x`, `w`, `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointProfile {
    /// Dual breakpoints, decreasing.
    pub t: Vec<f64>,
    /// Threshold levels `ρ(t_i)`, strictly increasing from `0` to `w · 1`.
    pub y: Vec<f64>,
    /// `θ_i = v*(y_i)`, aligned with `support`.
    pub theta: Vec<Vec<f64>>,
    pub support: Vec<usize>,
}

impl BreakpointProfile {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn theta_dense(&self, i: usize, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&k, &v) in self.support.iter().zip(&self.theta[i]) {
            out[k] = v;
        }
        out
    }

    /// `v*` at level `y`; `v*` is linear in `y` between consecutive profile levels.
    fn theta_at(&self, y: f64) -> Vec<f64> {
        let i = self.y.partition_point(|&b| b < y);
        if i == self.y.len() {
            return self.theta[i - 1].clone();
        }
        if i == 0 || self.y[i] == y {
            return self.theta[i].clone();
        }
        let s = (y - self.y[i - 1]) / (self.y[i] - self.y[i - 1]);
        self.theta[i - 1]
            .iter()
            .zip(&self.theta[i])
            .map(|(lo, hi)| lo + s * (hi - lo))
            .collect()
    }
}

/// Breakpoints of the smoothed threshold gradient as a function of the level `y`.
pub fn threshold_profile(x: &[f64], w: &SparseWeights, mu: f64) -> Result<BreakpointProfile> {
    check_mu(mu)?;
    check_point(x, w)?;
    let support: Vec<usize> = w.entries().iter().map(|&(k, _)| k).collect();
    let total = w.total();
    if support.is_empty() {
        return Ok(BreakpointProfile {
            t: vec![0.0],
            y: vec![0.0],
            theta: vec![Vec::new()],
            support,
        });
    }
    let mut events = Vec::new();
    fill_events(x, w, mu, &mut events);
    let mut ts = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut rho = 0.0;
    let mut active: i64 = 0;
    let mut t_prev = events[0].t;
    let mut i = 0;
    while i < events.len() {
        let te = events[i].t;
        rho += active as f64 * (t_prev - te) / mu;
        if ys.last().map_or(true, |&last| rho > last) {
            ts.push(te);
            ys.push(rho);
        }
        while i < events.len() && events[i].t == te {
            active += events[i].delta as i64;
            i += 1;
        }
        t_prev = te;
    }
    if let Some(last) = ys.last_mut() {
        *last = total;
    }
    let theta = ts
        .iter()
        .map(|&t| {
            w.entries()
                .iter()
                .map(|&(k, wk)| ((x[k] - t) / mu).clamp(0.0, wk))
                .collect()
        })
        .collect();
    Ok(BreakpointProfile {
        t: ts,
        y: ys,
        theta,
        support,
    })
}

fn check_concave(x: &[f64], p: &ConcavePotential, mu: f64) -> Result<()> {
    check_mu(mu)?;
    check_point(x, p.weights())?;
    let total = p.weights().total();
    let end = p.curve().end();
    if (end - total).abs() > 1e-9 * total.max(1.0) {
        return Err(Error::DomainMismatch {
            curve_end: end,
            weight_total: total,
        });
    }
    Ok(())
}

/// Value of the smoothed concave potential through its kink decomposition.
fn concave_value(x: &[f64], p: &ConcavePotential, mu: f64, scratch: &mut Scratch) -> f64 {
    let w = p.weights();
    let total = w.total();
    let mut value = p.curve().final_slope() * w.dot(x);
    for (pos, drop) in p.curve().kinks() {
        value += drop * project_threshold(x, w, pos.min(total), mu, scratch);
    }
    value
}

/// Smoothed extension of a concave potential.
///
/// The gradient is `Σ_i (θ_i − θ_{i−1}) (φ(y_i) − φ(y_{i−1})) / (y_i − y_{i−1})` over the union
/// of the profile levels and the curve kinks, where `φ` is linear on every interval; the
/// difference quotient is taken as the slope of the containing curve piece.
pub fn smoothed_concave(x: &[f64], p: &ConcavePotential, mu: f64) -> Result<SmoothedGradientResult> {
    check_concave(x, p, mu)?;
    let w = p.weights();
    let mut grad = vec![0.0; x.len()];
    let total = w.total();
    if total == 0.0 {
        return Ok(SmoothedGradientResult { value: 0.0, grad });
    }
    let profile = threshold_profile(x, w, mu)?;
    let mut levels: Vec<f64> = profile
        .y
        .iter()
        .copied()
        .chain(
            p.curve()
                .kinks()
                .into_iter()
                .map(|(pos, _)| pos)
                .filter(|&pos| pos > 0.0 && pos < total),
        )
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let curve = p.curve();
    let mut sparse = vec![0.0; w.support_len()];
    let mut prev = profile.theta_at(levels[0]);
    for pair in levels.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let next = profile.theta_at(b);
        let slope = curve.slope_on(a, b);
        for ((acc, hi), lo) in sparse.iter_mut().zip(&next).zip(&prev) {
            *acc += (hi - lo) * slope;
        }
        prev = next;
    }
    for (&(k, _), v) in w.entries().iter().zip(sparse) {
        grad[k] = v;
    }
    let value = concave_value(x, p, mu, &mut Scratch::default());
    Ok(SmoothedGradientResult { value, grad })
}

/// Explicit finite decomposition `φ'(T) w·x + Σ_m drop_m Ψ^μ_{w, y_m}(x)`, one threshold per kink.
pub fn concave_kink_sum(x: &[f64], p: &ConcavePotential, mu: f64) -> Result<SmoothedGradientResult> {
    check_concave(x, p, mu)?;
    let w = p.weights();
    let total = w.total();
    let slope = p.curve().final_slope();
    let mut grad = vec![0.0; x.len()];
    for &(k, wk) in w.entries() {
        grad[k] = slope * wk;
    }
    let mut value = slope * w.dot(x);
    for (pos, drop) in p.curve().kinks() {
        let r = smoothed_threshold(x, w, pos.min(total), mu)?;
        value += drop * r.value;
        for &(k, _) in w.entries() {
            grad[k] += drop * r.grad[k];
        }
    }
    Ok(SmoothedGradientResult { value, grad })
}

/// `D`: sum of potential coefficients, each weighted by `max(1, max_{v∈D(w,y)} ‖v‖²)`.
///
/// With this weighting `(D/μ)` bounds the gradient Lipschitz constant and `μD/2` bounds the
/// smoothing error `f̃ − f̃^μ` on the unit cube. For thresholds with `y ≤ 1` (2-potentials,
/// set cover) it reduces to `Σ d_j`; a concave curve contributes its slope drops.
pub fn effective_d(f: &DecomposableFunction) -> f64 {
    let thresholds: f64 = f
        .thresholds()
        .iter()
        .map(|t| t.d() * t.weights().max_sq_norm(t.y()).max(1.0))
        .sum();
    let concaves: f64 = f
        .concaves()
        .iter()
        .map(|p| {
            p.curve()
                .kinks()
                .into_iter()
                .map(|(pos, drop)| drop * p.weights().max_sq_norm(pos).max(1.0))
                .sum::<f64>()
        })
        .sum();
    thresholds + concaves
}

/// Plain `Σ_j d_j` plus total slope drop of every concave curve, without the norm weighting.
pub fn coefficient_sum(f: &DecomposableFunction) -> f64 {
    let thresholds: f64 = f.thresholds().iter().map(ThresholdPotential::d).sum();
    let concaves: f64 = f
        .concaves()
        .iter()
        .map(|p| p.curve().initial_slope() - p.curve().final_slope())
        .sum();
    thresholds + concaves
}

fn check_f(f: &DecomposableFunction, x: &[f64], mu: f64) -> Result<()> {
    check_mu(mu)?;
    if x.len() != f.n() {
        return Err(Error::LengthMismatch {
            expected: f.n(),
            got: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("non-finite point".into()));
    }
    Ok(())
}

/// Smoothed extension of `f` and its gradient `c + Σ d_j v*_j + Σ concave gradients`.
///
/// Contributions are added in potential order, so the result is bitwise reproducible.
pub fn smoothed_f(f: &DecomposableFunction, x: &[f64], mu: f64) -> Result<SmoothedGradientResult> {
    check_f(f, x, mu)?;
    let mut grad = f.modular_part().to_vec();
    let mut value: f64 = grad.iter().zip(x).map(|(c, x)| c * x).sum();
    let mut scratch = Scratch::default();
    for t in f.thresholds() {
        if t.d() == 0.0 {
            continue;
        }
        let v = project_threshold(x, t.weights(), t.y(), mu, &mut scratch);
        value += t.d() * v;
        for (&(k, _), &vk) in t.weights().entries().iter().zip(&scratch.v) {
            grad[k] += t.d() * vk;
        }
    }
    for p in f.concaves() {
        let r = smoothed_concave(x, p, mu)?;
        value += r.value;
        for &(k, _) in p.weights().entries() {
            grad[k] += r.grad[k];
        }
    }
    Ok(SmoothedGradientResult { value, grad })
}

/// Same result as [`smoothed_f`], with per-potential work spread over the rayon pool.
pub fn smoothed_f_parallel(
    f: &DecomposableFunction,
    x: &[f64],
    mu: f64,
) -> Result<SmoothedGradientResult> {
    check_f(f, x, mu)?;
    let threshold_parts: Vec<(f64, Vec<f64>)> = f
        .thresholds()
        .par_iter()
        .map_init(Scratch::default, |scratch, t| {
            if t.d() == 0.0 {
                return (0.0, Vec::new());
            }
            let v = project_threshold(x, t.weights(), t.y(), mu, scratch);
            (v, scratch.v.clone())
        })
        .collect();
    let concave_parts: Vec<Result<SmoothedGradientResult>> = f
        .concaves()
        .par_iter()
        .map(|p| smoothed_concave(x, p, mu))
        .collect();

    let mut grad = f.modular_part().to_vec();
    let mut value: f64 = grad.iter().zip(x).map(|(c, x)| c * x).sum();
    for (t, (v, vs)) in f.thresholds().iter().zip(threshold_parts) {
        if t.d() == 0.0 {
            continue;
        }
        value += t.d() * v;
        for (&(k, _), vk) in t.weights().entries().iter().zip(vs) {
            grad[k] += t.d() * vk;
        }
    }
    for (p, r) in f.concaves().iter().zip(concave_parts) {
        let r = r?;
        value += r.value;
        for &(k, _) in p.weights().entries() {
            grad[k] += r.grad[k];
        }
    }
    Ok(SmoothedGradientResult { value, grad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ConcaveCurve;

    fn dense(w: &[f64]) -> SparseWeights {
        SparseWeights::from_dense(w).unwrap()
    }

    #[test]
    fn rho_examples() {
        let w = dense(&[1.0, 1.0]);
        let x = [0.8, 0.2];
        assert_eq!(rho(&x, &w, 0.2, 0.8).unwrap(), 0.0);
        assert_eq!(rho(&x, &w, 0.2, 0.9).unwrap(), 0.0);
        assert_eq!(rho(&x, &w, 0.2, 0.0).unwrap(), 2.0);
        assert!((rho(&x, &w, 0.2, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(rho(&x, &w, 0.0, 0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn t_star_boundaries() {
        let w = dense(&[1.0, 1.0, 1.0]);
        let x = [0.3, 0.9, 0.5];
        assert_eq!(solve_t_star(&x, &w, 0.1, 0.0).unwrap(), 0.9);
        let t = solve_t_star(&x, &w, 0.1, 3.0).unwrap();
        assert!((t - 0.2).abs() < 1e-15);
        assert!(matches!(
            solve_t_star(&x, &w, 0.1, 3.5),
            Err(Error::InfeasibleThreshold { .. })
        ));
    }

    #[test]
    fn t_star_uniform() {
        let w = dense(&[1.0; 4]);
        let x = [0.6; 4];
        let t = solve_t_star(&x, &w, 0.2, 1.0).unwrap();
        // 4 (0.6 - t) / 0.2 = 1
        assert!((t - (0.6 - 0.2 * 1.0 / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn t_star_flat_segment_midpoint() {
        // ρ = 1 on [0.1, 0.7]: component 0 saturated, component 1 not yet active
        let w = dense(&[1.0, 1.0]);
        let x = [0.9, 0.1];
        let t = solve_t_star(&x, &w, 0.2, 1.0).unwrap();
        assert!((t - 0.4).abs() < 1e-12);
        assert!((rho(&x, &w, 0.2, t).unwrap() - 1.0).abs() < 1e-12);
        let r = smoothed_threshold(&x, &w, 1.0, 0.2).unwrap();
        assert_eq!(r.grad, vec![1.0, 0.0]);
    }

    #[test]
    fn two_potential_cases() {
        assert_eq!(two_potential_grad(&[0.9, 0.1], 0, 1, 0.3).unwrap(), vec![1.0, 0.0]);
        assert_eq!(two_potential_grad(&[0.1, 0.9], 0, 1, 0.3).unwrap(), vec![0.0, 1.0]);
        assert_eq!(two_potential_grad(&[0.4, 0.4], 0, 1, 0.3).unwrap(), vec![0.5, 0.5]);
        let g = two_potential_grad(&[0.6, 0.5], 0, 1, 0.4).unwrap();
        assert!((g[0] - 0.625).abs() < 1e-15 && (g[1] - 0.375).abs() < 1e-15);
        assert!(two_potential_grad(&[0.6, 0.5], 1, 1, 0.4).is_err());
    }

    #[test]
    fn two_potential_matches_general_solver() {
        let w = SparseWeights::new(3, [(0, 1.0), (2, 1.0)]).unwrap();
        for &(a, b, mu) in &[(0.9, 0.1, 0.3), (0.6, 0.5, 0.4), (0.2, 0.25, 0.01), (0.3, 0.3, 0.1)] {
            let x = [a, 0.7, b];
            let closed = two_potential_grad(&x, 0, 2, mu).unwrap();
            let mut events = Vec::new();
            fill_events(&x, &w, mu, &mut events);
            let t = t_star_from_events(&x, &w, mu, 1.0, &events);
            let general: Vec<f64> = [0usize, 2]
                .iter()
                .map(|&k| ((x[k] - t) / mu).clamp(0.0, 1.0))
                .collect();
            assert!((closed[0] - general[0]).abs() < 1e-12);
            assert!((closed[2] - general[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_point_projection() {
        let w = dense(&[1.0; 5]);
        let r = smoothed_threshold(&[0.3; 5], &w, 2.0, 0.05).unwrap();
        for g in r.grad {
            assert!((g - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_single_component() {
        let w = dense(&[1.0]);
        let p = threshold_profile(&[0.5], &w, 0.2).unwrap();
        assert_eq!(p.t.len(), 2);
        assert!((p.t[0] - 0.5).abs() < 1e-15 && (p.t[1] - 0.3).abs() < 1e-15);
        assert_eq!(p.y, vec![0.0, 1.0]);
        assert_eq!(p.theta[0], vec![0.0]);
        assert!((p.theta[1][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_uniform_collapses() {
        let w = dense(&[1.0; 3]);
        let p = threshold_profile(&[0.4; 3], &w, 0.1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.y, vec![0.0, 3.0]);
        assert!(p.theta[1].iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn linear_curve_gives_scaled_weights() {
        let w = dense(&[0.5, 1.0, 0.25]);
        let curve = ConcaveCurve::new(&[(0.0, 0.0), (1.75, 3.5)]).unwrap();
        let p = ConcavePotential::new(w, curve).unwrap();
        let r = smoothed_concave(&[0.2, 0.9, 0.4], &p, 0.1).unwrap();
        for (g, e) in r.grad.iter().zip([1.0, 2.0, 0.5]) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn single_kink_curve_matches_threshold() {
        let w = dense(&[0.5, 1.0, 0.25, 0.75]);
        let curve = ConcaveCurve::threshold(1.2, w.total()).unwrap();
        let p = ConcavePotential::new(w.clone(), curve).unwrap();
        let x = [0.2, 0.9, 0.4, 0.45];
        let a = smoothed_concave(&x, &p, 0.1).unwrap();
        let b = smoothed_threshold(&x, &w, 1.2, 0.1).unwrap();
        for (g, h) in a.grad.iter().zip(&b.grad) {
            assert!((g - h).abs() < 1e-12, "{:?} {:?}", a.grad, b.grad);
        }
        assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn effective_d_examples() {
        let n = 3;
        let all = SparseWeights::indicator(n, &[0, 1, 2]).unwrap();
        let f = DecomposableFunction::new(
            vec![0.0; n],
            [1.0, 2.0, 0.5]
                .iter()
                .map(|&d| ThresholdPotential::new(all.clone(), 1.0, d).unwrap())
                .collect(),
            vec![],
        )
        .unwrap();
        assert_eq!(effective_d(&f), 3.5);
        assert_eq!(effective_d(&DecomposableFunction::modular(vec![1.0; 3]).unwrap()), 0.0);

        // slopes (2, 1, 0) with kinks at levels <= 1
        let w = dense(&[0.5, 0.5, 0.0]);
        let curve = ConcaveCurve::new(&[(0.0, 0.0), (0.5, 1.0), (0.75, 1.25), (1.0, 1.25)]).unwrap();
        let g = DecomposableFunction::new(
            vec![0.0; n],
            vec![],
            vec![ConcavePotential::new(w, curve).unwrap()],
        )
        .unwrap();
        assert!((effective_d(&g) - 2.0).abs() < 1e-15);
        assert!((coefficient_sum(&g) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn effective_d_weights_high_thresholds() {
        let all = SparseWeights::indicator(4, &[0, 1, 2, 3]).unwrap();
        let f = DecomposableFunction::new(
            vec![0.0; 4],
            vec![ThresholdPotential::new(all, 3.0, 2.0).unwrap()],
            vec![],
        )
        .unwrap();
        assert_eq!(coefficient_sum(&f), 2.0);
        assert_eq!(effective_d(&f), 6.0);
    }

    #[test]
    fn modular_smoothed() {
        let f = DecomposableFunction::modular(vec![1.0, -2.0]).unwrap();
        let r = smoothed_f(&f, &[0.5, 0.25], 0.1).unwrap();
        assert_eq!(r.grad, vec![1.0, -2.0]);
        assert_eq!(r.value, 0.0);
    }
}
