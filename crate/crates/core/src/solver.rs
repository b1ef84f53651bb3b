//! Accelerated projected gradient descent on the smoothed Lovász extension.
//!
//! With `μ = ε/2D` and `L = D/μ`, starting from `x_0 = z_{-1} = ½·1`, each iteration computes
//!
//! ```text
//! g_t     = ∇f̃^μ(x_t) / L
//! y_t     = P(x_t − g_t)
//! z_t     = P(½·1 − Σ_{s≤t} (s+1)/2 · g_s)
//! x_{t+1} = (2 z_t + (t+1) y_t) / (t+3)
//! ```
//!
//! where `P` clamps to the unit cube, and stops once the linearized gap at `y_t` drops to `ε/2`
//! or a discrete certificate proves the candidate set optimal.

use std::time::Instant;

use crate::certify::{candidate_from_grad, certificate_gap, cube_gap, round_to_sets, Certificate};
use crate::error::{Error, Result};
use crate::model::{DecomposableFunction, SetFunction, Subset};
use crate::smoothing::{effective_d, smoothed_f, smoothed_f_parallel, SmoothedGradientResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Target accuracy, absolute, in the units of `f`.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Run the discrete certificate check every this many iterations.
    pub certify_every: usize,
    pub mu_override: Option<f64>,
    pub record_trace: bool,
    /// Spread gradient evaluation over the current rayon pool.
    pub parallel: bool,
    /// Certificate gap accepted as proof of optimality; defaults to `1e-9 · max(1, |c|∞, D)`.
    pub certificate_tol: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            epsilon: 1e-3,
            max_iters: 100_000,
            certify_every: 10,
            mu_override: None,
            record_trace: true,
            parallel: false,
            certificate_tol: None,
        }
    }
}

impl SolverOptions {
    pub fn with_epsilon(epsilon: f64) -> Self {
        SolverOptions {
            epsilon,
            ..SolverOptions::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Parameter(format!("epsilon = {} must be > 0", self.epsilon)));
        }
        if self.certify_every == 0 {
            return Err(Error::Parameter("certify_every must be >= 1".into()));
        }
        if let Some(mu) = self.mu_override {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::Parameter(format!("mu = {mu} must be > 0")));
            }
        }
        Ok(())
    }
}

/// Iterates of the accelerated scheme after iteration `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: usize,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub y: Vec<f64>,
    /// `Σ_{s≤t} (s+1)/2 · g_s`
    pub grad_accum: Vec<f64>,
    pub mu: f64,
    pub lipschitz: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    SmoothedGap,
    Certificate,
    MaxIters,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::SmoothedGap => "smoothed_gap",
            Termination::Certificate => "certificate",
            Termination::MaxIters => "max_iters",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    /// `f̃^μ(y_t)`
    pub f_mu: f64,
    pub gap: f64,
    pub best_f: f64,
    pub cert_gap: Option<f64>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub x_final: Vec<f64>,
    pub best_set: Subset,
    pub best_value: f64,
    pub smoothed_gap_final: f64,
    pub certificate: Option<Certificate>,
    pub trace: Vec<TraceRow>,
    pub termination: Termination,
    pub iterations: usize,
    pub mu: f64,
    pub lipschitz: f64,
    pub d: f64,
    /// Number of smoothed gradient evaluations, certificate checks included.
    pub gradient_evals: usize,
}

/// Componentwise clamp to `[0, 1]`.
pub fn project_box(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.clamp(0.0, 1.0)).collect()
}

/// `max_{x∈[0,1]^n} (y − x) · g`, summed per component so it is never negative.
pub fn gap_from_grad(y: &[f64], g: &[f64]) -> f64 {
    y.iter()
        .zip(g)
        .map(|(&y, &g)| if g >= 0.0 { y * g } else { (1.0 - y) * -g })
        .sum()
}

/// Linearized optimality gap of `f̃^μ` at `y ∈ [0,1]^n`.
pub fn smoothed_gap(f: &DecomposableFunction, mu: f64, y: &[f64]) -> Result<f64> {
    Ok(gap_from_grad(y, &smoothed_f(f, y, mu)?.grad))
}

struct Incumbent {
    set: Subset,
    value: f64,
}

impl Incumbent {
    fn offer(&mut self, set: &Subset, value: f64) {
        if value < self.value {
            self.set = set.clone();
            self.value = value;
        }
    }
}

fn modular_result(f: &DecomposableFunction) -> SolveResult {
    let c = f.modular_part();
    let set = Subset::from_mask(c.iter().map(|&v| v < 0.0).collect());
    let value = f.eval_set(&set);
    let x_final = set.indicator();
    let cert = Certificate {
        set: set.clone(),
        gap: cube_gap(c, &set),
        gamma: 0.0,
        grad_at_shift: c.to_vec(),
        sign_stable: true,
    };
    SolveResult {
        smoothed_gap_final: gap_from_grad(&x_final, c),
        x_final,
        best_set: set,
        best_value: value,
        certificate: Some(cert),
        trace: Vec::new(),
        termination: Termination::Certificate,
        iterations: 0,
        mu: 0.0,
        lipschitz: 0.0,
        d: 0.0,
        gradient_evals: 0,
    }
}

/// Runs the accelerated smoothed solver; see [`slg_minimize_with`].
pub fn slg_minimize(f: &DecomposableFunction, opts: &SolverOptions) -> Result<SolveResult> {
    slg_minimize_with(f, opts, |_| {})
}

/// Runs the solver, calling `observe` with the state after every iteration.
pub fn slg_minimize_with(
    f: &DecomposableFunction,
    opts: &SolverOptions,
    mut observe: impl FnMut(&SolverState),
) -> Result<SolveResult> {
    opts.validate()?;
    let n = f.n();
    let d = effective_d(f);
    if d == 0.0 {
        return Ok(modular_result(f));
    }
    let start = Instant::now();
    let eps = opts.epsilon;
    let mu = opts.mu_override.unwrap_or(eps / (2.0 * d));
    let lipschitz = d / mu;
    let c_max = f.modular_part().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cert_tol = opts
        .certificate_tol
        .unwrap_or(1e-9 * c_max.max(d).max(1.0));
    let evaluate = |x: &[f64]| -> Result<SmoothedGradientResult> {
        if opts.parallel {
            smoothed_f_parallel(f, x, mu)
        } else {
            smoothed_f(f, x, mu)
        }
    };

    let mut state = SolverState {
        t: 0,
        x: vec![0.5; n],
        z: vec![0.5; n],
        y: vec![0.5; n],
        grad_accum: vec![0.0; n],
        mu,
        lipschitz,
        d,
    };
    let mut best = Incumbent {
        set: Subset::empty(n),
        value: 0.0,
    };
    let mut trace = Vec::new();
    let mut termination = Termination::MaxIters;
    let mut certificate = None;
    let mut gap = f64::INFINITY;
    let mut grad_y: Option<Vec<f64>> = None;
    let mut certified_last = false;
    let mut iterations = 0;
    let mut gradient_evals = 0;

    let discrete_check = |y: &[f64], grad: &[f64], best: &mut Incumbent| -> Result<Certificate> {
        let a = candidate_from_grad(grad);
        let cert = certificate_gap(f, mu, y, &a)?;
        best.offer(&a, f.eval_set(&a));
        let rounded = round_to_sets(y, f)?;
        best.offer(&rounded.sets[0], rounded.value);
        Ok(cert)
    };

    for t in 0..opts.max_iters {
        state.t = t;
        let gx = evaluate(&state.x)?;
        gradient_evals += 1;
        if gx.grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Numerical { iteration: t });
        }
        let weight = (t as f64 + 1.0) / 2.0;
        for k in 0..n {
            let g = gx.grad[k] / lipschitz;
            state.y[k] = (state.x[k] - g).clamp(0.0, 1.0);
            state.grad_accum[k] += weight * g;
            state.z[k] = (0.5 - state.grad_accum[k]).clamp(0.0, 1.0);
        }
        let gy = evaluate(&state.y)?;
        gradient_evals += 1;
        if gy.grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Numerical { iteration: t });
        }
        gap = gap_from_grad(&state.y, &gy.grad);
        iterations = t + 1;

        let mut cert_gap = None;
        certified_last = false;
        if (t + 1) % opts.certify_every == 0 {
            let cert = discrete_check(&state.y, &gy.grad, &mut best)?;
            gradient_evals += 1;
            cert_gap = Some(cert.gap);
            certified_last = true;
            if cert.gap <= cert_tol {
                termination = Termination::Certificate;
            }
            certificate = Some(cert);
        }
        if opts.record_trace {
            trace.push(TraceRow {
                iter: t,
                f_mu: gy.value,
                gap,
                best_f: best.value,
                cert_gap,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
        grad_y = Some(gy.grad);
        observe(&state);
        if termination == Termination::Certificate {
            break;
        }
        if gap <= eps / 2.0 {
            termination = Termination::SmoothedGap;
            break;
        }
        let denom = t as f64 + 3.0;
        for k in 0..n {
            state.x[k] = (2.0 * state.z[k] + (t as f64 + 1.0) * state.y[k]) / denom;
        }
    }

    let grad_final = match grad_y {
        Some(g) => g,
        None => {
            gradient_evals += 1;
            let g = evaluate(&state.y)?.grad;
            gap = gap_from_grad(&state.y, &g);
            g
        }
    };
    if !certified_last {
        let cert = discrete_check(&state.y, &grad_final, &mut best)?;
        gradient_evals += 1;
        certificate = Some(cert);
    }

    Ok(SolveResult {
        x_final: state.y,
        best_set: best.set,
        best_value: best.value,
        smoothed_gap_final: gap,
        certificate,
        trace,
        termination,
        iterations,
        mu,
        lipschitz,
        d,
        gradient_evals,
    })
}
