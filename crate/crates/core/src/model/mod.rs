//! Decomposable submodular functions and exact set-function routines.
//!
//! A decomposable function has the form
//!
//! ```text
//! f(A) = c · e_A + Σ_j d_j min(y_j, w_j · e_A) + Σ_j φ_j(w_j · e_A)
//! ```
//!
//! with `0 ≤ w_j ≤ 1`, `d_j ≥ 0` and concave `φ_j`. Every such function is submodular.

mod curve;
mod oracle;
mod subset;
mod weights;

pub use curve::{ConcaveCurve, DEFAULT_SAMPLES};
pub use oracle::{
    brute_force_minimize, check_submodular, check_submodular_with_tol, descending_order, lovasz,
    BruteForceMin, FnSetFunction, LovaszPoint, SetFunction, SubmodularityCheck, Tolerance,
    BRUTE_FORCE_MAX_N, SUBMODULARITY_MAX_N,
};
pub use subset::{GroundSet, Subset};
pub use weights::SparseWeights;

use crate::error::{Error, Result};

/// `d · min(y, w · e_A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPotential {
    w: SparseWeights,
    y: f64,
    d: f64,
}

impl ThresholdPotential {
    pub fn new(w: SparseWeights, y: f64, d: f64) -> Result<Self> {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::Parameter(format!("coefficient d = {d} must be >= 0")));
        }
        let total = w.total();
        let slack = 1e-12 * total.max(1.0);
        if !y.is_finite() || y < -slack || y > total + slack {
            return Err(Error::InfeasibleThreshold { y, total });
        }
        Ok(ThresholdPotential {
            w,
            y: y.clamp(0.0, total),
            d,
        })
    }

    pub fn weights(&self) -> &SparseWeights {
        &self.w
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    fn value_at(&self, load: f64) -> f64 {
        self.d * self.y.min(load)
    }
}

/// `φ(w · e_A)` for a piecewise-linear concave `φ` on `[0, w · 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcavePotential {
    w: SparseWeights,
    curve: ConcaveCurve,
}

impl ConcavePotential {
    pub fn new(w: SparseWeights, curve: ConcaveCurve) -> Result<Self> {
        let total = w.total();
        let n_hint = w.support_len().max(1) as f64;
        if (curve.end() - total).abs() > 1e-12 * n_hint * total.max(1.0) {
            return Err(Error::DomainMismatch {
                curve_end: curve.end(),
                weight_total: total,
            });
        }
        Ok(ConcavePotential { w, curve })
    }

    pub fn weights(&self) -> &SparseWeights {
        &self.w
    }

    pub fn curve(&self) -> &ConcaveCurve {
        &self.curve
    }

    fn value_at(&self, load: f64) -> f64 {
        self.curve.eval(load)
    }
}

/// A potential touching element `k` with weight `w[k]`; used for incremental evaluation.
#[derive(Debug, Clone, Copy)]
struct Incidence {
    potential: usize,
    weight: f64,
}

/// `f(A) = c · e_A + Σ thresholds + Σ concave potentials`, normalized so `f(∅) = 0`.
#[derive(Debug, Clone)]
pub struct DecomposableFunction {
    ground: GroundSet,
    c: Vec<f64>,
    thresholds: Vec<ThresholdPotential>,
    concaves: Vec<ConcavePotential>,
    offset: f64,
    incidence: Vec<Vec<Incidence>>,
}

impl PartialEq for DecomposableFunction {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && self.c == other.c
            && self.thresholds == other.thresholds
            && self.concaves == other.concaves
            && self.offset == other.offset
    }
}

impl DecomposableFunction {
    pub fn new(
        c: Vec<f64>,
        thresholds: Vec<ThresholdPotential>,
        concaves: Vec<ConcavePotential>,
    ) -> Result<Self> {
        let ground = GroundSet::new(c.len())?;
        let n = ground.size();
        if let Some(bad) = c.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("non-finite modular entry {bad}")));
        }
        let too_long = thresholds
            .iter()
            .map(|t| &t.w)
            .chain(concaves.iter().map(|p| &p.w))
            .filter_map(SparseWeights::max_index)
            .find(|&k| k >= n);
        if let Some(k) = too_long {
            return Err(Error::InvalidSubset(format!(
                "potential weight index {k} out of range for n = {n}"
            )));
        }
        let mut incidence = vec![Vec::new(); n];
        let weights = thresholds
            .iter()
            .map(|t| &t.w)
            .chain(concaves.iter().map(|p| &p.w));
        for (potential, w) in weights.enumerate() {
            for &(k, weight) in w.entries() {
                incidence[k].push(Incidence { potential, weight });
            }
        }
        Ok(DecomposableFunction {
            ground,
            c,
            thresholds,
            concaves,
            offset: 0.0,
            incidence,
        })
    }

    /// Purely modular function `A ↦ c · e_A`.
    pub fn modular(c: Vec<f64>) -> Result<Self> {
        DecomposableFunction::new(c, Vec::new(), Vec::new())
    }

    /// Attaches the constant removed during normalization. It is reported, never evaluated.
    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn modular_part(&self) -> &[f64] {
        &self.c
    }

    pub fn thresholds(&self) -> &[ThresholdPotential] {
        &self.thresholds
    }

    pub fn concaves(&self) -> &[ConcavePotential] {
        &self.concaves
    }

    /// Constant dropped to enforce `f(∅) = 0`, plus any curve offsets.
    pub fn offset(&self) -> f64 {
        self.offset + self.concaves.iter().map(|p| p.curve.offset()).sum::<f64>()
    }

    /// Offset attached via [`DecomposableFunction::with_offset`], excluding curve offsets.
    pub fn extra_offset(&self) -> f64 {
        self.offset
    }

    pub fn is_modular(&self) -> bool {
        self.thresholds.is_empty() && self.concaves.is_empty()
    }

    pub fn potential_count(&self) -> usize {
        self.thresholds.len() + self.concaves.len()
    }

    pub fn eval(&self, a: &Subset) -> Result<f64> {
        if a.ground_size() != self.n() {
            return Err(Error::InvalidSubset(format!(
                "subset over {} elements, function over {}",
                a.ground_size(),
                self.n()
            )));
        }
        Ok(self.eval_mask(a.mask()))
    }

    fn potential_value(&self, p: usize, load: f64) -> f64 {
        match self.thresholds.get(p) {
            Some(t) => t.value_at(load),
            None => self.concaves[p - self.thresholds.len()].value_at(load),
        }
    }
}

impl SetFunction for DecomposableFunction {
    fn ground_size(&self) -> usize {
        self.n()
    }

    fn eval_mask(&self, mask: &[bool]) -> f64 {
        let modular: f64 = self
            .c
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(c, _)| c)
            .sum();
        let thresholds: f64 = self
            .thresholds
            .iter()
            .map(|t| t.value_at(t.w.dot_mask(mask)))
            .sum();
        let concaves: f64 = self
            .concaves
            .iter()
            .map(|p| p.value_at(p.w.dot_mask(mask)))
            .sum();
        modular + thresholds + concaves
    }

    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut loads = vec![0.0; self.potential_count()];
        let mut out = Vec::with_capacity(order.len() + 1);
        let mut total = 0.0;
        out.push(total);
        for &k in order {
            let mut delta = self.c[k];
            for inc in &self.incidence[k] {
                let before = loads[inc.potential];
                let after = before + inc.weight;
                delta += self.potential_value(inc.potential, after)
                    - self.potential_value(inc.potential, before);
                loads[inc.potential] = after;
            }
            total += delta;
            out.push(total);
        }
        out
    }
}

/// Incremental construction of a [`DecomposableFunction`].
#[derive(Debug, Clone)]
pub struct FunctionBuilder {
    c: Vec<f64>,
    thresholds: Vec<ThresholdPotential>,
    concaves: Vec<ConcavePotential>,
    offset: f64,
}

impl FunctionBuilder {
    pub fn new(n: usize) -> Self {
        FunctionBuilder {
            c: vec![0.0; n],
            thresholds: Vec::new(),
            concaves: Vec::new(),
            offset: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn add_modular(&mut self, k: usize, value: f64) -> &mut Self {
        self.c[k] += value;
        self
    }

    pub fn add_modular_vec(&mut self, c: &[f64]) -> &mut Self {
        for (a, b) in self.c.iter_mut().zip(c) {
            *a += b;
        }
        self
    }

    pub fn add_threshold(&mut self, t: ThresholdPotential) -> &mut Self {
        self.thresholds.push(t);
        self
    }

    pub fn add_concave(&mut self, p: ConcavePotential) -> &mut Self {
        self.concaves.push(p);
        self
    }

    pub fn add_offset(&mut self, offset: f64) -> &mut Self {
        self.offset += offset;
        self
    }

    pub fn build(self) -> Result<DecomposableFunction> {
        Ok(DecomposableFunction::new(self.c, self.thresholds, self.concaves)?
            .with_offset(self.offset))
    }
}
