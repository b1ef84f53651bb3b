//! Constructors that express common submodular models as decomposable functions.
//!
//! Threshold potentials with nonuniform weights are strictly more expressive than sums of
//! concave cardinality terms: `min(1, w · e_A)` with `w = [1, 2, 3, 4]/4` has no representation
//! as `c · e_A + Σ_j φ_j(|A ∩ R_j|)` with concave `φ_j`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    ConcaveCurve, ConcavePotential, DecomposableFunction, FunctionBuilder, SparseWeights,
    ThresholdPotential,
};

/// Modular part, thresholds and dropped constant of a single decomposed term.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub modular: Vec<f64>,
    pub thresholds: Vec<ThresholdPotential>,
    pub offset: f64,
}

impl Decomposition {
    pub fn add_to(self, builder: &mut FunctionBuilder) {
        builder.add_modular_vec(&self.modular);
        for t in self.thresholds {
            builder.add_threshold(t);
        }
        builder.add_offset(self.offset);
    }

    pub fn into_function(self) -> Result<DecomposableFunction> {
        let mut b = FunctionBuilder::new(self.modular.len());
        self.add_to(&mut b);
        b.build()
    }
}

fn concavity_slack(values: &[f64]) -> f64 {
    1e-12 * values.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// `φ(|A ∩ {k, l}|) = φ(0) + (φ(2) − φ(1)) e_kl · e_A + (2φ(1) − φ(0) − φ(2)) min(1, e_kl · e_A)`.
pub fn two_potential(n: usize, k: usize, l: usize, phi: [f64; 3]) -> Result<Decomposition> {
    if k == l {
        return Err(Error::Parameter(format!("2-potential needs k != l, got {k}")));
    }
    if k.max(l) >= n {
        return Err(Error::InvalidSubset(format!(
            "2-potential index {} out of range for n = {n}",
            k.max(l)
        )));
    }
    let [p0, p1, p2] = phi;
    let d = 2.0 * p1 - p0 - p2;
    if d < -concavity_slack(&phi) {
        return Err(Error::NotConcave(format!(
            "2-potential values ({p0}, {p1}, {p2}) are not concave"
        )));
    }
    let slope = p2 - p1;
    let mut modular = vec![0.0; n];
    modular[k] = slope;
    modular[l] = slope;
    let w = SparseWeights::indicator(n, &[k, l])?;
    Ok(Decomposition {
        modular,
        thresholds: vec![ThresholdPotential::new(w, 1.0, d.max(0.0))?],
        offset: p0,
    })
}

/// Undirected graph with nonnegative edge weights; parallel edges are merged by summing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        if u == v {
            return Err(Error::Parameter(format!("self-loop at node {u}")));
        }
        if u.max(v) >= self.n {
            return Err(Error::InvalidSubset(format!(
                "edge ({u}, {v}) out of range for {} nodes",
                self.n
            )));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidWeight(format!(
                "edge ({u}, {v}) has weight {weight}"
            )));
        }
        *self.edges.entry((u.min(v), u.max(v))).or_insert(0.0) += weight;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges `(u, v, weight)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn cut_value(&self, mask: &[bool]) -> f64 {
        self.edges()
            .filter(|&(u, v, _)| mask[u] != mask[v])
            .map(|(_, _, w)| w)
            .sum()
    }
}

/// `f(A) = c · e_A + Σ_{kl} d_kl · [exactly one of k, l in A]`.
pub fn graph_cut(g: &WeightedGraph, c: &[f64]) -> Result<DecomposableFunction> {
    let n = g.node_count();
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let mut b = FunctionBuilder::new(n);
    b.add_modular_vec(c);
    for (u, v, w) in g.edges() {
        two_potential(n, u, v, [0.0, w, 0.0])?.add_to(&mut b);
    }
    b.build()
}

/// `φ(|A ∩ S|) = φ(0) + (φ(|S|) − φ(|S|−1)) e_S · e_A + Σ_{k=1}^{|S|−1} (2φ(k) − φ(k−1) − φ(k+1)) min(k, e_S · e_A)`.
pub fn concave_cardinality(n: usize, s: &[usize], phi: &[f64]) -> Result<Decomposition> {
    let size = s.len();
    if size == 0 {
        return Err(Error::Parameter("activation set must be non-empty".into()));
    }
    if phi.len() != size + 1 {
        return Err(Error::LengthMismatch {
            expected: size + 1,
            got: phi.len(),
        });
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("non-finite potential value".into()));
    }
    let w = SparseWeights::indicator(n, s)?;
    if w.support_len() != size {
        return Err(Error::InvalidSubset("activation set has duplicates".into()));
    }
    let slack = concavity_slack(phi);
    let mut thresholds = Vec::with_capacity(size - 1);
    for k in 1..size {
        let d = 2.0 * phi[k] - phi[k - 1] - phi[k + 1];
        if d < -slack {
            return Err(Error::NotConcave(format!(
                "second difference {d} < 0 at k = {k}"
            )));
        }
        thresholds.push(ThresholdPotential::new(w.clone(), k as f64, d.max(0.0))?);
    }
    let slope = phi[size] - phi[size - 1];
    let mut modular = vec![0.0; n];
    for &k in s {
        modular[k] = slope;
    }
    Ok(Decomposition {
        modular,
        thresholds,
        offset: phi[0],
    })
}

/// `|A ∩ R| · |R \ A|`, smallest when `A` contains all or none of `R`.
pub fn region_potential(n: usize, r: &[usize]) -> Result<Decomposition> {
    let size = r.len();
    let phi: Vec<f64> = (0..=size).map(|k| (k * (size - k)) as f64).collect();
    concave_cardinality(n, r, &phi)
}

/// Covers `B_i ⊆ {0, .., m-1}` indexed by the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoverInstance {
    m: usize,
    covers: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(m: usize, covers: Vec<Vec<usize>>) -> Result<Self> {
        for (i, b) in covers.iter().enumerate() {
            if let Some(&bad) = b.iter().find(|&&k| k >= m) {
                return Err(Error::InvalidSubset(format!(
                    "cover {i} contains {bad}, base set has {m} elements"
                )));
            }
        }
        Ok(SetCoverInstance { m, covers })
    }

    pub fn covers(&self) -> &[Vec<usize>] {
        &self.covers
    }

    /// `|∪_{i∈A} B_i|`
    pub fn union_size(&self, mask: &[bool]) -> usize {
        let mut hit = vec![false; self.m];
        for (b, _) in self.covers.iter().zip(mask).filter(|(_, &m)| m) {
            for &k in b {
                hit[k] = true;
            }
        }
        hit.into_iter().filter(|&h| h).count()
    }
}

/// `f(A) = Σ_{k∈F} min(1, w_k · e_A)` with `w_k[i] = 1` iff `k ∈ B_i`.
pub fn set_cover(inst: &SetCoverInstance) -> Result<DecomposableFunction> {
    let n = inst.covers.len();
    let mut members = vec![Vec::new(); inst.m];
    for (i, b) in inst.covers.iter().enumerate() {
        for &k in b {
            if members[k].last() != Some(&i) {
                members[k].push(i);
            }
        }
    }
    let mut builder = FunctionBuilder::new(n);
    // uncovered base elements contribute min(1, 0) = 0
    for m in members.into_iter().filter(|m| !m.is_empty()) {
        builder.add_threshold(ThresholdPotential::new(
            SparseWeights::indicator(n, &m)?,
            1.0,
            1.0,
        )?);
    }
    builder.build()
}

/// `f(A) = c · e_A + (u · e_A) φ(v · e_A)` for nonnegative `u`, `v` and nonpositive,
/// nonincreasing, concave `φ` on `[0, v · 1]`.
///
/// Uses `n` concave potentials with `w_j = v + (v · 1) e_j` and
/// `φ̃(t) = 0` for `t ≤ v · 1`, `φ(t − v · 1) − φ(0)` beyond; each `w_j` is divided by its
/// largest entry and `φ̃` rescaled to match, keeping weights in `[0, 1]`.
pub fn queueing(c: &[f64], u: &[f64], v: &[f64], phi: &ConcaveCurve) -> Result<DecomposableFunction> {
    let n = c.len();
    for (name, vec) in [("u", u), ("v", v)] {
        if vec.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: vec.len(),
            });
        }
        if vec.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidWeight(format!("{name} must be nonnegative")));
        }
    }
    let raw = phi.raw_points();
    let scale = raw.iter().fold(1.0_f64, |m, p| m.max(p.1.abs()));
    if raw.iter().any(|p| p.1 > 1e-12 * scale) {
        return Err(Error::InvalidCurve("queueing curve must be nonpositive".into()));
    }
    if phi.slopes().iter().any(|&s| s > 1e-12 * scale) {
        return Err(Error::InvalidCurve("queueing curve must be nonincreasing".into()));
    }
    let total_v: f64 = v.iter().sum();
    if (phi.end() - total_v).abs() > 1e-9 * total_v.max(1.0) {
        return Err(Error::DomainMismatch {
            curve_end: phi.end(),
            weight_total: total_v,
        });
    }
    let phi0 = phi.offset();
    let mut b = FunctionBuilder::new(n);
    b.add_modular_vec(c);
    for (k, &uk) in u.iter().enumerate() {
        b.add_modular(k, phi0 * uk);
    }
    if total_v == 0.0 {
        return b.build();
    }
    for (j, &uj) in u.iter().enumerate() {
        if uj == 0.0 {
            continue;
        }
        let s = v[j] + total_v;
        let weights = SparseWeights::new(
            n,
            v.iter().enumerate().map(|(i, &vi)| {
                let wi = if i == j { vi + total_v } else { vi };
                (i, if i == j { 1.0 } else { wi / s })
            }),
        )?;
        let end = weights.total();
        let mut points = vec![(0.0, 0.0), (total_v / s, 0.0)];
        let last = raw.len() - 1;
        for (i, &(t, val)) in raw.iter().enumerate().skip(1) {
            let tt = if i == last { end } else { (total_v + t) / s };
            points.push((tt, uj * (val - phi0)));
        }
        let curve = ConcaveCurve::new(&points)?;
        b.add_concave(ConcavePotential::new(weights, curve)?);
    }
    b.build()
}
