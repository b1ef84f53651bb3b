#![allow(dead_code)]

use petgraph::algo::dinics;
use petgraph::graph::DiGraph;
use slg_core::harness::SplitMix64;
use slg_core::model::{
    ConcaveCurve, ConcavePotential, DecomposableFunction, FunctionBuilder, SparseWeights,
    ThresholdPotential,
};
use slg_core::reformulate::{concave_cardinality, region_potential, two_potential, WeightedGraph};

pub fn random_weights(rng: &mut SplitMix64, n: usize, min_support: usize) -> SparseWeights {
    loop {
        let mut entries = Vec::new();
        for k in 0..n {
            if rng.next_f64() < 0.6 {
                let w = if rng.next_f64() < 0.4 { 1.0 } else { rng.uniform(0.05, 1.0) };
                entries.push((k, w));
            }
        }
        if entries.len() >= min_support {
            return SparseWeights::new(n, entries).unwrap();
        }
    }
}

pub fn random_threshold(rng: &mut SplitMix64, n: usize) -> ThresholdPotential {
    let w = random_weights(rng, n, 1);
    let y = rng.uniform(0.05, 0.95) * w.total();
    ThresholdPotential::new(w, y, rng.uniform(0.1, 2.0)).unwrap()
}

/// Concave piecewise-linear curve on `[0, end]` with `pieces` random segments.
pub fn random_curve(rng: &mut SplitMix64, end: f64, pieces: usize) -> ConcaveCurve {
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.uniform(0.05, 0.95) * end).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * end);
    let mut ts = vec![0.0];
    ts.extend(cuts);
    ts.push(end);
    let mut slope = rng.uniform(-0.5, 2.0);
    let mut v = rng.uniform(-1.0, 1.0);
    let mut points = vec![(0.0, v)];
    for pair in ts.windows(2) {
        v += slope * (pair[1] - pair[0]);
        points.push((pair[1], v));
        slope -= rng.uniform(0.1, 1.5);
    }
    ConcaveCurve::new(&points).unwrap()
}

pub fn random_concave(rng: &mut SplitMix64, n: usize) -> ConcavePotential {
    let w = random_weights(rng, n, 2);
    let pieces = 2 + rng.below(3) as usize;
    let curve = random_curve(rng, w.total(), pieces);
    ConcavePotential::new(w, curve).unwrap()
}

fn random_members(rng: &mut SplitMix64, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = i + rng.below((n - i) as u64) as usize;
        all.swap(i, j);
    }
    let mut m = all[..size].to_vec();
    m.sort_unstable();
    m
}

/// Mixed instance: modular term plus thresholds, concave potentials, cut edges, region potentials
/// and concave cardinality terms.
pub fn random_instance(rng: &mut SplitMix64, n: usize) -> DecomposableFunction {
    let mut b = FunctionBuilder::new(n);
    let c: Vec<f64> = (0..n).map(|_| rng.uniform(-2.0, 1.0)).collect();
    b.add_modular_vec(&c);
    for _ in 0..1 + rng.below(3) {
        b.add_threshold(random_threshold(rng, n));
    }
    for _ in 0..rng.below(3) {
        b.add_concave(random_concave(rng, n));
    }
    for _ in 0..rng.below(n as u64) {
        let pair = random_members(rng, n, 2);
        let w = rng.uniform(0.1, 1.0);
        two_potential(n, pair[0], pair[1], [0.0, w, 0.0]).unwrap().add_to(&mut b);
    }
    if rng.next_f64() < 0.5 {
        let size = 2 + rng.below(n as u64 - 1) as usize;
        let r = random_members(rng, n, size.min(n));
        let scale = rng.uniform(0.05, 0.5);
        let mut d = region_potential(n, &r).unwrap();
        for v in d.modular.iter_mut() {
            *v *= scale;
        }
        d.thresholds = d
            .thresholds
            .into_iter()
            .map(|t| ThresholdPotential::new(t.weights().clone(), t.y(), t.d() * scale).unwrap())
            .collect();
        d.add_to(&mut b);
    }
    if rng.next_f64() < 0.5 {
        let size = 2 + rng.below(n as u64 - 1) as usize;
        let s = random_members(rng, n, size.min(n));
        let phi: Vec<f64> = (0..=s.len()).map(|k| (k as f64).sqrt()).collect();
        concave_cardinality(n, &s, &phi).unwrap().add_to(&mut b);
    }
    b.build().unwrap()
}

pub fn random_point(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.next_f64()).collect()
}

/// Interior point with every coordinate in `(0, 1)`.
pub fn random_interior_point(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.uniform(0.01, 0.99)).collect()
}

/// Exact `min_A c·e_A + cut(A)` through a max-flow computation on an integer-scaled network.
pub fn min_cut_value(g: &WeightedGraph, c: &[f64], scale: f64) -> f64 {
    let n = g.node_count();
    let mut net = DiGraph::<(), u64>::new();
    let nodes: Vec<_> = (0..n + 2).map(|_| net.add_node(())).collect();
    let (s, t) = (nodes[n], nodes[n + 1]);
    let q = |w: f64| (w * scale).round() as u64;
    for (u, v, w) in g.edges() {
        net.add_edge(nodes[u], nodes[v], q(w));
        net.add_edge(nodes[v], nodes[u], q(w));
    }
    let mut constant = 0.0;
    for (k, &ck) in c.iter().enumerate() {
        if ck >= 0.0 {
            net.add_edge(nodes[k], t, q(ck));
        } else {
            net.add_edge(s, nodes[k], q(-ck));
            constant += ck;
        }
    }
    let (flow, _) = dinics(&net, s, t);
    flow as f64 / scale + constant
}
