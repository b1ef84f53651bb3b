//! Shared fixtures for the benchmark targets.

use slg_core::harness::{generate_cut_problem, SplitMix64};
use slg_core::model::{DecomposableFunction, FunctionBuilder, SparseWeights, ThresholdPotential};

/// Seeded cut instance with unary terms in `[-1, 1)` and weights in `[0.1, 1)`.
pub fn cut_instance(nodes: usize, density: f64, seed: u64) -> DecomposableFunction {
    generate_cut_problem(nodes, density, (0.1, 1.0), 1.0, seed)
        .expect("valid generator parameters")
        .1
}

/// `count` dense threshold potentials with random weights and levels on `n` elements.
pub fn dense_thresholds(n: usize, count: usize, seed: u64) -> DecomposableFunction {
    let mut rng = SplitMix64::new(seed);
    let mut b = FunctionBuilder::new(n);
    for k in 0..n {
        b.add_modular(k, rng.uniform(-1.0, 0.5) * count as f64 / n as f64);
    }
    for _ in 0..count {
        let w = SparseWeights::new(n, (0..n).map(|k| (k, rng.uniform(0.0, 1.0)))).unwrap();
        let y = rng.uniform(0.1, 0.9) * w.total();
        b.add_threshold(ThresholdPotential::new(w, y, 1.0).unwrap());
    }
    b.build().expect("consistent sizes")
}

pub fn point(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| rng.next_f64()).collect()
}
