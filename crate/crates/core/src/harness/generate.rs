//! Seeded instance generators.
//!
//! Randomness comes from SplitMix64, so a seed yields the same instance on every platform:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! Uniform floats in `[0, 1)` use the top 53 bits: `(next >> 11) · 2⁻⁵³`.

use crate::error::{Error, Result};
use crate::model::DecomposableFunction;
use crate::reformulate::{graph_cut, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in `0..bound` by rejection (`bound > 0`).
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let r = self.next_u64();
            if r < zone {
                return r % bound;
            }
        }
    }
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::Parameter(format!("{name} range [{lo}, {hi}] is invalid")));
    }
    Ok(())
}

/// Random graph: each pair `u < v`, in lexicographic order, becomes an edge with probability
/// `density` and then draws its weight uniformly from `weight_range`.
pub fn generate_cut_graph(
    nodes: usize,
    density: f64,
    weight_range: (f64, f64),
    rng: &mut SplitMix64,
) -> Result<WeightedGraph> {
    if nodes == 0 {
        return Err(Error::Parameter("need at least one node".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Parameter(format!("density {density} not in (0, 1]")));
    }
    check_range("weight", weight_range)?;
    if weight_range.0 < 0.0 {
        return Err(Error::Parameter("edge weights must be nonnegative".into()));
    }
    let mut g = WeightedGraph::new(nodes);
    for u in 0..nodes {
        for v in u + 1..nodes {
            if rng.next_f64() < density {
                let w = rng.uniform(weight_range.0, weight_range.1);
                g.add_edge(u, v, w)?;
            }
        }
    }
    Ok(g)
}

pub fn generate_cut_instance(
    nodes: usize,
    density: f64,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<WeightedGraph> {
    generate_cut_graph(nodes, density, weight_range, &mut SplitMix64::new(seed))
}

/// `n` values uniform in `[-range, range)`.
pub fn generate_modular(n: usize, range: f64, rng: &mut SplitMix64) -> Result<Vec<f64>> {
    check_range("modular", (-range, range))?;
    Ok((0..n).map(|_| rng.uniform(-range, range)).collect())
}

/// Cut instance with unary terms: the graph is drawn first, then the modular part from the same
/// stream, so the graph matches [`generate_cut_instance`] for the same seed.
pub fn generate_cut_problem(
    nodes: usize,
    density: f64,
    weight_range: (f64, f64),
    modular_range: f64,
    seed: u64,
) -> Result<(WeightedGraph, DecomposableFunction)> {
    let mut rng = SplitMix64::new(seed);
    let g = generate_cut_graph(nodes, density, weight_range, &mut rng)?;
    let c = generate_modular(nodes, modular_range, &mut rng)?;
    let f = graph_cut(&g, &c)?;
    Ok((g, f))
}
