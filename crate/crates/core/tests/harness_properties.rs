mod common;

use common::random_instance;
use proptest::prelude::*;
use slg_core::harness::{
    generate_cut_problem, parse_problem, projected_subgradient, read_trace, serialize_problem,
    write_trace, SplitMix64,
};
use slg_core::model::{SetFunction, Subset};
use slg_core::smoothing::effective_d;
use slg_core::solver::{slg_minimize, SolverOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn problem_files_round_trip(seed in any::<u64>(), n in 4usize..12) {
        let mut rng = SplitMix64::new(seed);
        let f = random_instance(&mut rng, n).with_offset(rng.uniform(-1.0, 1.0));
        let text = serialize_problem(&f);
        let g = parse_problem(&text).unwrap();
        prop_assert_eq!(serialize_problem(&g), text);
        prop_assert_eq!(g.offset().to_bits(), f.offset().to_bits());
        for _ in 0..100 {
            let a = Subset::from_bits(n, rng.below(1 << n));
            prop_assert_eq!(f.eval_set(&a).to_bits(), g.eval_set(&a).to_bits());
        }
    }
}

#[test]
fn trace_files_round_trip() {
    let (_, f) = generate_cut_problem(10, 0.5, (0.1, 1.0), 1.0, 3).unwrap();
    let r = slg_minimize(&f, &SolverOptions::with_epsilon(1e-3 * effective_d(&f))).unwrap();
    let mut buf = Vec::new();
    write_trace(&mut buf, &r.trace).unwrap();
    assert_eq!(read_trace(buf.as_slice()).unwrap(), r.trace);
}

/// Gradient evaluations until each method certifies `ε`-optimality, median over seeds.
#[test]
fn smoothed_method_needs_fewer_gradients_than_subgradient() {
    let mut slg = Vec::new();
    let mut sub = Vec::new();
    for seed in 0..15u64 {
        let (_, f) = generate_cut_problem(12, 0.4, (0.1, 1.0), 1.0, 500 + seed).unwrap();
        let eps = 1e-2 * effective_d(&f);
        let opts = SolverOptions {
            certify_every: usize::MAX,
            record_trace: false,
            ..SolverOptions::with_epsilon(eps)
        };
        let r = slg_minimize(&f, &opts).unwrap();
        slg.push(r.gradient_evals);
        let b = projected_subgradient(&f, eps, 200_000).unwrap();
        sub.push(b.iterations);
    }
    slg.sort_unstable();
    sub.sort_unstable();
    let (m_slg, m_sub) = (slg[slg.len() / 2], sub[sub.len() / 2]);
    assert!(m_slg <= m_sub, "median gradient evaluations: smoothed {m_slg}, subgradient {m_sub}");
}
