mod common;

use common::{random_concave, random_instance, random_point, random_weights};
use proptest::prelude::*;
use slg_core::harness::SplitMix64;
use slg_core::model::{ConcaveCurve, ConcavePotential, SparseWeights};
use slg_core::smoothing::{
    concave_kink_sum, smoothed_concave, smoothed_f, smoothed_f_parallel, smoothed_threshold,
    solve_t_star, rho, two_potential_grad,
};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn threshold_case(seed: u64, n: usize) -> (SparseWeights, f64, Vec<f64>, f64) {
    let mut rng = SplitMix64::new(seed);
    let w = random_weights(&mut rng, n, 1);
    let y = rng.next_f64() * w.total();
    let x: Vec<f64> = (0..n).map(|_| rng.uniform(-0.5, 1.5)).collect();
    let mu = 10f64.powf(rng.uniform(-3.0, 0.5));
    (w, y, x, mu)
}

/// Projection of `x/μ` onto `{0 ≤ v ≤ w, Σv = y}` by trying every lower/upper/free pattern.
fn qp_by_active_sets(x: &[f64], w: &[f64], y: f64, mu: f64) -> Vec<f64> {
    let n = x.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(n as u32) {
        let status: Vec<usize> = (0..n).map(|k| code / 3usize.pow(k as u32) % 3).collect();
        let fixed: f64 = (0..n).filter(|&k| status[k] == 1).map(|k| w[k]).sum();
        let free: Vec<usize> = (0..n).filter(|&k| status[k] == 2).collect();
        let mut v: Vec<f64> = (0..n).map(|k| if status[k] == 1 { w[k] } else { 0.0 }).collect();
        if free.is_empty() {
            if (fixed - y).abs() > 1e-12 {
                continue;
            }
        } else {
            let t = (free.iter().map(|&k| x[k]).sum::<f64>() - mu * (y - fixed)) / free.len() as f64;
            for &k in &free {
                v[k] = (x[k] - t) / mu;
            }
            if free.iter().any(|&k| v[k] < -1e-12 || v[k] > w[k] + 1e-12) {
                continue;
            }
        }
        let obj: f64 = v.iter().zip(x).map(|(v, x)| (v - x / mu).powi(2)).sum();
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, v));
        }
    }
    best.unwrap().1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gradient_is_feasible(seed in any::<u64>(), n in 1usize..12) {
        let (w, y, x, mu) = threshold_case(seed, n);
        let v = smoothed_threshold(&x, &w, y, mu).unwrap().grad;
        let dense = w.to_dense(n);
        for k in 0..n {
            prop_assert!(v[k] >= -1e-9 && v[k] <= dense[k] + 1e-9);
        }
        prop_assert!((v.iter().sum::<f64>() - y).abs() <= 1e-9);
    }

    #[test]
    fn t_star_solves_rho(seed in any::<u64>(), n in 1usize..12) {
        let (w, y, x, mu) = threshold_case(seed, n);
        let t = solve_t_star(&x, &w, mu, y).unwrap();
        prop_assert!((rho(&x, &w, mu, t).unwrap() - y).abs() <= 1e-9 * w.total().max(1.0));
    }

    #[test]
    fn projection_is_nonexpansive(seed in any::<u64>(), n in 1usize..12) {
        let (w, y, x1, mu) = threshold_case(seed, n);
        let mut rng = SplitMix64::new(seed.wrapping_add(1));
        let x2: Vec<f64> = x1.iter().map(|v| v + rng.uniform(-0.2, 0.2)).collect();
        let g1 = smoothed_threshold(&x1, &w, y, mu).unwrap().grad;
        let g2 = smoothed_threshold(&x2, &w, y, mu).unwrap().grad;
        prop_assert!(dist(&g1, &g2) <= dist(&x1, &x2) / mu + 1e-9);
    }

    #[test]
    fn matches_active_set_qp(seed in any::<u64>()) {
        let (w, y, x, mu) = threshold_case(seed, 5);
        let v = smoothed_threshold(&x, &w, y, mu).unwrap().grad;
        let q = qp_by_active_sets(&x, &w.to_dense(5), y, mu);
        prop_assert!(dist(&v, &q) <= 1e-9, "{v:?} vs {q:?}");
    }

    #[test]
    fn value_scales_with_mu(seed in any::<u64>(), n in 1usize..12, alpha in prop::sample::select(vec![0.5, 2.0, 10.0])) {
        let (w, y, x, mu) = threshold_case(seed, n);
        let ax: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        let lhs = smoothed_threshold(&ax, &w, y, mu).unwrap().value;
        let rhs = alpha * smoothed_threshold(&x, &w, y, mu / alpha).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn two_potential_agrees(seed in any::<u64>(), n in 2usize..10) {
        let mut rng = SplitMix64::new(seed);
        let x = random_point(&mut rng, n);
        let k = rng.below(n as u64) as usize;
        let l = (k + 1 + rng.below(n as u64 - 1) as usize) % n;
        let mu = 10f64.powf(rng.uniform(-3.0, 0.5));
        let fast = two_potential_grad(&x, k, l, mu).unwrap();
        let w = SparseWeights::indicator(n, &[k, l]).unwrap();
        let general = smoothed_threshold(&x, &w, 1.0, mu).unwrap().grad;
        prop_assert!(dist(&fast, &general) <= 1e-12);
    }

    #[test]
    fn single_kink_is_threshold(seed in any::<u64>(), n in 2usize..10) {
        let (w, _, x, mu) = threshold_case(seed, n);
        let y = 0.5 * w.total();
        prop_assume!(y > 0.0);
        let p = ConcavePotential::new(w.clone(), ConcaveCurve::threshold(y, w.total()).unwrap()).unwrap();
        let a = smoothed_concave(&x, &p, mu).unwrap();
        let b = smoothed_threshold(&x, &w, y, mu).unwrap();
        prop_assert!(dist(&a.grad, &b.grad) <= 1e-9);
        prop_assert!((a.value - b.value).abs() <= 1e-9);
    }

    #[test]
    fn concave_routes_agree(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = SplitMix64::new(seed);
        let p = random_concave(&mut rng, n);
        let x = random_point(&mut rng, n);
        let mu = 10f64.powf(rng.uniform(-3.0, 0.5));
        let a = smoothed_concave(&x, &p, mu).unwrap();
        let b = concave_kink_sum(&x, &p, mu).unwrap();
        prop_assert!(dist(&a.grad, &b.grad) <= 1e-9);
        prop_assert!((a.value - b.value).abs() <= 1e-9);
    }

    #[test]
    fn finite_differences(seed in any::<u64>()) {
        let n = 6;
        let mut rng = SplitMix64::new(seed);
        let f = random_instance(&mut rng, n);
        let x: Vec<f64> = (0..n).map(|_| rng.uniform(0.01, 0.99)).collect();
        let mu = [0.01, 0.1, 1.0][rng.below(3) as usize];
        let g = smoothed_f(&f, &x, mu).unwrap().grad;
        let h = 1e-6 * dist(&x, &vec![0.0; n]).max(1.0);
        let scale = g.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut bad = 0;
        for k in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let fd = (smoothed_f(&f, &xp, mu).unwrap().value - smoothed_f(&f, &xm, mu).unwrap().value) / (2.0 * h);
            if (fd - g[k]).abs() > 1e-5 * scale {
                bad += 1;
            }
        }
        prop_assert_eq!(bad, 0);
    }

    #[test]
    fn parallel_is_bitwise_identical(seed in any::<u64>(), n in 4usize..12) {
        let mut rng = SplitMix64::new(seed);
        let f = random_instance(&mut rng, n);
        let x = random_point(&mut rng, n);
        let a = smoothed_f(&f, &x, 0.05).unwrap();
        let b = smoothed_f_parallel(&f, &x, 0.05).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert!(a.grad.iter().zip(&b.grad).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}

/// Gauss–Legendre on `[a, b]` with `panels` composite 5-point panels.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let nodes = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            nodes
                .iter()
                .map(|&(x, w)| 0.5 * h * w * f(0.5 * (lo + hi) + 0.5 * h * x))
                .sum::<f64>()
        })
        .sum()
}

#[test]
fn kink_decomposition_identity() {
    // φ(x) = φ(0) + φ'(T) x − ∫_0^T min(x, y) φ''(y) dy for φ(s) = √(s + 0.01)
    let t_end = 3.0;
    let phi = |s: f64| (s + 0.01).sqrt();
    let dphi = |s: f64| 0.5 / (s + 0.01).sqrt();
    let ddphi = |s: f64| -0.25 * (s + 0.01).powf(-1.5);
    for x in [0.0, 0.05, 0.3, 1.0, 2.2, 3.0] {
        let below = integrate(|y| y * ddphi(y), 0.0, x, 2000);
        let above = if x < t_end { x * integrate(ddphi, x, t_end, 2000) } else { 0.0 };
        let rebuilt = phi(0.0) + dphi(t_end) * x - below - above;
        assert!((phi(x) - rebuilt).abs() < 1e-6, "x = {x}: {} vs {rebuilt}", phi(x));
    }
}
