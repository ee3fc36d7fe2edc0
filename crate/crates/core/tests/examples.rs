//! Worked examples with stochastic or exhaustive checks.

use hoptree::exact::{
    empirical_tail, exact_bounded_depth_tree, exact_bounded_diameter_tree, exact_expected_w,
    sample_moments, variance_w, Census, DenseInstance, OrderStatSpec,
};
use hoptree::experiments::{greedy_levels, run_experiment, summarize, ExperimentConfig, Mode};
use hoptree::levels::predicted_weight_depth;
use hoptree::trees::{greedy_tree, prim_mst, slice, splice, RootSpec};
use hoptree::EdgeOracle;

#[test]
fn greedy_depth_two_matches_prediction_at_thousand() {
    let mut cfg = ExperimentConfig::new(Mode::GreedyDepth, 1_000, 2);
    cfg.trials = 30;
    cfg.base_seed = 100;
    let s = summarize(&run_experiment(&cfg).unwrap()).unwrap();
    let ratio = s.mean / predicted_weight_depth(1_000.0, 1_000.0, 2);
    assert!((0.90..=1.10).contains(&ratio), "{ratio}");
}

#[test]
fn greedy_depth_two_has_no_heavy_edges() {
    let mut cfg = ExperimentConfig::new(Mode::GreedyDepth, 10_000, 2);
    cfg.trials = 30;
    cfg.base_seed = 200;
    let recs = run_experiment(&cfg).unwrap();
    assert!(recs.iter().all(|r| r.heavy_edges == 0));
}

#[test]
fn exp_and_uniform_greedy_agree_on_light_edges() {
    // the two laws share uniforms and agree to first order near zero
    let n = 2_000;
    let a = EdgeOracle::exp1(n, 5).unwrap();
    let b = a.with_dist(hoptree::Distribution::Uniform01).unwrap();
    let levels = greedy_levels(Mode::GreedyDepth, n, n, 2).unwrap();
    let all: Vec<usize> = (0..n).collect();
    let ta = greedy_tree(&a, &all, &levels, RootSpec::Vertex(0)).unwrap();
    let tb = greedy_tree(&b, &all, &levels, RootSpec::Vertex(0)).unwrap();
    assert!((ta.weight() / tb.weight() - 1.0).abs() < 0.05);
}

#[test]
fn splice_depth_bound_on_random_mst_pieces() {
    for seed in 0..100u64 {
        let n = 60 + (seed as usize % 7) * 20;
        let t = prim_mst(&EdgeOracle::exp1(n, seed).unwrap());
        let delta = 2 + (seed as usize % 5);
        let f = slice(&t, delta).unwrap();
        let heavy = EdgeOracle::new(n, seed, hoptree::StreamId::HEAVY, hoptree::Distribution::EXP1).unwrap();
        let depth = 1 + (seed as usize % 3);
        let s = splice(&f, &heavy, depth).unwrap();
        assert!(s.tree.depth() <= depth + f.max_diameter(), "seed {seed}");
    }
}

#[test]
fn sample_w_moments_at_million_draws() {
    let s = OrderStatSpec::new(10, 100).unwrap();
    let (mean, var) = sample_moments(s, 1_000_000, 17);
    let exact = exact_expected_w::<f64>(s);
    assert!((mean - exact).abs() <= 3.0 * (variance_w(s) / 1e6).sqrt());
    assert!((mean / exact - 1.0).abs() < 0.005);
    assert!((var / variance_w(s) - 1.0).abs() < 0.05);
}

#[test]
fn tail_fraction_falls_with_b() {
    let mut last = f64::INFINITY;
    for b in [20, 80, 320] {
        let t = empirical_tail(OrderStatSpec::new(b, 10 * b).unwrap(), 0.3, 100_000, 23).unwrap();
        assert!(t.within_bound());
        assert!(t.fraction <= last);
        last = t.fraction;
    }
    let t = empirical_tail(OrderStatSpec::new(100, 1_000).unwrap(), 0.5, 100_000, 29).unwrap();
    assert!(t.fraction <= 0.04393693362340742 + 3.0 * t.std_error);
}

#[test]
fn exact_monotone_in_constraints() {
    for seed in 0..100u64 {
        let n = 4 + (seed % 4) as usize;
        let inst = DenseInstance::random_exp1(n, 500 + seed, (0..n).collect()).unwrap();
        let c = Census::new(&inst).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..n {
            let w = c.depth_optimum(k, 0).unwrap().weight();
            assert!(w <= prev + 1e-12);
            prev = w;
            let even = c.diameter_optimum(2 * k).unwrap().weight();
            let odd = c.diameter_optimum(2 * k + 1).unwrap().weight();
            assert!(odd <= even + 1e-12);
            assert!(even <= w + 1e-12);
        }
        let mst = prim_mst(&inst).weight();
        assert!((exact_bounded_depth_tree(&inst, n - 1, 0).unwrap().weight() - mst).abs() < 1e-12);
        assert!((exact_bounded_diameter_tree(&inst, n - 1).unwrap().weight() - mst).abs() < 1e-12);
    }
}

#[test]
fn exact_steiner_case() {
    let inst = DenseInstance::random_exp1(8, 3, vec![0, 2, 5]).unwrap();
    let t = exact_bounded_depth_tree(&inst, 2, 0).unwrap();
    for v in [0, 2, 5] {
        assert!(t.contains(v));
    }
    assert!(t.depth() <= 2);
    let spanning = DenseInstance::random_exp1(8, 3, (0..8).collect()).unwrap();
    assert!(t.weight() <= exact_bounded_depth_tree(&spanning, 2, 0).unwrap().weight() + 1e-12);
}
