//! Statistical and structural properties checked across modules.

use gossip_bounds_core::bounds::{
    chebyshev_bound, cheeger_bound, expectation_from_alphas, variance_from_alphas,
};
use gossip_bounds_core::diffusion::{
    horizon_for_tail, oracle_chain_expectation, oracle_pmf, run_trials, trial_rng, AlphaSequence,
    StartPolicy, TrialsConfig,
};
use gossip_bounds_core::gossip::{column_spreads, run_trace, GossipInit, TraceOptions};
use gossip_bounds_core::graph::{
    gen_barabasi_albert, gen_chain, gen_complete, Graph, SamplingMode,
};
use gossip_bounds_core::spectral::{cheeger_exact, cheeger_sweep, cut_size, lambda2};
use rand::Rng;

/// Connected `G(n, p)` samples with `n` in 4..=12.
fn random_connected(seed: u64) -> Graph {
    let mut rng = trial_rng(seed, 1);
    loop {
        let n = rng.random_range(4..=12);
        let p = rng.random_range(0.2..0.8);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Volume-normalized conductance by enumeration.
fn brute_conductance(g: &Graph) -> f64 {
    let n = g.node_count();
    let total: usize = g.degrees().iter().sum();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) - 1 {
        let set: Vec<usize> = (0..n).filter(|&u| mask & (1 << u) != 0).collect();
        let vol: usize = set.iter().map(|&u| g.degree(u)).sum();
        let ratio = cut_size(g, &set) as f64 / vol.min(total - vol) as f64;
        best = best.min(ratio);
    }
    best
}

#[test]
fn sweep_never_beats_exhaustive() {
    for seed in 0..100 {
        let g = random_connected(seed);
        let exact = cheeger_exact(&g).unwrap();
        let sweep = cheeger_sweep(&g).unwrap();
        assert!(sweep.value >= exact.value, "seed {seed}");
    }
}

#[test]
fn cheeger_inequality_in_its_valid_forms() {
    for seed in 0..60 {
        let g = random_connected(seed);
        let l2 = lambda2(&g).unwrap().lambda2;
        let bound = (2.0 * l2).sqrt();
        let h = brute_conductance(&g);
        assert!(l2 / 2.0 <= h + 1e-9, "seed {seed}: lower Cheeger");
        assert!(h <= bound + 1e-9, "seed {seed}: upper Cheeger");
        let phi = cheeger_exact(&g).unwrap().value;
        assert!(phi <= g.max_degree() as f64 * bound + 1e-9, "seed {seed}");
    }
}

#[test]
fn lambda2_is_invariant_under_relabeling() {
    for seed in 0..20 {
        let g = random_connected(seed);
        let n = g.node_count();
        let mut rng = trial_rng(seed, 2);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let a = lambda2(&g).unwrap().lambda2;
        let b = lambda2(&g.relabel(&perm).unwrap()).unwrap().lambda2;
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn complete_graph_means_match_exact_sum() {
    for n in [10, 50, 100] {
        let g = gen_complete(n).unwrap();
        let stats = run_trials(&g, &TrialsConfig::new(1000, n as u64))
            .unwrap()
            .stats;
        let exact = expectation_from_alphas(&AlphaSequence::complete(n).unwrap());
        let z = (stats.mean - exact) / stats.std_error();
        assert!(
            z.abs() <= 3.0,
            "n={n}: mean {} vs {exact} (z={z})",
            stats.mean
        );
    }
}

#[test]
fn oracle_pmf_reproduces_moments() {
    let mut sequences = vec![
        AlphaSequence::complete(10).unwrap(),
        AlphaSequence::complete(30).unwrap(),
    ];
    let mut rng = trial_rng(8, 0);
    for _ in 0..5 {
        let len = rng.random_range(1..12);
        let alphas = (0..len).map(|_| rng.random_range(0.05..=1.0)).collect();
        sequences.push(AlphaSequence::user(alphas).unwrap());
    }
    for a in &sequences {
        let horizon = horizon_for_tail(a, 1e-13).unwrap();
        let pmf = oracle_pmf(a, horizon).unwrap();
        let total: f64 = pmf.pmf.iter().sum::<f64>() + pmf.tail;
        assert!((total - 1.0).abs() < 1e-12, "normalization {total}");
        let e = expectation_from_alphas(a);
        let v = variance_from_alphas(a);
        assert!((pmf.mean() - e).abs() <= 1e-9 * e);
        if v > 0.0 {
            assert!(
                (pmf.variance() - v).abs() <= 1e-9 * v,
                "{} vs {v}",
                pmf.variance()
            );
        }
    }
}

/// One-sided 99% acceptance threshold for a `Binomial(trials, delta)` count.
fn binomial_ceiling(trials: u64, delta: f64) -> f64 {
    let n = trials as f64;
    n * delta + 2.326 * (n * delta * (1.0 - delta)).sqrt()
}

#[test]
fn chebyshev_exceedance_is_rare_on_complete_graphs() {
    let n = 50;
    let g = gen_complete(n).unwrap();
    let alphas = AlphaSequence::complete(n).unwrap();
    let trials = 10_000;
    let outcome = run_trials(&g, &TrialsConfig::new(trials, 77)).unwrap();
    for delta in [0.05, 0.25] {
        let budget = chebyshev_bound(&alphas, delta).unwrap();
        let over = outcome
            .t_final
            .iter()
            .filter(|&&t| t as f64 > budget)
            .count();
        assert!(
            (over as f64) <= binomial_ceiling(trials, delta),
            "delta={delta}: {over}"
        );
    }
}

#[test]
fn cheeger_budget_exceedance_is_rare() {
    let graphs = [
        gen_chain(12).unwrap(),
        gen_barabasi_albert(20, 2, 5).unwrap(),
        gen_complete(8).unwrap(),
        random_connected(3),
        random_connected(4),
    ];
    let trials = 2000;
    for g in &graphs {
        let n = g.node_count();
        let phi = cheeger_exact(g).unwrap().value;
        let budget = cheeger_bound(phi, g.directed_edge_count() as f64, n, 0.05).unwrap();
        let cfg = TrialsConfig::new(trials, n as u64).with_mode(SamplingMode::EdgeUniform);
        let outcome = run_trials(g, &cfg).unwrap();
        let over = outcome
            .t_final
            .iter()
            .filter(|&&t| t as f64 > budget)
            .count();
        assert!(
            (over as f64) <= binomial_ceiling(trials, 0.05),
            "n={n}: {over}"
        );
    }
}

#[test]
fn chain_oracle_matches_simulation_from_fixed_starts() {
    for mode in [SamplingMode::NodeUniform, SamplingMode::EdgeUniform] {
        for start in [0, 4] {
            let n = 10;
            let exact = oracle_chain_expectation(n, start, mode).unwrap();
            let cfg = TrialsConfig::new(4000, 21)
                .with_mode(mode)
                .with_start(StartPolicy::Fixed(start));
            let stats = run_trials(&gen_chain(n).unwrap(), &cfg).unwrap().stats;
            let z = (stats.mean - exact) / stats.std_error();
            assert!(z.abs() <= 3.5, "{mode} start {start}: z={z}");
        }
    }
}

#[test]
fn trace_respects_proof_chain_on_sparse_graph() {
    let g = gen_barabasi_albert(30, 2, 6).unwrap();
    let values: Vec<f64> = (0..30).map(|i| 1.0 + (i % 5) as f64).collect();
    let init = GossipInit {
        values,
        weights: vec![1.0; 30],
    };
    let mut opts = TraceOptions::new(30 * 80);
    opts.record_every = 5;
    let (series, state) = run_trace(&g, &init, &opts, &mut trial_rng(4, 0)).unwrap();
    let defined: Vec<_> = series
        .records
        .iter()
        .filter(|r| r.bound_theorem.is_some())
        .collect();
    assert!(!defined.is_empty());
    for r in defined {
        let b = r.bound_b.unwrap();
        assert!(r.error <= b + 1e-12);
        assert!(b <= r.bound_theorem.unwrap() + 1e-12);
    }
    let estimates = state.estimates();
    let spreads = column_spreads(state.matrix().unwrap()).unwrap();
    for (e, s) in estimates.iter().zip(spreads) {
        assert!((e - state.xbar()).abs() <= state.xbar().abs() * s + 1e-12);
    }
}

#[test]
fn averaging_converges_on_the_complete_graph() {
    let n = 100;
    let g = gen_complete(n).unwrap();
    let mut opts = TraceOptions::new(200 * n as u64);
    opts.track_matrix = false;
    opts.record_every = n as u64;
    let (series, _) = run_trace(&g, &GossipInit::spike(n), &opts, &mut trial_rng(9, 0)).unwrap();
    let target = 1e-3 * (n as f64).sqrt();
    assert!(series.records.iter().any(|r| r.error < target));
}
