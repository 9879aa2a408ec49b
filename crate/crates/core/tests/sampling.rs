//! Empirical message frequencies against the analytic sampling laws.

use std::collections::HashMap;

use gossip_bounds_core::diffusion::trial_rng;
use gossip_bounds_core::graph::{
    gen_barabasi_albert, gen_chain, gen_complete, Graph, SamplingMode,
};

const DRAWS: u64 = 1_000_000;

fn check_frequencies(g: &Graph, mode: SamplingMode, seed: u64) {
    let mut rng = trial_rng(seed, 0);
    let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
    for _ in 0..DRAWS {
        let e = g.sample_event(mode, &mut rng).unwrap();
        *counts.entry((e.sender, e.receiver)).or_default() += 1;
    }
    let mut chi2 = 0.0;
    let mut cells = 0;
    for (u, v) in g.edges() {
        for (s, r) in [(u, v), (v, u)] {
            let p = g.event_probability(mode, s, r);
            let expected = p * DRAWS as f64;
            let sd = (DRAWS as f64 * p * (1.0 - p)).sqrt();
            let observed = counts.remove(&(s, r)).unwrap_or(0) as f64;
            assert!(
                (observed - expected).abs() <= 4.0 * sd,
                "{mode} ({s},{r}): observed {observed}, expected {expected} +- {sd}"
            );
            chi2 += (observed - expected).powi(2) / expected;
            cells += 1;
        }
    }
    assert!(counts.is_empty(), "sampled non-edges: {counts:?}");
    // Generous chi-square sanity: mean df, sd sqrt(2 df).
    let df = (cells - 1) as f64;
    assert!(
        chi2 < df + 6.0 * (2.0 * df).sqrt(),
        "chi2 {chi2} with {df} dof"
    );
}

#[test]
fn node_uniform_frequencies() {
    check_frequencies(&gen_chain(3).unwrap(), SamplingMode::NodeUniform, 1);
    check_frequencies(
        &gen_barabasi_albert(12, 2, 3).unwrap(),
        SamplingMode::NodeUniform,
        2,
    );
}

#[test]
fn edge_uniform_frequencies() {
    check_frequencies(&gen_chain(3).unwrap(), SamplingMode::EdgeUniform, 3);
    check_frequencies(
        &gen_barabasi_albert(12, 2, 3).unwrap(),
        SamplingMode::EdgeUniform,
        4,
    );
}

#[test]
fn complete_graph_modes_agree_empirically() {
    let g = gen_complete(5).unwrap();
    check_frequencies(&g, SamplingMode::NodeUniform, 5);
    check_frequencies(&g, SamplingMode::EdgeUniform, 6);
}
