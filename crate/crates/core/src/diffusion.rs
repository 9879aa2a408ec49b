//! The reach process `R(t)`: one message per tick, a receiver becomes
//! reached iff its sender was. Hitting times `T_k` are measured by Monte
//! Carlo and checked against exact oracles.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::cheeger_alpha_lower;
use crate::error::{Error, Result};
use crate::graph::{Graph, MessageEvent, SamplingMode};

pub const DEFAULT_STEP_CAP: u64 = 1_000_000_000;

/// Reach probabilities `alpha_1 .. alpha_{N-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSequence {
    alphas: Vec<f64>,
    kind: AlphaKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlphaKind {
    ExactComplete,
    CheegerLower,
    UserSupplied,
}

impl AlphaKind {
    pub fn label(self) -> &'static str {
        match self {
            AlphaKind::ExactComplete => "exact-complete",
            AlphaKind::CheegerLower => "cheeger-lower",
            AlphaKind::UserSupplied => "user-supplied",
        }
    }
}

impl AlphaSequence {
    pub fn new(alphas: Vec<f64>, kind: AlphaKind) -> Result<Self> {
        if let Some((k, a)) = alphas
            .iter()
            .enumerate()
            .find(|(_, &a)| !(a > 0.0 && a <= 1.0))
        {
            return Err(Error::InvalidParameter(format!(
                "alpha_{} = {a} is not in (0, 1]",
                k + 1
            )));
        }
        Ok(Self { alphas, kind })
    }

    pub fn user(alphas: Vec<f64>) -> Result<Self> {
        Self::new(alphas, AlphaKind::UserSupplied)
    }

    /// Exact sequence for the complete graph on `n` nodes.
    pub fn complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let alphas = (1..n)
            .map(|k| alpha_complete(n, k))
            .collect::<Result<_>>()?;
        Self::new(alphas, AlphaKind::ExactComplete)
    }

    /// Lower bounds `phi * min(k, n - k) / edges` for every `k`.
    pub fn cheeger_lower(phi: f64, edges: f64, n: usize) -> Result<Self> {
        let alphas = (1..n)
            .map(|k| cheeger_alpha_lower(phi, edges, n, k))
            .collect::<Result<_>>()?;
        Self::new(alphas, AlphaKind::CheegerLower)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alphas
    }

    pub fn kind(&self) -> AlphaKind {
        self.kind
    }

    /// Node count `N` the sequence describes.
    pub fn node_count(&self) -> usize {
        self.alphas.len() + 1
    }
}

/// `k (n - k) / (n (n - 1))`: sender among the `k` reached nodes, receiver
/// among the `n - k` others.
pub fn alpha_complete(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={} for n = {n}",
            n.saturating_sub(1)
        )));
    }
    let (n, k) = (n as f64, k as f64);
    Ok(k * (n - k) / (n * (n - 1.0)))
}

#[derive(Clone, Debug)]
pub struct ReachState {
    reached: FixedBitSet,
    count: usize,
    t: u64,
}

impl ReachState {
    pub fn new(n: usize, start: usize) -> Self {
        let mut reached = FixedBitSet::with_capacity(n);
        reached.insert(start);
        Self {
            reached,
            count: 1,
            t: 0,
        }
    }

    /// Advances one tick; returns true if a new node was reached.
    pub fn apply(&mut self, event: MessageEvent) -> bool {
        self.t += 1;
        if self.reached.contains(event.sender) && !self.reached.contains(event.receiver) {
            self.reached.insert(event.receiver);
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn is_reached(&self, u: usize) -> bool {
        self.reached.contains(u)
    }

    pub fn reached_nodes(&self) -> Vec<usize> {
        self.reached.ones().collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StartPolicy {
    /// Start node drawn uniformly per trial from the trial's own stream.
    #[default]
    Uniform,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct TrialOptions {
    pub mode: SamplingMode,
    pub step_cap: u64,
    pub record_hitting_times: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self {
            mode: SamplingMode::NodeUniform,
            step_cap: DEFAULT_STEP_CAP,
            record_hitting_times: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialResult {
    pub t_final: u64,
    /// `t_k[k - 1] = T_k` for `k = 1..=N` when recording was requested.
    pub t_k: Option<Vec<u64>>,
}

impl TrialResult {
    pub fn hitting_time(&self, k: usize) -> Option<u64> {
        self.t_k.as_ref()?.get(k.checked_sub(1)?).copied()
    }
}

/// Runs the reach process until every node is reached.
pub fn run_trial<R: Rng + ?Sized>(
    g: &Graph,
    start: usize,
    opts: &TrialOptions,
    rng: &mut R,
) -> Result<TrialResult> {
    let n = g.node_count();
    if start >= n {
        return Err(Error::InvalidParameter(format!(
            "start node {start} out of range for {n} nodes"
        )));
    }
    let mut state = ReachState::new(n, start);
    let mut t_k = opts.record_hitting_times.then(|| {
        let mut v = Vec::with_capacity(n);
        v.push(0);
        v
    });
    if n > 1 {
        g.ensure_connected()?;
    }
    while state.count < n {
        if state.t >= opts.step_cap {
            return Err(Error::StepCap {
                trial: 0,
                cap: opts.step_cap,
                reached: state.count,
                n,
            });
        }
        let event = g.sample_event(opts.mode, rng)?;
        if state.apply(event) {
            if let Some(v) = t_k.as_mut() {
                v.push(state.t);
            }
        }
    }
    Ok(TrialResult {
        t_final: state.t,
        t_k,
    })
}

/// Independent stream for trial `index`.
pub fn trial_rng(base_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug)]
pub struct TrialsConfig {
    pub trials: u64,
    pub base_seed: u64,
    pub start: StartPolicy,
    pub mode: SamplingMode,
    pub step_cap: u64,
}

impl TrialsConfig {
    pub fn new(trials: u64, base_seed: u64) -> Self {
        Self {
            trials,
            base_seed,
            start: StartPolicy::Uniform,
            mode: SamplingMode::NodeUniform,
            step_cap: DEFAULT_STEP_CAP,
        }
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_start(mut self, start: StartPolicy) -> Self {
        self.start = start;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialsOutcome {
    /// `T_N` per trial, in trial order.
    pub t_final: Vec<u64>,
    pub stats: DiffusionStats,
}

/// Runs `trials` independent trials in parallel. Trial `i` draws its start
/// node and events from `trial_rng(base_seed, i)`, so results do not depend
/// on thread scheduling.
pub fn run_trials(g: &Graph, cfg: &TrialsConfig) -> Result<TrialsOutcome> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = g.node_count();
    if let StartPolicy::Fixed(s) = cfg.start {
        if s >= n {
            return Err(Error::InvalidParameter(format!(
                "start node {s} out of range for {n} nodes"
            )));
        }
    }
    if n > 1 {
        g.ensure_connected()?;
    }
    let opts = TrialOptions {
        mode: cfg.mode,
        step_cap: cfg.step_cap,
        record_hitting_times: false,
    };
    let results: Vec<Result<u64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.base_seed, i);
            let start = match cfg.start {
                StartPolicy::Uniform => rng.random_range(0..n),
                StartPolicy::Fixed(s) => s,
            };
            run_trial(g, start, &opts, &mut rng)
                .map(|r| r.t_final)
                .map_err(|e| match e {
                    Error::StepCap {
                        cap, reached, n, ..
                    } => Error::StepCap {
                        trial: i,
                        cap,
                        reached,
                        n,
                    },
                    other => other,
                })
        })
        .collect();
    let t_final = results.into_iter().collect::<Result<Vec<_>>>()?;
    let stats = DiffusionStats::from_samples(&t_final, n);
    Ok(TrialsOutcome { t_final, stats })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffusionStats {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for one trial.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// `(probability, value)` pairs, linearly interpolated order statistics.
    pub quantiles: Vec<(f64, f64)>,
    pub mean_per_node: f64,
}

pub const REPORTED_QUANTILES: [f64; 3] = [0.05, 0.5, 0.95];

impl DiffusionStats {
    pub fn from_samples(samples: &[u64], n: usize) -> Self {
        assert!(!samples.is_empty(), "statistics need at least one sample");
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let count = sorted.len();
        let mean = sorted.iter().map(|&x| x as f64).sum::<f64>() / count as f64;
        let std = if count > 1 {
            let ss: f64 = sorted.iter().map(|&x| (x as f64 - mean).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let quantiles = REPORTED_QUANTILES
            .iter()
            .map(|&p| (p, quantile_sorted(&sorted, p)))
            .collect();
        Self {
            n,
            trials: count,
            mean,
            std,
            min: sorted[0] as f64,
            max: sorted[count - 1] as f64,
            quantiles,
            mean_per_node: mean / n as f64,
        }
    }

    pub fn quantile(&self, p: f64) -> Option<f64> {
        self.quantiles
            .iter()
            .find(|(q, _)| (q - p).abs() < 1e-12)
            .map(|&(_, v)| v)
    }

    pub fn std_error(&self) -> f64 {
        self.std / (self.trials as f64).sqrt()
    }

    pub const CSV_HEADER: &'static str = "n,trials,mean,std,min,q05,q50,q95,max,mean_per_node";

    pub fn csv_row(&self) -> String {
        let q = |p| self.quantile(p).unwrap_or(f64::NAN);
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.trials,
            self.mean,
            self.std,
            self.min,
            q(0.05),
            q(0.5),
            q(0.95),
            self.max,
            self.mean_per_node
        )
    }
}

fn quantile_sorted(sorted: &[u64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] as f64 + frac * (sorted[hi] as f64 - sorted[lo] as f64)
}

/// Distribution of `T_N` truncated at a horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct HittingPmf {
    /// `pmf[t] = Pr[T_N = t]` for `t = 0..=horizon`.
    pub pmf: Vec<f64>,
    /// `Pr[T_N > horizon]`, propagated independently of `pmf`.
    pub tail: f64,
}

impl HittingPmf {
    pub fn horizon(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(t, p)| t as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.pmf
            .iter()
            .enumerate()
            .map(|(t, p)| (t as f64 - mean).powi(2) * p)
            .sum()
    }
}

/// Exact law of `T_N` as a sum of independent geometrics on `{1, 2, ..}`
/// with success probabilities `alpha_k`.
///
/// Each geometric is folded in with the recurrence
/// `h(t) = alpha f(t - 1) + (1 - alpha) h(t - 1)`, so the cost is
/// `O(N * horizon)`.
pub fn oracle_pmf(alphas: &AlphaSequence, horizon: usize) -> Result<HittingPmf> {
    let floor = alphas.node_count() - 1;
    if horizon < floor {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} is below the minimum hitting time {floor}"
        )));
    }
    let mut f = vec![0.0; horizon + 1];
    f[0] = 1.0;
    let mut tail = 0.0;
    let mut h = vec![0.0; horizon + 1];
    for &a in alphas.as_slice() {
        let q = 1.0 - a;
        // carry(t) = sum_{t' <= t} f(t') q^{t - t'}
        let mut carry = 0.0;
        h[0] = 0.0;
        for t in 0..=horizon {
            if t > 0 {
                h[t] = a * carry;
            }
            carry = f[t] + q * carry;
        }
        // Mass of f inside the horizon whose geometric overshoots it.
        tail += carry;
        std::mem::swap(&mut f, &mut h);
    }
    Ok(HittingPmf { pmf: f, tail })
}

/// Smallest power-of-two multiple of `N - 1` horizon whose tail mass is
/// below `eps`.
pub fn horizon_for_tail(alphas: &AlphaSequence, eps: f64) -> Result<usize> {
    let mut horizon = (alphas.node_count() - 1).max(16);
    loop {
        let pmf = oracle_pmf(alphas, horizon)?;
        if pmf.tail < eps {
            return Ok(horizon);
        }
        horizon = horizon.checked_mul(2).ok_or_else(|| {
            Error::InvalidParameter("no horizon reaches the requested tail mass".into())
        })?;
    }
}

/// Exact `E[T_N]` on the chain `0 - 1 - ... - (n-1)` from every start node.
///
/// The reached set is always an interval `[a, b]`, which grows left with
/// probability `p_l` (node `a` sends to `a - 1`) and right with `p_r` per
/// tick. Expected remaining time satisfies
/// `E[a, b] = (1 + p_l E[a-1, b] + p_r E[a, b+1]) / (p_l + p_r)`,
/// solved by decreasing interval length.
pub fn chain_expectations(n: usize, mode: SamplingMode) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("chain needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let degree = |u: usize| if u == 0 || u == n - 1 { 1.0 } else { 2.0 };
    let send_prob = |u: usize| match mode {
        SamplingMode::NodeUniform => 1.0 / (n as f64 * degree(u)),
        SamplingMode::EdgeUniform => 1.0 / (2.0 * (n - 1) as f64),
    };
    // longer[a] = E[a, a + len] for the interval one node longer.
    let mut longer = vec![0.0];
    for len in (1..n).rev() {
        let current: Vec<f64> = (0..=n - len)
            .map(|a| {
                let b = a + len - 1;
                let p_l = if a > 0 { send_prob(a) } else { 0.0 };
                let p_r = if b + 1 < n { send_prob(b) } else { 0.0 };
                let left = if a > 0 { longer[a - 1] } else { 0.0 };
                let right = if b + 1 < n { longer[a] } else { 0.0 };
                (1.0 + p_l * left + p_r * right) / (p_l + p_r)
            })
            .collect();
        longer = current;
    }
    Ok(longer)
}

pub fn oracle_chain_expectation(n: usize, start: usize, mode: SamplingMode) -> Result<f64> {
    if start >= n {
        return Err(Error::InvalidParameter(format!(
            "start node {start} out of range for chain of {n}"
        )));
    }
    Ok(chain_expectations(n, mode)?[start])
}

/// Expected `T_N` on a chain with the start node drawn uniformly.
pub fn oracle_chain_expectation_uniform(n: usize, mode: SamplingMode) -> Result<f64> {
    let e = chain_expectations(n, mode)?;
    Ok(e.iter().sum::<f64>() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_barabasi_albert, gen_chain, gen_complete};
    use approx::assert_relative_eq;

    #[test]
    fn alpha_complete_values() {
        assert_eq!(alpha_complete(2, 1).unwrap(), 0.5);
        assert_relative_eq!(
            alpha_complete(4, 2).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-15
        );
        assert_eq!(alpha_complete(4, 1).unwrap(), 0.25);
        assert_eq!(alpha_complete(4, 3).unwrap(), 0.25);
        assert!(alpha_complete(4, 0).is_err());
        assert!(alpha_complete(4, 4).is_err());
    }

    #[test]
    fn alpha_sequence_validation() {
        assert!(AlphaSequence::user(vec![0.5, 1.0]).is_ok());
        assert!(AlphaSequence::user(vec![0.0]).is_err());
        assert!(AlphaSequence::user(vec![1.5]).is_err());
        assert!(AlphaSequence::user(vec![f64::NAN]).is_err());
        let c = AlphaSequence::complete(1).unwrap();
        assert_eq!(c.node_count(), 1);
        assert_eq!(c.kind(), AlphaKind::ExactComplete);
    }

    #[test]
    fn single_node_trial_is_immediate() {
        let g = gen_complete(1).unwrap();
        let mut rng = trial_rng(0, 0);
        let opts = TrialOptions {
            record_hitting_times: true,
            ..Default::default()
        };
        let r = run_trial(&g, 0, &opts, &mut rng).unwrap();
        assert_eq!(r.t_final, 0);
        assert_eq!(r.t_k, Some(vec![0]));
    }

    #[test]
    fn hitting_times_are_recorded_in_order() {
        let g = gen_barabasi_albert(30, 2, 1).unwrap();
        let opts = TrialOptions {
            record_hitting_times: true,
            ..Default::default()
        };
        for i in 0..20 {
            let mut rng = trial_rng(3, i);
            let r = run_trial(&g, 0, &opts, &mut rng).unwrap();
            let t_k = r.t_k.as_ref().unwrap();
            assert_eq!(t_k.len(), 30);
            assert_eq!(r.hitting_time(1), Some(0));
            assert_eq!(r.hitting_time(30), Some(r.t_final));
            assert!(t_k.windows(2).all(|w| w[0] < w[1]));
            assert!(r.t_final >= 29);
        }
    }

    #[test]
    fn step_cap_aborts_with_diagnostic() {
        let g = gen_chain(50).unwrap();
        let cfg = TrialsConfig {
            step_cap: 10,
            ..TrialsConfig::new(3, 1)
        };
        match run_trials(&g, &cfg) {
            Err(Error::StepCap { trial, cap, n, .. }) => {
                assert_eq!(trial, 0);
                assert_eq!(cap, 10);
                assert_eq!(n, 50);
            }
            other => panic!("expected step cap error, got {other:?}"),
        }
    }

    #[test]
    fn run_trials_rejects_bad_config() {
        let g = gen_chain(5).unwrap();
        assert!(run_trials(&g, &TrialsConfig::new(0, 1)).is_err());
        let cfg = TrialsConfig::new(2, 1).with_start(StartPolicy::Fixed(9));
        assert!(run_trials(&g, &cfg).is_err());
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            run_trials(&split, &TrialsConfig::new(2, 1)),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn stats_of_one_trial() {
        let s = DiffusionStats::from_samples(&[7], 3);
        assert_eq!(s.std, 0.0);
        assert_eq!(s.mean, 7.0);
        assert_eq!(s.quantile(0.5), Some(7.0));
        assert_relative_eq!(s.mean_per_node, 7.0 / 3.0);
    }

    #[test]
    fn stats_quantiles_interpolate() {
        let s = DiffusionStats::from_samples(&[4, 1, 3, 2, 5], 1);
        assert_eq!(s.quantile(0.5), Some(3.0));
        assert_relative_eq!(s.quantile(0.05).unwrap(), 1.2);
        assert_relative_eq!(s.quantile(0.95).unwrap(), 4.8);
        assert_relative_eq!(s.std, 2.5f64.sqrt());
        assert!(s.min <= s.quantiles[0].1 && s.quantiles[2].1 <= s.max);
    }

    #[test]
    fn run_trials_is_deterministic() {
        let g = gen_barabasi_albert(40, 2, 3).unwrap();
        let cfg = TrialsConfig::new(64, 99).with_mode(SamplingMode::EdgeUniform);
        assert_eq!(run_trials(&g, &cfg).unwrap(), run_trials(&g, &cfg).unwrap());
    }

    #[test]
    fn pmf_single_geometric() {
        let a = AlphaSequence::user(vec![0.5]).unwrap();
        let pmf = oracle_pmf(&a, 40).unwrap();
        assert_eq!(pmf.pmf[0], 0.0);
        for t in 1..=40 {
            assert_relative_eq!(pmf.pmf[t], 0.5f64.powi(t as i32), max_relative = 1e-14);
        }
        assert_relative_eq!(pmf.tail, 0.5f64.powi(40), max_relative = 1e-12);
    }

    #[test]
    fn pmf_rejects_short_horizon() {
        let a = AlphaSequence::complete(10).unwrap();
        assert!(oracle_pmf(&a, 8).is_err());
        assert!(oracle_pmf(&a, 9).is_ok());
    }

    #[test]
    fn pmf_support_starts_at_n_minus_one() {
        let a = AlphaSequence::complete(6).unwrap();
        let pmf = oracle_pmf(&a, 200).unwrap();
        assert!(pmf.pmf[..5].iter().all(|&p| p == 0.0));
        // All five steps must succeed immediately.
        let direct: f64 = a.as_slice().iter().product();
        assert_relative_eq!(pmf.pmf[5], direct, max_relative = 1e-14);
    }

    #[test]
    fn chain_oracle_small_cases() {
        for mode in [SamplingMode::NodeUniform, SamplingMode::EdgeUniform] {
            assert_eq!(oracle_chain_expectation(1, 0, mode).unwrap(), 0.0);
            assert_relative_eq!(oracle_chain_expectation(2, 0, mode).unwrap(), 2.0);
            assert_relative_eq!(oracle_chain_expectation(2, 1, mode).unwrap(), 2.0);
        }
        assert!(oracle_chain_expectation(3, 3, SamplingMode::NodeUniform).is_err());
    }

    #[test]
    fn chain_oracle_three_nodes_by_hand() {
        // Chain 0-1-2, NodeUniform. From {1}: both sides open, each 1/6.
        // E[{1}] = 3 + E[2-node interval]; from [0,1] only 1 -> 2 helps
        // (prob 1/6), so E = 6. Total 9.
        let e = chain_expectations(3, SamplingMode::NodeUniform).unwrap();
        assert_relative_eq!(e[1], 9.0, max_relative = 1e-14);
        // From {0}: 0 -> 1 with prob 1/3, then 1 -> 2 with prob 1/6.
        assert_relative_eq!(e[0], 9.0, max_relative = 1e-14);
        assert_relative_eq!(e[2], e[0], max_relative = 1e-14);
    }

    #[test]
    fn chain_reached_sets_stay_intervals() {
        let g = gen_chain(25).unwrap();
        for (i, mode) in [SamplingMode::NodeUniform, SamplingMode::EdgeUniform]
            .into_iter()
            .enumerate()
        {
            let mut rng = trial_rng(17, i as u64);
            let mut state = ReachState::new(25, 11);
            while state.count() < 25 {
                let before = state.count();
                state.apply(g.sample_event(mode, &mut rng).unwrap());
                assert!(state.count() - before <= 1);
                let nodes = state.reached_nodes();
                assert_eq!(nodes.last().unwrap() - nodes[0] + 1, nodes.len());
                assert!(state.is_reached(11));
            }
        }
    }
}
