//! Push-only sum-weight averaging.
//!
//! Each node holds a mass `s_i` and a weight `w_i`; one message moves a
//! fraction of the sender's pair to the receiver. The product of the
//! communication matrices `P(t) = K(1) K(2) ... K(t)` can be tracked to
//! evaluate the error bounds built from the Dobrushin coefficient.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, MessageEvent, SamplingMode};

/// Matrix tracking is refused above this size unless explicitly allowed.
pub const MAX_TRACKED_NODES: usize = 4096;

pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct GossipState {
    s: Vec<f64>,
    w: Vec<f64>,
    p: Option<DMatrix<f64>>,
    t: u64,
    xbar: f64,
    /// Fraction of the sender's mass and weight pushed to the receiver.
    push_fraction: f64,
}

impl GossipState {
    /// `s_i(0) = w_i x_i`; the target is the weighted average of `values`.
    pub fn init(values: &[f64], weights: &[f64], track_matrix: bool) -> Result<Self> {
        if values.is_empty() || values.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "need equally many values and weights (got {} and {})",
                values.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "weights must be finite and non-negative (got {w})"
            )));
        }
        let total_weight: f64 = weights.iter().sum();
        if total_weight <= 0.0 {
            return Err(Error::InvalidParameter("all weights are zero".into()));
        }
        let s: Vec<f64> = values.iter().zip(weights).map(|(x, w)| x * w).collect();
        let xbar = s.iter().sum::<f64>() / total_weight;
        let n = values.len();
        Ok(Self {
            s,
            w: weights.to_vec(),
            p: track_matrix.then(|| DMatrix::identity(n, n)),
            t: 0,
            xbar,
            push_fraction: 0.5,
        })
    }

    pub fn with_push_fraction(mut self, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "push fraction {fraction} is not in (0, 1)"
            )));
        }
        self.push_fraction = fraction;
        Ok(self)
    }

    /// Applies `K`: identity except row `sender`, which keeps `1 - f` on the
    /// diagonal and puts `f` on column `receiver`.
    pub fn step(&mut self, event: MessageEvent) -> Result<()> {
        let n = self.s.len();
        let MessageEvent { sender, receiver } = event;
        if sender == receiver {
            return Err(Error::InvalidParameter(format!(
                "node {sender} cannot send to itself"
            )));
        }
        if sender >= n || receiver >= n {
            return Err(Error::InvalidParameter(format!(
                "event ({sender}, {receiver}) out of range for {n} nodes"
            )));
        }
        let f = self.push_fraction;
        for v in [&mut self.s, &mut self.w] {
            let moved = f * v[sender];
            v[sender] -= moved;
            v[receiver] += moved;
        }
        if let Some(p) = self.p.as_mut() {
            // P K touches two columns: col_r += f col_s, col_s *= 1 - f.
            let (mut col_s, mut col_r) = p.columns_range_pair_mut(sender, receiver);
            col_r.axpy(f, &col_s, 1.0);
            col_s *= 1.0 - f;
        }
        self.t += 1;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.s.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn xbar(&self) -> f64 {
        self.xbar
    }

    pub fn masses(&self) -> &[f64] {
        &self.s
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn matrix(&self) -> Option<&DMatrix<f64>> {
        self.p.as_ref()
    }

    /// `s_i / w_i`; infinite where a node has no weight yet.
    pub fn estimates(&self) -> Vec<f64> {
        self.s
            .iter()
            .zip(&self.w)
            .map(|(s, w)| if *w > 0.0 { s / w } else { f64::INFINITY })
            .collect()
    }

    /// `|| s / w - xbar 1 ||_2`.
    pub fn error(&self) -> f64 {
        self.estimates()
            .iter()
            .map(|e| (e - self.xbar).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

fn check_row_stochastic(a: &DMatrix<f64>) -> Result<()> {
    for (i, row) in a.row_iter().enumerate() {
        let sum = row.sum();
        let min = row.min();
        if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE || min < -STOCHASTIC_TOLERANCE {
            return Err(Error::NotStochastic { row: i, sum, min });
        }
    }
    Ok(())
}

/// `1/2 max_{i,i'} sum_j |A_ij - A_i'j|`, the largest total-variation
/// distance between two rows.
pub fn dobrushin(a: &DMatrix<f64>) -> Result<f64> {
    check_row_stochastic(a)?;
    let n = a.nrows();
    let rows: Vec<Vec<f64>> = a.row_iter().map(|r| r.iter().copied().collect()).collect();
    let mut best: f64 = 0.0;
    for i in 0..n {
        for k in i + 1..n {
            let d: f64 = rows[i]
                .iter()
                .zip(&rows[k])
                .map(|(x, y)| (x - y).abs())
                .sum();
            best = best.max(d);
        }
    }
    Ok(0.5 * best)
}

/// `(max_j P_ji - min_j P_ji) / min_j P_ji` for each column `i`, or `None`
/// when some column minimum is zero.
pub fn column_spreads(p: &DMatrix<f64>) -> Option<Vec<f64>> {
    p.column_iter()
        .map(|c| {
            let (lo, hi) = (c.min(), c.max());
            (lo > 0.0).then(|| (hi - lo) / lo)
        })
        .collect()
}

/// `|xbar| sqrt(sum_i spread_i^2)`.
pub fn bound_b(p: &DMatrix<f64>, xbar: f64) -> Option<f64> {
    let spreads = column_spreads(p)?;
    Some(xbar.abs() * spreads.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// `4 dobrushin(P) / min_ij P_ij * |xbar| sqrt(N)`, or `None` while some
/// entry of `P` is zero.
pub fn bound_theorem(p: &DMatrix<f64>, xbar: f64) -> Result<Option<f64>> {
    let min = p.min();
    if min <= 0.0 {
        return Ok(None);
    }
    let mu = dobrushin(p)?;
    Ok(Some(
        4.0 * mu / min * xbar.abs() * (p.nrows() as f64).sqrt(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRecord {
    pub t: u64,
    pub error: f64,
    pub bound_b: Option<f64>,
    pub bound_theorem: Option<f64>,
    pub min_p: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorSeries {
    pub records: Vec<ErrorRecord>,
}

fn fmt_bound(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".to_string(), |x| x.to_string())
}

impl ErrorSeries {
    pub const CSV_HEADER: &'static str = "t,error,bound_b,bound_theorem,min_p";

    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.records.iter().map(|r| {
            format!(
                "{},{},{},{},{}",
                r.t,
                r.error,
                fmt_bound(r.bound_b),
                fmt_bound(r.bound_theorem),
                r.min_p
            )
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GossipInit {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GossipInit {
    /// All mass on node 0: `s(0) = (N, 0, ..., 0)`, unit weights, so the
    /// average is exactly 1.
    pub fn spike(n: usize) -> Self {
        let mut values = vec![0.0; n];
        if let Some(first) = values.first_mut() {
            *first = n as f64;
        }
        Self {
            values,
            weights: vec![1.0; n],
        }
    }

    pub fn consensus(n: usize, value: f64) -> Self {
        Self {
            values: vec![value; n],
            weights: vec![1.0; n],
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TraceOptions {
    pub mode: SamplingMode,
    pub steps: u64,
    pub record_every: u64,
    pub track_matrix: bool,
    /// Lifts the [`MAX_TRACKED_NODES`] guard.
    pub allow_large_matrix: bool,
    pub push_fraction: f64,
}

impl TraceOptions {
    pub fn new(steps: u64) -> Self {
        Self {
            mode: SamplingMode::NodeUniform,
            steps,
            record_every: 1,
            track_matrix: true,
            allow_large_matrix: false,
            push_fraction: 0.5,
        }
    }
}

fn record(state: &GossipState) -> Result<ErrorRecord> {
    let (bound_b, bound_theorem, min_p) = match state.matrix() {
        Some(p) => (
            bound_b(p, state.xbar),
            bound_theorem(p, state.xbar)?,
            p.min(),
        ),
        None => (None, None, f64::NAN),
    };
    Ok(ErrorRecord {
        t: state.t,
        error: state.error(),
        bound_b,
        bound_theorem,
        min_p,
    })
}

/// Drives the protocol for `opts.steps` sampled messages, recording at
/// `t = 0`, every `record_every` steps, and at the last step.
pub fn run_trace<R: Rng + ?Sized>(
    g: &Graph,
    init: &GossipInit,
    opts: &TraceOptions,
    rng: &mut R,
) -> Result<(ErrorSeries, GossipState)> {
    let n = g.node_count();
    if opts.steps == 0 || opts.record_every == 0 {
        return Err(Error::InvalidParameter(
            "steps and record_every must be at least 1".into(),
        ));
    }
    if init.values.len() != n {
        return Err(Error::InvalidParameter(format!(
            "initial state has {} nodes, graph has {n}",
            init.values.len()
        )));
    }
    if opts.track_matrix && n > MAX_TRACKED_NODES && !opts.allow_large_matrix {
        return Err(Error::InvalidParameter(format!(
            "tracking a {n}x{n} matrix exceeds the {MAX_TRACKED_NODES}-node guard"
        )));
    }
    let mut state = GossipState::init(&init.values, &init.weights, opts.track_matrix)?
        .with_push_fraction(opts.push_fraction)?;
    let mut series = ErrorSeries::default();
    series.records.push(record(&state)?);
    for _ in 0..opts.steps {
        let event = g.sample_event(opts.mode, rng)?;
        state.step(event)?;
        if state.t % opts.record_every == 0 || state.t == opts.steps {
            series.records.push(record(&state)?);
        }
    }
    Ok((series, state))
}
