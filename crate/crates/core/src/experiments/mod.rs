//! Figure reproductions and the CSV artifacts behind the command-line tool.
//!
//! Every output is a pure function of the configuration and seed: trials use
//! per-trial streams, sizes are processed in order, and floats are written
//! with Rust's shortest round-trip formatting.

pub mod plot;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bounds::{
    cheeger_bound, complete_graph_bound, BoundReport, ClosedFormKind, ClosedFormVariant,
};
use crate::diffusion::{
    chain_expectations, run_trials, trial_rng, DiffusionStats, StartPolicy, TrialsConfig,
    TrialsOutcome,
};
use crate::error::{Error, Result};
use crate::gossip::{run_trace, ErrorSeries, GossipInit, TraceOptions};
use crate::graph::{gen_chain, gen_complete, Graph, SamplingMode};
use crate::spectral::{cheeger_exact, cheeger_sweep, lambda2, EXACT_CHEEGER_MAX_NODES};
use plot::{LinePlot, Series};

pub const DEFAULT_SIZES: [usize; 7] = [10, 20, 50, 100, 200, 500, 1000];
pub const DEFAULT_TRIALS: u64 = 50;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const FIG3_NODES: usize = 100;
pub const FIG3_STEPS_PER_NODE: u64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig2,
    Fig3,
    Custom,
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" => Ok(Experiment::Fig1),
            "fig2" => Ok(Experiment::Fig2),
            "fig3" => Ok(Experiment::Fig3),
            "custom" => Ok(Experiment::Custom),
            other => Err(Error::InvalidParameter(format!(
                "unknown experiment {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Fig1 => "fig1",
            Experiment::Fig2 => "fig2",
            Experiment::Fig3 => "fig3",
            Experiment::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub delta: f64,
    pub seed: u64,
    pub sampling: SamplingMode,
    pub start: StartPolicy,
    pub svg: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        let sizes = match experiment {
            Experiment::Fig3 => vec![FIG3_NODES],
            _ => DEFAULT_SIZES.to_vec(),
        };
        Self {
            experiment,
            sizes,
            trials: DEFAULT_TRIALS,
            delta: DEFAULT_DELTA,
            seed: 0,
            sampling: SamplingMode::NodeUniform,
            start: StartPolicy::Uniform,
            svg: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {} is not in (0, 1)",
                self.delta
            )));
        }
        if self.sizes.is_empty() {
            return Err(Error::InvalidParameter("size grid is empty".into()));
        }
        if let Some(n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidParameter(format!(
                "figure sizes must be at least 2 (got {n})"
            )));
        }
        Ok(())
    }

    fn trials_config(&self, n: usize) -> TrialsConfig {
        TrialsConfig::new(self.trials, size_seed(self.seed, n))
            .with_mode(self.sampling)
            .with_start(self.start)
    }
}

/// Base seed for the trials at size `n`.
pub fn size_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn start_label(start: StartPolicy) -> String {
    match start {
        StartPolicy::Uniform => "uniform".into(),
        StartPolicy::Fixed(s) => s.to_string(),
    }
}

/// One line of the complete-graph sweep, all values in messages per node.
#[derive(Clone, Debug)]
pub struct Fig1Row {
    pub n: usize,
    pub stats: DiffusionStats,
    pub exact_mean: f64,
    pub chebyshev: f64,
    pub bound_principal: f64,
    pub bound_paper_literal: f64,
}

pub const FIG1_HEADER: &str = "n,trials,mode,alpha_kind,delta,mean_per_node,std_per_node,q95_per_node,exact_mean_per_node,chebyshev_per_node,bound_principal_per_node,bound_paper_literal_per_node";

impl Fig1Row {
    pub fn csv_row(&self, cfg: &ExperimentConfig) -> String {
        let n = self.n as f64;
        format!(
            "{},{},{},exact-complete,{},{},{},{},{},{},{},{}",
            self.n,
            self.stats.trials,
            cfg.sampling.label(),
            cfg.delta,
            self.stats.mean / n,
            self.stats.std / n,
            self.stats.quantile(0.95).unwrap_or(f64::NAN) / n,
            self.exact_mean / n,
            self.chebyshev / n,
            self.bound_principal / n,
            self.bound_paper_literal / n,
        )
    }
}

/// Complete graphs over the size grid.
pub fn fig1(cfg: &ExperimentConfig) -> Result<Vec<Fig1Row>> {
    cfg.validate()?;
    cfg.sizes
        .iter()
        .map(|&n| {
            let g = gen_complete(n)?;
            let outcome = run_trials(&g, &cfg.trials_config(n))?;
            let report = BoundReport::complete(n, cfg.delta, ClosedFormVariant::Principal)?;
            Ok(Fig1Row {
                n,
                stats: outcome.stats,
                exact_mean: report.expectation,
                chebyshev: report.chebyshev,
                bound_principal: complete_graph_bound(n, cfg.delta, ClosedFormVariant::Principal)?,
                bound_paper_literal: complete_graph_bound(
                    n,
                    cfg.delta,
                    ClosedFormVariant::PaperLiteral,
                )?,
            })
        })
        .collect()
}

/// Exact Cheeger constant of the chain on `n` nodes: one edge over the
/// smaller half, `1 / floor(n / 2)`.
pub fn chain_cheeger(n: usize) -> f64 {
    1.0 / (n / 2) as f64
}

#[derive(Clone, Debug)]
pub struct Fig2Row {
    pub n: usize,
    pub stats: DiffusionStats,
    pub exact_mean: f64,
    pub phi: f64,
    /// Cheeger bound with the directed edge count `2(n - 1)`.
    pub bound_directed: f64,
    /// Cheeger bound with the undirected edge count `n - 1`.
    pub bound_paper_literal: f64,
}

pub const FIG2_HEADER: &str = "n,trials,mode,start,delta,mean,std,q95,exact_mean,phi,bound_mode,bound_directed,bound_paper_literal";

impl Fig2Row {
    pub fn csv_row(&self, cfg: &ExperimentConfig) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},edge-uniform,{},{}",
            self.n,
            self.stats.trials,
            cfg.sampling.label(),
            start_label(cfg.start),
            cfg.delta,
            self.stats.mean,
            self.stats.std,
            self.stats.quantile(0.95).unwrap_or(f64::NAN),
            self.exact_mean,
            self.phi,
            self.bound_directed,
            self.bound_paper_literal,
        )
    }
}

/// Chains over the size grid, with the exact interval expectation.
pub fn fig2(cfg: &ExperimentConfig) -> Result<Vec<Fig2Row>> {
    cfg.validate()?;
    cfg.sizes
        .iter()
        .map(|&n| {
            let g = gen_chain(n)?;
            let outcome = run_trials(&g, &cfg.trials_config(n))?;
            let per_start = chain_expectations(n, cfg.sampling)?;
            let exact_mean = match cfg.start {
                StartPolicy::Uniform => per_start.iter().sum::<f64>() / n as f64,
                StartPolicy::Fixed(s) => per_start[s],
            };
            let phi = chain_cheeger(n);
            Ok(Fig2Row {
                n,
                stats: outcome.stats,
                exact_mean,
                phi,
                bound_directed: cheeger_bound(phi, g.directed_edge_count() as f64, n, cfg.delta)?,
                bound_paper_literal: cheeger_bound(phi, g.edge_count() as f64, n, cfg.delta)?,
            })
        })
        .collect()
}

/// Averaging on the complete graph from `s(0) = (N, 0, ..., 0)`, unit
/// weights, `50 N` messages, every step recorded.
pub fn fig3(cfg: &ExperimentConfig) -> Result<ErrorSeries> {
    cfg.validate()?;
    let n = cfg.sizes[0];
    let g = gen_complete(n)?;
    let mut opts = TraceOptions::new(FIG3_STEPS_PER_NODE * n as u64);
    opts.mode = cfg.sampling;
    let mut rng = trial_rng(cfg.seed, 0);
    Ok(run_trace(&g, &GossipInit::spike(n), &opts, &mut rng)?.0)
}

/// Writes `header` and `rows` as a CSV file with LF line endings.
pub fn write_csv<I, S>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(row.as_ref());
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn trials_csv_rows(outcome: &TrialsOutcome) -> impl Iterator<Item = String> + '_ {
    outcome
        .t_final
        .iter()
        .enumerate()
        .map(|(i, t)| format!("{i},{t}"))
}

pub const TRIALS_HEADER: &str = "trial,t_final";

fn is_complete(g: &Graph) -> bool {
    let n = g.node_count();
    g.edge_count() == n * (n - 1) / 2
}

/// Every bound applicable to `g`: exact complete-graph moments when `g` is
/// complete, then Cheeger and spectral rows. Graphs above the exhaustive
/// limit use the sweep value, which is tagged `cheeger-sweep`.
pub fn graph_bound_reports(
    g: &Graph,
    delta: f64,
    variants: &[ClosedFormVariant],
) -> Result<Vec<BoundReport>> {
    let n = g.node_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    g.ensure_connected()?;
    let mut reports = Vec::new();
    if is_complete(g) {
        for &v in variants {
            reports.push(BoundReport::complete(n, delta, v)?);
        }
    }
    let (cheeger, kind) = if n <= EXACT_CHEEGER_MAX_NODES {
        (cheeger_exact(g)?, ClosedFormKind::Cheeger)
    } else {
        (cheeger_sweep(g)?, ClosedFormKind::CheegerSweep)
    };
    for &v in variants {
        let mut r = BoundReport::cheeger(g, cheeger.value, delta, v)?;
        if let Some((_, value)) = r.closed_form {
            r.closed_form = Some((kind, value));
        }
        reports.push(r);
    }
    let l2 = lambda2(g)?.lambda2;
    for &v in variants {
        reports.push(BoundReport::spectral(g, l2, delta, v)?);
    }
    Ok(reports)
}

pub fn bound_csv_rows(reports: &[BoundReport]) -> impl Iterator<Item = String> + '_ {
    reports.iter().map(BoundReport::csv_row)
}

/// Runs the selected figure and writes its CSV (and SVG when requested)
/// into `out_dir`. Returns the files written.
pub fn reproduce(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match cfg.experiment {
        Experiment::Fig1 => {
            let rows = fig1(cfg)?;
            let path = out_dir.join("fig1.csv");
            write_csv(&path, FIG1_HEADER, rows.iter().map(|r| r.csv_row(cfg)))?;
            written.push(path);
            if cfg.svg {
                let per_node = |f: fn(&Fig1Row) -> f64| {
                    rows.iter()
                        .map(|r| (r.n as f64, f(r) / r.n as f64))
                        .collect()
                };
                let plot = LinePlot {
                    title: "Complete graph: messages per node until full diffusion".into(),
                    x_label: "N".into(),
                    y_label: "T_N / N".into(),
                    log_x: true,
                    log_y: false,
                    series: vec![
                        Series::new("empirical mean", per_node(|r| r.stats.mean)),
                        Series::new("exact mean", per_node(|r| r.exact_mean)),
                        Series::new("bound (principal)", per_node(|r| r.bound_principal)),
                        Series::new("bound (paper-literal)", per_node(|r| r.bound_paper_literal)),
                    ],
                };
                let path = out_dir.join("fig1.svg");
                fs::write(&path, plot.render())?;
                written.push(path);
            }
        }
        Experiment::Fig2 => {
            let rows = fig2(cfg)?;
            let path = out_dir.join("fig2.csv");
            write_csv(&path, FIG2_HEADER, rows.iter().map(|r| r.csv_row(cfg)))?;
            written.push(path);
            if cfg.svg {
                let pick =
                    |f: fn(&Fig2Row) -> f64| rows.iter().map(|r| (r.n as f64, f(r))).collect();
                let plot = LinePlot {
                    title: "Chain: messages until full diffusion".into(),
                    x_label: "N".into(),
                    y_label: "T_N".into(),
                    log_x: true,
                    log_y: true,
                    series: vec![
                        Series::new("empirical mean", pick(|r| r.stats.mean)),
                        Series::new("exact mean", pick(|r| r.exact_mean)),
                        Series::new("Cheeger (directed)", pick(|r| r.bound_directed)),
                        Series::new("Cheeger (paper-literal)", pick(|r| r.bound_paper_literal)),
                    ],
                };
                let path = out_dir.join("fig2.svg");
                fs::write(&path, plot.render())?;
                written.push(path);
            }
        }
        Experiment::Fig3 => {
            let series = fig3(cfg)?;
            let path = out_dir.join("fig3.csv");
            write_csv(&path, ErrorSeries::CSV_HEADER, series.csv_rows())?;
            written.push(path);
            if cfg.svg {
                let n = cfg.sizes[0] as f64;
                let pick = |f: fn(&crate::gossip::ErrorRecord) -> Option<f64>| {
                    series
                        .records
                        .iter()
                        .filter_map(|r| f(r).map(|v| (r.t as f64 / n, v)))
                        .collect()
                };
                let plot = LinePlot {
                    title: "Averaging error and bounds, complete graph".into(),
                    x_label: "t / N".into(),
                    y_label: "error".into(),
                    log_x: false,
                    log_y: true,
                    series: vec![
                        Series::new("error", pick(|r| Some(r.error))),
                        Series::new("B(t)", pick(|r| r.bound_b)),
                        Series::new("Dobrushin bound", pick(|r| r.bound_theorem)),
                    ],
                };
                let path = out_dir.join("fig3.svg");
                fs::write(&path, plot.render())?;
                written.push(path);
            }
        }
        Experiment::Custom => {
            return Err(Error::InvalidParameter(
                "custom experiments run through the diffusion command".into(),
            ))
        }
    }
    Ok(written)
}

/// Result of one diffusion run together with the bounds for its graph.
pub struct DiffusionRun {
    pub outcome: TrialsOutcome,
    pub bounds: Vec<BoundReport>,
}

pub fn run_diffusion(
    g: &Graph,
    cfg: &TrialsConfig,
    delta: f64,
    variants: &[ClosedFormVariant],
) -> Result<DiffusionRun> {
    let outcome = run_trials(g, cfg)?;
    let bounds = graph_bound_reports(g, delta, variants)?;
    Ok(DiffusionRun { outcome, bounds })
}

/// Writes `stats.csv`, `trials.csv` and `bounds.csv` into `out_dir`.
pub fn write_diffusion(run: &DiffusionRun, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let stats = out_dir.join("stats.csv");
    write_csv(
        &stats,
        DiffusionStats::CSV_HEADER,
        [run.outcome.stats.csv_row()],
    )?;
    let trials = out_dir.join("trials.csv");
    write_csv(&trials, TRIALS_HEADER, trials_csv_rows(&run.outcome))?;
    let bounds = out_dir.join("bounds.csv");
    write_csv(
        &bounds,
        BoundReport::CSV_HEADER,
        bound_csv_rows(&run.bounds),
    )?;
    Ok(vec![stats, trials, bounds])
}
