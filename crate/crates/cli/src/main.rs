use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gossip_bounds_core::bounds::{BoundReport, ClosedFormVariant};
use gossip_bounds_core::diffusion::{trial_rng, DiffusionStats, StartPolicy, TrialsConfig};
use gossip_bounds_core::experiments::{
    bound_csv_rows, graph_bound_reports, reproduce, run_diffusion, trials_csv_rows, write_csv,
    write_diffusion, Experiment, ExperimentConfig, DEFAULT_DELTA, DEFAULT_TRIALS,
    FIG3_STEPS_PER_NODE, TRIALS_HEADER,
};
use gossip_bounds_core::gossip::{run_trace, ErrorSeries, GossipInit, TraceOptions};
use gossip_bounds_core::graph::{
    gen_barabasi_albert, gen_chain, gen_complete, Graph, SamplingMode,
};

#[derive(Parser)]
#[command(
    name = "gossip-bounds",
    version,
    about = "Gossip diffusion simulator and bounds toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GraphGen(GraphGenArgs),
    /// Simulate the reach process and report statistics with matching bounds.
    Diffusion(DiffusionArgs),
    /// Evaluate every applicable diffusion-time bound for a graph.
    BoundsReport(BoundsArgs),
    /// Run sum-weight averaging and record the error against its bounds.
    GossipTrace(TraceArgs),
    /// Regenerate one of the figure data sets.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Complete,
    Chain,
    Ba,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Args)]
struct GraphSource {
    /// Edge-list file; overrides --kind.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "complete")]
    kind: Kind,
    #[arg(long)]
    nodes: Option<usize>,
    /// Edges per new node for `ba`.
    #[arg(long, default_value_t = 2)]
    attach: usize,
}

#[derive(Args)]
struct GraphGenArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 2)]
    attach: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiffusionArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "node-uniform")]
    sampling: SamplingMode,
    /// `uniform` or a node index.
    #[arg(long, default_value = "uniform", value_parser = parse_start)]
    start: StartPolicy,
    /// Closed-form variant; both when omitted.
    #[arg(long)]
    variant: Option<ClosedFormVariant>,
    /// Directory for stats.csv, trials.csv and bounds.csv; CSV goes to
    /// standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long)]
    variant: Option<ClosedFormVariant>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Messages to simulate; 50 per node by default.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = 1)]
    record_every: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "node-uniform")]
    sampling: SamplingMode,
    /// Skip the mixing-matrix product; bound columns become `inf`.
    #[arg(long)]
    no_matrix: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    figure: Figure,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Comma-separated size grid.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "node-uniform")]
    sampling: SamplingMode,
    #[arg(long, default_value = "uniform", value_parser = parse_start)]
    start: StartPolicy,
    #[arg(long)]
    svg: bool,
}

fn parse_start(s: &str) -> std::result::Result<StartPolicy, String> {
    if s.eq_ignore_ascii_case("uniform") {
        return Ok(StartPolicy::Uniform);
    }
    s.parse()
        .map(StartPolicy::Fixed)
        .map_err(|_| format!("expected `uniform` or a node index, got {s:?}"))
}

fn generate(kind: Kind, nodes: usize, attach: usize, seed: u64) -> Result<Graph> {
    Ok(match kind {
        Kind::Complete => gen_complete(nodes)?,
        Kind::Chain => gen_chain(nodes)?,
        Kind::Ba => gen_barabasi_albert(nodes, attach, seed)?,
    })
}

impl GraphSource {
    fn load(&self, seed: u64) -> Result<Graph> {
        if let Some(path) = &self.graph {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            return Graph::load_edgelist(BufReader::new(file))
                .with_context(|| format!("reading {}", path.display()));
        }
        let Some(nodes) = self.nodes else {
            bail!(UsageError("either --graph or --nodes is required".into()));
        };
        generate(self.kind, nodes, self.attach, seed)
    }
}

fn variants(v: Option<ClosedFormVariant>) -> Vec<ClosedFormVariant> {
    match v {
        Some(v) => vec![v],
        None => vec![
            ClosedFormVariant::Principal,
            ClosedFormVariant::PaperLiteral,
        ],
    }
}

fn emit(out: &mut impl Write, header: &str, rows: impl IntoIterator<Item = String>) -> Result<()> {
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn graph_gen(args: GraphGenArgs) -> Result<()> {
    let g = generate(args.kind, args.nodes, args.attach, args.seed)?;
    match args.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(&path, g.to_edgelist_string())?;
            report_written(&[path]);
        }
        None => io::stdout()
            .lock()
            .write_all(g.to_edgelist_string().as_bytes())?,
    }
    Ok(())
}

fn diffusion(args: DiffusionArgs) -> Result<()> {
    if args.trials == 0 {
        bail!(UsageError("--trials must be at least 1".into()));
    }
    let g = args.source.load(args.seed)?;
    let cfg = TrialsConfig::new(args.trials, args.seed)
        .with_mode(args.sampling)
        .with_start(args.start);
    let run = run_diffusion(&g, &cfg, args.delta, &variants(args.variant))?;
    match args.out {
        Some(dir) => report_written(&write_diffusion(&run, &dir)?),
        None => {
            let mut out = io::stdout().lock();
            emit(
                &mut out,
                DiffusionStats::CSV_HEADER,
                [run.outcome.stats.csv_row()],
            )?;
            writeln!(out)?;
            emit(
                &mut out,
                BoundReport::CSV_HEADER,
                bound_csv_rows(&run.bounds),
            )?;
            writeln!(out)?;
            emit(&mut out, TRIALS_HEADER, trials_csv_rows(&run.outcome))?;
        }
    }
    Ok(())
}

fn bounds_report(args: BoundsArgs) -> Result<()> {
    let g = args.source.load(0)?;
    let reports = graph_bound_reports(&g, args.delta, &variants(args.variant))?;
    match args.out {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            let path = dir.join("bounds.csv");
            write_csv(&path, BoundReport::CSV_HEADER, bound_csv_rows(&reports))?;
            report_written(&[path]);
        }
        None => emit(
            &mut io::stdout().lock(),
            BoundReport::CSV_HEADER,
            bound_csv_rows(&reports),
        )?,
    }
    Ok(())
}

fn gossip_trace(args: TraceArgs) -> Result<()> {
    let g = args.source.load(args.seed)?;
    let n = g.node_count();
    let mut opts = TraceOptions::new(args.steps.unwrap_or(FIG3_STEPS_PER_NODE * n as u64));
    opts.mode = args.sampling;
    opts.record_every = args.record_every;
    opts.track_matrix = !args.no_matrix;
    let mut rng = trial_rng(args.seed, 0);
    let (series, _) = run_trace(&g, &GossipInit::spike(n), &opts, &mut rng)?;
    match args.out {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            let path = dir.join("trace.csv");
            write_csv(&path, ErrorSeries::CSV_HEADER, series.csv_rows())?;
            report_written(&[path]);
        }
        None => emit(
            &mut io::stdout().lock(),
            ErrorSeries::CSV_HEADER,
            series.csv_rows(),
        )?,
    }
    Ok(())
}

fn reproduce_cmd(args: ReproduceArgs) -> Result<()> {
    let experiment = match args.figure {
        Figure::Fig1 => Experiment::Fig1,
        Figure::Fig2 => Experiment::Fig2,
        Figure::Fig3 => Experiment::Fig3,
    };
    let mut cfg = ExperimentConfig::new(experiment);
    if let Some(sizes) = args.sizes {
        cfg.sizes = sizes;
    }
    cfg.trials = args.trials;
    cfg.delta = args.delta;
    cfg.seed = args.seed;
    cfg.sampling = args.sampling;
    cfg.start = args.start;
    cfg.svg = args.svg;
    if let Err(e) = cfg.validate() {
        bail!(UsageError(e.to_string()));
    }
    report_written(&reproduce(&cfg, &args.out)?);
    Ok(())
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<UsageError>()
            || matches!(
                c.downcast_ref::<gossip_bounds_core::Error>(),
                Some(gossip_bounds_core::Error::InvalidParameter(_))
            )
    })
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GraphGen(a) => graph_gen(a),
        Command::Diffusion(a) => diffusion(a),
        Command::BoundsReport(a) => bounds_report(a),
        Command::GossipTrace(a) => gossip_trace(a),
        Command::Reproduce(a) => reproduce_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 1 } else { 2 })
        }
    }
}
