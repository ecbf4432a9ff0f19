use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use triclust::complex::ComplexError;
use triclust::graph::{load_edge_list, parse_header, Graph, GraphError};
use triclust::harness::experiment::{run_experiment, ExperimentConfig, ExperimentError};
use triclust::harness::gen::{gen_clusterable, gen_far, ClusterableSpec, FarModel, GenError, IntraModel};
use triclust::tester::{
    compute_params, triangle_k_cluster_tester, ComponentRule, Evaluation, ParamError, ParamMode, ParamRequest,
    Scales, TesterConfig, TesterError,
};
use triclust::walks::spectral::SpectralError;

mod oracle;

/// Environment variable naming the worker thread count.
const THREADS_VAR: &str = "TRICLUST_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Tester(#[from] TesterError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

#[derive(Parser)]
#[command(name = "triclust", version, about = "Triangle-based k-cluster tester for bounded-degree graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tester on an edge-list graph and print a JSON verdict record.
    Test(TestArgs),
    /// Exact checks on small graphs and complexes.
    #[command(subcommand)]
    Oracle(oracle::OracleCommand),
    /// Generate a clusterable or far instance as an edge list.
    Gen(GenArgs),
    /// Run a seeded experiment from a TOML config and print CSV.
    Bench(BenchArgs),
}

/// Where to read a graph from, with optional overrides of the file header.
#[derive(Args, Clone)]
pub struct GraphArgs {
    /// Edge-list file: one `u v` pair per line, `#` comments.
    #[arg(long)]
    pub graph: PathBuf,
    /// Vertex count; defaults to the header, else one past the largest id.
    #[arg(long)]
    pub n: Option<usize>,
    /// Declared degree bound; defaults to the header, else the maximum degree.
    #[arg(long)]
    pub d_max: Option<usize>,
}

impl GraphArgs {
    pub fn load(&self) -> Result<Graph, CliError> {
        let text = read(&self.graph)?;
        let h = parse_header(&text);
        Ok(load_edge_list(&text, self.n.or(h.n), self.d_max.or(h.d_max))?)
    }
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    psi: f64,
    /// `practical` applies the scales below; `paper` uses the unscaled formulas.
    #[arg(long, default_value = "practical")]
    mode: ParamMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    scale_s: Option<f64>,
    #[arg(long)]
    scale_m: Option<f64>,
    #[arg(long)]
    scale_l: Option<f64>,
    #[arg(long)]
    scale_theta: Option<f64>,
    #[arg(long)]
    scale_delta: Option<f64>,
    /// Replace sampled walks with exact distributions (small graphs only).
    #[arg(long)]
    exact: bool,
    /// Accept iff the similarity graph has more than k components.
    #[arg(long)]
    literal_rule: bool,
    /// Include wall time in the record; output is then no longer reproducible.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenArgs {
    /// clique-chain, triangulated-regular, blow-up-regular or wheel-regular
    /// for a clusterable instance; extra-components or shattered for a far one.
    #[arg(long, default_value = "wheel-regular")]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random inter-block edges (clusterable models).
    #[arg(long, default_value_t = 0)]
    cross_edges: usize,
    /// Declared degree bound (clusterable models).
    #[arg(long)]
    d_max: Option<usize>,
    /// Block model for extra-components.
    #[arg(long, default_value = "wheel-regular")]
    intra: IntraModel,
    /// Block size for shattered.
    #[arg(long, default_value_t = 10)]
    block: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append a wall-time column.
    #[arg(long)]
    timing: bool,
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn print_json(value: &Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn run_test(a: &TestArgs) -> Result<(), CliError> {
    let g = a.graph.load()?;
    let defaults = Scales::PRACTICAL;
    let scales = Scales {
        s: a.scale_s.unwrap_or(defaults.s),
        l: a.scale_l.unwrap_or(defaults.l),
        m: a.scale_m.unwrap_or(defaults.m),
        theta: a.scale_theta.unwrap_or(defaults.theta),
        delta: a.scale_delta.unwrap_or(defaults.delta),
    };
    let req = ParamRequest::new(g.n(), g.edge_count(), a.k, a.eps, a.psi, a.mode).with_scales(scales);
    let params = compute_params(&req)?;
    let config = TesterConfig {
        params,
        rule: if a.literal_rule { ComponentRule::Literal } else { ComponentRule::AtMostK },
        evaluation: if a.exact { Evaluation::Exact } else { Evaluation::Sampled },
    };
    let rec = triangle_k_cluster_tester(&g, &config, a.seed)?;
    let mut record = serde_json::to_value(&rec)?;
    if !a.timing {
        record.as_object_mut().expect("record is an object").remove("wall_time");
    }
    print_json(&json!({
        "graph": { "n": g.n(), "edges": g.edge_count(), "d_max": g.d_max() },
        "seed": a.seed,
        "config": config,
        "record": record,
    }))
}

fn run_gen(a: &GenArgs) -> Result<(), CliError> {
    let g = match a.model.as_str() {
        "extra-components" => gen_far(a.n, a.k, FarModel::ExtraComponents { intra: a.intra }, a.seed)?,
        "shattered" => gen_far(a.n, a.k, FarModel::Shattered { block: a.block }, a.seed)?,
        other => {
            let intra: IntraModel = other.parse().map_err(CliError::Usage)?;
            let spec = ClusterableSpec {
                n: a.n,
                k: a.k,
                intra,
                cross_edges: a.cross_edges,
                d_max: a.d_max,
            };
            gen_clusterable(&spec, a.seed)?
        }
    };
    write_output(a.out.as_deref(), g.to_edge_list().as_bytes())
}

fn run_bench(a: &BenchArgs) -> Result<(), CliError> {
    let config = ExperimentConfig::from_toml(&read(&a.config)?)?;
    let mut buf = Vec::new();
    run_experiment(&config, a.timing, &mut buf)?;
    write_output(a.out.as_deref(), &buf)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Test(a) => run_test(a),
        Command::Oracle(c) => oracle::run(c),
        Command::Gen(a) => run_gen(a),
        Command::Bench(a) => run_bench(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
