//! Seeded experiment runs: generate instances, run the tester, emit CSV.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::gen::{gen_clusterable, gen_far, ClusterableSpec, FarModel, GenError, IntraModel};
use crate::dist_tests::Verdict;
use crate::graph::{load_edge_list, parse_header, Graph, GraphError, QueryCount};
use crate::rng::derive;
use crate::tester::{
    compute_params, triangle_k_cluster_tester, ComponentRule, Constants, Evaluation, ParamError, ParamMode,
    ParamRequest, Scales, TesterConfig, TesterError,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error("trial {trial} (n = {n}): {source}")]
    Gen { trial: usize, n: usize, source: GenError },
    #[error("trial {trial} (n = {n}): {source}")]
    Tester { trial: usize, n: usize, source: TesterError },
    #[error("reading graph {path}: {source}")]
    Load { path: PathBuf, source: GraphError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceConfig {
    Clusterable {
        k: usize,
        #[serde(default)]
        intra: IntraModel,
        #[serde(default)]
        cross_edges: usize,
        #[serde(default)]
        d_max: Option<usize>,
    },
    Far {
        k: usize,
        model: FarModel,
    },
    /// A fixed graph; `sizes` must then be omitted.
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TesterSection {
    pub k: usize,
    pub eps: f64,
    pub psi: f64,
    #[serde(default = "default_mode")]
    pub mode: ParamMode,
    #[serde(default)]
    pub rule: ComponentRule,
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub scales: Scales,
    #[serde(default)]
    pub constants: Constants,
}

fn default_mode() -> ParamMode {
    ParamMode::Practical
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub seed: u64,
    /// Values of `n` to sweep; one block of `trials` rows each.
    #[serde(default)]
    pub sizes: Vec<usize>,
    pub instance: InstanceConfig,
    pub tester: TesterSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Schema checks that can fail before any trial runs.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        match &self.instance {
            InstanceConfig::File { .. } if !self.sizes.is_empty() => {
                return bad("sizes cannot be combined with a file instance".into())
            }
            InstanceConfig::File { .. } => {}
            _ if self.sizes.is_empty() => return bad("sizes must list at least one n".into()),
            InstanceConfig::Clusterable { k, .. } if self.sizes.iter().any(|n| n % k != 0) => {
                return bad(format!("every size must be divisible by the instance k = {k}"))
            }
            _ => {}
        }
        for &n in self.sizes.iter().chain(std::iter::once(&2).filter(|_| self.sizes.is_empty())) {
            let req = self.request(n, 2 * n);
            compute_params(&req).map_err(|e: ParamError| ExperimentError::Config(format!("tester parameters at n = {n}: {e}")))?;
        }
        Ok(())
    }

    fn request(&self, n: usize, edges: usize) -> ParamRequest {
        let t = &self.tester;
        ParamRequest::new(n, edges, t.k, t.eps, t.psi, t.mode)
            .with_scales(t.scales)
            .with_constants(t.constants)
    }

    fn instance(&self, n: usize, seed: u64, trial: usize, fixed: Option<&Graph>) -> Result<Graph, ExperimentError> {
        let wrap = |source| ExperimentError::Gen { trial, n, source };
        match &self.instance {
            InstanceConfig::Clusterable { k, intra, cross_edges, d_max } => gen_clusterable(
                &ClusterableSpec {
                    n,
                    k: *k,
                    intra: *intra,
                    cross_edges: *cross_edges,
                    d_max: *d_max,
                },
                seed,
            )
            .map_err(wrap),
            InstanceConfig::Far { k, model } => gen_far(n, *k, *model, seed).map_err(wrap),
            InstanceConfig::File { .. } => Ok(fixed.expect("file instance loaded").clone()),
        }
    }
}

/// One trial's outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub n: usize,
    pub edges: usize,
    pub instance_seed: u64,
    pub tester_seed: u64,
    pub verdict: Verdict,
    pub phase_reached: u8,
    pub components_vertex_phase: Option<usize>,
    pub components_edge_phase: Option<usize>,
    pub queries: QueryCount,
    pub edge_sampler_queries: QueryCount,
    pub literal_queries: u64,
    pub stopped_walks: u64,
    pub wall_time_secs: f64,
}

/// CSV columns, in order. `wall_time_secs` is appended only with timing on.
pub const COLUMNS: [&str; 14] = [
    "trial",
    "n",
    "edges",
    "instance_seed",
    "tester_seed",
    "verdict",
    "phase_reached",
    "components_vertex_phase",
    "components_edge_phase",
    "queries",
    "neighbor_queries",
    "degree_queries",
    "edge_sampler_queries",
    "stopped_walks",
];

fn opt(x: Option<usize>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

impl ExperimentRecord {
    fn row(&self, timing: bool) -> Vec<String> {
        let mut r = vec![
            self.trial.to_string(),
            self.n.to_string(),
            self.edges.to_string(),
            self.instance_seed.to_string(),
            self.tester_seed.to_string(),
            self.verdict.to_string(),
            self.phase_reached.to_string(),
            opt(self.components_vertex_phase),
            opt(self.components_edge_phase),
            self.queries.total().to_string(),
            self.queries.neighbor.to_string(),
            self.queries.degree.to_string(),
            self.edge_sampler_queries.total().to_string(),
            self.stopped_walks.to_string(),
        ];
        if timing {
            r.push(format!("{:.3}", self.wall_time_secs));
        }
        r
    }
}

/// Per-size summary appended after the rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub trials: usize,
    pub accepted: usize,
    pub mean_queries: f64,
    /// `mean_queries / (√n · ln n)`.
    pub scaled_queries: f64,
}

impl SizeSummary {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }
}

pub fn summarize(records: &[ExperimentRecord]) -> Vec<SizeSummary> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let rows: Vec<&ExperimentRecord> = records.iter().filter(|r| r.n == n).collect();
            let mean = rows.iter().map(|r| r.queries.total() as f64).sum::<f64>() / rows.len() as f64;
            let nf = n as f64;
            SizeSummary {
                n,
                trials: rows.len(),
                accepted: rows.iter().filter(|r| r.verdict == Verdict::Accept).count(),
                mean_queries: mean,
                scaled_queries: mean / (nf.sqrt() * nf.ln()),
            }
        })
        .collect()
}

/// Runs every trial (in parallel), then writes the CSV rows in trial order
/// followed by `#` summary lines. Output is byte-identical for identical
/// configs unless `timing` adds the wall-time column.
pub fn run_experiment<W: Write>(config: &ExperimentConfig, timing: bool, out: W) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    config.validate()?;
    let fixed = match &config.instance {
        InstanceConfig::File { path } => {
            let text = std::fs::read_to_string(path)?;
            let h = parse_header(&text);
            Some(load_edge_list(&text, h.n, h.d_max).map_err(|source| ExperimentError::Load { path: path.clone(), source })?)
        }
        _ => None,
    };
    let sizes = match &fixed {
        Some(g) => vec![g.n()],
        None => config.sizes.clone(),
    };
    let jobs: Vec<(usize, usize)> = sizes.iter().flat_map(|&n| (0..config.trials).map(move |t| (n, t))).collect();
    let evaluation = if config.tester.exact { Evaluation::Exact } else { Evaluation::Sampled };
    let records: Vec<ExperimentRecord> = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let instance_seed = derive(config.seed, &[n as u64, trial as u64, 0]);
            let tester_seed = derive(config.seed, &[n as u64, trial as u64, 1]);
            let g = config.instance(n, instance_seed, trial, fixed.as_ref())?;
            let wrap = |source| ExperimentError::Tester { trial, n, source };
            let params = compute_params(&config.request(n, g.edge_count())).map_err(|e| wrap(e.into()))?;
            let tester = TesterConfig {
                params,
                rule: config.tester.rule,
                evaluation,
            };
            let rec = triangle_k_cluster_tester(&g, &tester, tester_seed).map_err(wrap)?;
            Ok(ExperimentRecord {
                trial,
                n,
                edges: g.edge_count(),
                instance_seed,
                tester_seed,
                verdict: rec.verdict,
                phase_reached: rec.phase_reached,
                components_vertex_phase: rec.components_vertex_phase,
                components_edge_phase: rec.components_edge_phase,
                queries: rec.queries,
                edge_sampler_queries: rec.edge_sampler_queries,
                literal_queries: rec.literal_queries,
                stopped_walks: rec.stopped_walks,
                wall_time_secs: rec.wall_time.as_secs_f64(),
            })
        })
        .collect::<Result<_, ExperimentError>>()?;
    write_csv(&records, timing, out)?;
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], timing: bool, out: W) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if timing {
        header.push("wall_time_secs");
    }
    w.write_record(&header)?;
    for r in records {
        w.write_record(r.row(timing))?;
    }
    w.flush()?;
    let mut out = w.into_inner().map_err(|e| e.into_error())?;
    let summaries = summarize(records);
    for s in &summaries {
        writeln!(
            out,
            "# n={} trials={} accepted={} acceptance_rate={:.4} mean_queries={:.1} queries_per_sqrt_n_ln_n={:.4}",
            s.n,
            s.trials,
            s.accepted,
            s.acceptance_rate(),
            s.mean_queries,
            s.scaled_queries
        )?;
    }
    if summaries.len() > 1 {
        let lo = summaries.iter().map(|s| s.scaled_queries).fold(f64::INFINITY, f64::min);
        let hi = summaries.iter().map(|s| s.scaled_queries).fold(0.0, f64::max);
        writeln!(out, "# scaling c_min={lo:.4} c_max={hi:.4} ratio={:.4}", hi / lo)?;
    }
    Ok(())
}
