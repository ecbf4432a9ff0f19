//! The two-phase triangle-based k-cluster tester.
//!
//! Phase one samples `s` vertices, estimates each one's lazy vertex-walk
//! endpoint distribution from `m` walks of length `l`, and runs the
//! k-cluster test; a rejection ends the run. Phase two does the same with
//! `2s` uniform edges and the edge walk, and its verdict is final.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::dist_tests::{CollisionProfile, DistError, Verdict};
use crate::graph::{Graph, GraphError, QueryCount, QueryLedger, QueryOracle};
use crate::rng::derive;
use crate::samplers::{sample_edges, sample_vertices, SamplerError};
use crate::walks::exact::{distribution_after, edge_transition, lazy, vertex_transition};
use crate::walks::spectral::SPECTRAL_CAP;
use crate::walks::{endpoint_distribution, EndpointSample, Position};

pub mod cluster_test;
pub mod params;

pub use cluster_test::{k_cluster_test, ClusterTestOutcome, ComponentRule, Evidence, ExactDistribution, SimilarityGraph};
pub use params::{compute_params, Constants, ParamError, ParamMode, ParamRequest, PhaseParams, Scales, TesterParams};

#[derive(Debug, Error)]
pub enum TesterError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("parameters were computed for n = {expected}, graph has {actual} vertices")]
    WrongGraph { expected: usize, actual: usize },
    #[error("exact evaluation needs at most {cap} positions, phase has {size}")]
    TooLargeForExact { size: usize, cap: usize },
}

/// How endpoint distributions are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    /// `m` simulated walks per origin through the query oracle.
    #[default]
    Sampled,
    /// Exact lazy-walk distributions by matrix powers (small graphs only).
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TesterConfig {
    pub params: TesterParams,
    pub rule: ComponentRule,
    pub evaluation: Evaluation,
}

impl TesterConfig {
    pub fn new(params: TesterParams) -> Self {
        TesterConfig {
            params,
            rule: ComponentRule::AtMostK,
            evaluation: Evaluation::Sampled,
        }
    }
}

/// Outcome of one tester run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub verdict: Verdict,
    pub phase_reached: u8,
    pub components_vertex_phase: Option<usize>,
    pub components_edge_phase: Option<usize>,
    pub norm_rejects_vertex_phase: usize,
    pub norm_rejects_edge_phase: usize,
    /// Everything charged to the ledger.
    pub queries: QueryCount,
    pub vertex_walk_queries: QueryCount,
    pub edge_sampler_queries: QueryCount,
    pub edge_walk_queries: QueryCount,
    /// Query cost had each step re-read adjacency lists without caching.
    pub literal_queries: u64,
    pub stopped_walks: u64,
    pub diagnostic: Option<String>,
    #[serde(serialize_with = "seconds")]
    pub wall_time: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

struct PhaseResult {
    outcome: Option<ClusterTestOutcome>,
    walk_queries: QueryCount,
    literal: u64,
    stopped: u64,
}

fn run_sampled(graph: &Graph, origins: &[Position], p: &PhaseParams, k: usize, rule: ComponentRule, key: u64, ledger: &QueryLedger) -> Result<PhaseResult, TesterError> {
    let before = ledger.snapshot();
    let mut profiles = Vec::with_capacity(origins.len());
    let (mut literal, mut stopped) = (0, 0);
    for (i, &origin) in origins.iter().enumerate() {
        let sample: EndpointSample = endpoint_distribution(graph, origin, p.l, p.m, derive(key, &[i as u64]), ledger)?;
        literal += sample.literal_queries;
        stopped += sample.stopped_count as u64;
        profiles.push(CollisionProfile::new(&sample.endpoints));
    }
    let outcome = k_cluster_test(&profiles, k, p, rule)?;
    let after = ledger.snapshot();
    Ok(PhaseResult {
        outcome: Some(outcome),
        walk_queries: QueryCount {
            neighbor: after.neighbor - before.neighbor,
            degree: after.degree - before.degree,
        },
        literal,
        stopped,
    })
}

fn run_exact(graph: &Graph, origins: &[Position], p: &PhaseParams, k: usize, rule: ComponentRule) -> Result<PhaseResult, TesterError> {
    let vertex_phase = matches!(origins.first(), Some(Position::Vertex(_)));
    let (size, matrix, index): (usize, _, Box<dyn Fn(&Position) -> usize>) = if vertex_phase {
        if graph.n() > SPECTRAL_CAP {
            return Err(TesterError::TooLargeForExact {
                size: graph.n(),
                cap: SPECTRAL_CAP,
            });
        }
        let pm = lazy(&vertex_transition(graph));
        (
            graph.n(),
            pm,
            Box::new(|pos: &Position| match pos {
                Position::Vertex(v) => *v,
                Position::Edge(_) => unreachable!("vertex phase"),
            }),
        )
    } else {
        if graph.edge_count() > SPECTRAL_CAP {
            return Err(TesterError::TooLargeForExact {
                size: graph.edge_count(),
                cap: SPECTRAL_CAP,
            });
        }
        let (edges, pm) = edge_transition(graph);
        (
            edges.len(),
            lazy(&pm),
            Box::new(move |pos: &Position| match pos {
                Position::Edge(e) => edges.binary_search(e).expect("sampled edge exists"),
                Position::Vertex(_) => unreachable!("edge phase"),
            }),
        )
    };
    debug_assert_eq!(matrix.len(), size);
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; size];
    let evidence: Vec<ExactDistribution> = origins
        .iter()
        .map(|o| {
            let i = index(o);
            ExactDistribution(cache[i].get_or_insert_with(|| distribution_after(&matrix, i, p.l)).clone())
        })
        .collect();
    Ok(PhaseResult {
        outcome: Some(k_cluster_test(&evidence, k, p, rule)?),
        walk_queries: QueryCount::default(),
        literal: 0,
        stopped: 0,
    })
}

fn run_phase(graph: &Graph, config: &TesterConfig, origins: &[Position], p: &PhaseParams, key: u64, ledger: &QueryLedger) -> Result<PhaseResult, TesterError> {
    let k = config.params.request.k;
    match config.evaluation {
        Evaluation::Sampled => run_sampled(graph, origins, p, k, config.rule, key, ledger),
        Evaluation::Exact => run_exact(graph, origins, p, k, config.rule),
    }
}

/// Runs both phases on `graph`. Identical `(graph, config, seed)` give an
/// identical record apart from `wall_time`.
pub fn triangle_k_cluster_tester(graph: &Graph, config: &TesterConfig, seed: u64) -> Result<VerdictRecord, TesterError> {
    let start = Instant::now();
    let params = &config.params;
    if graph.n() != params.request.n {
        return Err(TesterError::WrongGraph {
            expected: params.request.n,
            actual: graph.n(),
        });
    }
    let ledger = QueryLedger::new();
    let mut record = VerdictRecord {
        verdict: Verdict::Reject,
        phase_reached: 1,
        components_vertex_phase: None,
        components_edge_phase: None,
        norm_rejects_vertex_phase: 0,
        norm_rejects_edge_phase: 0,
        queries: QueryCount::default(),
        vertex_walk_queries: QueryCount::default(),
        edge_sampler_queries: QueryCount::default(),
        edge_walk_queries: QueryCount::default(),
        literal_queries: 0,
        stopped_walks: 0,
        diagnostic: None,
        wall_time: Duration::ZERO,
    };

    let vertices = sample_vertices(graph.n(), params.vertex.s, derive(seed, &[1]))?;
    let origins: Vec<Position> = vertices.items.iter().map(|&v| Position::Vertex(v)).collect();
    let phase1 = run_phase(graph, config, &origins, &params.vertex, derive(seed, &[2]), &ledger)?;
    let out1 = phase1.outcome.expect("phase ran");
    record.vertex_walk_queries = phase1.walk_queries;
    record.literal_queries += phase1.literal;
    record.stopped_walks += phase1.stopped;
    record.components_vertex_phase = out1.components;
    record.norm_rejects_vertex_phase = out1.norm_rejects.len();

    if out1.verdict == Verdict::Accept {
        record.phase_reached = 2;
        let oracle = QueryOracle::new(graph);
        let sampled = sample_edges(&oracle, params.edge.s, 0.0, derive(seed, &[3]));
        record.edge_sampler_queries = oracle.counts();
        ledger.absorb(oracle.counts());
        match sampled {
            Err(SamplerError::NoEdges { trials }) => {
                record.diagnostic = Some(format!("edge sampler found no edge in {trials} trials; graph treated as edgeless"));
            }
            Err(e) => return Err(e.into()),
            Ok(edges) => {
                let origins: Vec<Position> = edges.items.iter().map(|&e| Position::Edge(e)).collect();
                let phase2 = run_phase(graph, config, &origins, &params.edge, derive(seed, &[4]), &ledger)?;
                let out2 = phase2.outcome.expect("phase ran");
                record.edge_walk_queries = phase2.walk_queries;
                record.literal_queries += phase2.literal;
                record.stopped_walks += phase2.stopped;
                record.components_edge_phase = out2.components;
                record.norm_rejects_edge_phase = out2.norm_rejects.len();
                record.verdict = out2.verdict;
            }
        }
    }
    record.queries = ledger.snapshot();
    record.wall_time = start.elapsed();
    Ok(record)
}
