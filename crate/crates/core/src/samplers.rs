//! Vertex and edge sampling through the query oracle.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, GraphError, QueryOracle, VertexId};
use crate::rng::substream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("cannot sample from a graph with no vertices")]
    NoVertices,
    #[error("no edge found after {trials} rejection trials; the graph looks edgeless")]
    NoEdges { trials: u64 },
    #[error("bias bound must be non-negative, got {0}")]
    BadBias(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleSet<T> {
    pub kind: SampleKind,
    pub items: Vec<T>,
    pub seed: u64,
    /// Rejection trials spent (equal to `items.len()` for vertices).
    pub trials: u64,
}

/// `s` independent uniform vertices. Item `i` comes from substream `(seed, i)`.
pub fn sample_vertices(n: usize, s: usize, seed: u64) -> Result<SampleSet<VertexId>, SamplerError> {
    if n == 0 {
        return Err(SamplerError::NoVertices);
    }
    let items = (0..s)
        .map(|i| substream(seed, &[i as u64]).gen_range(0..n))
        .collect();
    Ok(SampleSet {
        kind: SampleKind::Vertex,
        items,
        seed,
        trials: s as u64,
    })
}

/// Retry budget per edge before the graph is declared edgeless.
pub fn retry_cap(n: usize, d_max: usize) -> u64 {
    (64 * n as u64 * d_max as u64).max(10_000)
}

/// `s` independent edges, exactly uniform over `E`.
///
/// Each trial draws a uniform vertex `v` and a uniform slot `i ∈ [1, d_max]`
/// and keeps `{v, neighbor(v, i)}` unless the slot is empty. Every edge is
/// hit through either endpoint with probability `2/(n·d_max)` per trial, so
/// the achieved bias is 0, within any requested `eta ≥ 0`.
pub fn sample_edges(o: &QueryOracle<'_>, s: usize, eta: f64, seed: u64) -> Result<SampleSet<Edge>, SamplerError> {
    if !(eta >= 0.0) {
        return Err(SamplerError::BadBias(eta));
    }
    let n = o.n();
    if n == 0 {
        return Err(SamplerError::NoVertices);
    }
    let d_max = o.d_max();
    let cap = retry_cap(n, d_max);
    let mut items = Vec::with_capacity(s);
    let mut trials = 0;
    for i in 0..s {
        let mut rng = substream(seed, &[i as u64]);
        let mut tries = 0;
        let edge = loop {
            if tries == cap || d_max == 0 {
                return Err(SamplerError::NoEdges { trials: tries });
            }
            tries += 1;
            let v = rng.gen_range(0..n);
            let slot = rng.gen_range(1..=d_max);
            if let Some(u) = o.neighbor(v, slot)? {
                break Edge::new(v, u);
            }
        };
        trials += tries;
        items.push(edge);
    }
    Ok(SampleSet {
        kind: SampleKind::Edge,
        items,
        seed,
        trials,
    })
}
