//! Bounded-degree graph storage and the neighbor-query oracle.
//!
//! [`Graph`] is immutable after construction. Sublinear components never read
//! it directly; they go through a [`QueryOracle`], which answers the two
//! queries of the bounded-degree model and counts every call. Oracles are
//! cheap per-worker handles; their counts are merged into a shared
//! [`QueryLedger`] when a unit of work finishes.

use std::cell::Cell;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },

    #[error("line {line}: cannot parse `{token}` as a vertex id")]
    BadToken { line: usize, token: String },

    #[error("line {line}: expected exactly two vertex ids, found {found}")]
    BadArity { line: usize, found: usize },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("vertex {vertex} has degree {degree}, above declared maximum {d_max}")]
    DegreeExceeded {
        vertex: VertexId,
        degree: usize,
        d_max: usize,
    },

    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(VertexId, VertexId),
}

/// Undirected edge stored with its endpoints in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    /// Builds the normalized edge `(min, max)`. Panics on a self-loop.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Simple undirected graph with sorted adjacency lists.
///
/// The i-th neighbor of `v` is the i-th smallest id in `adj(v)`, which fixes
/// the oracle's answers independently of how the graph was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    d_max: usize,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicates and both orientations are
    /// collapsed; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (line, (u, v)) in edges.into_iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop {
                    line: line + 1,
                    vertex: u,
                });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let d_max = adj.iter().map(Vec::len).max().unwrap_or(0);
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Graph {
            adj,
            d_max,
            edge_count,
        })
    }

    /// Raises the declared degree bound. The bound may not be below the
    /// observed maximum degree.
    pub fn with_degree_bound(mut self, d_max: usize) -> Result<Self, GraphError> {
        if let Some((v, list)) = self.adj.iter().enumerate().find(|(_, l)| l.len() > d_max) {
            return Err(GraphError::DegreeExceeded {
                vertex: v,
                degree: list.len(),
                d_max,
            });
        }
        self.d_max = d_max;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list. Uncounted; exact (non-sublinear) code only.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree_of(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                out.push(Edge(u, v));
            }
        }
        out
    }

    /// Induced subgraph on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[VertexId]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), edges).expect("induced subgraph is well formed")
    }

    /// Writes the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n={} m={} d_max={}\n", self.n(), self.edge_count, self.d_max);
        for e in self.edges() {
            out.push_str(&format!("{} {}\n", e.0, e.1));
        }
        out
    }
}

/// Values from a leading `# n=.. m=.. d_max=..` line, as written by
/// [`Graph::to_edge_list`]. Missing keys stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeListHeader {
    pub n: Option<usize>,
    pub d_max: Option<usize>,
}

pub fn parse_header(text: &str) -> EdgeListHeader {
    let mut h = EdgeListHeader::default();
    let Some(first) = text.lines().next().and_then(|l| l.trim().strip_prefix('#')) else {
        return h;
    };
    for field in first.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => h.n = v.parse().ok(),
            Some(("d_max", v)) => h.d_max = v.parse().ok(),
            _ => {}
        }
    }
    h
}

/// Parses the edge-list format: one `u v` pair per line, `#` comments and
/// blank lines ignored. `n` defaults to one past the largest id seen and
/// `d_max` to the observed maximum degree.
pub fn load_edge_list(
    text: &str,
    n: Option<usize>,
    d_max: Option<usize>,
) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::BadArity {
                line,
                found: tokens.len(),
            });
        }
        let mut ids = [0usize; 2];
        for (slot, tok) in ids.iter_mut().zip(&tokens) {
            *slot = tok.parse().map_err(|_| GraphError::BadToken {
                line,
                token: (*tok).to_string(),
            })?;
        }
        if ids[0] == ids[1] {
            return Err(GraphError::SelfLoop {
                line,
                vertex: ids[0],
            });
        }
        max_id = max_id.max(Some(ids[0].max(ids[1])));
        edges.push((ids[0], ids[1]));
    }
    let n = n.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    let graph = Graph::from_edges(n, edges)?;
    match d_max {
        Some(bound) => graph.with_degree_bound(bound),
        None => Ok(graph),
    }
}

/// Query totals for one unit of work.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCount {
    pub neighbor: u64,
    pub degree: u64,
}

impl QueryCount {
    pub fn total(&self) -> u64 {
        self.neighbor + self.degree
    }
}

impl std::ops::Add for QueryCount {
    type Output = QueryCount;
    fn add(self, rhs: QueryCount) -> QueryCount {
        QueryCount {
            neighbor: self.neighbor + rhs.neighbor,
            degree: self.degree + rhs.degree,
        }
    }
}

impl std::ops::AddAssign for QueryCount {
    fn add_assign(&mut self, rhs: QueryCount) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for QueryCount {
    fn sum<I: Iterator<Item = QueryCount>>(iter: I) -> QueryCount {
        iter.fold(QueryCount::default(), |a, b| a + b)
    }
}

/// Shared, monotone query counters. Safe to update from many workers.
#[derive(Debug, Default)]
pub struct QueryLedger {
    neighbor: AtomicU64,
    degree: AtomicU64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&self, count: QueryCount) {
        self.neighbor.fetch_add(count.neighbor, Ordering::Relaxed);
        self.degree.fetch_add(count.degree, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> QueryCount {
        QueryCount {
            neighbor: self.neighbor.load(Ordering::Relaxed),
            degree: self.degree.load(Ordering::Relaxed),
        }
    }

    /// Clears the counters. Takes `&mut self` so no worker can be mid-run.
    pub fn reset(&mut self) {
        *self.neighbor.get_mut() = 0;
        *self.degree.get_mut() = 0;
    }
}

/// Per-worker query handle over a [`Graph`].
///
/// `n`, `d_max` and `|E|` are global parameters handed to the tester up
/// front and cost nothing; `neighbor` and `degree` are counted.
#[derive(Debug)]
pub struct QueryOracle<'g> {
    graph: &'g Graph,
    neighbor: Cell<u64>,
    degree: Cell<u64>,
}

impl<'g> QueryOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        QueryOracle {
            graph,
            neighbor: Cell::new(0),
            degree: Cell::new(0),
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d_max(&self) -> usize {
        self.graph.d_max()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if v >= self.graph.n() {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.graph.n(),
            })
        } else {
            Ok(())
        }
    }

    /// The `i`-th (1-based) neighbor of `v`, or `None` when `i` exceeds the
    /// degree.
    pub fn neighbor(&self, v: VertexId, i: usize) -> Result<Option<VertexId>, GraphError> {
        self.check(v)?;
        self.neighbor.set(self.neighbor.get() + 1);
        Ok(i.checked_sub(1).and_then(|j| self.graph.adj[v].get(j).copied()))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.check(v)?;
        self.degree.set(self.degree.get() + 1);
        Ok(self.graph.adj[v].len())
    }

    /// Full neighbor list through the oracle, charged as one degree query
    /// plus one neighbor query per neighbor.
    pub fn neighbor_list(&self, v: VertexId) -> Result<&'g [VertexId], GraphError> {
        let graph: &'g Graph = self.graph;
        let deg = self.degree(v)?;
        self.neighbor.set(self.neighbor.get() + deg as u64);
        Ok(&graph.adj[v])
    }

    pub fn counts(&self) -> QueryCount {
        QueryCount {
            neighbor: self.neighbor.get(),
            degree: self.degree.get(),
        }
    }

    /// Returns the counts accumulated so far and zeroes the handle.
    pub fn take_counts(&self) -> QueryCount {
        let c = self.counts();
        self.neighbor.set(0);
        self.degree.set(0);
        c
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    /// Disjoint copies of `g`.
    pub fn copies(g: &Graph, times: usize) -> Graph {
        let n = g.n();
        let edges = (0..times).flat_map(|c| g.edges().into_iter().map(move |e| (e.lo() + c * n, e.hi() + c * n)));
        Graph::from_edges(n * times, edges).unwrap()
    }
}
