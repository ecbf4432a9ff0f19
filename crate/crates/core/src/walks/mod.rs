//! Simulated 2-dimensional random walks over the query oracle.
//!
//! In vertex mode a step from `v` moves to a neighbour `u` with probability
//! proportional to the number of common neighbours of `u` and `v` (the
//! triangles through edge `uv`). In edge mode a step from `(x, y)` picks a
//! common neighbour `z` and moves to `(x, z)` or `(y, z)`, uniformly over all
//! such candidates. A walk with no candidate stops and rests in place.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Edge, Graph, GraphError, QueryCount, QueryLedger, QueryOracle, VertexId};
use crate::rng::substream;

pub mod exact;
pub mod highorder;
pub mod mixing;
pub mod spectral;

/// Where a walk is: a vertex or a normalized edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Position {
    Vertex(VertexId),
    Edge(Edge),
}

impl Position {
    pub fn mode(&self) -> WalkMode {
        match self {
            Position::Vertex(_) => WalkMode::Vertex,
            Position::Edge(_) => WalkMode::Edge,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Vertex(v) => write!(f, "{v}"),
            Position::Edge(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMode {
    Vertex,
    Edge,
}

/// Moves available from one position, with the query cost of finding them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidates<T> {
    /// Targets with positive integer weights, in a fixed order.
    pub moves: Vec<(T, u64)>,
    /// Queries a step would issue if it re-read both endpoint lists for
    /// every neighbour instead of caching within the step.
    pub literal_queries: u64,
}

impl<T: Copy> Candidates<T> {
    pub fn total_weight(&self) -> u64 {
        self.moves.iter().map(|&(_, w)| w).sum()
    }

    fn choose<R: Rng>(&self, rng: &mut R) -> Option<T> {
        let total = self.total_weight();
        if total == 0 {
            return None;
        }
        let mut r = rng.gen_range(0..total);
        for &(t, w) in &self.moves {
            if r < w {
                return Some(t);
            }
            r -= w;
        }
        unreachable!("weights sum to total")
    }
}

/// Size of the intersection of two ascending lists.
pub fn common_count(a: &[VertexId], b: &[VertexId]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn common(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Vertex-mode moves from `v`: each neighbour `u` weighted by `c(u)`, the
/// number of common neighbours. Costs `1 + 2·deg(v) + Σ_u deg(u)` queries.
pub fn vertex_candidates(o: &QueryOracle<'_>, v: VertexId) -> Result<Candidates<VertexId>, GraphError> {
    let nv = o.neighbor_list(v)?;
    let dv = nv.len() as u64;
    let mut moves = Vec::with_capacity(nv.len());
    let mut literal = dv + 1;
    for &u in nv {
        let nu = o.neighbor_list(u)?;
        literal += (nu.len() as u64 + 1) + (dv + 1);
        let c = common_count(nv, nu);
        if c > 0 {
            moves.push((u, c));
        }
    }
    Ok(Candidates {
        moves,
        literal_queries: literal,
    })
}

/// Edge-mode moves from `(x, y)`: for every common neighbour `z`, the edges
/// `(x, z)` and `(y, z)` with unit weight.
pub fn edge_candidates(o: &QueryOracle<'_>, e: Edge) -> Result<Candidates<Edge>, GraphError> {
    let (x, y) = e.endpoints();
    let nx = o.neighbor_list(x)?;
    if nx.binary_search(&y).is_err() {
        return Err(GraphError::NotAnEdge(x, y));
    }
    let ny = o.neighbor_list(y)?;
    let literal = nx.len() as u64 + ny.len() as u64 + 2;
    let moves = common(nx, ny)
        .into_iter()
        .flat_map(|z| [(Edge::new(x, z), 1), (Edge::new(y, z), 1)])
        .collect();
    Ok(Candidates {
        moves,
        literal_queries: literal,
    })
}

/// One non-lazy vertex-mode step; `None` means STOP.
pub fn vertex_step<R: Rng>(o: &QueryOracle<'_>, v: VertexId, rng: &mut R) -> Result<Option<VertexId>, GraphError> {
    Ok(vertex_candidates(o, v)?.choose(rng))
}

/// One non-lazy edge-mode step; `None` means STOP.
pub fn edge_step<R: Rng>(o: &QueryOracle<'_>, e: Edge, rng: &mut R) -> Result<Option<Edge>, GraphError> {
    Ok(edge_candidates(o, e)?.choose(rng))
}

/// Vertex step without allocating a candidate list. Same queries, same draws.
fn vertex_step_fast<R: Rng>(o: &QueryOracle<'_>, v: VertexId, rng: &mut R) -> Result<(Option<VertexId>, u64), GraphError> {
    let nv = o.neighbor_list(v)?;
    let dv = nv.len() as u64;
    let mut small = [0u64; 128];
    let mut big;
    let weights: &mut [u64] = if nv.len() <= small.len() {
        &mut small[..nv.len()]
    } else {
        big = vec![0u64; nv.len()];
        &mut big
    };
    let mut literal = dv + 1;
    let mut total = 0;
    for (w, &u) in weights.iter_mut().zip(nv) {
        let nu = o.neighbor_list(u)?;
        literal += (nu.len() as u64 + 1) + (dv + 1);
        *w = common_count(nv, nu);
        total += *w;
    }
    if total == 0 {
        return Ok((None, literal));
    }
    let mut r = rng.gen_range(0..total);
    for (&w, &u) in weights.iter().zip(nv) {
        if r < w {
            return Ok((Some(u), literal));
        }
        r -= w;
    }
    unreachable!("weights sum to total")
}

/// Edge step without allocating: counts common neighbours, then locates the
/// drawn one in a second merge.
fn edge_step_fast<R: Rng>(o: &QueryOracle<'_>, e: Edge, rng: &mut R) -> Result<(Option<Edge>, u64), GraphError> {
    let (x, y) = e.endpoints();
    let nx = o.neighbor_list(x)?;
    if nx.binary_search(&y).is_err() {
        return Err(GraphError::NotAnEdge(x, y));
    }
    let ny = o.neighbor_list(y)?;
    let literal = nx.len() as u64 + ny.len() as u64 + 2;
    let c = common_count(nx, ny);
    if c == 0 {
        return Ok((None, literal));
    }
    let r = rng.gen_range(0..2 * c);
    let mut target = r / 2;
    let (mut i, mut j) = (0, 0);
    loop {
        match nx[i].cmp(&ny[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if target == 0 {
                    let keep = if r % 2 == 0 { x } else { y };
                    return Ok((Some(Edge::new(keep, nx[i])), literal));
                }
                target -= 1;
                i += 1;
                j += 1;
            }
        }
    }
}

/// Mode-dispatching step that also reports the literal query cost.
fn step<R: Rng>(o: &QueryOracle<'_>, at: Position, rng: &mut R) -> Result<(Option<Position>, u64), GraphError> {
    Ok(match at {
        Position::Vertex(v) => {
            let (next, literal) = vertex_step_fast(o, v, rng)?;
            (next.map(Position::Vertex), literal)
        }
        Position::Edge(e) => {
            let (next, literal) = edge_step_fast(o, e, rng)?;
            (next.map(Position::Edge), literal)
        }
    })
}

/// Final state of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WalkState {
    pub mode: WalkMode,
    pub position: Position,
    /// Steps elapsed, lazy ones included; a stopped walk rests for the rest.
    pub step: usize,
    pub stopped: bool,
    pub literal_queries: u64,
}

/// Lazy walk of `l` steps: each step stays put with probability 1/2, else
/// takes a mode step. The coin is tossed first so lazy steps cost nothing.
/// STOP is absorbing.
pub fn lazy_walk<R: Rng>(o: &QueryOracle<'_>, start: Position, l: usize, rng: &mut R) -> Result<WalkState, GraphError> {
    let mut state = WalkState {
        mode: start.mode(),
        position: start,
        step: l,
        stopped: false,
        literal_queries: 0,
    };
    for _ in 0..l {
        if rng.gen::<bool>() {
            continue;
        }
        let (next, literal) = step(o, state.position, rng)?;
        state.literal_queries += literal;
        match next {
            Some(p) => state.position = p,
            None => {
                state.stopped = true;
                break;
            }
        }
    }
    Ok(state)
}

/// Endpoints of `m` independent lazy walks from one origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointSample {
    pub origin: Position,
    pub l: usize,
    pub endpoints: Vec<Position>,
    pub stopped_count: usize,
    pub queries: QueryCount,
    pub literal_queries: u64,
}

impl EndpointSample {
    pub fn m(&self) -> usize {
        self.endpoints.len()
    }

    pub fn histogram(&self) -> BTreeMap<Position, u64> {
        let mut h = BTreeMap::new();
        for &p in &self.endpoints {
            *h.entry(p).or_insert(0) += 1;
        }
        h
    }

    /// Writes `origin,endpoint,count` rows, endpoints in ascending order.
    pub fn write_csv<W: Write>(&self, out: W, header: bool) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        if header {
            w.write_record(["origin", "endpoint", "count"])?;
        }
        let origin = self.origin.to_string();
        for (p, c) in self.histogram() {
            w.write_record([origin.as_str(), &p.to_string(), &c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `m` lazy walks of length `l` from `start`. Walk `j` draws from the
/// substream `(key, j)`, so the sample is independent of scheduling. Every
/// query is added to `ledger`.
pub fn endpoint_distribution(
    graph: &Graph,
    start: Position,
    l: usize,
    m: usize,
    key: u64,
    ledger: &QueryLedger,
) -> Result<EndpointSample, GraphError> {
    let walks: Vec<(WalkState, QueryCount)> = (0..m)
        .into_par_iter()
        .map(|j| {
            let o = QueryOracle::new(graph);
            let mut rng = substream(key, &[j as u64]);
            let state = lazy_walk(&o, start, l, &mut rng)?;
            Ok((state, o.counts()))
        })
        .collect::<Result<_, GraphError>>()?;
    let queries: QueryCount = walks.iter().map(|(_, q)| *q).sum();
    ledger.absorb(queries);
    Ok(EndpointSample {
        origin: start,
        l,
        stopped_count: walks.iter().filter(|(s, _)| s.stopped).count(),
        literal_queries: walks.iter().map(|(s, _)| s.literal_queries).sum(),
        endpoints: walks.into_iter().map(|(s, _)| s.position).collect(),
        queries,
    })
}
