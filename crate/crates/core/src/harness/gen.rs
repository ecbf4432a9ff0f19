//! Instance generators: clusterable graphs made of triangle-rich blocks and
//! graphs far from clusterable.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::rng::substream;
use crate::walks::common_count;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("n = {n} is not divisible by k = {k}")]
    Indivisible { n: usize, k: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("block of {size} vertices is too small for the {model} model (needs {min})")]
    BlockTooSmall { size: usize, model: &'static str, min: usize },
    #[error("degree budget d_max = {d_max} is infeasible: {detail}")]
    DegreeBudget { d_max: usize, detail: String },
    #[error("gave up after {0} attempts to build a simple random regular graph")]
    RegularFailed(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How each block of a clusterable instance is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntraModel {
    /// K4s strung along a path, consecutive ones sharing an edge.
    CliqueChain,
    /// Random 3-regular graph, then one chord per edge that closes it into
    /// a triangle.
    TriangulatedRegular,
    /// Random 3-regular graph `H` with every vertex replaced by a pair of
    /// adjacent copies, and every `H`-edge by all four copy-to-copy edges.
    /// Each `H`-edge becomes a K4, and K4s of incident `H`-edges share the
    /// edge between the common vertex's copies.
    BlowUpRegular,
    /// Random 4-regular graph `H` plus, around every vertex, a cycle through
    /// its `H`-neighbours in random order. Every star becomes a wheel, so
    /// every edge lies in a triangle, and both walks mix quickly.
    #[default]
    WheelRegular,
}

impl IntraModel {
    pub fn name(self) -> &'static str {
        match self {
            IntraModel::CliqueChain => "clique-chain",
            IntraModel::TriangulatedRegular => "triangulated-regular",
            IntraModel::BlowUpRegular => "blow-up-regular",
            IntraModel::WheelRegular => "wheel-regular",
        }
    }
}

impl std::str::FromStr for IntraModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "clique-chain" => Ok(IntraModel::CliqueChain),
            "triangulated-regular" => Ok(IntraModel::TriangulatedRegular),
            "blow-up-regular" => Ok(IntraModel::BlowUpRegular),
            "wheel-regular" => Ok(IntraModel::WheelRegular),
            other => Err(format!(
                "unknown intra model `{other}` (expected clique-chain, triangulated-regular, blow-up-regular or wheel-regular)"
            )),
        }
    }
}

/// Far-instance constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FarModel {
    /// `k + 1` disjoint blocks of the given intra model.
    ExtraComponents {
        #[serde(default)]
        intra: IntraModel,
    },
    /// Disjoint clique-chain blocks of `block` vertices.
    Shattered { block: usize },
}

/// Edge set under construction, kept sorted per vertex.
struct Builder {
    adj: Vec<BTreeSet<VertexId>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            adj: vec![BTreeSet::new(); n],
        }
    }

    fn add(&mut self, u: VertexId, v: VertexId) -> bool {
        if u == v || self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        true
    }

    fn has(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].contains(&v)
    }

    fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    fn build(self, d_max: Option<usize>) -> Result<Graph, GenError> {
        let n = self.adj.len();
        let g = Graph::from_edges(n, self.edges())?;
        Ok(match d_max {
            Some(d) => g.with_degree_bound(d)?,
            None => g,
        })
    }
}

const REGULAR_ATTEMPTS: usize = 1000;

/// Random simple connected graph on `h` vertices with every degree
/// `min(d, h − 1)`, except one vertex one lower when the stub count is odd.
/// Configuration model with restarts.
fn random_regular(h: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>, GenError> {
    let d = d.min(h - 1);
    for _ in 0..REGULAR_ATTEMPTS {
        let mut stubs: Vec<usize> = (0..h).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        if stubs.len() % 2 == 1 {
            stubs.pop();
        }
        stubs.shuffle(rng);
        let mut b = Builder::new(h);
        if stubs.chunks(2).all(|p| b.add(p[0], p[1])) {
            let edges = b.edges();
            let g = Graph::from_edges(h, edges.iter().copied())?;
            if crate::complex::enumerate::is_connected(&g) {
                return Ok(edges);
            }
        }
    }
    Err(GenError::RegularFailed(REGULAR_ATTEMPTS))
}

/// Adds a block on vertices `offset..offset + size`.
fn add_block(b: &mut Builder, offset: usize, size: usize, model: IntraModel, d_max: usize, rng: &mut ChaCha8Rng) -> Result<(), GenError> {
    match model {
        IntraModel::CliqueChain => {
            if size < 3 {
                return Err(GenError::BlockTooSmall {
                    size,
                    model: model.name(),
                    min: 3,
                });
            }
            // Consecutive vertices within distance 3 along the path: every
            // window of four is a K4 and neighbouring windows share an edge.
            for u in 0..size {
                for v in u + 1..(u + 4).min(size) {
                    b.add(offset + u, offset + v);
                }
            }
        }
        IntraModel::BlowUpRegular => {
            if size < 6 {
                return Err(GenError::BlockTooSmall {
                    size,
                    model: model.name(),
                    min: 6,
                });
            }
            let h = size / 2;
            // Multiplicity 2 everywhere, 3 for the last vertex on odd sizes.
            let copies = |x: usize| -> Vec<usize> {
                let mut c = vec![offset + 2 * x, offset + 2 * x + 1];
                if size % 2 == 1 && x == h - 1 {
                    c.push(offset + size - 1);
                }
                c
            };
            for x in 0..h {
                let c = copies(x);
                for i in 0..c.len() {
                    for j in i + 1..c.len() {
                        b.add(c[i], c[j]);
                    }
                }
            }
            for (x, y) in random_regular(h, 3, rng)? {
                for &u in &copies(x) {
                    for &v in &copies(y) {
                        b.add(u, v);
                    }
                }
            }
        }
        IntraModel::WheelRegular => {
            if size < 5 {
                return Err(GenError::BlockTooSmall {
                    size,
                    model: model.name(),
                    min: 5,
                });
            }
            let base = random_regular(size, 4, rng)?;
            let mut around = vec![Vec::new(); size];
            for &(x, y) in &base {
                b.add(offset + x, offset + y);
                around[x].push(y);
                around[y].push(x);
            }
            for rim in &mut around {
                rim.shuffle(rng);
                for i in 0..rim.len() {
                    b.add(offset + rim[i], offset + rim[(i + 1) % rim.len()]);
                }
            }
        }
        IntraModel::TriangulatedRegular => {
            if size < 4 {
                return Err(GenError::BlockTooSmall {
                    size,
                    model: model.name(),
                    min: 4,
                });
            }
            let base = random_regular(size, 3, rng)?;
            for &(x, y) in &base {
                b.add(offset + x, offset + y);
            }
            for &(x, y) in &base {
                let (u, v) = (offset + x, offset + y);
                let nu: Vec<_> = b.adj[u].iter().copied().collect();
                let nv: Vec<_> = b.adj[v].iter().copied().collect();
                if common_count(&nu, &nv) > 0 {
                    continue;
                }
                // Chord from one endpoint to a neighbour of the other.
                let mut options: Vec<(VertexId, VertexId)> = nv
                    .iter()
                    .filter(|&&w| w != u)
                    .map(|&w| (u, w))
                    .chain(nu.iter().filter(|&&w| w != v).map(|&w| (v, w)))
                    .filter(|&(a, c)| !b.has(a, c) && b.degree(a) < d_max && b.degree(c) < d_max)
                    .collect();
                options.shuffle(rng);
                match options.first() {
                    Some(&(a, c)) => {
                        b.add(a, c);
                    }
                    None => {
                        return Err(GenError::DegreeBudget {
                            d_max,
                            detail: format!("edge ({u}, {v}) cannot be closed into a triangle"),
                        })
                    }
                }
            }
        }
    }
    Ok(())
}

/// Splits `n` into `parts` block sizes differing by at most one.
pub fn block_sizes(n: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| n / parts + usize::from(i < n % parts)).collect()
}

/// Vertex ranges of consecutive blocks.
pub fn block_partition(sizes: &[usize]) -> Vec<Vec<VertexId>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let part = (start..start + s).collect();
            start += s;
            part
        })
        .collect()
}

/// Degree cap used by the chord model when none is given.
pub const DEFAULT_CHORD_DMAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterableSpec {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub intra: IntraModel,
    #[serde(default)]
    pub cross_edges: usize,
    /// Declared degree bound. Defaults to the largest block degree, plus
    /// one when cross edges are requested.
    #[serde(default)]
    pub d_max: Option<usize>,
}

impl ClusterableSpec {
    /// Default blocks, no cross edges, derived degree bound.
    pub fn new(n: usize, k: usize) -> Self {
        ClusterableSpec {
            n,
            k,
            intra: IntraModel::default(),
            cross_edges: 0,
            d_max: None,
        }
    }
}

/// `k` equal blocks of the intra model joined by `cross_edges` random
/// inter-block edges. Cross edges avoid closing triangles when possible and
/// never push a degree past `d_max`.
pub fn gen_clusterable(spec: &ClusterableSpec, seed: u64) -> Result<Graph, GenError> {
    let ClusterableSpec { n, k, intra, cross_edges, d_max } = *spec;
    if k == 0 {
        return Err(GenError::ZeroK);
    }
    if n % k != 0 {
        return Err(GenError::Indivisible { n, k });
    }
    let sizes = block_sizes(n, k);
    let mut rng = substream(seed, &[0]);
    let mut b = Builder::new(n);
    let chord_cap = d_max.unwrap_or(DEFAULT_CHORD_DMAX);
    let mut offset = 0;
    for &size in &sizes {
        add_block(&mut b, offset, size, intra, chord_cap, &mut rng)?;
        offset += size;
    }
    let intra_max = (0..n).map(|v| b.degree(v)).max().unwrap_or(0);
    let cap = d_max.unwrap_or(intra_max + usize::from(cross_edges > 0));
    if intra_max > cap {
        return Err(GenError::DegreeBudget {
            d_max: cap,
            detail: format!("blocks already reach degree {intra_max}"),
        });
    }
    if cross_edges > 0 {
        if k < 2 {
            return Err(GenError::DegreeBudget {
                d_max: cap,
                detail: "cross edges need at least two blocks".into(),
            });
        }
        add_cross_edges(&mut b, &sizes, cross_edges, cap, &mut substream(seed, &[1]))?;
    }
    b.build(Some(cap))
}

fn add_cross_edges(b: &mut Builder, sizes: &[usize], count: usize, cap: usize, rng: &mut ChaCha8Rng) -> Result<(), GenError> {
    let parts = block_partition(sizes);
    let block_of: Vec<usize> = parts.iter().enumerate().flat_map(|(i, p)| p.iter().map(move |_| i)).collect();
    let n = block_of.len();
    let attempts = 1000 * count.max(1) + 100 * n;
    let mut added = 0;
    let mut fallback = Vec::new();
    for _ in 0..attempts {
        if added == count {
            return Ok(());
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if block_of[u] == block_of[v] || b.has(u, v) || b.degree(u) >= cap || b.degree(v) >= cap {
            continue;
        }
        if b.adj[u].intersection(&b.adj[v]).next().is_some() {
            fallback.push((u, v));
            continue;
        }
        b.add(u, v);
        added += 1;
    }
    // Triangle-closing pairs only when nothing else fits.
    for (u, v) in fallback {
        if added == count {
            break;
        }
        if b.degree(u) < cap && b.degree(v) < cap && b.add(u, v) {
            added += 1;
        }
    }
    if added < count {
        return Err(GenError::DegreeBudget {
            d_max: cap,
            detail: format!("placed only {added} of {count} cross edges"),
        });
    }
    Ok(())
}

/// Graphs far from `k`-clusterable.
///
/// `ExtraComponents`: `k + 1` disjoint blocks. Any `k`-partition puts two
/// blocks in one part, whose internal conductance is then 0, and joining
/// them into an expander part costs edges proportional to the block size.
///
/// `Shattered`: `n / block` disjoint blocks (the last one absorbs the
/// remainder). With far more blocks than `k`, some part must contain many
/// disconnected blocks.
pub fn gen_far(n: usize, k: usize, model: FarModel, seed: u64) -> Result<Graph, GenError> {
    if k == 0 {
        return Err(GenError::ZeroK);
    }
    let mut rng = substream(seed, &[0]);
    let mut b = Builder::new(n);
    let (sizes, intra) = match model {
        FarModel::ExtraComponents { intra } => (block_sizes(n, k + 1), intra),
        FarModel::Shattered { block } => {
            let count = (n / block.max(1)).max(1);
            let mut sizes = vec![block; count];
            *sizes.last_mut().expect("at least one block") += n - block * count;
            (sizes, IntraModel::CliqueChain)
        }
    };
    let mut offset = 0;
    for &size in &sizes {
        add_block(&mut b, offset, size, intra, DEFAULT_CHORD_DMAX, &mut rng)?;
        offset += size;
    }
    b.build(None)
}
