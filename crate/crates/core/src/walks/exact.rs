//! Exact transition matrices and distributions of the 2-dimensional walks,
//! for small graphs. The matrices are built from the same candidate
//! functions the sampled walks use.

use crate::graph::{Edge, Graph, GraphError, QueryOracle};

use super::{edge_candidates, vertex_candidates};

/// Dense row-major matrix.
pub type Matrix = Vec<Vec<f64>>;

fn rows_from<T, F>(size: usize, index_of: impl Fn(T) -> usize, mut candidates: F) -> Result<Matrix, GraphError>
where
    T: Copy,
    F: FnMut(usize) -> Result<Vec<(T, u64)>, GraphError>,
{
    let mut p = vec![vec![0.0; size]; size];
    for (i, row) in p.iter_mut().enumerate() {
        let moves = candidates(i)?;
        let total: u64 = moves.iter().map(|&(_, w)| w).sum();
        if total == 0 {
            row[i] = 1.0;
            continue;
        }
        for (t, w) in moves {
            row[index_of(t)] += w as f64 / total as f64;
        }
    }
    Ok(p)
}

/// Vertex-mode transition matrix. Rows of stopping vertices keep their mass.
pub fn vertex_transition(g: &Graph) -> Matrix {
    let o = QueryOracle::new(g);
    rows_from(g.n(), |u| u, |v| vertex_candidates(&o, v).map(|c| c.moves)).expect("vertices in range")
}

/// Edge-mode transition matrix over `g.edges()` in lexicographic order.
pub fn edge_transition(g: &Graph) -> (Vec<Edge>, Matrix) {
    let edges = g.edges();
    let o = QueryOracle::new(g);
    let p = rows_from(
        edges.len(),
        |e: Edge| edges.binary_search(&e).expect("candidate is an edge"),
        |i| edge_candidates(&o, edges[i]).map(|c| c.moves),
    )
    .expect("edges exist");
    (edges, p)
}

/// `(I + P) / 2`.
pub fn lazy(p: &Matrix) -> Matrix {
    p.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| 0.5 * x + if i == j { 0.5 } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn advance(dist: &[f64], p: &Matrix) -> Vec<f64> {
    let mut out = vec![0.0; dist.len()];
    for (i, &mass) in dist.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(&p[i]) {
            *o += mass * x;
        }
    }
    out
}

/// Distribution after `t` steps from a point mass on `start`.
pub fn distribution_after(p: &Matrix, start: usize, t: usize) -> Vec<f64> {
    let mut dist = vec![0.0; p.len()];
    dist[start] = 1.0;
    for _ in 0..t {
        dist = advance(&dist, p);
    }
    dist
}

/// Every row of `p^t`: the length-t distribution from each start.
pub fn all_distributions(p: &Matrix, t: usize) -> Matrix {
    (0..p.len()).map(|s| distribution_after(p, s, t)).collect()
}

fn normalise(weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return weights;
    }
    weights.into_iter().map(|w| w / total).collect()
}

/// Stationary law of the vertex walk: proportional to `Σ_u c(u)`, twice the
/// number of triangles at `v`.
pub fn vertex_stationary(g: &Graph) -> Vec<f64> {
    normalise(
        (0..g.n())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&u| super::common_count(g.neighbors(v), g.neighbors(u)) as f64)
                    .sum()
            })
            .collect(),
    )
}

/// Stationary law of the edge walk: proportional to the triangle degree.
pub fn edge_stationary(g: &Graph) -> Vec<f64> {
    normalise(
        g.edges()
            .iter()
            .map(|e| super::common_count(g.neighbors(e.lo()), g.neighbors(e.hi())) as f64)
            .collect(),
    )
}

/// `max_{i,j} |π_i P_ij − π_j P_ji|`.
pub fn detailed_balance_residual(p: &Matrix, pi: &[f64]) -> f64 {
    let n = p.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((pi[i] * p[i][j] - pi[j] * p[j][i]).abs());
        }
    }
    worst
}

pub fn max_abs_difference(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}
