//! Mixing rate of a weighted walk: the largest eigenvalue magnitude of the
//! normalized adjacency operator away from its top eigenvector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::weighted::WeightedGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("weighted graph is disconnected")]
    Disconnected,
    #[error("weighted graph has fewer than two vertices")]
    TooSmall,
    #[error("{n} vertices exceeds the dense spectral cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// Dense computations are refused above this size.
pub const SPECTRAL_CAP: usize = 2048;

const TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 1_000_000;
const START_SEED: u64 = 0x5eed_a1fa;

/// `D^{-1/2} W D^{-1/2}`, optionally made lazy as `(I + ·)/2`, plus the unit
/// top eigenvector `√d / ‖√d‖`.
fn operator(w: &WeightedGraph, lazy: bool) -> Result<(Vec<Vec<f64>>, Vec<f64>), SpectralError> {
    let n = w.n();
    if n < 2 {
        return Err(SpectralError::TooSmall);
    }
    if n > SPECTRAL_CAP {
        return Err(SpectralError::TooLarge { n, cap: SPECTRAL_CAP });
    }
    if !w.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let deg: Vec<f64> = (0..n).map(|v| w.weighted_degree(v) as f64).collect();
    let mut m = vec![vec![0.0; n]; n];
    for (v, row) in m.iter_mut().enumerate() {
        for &(u, wt) in w.neighbors(v) {
            row[u] = wt as f64 / (deg[v] * deg[u]).sqrt();
        }
        if lazy {
            for x in row.iter_mut() {
                *x *= 0.5;
            }
            row[v] += 0.5;
        }
    }
    let norm = deg.iter().sum::<f64>().sqrt();
    let top = deg.iter().map(|d| d.sqrt() / norm).collect();
    Ok((m, top))
}

fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn deflate(x: &mut [f64], top: &[f64]) {
    let c = dot(x, top);
    for (xi, ti) in x.iter_mut().zip(top) {
        *xi -= c * ti;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        for xi in x.iter_mut() {
            *xi /= norm;
        }
    }
    norm
}

/// `α = max{|α_2|, |α_n|}` of the normalized adjacency operator of `w`
/// (or of its lazy version), by power iteration on the square of the
/// operator restricted to the complement of the stationary direction.
/// Iterates until the eigen-residual drops below `1e-8`; the reported value
/// is the Rayleigh quotient of the converged vector.
pub fn spectral_mixing_rate(w: &WeightedGraph, lazy: bool) -> Result<f64, SpectralError> {
    let (m, top) = operator(w, lazy)?;
    let n = top.len();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x, &top);
    normalize(&mut x);
    let mut rho = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let mut y = apply(&m, &apply(&m, &x));
        deflate(&mut y, &top);
        rho = dot(&x, &y);
        let residual: f64 = y.iter().zip(&x).map(|(a, b)| (a - rho * b).powi(2)).sum::<f64>().sqrt();
        if normalize(&mut y) == 0.0 {
            return Ok(0.0);
        }
        x = y;
        if residual < TOLERANCE {
            break;
        }
    }
    Ok(rho.max(0.0).sqrt().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;

    fn dense_alpha(w: &WeightedGraph, lazy: bool) -> f64 {
        let (m, _) = operator(w, lazy).unwrap();
        let n = m.len();
        let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
        let mut eig: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        eig[1].abs().max(eig[n - 1].abs())
    }

    #[test]
    fn known_spectra() {
        let k4 = WeightedGraph::from_graph(&complete(4));
        assert!((spectral_mixing_rate(&k4, false).unwrap() - 1.0 / 3.0).abs() < 1e-8);
        assert!((spectral_mixing_rate(&k4, true).unwrap() - 1.0 / 3.0).abs() < 1e-8);
        let c4 = WeightedGraph::from_graph(&cycle(4));
        assert!((spectral_mixing_rate(&c4, false).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn errors() {
        let two = WeightedGraph::from_graph(&copies(&complete(3), 2));
        assert_eq!(spectral_mixing_rate(&two, false), Err(SpectralError::Disconnected));
        let one = WeightedGraph::from_graph(&Graph::from_edges(1, []).unwrap());
        assert_eq!(spectral_mixing_rate(&one, false), Err(SpectralError::TooSmall));
    }

    #[test]
    fn agrees_with_dense_eigensolver() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 40 {
            let n = rng.gen_range(3..14);
            let mut edges: Vec<(usize, usize, u64)> = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        edges.push((u, v, rng.gen_range(1..4)));
                    }
                }
            }
            let w = WeightedGraph::from_weighted_edges(n, edges);
            if !w.is_connected() {
                continue;
            }
            for lazy in [false, true] {
                let a = spectral_mixing_rate(&w, lazy).unwrap();
                let b = dense_alpha(&w, lazy);
                assert!((a - b).abs() < 1e-7, "power {a} dense {b}");
            }
            checked += 1;
        }
    }
}
