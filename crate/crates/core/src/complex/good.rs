//! The "good element" diagnostic: whether a sampled vertex (or edge) has a
//! well-spread walk distribution that agrees with most of its cluster.

use serde::Serialize;

use super::ComplexError;

/// Tester quantities the conditions are stated in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessParams {
    pub s: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodReport {
    pub norm_sq: f64,
    pub norm_bound: f64,
    pub norm_ok: bool,
    pub cluster_size: usize,
    pub size_bound: f64,
    pub size_ok: bool,
    /// Largest pairwise-close subset of the cluster containing `u` that was
    /// found, and the size it needed to reach.
    pub core_size: usize,
    pub core_needed: usize,
    pub core_ok: bool,
}

impl GoodReport {
    pub fn good(&self) -> bool {
        self.norm_ok && self.size_ok && self.core_ok
    }
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Checks the three conditions for element `u`, given the exact length-l
/// walk distribution of every element (`distributions[v]` over the same
/// `n` elements) and a cluster label per element.
///
/// 1. `‖p_u‖² ≤ 72sk/n`;
/// 2. `|C(u)| ≥ n/(36sk)`;
/// 3. some `C̃ ⊆ C(u)` with `u ∈ C̃`, `|C̃| ≥ (1 − 1/(36s))|C(u)|` and
///    `‖p_a − p_b‖² ≤ 1/(4n)` for all `a, b ∈ C̃`.
///
/// Condition 3 is a clique search in the closeness graph; it is solved
/// exactly as a bounded vertex-cover search on the "far" pairs, with budget
/// `|C(u)| − needed`.
pub fn is_good(
    u: usize,
    distributions: &[Vec<f64>],
    cluster_of: &[usize],
    params: GoodnessParams,
) -> Result<GoodReport, ComplexError> {
    let n = distributions.len();
    if u >= n || u >= cluster_of.len() {
        return Err(ComplexError::Uncovered(u));
    }
    if cluster_of.len() != n {
        return Err(ComplexError::BadPartition(format!(
            "{} labels for {n} distributions",
            cluster_of.len()
        )));
    }
    let nf = n as f64;
    let norm_sq: f64 = distributions[u].iter().map(|p| p * p).sum();
    let norm_bound = 72.0 * params.s * params.k / nf;
    let cluster: Vec<usize> = (0..n).filter(|&v| cluster_of[v] == cluster_of[u]).collect();
    let size_bound = nf / (36.0 * params.s * params.k);
    let close_bound = 1.0 / (4.0 * nf);
    let needed = ((1.0 - 1.0 / (36.0 * params.s)) * cluster.len() as f64).ceil().max(1.0) as usize;

    // Members far from u can never join; the rest must avoid far pairs.
    let (near, forced): (Vec<usize>, Vec<usize>) = cluster
        .iter()
        .partition(|&&v| dist_sq(&distributions[u], &distributions[v]) <= close_bound);
    let budget = cluster.len().saturating_sub(needed);
    let core_size = if forced.len() > budget {
        near.len()
    } else {
        let far_pairs: Vec<(usize, usize)> = (0..near.len())
            .flat_map(|a| (a + 1..near.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| dist_sq(&distributions[near[a]], &distributions[near[b]]) > close_bound)
            .collect();
        let u_pos = near.iter().position(|&v| v == u).expect("u is close to itself");
        match min_cover(&far_pairs, near.len(), u_pos, budget - forced.len()) {
            Some(removed) => near.len() - removed,
            None => 0,
        }
    };
    Ok(GoodReport {
        norm_sq,
        norm_bound,
        norm_ok: norm_sq <= norm_bound,
        cluster_size: cluster.len(),
        size_bound,
        size_ok: cluster.len() as f64 >= size_bound,
        core_size,
        core_needed: needed,
        core_ok: core_size >= needed,
    })
}

/// Smallest vertex cover of `pairs` of size at most `budget` that avoids
/// `protected`, by the classic two-way branching on an uncovered pair.
fn min_cover(pairs: &[(usize, usize)], n: usize, protected: usize, budget: usize) -> Option<usize> {
    fn go(pairs: &[(usize, usize)], removed: &mut Vec<bool>, protected: usize, budget: usize) -> Option<usize> {
        let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| !removed[a] && !removed[b]) else {
            return Some(0);
        };
        if budget == 0 {
            return None;
        }
        let mut best: Option<usize> = None;
        for v in [a, b] {
            if v == protected {
                continue;
            }
            removed[v] = true;
            if let Some(r) = go(pairs, removed, protected, budget - 1) {
                best = Some(best.map_or(r + 1, |b: usize| b.min(r + 1)));
            }
            removed[v] = false;
        }
        best
    }
    go(pairs, &mut vec![false; n], protected, budget)
}
