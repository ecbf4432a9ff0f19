//! The k-cluster test: norm checks, then a similarity graph over the samples
//! whose component count decides.

use serde::{Deserialize, Serialize};

use super::params::PhaseParams;
use super::TesterError;
use std::hash::Hash;

use crate::dist_tests::{
    closeness_verdict, estimate_l2_distance_sq, estimate_l2_norm_sq, norm_verdict, CollisionProfile, DistError,
    Verdict,
};
use crate::walks::EndpointSample;

/// How the component count maps to a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentRule {
    /// Accept iff at most `k` components.
    #[default]
    AtMostK,
    /// Accept iff more than `k` components, exactly as the pseudocode line
    /// is printed. Kept for auditing only.
    Literal,
}

impl ComponentRule {
    pub fn verdict(self, components: usize, k: usize) -> Verdict {
        let at_most = components <= k;
        match (self, at_most) {
            (ComponentRule::AtMostK, true) | (ComponentRule::Literal, false) => Verdict::Accept,
            _ => Verdict::Reject,
        }
    }
}

/// What the k-cluster test needs to know about one origin's distribution.
pub trait Evidence {
    fn sample_size(&self) -> Option<usize>;
    fn norm_sq(&self) -> Result<f64, DistError>;
    fn distance_sq(&self, other: &Self) -> Result<f64, DistError>;
}

impl Evidence for EndpointSample {
    fn sample_size(&self) -> Option<usize> {
        Some(self.m())
    }

    fn norm_sq(&self) -> Result<f64, DistError> {
        estimate_l2_norm_sq(&self.endpoints)
    }

    fn distance_sq(&self, other: &Self) -> Result<f64, DistError> {
        Ok(estimate_l2_distance_sq(&self.endpoints, &other.endpoints)?.0)
    }
}

impl<T: Hash + Eq + Clone> Evidence for CollisionProfile<T> {
    fn sample_size(&self) -> Option<usize> {
        Some(self.m())
    }

    fn norm_sq(&self) -> Result<f64, DistError> {
        CollisionProfile::norm_sq(self)
    }

    fn distance_sq(&self, other: &Self) -> Result<f64, DistError> {
        CollisionProfile::distance_sq(self, other)
    }
}

/// An exactly known distribution over a fixed index set. The test then
/// compares true norms and distances against the same thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution(pub Vec<f64>);

impl Evidence for ExactDistribution {
    fn sample_size(&self) -> Option<usize> {
        None
    }

    fn norm_sq(&self) -> Result<f64, DistError> {
        Ok(self.0.iter().map(|p| p * p).sum())
    }

    fn distance_sq(&self, other: &Self) -> Result<f64, DistError> {
        if self.0.len() != other.0.len() {
            return Err(DistError::SizeMismatch(self.0.len(), other.0.len()));
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| (a - b).powi(2)).sum())
    }
}

/// Graph over sample indices with an edge per pair judged close, stored as
/// a spanning forest: an edge joining two distinct components is kept, one
/// inside a component is only counted. Components match the full graph, and
/// memory stays linear in the sample count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimilarityGraph {
    pub nodes: usize,
    pub forest: Vec<(usize, usize)>,
    /// Every edge of the graph, forest or not.
    pub close_pairs: u64,
    #[serde(skip)]
    parent: Vec<usize>,
}

impl Default for SimilarityGraph {
    fn default() -> Self {
        SimilarityGraph::new(0)
    }
}

impl SimilarityGraph {
    pub fn new(nodes: usize) -> Self {
        SimilarityGraph {
            nodes,
            forest: Vec::new(),
            close_pairs: 0,
            parent: (0..nodes).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.close_pairs += 1;
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.forest.push((a, b));
        }
    }

    pub fn components(&self) -> usize {
        self.nodes - self.forest.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterTestOutcome {
    pub verdict: Verdict,
    /// Indices whose norm test rejected; non-empty means reject.
    pub norm_rejects: Vec<usize>,
    /// `None` when a norm test rejected and no graph was built.
    pub components: Option<usize>,
    pub graph: Option<SimilarityGraph>,
}

/// Rejects if any norm estimate exceeds `θ/2`. Otherwise joins every pair
/// whose distance estimate is at most `2ξ` and applies `rule` to the number
/// of components. Sampled evidence must share one size that clears the
/// closeness sample bound.
pub fn k_cluster_test<E: Evidence>(
    evidence: &[E],
    k: usize,
    params: &PhaseParams,
    rule: ComponentRule,
) -> Result<ClusterTestOutcome, TesterError> {
    let sizes: Vec<Option<usize>> = evidence.iter().map(Evidence::sample_size).collect();
    if let Some(Some(first)) = sizes.first() {
        if let Some(other) = sizes.iter().flatten().find(|&&m| m != *first) {
            return Err(DistError::SizeMismatch(*first, *other).into());
        }
        params.closeness().check_samples(*first)?;
    }
    let mut norm_rejects = Vec::new();
    for (i, e) in evidence.iter().enumerate() {
        if norm_verdict(e.norm_sq()?, params.theta) == Verdict::Reject {
            norm_rejects.push(i);
        }
    }
    if !norm_rejects.is_empty() {
        return Ok(ClusterTestOutcome {
            verdict: Verdict::Reject,
            norm_rejects,
            components: None,
            graph: None,
        });
    }
    let mut graph = SimilarityGraph::new(evidence.len());
    for a in 0..evidence.len() {
        for b in a + 1..evidence.len() {
            if closeness_verdict(evidence[a].distance_sq(&evidence[b])?, params.xi) == Verdict::Accept {
                graph.add_edge(a, b);
            }
        }
    }
    let components = graph.components();
    Ok(ClusterTestOutcome {
        verdict: rule.verdict(components, k),
        norm_rejects,
        components: Some(components),
        graph: Some(graph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::walks::exact::{all_distributions, lazy, vertex_transition};
    use crate::walks::Position;

    fn phase(points: usize, theta: f64) -> PhaseParams {
        PhaseParams {
            s: 0,
            points,
            l: 0,
            m: 0,
            theta,
            delta: 0.9,
            xi: 1.0 / (4.0 * points as f64),
            b: theta,
            c31: 1.0,
        }
    }

    fn point_mass_sample(at: usize, m: usize) -> EndpointSample {
        EndpointSample {
            origin: Position::Vertex(at),
            l: 0,
            endpoints: vec![Position::Vertex(at); m],
            stopped_count: 0,
            queries: Default::default(),
            literal_queries: 0,
        }
    }

    #[test]
    fn identical_point_masses_accept() {
        let ev: Vec<_> = (0..5).map(|_| point_mass_sample(3, 500)).collect();
        let out = k_cluster_test(&ev, 1, &phase(100, 4.0), ComponentRule::AtMostK).unwrap();
        assert_eq!(out.verdict, Verdict::Accept);
        assert_eq!(out.components, Some(1));
        let h = out.graph.unwrap();
        assert_eq!((h.close_pairs, h.forest.len()), (10, 4));
    }

    #[test]
    fn two_disjoint_k4s_exact() {
        let g = copies(&complete(4), 2);
        let dist = all_distributions(&lazy(&vertex_transition(&g)), 40);
        let ev: Vec<_> = [0, 1, 4, 6].iter().map(|&v| ExactDistribution(dist[v].clone())).collect();
        let p = phase(8, 4.0);
        let k2 = k_cluster_test(&ev, 2, &p, ComponentRule::AtMostK).unwrap();
        assert_eq!((k2.verdict, k2.components), (Verdict::Accept, Some(2)));
        let k1 = k_cluster_test(&ev, 1, &p, ComponentRule::AtMostK).unwrap();
        assert_eq!(k1.verdict, Verdict::Reject);
        let literal = k_cluster_test(&ev, 1, &p, ComponentRule::Literal).unwrap();
        assert_eq!(literal.verdict, Verdict::Accept);
    }

    #[test]
    fn point_mass_fails_norm_test() {
        let n = 100_000;
        let theta = 288.0 * 10.0 * 1.0 / n as f64;
        assert!(theta < 1.0);
        let mut at = vec![0.0; 1000];
        at[0] = 1.0;
        let spread = vec![0.001; 1000];
        let ev = vec![ExactDistribution(spread.clone()), ExactDistribution(at), ExactDistribution(spread)];
        let out = k_cluster_test(&ev, 3, &phase(n, theta), ComponentRule::AtMostK).unwrap();
        assert_eq!(out.verdict, Verdict::Reject);
        assert_eq!(out.norm_rejects, vec![1]);
        assert_eq!(out.components, None);
    }

    #[test]
    fn sampled_evidence_checks() {
        let ev = vec![point_mass_sample(0, 500), point_mass_sample(0, 400)];
        assert!(matches!(
            k_cluster_test(&ev, 1, &phase(100, 4.0), ComponentRule::AtMostK),
            Err(TesterError::Dist(DistError::SizeMismatch(500, 400)))
        ));
        let ev = vec![point_mass_sample(0, 50), point_mass_sample(0, 50)];
        assert!(matches!(
            k_cluster_test(&ev, 1, &phase(100, 4.0), ComponentRule::AtMostK),
            Err(TesterError::Dist(DistError::BelowSampleBound { .. }))
        ));
    }

    #[test]
    fn component_count() {
        let mut g = SimilarityGraph::new(6);
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4)] {
            g.add_edge(a, b);
        }
        assert_eq!(g.components(), 3);
        assert_eq!((g.close_pairs, g.forest.len()), (4, 3));
        assert_eq!(SimilarityGraph::default().components(), 0);
    }
}
