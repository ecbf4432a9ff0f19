//! Small weighted undirected graphs: induced i-graphs of a complex and the
//! reference walks defined on them.

use crate::graph::Graph;

/// Undirected graph with positive integer edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, u64)>>,
}

impl WeightedGraph {
    /// Builds from `(a, b, w)` triples; zero weights are dropped and repeated
    /// pairs must not occur.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (a, b, w) in edges {
            assert_ne!(a, b, "weighted graph has no self-loops");
            if w == 0 {
                continue;
            }
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        for list in &mut adj {
            list.sort_unstable();
            debug_assert!(list.windows(2).all(|p| p[0].0 != p[1].0), "repeated pair");
        }
        WeightedGraph { adj }
    }

    /// Unit weights on every edge of `g`.
    pub fn from_graph(g: &Graph) -> Self {
        Self::from_weighted_edges(g.n(), g.edges().into_iter().map(|e| (e.lo(), e.hi(), 1)))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn weight(&self, a: usize, b: usize) -> u64 {
        self.adj[a]
            .binary_search_by_key(&b, |&(w, _)| w)
            .map_or(0, |i| self.adj[a][i].1)
    }

    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Row-stochastic transition matrix of the weighted walk, dense and
    /// row-major. A vertex with no incident weight keeps its mass.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n)
            .map(|v| {
                let mut row = vec![0.0; n];
                let total = self.weighted_degree(v);
                if total == 0 {
                    row[v] = 1.0;
                } else {
                    for &(w, wt) in &self.adj[v] {
                        row[w] = wt as f64 / total as f64;
                    }
                }
                row
            })
            .collect()
    }
}
