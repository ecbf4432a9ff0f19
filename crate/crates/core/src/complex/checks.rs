//! Executable versions of the structural identities relating the
//! normalized, higher-dimensional quantities to each other and to ordinary
//! conductance. Each check enumerates and reports counterexamples rather
//! than asserting, so callers can decide what a failure means.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::classic::{classic_conductance, classic_internal, classic_internal_by_volume};
use super::cluster::{verify_cluster, ClusterBounds, Partition};
use super::{
    colorful_expansion, normalized_external_conductance, normalized_internal_conductance, raise_complex,
    ratio_to_f64, Cochain, ComplexError, EnumerationCaps, Ratio,
};
use crate::graph::Graph;

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|e| e.to_string()).collect();
    format!("n={} edges=[{}]", g.n(), edges.join(" "))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConductanceFactorReport {
    pub graphs: usize,
    pub subsets: usize,
    pub external_mismatches: usize,
    pub internal_mismatches: usize,
    /// Largest `|Ψ - 2Φ|` seen, as a float (exact arithmetic makes this 0
    /// unless the identity fails).
    pub max_abs_error: f64,
    /// Graphs on which the normalized internal conductance differs from twice
    /// the cardinality-constrained classic internal conductance.
    pub cardinality_rule_differences: usize,
    pub first_counterexample: Option<String>,
}

impl ConductanceFactorReport {
    pub fn holds(&self) -> bool {
        self.external_mismatches == 0 && self.internal_mismatches == 0
    }
}

/// Compares the 1-dimensional normalized conductances with twice the
/// classic ones, for every proper subset of every graph given. Graphs with
/// isolated vertices are skipped.
pub fn conductance_factor_check(graphs: &[Graph], caps: EnumerationCaps) -> Result<ConductanceFactorReport, ComplexError> {
    let mut rep = ConductanceFactorReport::default();
    let two = Ratio::from_integer(2);
    for g in graphs {
        let n = g.n();
        if n < 2 || (0..n).any(|v| g.degree_of(v) == 0) {
            continue;
        }
        caps.check(n)?;
        rep.graphs += 1;
        let x = raise_complex(g, 1)?;
        let all_vertices: Vec<usize> = (0..n).collect();
        let c = Cochain::full(&x, 0)?;
        for mask in 1u64..(1 << n) - 1 {
            let s: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let psi = normalized_external_conductance(&x, &Cochain::new(&x, 0, s.iter().copied())?, &c)?;
            let phi = classic_conductance(g, &s, &all_vertices)?;
            rep.subsets += 1;
            let err = (ratio_to_f64(&psi) - 2.0 * ratio_to_f64(&phi)).abs();
            rep.max_abs_error = rep.max_abs_error.max(err);
            if psi != two * phi {
                rep.external_mismatches += 1;
                rep.first_counterexample
                    .get_or_insert_with(|| format!("{} S={s:?}: Ψ={psi} Φ={phi}", describe(g)));
            }
        }
        let psi_in = normalized_internal_conductance(&x, &c, caps)?.map(|m| m.ratio);
        let phi_in = classic_internal_by_volume(g, &all_vertices, caps)?;
        if psi_in != phi_in.map(|p| two * p) {
            rep.internal_mismatches += 1;
            rep.first_counterexample
                .get_or_insert_with(|| format!("{} internal: Ψ={psi_in:?} Φ={phi_in:?}", describe(g)));
        }
        if let (Some(a), Some(b)) = (psi_in, phi_in) {
            rep.max_abs_error = rep.max_abs_error.max((ratio_to_f64(&a) - 2.0 * ratio_to_f64(&b)).abs());
        }
        if psi_in != classic_internal(g, &all_vertices, caps)?.map(|p| two * p) {
            rep.cardinality_rule_differences += 1;
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SkeletonNormReport {
    pub d: usize,
    pub complexes: usize,
    /// (complex, t, i, face) combinations examined.
    pub face_checks: usize,
    pub norm_violations: usize,
    pub degree_violations: usize,
    pub complexes_with_norm_violation: usize,
    pub complexes_with_degree_violation: usize,
    pub first_norm_counterexample: Option<String>,
    pub first_degree_counterexample: Option<String>,
}

impl SkeletonNormReport {
    pub fn holds(&self) -> bool {
        self.norm_violations == 0 && self.degree_violations == 0
    }
}

/// On every pure `d`-complex raised from the given graphs, compares for each
/// `1 ≤ t < d`, `i < t` and i-face `τ`:
/// `deg_d(τ)·(d−i) = deg_t(τ)·(t−i)` and `‖{τ}‖_d = ‖{τ}‖_t`.
///
/// Norms are additive over faces, so agreement on singletons is agreement on
/// every cochain. Graphs whose complex is not pure are skipped.
pub fn skeleton_norm_check(graphs: &[Graph], d: usize) -> Result<SkeletonNormReport, ComplexError> {
    let mut rep = SkeletonNormReport {
        d,
        ..Default::default()
    };
    for g in graphs {
        let x = raise_complex(g, d)?;
        if !x.is_pure() || x.face_count(d) == 0 {
            continue;
        }
        rep.complexes += 1;
        let (mut norm_bad, mut deg_bad) = (false, false);
        for t in 1..d {
            let skeleton = raise_complex(g, t)?;
            for i in 0..t {
                let vol_d = x.dimension_volume(i);
                let vol_t = skeleton.dimension_volume(i);
                for (idx, face) in x.faces(i).iter().enumerate() {
                    rep.face_checks += 1;
                    let deg_d = x.degree_at(i, idx) as u128;
                    let deg_t = skeleton.face_degree(face)? as u128;
                    if deg_d * (d - i) as u128 != deg_t * (t - i) as u128 {
                        rep.degree_violations += 1;
                        deg_bad = true;
                        rep.first_degree_counterexample.get_or_insert_with(|| {
                            format!("{} t={t} i={i} face={face:?}: deg_{d}={deg_d} deg_{t}={deg_t}", describe(g))
                        });
                    }
                    if deg_d * vol_t != deg_t * vol_d {
                        rep.norm_violations += 1;
                        norm_bad = true;
                        rep.first_norm_counterexample.get_or_insert_with(|| {
                            format!(
                                "{} t={t} i={i} face={face:?}: norm_{d}={} norm_{t}={}",
                                describe(g),
                                Ratio::new(deg_d, vol_d),
                                Ratio::new(deg_t, vol_t)
                            )
                        });
                    }
                }
            }
        }
        rep.complexes_with_norm_violation += usize::from(norm_bad);
        rep.complexes_with_degree_violation += usize::from(deg_bad);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DownwardClosureReport {
    pub d: usize,
    pub graphs: usize,
    /// (graph, ε) pairs at which the `d`-complex was certified.
    pub certified: usize,
    pub counterexamples: usize,
    /// `(t, count)` for each lower dimension `t`.
    pub counterexamples_by_level: Vec<(usize, usize)>,
    /// Smallest ε at which some counterexample occurs.
    pub smallest_failing_eps: Option<f64>,
    pub first_counterexample: Option<String>,
}

impl DownwardClosureReport {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }
}

/// For each graph and each ε (the graph's own exact `d`-dimensional colorful
/// expansion, plus every value of `eps_grid`), whenever the `d`-complex is an
/// ε-colorful expander, checks every lower skeleton `t ∈ [1, d)` is too.
pub fn downward_closure_check(
    graphs: &[Graph],
    d: usize,
    eps_grid: &[Ratio],
    caps: EnumerationCaps,
) -> Result<DownwardClosureReport, ComplexError> {
    let mut rep = DownwardClosureReport {
        d,
        counterexamples_by_level: (1..d).map(|t| (t, 0)).collect(),
        ..Default::default()
    };
    for g in graphs {
        let x = raise_complex(g, d)?;
        let Some(top) = colorful_expansion(&x, caps)? else {
            continue;
        };
        rep.graphs += 1;
        let mut lower = Vec::new();
        for t in 1..d {
            let skeleton = raise_complex(g, t)?;
            lower.push((t, colorful_expansion(&skeleton, caps)?.map(|m| m.ratio)));
        }
        let mut eps_values: Vec<Ratio> = eps_grid.to_vec();
        eps_values.push(top.ratio);
        for eps in eps_values {
            if top.ratio < eps || eps == Ratio::from_integer(0) {
                continue;
            }
            rep.certified += 1;
            for &(t, h) in &lower {
                if h.is_some_and(|h| h < eps) {
                    rep.counterexamples += 1;
                    rep.counterexamples_by_level[t - 1].1 += 1;
                    let e = ratio_to_f64(&eps);
                    rep.smallest_failing_eps = Some(rep.smallest_failing_eps.map_or(e, |m| m.min(e)));
                    rep.first_counterexample.get_or_insert_with(|| {
                        format!(
                            "{} ε={eps}: h_{d}={} but h_{t}={}",
                            describe(g),
                            top.ratio,
                            h.expect("checked")
                        )
                    });
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct SkeletonClusterReport {
    pub d: usize,
    pub holds_at_d: bool,
    pub lower: Vec<(usize, bool)>,
}

impl SkeletonClusterReport {
    /// True unless the partition verifies at `d` but fails some lower `t`.
    pub fn consistent(&self) -> bool {
        !self.holds_at_d || self.lower.iter().all(|&(_, ok)| ok)
    }
}

/// Verifies a partition at dimension `d` and at every `t ∈ [1, d)`.
pub fn skeleton_cluster_check(
    g: &Graph,
    partition: &Partition,
    d: usize,
    bounds: ClusterBounds,
    caps: EnumerationCaps,
) -> Result<SkeletonClusterReport, ComplexError> {
    let holds_at_d = verify_cluster(g, partition, d, bounds, caps)?.holds;
    let lower = (1..d)
        .map(|t| verify_cluster(g, partition, t, bounds, caps).map(|r| (t, r.holds)))
        .collect::<Result<_, _>>()?;
    Ok(SkeletonClusterReport { d, holds_at_d, lower })
}

/// A random graph on at most `max_n` vertices whose `d`-complex is pure,
/// built as a union of random `(d+1)`-cliques and rejected until pure with
/// every ground set inside `caps`.
pub fn random_pure_graph<R: Rng>(rng: &mut R, max_n: usize, d: usize, caps: EnumerationCaps) -> Graph {
    let size = d + 1;
    assert!(max_n >= size, "need at least {size} vertices");
    loop {
        let n = rng.gen_range(size..=max_n);
        let cliques = rng.gen_range(1..=3usize);
        let mut vertices: Vec<usize> = (0..n).collect();
        let mut edges = Vec::new();
        let mut covered = vec![false; n];
        for _ in 0..cliques {
            vertices.shuffle(rng);
            let pick = &vertices[..size];
            for a in 0..size {
                covered[pick[a]] = true;
                for b in a + 1..size {
                    edges.push((pick[a], pick[b]));
                }
            }
        }
        // Drop uncovered vertices by relabelling onto the covered ones.
        let keep: Vec<usize> = (0..n).filter(|&v| covered[v]).collect();
        let mut label = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            label[v] = i;
        }
        let g = Graph::from_edges(keep.len(), edges.into_iter().map(|(a, b)| (label[a], label[b])))
            .expect("clique union is simple");
        let x = raise_complex(&g, d).expect("d ≥ 1");
        if x.is_pure() && (0..d).all(|i| x.face_count(i) <= caps.max_ground) {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::enumerate::{connected_graphs_up_to, graphs_up_to};
    use crate::graph::fixtures::*;
    use rand::SeedableRng;

    #[test]
    fn conductance_factor_on_small_connected_graphs() {
        let rep = conductance_factor_check(&connected_graphs_up_to(5), EnumerationCaps::default()).unwrap();
        assert_eq!(rep.graphs, 1 + 2 + 6 + 21);
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.max_abs_error, 0.0);
    }

    #[test]
    fn skeleton_degree_identity_fails_on_k4() {
        let rep = skeleton_norm_check(&[complete(4)], 3).unwrap();
        assert_eq!(rep.complexes, 1);
        assert!(rep.degree_violations > 0);
        // K4 is vertex- and edge-transitive so its norms agree anyway.
        assert_eq!(rep.norm_violations, 0);
    }

    #[test]
    fn skeleton_norms_fail_on_k5_minus_edge() {
        let mut edges: Vec<(usize, usize)> = complete(5).edges().iter().map(|e| e.endpoints()).collect();
        edges.retain(|&e| e != (3, 4));
        let g = Graph::from_edges(5, edges).unwrap();
        let rep = skeleton_norm_check(&[g], 3).unwrap();
        assert_eq!(rep.complexes, 1);
        assert!(rep.norm_violations > 0, "{rep:?}");
    }

    #[test]
    fn skeleton_check_skips_impure() {
        let rep = skeleton_norm_check(&graphs_up_to(4), 3).unwrap();
        assert_eq!(rep.complexes, 1);
    }

    #[test]
    fn random_pure_graphs_are_pure() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_pure_graph(&mut rng, 10, 3, EnumerationCaps::default());
            assert!(raise_complex(&g, 3).unwrap().is_pure());
            assert!(g.n() <= 10);
        }
    }

    #[test]
    fn skeleton_cluster_on_two_k4s() {
        let g = copies(&complete(4), 2);
        let p = Partition::parse("0 1 2 3\n4 5 6 7", 8).unwrap();
        let bounds = ClusterBounds {
            psi_in: 0.5,
            psi_out: 0.0,
        };
        let rep = skeleton_cluster_check(&g, &p, 3, bounds, EnumerationCaps::default()).unwrap();
        assert!(rep.holds_at_d);
        assert!(rep.consistent());
    }
}
