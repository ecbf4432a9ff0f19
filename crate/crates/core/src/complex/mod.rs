//! Exact simplicial-complex machinery for small graphs.
//!
//! A graph is raised to its clique complex: the i-faces are the (i+1)-cliques.
//! Face degrees, cochain norms, expander faces and both normalized
//! conductances are computed in exact rational arithmetic ([`Ratio`]), so the
//! identity checks in [`checks`] compare values exactly rather than within a
//! tolerance.
//!
//! Everything here enumerates. It is the ground truth the sublinear tester is
//! measured against, not a production path; brute-force minimisations refuse
//! ground sets larger than [`EnumerationCaps::max_ground`].

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::weighted::WeightedGraph;

pub mod checks;
pub mod classic;
pub mod cluster;
pub mod enumerate;
pub mod good;
mod subsets;

use subsets::{CutProblem, StraddleFace};

/// Exact non-negative rational.
pub type Ratio = num_rational::Ratio<u128>;

pub fn ratio_to_f64(r: &Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("top dimension must be at least 1, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension {dim} is out of range for a complex of top dimension {top}")]
    DimensionOutOfRange { dim: usize, top: usize },

    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<VertexId>),

    #[error("face index {index} out of range in dimension {dim}")]
    BadFaceIndex { dim: usize, index: usize },

    #[error("cochains live in different dimensions ({0} and {1})")]
    DimensionMismatch(usize, usize),

    #[error("the {0}-faces have zero total volume; norms are undefined")]
    DegenerateVolume(usize),

    #[error("subset cochain is empty")]
    EmptySubset,

    #[error("subset cochain is not a proper subset of the ground cochain")]
    NotProperSubset,

    #[error("conductance denominator is zero (one side carries no volume)")]
    ZeroVolume,

    #[error("ground set of {size} faces exceeds the enumeration cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("vertex {0} is not covered by the cluster map")]
    Uncovered(usize),
}

/// Limits on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_ground: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { max_ground: 20 }
    }
}

impl EnumerationCaps {
    fn check(&self, size: usize) -> Result<(), ComplexError> {
        if size > self.max_ground {
            Err(ComplexError::CapExceeded {
                size,
                cap: self.max_ground,
            })
        } else {
            Ok(())
        }
    }
}

/// The clique complex of a graph, truncated at a top dimension.
#[derive(Debug, Clone)]
pub struct ComplexView {
    top: usize,
    faces: Vec<Vec<Vec<VertexId>>>,
    index: Vec<HashMap<Vec<VertexId>, usize>>,
    degree: Vec<Vec<u64>>,
    subfaces: Vec<Vec<Vec<usize>>>,
}

/// Builds the complex whose i-faces are the (i+1)-cliques of `g`, i ≤ `d`.
pub fn raise_complex(g: &Graph, d: usize) -> Result<ComplexView, ComplexError> {
    if d < 1 {
        return Err(ComplexError::DimensionTooSmall(d));
    }
    let mut faces: Vec<Vec<Vec<VertexId>>> = vec![(0..g.n()).map(|v| vec![v]).collect()];
    for _ in 1..=d {
        let prev = faces.last().expect("dimension 0 present");
        let mut next = Vec::new();
        for f in prev {
            let last = *f.last().expect("faces are non-empty");
            // Extensions are common neighbours larger than the current maximum,
            // which keeps every face sorted and the list lexicographic.
            for &w in g.neighbors(last).iter().filter(|&&w| w > last) {
                if f[..f.len() - 1].iter().all(|&x| g.has_edge(x, w)) {
                    let mut grown = f.clone();
                    grown.push(w);
                    next.push(grown);
                }
            }
        }
        faces.push(next);
    }
    let index: Vec<HashMap<Vec<VertexId>, usize>> = faces
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
        .collect();

    let mut degree: Vec<Vec<u64>> = faces.iter().map(|l| vec![0; l.len()]).collect();
    for top_face in &faces[d] {
        for mask in 1u32..(1 << (d + 1)) {
            let sub: Vec<VertexId> = (0..=d).filter(|b| mask >> b & 1 == 1).map(|b| top_face[b]).collect();
            let dim = sub.len() - 1;
            degree[dim][index[dim][&sub]] += 1;
        }
    }

    let mut subfaces = vec![Vec::new()];
    for dim in 1..=d {
        let level = faces[dim]
            .iter()
            .map(|f| {
                (0..f.len())
                    .map(|skip| {
                        let sub: Vec<VertexId> =
                            f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                        index[dim - 1][&sub]
                    })
                    .collect()
            })
            .collect();
        subfaces.push(level);
    }

    Ok(ComplexView {
        top: d,
        faces,
        index,
        degree,
        subfaces,
    })
}

impl ComplexView {
    pub fn top(&self) -> usize {
        self.top
    }

    fn check_dim(&self, dim: usize) -> Result<(), ComplexError> {
        if dim > self.top {
            Err(ComplexError::DimensionOutOfRange { dim, top: self.top })
        } else {
            Ok(())
        }
    }

    /// The i-faces, each a sorted vertex list, in lexicographic order. The
    /// single (-1)-face, the empty set, is implicit.
    pub fn faces(&self, dim: usize) -> &[Vec<VertexId>] {
        &self.faces[dim]
    }

    pub fn face(&self, dim: usize, index: usize) -> &[VertexId] {
        &self.faces[dim][index]
    }

    pub fn face_count(&self, dim: usize) -> usize {
        self.faces.get(dim).map_or(0, Vec::len)
    }

    pub fn face_index(&self, face: &[VertexId]) -> Option<usize> {
        let dim = face.len().checked_sub(1)?;
        let mut sorted = face.to_vec();
        sorted.sort_unstable();
        self.index.get(dim)?.get(&sorted).copied()
    }

    /// Number of top-dimensional faces containing `face`. The empty face is
    /// contained in all of them.
    pub fn face_degree(&self, face: &[VertexId]) -> Result<u64, ComplexError> {
        if face.is_empty() {
            return Ok(self.faces[self.top].len() as u64);
        }
        let idx = self.face_index(face).ok_or_else(|| ComplexError::NotAFace(face.to_vec()))?;
        Ok(self.degree[face.len() - 1][idx])
    }

    pub fn degree_at(&self, dim: usize, index: usize) -> u64 {
        self.degree[dim][index]
    }

    /// Indices (into `dim - 1`) of the codimension-one faces of a `dim`-face.
    pub fn subfaces(&self, dim: usize, index: usize) -> &[usize] {
        &self.subfaces[dim][index]
    }

    /// Total top-degree volume of all `dim`-faces.
    pub fn dimension_volume(&self, dim: usize) -> u128 {
        self.degree[dim].iter().map(|&d| d as u128).sum()
    }

    /// Faces below the top dimension that lie in no top face.
    pub fn outliers(&self) -> Vec<(usize, Vec<VertexId>)> {
        (0..self.top)
            .flat_map(|dim| {
                self.faces[dim]
                    .iter()
                    .zip(&self.degree[dim])
                    .filter(|(_, &d)| d == 0)
                    .map(move |(f, _)| (dim, f.clone()))
            })
            .collect()
    }

    /// Every face is contained in some top face.
    pub fn is_pure(&self) -> bool {
        self.degree.iter().all(|level| level.iter().all(|&d| d > 0))
    }
}

/// A set of faces of one dimension, stored as sorted face indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    dim: usize,
    members: Vec<usize>,
}

impl Cochain {
    pub fn new<I>(x: &ComplexView, dim: usize, members: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = usize>,
    {
        x.check_dim(dim)?;
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i >= x.face_count(dim)) {
            return Err(ComplexError::BadFaceIndex { dim, index: bad });
        }
        Ok(Cochain { dim, members })
    }

    /// Cochain from explicit vertex sets, all of the same size.
    pub fn from_faces(x: &ComplexView, dim: usize, faces: &[&[VertexId]]) -> Result<Self, ComplexError> {
        x.check_dim(dim)?;
        let mut idx = Vec::with_capacity(faces.len());
        for f in faces {
            if f.len() != dim + 1 {
                return Err(ComplexError::NotAFace(f.to_vec()));
            }
            idx.push(x.face_index(f).ok_or_else(|| ComplexError::NotAFace(f.to_vec()))?);
        }
        Cochain::new(x, dim, idx)
    }

    /// 0-cochain of the given vertices.
    pub fn vertices(x: &ComplexView, vertices: &[VertexId]) -> Result<Self, ComplexError> {
        let faces: Vec<[VertexId; 1]> = vertices.iter().map(|&v| [v]).collect();
        let refs: Vec<&[VertexId]> = faces.iter().map(|f| f.as_slice()).collect();
        Cochain::from_faces(x, 0, &refs)
    }

    pub fn full(x: &ComplexView, dim: usize) -> Result<Self, ComplexError> {
        x.check_dim(dim)?;
        Ok(Cochain {
            dim,
            members: (0..x.face_count(dim)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn is_subset_of(&self, other: &Cochain) -> bool {
        self.dim == other.dim && self.members.iter().all(|&m| other.contains(m))
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &Cochain) -> Cochain {
        Cochain {
            dim: self.dim,
            members: self.members.iter().copied().filter(|&m| !other.contains(m)).collect(),
        }
    }

    pub fn faces<'a>(&'a self, x: &'a ComplexView) -> impl Iterator<Item = &'a [VertexId]> + 'a {
        self.members.iter().map(move |&i| x.face(self.dim, i))
    }

    fn membership(&self, x: &ComplexView) -> Vec<bool> {
        let mut inside = vec![false; x.face_count(self.dim)];
        for &m in &self.members {
            inside[m] = true;
        }
        inside
    }
}

/// `Vol_d(C)`: summed top-degree of the members.
pub fn volume(x: &ComplexView, c: &Cochain) -> u128 {
    c.members.iter().map(|&i| x.degree[c.dim][i] as u128).sum()
}

/// `‖C‖_d = Vol_d(C) / Vol_d(X_i)`.
pub fn cochain_norm(x: &ComplexView, c: &Cochain) -> Result<Ratio, ComplexError> {
    let total = x.dimension_volume(c.dim);
    if total == 0 {
        return Err(ComplexError::DegenerateVolume(c.dim));
    }
    Ok(Ratio::new(volume(x, c), total))
}

/// (i+1)-faces with one sub-face in `a` and another in `b`.
fn straddling(x: &ComplexView, dim: usize, in_a: &[bool], in_b: &[bool]) -> Cochain {
    let members = (0..x.face_count(dim + 1))
        .filter(|&s| {
            let subs = x.subfaces(dim + 1, s);
            subs.iter().any(|&t| in_a[t]) && subs.iter().any(|&t| in_b[t])
        })
        .collect();
    Cochain { dim: dim + 1, members }
}

/// Expander face `F(C, X_i ∖ C)`: the (i+1)-faces with sub-faces on both
/// sides of `C`.
pub fn expander_face(x: &ComplexView, c: &Cochain) -> Result<Cochain, ComplexError> {
    if c.dim >= x.top {
        return Err(ComplexError::DimensionOutOfRange { dim: c.dim + 1, top: x.top });
    }
    let in_c = c.membership(x);
    let outside: Vec<bool> = in_c.iter().map(|b| !b).collect();
    Ok(straddling(x, c.dim, &in_c, &outside))
}

/// `‖F‖_{d} / ‖S‖_{d}` style ratio from raw volumes.
fn norm_ratio(x: &ComplexView, dim: usize, cut: u128, side: u128) -> Result<Ratio, ComplexError> {
    let vol_dim = x.dimension_volume(dim);
    let vol_next = x.dimension_volume(dim + 1);
    if vol_dim == 0 {
        return Err(ComplexError::DegenerateVolume(dim));
    }
    if vol_next == 0 {
        return Err(ComplexError::DegenerateVolume(dim + 1));
    }
    if side == 0 {
        return Err(ComplexError::ZeroVolume);
    }
    Ok(Ratio::new(cut * vol_dim, side * vol_next))
}

/// `Ψ_{d,C}(S) = ‖F(S, C∖S)‖_d / min{‖S‖_d, ‖C∖S‖_d}` for `∅ ≠ S ⊊ C`.
pub fn normalized_external_conductance(
    x: &ComplexView,
    s: &Cochain,
    c: &Cochain,
) -> Result<Ratio, ComplexError> {
    if s.dim != c.dim {
        return Err(ComplexError::DimensionMismatch(s.dim, c.dim));
    }
    if s.dim >= x.top {
        return Err(ComplexError::DimensionOutOfRange { dim: s.dim + 1, top: x.top });
    }
    if s.is_empty() {
        return Err(ComplexError::EmptySubset);
    }
    if !s.is_subset_of(c) || s.len() == c.len() {
        return Err(ComplexError::NotProperSubset);
    }
    let rest = c.difference(s);
    let cut = straddling(x, s.dim, &s.membership(x), &rest.membership(x));
    let side = volume(x, s).min(volume(x, &rest));
    norm_ratio(x, s.dim, volume(x, &cut), side)
}

/// Minimising cut found by exhaustive search, with the cochain attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutMinimum {
    pub ratio: Ratio,
    pub witness: Cochain,
}

/// Minimises `‖F(S, C∖S)‖ / ‖S‖` over `S ⊆ C` with `0 < Vol(S) ≤ Vol(C)/2`.
fn minimise_within(
    x: &ComplexView,
    c: &Cochain,
    caps: EnumerationCaps,
) -> Result<Option<CutMinimum>, ComplexError> {
    caps.check(c.len())?;
    let dim = c.dim;
    if dim >= x.top {
        return Err(ComplexError::DimensionOutOfRange { dim: dim + 1, top: x.top });
    }
    let mut position = vec![usize::MAX; x.face_count(dim)];
    for (p, &m) in c.members.iter().enumerate() {
        position[m] = p;
    }
    let faces = (0..x.face_count(dim + 1))
        .filter_map(|s| {
            let members: Vec<usize> = x
                .subfaces(dim + 1, s)
                .iter()
                .map(|&t| position[t])
                .filter(|&p| p != usize::MAX)
                .collect();
            (members.len() >= 2).then(|| StraddleFace {
                weight: x.degree[dim + 1][s],
                members,
            })
        })
        .collect();
    let element_weight: Vec<u64> = c.members.iter().map(|&m| x.degree[dim][m]).collect();
    let limit: u64 = element_weight.iter().sum();
    let problem = CutProblem { element_weight, faces };
    let Some(best) = problem.minimise(limit) else {
        return Ok(None);
    };
    let vol_dim = x.dimension_volume(dim);
    let vol_next = x.dimension_volume(dim + 1);
    if vol_next == 0 {
        return Err(ComplexError::DegenerateVolume(dim + 1));
    }
    let witness = Cochain {
        dim,
        members: c
            .members
            .iter()
            .enumerate()
            .filter(|(p, _)| best.mask >> p & 1 == 1)
            .map(|(_, &m)| m)
            .collect(),
    };
    Ok(Some(CutMinimum {
        ratio: best.norm_ratio(vol_dim, vol_next),
        witness,
    }))
}

/// `Ψ_d(C[X_{i+1}])`: the minimum of `‖F(S, C∖S)‖_d / ‖S‖_d` over
/// `∅ ≠ S ⊊ C` with `Vol_d(S) ≤ Vol_d(C)/2`.
///
/// Subsets of zero volume are skipped (the ratio is undefined there). `None`
/// means no subset qualifies, e.g. a single-face `C`; callers treat that as
/// vacuously well connected.
pub fn normalized_internal_conductance(
    x: &ComplexView,
    c: &Cochain,
    caps: EnumerationCaps,
) -> Result<Option<CutMinimum>, ComplexError> {
    if c.is_empty() {
        return Err(ComplexError::EmptySubset);
    }
    if x.dimension_volume(c.dim) == 0 {
        return Err(ComplexError::DegenerateVolume(c.dim));
    }
    minimise_within(x, c, caps)
}

/// Outcome of a colorful-expansion scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorfulReport {
    pub holds: bool,
    /// Smallest `‖F(C, X_i∖C)‖ / ‖C‖` over all dimensions `i < d` and all
    /// cochains with `0 < ‖C‖ ≤ 1/2`; `None` if no cochain qualifies.
    pub expansion: Option<CutMinimum>,
    /// A cochain whose ratio falls below the threshold, when one exists.
    pub witness: Option<Cochain>,
}

/// Exact colorful expansion: the minimum ratio across every dimension below
/// the top.
pub fn colorful_expansion(x: &ComplexView, caps: EnumerationCaps) -> Result<Option<CutMinimum>, ComplexError> {
    for dim in 0..x.top {
        caps.check(x.face_count(dim))?;
    }
    let mut best: Option<CutMinimum> = None;
    for dim in 0..x.top {
        let full = Cochain::full(x, dim)?;
        if x.dimension_volume(dim) == 0 {
            continue;
        }
        if let Some(m) = minimise_within(x, &full, caps)? {
            if best.as_ref().is_none_or(|b| m.ratio < b.ratio) {
                best = Some(m);
            }
        }
    }
    Ok(best)
}

/// Whether every cochain `C(i)`, `i < d`, with `0 < ‖C‖_d ≤ 1/2` satisfies
/// `‖F(C, X_i∖C)‖_d / ‖C‖_d ≥ eps`.
pub fn is_colorful_expander_exact(
    x: &ComplexView,
    eps: Ratio,
    caps: EnumerationCaps,
) -> Result<ColorfulReport, ComplexError> {
    let expansion = colorful_expansion(x, caps)?;
    let holds = expansion.as_ref().is_none_or(|m| m.ratio >= eps);
    let witness = if holds { None } else { expansion.as_ref().map(|m| m.witness.clone()) };
    Ok(ColorfulReport {
        holds,
        expansion,
        witness,
    })
}

pub fn is_colorful_expander(x: &ComplexView, eps: f64, caps: EnumerationCaps) -> Result<ColorfulReport, ComplexError> {
    let expansion = colorful_expansion(x, caps)?;
    let holds = expansion.as_ref().is_none_or(|m| ratio_to_f64(&m.ratio) >= eps);
    let witness = if holds { None } else { expansion.as_ref().map(|m| m.witness.clone()) };
    Ok(ColorfulReport {
        holds,
        expansion,
        witness,
    })
}

/// The i-graph: one vertex per i-face, an edge between faces sharing an
/// (i+1)-face, weighted by the top-degree of that shared face. Zero-weight
/// pairs are omitted.
pub fn induced_i_graph(x: &ComplexView, dim: usize) -> Result<WeightedGraph, ComplexError> {
    if dim >= x.top {
        return Err(ComplexError::DimensionOutOfRange { dim: dim + 1, top: x.top });
    }
    let mut edges = Vec::new();
    for s in 0..x.face_count(dim + 1) {
        let subs = x.subfaces(dim + 1, s);
        let w = x.degree[dim + 1][s];
        for a in 0..subs.len() {
            for b in a + 1..subs.len() {
                edges.push((subs[a], subs[b], w));
            }
        }
    }
    Ok(WeightedGraph::from_weighted_edges(x.face_count(dim), edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn r(a: u128, b: u128) -> Ratio {
        Ratio::new(a, b)
    }

    #[test]
    fn raising_counts_cliques() {
        let k4 = raise_complex(&complete(4), 2).unwrap();
        assert_eq!(k4.face_count(0), 4);
        assert_eq!(k4.face_count(1), 6);
        assert_eq!(k4.face_count(2), 4);
        assert_eq!(raise_complex(&complete(3), 2).unwrap().face_count(2), 1);
        assert_eq!(raise_complex(&path(3), 2).unwrap().face_count(2), 0);
        assert_eq!(raise_complex(&path(3), 0).unwrap_err(), ComplexError::DimensionTooSmall(0));
    }

    #[test]
    fn face_degrees() {
        let k4 = raise_complex(&complete(4), 2).unwrap();
        assert_eq!(k4.face_degree(&[0, 1]).unwrap(), 2);
        assert_eq!(k4.face_degree(&[1, 0]).unwrap(), 2);
        assert_eq!(k4.face_degree(&[0]).unwrap(), 3);
        assert_eq!(k4.face_degree(&[]).unwrap(), 4);
        let k3 = raise_complex(&complete(3), 2).unwrap();
        assert_eq!(k3.face_degree(&[0, 1]).unwrap(), 1);
        assert!(matches!(raise_complex(&path(3), 2).unwrap().face_degree(&[0, 2]), Err(ComplexError::NotAFace(_))));
    }

    #[test]
    fn closure_holds() {
        let g = copies(&complete(5), 2);
        let x = raise_complex(&g, 3).unwrap();
        for dim in 1..=3 {
            for f in x.faces(dim) {
                for skip in 0..f.len() {
                    let sub: Vec<usize> = f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                    assert!(x.face_index(&sub).is_some());
                }
                assert_eq!(f.len(), dim + 1);
            }
        }
        assert_eq!(x.face_count(0), g.n());
        assert_eq!(x.face_count(1), g.edge_count());
    }

    #[test]
    fn norms() {
        let two = copies(&complete(3), 2);
        let x = raise_complex(&two, 2).unwrap();
        let c = Cochain::from_faces(&x, 1, &[&[0, 1], &[0, 2], &[1, 2]]).unwrap();
        assert_eq!(cochain_norm(&x, &c).unwrap(), r(1, 2));
        assert_eq!(cochain_norm(&x, &Cochain::full(&x, 1).unwrap()).unwrap(), r(1, 1));
        let k4 = raise_complex(&complete(4), 2).unwrap();
        assert_eq!(cochain_norm(&k4, &Cochain::vertices(&k4, &[0, 1]).unwrap()).unwrap(), r(1, 2));
        let p = raise_complex(&path(3), 2).unwrap();
        assert_eq!(
            cochain_norm(&p, &Cochain::vertices(&p, &[0]).unwrap()),
            Err(ComplexError::DegenerateVolume(0))
        );
    }

    #[test]
    fn expander_faces() {
        let two = copies(&complete(3), 2);
        let x = raise_complex(&two, 2).unwrap();
        let c = Cochain::from_faces(&x, 1, &[&[0, 1], &[0, 2], &[1, 2]]).unwrap();
        assert!(expander_face(&x, &c).unwrap().is_empty());

        let k4 = raise_complex(&complete(4), 2).unwrap();
        let f = expander_face(&k4, &Cochain::vertices(&k4, &[0]).unwrap()).unwrap();
        let edges: Vec<&[usize]> = f.faces(&k4).collect();
        assert_eq!(edges, vec![&[0, 1][..], &[0, 2], &[0, 3]]);
        let f = expander_face(&k4, &Cochain::vertices(&k4, &[0, 1]).unwrap()).unwrap();
        let edges: Vec<&[usize]> = f.faces(&k4).collect();
        assert_eq!(edges, vec![&[0, 2][..], &[0, 3], &[1, 2], &[1, 3]]);
        let top = Cochain::full(&k4, 2).unwrap();
        assert!(matches!(expander_face(&k4, &top), Err(ComplexError::DimensionOutOfRange { .. })));
    }

    #[test]
    fn external_conductance_examples() {
        let k4 = raise_complex(&complete(4), 2).unwrap();
        let all = Cochain::full(&k4, 0).unwrap();
        let s = Cochain::vertices(&k4, &[0, 1]).unwrap();
        assert_eq!(normalized_external_conductance(&k4, &s, &all).unwrap(), r(4, 3));

        let two = raise_complex(&copies(&complete(3), 2), 2).unwrap();
        let s = Cochain::vertices(&two, &[0, 1, 2]).unwrap();
        let all = Cochain::full(&two, 0).unwrap();
        assert_eq!(normalized_external_conductance(&two, &s, &all).unwrap(), r(0, 1));

        let k3 = raise_complex(&complete(3), 2).unwrap();
        let all = Cochain::full(&k3, 0).unwrap();
        let s = Cochain::vertices(&k3, &[0]).unwrap();
        assert_eq!(normalized_external_conductance(&k3, &s, &all).unwrap(), r(2, 1));

        let empty = Cochain::new(&k3, 0, []).unwrap();
        assert_eq!(normalized_external_conductance(&k3, &empty, &all), Err(ComplexError::EmptySubset));
        assert_eq!(normalized_external_conductance(&k3, &all, &all), Err(ComplexError::NotProperSubset));
    }

    #[test]
    fn internal_conductance_examples() {
        let caps = EnumerationCaps::default();
        let two = raise_complex(&copies(&complete(3), 2), 2).unwrap();
        let m = normalized_internal_conductance(&two, &Cochain::full(&two, 1).unwrap(), caps)
            .unwrap()
            .unwrap();
        assert_eq!(m.ratio, r(0, 1));

        let k3 = raise_complex(&complete(3), 2).unwrap();
        let m = normalized_internal_conductance(&k3, &Cochain::full(&k3, 0).unwrap(), caps)
            .unwrap()
            .unwrap();
        assert_eq!(m.ratio, r(2, 1));
        assert_eq!(m.witness.len(), 1);

        let k4 = raise_complex(&complete(4), 2).unwrap();
        let m = normalized_internal_conductance(&k4, &Cochain::full(&k4, 0).unwrap(), caps)
            .unwrap()
            .unwrap();
        assert_eq!(m.ratio, r(4, 3));

        let single = Cochain::vertices(&k4, &[2]).unwrap();
        assert_eq!(normalized_internal_conductance(&k4, &single, caps).unwrap(), None);

        let big = raise_complex(&complete(7), 2).unwrap();
        let edges = Cochain::full(&big, 1).unwrap();
        assert_eq!(
            normalized_internal_conductance(&big, &edges, caps),
            Err(ComplexError::CapExceeded { size: 21, cap: 20 })
        );
    }

    /// Brute-force reference for the internal conductance: every subset of
    /// the ground set, through the public external-conductance pieces.
    fn internal_by_definition(x: &ComplexView, c: &Cochain) -> Option<Ratio> {
        let n = c.len();
        let vol_c = volume(x, c);
        let mut best: Option<Ratio> = None;
        for mask in 1u64..(1 << n) - 1 {
            let s = Cochain::new(x, c.dim(), (0..n).filter(|i| mask >> i & 1 == 1).map(|i| c.members()[i])).unwrap();
            let vs = volume(x, &s);
            if vs == 0 || 2 * vs > vol_c {
                continue;
            }
            let rest = c.difference(&s);
            let cut = straddling(x, c.dim, &s.membership(x), &rest.membership(x));
            let ratio = cochain_norm(x, &cut).unwrap() / cochain_norm(x, &s).unwrap();
            best = Some(best.map_or(ratio, |b: Ratio| b.min(ratio)));
        }
        best
    }

    #[test]
    fn internal_matches_definition_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 60 {
            let n = rng.gen_range(3..8);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let x = raise_complex(&g, 2).unwrap();
            if x.face_count(2) == 0 {
                continue;
            }
            for dim in 0..2 {
                let full = Cochain::full(&x, dim).unwrap();
                if full.len() > 12 {
                    continue;
                }
                let fast = normalized_internal_conductance(&x, &full, EnumerationCaps::default())
                    .unwrap()
                    .map(|m| m.ratio);
                assert_eq!(fast, internal_by_definition(&x, &full), "graph {:?}", g.edges());
            }
            checked += 1;
        }
    }

    #[test]
    fn colorful_examples() {
        let caps = EnumerationCaps::default();
        let two = raise_complex(&copies(&complete(3), 2), 2).unwrap();
        let rep = is_colorful_expander(&two, 0.01, caps).unwrap();
        assert!(!rep.holds);
        let w = rep.witness.unwrap();
        assert_eq!(w.dim(), 0);
        assert_eq!(w.faces(&two).collect::<Vec<_>>(), vec![&[0][..], &[1], &[2]]);

        let k4 = raise_complex(&complete(4), 2).unwrap();
        assert!(is_colorful_expander(&k4, 1.0, caps).unwrap().holds);
        let rep = is_colorful_expander(&k4, 3.0, caps).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.expansion.unwrap().ratio, r(4, 3));
    }

    #[test]
    fn induced_graphs() {
        let k3 = raise_complex(&complete(3), 2).unwrap();
        let g1 = induced_i_graph(&k3, 1).unwrap();
        assert_eq!(g1.n(), 3);
        assert_eq!(g1.edge_count(), 3);
        assert!((0..3).all(|v| g1.neighbors(v).iter().all(|&(_, w)| w == 1)));

        let k4 = raise_complex(&complete(4), 2).unwrap();
        let g0 = induced_i_graph(&k4, 0).unwrap();
        assert_eq!(g0.edge_count(), 6);
        assert!((0..4).all(|v| g0.neighbors(v).iter().all(|&(_, w)| w == 2)));

        let p = raise_complex(&path(4), 2).unwrap();
        assert_eq!(induced_i_graph(&p, 0).unwrap().edge_count(), 0);
        assert!(induced_i_graph(&p, 2).is_err());
    }

    #[test]
    fn outlier_scan() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let x = raise_complex(&g, 2).unwrap();
        let out = x.outliers();
        assert!(out.contains(&(0, vec![3])));
        assert!(out.contains(&(0, vec![4])));
        assert!(out.contains(&(1, vec![2, 3])));
        assert_eq!(out.len(), 3);
        assert!(!x.is_pure());
        assert!(raise_complex(&complete(4), 3).unwrap().is_pure());
    }
}
