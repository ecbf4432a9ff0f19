//! Partitions and exact verification of higher-order clusters.

use serde::Serialize;

use super::{
    normalized_external_conductance, normalized_internal_conductance, raise_complex, ratio_to_f64, Cochain,
    ComplexError, ComplexView, EnumerationCaps, Ratio,
};
use crate::graph::{Graph, VertexId};

/// A partition of `0..n` into non-empty parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Vec<VertexId>>,
    part_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<Vec<VertexId>>) -> Result<Self, ComplexError> {
        let mut part_of = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(parts.len());
        for (p, mut part) in parts.into_iter().enumerate() {
            if part.is_empty() {
                return Err(ComplexError::BadPartition(format!("part {p} is empty")));
            }
            part.sort_unstable();
            for &v in &part {
                if v >= n {
                    return Err(ComplexError::BadPartition(format!("vertex {v} out of range (n = {n})")));
                }
                if part_of[v] != usize::MAX {
                    return Err(ComplexError::BadPartition(format!("vertex {v} appears twice")));
                }
                part_of[v] = p;
            }
            sorted.push(part);
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(ComplexError::Uncovered(v));
        }
        Ok(Partition { parts: sorted, part_of })
    }

    /// One part per non-empty, non-comment line; ids separated by whitespace.
    pub fn parse(text: &str, n: usize) -> Result<Self, ComplexError> {
        let mut parts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let part = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<VertexId>()
                        .map_err(|_| ComplexError::BadPartition(format!("line {}: bad token {t:?}", lineno + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            parts.push(part);
        }
        Partition::new(n, parts)
    }

    /// Every vertex in one part.
    pub fn whole(n: usize) -> Self {
        Partition {
            parts: vec![(0..n).collect()],
            part_of: vec![0; n],
        }
    }

    /// Parts given as a label per vertex; labels need not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut ids: Vec<usize> = labels.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut parts = vec![Vec::new(); ids.len()];
        let part_of: Vec<usize> = labels
            .iter()
            .map(|l| ids.binary_search(l).expect("label present"))
            .collect();
        for (v, &p) in part_of.iter().enumerate() {
            parts[p].push(v);
        }
        Partition { parts, part_of }
    }

    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_of(&self, v: VertexId) -> usize {
        self.part_of[v]
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }
}

/// Conductances of one part at one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub dim: usize,
    /// Faces of this dimension inside the part.
    pub faces: usize,
    /// `None` when no admissible split exists (treated as satisfied) or the
    /// part has no faces here (treated as violated, see `internal_ok`).
    #[serde(serialize_with = "ser_opt_ratio")]
    pub internal: Option<Ratio>,
    #[serde(serialize_with = "ser_ratio")]
    pub external: Ratio,
    pub internal_ok: bool,
    pub external_ok: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartReport {
    pub part: usize,
    pub size: usize,
    pub dimensions: Vec<DimensionReport>,
}

impl PartReport {
    pub fn holds(&self) -> bool {
        self.dimensions.iter().all(|d| d.internal_ok && d.external_ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterReport {
    pub holds: bool,
    pub d: usize,
    pub parts: Vec<PartReport>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_ratio(r, s),
        None => s.serialize_none(),
    }
}

/// Thresholds for a cluster check, compared exactly against the rational
/// conductances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterBounds {
    pub psi_in: f64,
    pub psi_out: f64,
}

/// Checks that every part is internally well connected and externally well
/// separated at every dimension `r < d`.
///
/// Internal conductance is measured in the complex raised from the induced
/// subgraph `G[P_i]`; external conductance in the complex of `G`. A part
/// equal to the whole face set has external conductance 0.
pub fn verify_cluster(
    g: &Graph,
    partition: &Partition,
    d: usize,
    bounds: ClusterBounds,
    caps: EnumerationCaps,
) -> Result<ClusterReport, ComplexError> {
    if partition.n() != g.n() {
        return Err(ComplexError::BadPartition(format!(
            "partition covers {} vertices, graph has {}",
            partition.n(),
            g.n()
        )));
    }
    let global = raise_complex(g, d)?;
    let mut parts = Vec::with_capacity(partition.len());
    for (p, vertices) in partition.parts().iter().enumerate() {
        let local_graph = g.induced(vertices);
        let local = raise_complex(&local_graph, d)?;
        let mut dimensions = Vec::with_capacity(d);
        for dim in 0..d {
            dimensions.push(check_dimension(&global, &local, vertices, dim, bounds, caps)?);
        }
        parts.push(PartReport {
            part: p,
            size: vertices.len(),
            dimensions,
        });
    }
    Ok(ClusterReport {
        holds: parts.iter().all(PartReport::holds),
        d,
        parts,
    })
}

fn check_dimension(
    global: &ComplexView,
    local: &ComplexView,
    vertices: &[VertexId],
    dim: usize,
    bounds: ClusterBounds,
    caps: EnumerationCaps,
) -> Result<DimensionReport, ComplexError> {
    let faces = local.face_count(dim);
    if faces == 0 {
        return Ok(DimensionReport {
            dim,
            faces,
            internal: None,
            external: Ratio::new(0, 1),
            internal_ok: false,
            external_ok: true,
            note: Some("part has no faces of this dimension".into()),
        });
    }
    let mut note = None;
    let local_all = Cochain::full(local, dim)?;
    let (internal, internal_ok) = match normalized_internal_conductance(local, &local_all, caps) {
        Ok(Some(m)) => (Some(m.ratio), ratio_to_f64(&m.ratio) >= bounds.psi_in),
        Ok(None) => (None, true),
        Err(ComplexError::DegenerateVolume(_)) => {
            note = Some("part has no top faces; internal conductance undefined".into());
            (None, false)
        }
        Err(e) => return Err(e),
    };

    // Local faces map back to global faces through the part's vertex labels.
    let global_members = local
        .faces(dim)
        .iter()
        .map(|f| {
            let lifted: Vec<VertexId> = f.iter().map(|&v| vertices[v]).collect();
            global.face_index(&lifted).expect("induced faces are global faces")
        })
        .collect::<Vec<_>>();
    let s = Cochain::new(global, dim, global_members)?;
    let c = Cochain::full(global, dim)?;
    let external = if s.len() == c.len() {
        Ratio::new(0, 1)
    } else {
        match normalized_external_conductance(global, &s, &c) {
            Ok(r) => r,
            // One side carries no volume, so no straddling face does either.
            Err(ComplexError::ZeroVolume) => Ratio::new(0, 1),
            Err(e) => return Err(e),
        }
    };
    let external_ok = ratio_to_f64(&external) <= bounds.psi_out;
    Ok(DimensionReport {
        dim,
        faces,
        internal,
        external,
        internal_ok,
        external_ok,
        note,
    })
}
