//! Ordinary graph conductance, for comparison with the 1-dimensional
//! normalized quantities.

use super::{ComplexError, EnumerationCaps, Ratio};
use crate::graph::{Graph, VertexId};

fn membership(n: usize, set: &[VertexId]) -> Result<Vec<bool>, ComplexError> {
    let mut inside = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(ComplexError::BadFaceIndex { dim: 0, index: v });
        }
        inside[v] = true;
    }
    Ok(inside)
}

fn volume(g: &Graph, set: &[bool]) -> u128 {
    (0..g.n()).filter(|&v| set[v]).map(|v| g.degree_of(v) as u128).sum()
}

fn crossing(g: &Graph, a: &[bool], b: &[bool]) -> u128 {
    g.edges()
        .into_iter()
        .filter(|e| (a[e.lo()] && b[e.hi()]) || (b[e.lo()] && a[e.hi()]))
        .count() as u128
}

/// `|E(S, C∖S)| / min{Vol(S), Vol(C∖S)}` with volumes taken in `g`.
pub fn classic_conductance(g: &Graph, s: &[VertexId], c: &[VertexId]) -> Result<Ratio, ComplexError> {
    let in_s = membership(g.n(), s)?;
    let in_c = membership(g.n(), c)?;
    let s_size = in_s.iter().filter(|&&b| b).count();
    let c_size = in_c.iter().filter(|&&b| b).count();
    if s_size == 0 {
        return Err(ComplexError::EmptySubset);
    }
    if (0..g.n()).any(|v| in_s[v] && !in_c[v]) || s_size == c_size {
        return Err(ComplexError::NotProperSubset);
    }
    let rest: Vec<bool> = (0..g.n()).map(|v| in_c[v] && !in_s[v]).collect();
    let side = volume(g, &in_s).min(volume(g, &rest));
    if side == 0 {
        return Err(ComplexError::ZeroVolume);
    }
    Ok(Ratio::new(crossing(g, &in_s, &rest), side))
}

/// Which subsets of `C` a minimisation ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideRule {
    /// `|S| ≤ |C|/2`.
    Cardinality,
    /// `Vol(S) ≤ Vol(C)/2`.
    Volume,
}

fn classic_minimum(
    g: &Graph,
    c: &[VertexId],
    rule: SideRule,
    caps: EnumerationCaps,
) -> Result<Option<Ratio>, ComplexError> {
    let mut ground = c.to_vec();
    ground.sort_unstable();
    ground.dedup();
    if ground.is_empty() {
        return Err(ComplexError::EmptySubset);
    }
    caps.check(ground.len())?;
    membership(g.n(), &ground)?;
    let mut position = vec![usize::MAX; g.n()];
    for (p, &v) in ground.iter().enumerate() {
        position[v] = p;
    }
    let inner: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter_map(|e| {
            let (a, b) = (position[e.lo()], position[e.hi()]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b))
        })
        .collect();
    let degree: Vec<u128> = ground.iter().map(|&v| g.degree_of(v) as u128).collect();
    let total: u128 = degree.iter().sum();
    let size = ground.len();

    let mut best: Option<Ratio> = None;
    for mask in 1u64..(1u64 << size) - 1 {
        let members = mask.count_ones() as usize;
        let vol: u128 = (0..size).filter(|p| mask >> p & 1 == 1).map(|p| degree[p]).sum();
        let admissible = match rule {
            SideRule::Cardinality => 2 * members <= size,
            SideRule::Volume => 2 * vol <= total,
        };
        if !admissible || vol == 0 {
            continue;
        }
        let cut = inner.iter().filter(|&&(a, b)| (mask >> a & 1) != (mask >> b & 1)).count() as u128;
        let r = Ratio::new(cut, vol);
        if best.is_none_or(|b| r < b) {
            best = Some(r);
        }
    }
    Ok(best)
}

/// Internal conductance `min |E(S, C∖S)| / Vol(S)` over `∅ ≠ S ⊂ C` with
/// `|S| ≤ |C|/2`. `None` when no subset has positive volume.
pub fn classic_internal(g: &Graph, c: &[VertexId], caps: EnumerationCaps) -> Result<Option<Ratio>, ComplexError> {
    classic_minimum(g, c, SideRule::Cardinality, caps)
}

/// As [`classic_internal`] but with the half-volume side constraint used by the
/// normalized internal conductance.
pub fn classic_internal_by_volume(
    g: &Graph,
    c: &[VertexId],
    caps: EnumerationCaps,
) -> Result<Option<Ratio>, ComplexError> {
    classic_minimum(g, c, SideRule::Volume, caps)
}
