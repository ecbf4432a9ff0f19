//! The up-down walk on the i-faces of an explicit complex.

use rand::Rng;

use crate::complex::{ComplexError, ComplexView};
use crate::graph::VertexId;

/// Neighbouring i-faces of `face` with weights `deg_d(τ ∪ τ')`, in index
/// order. Pairs with zero top-degree are dropped.
pub fn highorder_moves(x: &ComplexView, face: &[VertexId]) -> Result<Vec<(usize, u64)>, ComplexError> {
    let dim = face.len().checked_sub(1).ok_or_else(|| ComplexError::NotAFace(Vec::new()))?;
    if dim >= x.top() {
        return Err(ComplexError::DimensionOutOfRange { dim, top: x.top() });
    }
    let me = x.face_index(face).ok_or_else(|| ComplexError::NotAFace(face.to_vec()))?;
    let mut moves = Vec::new();
    for up in 0..x.face_count(dim + 1) {
        let subs = x.subfaces(dim + 1, up);
        if !subs.contains(&me) {
            continue;
        }
        let w = x.degree_at(dim + 1, up);
        if w == 0 {
            continue;
        }
        moves.extend(subs.iter().filter(|&&t| t != me).map(|&t| (t, w)));
    }
    moves.sort_unstable();
    Ok(moves)
}

/// One step from the i-face `face`, returning the index of the next i-face,
/// or `None` (STOP) when no neighbour shares a top face.
pub fn highorder_walk_step<R: Rng>(x: &ComplexView, face: &[VertexId], rng: &mut R) -> Result<Option<usize>, ComplexError> {
    let moves = highorder_moves(x, face)?;
    let total: u64 = moves.iter().map(|&(_, w)| w).sum();
    if total == 0 {
        return Ok(None);
    }
    let mut r = rng.gen_range(0..total);
    for (t, w) in moves {
        if r < w {
            return Ok(Some(t));
        }
        r -= w;
    }
    unreachable!("weights sum to total")
}
