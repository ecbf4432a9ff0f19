//! Exhaustive minimisation of `|cut| / vol(S)` over subsets of a small
//! ground set, in Gray-code order so each step touches only the faces that
//! contain the flipped element.

use super::Ratio;

/// A face of the next dimension that can straddle a split of the ground set.
#[derive(Debug, Clone)]
pub(crate) struct StraddleFace {
    pub weight: u64,
    /// Positions in the ground set of this face's sub-faces (at least two).
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct CutProblem {
    pub element_weight: Vec<u64>,
    pub faces: Vec<StraddleFace>,
}

/// Best subset found: `cut_weight / subset_volume` is minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SubsetMin {
    pub mask: u64,
    pub cut_weight: u64,
    pub volume: u64,
}

impl SubsetMin {
    /// `cut / vol` rescaled by `vol_dim / vol_next` so it becomes the ratio of
    /// norms.
    pub fn norm_ratio(&self, vol_dim: u128, vol_next: u128) -> Ratio {
        Ratio::new(self.cut_weight as u128 * vol_dim, self.volume as u128 * vol_next)
    }
}

impl CutProblem {
    /// Minimises over all `S` with `0 < vol(S)` and `2 vol(S) <= vol_limit`
    /// (pass the volume of the whole ground set to get the half-volume rule).
    /// Returns `None` when no subset qualifies.
    pub fn minimise(&self, vol_limit: u64) -> Option<SubsetMin> {
        let g = self.element_weight.len();
        assert!(g < 64, "ground set too large for a u64 mask");
        let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); g];
        for (f, face) in self.faces.iter().enumerate() {
            debug_assert!(face.members.len() >= 2);
            for &e in &face.members {
                incidence[e].push(f);
            }
        }
        let mut inside = vec![0usize; self.faces.len()];
        let straddles = |inside: usize, face: &StraddleFace| inside > 0 && inside < face.members.len();

        let mut mask = 0u64;
        let mut volume = 0u64;
        let mut cut = 0u64;
        let mut best: Option<SubsetMin> = None;
        for k in 1u64..(1u64 << g) {
            let bit = k.trailing_zeros() as usize;
            let adding = mask & (1 << bit) == 0;
            mask ^= 1 << bit;
            for &f in &incidence[bit] {
                let face = &self.faces[f];
                let before = straddles(inside[f], face);
                if adding {
                    inside[f] += 1;
                } else {
                    inside[f] -= 1;
                }
                let after = straddles(inside[f], face);
                match (before, after) {
                    (false, true) => cut += face.weight,
                    (true, false) => cut -= face.weight,
                    _ => {}
                }
            }
            if adding {
                volume += self.element_weight[bit];
            } else {
                volume -= self.element_weight[bit];
            }
            if volume == 0 || 2 * volume > vol_limit {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => (cut as u128) * (b.volume as u128) < (b.cut_weight as u128) * (volume as u128),
            };
            if better {
                best = Some(SubsetMin {
                    mask,
                    cut_weight: cut,
                    volume,
                });
            }
        }
        best
    }
}
