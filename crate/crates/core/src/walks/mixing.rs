//! Numeric checks of the mixing-rate bounds used to size the walk length.

use serde::Serialize;

use super::exact::{advance, Matrix};
use super::spectral::{spectral_mixing_rate, SpectralError};
use crate::complex::{colorful_expansion, induced_i_graph, raise_complex, ratio_to_f64, ComplexError, EnumerationCaps};
use crate::graph::Graph;
use crate::weighted::WeightedGraph;

/// `f(ε) = (1 − ε²/4) − (1 − ε²/36)^11`: the gap between the lazy simple-walk
/// rate and eleven lazy 2-dimensional steps.
pub fn eleven_step_gap(eps: f64) -> f64 {
    (1.0 - eps * eps / 4.0) - (1.0 - eps * eps / 36.0).powi(11)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapGridReport {
    pub points: usize,
    pub min_gap: f64,
    pub argmin: f64,
    pub gap_at_one: f64,
}

impl GapGridReport {
    pub fn holds(&self) -> bool {
        self.min_gap > 0.0
    }
}

/// Evaluates the gap on `ε = step, 2·step, …, 1`.
pub fn gap_grid(step: f64) -> GapGridReport {
    let points = (1.0 / step).round() as usize;
    let (mut min_gap, mut argmin) = (f64::INFINITY, 0.0);
    for i in 1..=points {
        let eps = i as f64 * step;
        let f = eleven_step_gap(eps);
        if f < min_gap {
            min_gap = f;
            argmin = eps;
        }
    }
    GapGridReport {
        points,
        min_gap,
        argmin,
        gap_at_one: eleven_step_gap(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingBoundReport {
    pub alpha: f64,
    pub ratio_bound: f64,
    /// Largest `‖π^t − π‖₂ − √(d_max/d_min)·α^t` over starts and `t`.
    pub worst_slack: f64,
    pub holds: bool,
}

/// Checks `‖π^t − π‖₂ ≤ √(d_max/d_min)·α^t` for the simple walk on `w`, from
/// every point mass (the extreme points of the start simplex) and every
/// `t ≤ t_max`, by exact matrix powers. Degrees are weighted degrees.
/// `slack` absorbs floating-point error in the comparison.
pub fn mixing_bound_check(w: &WeightedGraph, t_max: usize, slack: f64) -> Result<MixingBoundReport, SpectralError> {
    let alpha = spectral_mixing_rate(w, false)?;
    let p: Matrix = w.transition_matrix();
    let deg: Vec<f64> = (0..w.n()).map(|v| w.weighted_degree(v) as f64).collect();
    let total: f64 = deg.iter().sum();
    let pi: Vec<f64> = deg.iter().map(|d| d / total).collect();
    let d_max = deg.iter().copied().fold(f64::MIN, f64::max);
    let d_min = deg.iter().copied().fold(f64::MAX, f64::min);
    let ratio_bound = (d_max / d_min).sqrt();
    let mut worst = f64::NEG_INFINITY;
    for start in 0..w.n() {
        let mut dist = vec![0.0; w.n()];
        dist[start] = 1.0;
        for t in 0..=t_max {
            if t > 0 {
                dist = advance(&dist, &p);
            }
            let lhs = dist.iter().zip(&pi).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(lhs - ratio_bound * alpha.powi(t as i32));
        }
    }
    Ok(MixingBoundReport {
        alpha,
        ratio_bound,
        worst_slack: worst,
        holds: worst <= slack,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorfulRateReport {
    /// Exact colorful expansion of the 2-complex, as a float.
    pub eps: f64,
    pub mu: f64,
    /// Mixing rate of the induced 0-graph and 1-graph walks.
    pub alphas: Vec<f64>,
    pub holds: bool,
}

/// For a pure 2-complex certified as an ε-colorful expander with ε its exact
/// expansion, checks `α ≤ 1 − ε²/(2(d+1)²)` on the induced i-graphs for every
/// `i < d`. `None` when the graph is not pure or has zero expansion.
pub fn colorful_rate_check(g: &Graph, d: usize, caps: EnumerationCaps) -> Result<Option<ColorfulRateReport>, ComplexError> {
    let x = raise_complex(g, d)?;
    if !x.is_pure() || x.face_count(d) == 0 {
        return Ok(None);
    }
    let Some(h) = colorful_expansion(&x, caps)? else {
        return Ok(None);
    };
    let eps = ratio_to_f64(&h.ratio);
    if eps == 0.0 {
        return Ok(None);
    }
    let mu = 1.0 - eps * eps / (2.0 * ((d + 1) * (d + 1)) as f64);
    let mut alphas = Vec::with_capacity(d);
    for i in 0..d {
        let w = induced_i_graph(&x, i)?;
        // A single face has a trivial walk.
        let alpha = match spectral_mixing_rate(&w, false) {
            Ok(a) => a,
            Err(SpectralError::TooSmall) => 0.0,
            Err(e) => panic!("positive expansion implies a connected i-graph: {e}"),
        };
        alphas.push(alpha);
    }
    Ok(Some(ColorfulRateReport {
        eps,
        mu,
        holds: alphas.iter().all(|&a| a <= mu),
        alphas,
    }))
}
