//! Parameter schedule for the two-phase tester.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist_tests::ClosenessParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("{name} = {value} is outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("{name} = {value:e} does not fit a 64-bit count")]
    Overflow { name: &'static str, value: f64 },
    #[error("{name} came out as {value}, too small to run (raise its scale)")]
    Degenerate { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    /// Formulas verbatim. Spelled `paper` on the command line.
    #[serde(rename = "paper")]
    Theoretical,
    /// Formulas times per-parameter scales.
    Practical,
}

impl std::str::FromStr for ParamMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(ParamMode::Theoretical),
            "practical" => Ok(ParamMode::Practical),
            other => Err(format!("unknown mode `{other}` (expected paper or practical)")),
        }
    }
}

/// The unvalued constants of the collision tester and the mixing bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub c31: f64,
    pub c42: f64,
    pub c43: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c31: 1.0,
            c42: 1.0,
            c43: 1.0,
        }
    }
}

/// Multipliers applied to each formula in practical mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scales {
    pub s: f64,
    pub l: f64,
    pub m: f64,
    pub theta: f64,
    pub delta: f64,
}

impl Scales {
    pub const UNIT: Scales = Scales {
        s: 1.0,
        l: 1.0,
        m: 1.0,
        theta: 1.0,
        delta: 1.0,
    };

    /// Defaults tuned so that `k = 2`, `ε = 0.5`, `ψ = 1` at `n = 1000` gives
    /// a vertex phase with `s = 15`, `l = 122`, `m = 757`, `θ ≈ 0.02` and
    /// `δ ≈ 0.37`.
    pub const PRACTICAL: Scales = Scales {
        s: 3e-4,
        l: 0.1,
        m: 2.8e-4,
        theta: 2.3e-3,
        delta: 2e3,
    };
}

impl Default for Scales {
    fn default() -> Self {
        Scales::PRACTICAL
    }
}

/// Values for one phase, computed from that phase's sample count and the
/// size of the space its walks live on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseParams {
    pub s: usize,
    /// `n` for the vertex phase, `|E|` for the edge phase.
    pub points: usize,
    pub l: usize,
    pub m: usize,
    pub theta: f64,
    pub delta: f64,
    pub xi: f64,
    pub b: f64,
    pub c31: f64,
}

impl PhaseParams {
    pub fn closeness(&self) -> ClosenessParams {
        ClosenessParams {
            xi: self.xi,
            b: self.b,
            delta: self.delta,
            c31: self.c31,
        }
    }

    /// Total walk steps the phase may take; `None` past `u64`.
    pub fn walk_budget(&self) -> Option<u64> {
        (self.s as u64).checked_mul(self.m as u64)?.checked_mul(self.l as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRequest {
    pub n: usize,
    pub edge_count: usize,
    pub k: usize,
    pub eps: f64,
    pub psi: f64,
    pub mode: ParamMode,
    pub scales: Scales,
    pub constants: Constants,
}

impl ParamRequest {
    /// Default scales for the mode (unit scales in theoretical mode) and unit
    /// constants.
    pub fn new(n: usize, edge_count: usize, k: usize, eps: f64, psi: f64, mode: ParamMode) -> Self {
        ParamRequest {
            n,
            edge_count,
            k,
            eps,
            psi,
            mode,
            scales: match mode {
                ParamMode::Theoretical => Scales::UNIT,
                ParamMode::Practical => Scales::PRACTICAL,
            },
            constants: Constants::default(),
        }
    }

    pub fn with_scales(mut self, scales: Scales) -> Self {
        self.scales = scales;
        self
    }

    pub fn with_constants(mut self, constants: Constants) -> Self {
        self.constants = constants;
        self
    }

    fn effective_scales(&self) -> Scales {
        match self.mode {
            ParamMode::Theoretical => Scales::UNIT,
            ParamMode::Practical => self.scales,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TesterParams {
    pub request: ParamRequest,
    pub vertex: PhaseParams,
    pub edge: PhaseParams,
}

fn domain(name: &'static str, value: f64, ok: bool, domain: &'static str) -> Result<(), ParamError> {
    if ok {
        Ok(())
    } else {
        Err(ParamError::Domain { name, value, domain })
    }
}

fn count(name: &'static str, value: f64) -> Result<usize, ParamError> {
    if !value.is_finite() || value > u64::MAX as f64 || value > usize::MAX as f64 {
        return Err(ParamError::Overflow { name, value });
    }
    Ok(value.ceil() as usize)
}

fn positive(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if !value.is_finite() {
        return Err(ParamError::Overflow { name, value });
    }
    if value <= 0.0 {
        return Err(ParamError::Degenerate { name, value });
    }
    Ok(value)
}

/// `s = 1536k·ln(18(k+1))/ε²`, times the scale, rounded up.
pub fn base_sample_count(k: usize, eps: f64, scale: f64) -> f64 {
    1536.0 * k as f64 * (18.0 * (k as f64 + 1.0)).ln() / (eps * eps) * scale
}

fn phase(req: &ParamRequest, s: usize, points: usize) -> Result<PhaseParams, ParamError> {
    let sc = req.effective_scales();
    let c = req.constants;
    let (k, sf, nf) = (req.k as f64, s as f64, points as f64);
    if points < 2 {
        return Err(ParamError::Degenerate {
            name: "points",
            value: nf,
        });
    }
    let l = count("l", 11.0 * c.c42.max(c.c43) * k.powi(4) * nf.ln() / (req.psi * req.psi) * sc.l)?;
    let m = count("m", 384.0 * c.c31 * sf * (sf * k * nf).sqrt() * sf.ln() * sc.m)?;
    if m < 2 {
        return Err(ParamError::Degenerate { name: "m", value: m as f64 });
    }
    let theta = positive("θ", 288.0 * sf * k / nf * sc.theta)?;
    let delta = positive("δ", 1.0 / (24.0 * sf * sf) * sc.delta)?;
    domain("δ", delta, delta < 1.0, "(0, 1)")?;
    let p = PhaseParams {
        s,
        points,
        l,
        m,
        theta,
        delta,
        xi: 1.0 / (4.0 * nf),
        b: theta,
        c31: c.c31,
    };
    Ok(p)
}

/// Both phases' parameters. The vertex phase uses `s` samples over `n`
/// vertices, the edge phase `2s` samples over `|E|` edges.
pub fn compute_params(req: &ParamRequest) -> Result<TesterParams, ParamError> {
    domain("n", req.n as f64, req.n >= 2, "n ≥ 2")?;
    domain("k", req.k as f64, req.k >= 1, "k ≥ 1")?;
    domain("ε", req.eps, req.eps > 0.0 && req.eps <= 1.0, "(0, 1]")?;
    domain("ψ", req.psi, req.psi > 0.0 && req.psi <= 1.0, "(0, 1]")?;
    let sc = req.effective_scales();
    for (name, v) in [("scale_s", sc.s), ("scale_l", sc.l), ("scale_m", sc.m), ("scale_θ", sc.theta), ("scale_δ", sc.delta)] {
        domain(name, v, v.is_finite() && v > 0.0, "positive")?;
    }
    let c = req.constants;
    for (name, v) in [("c31", c.c31), ("c42", c.c42), ("c43", c.c43)] {
        domain(name, v, v.is_finite() && v > 0.0, "positive")?;
    }
    let s = count("s", base_sample_count(req.k, req.eps, sc.s))?;
    let s2 = s.checked_mul(2).ok_or(ParamError::Overflow {
        name: "2s",
        value: 2.0 * s as f64,
    })?;
    let vertex = phase(req, s, req.n)?;
    let edge = phase(req, s2, req.edge_count.max(2))?;
    Ok(TesterParams {
        request: *req,
        vertex,
        edge,
    })
}
