use clap::{Args, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use triclust::complex::checks::{
    conductance_factor_check, downward_closure_check, random_pure_graph, skeleton_norm_check,
};
use triclust::complex::classic::classic_conductance;
use triclust::complex::cluster::{verify_cluster, ClusterBounds, Partition};
use triclust::complex::enumerate::{connected_graphs_up_to, graphs_up_to};
use triclust::complex::{
    induced_i_graph, is_colorful_expander, normalized_external_conductance, normalized_internal_conductance,
    raise_complex, ratio_to_f64, Cochain, ComplexView, CutMinimum, EnumerationCaps, Ratio,
};
use triclust::walks::mixing::{colorful_rate_check, gap_grid, mixing_bound_check};
use triclust::walks::spectral::{spectral_mixing_rate, SpectralError};

use crate::{print_json, read, CliError, GraphArgs};

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Normalized external (and optionally internal) conductance of a vertex set.
    Conductance(ConductanceArgs),
    /// Whether the raised complex is an ε-colorful expander.
    Colorful(ColorfulArgs),
    /// Check a partition against internal and external conductance bounds.
    VerifyCluster(VerifyArgs),
    /// Normalized 1-dimensional conductance against twice the classic one,
    /// over every subset of every connected graph up to a size.
    Theorem1(SizeArgs),
    /// Degree and norm agreement between a pure complex and its skeletons,
    /// over every graph up to a size.
    Lemma2(SkeletonArgs),
    /// Colorful expansion at the top dimension implies it below, on random
    /// outlier-free graphs.
    Lemma3(ClosureArgs),
    /// Positivity of the eleven-step gap on a grid of ε.
    Lemma10(GapArgs),
    /// Mixing rates of the induced i-graphs and the distance-decay bound.
    Mixing(MixingArgs),
}

#[derive(Args)]
pub struct ConductanceArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Vertex ids of S, separated by commas or spaces.
    #[arg(long)]
    set: String,
    /// Vertex ids of the ambient set C; all vertices when absent.
    #[arg(long)]
    within: Option<String>,
    /// Top dimension of the complex.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Face dimension of the cochains; faces whose vertices all lie in the
    /// given sets are taken.
    #[arg(long, default_value_t = 0)]
    dim: usize,
    /// Also minimise the internal conductance of C.
    #[arg(long)]
    internal: bool,
}

#[derive(Args)]
pub struct ColorfulArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long)]
    eps: f64,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// One part per line, vertex ids separated by whitespace.
    #[arg(long)]
    partition: std::path::PathBuf,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long)]
    psi_in: f64,
    #[arg(long)]
    psi_out: f64,
}

#[derive(Args)]
pub struct SizeArgs {
    #[arg(long, default_value_t = 7)]
    max_n: usize,
}

#[derive(Args)]
pub struct SkeletonArgs {
    #[arg(long, default_value_t = 7)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
}

#[derive(Args)]
pub struct ClosureArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
pub struct GapArgs {
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

#[derive(Args)]
pub struct MixingArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Longest walk for the distance-decay check.
    #[arg(long, default_value_t = 50)]
    t_max: usize,
}

fn parse_ids(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad vertex id {t:?}"))))
        .collect()
}

fn ratio_json(r: &Ratio) -> Value {
    json!({ "exact": format!("{}/{}", r.numer(), r.denom()), "value": ratio_to_f64(r) })
}

fn cut_json(x: &ComplexView, m: &CutMinimum) -> Value {
    let faces: Vec<&[usize]> = m.witness.faces(x).collect();
    json!({ "ratio": ratio_json(&m.ratio), "dim": m.witness.dim(), "witness": faces })
}

/// Faces of `dim` whose vertices all lie in `vertices`.
fn faces_within(x: &ComplexView, dim: usize, vertices: &[usize]) -> Result<Cochain, CliError> {
    let inside = |f: &[usize]| f.iter().all(|v| vertices.contains(v));
    let members = (0..x.face_count(dim)).filter(|&i| inside(x.face(dim, i)));
    Ok(Cochain::new(x, dim, members)?)
}

fn conductance(a: &ConductanceArgs) -> Result<(), CliError> {
    let g = a.graph.load()?;
    let s = parse_ids(&a.set)?;
    let c = match &a.within {
        Some(t) => parse_ids(t)?,
        None => (0..g.n()).collect(),
    };
    let x = raise_complex(&g, a.d)?;
    let (sc, cc) = (faces_within(&x, a.dim, &s)?, faces_within(&x, a.dim, &c)?);
    let psi = normalized_external_conductance(&x, &sc, &cc)?;
    let classic = classic_conductance(&g, &s, &c)?;
    let internal = if a.internal {
        let m = normalized_internal_conductance(&x, &cc, EnumerationCaps::default())?;
        m.map(|m| cut_json(&x, &m)).unwrap_or(Value::Null)
    } else {
        Value::Null
    };
    print_json(&json!({
        "d": a.d,
        "dim": a.dim,
        "external": ratio_json(&psi),
        "classic_external": ratio_json(&classic),
        "internal": internal,
    }))
}

fn colorful(a: &ColorfulArgs) -> Result<(), CliError> {
    let g = a.graph.load()?;
    let x = raise_complex(&g, a.d)?;
    let rep = is_colorful_expander(&x, a.eps, EnumerationCaps::default())?;
    print_json(&json!({
        "d": a.d,
        "eps": a.eps,
        "holds": rep.holds,
        "pure": x.is_pure(),
        "expansion": rep.expansion.as_ref().map(|m| cut_json(&x, m)),
    }))
}

fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let g = a.graph.load()?;
    let p = Partition::parse(&read(&a.partition)?, g.n())?;
    let bounds = ClusterBounds {
        psi_in: a.psi_in,
        psi_out: a.psi_out,
    };
    let rep = verify_cluster(&g, &p, a.d, bounds, EnumerationCaps::default())?;
    print_json(&serde_json::to_value(rep)?)
}

fn mixing(a: &MixingArgs) -> Result<(), CliError> {
    let g = a.graph.load()?;
    let x = raise_complex(&g, a.d)?;
    let mut dims = Vec::new();
    for i in 0..a.d {
        let w = induced_i_graph(&x, i)?;
        let rate = |lazy| match spectral_mixing_rate(&w, lazy) {
            Ok(r) => Ok(json!(r)),
            Err(SpectralError::TooSmall | SpectralError::Disconnected) => Ok(Value::Null),
            Err(e) => Err(e),
        };
        let decay = match mixing_bound_check(&w, a.t_max, 1e-12) {
            Ok(r) => serde_json::to_value(r)?,
            Err(SpectralError::TooSmall | SpectralError::Disconnected) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        dims.push(json!({
            "dim": i,
            "faces": w.n(),
            "alpha": rate(false)?,
            "alpha_lazy": rate(true)?,
            "decay_bound": decay,
        }));
    }
    let certified = match colorful_rate_check(&g, a.d, EnumerationCaps::default()) {
        Ok(r) => serde_json::to_value(r)?,
        Err(triclust::complex::ComplexError::CapExceeded { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    print_json(&json!({ "d": a.d, "dimensions": dims, "colorful_rate": certified }))
}

pub fn run(cmd: &OracleCommand) -> Result<(), CliError> {
    let caps = EnumerationCaps::default();
    match cmd {
        OracleCommand::Conductance(a) => conductance(a),
        OracleCommand::Colorful(a) => colorful(a),
        OracleCommand::VerifyCluster(a) => verify(a),
        OracleCommand::Theorem1(a) => {
            let rep = conductance_factor_check(&connected_graphs_up_to(a.max_n), caps)?;
            print_json(&json!({ "holds": rep.holds(), "report": rep }))
        }
        OracleCommand::Lemma2(a) => {
            let rep = skeleton_norm_check(&graphs_up_to(a.max_n), a.d)?;
            print_json(&json!({ "holds": rep.holds(), "report": rep }))
        }
        OracleCommand::Lemma3(a) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let graphs: Vec<_> = (0..a.trials).map(|_| random_pure_graph(&mut rng, a.max_n, a.d, caps)).collect();
            let grid: Vec<Ratio> = (1..=10).map(|i| Ratio::new(i, 20)).collect();
            let rep = downward_closure_check(&graphs, a.d, &grid, caps)?;
            print_json(&json!({ "holds": rep.holds(), "report": rep }))
        }
        OracleCommand::Lemma10(a) => {
            let rep = gap_grid(a.step);
            print_json(&json!({ "holds": rep.holds(), "report": rep }))
        }
        OracleCommand::Mixing(a) => mixing(a),
    }
}
