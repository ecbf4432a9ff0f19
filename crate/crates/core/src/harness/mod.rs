//! Instance generators and the experiment runner.

pub mod experiment;
pub mod gen;

pub use experiment::{run_experiment, ExperimentConfig, ExperimentError, ExperimentRecord};
pub use gen::{gen_clusterable, gen_far, ClusterableSpec, FarModel, GenError, IntraModel};
