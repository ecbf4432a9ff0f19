//! Sublinear testing of triangle-based higher-order clusterability.
//!
//! The crate has two halves. The sublinear half ([`walks`], [`samplers`],
//! [`dist_tests`], [`tester`]) touches a graph only through the counted
//! [`graph::QueryOracle`]. The exact half ([`complex`]) raises small graphs
//! to their clique complexes and computes every conductance and expansion
//! quantity by enumeration, as ground truth for the first.

pub mod complex;
pub mod dist_tests;
pub mod graph;
pub mod harness;
pub mod rng;
pub mod samplers;
pub mod tester;
pub mod walks;
pub mod weighted;
