//! Structural backbones of text graphs as maximum independent sets.
//!
//! The crate covers the classical side of a neutral-atom MIS pipeline:
//!
//! * [`textgraph`] builds cosine k-NN graphs from unit embeddings.
//! * [`mis`] computes exact MIS, enumerates optima and certifies the
//!   persistent core (rigidity).
//! * [`structure`] runs null-model ensembles and subset-selection baselines.
//! * [`forge`] generates engineered graph families with exact unit-disk /
//!   unit-ball coordinates.
//! * [`register`] embeds graphs onto atom-register lattices by simulated
//!   annealing and exports pulse specifications.
//! * [`shots`] scores measurement bitstrings.
//! * [`verify`] re-checks stored artifacts.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forge;
pub mod graph;
pub mod mis;
pub mod register;
pub mod shots;
pub mod structure;
pub mod textgraph;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{
    density, geometric_adjacency, is_independent_set, udg_check, Coords, Density, Graph,
    UdgCheck,
};
pub use mis::{MisResult, OptimaEnumeration, RigidityReport};
