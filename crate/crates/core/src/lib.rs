//! Discrete Ricci curvature for directed, weighted hypernetworks.
//!
//! A [`Hypergraph`] is parametrized as a weighted polyhedral [`CellComplex`]:
//! every hyperedge becomes the simplex spanned by its tail and head, with
//! directed edges running from tail to head. On top of that complex the crate
//! computes
//!
//! - face weights from edge lengths ([`weights`]),
//! - Forman–Ricci curvature of cells, edges and hyperedges ([`forman`]),
//! - Ollivier–Ricci curvature of the dual graph by exact optimal transport ([`ollivier`]),
//! - moment-curve embeddings with an exact verifier ([`embedding`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common `f64` case.

pub mod complex;
pub mod embedding;
pub mod error;
pub mod forman;
pub mod hypergraph;
pub mod io;
mod linalg;
pub mod metric;
pub mod ollivier;
pub mod scalar;
pub mod weights;

pub use complex::{Cell, CellComplex, CellId, FillPolicy, OrientationClass, Shape, SourceRole};
pub use embedding::Embedding;
pub use error::{Error, Result};
pub use hypergraph::{Hyperedge, Hypergraph, Node, NodeId, Violation};
pub use metric::Metric;
pub use ollivier::{DualEdgeWeightRule, DualGraph, ProbabilityMeasure, TransportPlan};
pub use scalar::Scalar;
pub use weights::{Geometry, WeightScheme};

pub type Hypergraph64 = Hypergraph<f64>;
pub type CellComplex64 = CellComplex<f64>;
pub type DualGraph64 = DualGraph<f64>;
pub type Metric64 = Metric<f64>;
pub type ProbabilityMeasure64 = ProbabilityMeasure<f64>;
pub type TransportPlan64 = TransportPlan<f64>;

pub type Hypergraph32 = Hypergraph<f32>;
pub type CellComplex32 = CellComplex<f32>;
