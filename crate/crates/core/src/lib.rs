//! Triangulations of convex polygons, their dual trees, and the flip walk
//! as an exact reversible Markov chain.
//!
//! Polygon vertices are labeled `0..=n+1` counterclockwise and the special
//! edge is `(0, n+1)`. All counts are big integers and all probabilities are
//! exact rationals.

#![forbid(unsafe_code)]

pub mod catalan;
pub mod chain;
pub mod error;
pub mod geometry;
pub mod partition;
pub mod product;
pub mod sampling;
pub mod stats;
pub mod structure;
pub mod tree;
pub mod triangulation;

pub use catalan::{catalan, catalan_number, catalan_ratio};
pub use chain::{build_flip_chain, FlipChain, MarkovChainModel};
pub use error::CoreError;
pub use geometry::central_triangle;
pub use partition::{
    central_partition, oriented_partition, projection_chain, restriction_chain, Partition,
    Restriction,
};
pub use product::product_chain;
pub use sampling::{depth_statistics, random_catalan_tree, DepthStatistics};
pub use stats::triangle_containment_probability;
pub use structure::{boundary_sets, verify_cartesian_structure, BoundaryReport, CartesianReport};
pub use tree::CatalanTree;
pub use triangulation::{enumerate_triangulations, Diagonal, Triangle, Triangulation};

/// Exact rational type used throughout.
pub type Rational = num_rational::BigRational;

/// Default cap on the polygon parameter for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;
