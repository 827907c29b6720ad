//! Topological full groups of graph groupoids: boundary path spaces,
//! prefix-exchange tables, their embedding into Thompson's group `V`, and
//! the finite groups of Bratteli diagrams.

pub mod bratteli;
pub mod embed;
pub mod fullgroup;
pub mod graph;
pub mod io;
pub mod pathspace;

pub use embed::{Embedding, FormalSum, Labeling, Monomial};
pub use fullgroup::{Arrow, FullGroup, Piece, Table};
pub use graph::{Edge, FinitePath, Graph, VertexId};
pub use pathspace::{BoundaryPoint, CompactOpen, CylinderAtom};

/// Formal sums with integer coefficients.
pub type IntSum = FormalSum<i64>;
/// Formal sums with rational coefficients.
pub type RationalSum = FormalSum<num_rational::Ratio<i64>>;
