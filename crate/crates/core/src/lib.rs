//! Tree decompositions measured by independent sets and induced matchings.

mod bits;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod extraction;
pub mod graph;
pub mod io;
pub mod solver;
pub mod transform;

pub use decomposition::{TreeDecomposition, Violation};
pub use error::{Error, Result};
pub use graph::{Graph, Matching, VertexSet};
