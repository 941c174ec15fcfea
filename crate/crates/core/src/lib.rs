//! Library for hitting cliques under structural parameterizations: graph
//! decomposition into roots and pending components, an exact solver for the
//! annotated hitting problem on decomposable graphs, a marking-based
//! kernelization pipeline, blocking-set bound checks, and CNF reduction
//! generators — together with brute-force oracles validating all of it.

pub mod blocking;
pub mod blocks;
pub mod cliques;
pub mod corpus;
pub mod decomposition;
pub mod ekt;
pub mod error;
pub mod graph;
pub mod io;
pub mod iso;
pub mod oracle;
pub mod kernel;
pub mod reductions;
pub mod selftest;
pub mod treedepth;

pub use error::{CoreError, Result};
pub use graph::{CliqueFamily, Graph, Relabeling, VertexSet};
