//! Constructive density-extraction, induced-Ramsey and discrepancy
//! algorithms over bitset graphs, each paired with an exact checker and a
//! brute-force oracle for small instances.

pub mod atlas;
pub mod bitset;
pub mod coloring;
pub mod density;
pub mod discrepancy;
pub mod error;
pub mod extract;
pub mod graph;
pub mod io;
pub mod keylemma;
pub mod oracles;
pub mod pattern;
pub mod pseudorandom;
pub mod ramsey;
pub mod rational;
pub mod rng;
pub mod witness;

pub use bitset::VertexSet;
pub use coloring::EdgeColoring;
pub use density::{density_multi, density_pair, density_set, Density};
pub use error::{Error, Result};
pub use graph::Graph;
pub use pattern::PatternGraph;
pub use rational::Rational;
pub use witness::{Embedding, Mode, SplitWitness};
