//! Integral monodromy and variation of the Milnor fiber of a plane curve
//! singularity, computed exactly from its decorated resolution graph.

pub mod dynamics;
pub mod error;
pub mod examples;
pub mod graph;
pub mod gyrograph;
pub mod homology;
pub mod io;
pub mod singular;
pub mod turn;

pub use error::{Error, Result};
pub use graph::{DecoratedGraph, Node, ResolutionGraph};
pub use turn::{Turn, Q};
