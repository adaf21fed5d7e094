//! Graph files, the analysis pipeline and its output formats.

pub mod document;
pub mod pipeline;
pub mod render;

pub use document::{DocumentFormat, GraphDocument};
pub use pipeline::{run, ChainMatrix, Emit, Report, RunConfig};
pub use render::{graph_dot, render_report, Artifact, OutputFormat};
