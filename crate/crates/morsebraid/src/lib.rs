//! Graph braid groups by discrete Morse theory.
//!
//! Given a finite graph with a planar embedding (a rotation system), a number
//! of strands `n`, a maximal tree and a degree-one basepoint, this crate
//! builds the discretized configuration complex, classifies its cells under
//! the induced discrete gradient vector field, and reduces the boundary words
//! of the critical 2-cells through a complete string-rewriting system to a
//! finite presentation of the braid group of the graph. An independent
//! integer-homology oracle cross-checks the result.

pub mod cli;
pub mod collection;
pub mod complex;
pub mod graph;
pub mod homology;
pub mod morse;
pub mod notation;
pub mod pipeline;
pub mod presentation;
pub mod rewrite;
