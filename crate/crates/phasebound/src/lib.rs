//! Phase-bounded matrix cones over sparsity patterns: membership tests,
//! phase computation, completion of partial matrices, and decomposition into
//! clique-supported summands.

pub mod cones;
pub mod error;
pub mod graph;
mod linalg;

pub use cones::{
    complexify, in_phase_cone, in_strict_phase_cone, inner_product, is_psd, rotate_pair,
    rotate_pair_inverse, toeplitz_decompose, PhaseSector, RealifiedPair, RotatedPair, DEFAULT_TOL,
};
pub use error::{Error, Result};
pub use graph::{CliqueList, DirectedPatternGraph, EliminationOrdering, PatternGraph};
pub use linalg::{ComplexMatrix, ComplexVector};
