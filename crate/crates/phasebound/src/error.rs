//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by graph, cone, completion and decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sector width {width} is degenerate; width must lie strictly between 0 and pi (use plain PSD routines for width 0 or pi)")]
    DegenerateSector { width: f64 },

    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:.3e} exceeds 1e-12")]
    NotHermitian { asymmetry: f64 },

    #[error("the zero matrix has no representable phases")]
    ZeroMatrix,

    #[error("vertex {vertex} is out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("ordering is not a bijection on 1..={n}")]
    InvalidOrdering { n: usize },

    #[error("ordering is not a perfect elimination ordering; graph may not be chordal")]
    InvalidPeo,

    #[error("pattern is not chordal; extend it to a chordal pattern first")]
    NonChordalPattern,

    #[error("pattern is not banded; use the chordal completion routine instead")]
    NonBandedPattern,

    #[error("arcs between self-looped vertices {u} and {v} are not symmetric")]
    AsymmetricReflexivePart { u: usize, v: usize },

    #[error("value at ({i},{j}) lies outside the pattern")]
    ValueOffPattern { i: usize, j: usize },

    #[error("pattern position ({i},{j}) has no specified value")]
    MissingValue { i: usize, j: usize },

    #[error("matrix entry at ({i},{j}) violates the sparsity pattern")]
    PatternViolation { i: usize, j: usize },

    #[error("specified principal submatrix on {clique:?} is not positive semidefinite")]
    NotPsdBlock { clique: Vec<usize> },

    #[error("clique {clique:?} violates membership in the phase-bounded cone")]
    MembershipViolation { clique: Vec<usize> },

    #[error("matrix is not a member of the phase-bounded cone")]
    NotInCone,

    #[error("matrix is not positive semidefinite: pivot {pivot:.3e} at vertex {vertex}")]
    NotPsd { vertex: usize, pivot: f64 },

    #[error("elimination failed at vertex {vertex}: zero pivot with nonzero row (input not PSD or pattern not chordal)")]
    ZeroPivotNonzeroRow { vertex: usize },

    #[error("elimination residual {residual:.3e} exceeds tolerance; input is not PSD with the given pattern")]
    ResidualNotZero { residual: f64 },

    #[error("phases are unavailable for classification {classification}")]
    PhasesUnavailable { classification: &'static str },

    #[error("clique {clique:?} is not semisectorial")]
    NonSemisectorialClique { clique: Vec<usize> },

    #[error("clique {clique:?} is not strictly inside the open phase cone")]
    StrictCliqueFailure { clique: Vec<usize> },

    #[error("clique phase intervals admit no common window of width pi")]
    IncompatibleCliquePhases,

    #[error("contraction parameter has spectral norm {norm} but must stay strictly below 1")]
    GammaNorm { norm: f64 },

    #[error("contraction parameter has support at ({i},{j}) outside the strictly upper pattern complement")]
    GammaSupport { i: usize, j: usize },

    #[error("contraction parameter violates the range conditions of the singular central factor: residual {residual:.3e}")]
    GammaRange { residual: f64 },

    #[error("boundary sample count {m} is below the minimum of 3")]
    InvalidSampleCount { m: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix size must be positive")]
    EmptyMatrix,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
