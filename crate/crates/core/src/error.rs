use thiserror::Error;

/// Errors produced by library operations.
///
/// Variants carry enough context to report the offending quantity without
/// access to the original call site.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid array geometry: {0}")]
    InvalidGeometry(String),

    #[error("angle {0} deg is outside [-90, 90]")]
    AngleOutOfRange(f64),

    #[error("angle grid is empty")]
    EmptyGrid,

    #[error("weights must be finite")]
    NonFiniteWeights,

    #[error("weight vector has {got} entries, geometry expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vectors have mismatched geometry ({a} elements @ {a_spacing} vs {b} elements @ {b_spacing})")]
    GeometryMismatch {
        a: usize,
        a_spacing: f64,
        b: usize,
        b_spacing: f64,
    },

    #[error("endpoint weight magnitude {magnitude:.3e} is below {threshold:.3e}; trim the vector before factorizing")]
    DegenerateEndpoints { magnitude: f64, threshold: f64 },

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("root refinement stalled: residual {residual:.3e} above bound {bound:.3e}")]
    RootRefinement { residual: f64, bound: f64 },

    #[error("flip mask has {mask_len} bits, factorization has {roots} roots")]
    MaskLengthMismatch { mask_len: usize, roots: usize },

    #[error("full enumeration of 2^{exponent} members refused (cap {cap} elements); pass a sample size to draw a subset")]
    FamilyTooLarge { exponent: usize, cap: usize },

    #[error("extraction system is singular: angles {theta_a} deg and {theta_b} deg share a phase factor")]
    SingularSystem { theta_a: f64, theta_b: f64 },

    #[error("diagonal index {index} is outside 1..={max}")]
    DiagonalOutOfRange { index: usize, max: usize },

    #[error("sector eigenproblem is ambiguous: eigenvalue gap {gap:.3e} below {threshold:.3e}")]
    AmbiguousDesign { gap: f64, threshold: f64 },

    #[error("eigensolver did not converge: off-diagonal norm {off:.3e} after {sweeps} sweeps")]
    EigenNoConvergence { off: f64, sweeps: usize },

    #[error("minimax solver failed: best objective {objective:.6e}, constraint excess {violation:.3e}")]
    SolverFailure { objective: f64, violation: f64 },

    #[error("invalid design spec: {0}")]
    InvalidDesignSpec(String),

    #[error("cannot select {k} vectors from a family of {available}")]
    BadSubsetSize { k: usize, available: usize },

    #[error("vector set is empty")]
    EmptyVectorSet,

    #[error("total power must be positive, got {0}")]
    BadTotalPower(f64),

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
