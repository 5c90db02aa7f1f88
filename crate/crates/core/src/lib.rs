//! Beampattern-equivalent beamforming vector families for uniform linear
//! arrays.
//!
//! A transmit beampattern `p(theta) = |w^H d(theta)|^2` does not identify the
//! weight vector `w` that produced it: every subset of the beam polynomial's
//! roots can be replaced by conjugate reciprocals without changing any
//! autocorrelation lag, so a generic `M`-element vector belongs to a family
//! of `2^(M-1)` pattern-equivalent vectors. This crate enumerates those
//! families, designs sector mother vectors (dominant-subspace and minimax),
//! and selects subsets whose combined per-element transmit power is as close
//! to uniform as possible — the members radiate identically but load array
//! elements differently.
//!
//! Modules:
//! - [`array`]: geometry, steering vectors, beampatterns.
//! - [`autocorr`]: autocorrelation lags, pattern-equality tests, and the
//!   Toeplitz covariance extraction check.
//! - [`rootspace`]: beam polynomial factorization and root flipping.
//! - [`family`]: full family enumeration with deduplication.
//! - [`design`]: sector mother vectors (dominant-subspace and minimax).
//! - [`select`]: per-element power profiles and subset selection.
//! - [`io`]: JSON/CSV file formats and run manifests.

pub mod array;
pub mod autocorr;
pub mod design;
pub mod error;
pub mod family;
pub mod io;
pub mod rootspace;
pub mod select;
pub mod tolerances;

mod eigen;
mod linalg;
mod minimax;
mod roots;

pub use array::{beampattern, steering, to_db, ArrayGeometry, BeamVector, PatternGrid};
pub use autocorr::{
    autocorrelation, default_extraction_angles, same_beampattern, toeplitz_extraction_check,
    AutocorrSequence,
};
pub use design::{
    convex_mother, sector_matrix, spheroidal_mother, ConvexDesign, DesignSpec, PhaseProfile,
    SectorMatrix,
};
pub use error::{Error, Result};
pub use family::{count_distinct, enumerate_family, EnumerateOptions, Family, FamilyMember};
pub use io::RunManifest;
pub use rootspace::{canonicalize, factorize, flip, FlipMask, RootFactorization};
pub use select::{power_profile, select_subset, PowerProfile, Selection, UniformityMetric};
