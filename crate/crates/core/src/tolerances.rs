//! Numeric thresholds shared across modules.
//!
//! Every constant is relative to a problem scale noted in its doc comment;
//! absolute thresholds appear only where the quantity is already normalized
//! (unit-circle distances, feasibility slack on a unit target).

/// Endpoint weights below this fraction of the vector norm make the beam
/// polynomial degenerate (leading or trailing coefficient effectively zero),
/// so factorization refuses rather than returning wild roots.
pub const ENDPOINT_DEGENERACY_REL: f64 = 1e-9;

/// Polished roots must satisfy |P(x)| <= this fraction of
/// max|coeff| * max(1, |x|)^degree.
pub const ROOT_RESIDUAL_REL: f64 = 1e-10;

/// Rebuilding the polynomial from (roots, leading coefficient) must match the
/// source weights to this relative error.
pub const RECONSTRUCT_REL: f64 = 1e-10;

/// Canonicalization fixes the phase on the first component whose magnitude
/// exceeds this fraction of the vector norm.
pub const CANONICAL_GAUGE_REL: f64 = 1e-9;

/// Two canonical members are the same family member when their entries agree
/// elementwise to this fraction of the mother norm.
pub const DEDUP_REL: f64 = 1e-6;

/// Default relative tolerance on autocorrelation lags for declaring two
/// vectors beampattern-equivalent (scaled by lag-0 power).
pub const SAME_PATTERN_DEFAULT_REL: f64 = 1e-9;

/// A root counts as lying on the unit circle when ||x| - 1| is below this.
pub const UNIT_CIRCLE_TOL: f64 = 1e-8;

/// Jacobi sweeps stop once the off-diagonal norm drops below this fraction of
/// the trace.
pub const EIGEN_OFFDIAG_REL: f64 = 1e-12;

/// The spheroidal design requires the second-to-third eigenvalue gap to
/// exceed this fraction of the trace; below it the two-vector sum is not
/// well defined.
pub const EIGEN_GAP_REL: f64 = 1e-10;

/// Eigenvector phase gauge: entries within this relative distance of the
/// largest magnitude tie for the gauge position (the last one wins), keeping
/// the orientation of symmetric/antisymmetric vectors stable under rounding.
pub const GAUGE_TIE_REL: f64 = 1e-8;

/// Returned minimax designs may exceed the sidelobe bound delta by at most
/// this relative slack.
pub const FEASIBILITY_SLACK: f64 = 1e-3;

/// Two extraction phase factors closer than this on the unit circle make the
/// interpolation system singular.
pub const EXTRACTION_COLLISION_TOL: f64 = 1e-9;

/// Largest element count for full family enumeration without sampling.
pub const ENUM_CAP_ELEMENTS: usize = 24;

/// Largest element count accepted by the factorizer (degree 64 polynomial).
pub const FACTOR_CAP_ELEMENTS: usize = 65;

/// Default cap on the number of k-subsets scanned exhaustively.
pub const SELECT_BUDGET_DEFAULT: u64 = 10_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    // the point is a runnable listing of the cross-constant invariants
    #[allow(clippy::assertions_on_constants)]
    fn thresholds_are_positive_and_ordered() {
        assert!(ROOT_RESIDUAL_REL > 0.0);
        assert!(RECONSTRUCT_REL > 0.0);
        // dedup must be far looser than reconstruction error, else distinct
        // members produced by accurate flips would merge
        assert!(DEDUP_REL > 1e2 * RECONSTRUCT_REL);
        // gauge threshold must sit below dedup so canonicalization never
        // picks different gauge components for vectors that dedup equates
        assert!(CANONICAL_GAUGE_REL < DEDUP_REL);
        assert!(EIGEN_OFFDIAG_REL < EIGEN_GAP_REL);
        assert!(FEASIBILITY_SLACK < 1.0);
        assert!(ENUM_CAP_ELEMENTS < FACTOR_CAP_ELEMENTS);
    }
}
