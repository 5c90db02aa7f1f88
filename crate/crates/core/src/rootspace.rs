//! Beam polynomial factorization and root flipping.
//!
//! A weight vector `w` defines the beam polynomial
//! `P(x) = w_1 + w_2 x + ... + w_M x^(M-1)`. Replacing any subset of roots
//! `x_i` by their conjugate reciprocals `1/conj(x_i)` and rescaling the
//! leading coefficient by `prod |x_i|` over the flipped subset leaves every
//! autocorrelation lag, hence the beampattern, unchanged. Flipped members are
//! returned in canonical phase so that equality comparisons are meaningful.

use std::fmt;

use num_complex::Complex64;

use crate::array::{ArrayGeometry, BeamVector};
use crate::error::{Error, Result};
use crate::roots;
use crate::tolerances::{
    CANONICAL_GAUGE_REL, ENDPOINT_DEGENERACY_REL, FACTOR_CAP_ELEMENTS, UNIT_CIRCLE_TOL,
};

/// Roots and leading coefficient of a beam polynomial.
///
/// Roots are sorted by `(magnitude, phase)` ascending; flip masks index into
/// this order.
#[derive(Debug, Clone)]
pub struct RootFactorization {
    geometry: ArrayGeometry,
    roots: Vec<Complex64>,
    leading_magnitude: f64,
    leading_phase: f64,
}

impl RootFactorization {
    pub fn geometry(&self) -> ArrayGeometry {
        self.geometry
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn leading_magnitude(&self) -> f64 {
        self.leading_magnitude
    }

    pub fn leading_phase(&self) -> f64 {
        self.leading_phase
    }

    /// Number of roots strictly off the unit circle; these generate distinct
    /// family members, while on-circle roots are flip fixed points.
    pub fn off_circle_count(&self) -> usize {
        self.roots
            .iter()
            .filter(|r| (r.norm() - 1.0).abs() > UNIT_CIRCLE_TOL)
            .count()
    }

    /// Rebuilds the weight vector `leading * prod (x - x_i)`.
    pub fn reconstruct(&self) -> BeamVector {
        let lead = Complex64::from_polar(self.leading_magnitude, self.leading_phase);
        let coeffs = roots::expand_from_roots(&self.roots, lead);
        BeamVector::new(self.geometry, coeffs).expect("expansion yields one coefficient per element")
    }
}

/// Subset of root indices to flip, stored as bits (bit `i` = root `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlipMask {
    bits: u64,
    len: usize,
}

impl FlipMask {
    pub fn empty(len: usize) -> Self {
        assert!(len <= 64);
        Self { bits: 0, len }
    }

    pub fn all(len: usize) -> Self {
        assert!(len <= 64);
        let bits = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self { bits, len }
    }

    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self {
            bits: bits & mask,
            len,
        }
    }

    pub fn from_indices(indices: &[usize], len: usize) -> Self {
        let mut bits = 0u64;
        for &i in indices {
            assert!(i < len, "root index {i} out of range for {len} roots");
            bits |= 1 << i;
        }
        Self { bits, len }
    }

    /// Parses a bit string such as `"0110"`, character `i` naming root `i`.
    pub fn parse(s: &str) -> Option<Self> {
        if s.is_empty() || s.len() > 64 {
            return None;
        }
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return None,
            }
        }
        Some(Self { bits, len: s.len() })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.len && (self.bits >> index) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

impl fmt::Display for FlipMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.contains(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Factorizes the beam polynomial of `w` into roots and leading coefficient.
///
/// Fails with `DegenerateEndpoints` when either endpoint weight is below
/// `1e-9 * ||w||`: a vanishing trailing coefficient would put a root at zero
/// (no finite conjugate reciprocal) and a vanishing leading coefficient drops
/// the polynomial degree.
pub fn factorize(w: &BeamVector) -> Result<RootFactorization> {
    let m = w.len();
    if m > FACTOR_CAP_ELEMENTS {
        return Err(Error::DegreeTooHigh {
            degree: m - 1,
            max: FACTOR_CAP_ELEMENTS - 1,
        });
    }
    let norm = w.norm();
    let threshold = ENDPOINT_DEGENERACY_REL * norm;
    let first = w.weights()[0].norm();
    let last = w.weights()[m - 1].norm();
    if norm == 0.0 || first <= threshold || last <= threshold {
        return Err(Error::DegenerateEndpoints {
            magnitude: first.min(last),
            threshold,
        });
    }
    let mut roots = roots::all_roots(w.weights())?;
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    let lead = w.weights()[m - 1];
    Ok(RootFactorization {
        geometry: w.geometry(),
        roots,
        leading_magnitude: lead.norm(),
        leading_phase: lead.arg(),
    })
}

/// Builds the family member for a flip mask: roots in the mask move to their
/// conjugate reciprocals, the leading magnitude picks up `prod |x_i|` over
/// the mask, and the result is canonicalized.
pub fn flip(factorization: &RootFactorization, mask: &FlipMask) -> Result<BeamVector> {
    if mask.len() != factorization.roots.len() {
        return Err(Error::MaskLengthMismatch {
            mask_len: mask.len(),
            roots: factorization.roots.len(),
        });
    }
    let mut roots = factorization.roots.clone();
    let mut magnitude = factorization.leading_magnitude;
    for (i, root) in roots.iter_mut().enumerate() {
        if mask.contains(i) {
            magnitude *= root.norm();
            *root = root.conj().inv();
        }
    }
    let coeffs = roots::expand_from_roots(&roots, Complex64::new(magnitude, 0.0));
    let member = BeamVector::new(factorization.geometry, coeffs)?;
    Ok(canonicalize(&member))
}

/// Removes the global phase ambiguity: multiplies by the unit scalar that
/// makes the first component with magnitude above `1e-9 * ||w||` real and
/// strictly positive. Vectors with no such component return unchanged.
pub fn canonicalize(w: &BeamVector) -> BeamVector {
    let threshold = CANONICAL_GAUGE_REL * w.norm();
    for &wi in w.weights() {
        let mag = wi.norm();
        if mag > threshold {
            return w.scaled(wi.conj() / mag);
        }
    }
    w.clone()
}
