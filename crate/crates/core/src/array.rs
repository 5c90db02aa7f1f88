//! Uniform linear array geometry, weight vectors, and beampatterns.
//!
//! Angles cross every public boundary in degrees and are converted to radians
//! internally. The first element is the phase reference: the steering vector
//! component for element `m` is `exp(j 2 pi d m sin(theta))` with `d` the
//! spacing in wavelengths.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform linear array: element count and spacing in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    elements: usize,
    spacing: f64,
}

impl ArrayGeometry {
    pub fn new(elements: usize, spacing: f64) -> Result<Self> {
        if elements < 2 {
            return Err(Error::InvalidGeometry(format!(
                "need at least 2 elements, got {elements}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "spacing must be a positive finite wavelength fraction, got {spacing}"
            )));
        }
        Ok(Self { elements, spacing })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

/// Complex weight vector bound to an array geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector {
    geometry: ArrayGeometry,
    weights: Vec<Complex64>,
}

impl BeamVector {
    pub fn new(geometry: ArrayGeometry, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != geometry.elements() {
            return Err(Error::LengthMismatch {
                expected: geometry.elements(),
                got: weights.len(),
            });
        }
        if !weights.iter().all(|w| w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::NonFiniteWeights);
        }
        Ok(Self { geometry, weights })
    }

    /// Builds a vector from real weights.
    pub fn from_real(geometry: ArrayGeometry, weights: &[f64]) -> Result<Self> {
        Self::new(
            geometry,
            weights.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn geometry(&self) -> ArrayGeometry {
        self.geometry
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Sum of squared magnitudes (lag-0 autocorrelation).
    pub fn norm_sqr(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the vector scaled by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> BeamVector {
        BeamVector {
            geometry: self.geometry,
            weights: self.weights.iter().map(|w| w * factor).collect(),
        }
    }

    pub(crate) fn check_same_geometry(&self, other: &BeamVector) -> Result<()> {
        if self.geometry != other.geometry {
            return Err(Error::GeometryMismatch {
                a: self.geometry.elements(),
                a_spacing: self.geometry.spacing(),
                b: other.geometry.elements(),
                b_spacing: other.geometry.spacing(),
            });
        }
        Ok(())
    }
}

fn check_angle(theta_deg: f64) -> Result<f64> {
    if !theta_deg.is_finite() || !(-90.0..=90.0).contains(&theta_deg) {
        return Err(Error::AngleOutOfRange(theta_deg));
    }
    Ok(theta_deg.to_radians())
}

/// Steering vector `a(theta)`: component `m` is `exp(j 2 pi d m sin(theta))`.
pub fn steering(geometry: ArrayGeometry, theta_deg: f64) -> Result<Vec<Complex64>> {
    let theta = check_angle(theta_deg)?;
    let phase_step = 2.0 * std::f64::consts::PI * geometry.spacing() * theta.sin();
    Ok((0..geometry.elements())
        .map(|m| Complex64::from_polar(1.0, phase_step * m as f64))
        .collect())
}

/// Transmit beampattern `p(theta) = |w^H d(theta)|^2` with `d = conj(a)`,
/// evaluated at each grid angle.
pub fn beampattern(w: &BeamVector, angles_deg: &[f64]) -> Result<Vec<f64>> {
    if angles_deg.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let spacing = w.geometry().spacing();
    angles_deg
        .iter()
        .map(|&deg| {
            let theta = check_angle(deg)?;
            // w^H d = conj(sum_m w_m u^m), so p = |sum_m w_m u^m|^2
            let phase_step = 2.0 * std::f64::consts::PI * spacing * theta.sin();
            let u = Complex64::from_polar(1.0, phase_step);
            let mut acc = Complex64::new(0.0, 0.0);
            for &wm in w.weights().iter().rev() {
                acc = acc * u + wm;
            }
            Ok(acc.norm_sqr())
        })
        .collect()
}

/// Power ratio in decibels; zero and negative inputs map to `-inf`.
pub fn to_db(power: f64) -> f64 {
    if power > 0.0 {
        10.0 * power.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Evaluation grid of angles in degrees, ascending and within [-90, 90].
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGrid {
    angles_deg: Vec<f64>,
}

impl PatternGrid {
    /// Uniform grid from `lo` to `hi` inclusive with the given step.
    pub fn uniform(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || lo > hi || step <= 0.0 {
            return Err(Error::EmptyGrid);
        }
        check_angle(lo)?;
        check_angle(hi)?;
        let count = ((hi - lo) / step).round() as usize;
        let mut angles: Vec<f64> = (0..=count)
            .map(|i| lo + step * i as f64)
            .filter(|&a| a <= hi + 1e-12)
            .collect();
        if let Some(last) = angles.last_mut() {
            *last = last.min(hi);
        }
        if angles.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { angles_deg: angles })
    }

    /// Default half-space grid: -90 to 90 degrees in 0.25 degree steps.
    pub fn half_space() -> Self {
        Self::uniform(-90.0, 90.0, 0.25).expect("static grid is valid")
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_deg.is_empty()
    }
}
