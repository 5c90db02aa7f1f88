//! Sector mother-vector design.
//!
//! Two designers produce mother vectors whose beampattern concentrates power
//! in an angular sector: a dominant-subspace design built from the top two
//! eigenvectors of the sector correlation matrix, and a minimax design that
//! fits a unit-modulus in-sector response subject to an explicit sidelobe
//! bound on an out-of-sector grid.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::array::{steering, ArrayGeometry, BeamVector};
use crate::eigen;
use crate::error::{Error, Result};
use crate::linalg;
use crate::minimax::{self, MinimaxProblem, MinimaxSolution};
use crate::tolerances::{EIGEN_GAP_REL, FEASIBILITY_SLACK, GAUGE_TIE_REL};

/// In-sector phase profile `phi(theta)`; the minimax target is
/// `e^{-j phi(theta)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseProfile {
    /// `phi = -2 pi sin(theta)`: the target phase advances with the steering
    /// phase across the sector, which a causal beam polynomial can track.
    /// This is the default.
    #[default]
    Advance,
    /// `phi = +2 pi sin(theta)`: the target phase runs against the steering
    /// phase. Kept selectable for comparison; the achievable deviation is
    /// close to the target modulus itself, so no mainlobe forms.
    Delay,
    /// `phi = 0`: constant unit target.
    Flat,
}

impl PhaseProfile {
    /// Phase in radians at an angle in degrees.
    pub fn phase(&self, theta_deg: f64) -> f64 {
        let s = theta_deg.to_radians().sin();
        match self {
            PhaseProfile::Advance => -2.0 * std::f64::consts::PI * s,
            PhaseProfile::Delay => 2.0 * std::f64::consts::PI * s,
            PhaseProfile::Flat => 0.0,
        }
    }

    /// Unit-modulus target `e^{-j phi(theta)}`.
    pub fn target(&self, theta_deg: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.phase(theta_deg))
    }
}


/// Defaults shared by constructors and the design-spec file reader.
pub mod defaults {
    /// Sidelobe bound (linear).
    pub const DELTA: f64 = 0.1;
    /// In-sector grid points.
    pub const IN_SECTOR_GRID: usize = 41;
    /// Out-of-sector grid points (total across intervals).
    pub const OUT_SECTOR_GRID: usize = 180;
    /// Transition band between sector edge and sidelobe region, degrees.
    pub const TRANSITION_DEG: f64 = 5.0;
    /// Quadrature intervals for the sector correlation matrix.
    pub const QUADRATURE_POINTS: usize = 2048;
    /// Deterministic restarts for the minimax solver.
    pub const RESTARTS: usize = 8;
    /// Total transmit power.
    pub const TOTAL_POWER: f64 = 1.0;
}

/// Validated design problem statement.
#[derive(Debug, Clone)]
pub struct DesignSpec {
    geometry: ArrayGeometry,
    sector_deg: (f64, f64),
    out_sector_deg: Vec<(f64, f64)>,
    total_power: f64,
    delta: f64,
    insector_grid_count: usize,
    outsector_grid_count: usize,
    phase_profile: PhaseProfile,
    quadrature_points: usize,
    restarts: usize,
}

impl DesignSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        geometry: ArrayGeometry,
        sector_deg: (f64, f64),
        out_sector_deg: Vec<(f64, f64)>,
        total_power: f64,
        delta: f64,
        insector_grid_count: usize,
        outsector_grid_count: usize,
        phase_profile: PhaseProfile,
        quadrature_points: usize,
        restarts: usize,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDesignSpec(msg));
        let (lo, hi) = sector_deg;
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return bad(format!("sector [{lo}, {hi}] is not an ordered pair"));
        }
        if !(-90.0..=90.0).contains(&lo) || !(-90.0..=90.0).contains(&hi) {
            return bad(format!("sector [{lo}, {hi}] leaves [-90, 90]"));
        }
        for &(a, b) in &out_sector_deg {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return bad(format!("out-of-sector interval [{a}, {b}] is not ordered"));
            }
            if !(-90.0..=90.0).contains(&a) || !(-90.0..=90.0).contains(&b) {
                return bad(format!("out-of-sector interval [{a}, {b}] leaves [-90, 90]"));
            }
            if b >= lo && a <= hi {
                return bad(format!(
                    "out-of-sector interval [{a}, {b}] overlaps the sector [{lo}, {hi}]"
                ));
            }
        }
        if !(total_power.is_finite() && total_power > 0.0) {
            return Err(Error::BadTotalPower(total_power));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return bad(format!("sidelobe bound delta must be positive, got {delta}"));
        }
        if insector_grid_count == 0 || (lo < hi && insector_grid_count < 2) {
            return bad(format!(
                "in-sector grid needs at least 2 points over a nonempty sector, got {insector_grid_count}"
            ));
        }
        if !out_sector_deg.is_empty() && outsector_grid_count < out_sector_deg.len() {
            return bad(format!(
                "out-of-sector grid needs at least one point per interval, got {outsector_grid_count} for {} intervals",
                out_sector_deg.len()
            ));
        }
        if quadrature_points < 2 {
            return bad(format!(
                "quadrature needs at least 2 intervals, got {quadrature_points}"
            ));
        }
        if restarts == 0 {
            return bad("restarts must be at least 1".to_string());
        }
        Ok(Self {
            geometry,
            sector_deg,
            out_sector_deg,
            total_power,
            delta,
            insector_grid_count,
            outsector_grid_count,
            phase_profile,
            quadrature_points,
            restarts,
        })
    }

    /// Default sidelobe region for a sector: everything further than the
    /// transition band from it, clipped to the visible half-space.
    pub fn default_out_sector(lo_deg: f64, hi_deg: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        if lo_deg - defaults::TRANSITION_DEG > -90.0 {
            out.push((-90.0, lo_deg - defaults::TRANSITION_DEG));
        }
        if hi_deg + defaults::TRANSITION_DEG < 90.0 {
            out.push((hi_deg + defaults::TRANSITION_DEG, 90.0));
        }
        out
    }

    /// Spec with default grids, bound, and transition band: the sidelobe
    /// region is everything further than 5 degrees from the sector.
    pub fn for_sector(
        geometry: ArrayGeometry,
        lo_deg: f64,
        hi_deg: f64,
        total_power: f64,
    ) -> Result<Self> {
        let out = Self::default_out_sector(lo_deg, hi_deg);
        Self::new(
            geometry,
            (lo_deg, hi_deg),
            out,
            total_power,
            defaults::DELTA,
            defaults::IN_SECTOR_GRID,
            defaults::OUT_SECTOR_GRID,
            PhaseProfile::default(),
            defaults::QUADRATURE_POINTS,
            defaults::RESTARTS,
        )
    }

    pub fn geometry(&self) -> ArrayGeometry {
        self.geometry
    }

    pub fn sector_deg(&self) -> (f64, f64) {
        self.sector_deg
    }

    pub fn out_sector_deg(&self) -> &[(f64, f64)] {
        &self.out_sector_deg
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn insector_grid_count(&self) -> usize {
        self.insector_grid_count
    }

    pub fn outsector_grid_count(&self) -> usize {
        self.outsector_grid_count
    }

    pub fn phase_profile(&self) -> PhaseProfile {
        self.phase_profile
    }

    pub fn quadrature_points(&self) -> usize {
        self.quadrature_points
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    /// Uniform inclusive grid over the sector.
    pub fn in_sector_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.sector_deg;
        interval_grid(lo, hi, if lo == hi { 1 } else { self.insector_grid_count })
    }

    /// Out-of-sector grid: the point budget is split across intervals in
    /// proportion to their length, one point minimum each.
    pub fn out_sector_grid(&self) -> Vec<f64> {
        let counts = distribute_points(&self.out_sector_deg, self.outsector_grid_count);
        self.out_sector_deg
            .iter()
            .zip(counts)
            .flat_map(|(&(a, b), c)| interval_grid(a, b, c))
            .collect()
    }

    /// Same intervals sampled `factor` times more densely, for validation.
    pub fn dense_out_sector_grid(&self, factor: usize) -> Vec<f64> {
        let counts = distribute_points(&self.out_sector_deg, self.outsector_grid_count * factor);
        self.out_sector_deg
            .iter()
            .zip(counts)
            .flat_map(|(&(a, b), c)| interval_grid(a, b, c))
            .collect()
    }
}

fn interval_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if lo == hi || count <= 1 {
        return vec![(lo + hi) / 2.0];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn distribute_points(intervals: &[(f64, f64)], total: usize) -> Vec<usize> {
    if intervals.is_empty() {
        return Vec::new();
    }
    let lengths: Vec<f64> = intervals.iter().map(|&(a, b)| b - a).collect();
    let total_len: f64 = lengths.iter().sum();
    let spare = total.saturating_sub(intervals.len());
    let mut counts = vec![1usize; intervals.len()];
    if total_len <= 0.0 {
        // all intervals degenerate: one point each
        return counts;
    }
    let mut fractions: Vec<(usize, f64)> = Vec::with_capacity(intervals.len());
    let mut assigned = 0usize;
    for (i, &len) in lengths.iter().enumerate() {
        let share = spare as f64 * len / total_len;
        let base = share.floor() as usize;
        counts[i] += base;
        assigned += base;
        fractions.push((i, share - base as f64));
    }
    fractions.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for &(i, _) in fractions.iter().take(spare - assigned) {
        counts[i] += 1;
    }
    counts
}

/// Sector correlation matrix `A = integral over the sector of
/// a(theta) a^H(theta) d theta`, Hermitian Toeplitz by construction.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    entries: Vec<Vec<Complex64>>,
    width_rad: f64,
}

impl SectorMatrix {
    pub fn entries(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    /// Sector width in radians; equals every diagonal entry.
    pub fn width_rad(&self) -> f64 {
        self.width_rad
    }
}

/// Builds the sector correlation matrix by composite Simpson quadrature of
/// the lag integrals `t_l = integral of e^{j 2 pi d l sin(theta)}`; entry
/// `(p, q)` is `t_{p-q}`. Simpson keeps the matrix invariant to 1e-8 under
/// doubling the node count, which the trapezoid rule does not achieve for
/// partial sectors.
pub fn sector_matrix(spec: &DesignSpec) -> SectorMatrix {
    let m = spec.geometry().elements();
    let d = spec.geometry().spacing();
    let (lo, hi) = spec.sector_deg();
    let (a, b) = (lo.to_radians(), hi.to_radians());
    let n = spec.quadrature_points() + spec.quadrature_points() % 2;
    let h = (b - a) / n as f64;
    let mut lags = vec![Complex64::new(0.0, 0.0); m];
    if b > a {
        for k in 0..=n {
            let weight = if k == 0 || k == n {
                h / 3.0
            } else if k % 2 == 1 {
                4.0 * h / 3.0
            } else {
                2.0 * h / 3.0
            };
            let s = (a + h * k as f64).sin();
            let phase = 2.0 * std::f64::consts::PI * d * s;
            for (l, lag) in lags.iter_mut().enumerate() {
                *lag += weight * Complex64::from_polar(1.0, phase * l as f64);
            }
        }
    }
    // the zero lag integrates a constant: pin it to the exact width
    lags[0] = Complex64::new(b - a, 0.0);
    let entries: Vec<Vec<Complex64>> = (0..m)
        .map(|p| {
            (0..m)
                .map(|q| if p >= q { lags[p - q] } else { lags[q - p].conj() })
                .collect()
        })
        .collect();
    SectorMatrix {
        entries,
        width_rad: b - a,
    }
}

/// Phase gauge for eigenvectors: rotate so the dominant entry is real
/// positive. Among entries within a relative tie window of the maximum
/// magnitude, the last index wins; antisymmetric eigenvectors have exactly
/// tied opposite-sign dominant entries, and the tie-break fixes a
/// reproducible orientation.
fn gauge(u: &[Complex64]) -> Vec<Complex64> {
    let max_mag = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return u.to_vec();
    }
    let idx = u
        .iter()
        .enumerate()
        .filter(|(_, x)| x.norm() >= (1.0 - GAUGE_TIE_REL) * max_mag)
        .map(|(i, _)| i)
        .next_back()
        .expect("nonzero vector has a dominant entry");
    let rot = u[idx].conj() / u[idx].norm();
    u.iter().map(|x| x * rot).collect()
}

/// Dominant-subspace mother vector: `sqrt(P_t / 2) (u_1 + u_2)` from the top
/// two eigenvectors of the sector correlation matrix.
pub fn spheroidal_mother(spec: &DesignSpec) -> Result<BeamVector> {
    let matrix = sector_matrix(spec);
    let eig = eigen::hermitian_eigen(matrix.entries())?;
    let trace: f64 = eig.eigenvalues.iter().sum();
    let threshold = EIGEN_GAP_REL * trace;
    let gap = if eig.eigenvalues.len() >= 3 {
        eig.eigenvalues[1] - eig.eigenvalues[2]
    } else {
        f64::INFINITY
    };
    // negated form on purpose: a NaN gap must fail the check
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(gap > threshold) {
        return Err(Error::AmbiguousDesign { gap, threshold });
    }
    let u1 = gauge(&eig.eigenvectors[0]);
    let u2 = gauge(&eig.eigenvectors[1]);
    let scale = (spec.total_power() / 2.0).sqrt();
    let weights: Vec<Complex64> = u1
        .iter()
        .zip(&u2)
        .map(|(a, b)| scale * (a + b))
        .collect();
    BeamVector::new(spec.geometry(), weights)
}

/// Minimax design result: the weight vector plus the achieved deviation and
/// sidelobe level for reporting.
#[derive(Debug, Clone)]
pub struct ConvexDesign {
    pub vector: BeamVector,
    /// `max_i |w^H a(theta_i) - e^{-j phi_i}|` over the in-sector grid.
    pub objective: f64,
    /// `max_k |w^H a(theta_k)|` over the out-of-sector grid.
    pub max_constraint_level: f64,
}

fn steering_rows(geometry: ArrayGeometry, angles: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    angles.iter().map(|&t| steering(geometry, t)).collect()
}

/// Ridge least-squares fit of the in-sector targets (normal equations), the
/// workhorse starting point for the minimax solve.
fn least_squares_init(problem: &MinimaxProblem, m: usize) -> Option<Vec<Complex64>> {
    let mut gram = vec![Complex64::new(0.0, 0.0); m * m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for (a, tau) in &problem.targets {
        for p in 0..m {
            for q in 0..m {
                // (A^H A)[p][q] accumulated over rows a
                gram[p * m + q] += a[p].conj() * a[q];
            }
            rhs[p] += a[p].conj() * tau;
        }
    }
    for p in 0..m {
        gram[p * m + p] += Complex64::new(1e-9, 0.0);
    }
    let (x, _, _) = linalg::solve(gram, rhs)?;
    // the fit solves for conj(w)
    Some(x.iter().map(|xi| xi.conj()).collect())
}

fn scaled(w: &[Complex64], factor: Complex64) -> Vec<Complex64> {
    w.iter().map(|x| x * factor).collect()
}

fn feasibility_scaled(problem: &MinimaxProblem, w: &[Complex64]) -> Vec<Complex64> {
    let (_, level) = problem.evaluate(w);
    if level > problem.delta {
        scaled(w, Complex64::new(problem.delta / level, 0.0))
    } else {
        w.to_vec()
    }
}

/// Minimax mother vector: minimizes the worst in-sector deviation from the
/// unit-modulus target subject to the sidelobe bound, returning the best
/// feasible result over the spec's restarts.
pub fn convex_mother(spec: &DesignSpec, seed: u64) -> Result<ConvexDesign> {
    let m = spec.geometry().elements();
    let in_grid = spec.in_sector_grid();
    let out_grid = spec.out_sector_grid();
    let targets: Vec<(Vec<Complex64>, Complex64)> = in_grid
        .iter()
        .map(|&t| Ok((steering(spec.geometry(), t)?, spec.phase_profile().target(t))))
        .collect::<Result<_>>()?;
    let problem = MinimaxProblem {
        targets,
        constraints: steering_rows(spec.geometry(), &out_grid)?,
        delta: spec.delta(),
    };

    let mut inits: Vec<Vec<Complex64>> = Vec::new();
    if let Some(ls) = least_squares_init(&problem, m) {
        inits.push(ls.clone());
        inits.push(feasibility_scaled(&problem, &ls));
        inits.push(scaled(&ls, Complex64::new(0.7, 0.0)));
        inits.push(scaled(&ls, Complex64::new(1.3, 0.0)));
    }
    if let Ok(sph) = spheroidal_mother(spec) {
        // rotate/scale so the center response matches the center target
        let (lo, hi) = spec.sector_deg();
        let center = (lo + hi) / 2.0;
        let a_c = steering(spec.geometry(), center)?;
        let r0: Complex64 = sph
            .weights()
            .iter()
            .zip(&a_c)
            .map(|(wm, am)| wm.conj() * am)
            .sum();
        if r0.norm() > 0.0 {
            let tau_c = spec.phase_profile().target(center);
            let aligned = scaled(sph.weights(), tau_c.conj() * r0 / r0.norm_sqr());
            inits.push(aligned.clone());
            inits.push(feasibility_scaled(&problem, &aligned));
        }
    }
    {
        let (lo, hi) = spec.sector_deg();
        let center = (lo + hi) / 2.0;
        let a_c = steering(spec.geometry(), center)?;
        let norm_sqr: f64 = a_c.iter().map(|x| x.norm_sqr()).sum();
        let tau_c = spec.phase_profile().target(center);
        inits.push(scaled(&a_c, tau_c.conj() / norm_sqr));
    }
    inits.push(vec![Complex64::new(0.0, 0.0); m]);

    if spec.restarts() > inits.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = inits[0].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() / (m as f64).sqrt();
        let scale = if scale > 0.0 { scale } else { 1.0 };
        for _ in 0..(spec.restarts() - inits.len()) {
            inits.push(
                (0..m)
                    .map(|_| {
                        Complex64::new(
                            scale * rng.gen_range(-1.0..1.0),
                            scale * rng.gen_range(-1.0..1.0),
                        )
                    })
                    .collect(),
            );
        }
    }

    let solutions: Vec<MinimaxSolution> = inits
        .par_iter()
        .map(|w0| minimax::solve_from(&problem, w0))
        .collect();

    let feasible_bound = spec.delta() * (1.0 + FEASIBILITY_SLACK);
    let best = solutions
        .iter()
        .filter(|s| s.objective.is_finite() && s.max_constraint <= feasible_bound)
        .min_by(|a, b| a.objective.total_cmp(&b.objective));
    match best {
        Some(s) => Ok(ConvexDesign {
            vector: BeamVector::new(spec.geometry(), s.weights.clone())?,
            objective: s.objective,
            max_constraint_level: s.max_constraint,
        }),
        None => {
            let least_bad = solutions
                .iter()
                .min_by(|a, b| a.max_constraint.total_cmp(&b.max_constraint))
                .expect("at least one init");
            Err(Error::SolverFailure {
                objective: least_bad.objective,
                violation: (least_bad.max_constraint - spec.delta()).max(0.0),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::beampattern;
    use crate::rootspace::factorize;

    fn geo(m: usize) -> ArrayGeometry {
        ArrayGeometry::new(m, 0.5).unwrap()
    }

    fn reference_spec() -> DesignSpec {
        DesignSpec::for_sector(geo(10), -10.0, 10.0, 10.0).unwrap()
    }

    /// Dominant-subspace design for the 10-element half-wavelength array and
    /// the [-10, 10] degree sector at total power 10.
    const SECTOR_MOTHER_ORACLE: [f64; 10] = [
        0.5178, 0.3408, 0.0472, -0.3263, -0.7253, -1.0873, -1.3540, -1.4830, -1.4562, -1.2828,
    ];

    #[test]
    fn default_spec_layout() {
        let spec = reference_spec();
        assert_eq!(spec.out_sector_deg(), &[(-90.0, -15.0), (15.0, 90.0)]);
        assert_eq!(spec.in_sector_grid().len(), 41);
        let out = spec.out_sector_grid();
        assert_eq!(out.len(), 180);
        assert_eq!(out[0], -90.0);
        assert_eq!(out[89], -15.0);
        assert_eq!(out[90], 15.0);
        assert_eq!(out[179], 90.0);
        let dense = spec.dense_out_sector_grid(4);
        assert_eq!(dense.len(), 720);
    }

    #[test]
    fn spec_validation_rejects_bad_inputs() {
        let g = geo(4);
        // reversed sector
        assert!(DesignSpec::for_sector(g, 10.0, -10.0, 1.0).is_err());
        // out interval overlapping the sector
        assert!(DesignSpec::new(
            g,
            (-10.0, 10.0),
            vec![(5.0, 40.0)],
            1.0,
            0.1,
            41,
            180,
            PhaseProfile::default(),
            2048,
            8
        )
        .is_err());
        // touching counts as overlap
        assert!(DesignSpec::new(
            g,
            (-10.0, 10.0),
            vec![(10.0, 40.0)],
            1.0,
            0.1,
            41,
            180,
            PhaseProfile::default(),
            2048,
            8
        )
        .is_err());
        // bad sidelobe bound / power
        assert!(DesignSpec::new(
            g,
            (-10.0, 10.0),
            vec![],
            1.0,
            0.0,
            41,
            180,
            PhaseProfile::default(),
            2048,
            8
        )
        .is_err());
        assert!(matches!(
            DesignSpec::new(
                g,
                (-10.0, 10.0),
                vec![],
                -2.0,
                0.1,
                41,
                180,
                PhaseProfile::default(),
                2048,
                8
            ),
            Err(Error::BadTotalPower(_))
        ));
        // out of angular range
        assert!(DesignSpec::for_sector(g, -100.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn near_edge_sector_drops_one_side() {
        let spec = DesignSpec::for_sector(geo(4), 80.0, 90.0, 1.0).unwrap();
        assert_eq!(spec.out_sector_deg(), &[(-90.0, 75.0)]);
        assert_eq!(spec.out_sector_grid().len(), 180);
    }

    #[test]
    fn sector_matrix_diagonal_is_the_width() {
        let spec = DesignSpec::for_sector(geo(5), -10.0, 10.0, 1.0).unwrap();
        let a = sector_matrix(&spec);
        let width = 20.0f64.to_radians();
        assert!((a.width_rad() - width).abs() < 1e-15);
        for i in 0..5 {
            assert_eq!(a.entries()[i][i], Complex64::new(width, 0.0));
        }
    }

    #[test]
    fn sector_matrix_is_hermitian_toeplitz() {
        // asymmetric sector so imaginary parts are exercised
        let spec = DesignSpec::new(
            geo(6),
            (5.0, 35.0),
            vec![],
            1.0,
            0.1,
            41,
            180,
            PhaseProfile::default(),
            2048,
            8,
        )
        .unwrap();
        let a = sector_matrix(&spec);
        for p in 0..6 {
            for q in 0..6 {
                assert_eq!(a.entries()[p][q], a.entries()[q][p].conj());
                if p > 0 && q > 0 {
                    assert_eq!(a.entries()[p][q], a.entries()[p - 1][q - 1]);
                }
            }
        }
        let eig = eigen::hermitian_eigen(a.entries()).unwrap();
        let trace: f64 = eig.eigenvalues.iter().sum();
        assert!(*eig.eigenvalues.last().unwrap() >= -1e-10 * trace);
    }

    #[test]
    fn full_space_off_diagonal_matches_bessel_oracle() {
        // For M=2, d=0.5, sector [-90, 90]: the (0,1) entry is
        // the integral of e^{-j pi sin(theta)}, which equals pi J0(pi).
        let spec = DesignSpec::new(
            geo(2),
            (-90.0, 90.0),
            vec![],
            1.0,
            0.1,
            41,
            180,
            PhaseProfile::default(),
            2048,
            8,
        )
        .unwrap();
        let a = sector_matrix(&spec);
        let oracle = -0.955804990198846;
        assert!(
            (a.entries()[0][1].re - oracle).abs() < 1e-10,
            "got {}",
            a.entries()[0][1]
        );
        assert!(a.entries()[0][1].im.abs() < 1e-12);
        assert!((a.entries()[1][0].re - oracle).abs() < 1e-10);
    }

    #[test]
    fn symmetric_sector_matrix_is_real() {
        let spec = reference_spec();
        let a = sector_matrix(&spec);
        for row in a.entries() {
            for x in row {
                assert!(x.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn sector_mother_matches_reference_profile() {
        let w = spheroidal_mother(&reference_spec()).unwrap();
        // global sign alignment: the reference fixes the opposite orientation
        let mut best = f64::INFINITY;
        for sign in [1.0f64, -1.0] {
            let dev = w
                .weights()
                .iter()
                .zip(SECTOR_MOTHER_ORACLE.iter())
                .map(|(got, want)| (sign * got.re - want).abs().max((sign * got.im).abs()))
                .fold(0.0, f64::max);
            best = best.min(dev);
        }
        assert!(best < 5e-2, "worst deviation {best}");
    }

    #[test]
    fn sector_mother_norm_carries_total_power() {
        for pt in [1.0, 10.0, 3.7] {
            let spec = DesignSpec::for_sector(geo(10), -10.0, 10.0, pt).unwrap();
            let w = spheroidal_mother(&spec).unwrap();
            assert!((w.norm_sqr() - pt).abs() <= 1e-10 * pt);
        }
    }

    #[test]
    fn symmetric_sector_mother_is_real() {
        let w = spheroidal_mother(&reference_spec()).unwrap();
        for x in w.weights() {
            assert!(x.im.abs() <= 1e-10 * w.norm());
        }
    }

    #[test]
    fn sector_mother_invariant_under_quadrature_doubling() {
        let spec = reference_spec();
        let doubled = DesignSpec::new(
            spec.geometry(),
            spec.sector_deg(),
            spec.out_sector_deg().to_vec(),
            spec.total_power(),
            spec.delta(),
            spec.insector_grid_count(),
            spec.outsector_grid_count(),
            spec.phase_profile(),
            spec.quadrature_points() * 2,
            spec.restarts(),
        )
        .unwrap();
        let w1 = spheroidal_mother(&spec).unwrap();
        let w2 = spheroidal_mother(&doubled).unwrap();
        for (a, b) in w1.weights().iter().zip(w2.weights()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn degenerate_sector_is_ambiguous() {
        let spec = DesignSpec::new(
            geo(6),
            (0.0, 1e-6),
            vec![],
            1.0,
            0.1,
            2,
            180,
            PhaseProfile::default(),
            2048,
            8,
        )
        .unwrap();
        assert!(matches!(
            spheroidal_mother(&spec),
            Err(Error::AmbiguousDesign { .. })
        ));
    }

    #[test]
    fn phase_profiles() {
        let p = PhaseProfile::Advance;
        assert!((p.phase(30.0) + std::f64::consts::PI).abs() < 1e-12);
        assert!((PhaseProfile::Delay.phase(30.0) - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(PhaseProfile::Flat.phase(64.0), 0.0);
        let tau = p.target(30.0);
        assert!((tau - Complex64::from_polar(1.0, std::f64::consts::PI)).norm() < 1e-12);
        assert!((tau.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minimax_mother_reaches_reference_objective() {
        // frozen from an independent convex solver on the same grids
        let design = convex_mother(&reference_spec(), 0).unwrap();
        assert!(
            (design.objective - 0.67015).abs() < 2e-3,
            "objective {}",
            design.objective
        );
        assert!(design.max_constraint_level <= 0.1 * (1.0 + 1e-3));
        // in-sector response has a genuine mainlobe
        let spec = reference_spec();
        let mut min_resp = f64::INFINITY;
        for &t in &spec.in_sector_grid() {
            let a = steering(spec.geometry(), t).unwrap();
            let r: Complex64 = design
                .vector
                .weights()
                .iter()
                .zip(&a)
                .map(|(wm, am)| wm.conj() * am)
                .sum();
            min_resp = min_resp.min(r.norm());
        }
        assert!(min_resp > 0.3, "in-sector response floor {min_resp}");
    }

    #[test]
    fn minimax_feasibility_holds_on_dense_grid() {
        let spec = reference_spec();
        let design = convex_mother(&spec, 0).unwrap();
        let dense = spec.dense_out_sector_grid(4);
        let p = beampattern(&design.vector, &dense).unwrap();
        let max_level = p.iter().fold(0.0f64, |a, &b| a.max(b)).sqrt();
        assert!(
            max_level <= spec.delta() * 1.05,
            "dense-grid level {max_level}"
        );
    }

    #[test]
    fn minimax_unconstrained_single_point_is_exact() {
        let spec = DesignSpec::new(
            geo(4),
            (15.0, 15.0),
            vec![],
            1.0,
            1e6,
            1,
            180,
            PhaseProfile::default(),
            2048,
            2,
        )
        .unwrap();
        let design = convex_mother(&spec, 0).unwrap();
        assert!(design.objective < 1e-6);
    }

    #[test]
    fn conjugation_symmetry_for_symmetric_grids() {
        // For symmetric grids and an odd phase profile, conjugating the
        // weights maps grid responses onto mirrored grid points, preserving
        // both the objective and the constraint levels.
        let spec = reference_spec();
        let design = convex_mother(&spec, 0).unwrap();
        let w = design.vector.weights();
        let conj: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
        let eval = |v: &[Complex64]| {
            let mut obj = 0.0f64;
            for &t in &spec.in_sector_grid() {
                let a = steering(spec.geometry(), t).unwrap();
                let r: Complex64 = v.iter().zip(&a).map(|(wm, am)| wm.conj() * am).sum();
                obj = obj.max((r - spec.phase_profile().target(t)).norm());
            }
            let mut lvl = 0.0f64;
            for &t in &spec.out_sector_grid() {
                let a = steering(spec.geometry(), t).unwrap();
                let r: Complex64 = v.iter().zip(&a).map(|(wm, am)| wm.conj() * am).sum();
                lvl = lvl.max(r.norm());
            }
            (obj, lvl)
        };
        let (obj_w, lvl_w) = eval(w);
        let (obj_c, lvl_c) = eval(&conj);
        assert!((obj_w - obj_c).abs() < 1e-10);
        assert!((lvl_w - lvl_c).abs() < 1e-10);
        // conjugate reversal preserves |response| pointwise, hence
        // feasibility, though not the phase objective
        let rev: Vec<Complex64> = w.iter().rev().map(|x| x.conj()).collect();
        let (_, lvl_r) = eval(&rev);
        assert!((lvl_w - lvl_r).abs() < 1e-10);
    }

    #[test]
    fn both_designs_factorize() {
        let sph = spheroidal_mother(&reference_spec()).unwrap();
        assert!(factorize(&sph).is_ok());
        let cvx = convex_mother(&reference_spec(), 0).unwrap();
        assert!(factorize(&cvx.vector).is_ok());
    }

    #[test]
    fn designs_are_deterministic() {
        let a = spheroidal_mother(&reference_spec()).unwrap();
        let b = spheroidal_mother(&reference_spec()).unwrap();
        assert_eq!(a.weights(), b.weights());
        let c = convex_mother(&reference_spec(), 7).unwrap();
        let d = convex_mother(&reference_spec(), 7).unwrap();
        assert_eq!(c.vector.weights(), d.vector.weights());
    }

    #[test]
    fn point_distribution_is_proportional() {
        let counts = distribute_points(&[(-90.0, -15.0), (15.0, 90.0)], 180);
        assert_eq!(counts, vec![90, 90]);
        let counts = distribute_points(&[(-90.0, -30.0), (60.0, 90.0)], 90);
        assert_eq!(counts.iter().sum::<usize>(), 90);
        assert_eq!(counts[0], 60);
        assert_eq!(counts[1], 30);
        let counts = distribute_points(&[(0.0, 0.0), (10.0, 20.0)], 10);
        assert_eq!(counts[0], 1);
        assert_eq!(counts[1], 9);
    }
}
