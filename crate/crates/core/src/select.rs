//! Per-element transmit power profiles and uniform-power subset selection.
//!
//! Family members share one beampattern but load array elements differently,
//! so transmitting `K` of them at once (each carrying `P_t / K` of the power
//! budget) can spread power across elements far more evenly than the mother
//! alone. This module scores subsets by the worst per-element deviation from
//! `P_t / M` (or by variance) and picks the best subset, exhaustively when
//! the candidate count is within budget and by a seeded greedy-plus-swaps
//! search otherwise.

use rayon::prelude::*;

use crate::array::BeamVector;
use crate::error::{Error, Result};
use crate::family::Family;
use num_complex::Complex64;

/// Improvement below this is treated as a tie during swap descent.
const SWAP_EPS: f64 = 1e-15;

/// Subset quality measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniformityMetric {
    /// Worst per-element deviation from the uniform target `P_t / M`.
    #[default]
    MaxDeviation,
    /// Mean squared per-element deviation from the uniform target.
    Variance,
}

/// Per-element transmit power of a vector set scaled to a power budget.
#[derive(Debug, Clone)]
pub struct PowerProfile {
    per_element: Vec<f64>,
    total_power: f64,
    uniformity: f64,
    variance: f64,
}

impl PowerProfile {
    /// `p_m` for each element; sums to the total power.
    pub fn per_element(&self) -> &[f64] {
        &self.per_element
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    /// Uniform target `P_t / M`.
    pub fn target(&self) -> f64 {
        self.total_power / self.per_element.len() as f64
    }

    /// `max_m |p_m - P_t / M|`.
    pub fn uniformity(&self) -> f64 {
        self.uniformity
    }

    /// `mean_m (p_m - P_t / M)^2`.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn score(&self, metric: UniformityMetric) -> f64 {
        match metric {
            UniformityMetric::MaxDeviation => self.uniformity,
            UniformityMetric::Variance => self.variance,
        }
    }

    fn from_sums(sums: &[f64], set_norm: f64, total_power: f64) -> Self {
        let gamma_sqr = total_power / set_norm;
        let per_element: Vec<f64> = sums.iter().map(|&s| gamma_sqr * s).collect();
        let target = total_power / per_element.len() as f64;
        let uniformity = per_element
            .iter()
            .map(|&p| (p - target).abs())
            .fold(0.0, f64::max);
        let variance = per_element
            .iter()
            .map(|&p| (p - target) * (p - target))
            .sum::<f64>()
            / per_element.len() as f64;
        Self {
            per_element,
            total_power,
            uniformity,
            variance,
        }
    }
}

/// Computes the per-element power of a vector set after the uniform scale
/// that makes the set's total squared norm equal `total_power`.
pub fn power_profile(vectors: &[BeamVector], total_power: f64) -> Result<PowerProfile> {
    if vectors.is_empty() {
        return Err(Error::EmptyVectorSet);
    }
    if !(total_power.is_finite() && total_power > 0.0) {
        return Err(Error::BadTotalPower(total_power));
    }
    let m = vectors[0].len();
    let mut set_norm = 0.0;
    let mut sums = vec![0.0; m];
    for v in vectors {
        vectors[0].check_same_geometry(v)?;
        for (s, w) in sums.iter_mut().zip(v.weights()) {
            let p = w.norm_sqr();
            *s += p;
            set_norm += p;
        }
    }
    if set_norm <= 0.0 {
        // a set of all-zero vectors cannot carry power
        return Err(Error::EmptyVectorSet);
    }
    Ok(PowerProfile::from_sums(&sums, set_norm, total_power))
}

/// Result of subset selection: member indices into the family, the scaled
/// vectors, and the achieved profile.
#[derive(Debug, Clone)]
pub struct Selection {
    indices: Vec<usize>,
    vectors: Vec<BeamVector>,
    profile: PowerProfile,
    exhaustive: bool,
    scale: f64,
}

impl Selection {
    /// Ascending indices into `family.members()`.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Chosen vectors after the common power-normalizing scale.
    pub fn vectors(&self) -> &[BeamVector] {
        &self.vectors
    }

    pub fn profile(&self) -> &PowerProfile {
        &self.profile
    }

    /// Whether every candidate subset was examined.
    pub fn exhaustive(&self) -> bool {
        self.exhaustive
    }

    /// Amplitude scale applied to each chosen vector.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// `C(n, k)` if it does not exceed `cap`.
fn combinations_at_most(n: usize, k: usize, cap: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut count: u128 = 1;
    for i in 0..k {
        count = count * (n - i) as u128 / (i + 1) as u128;
        if count > cap as u128 {
            return None;
        }
    }
    Some(count as u64)
}

struct Scorer {
    /// `profiles[j][m] = |w_jm|^2`
    profiles: Vec<Vec<f64>>,
    norms: Vec<f64>,
    elements: usize,
    total_power: f64,
    metric: UniformityMetric,
}

impl Scorer {
    fn new(family: &Family, total_power: f64, metric: UniformityMetric) -> Self {
        let profiles: Vec<Vec<f64>> = family
            .members()
            .iter()
            .map(|m| m.vector.weights().iter().map(|w| w.norm_sqr()).collect())
            .collect();
        let norms: Vec<f64> = profiles.iter().map(|p| p.iter().sum()).collect();
        let elements = family.mother().len();
        Self {
            profiles,
            norms,
            elements,
            total_power,
            metric,
        }
    }

    fn len(&self) -> usize {
        self.profiles.len()
    }

    fn score_sums(&self, sums: &[f64], set_norm: f64) -> f64 {
        let gamma_sqr = self.total_power / set_norm;
        let target = self.total_power / self.elements as f64;
        match self.metric {
            UniformityMetric::MaxDeviation => sums
                .iter()
                .map(|&s| (gamma_sqr * s - target).abs())
                .fold(0.0, f64::max),
            UniformityMetric::Variance => {
                sums.iter()
                    .map(|&s| {
                        let d = gamma_sqr * s - target;
                        d * d
                    })
                    .sum::<f64>()
                    / self.elements as f64
            }
        }
    }

    fn score_subset(&self, subset: &[usize]) -> f64 {
        let mut sums = vec![0.0; self.elements];
        let mut set_norm = 0.0;
        for &j in subset {
            for (s, p) in sums.iter_mut().zip(&self.profiles[j]) {
                *s += p;
            }
            set_norm += self.norms[j];
        }
        self.score_sums(&sums, set_norm)
    }

    /// Best extension of `current` by one member outside it, scored as if the
    /// extended subset were the final selection.
    fn best_addition(&self, current: &[usize]) -> (usize, f64) {
        let mut sums = vec![0.0; self.elements];
        let mut set_norm = 0.0;
        for &j in current {
            for (s, p) in sums.iter_mut().zip(&self.profiles[j]) {
                *s += p;
            }
            set_norm += self.norms[j];
        }
        let mut best: Option<(f64, usize)> = None;
        let mut cand = vec![0.0; self.elements];
        for j in 0..self.len() {
            if current.contains(&j) {
                continue;
            }
            for ((c, s), p) in cand.iter_mut().zip(&sums).zip(&self.profiles[j]) {
                *c = s + p;
            }
            let score = self.score_sums(&cand, set_norm + self.norms[j]);
            if best.is_none_or(|(bs, _)| score < bs) {
                best = Some((score, j));
            }
        }
        let (score, j) = best.expect("k <= member count leaves a candidate");
        (j, score)
    }

    fn greedy_from(&self, seed: usize, k: usize) -> Vec<usize> {
        let mut current = vec![seed];
        while current.len() < k {
            let (j, _) = self.best_addition(&current);
            current.push(j);
        }
        current
    }

    /// Pairwise swap descent: repeatedly replace one member with the best
    /// outsider while that strictly improves the score.
    fn swap_descent(&self, subset: &mut [usize]) -> f64 {
        let k = subset.len();
        let mut base = self.score_subset(subset);
        if k == self.len() {
            return base;
        }
        loop {
            let mut improved = false;
            for position in 0..k {
                let rest: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != position)
                    .map(|(_, &j)| j)
                    .collect();
                let mut sums = vec![0.0; self.elements];
                let mut set_norm = 0.0;
                for &j in &rest {
                    for (s, p) in sums.iter_mut().zip(&self.profiles[j]) {
                        *s += p;
                    }
                    set_norm += self.norms[j];
                }
                let mut best: Option<(f64, usize)> = None;
                let mut cand = vec![0.0; self.elements];
                for j in 0..self.len() {
                    if subset.contains(&j) {
                        continue;
                    }
                    for ((c, s), p) in cand.iter_mut().zip(&sums).zip(&self.profiles[j]) {
                        *c = s + p;
                    }
                    let score = self.score_sums(&cand, set_norm + self.norms[j]);
                    if best.is_none_or(|(bs, _)| score < bs) {
                        best = Some((score, j));
                    }
                }
                if let Some((score, j)) = best {
                    if score < base - SWAP_EPS {
                        subset[position] = j;
                        base = score;
                        improved = true;
                    }
                }
            }
            if !improved {
                return base;
            }
        }
    }
}

/// Selects the `k`-member subset with the most uniform per-element power.
///
/// All `C(count, k)` subsets are scored when that count fits the budget;
/// otherwise a greedy search seeded from every member (completion by best
/// marginal addition, then pairwise swap descent) picks the best candidate.
/// Deterministic: ties fall to the lexicographically smallest index set.
pub fn select_subset(
    family: &Family,
    k: usize,
    total_power: f64,
    metric: UniformityMetric,
    budget: u64,
) -> Result<Selection> {
    let n = family.distinct_count();
    if k == 0 || k > n {
        return Err(Error::BadSubsetSize { k, available: n });
    }
    if !(total_power.is_finite() && total_power > 0.0) {
        return Err(Error::BadTotalPower(total_power));
    }
    let scorer = Scorer::new(family, total_power, metric);
    let (indices, exhaustive) = match combinations_at_most(n, k, budget) {
        Some(_) => (exhaustive_best(&scorer, k), true),
        None => (heuristic_best(&scorer, k), false),
    };
    let chosen: Vec<BeamVector> = indices
        .iter()
        .map(|&j| family.members()[j].vector.clone())
        .collect();
    let profile = power_profile(&chosen, total_power)?;
    let set_norm: f64 = chosen.iter().map(|v| v.norm_sqr()).sum();
    let scale = (total_power / set_norm).sqrt();
    let vectors: Vec<BeamVector> = chosen
        .iter()
        .map(|v| v.scaled(Complex64::new(scale, 0.0)))
        .collect();
    Ok(Selection {
        indices,
        vectors,
        profile,
        exhaustive,
        scale,
    })
}

fn exhaustive_best(scorer: &Scorer, k: usize) -> Vec<usize> {
    let n = scorer.len();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut best = (scorer.score_subset(&subset), subset.clone());
    loop {
        // next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return best.1;
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..k {
            subset[j] = subset[j - 1] + 1;
        }
        let score = scorer.score_subset(&subset);
        if score < best.0 {
            best = (score, subset.clone());
        }
    }
}

fn heuristic_best(scorer: &Scorer, k: usize) -> Vec<usize> {
    let n = scorer.len();
    let candidates: Vec<(f64, Vec<usize>)> = (0..n)
        .into_par_iter()
        .map(|seed| {
            let mut subset = scorer.greedy_from(seed, k);
            let score = scorer.swap_descent(&mut subset);
            subset.sort_unstable();
            (score, subset)
        })
        .collect();
    candidates
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("family is nonempty")
        .1
}
