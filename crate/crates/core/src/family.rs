//! Enumeration of all beamforming vectors sharing one beampattern.
//!
//! Every subset of the `M - 1` beam polynomial roots yields a
//! pattern-equivalent vector, so a mother vector generates up to `2^(M-1)`
//! members. Roots on the unit circle are flip fixed points and collapse the
//! count to `2^k` where `k` is the number of off-circle roots; enumeration
//! deduplicates members numerically rather than trusting a circle
//! classification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::array::BeamVector;
use crate::error::{Error, Result};
use crate::rootspace::{self, FlipMask, RootFactorization};
use crate::tolerances::{DEDUP_REL, ENUM_CAP_ELEMENTS};

/// One distinct family member: the smallest flip mask producing it and the
/// canonical weight vector.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub mask: FlipMask,
    pub vector: BeamVector,
}

/// All distinct pattern-equivalent vectors generated from one mother vector.
#[derive(Debug, Clone)]
pub struct Family {
    mother: BeamVector,
    members: Vec<FamilyMember>,
}

impl Family {
    /// The vector the family was generated from (not canonicalized).
    pub fn mother(&self) -> &BeamVector {
        &self.mother
    }

    /// Distinct members ordered by flip mask bits; the first is the
    /// canonical mother (empty mask).
    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn distinct_count(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn from_parts(mother: BeamVector, members: Vec<FamilyMember>) -> Self {
        Self { mother, members }
    }
}

/// Controls for family enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerateOptions {
    /// When set, draw this many random masks (always including the empty and
    /// all-ones masks) instead of the full `2^(M-1)` sweep. Required for
    /// arrays wider than the enumeration cap.
    pub sample: Option<usize>,
    /// Seed for mask sampling; unused for full sweeps.
    pub seed: u64,
}

/// Enumerates the pattern-equivalent family of `w` and deduplicates members.
///
/// Full sweeps cover all `2^(M-1)` masks and are capped at `M = 24` elements;
/// wider arrays must set [`EnumerateOptions::sample`].
pub fn enumerate_family(w: &BeamVector, options: &EnumerateOptions) -> Result<Family> {
    let factorization = rootspace::factorize(w)?;
    let n = factorization.roots().len();
    let masks: Vec<u64> = match options.sample {
        None => {
            if w.len() > ENUM_CAP_ELEMENTS {
                return Err(Error::FamilyTooLarge {
                    exponent: n,
                    cap: ENUM_CAP_ELEMENTS,
                });
            }
            (0..(1u64 << n)).collect()
        }
        Some(count) => sample_masks(n, count, options.seed),
    };
    let generated: Vec<(u64, BeamVector)> = masks
        .par_iter()
        .map(|&bits| {
            let member = rootspace::flip(&factorization, &FlipMask::from_bits(bits, n))?;
            Ok((bits, member))
        })
        .collect::<Result<_>>()?;
    let members = deduplicate(&generated, w.norm(), n);
    Ok(Family {
        mother: w.clone(),
        members,
    })
}

/// Number of distinct members of the family of `w` (full enumeration).
pub fn count_distinct(w: &BeamVector) -> Result<usize> {
    Ok(enumerate_family(w, &EnumerateOptions::default())?.distinct_count())
}

/// Draws `count` distinct masks for an `n`-root polynomial, always seeding
/// the empty and all-ones masks so the canonical mother and its conjugate
/// reversal are represented.
fn sample_masks(n: usize, count: usize, seed: u64) -> Vec<u64> {
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let space = if n >= 63 { u64::MAX } else { 1u64 << n };
    let mut masks = vec![0u64];
    if count > 1 && full != 0 {
        masks.push(full);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = count.max(1).min(usize::try_from(space).unwrap_or(usize::MAX));
    let mut attempts = 0usize;
    while masks.len() < target && attempts < 64 * target {
        attempts += 1;
        let bits = if n >= 63 {
            rng.gen::<u64>() & full
        } else {
            rng.gen_range(0..space)
        };
        if !masks.contains(&bits) {
            masks.push(bits);
        }
    }
    masks.sort_unstable();
    masks
}

/// Collapses numerically equal members (component-wise distance within
/// `1e-6 * ||w||`) into classes represented by their smallest mask.
fn deduplicate(generated: &[(u64, BeamVector)], norm: f64, n: usize) -> Vec<FamilyMember> {
    let tol = DEDUP_REL * norm;
    // Canonical duplicates agree in every component, so they agree in the
    // scalar key; sorting by key turns dedup into a sliding-window sweep.
    let mut order: Vec<usize> = (0..generated.len()).collect();
    let key = |i: usize| generated[i].1.weights()[0].re;
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(generated[a].0.cmp(&generated[b].0)));

    // representative index (into `generated`) and smallest mask per class
    let mut reps: Vec<(usize, u64)> = Vec::new();
    for &i in &order {
        let ki = key(i);
        let mut matched = false;
        for rep in reps.iter_mut().rev() {
            if ki - key(rep.0) > tol {
                break;
            }
            if component_distance(&generated[rep.0].1, &generated[i].1) <= tol {
                if generated[i].0 < rep.1 {
                    *rep = (i, generated[i].0);
                }
                matched = true;
                break;
            }
        }
        if !matched {
            reps.push((i, generated[i].0));
        }
    }

    let mut members: Vec<FamilyMember> = reps
        .into_iter()
        .map(|(i, bits)| {
            debug_assert_eq!(generated[i].0, bits);
            FamilyMember {
                mask: FlipMask::from_bits(bits, n),
                vector: generated[i].1.clone(),
            }
        })
        .collect();
    members.sort_by_key(|m| m.mask.bits());
    members
}

fn component_distance(a: &BeamVector, b: &BeamVector) -> f64 {
    a.weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Exposes the factorization alongside enumeration for callers that need
/// root metadata (e.g. reporting off-circle counts).
pub fn factorization_of(w: &BeamVector) -> Result<RootFactorization> {
    rootspace::factorize(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::ArrayGeometry;
    use crate::autocorr::same_beampattern;
    use crate::rootspace::canonicalize;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geo(m: usize) -> ArrayGeometry {
        ArrayGeometry::new(m, 0.5).unwrap()
    }

    fn bv(weights: &[f64]) -> BeamVector {
        BeamVector::from_real(geo(weights.len()), weights).unwrap()
    }

    fn random_bv(rng: &mut ChaCha8Rng, m: usize) -> BeamVector {
        loop {
            let weights: Vec<Complex64> = (0..m)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let v = BeamVector::new(geo(m), weights).unwrap();
            let norm = v.norm();
            if v.weights()[0].norm() > 1e-2 * norm && v.weights()[m - 1].norm() > 1e-2 * norm {
                return v;
            }
        }
    }

    /// Quadratic-time reference dedup used to validate the windowed sweep.
    fn brute_force_count(w: &BeamVector) -> usize {
        let f = rootspace::factorize(w).unwrap();
        let n = f.roots().len();
        let tol = DEDUP_REL * w.norm();
        let mut distinct: Vec<BeamVector> = Vec::new();
        for bits in 0..(1u64 << n) {
            let member = rootspace::flip(&f, &FlipMask::from_bits(bits, n)).unwrap();
            if !distinct
                .iter()
                .any(|d| component_distance(d, &member) <= tol)
            {
                distinct.push(member);
            }
        }
        distinct.len()
    }

    #[test]
    fn two_taps_have_two_members() {
        let family = enumerate_family(&bv(&[1.0, 2.0]), &EnumerateOptions::default()).unwrap();
        assert_eq!(family.distinct_count(), 2);
        assert_eq!(family.members()[0].mask.bits(), 0);
        assert_eq!(family.members()[1].mask.bits(), 1);
        let w0 = &family.members()[0].vector;
        let w1 = &family.members()[1].vector;
        assert!((w0.weights()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((w1.weights()[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn unit_circle_only_mother_is_a_singleton() {
        // roots of 1 - x^2 sit exactly on the circle
        let family = enumerate_family(&bv(&[1.0, 0.0, -1.0]), &EnumerateOptions::default()).unwrap();
        assert_eq!(family.distinct_count(), 1);
        assert_eq!(family.members()[0].mask.bits(), 0);
    }

    #[test]
    fn mixed_roots_count_only_off_circle_flips() {
        // (x - 2)(x^2 + 1): one off-circle root, two at +-j
        let family = enumerate_family(&bv(&[-2.0, 1.0, -2.0, 1.0]), &EnumerateOptions::default())
            .unwrap();
        assert_eq!(family.distinct_count(), 2);
    }

    #[test]
    fn generic_mother_reaches_full_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [3usize, 5, 8, 10] {
            let w = random_bv(&mut rng, m);
            let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
            assert_eq!(family.distinct_count(), 1 << (m - 1), "m={m}");
        }
    }

    #[test]
    fn windowed_dedup_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in 3usize..=8 {
            let w = random_bv(&mut rng, m);
            let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
            assert_eq!(family.distinct_count(), brute_force_count(&w), "m={m}");
        }
        // and on a degenerate family
        let w = bv(&[1.0, 0.0, -1.0]);
        assert_eq!(count_distinct(&w).unwrap(), brute_force_count(&w));
    }

    #[test]
    fn members_share_pattern_and_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let w = random_bv(&mut rng, 7);
        let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        for member in family.members() {
            assert!(same_beampattern(&w, &member.vector, 1e-9).unwrap());
            assert!((member.vector.norm_sqr() - w.norm_sqr()).abs() <= 1e-9 * w.norm_sqr());
        }
    }

    #[test]
    fn members_are_pairwise_distinct_and_mask_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let w = random_bv(&mut rng, 6);
        let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        let tol = DEDUP_REL * w.norm();
        let members = family.members();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                assert!(component_distance(&members[i].vector, &members[j].vector) > tol);
            }
        }
        for pair in members.windows(2) {
            assert!(pair[0].mask.bits() < pair[1].mask.bits());
        }
    }

    #[test]
    fn empty_mask_member_is_canonical_mother() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let w = random_bv(&mut rng, 5);
        let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        let canon = canonicalize(&w);
        for (a, b) in family.members()[0].vector.weights().iter().zip(canon.weights()) {
            assert!((a - b).norm() <= 1e-9 * w.norm());
        }
    }

    #[test]
    fn full_mask_member_is_canonical_conjugate_reversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let w = random_bv(&mut rng, 6);
        let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        let full = family
            .members()
            .iter()
            .find(|m| m.mask.bits() == (1u64 << 5) - 1)
            .expect("generic family retains the all-ones mask");
        let reversed = BeamVector::new(
            w.geometry(),
            w.weights().iter().rev().map(|x| x.conj()).collect(),
        )
        .unwrap();
        let target = canonicalize(&reversed);
        for (a, b) in full.vector.weights().iter().zip(target.weights()) {
            assert!((a - b).norm() <= 1e-8 * w.norm());
        }
    }

    #[test]
    fn full_sweep_above_cap_is_rejected_but_sampling_works() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let w = random_bv(&mut rng, ENUM_CAP_ELEMENTS + 1);
        assert!(matches!(
            enumerate_family(&w, &EnumerateOptions::default()),
            Err(Error::FamilyTooLarge { .. })
        ));
        let family = enumerate_family(
            &w,
            &EnumerateOptions {
                sample: Some(40),
                seed: 1,
            },
        )
        .unwrap();
        assert!(family.distinct_count() <= 40);
        assert!(family.distinct_count() >= 2);
        assert_eq!(family.members()[0].mask.bits(), 0);
        for member in family.members() {
            assert!(same_beampattern(&w, &member.vector, 1e-8).unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let w = random_bv(&mut rng, 12);
        let opts = EnumerateOptions {
            sample: Some(16),
            seed: 99,
        };
        let a = enumerate_family(&w, &opts).unwrap();
        let b = enumerate_family(&w, &opts).unwrap();
        assert_eq!(a.distinct_count(), b.distinct_count());
        for (x, y) in a.members().iter().zip(b.members()) {
            assert_eq!(x.mask, y.mask);
            assert_eq!(x.vector.weights(), y.vector.weights());
        }
        let c = enumerate_family(
            &w,
            &EnumerateOptions {
                sample: Some(16),
                seed: 100,
            },
        )
        .unwrap();
        assert_ne!(
            a.members().iter().map(|m| m.mask.bits()).collect::<Vec<_>>(),
            c.members().iter().map(|m| m.mask.bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn full_sweep_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let w = random_bv(&mut rng, 8);
        let a = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        let b = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        for (x, y) in a.members().iter().zip(b.members()) {
            assert_eq!(x.mask, y.mask);
            assert_eq!(x.vector.weights(), y.vector.weights());
        }
    }

    #[test]
    fn sample_mask_generation_includes_anchors() {
        let masks = sample_masks(10, 8, 5);
        assert!(masks.contains(&0));
        assert!(masks.contains(&((1u64 << 10) - 1)));
        assert_eq!(masks.len(), 8);
        let mut unique = masks.clone();
        unique.dedup();
        assert_eq!(unique.len(), masks.len());
        // request larger than space: saturates
        let all = sample_masks(2, 100, 5);
        assert_eq!(all, vec![0, 1, 2, 3]);
    }
}
