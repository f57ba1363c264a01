//! Rectangular bands `L x R` with `(l, r)(l', r') = (l, r')`, their
//! isomorphisms `phi_L x phi_R`, and automorphisms of set extensions by
//! subrectangular bands.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::FiniteSemigroup;
use crate::tuples::equality_pattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BandError {
    #[error("rectangular band sides must be nonempty")]
    EmptySide,
    #[error("element ({0}, {1}) lies outside the band")]
    OutOfRange(usize, usize),
    #[error("subset is not a subrectangular band: missing ({0}, {1})")]
    NotSubband(usize, usize),
    #[error("condition ({condition}) fails at tuple position {position}")]
    ConditionViolated { condition: u8, position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectangularBand {
    left: usize,
    right: usize,
}

impl RectangularBand {
    pub fn new(left: usize, right: usize) -> Result<Self, BandError> {
        if left == 0 || right == 0 {
            return Err(BandError::EmptySide);
        }
        Ok(Self { left, right })
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn order(&self) -> usize {
        self.left * self.right
    }

    #[inline]
    pub fn element(&self, l: usize, r: usize) -> usize {
        l * self.right + r
    }

    #[inline]
    pub fn coordinates(&self, x: usize) -> (usize, usize) {
        (x / self.right, x % self.right)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.element(x / self.right, y % self.right)
    }

    pub fn to_semigroup(&self) -> FiniteSemigroup {
        let n = self.order();
        let table = itertools::iproduct!(0..n, 0..n).map(|(x, y)| self.mul(x, y)).collect();
        FiniteSemigroup::from_flat_unchecked(n, table)
    }

    fn check(&self, l: usize, r: usize) -> Result<(), BandError> {
        if l >= self.left || r >= self.right {
            return Err(BandError::OutOfRange(l, r));
        }
        Ok(())
    }
}

/// An isomorphism `phi_L x phi_R` between rectangular bands.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BandIsomorphism {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BandIsomorphism {
    pub fn element_map(&self) -> Vec<usize> {
        let right = self.right.len();
        itertools::iproduct!(&self.left, &self.right).map(|(&l, &r)| l * right + r).collect()
    }

    /// Splits an element bijection of `L x R` into its two side bijections,
    /// if it has that shape.
    pub fn from_element_map(band: &RectangularBand, map: &[usize]) -> Option<Self> {
        if map.len() != band.order() {
            return None;
        }
        let left: Vec<usize> = (0..band.left).map(|l| band.coordinates(map[band.element(l, 0)]).0).collect();
        let right: Vec<usize> = (0..band.right).map(|r| band.coordinates(map[band.element(0, r)]).1).collect();
        let candidate = Self { left, right };
        (candidate.element_map() == map && is_permutation(&candidate.left) && is_permutation(&candidate.right)).then_some(candidate)
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// A subrectangular band `B^L x B^R` of a rectangular band.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subband {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Subband {
    pub fn new(band: &RectangularBand, mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self, BandError> {
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        if left.is_empty() || right.is_empty() {
            return Err(BandError::EmptySide);
        }
        for &l in &left {
            band.check(l, 0)?;
        }
        for &r in &right {
            band.check(0, r)?;
        }
        Ok(Self { left, right })
    }

    /// Accepts a set of `(l, r)` pairs closed under the band product, which
    /// is then exactly the product of its two projections.
    pub fn from_pairs(band: &RectangularBand, pairs: &[(usize, usize)]) -> Result<Self, BandError> {
        for &(l, r) in pairs {
            band.check(l, r)?;
        }
        let sub = Self::new(band, pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())?;
        for (&l, &r) in itertools::iproduct!(&sub.left, &sub.right) {
            if !pairs.contains(&(l, r)) {
                return Err(BandError::NotSubband(l, r));
            }
        }
        Ok(sub)
    }

    pub fn contains(&self, l: usize, r: usize) -> bool {
        self.left.binary_search(&l).is_ok() && self.right.binary_search(&r).is_ok()
    }

    pub fn elements(&self, band: &RectangularBand) -> Vec<usize> {
        itertools::iproduct!(&self.left, &self.right).map(|(&l, &r)| band.element(l, r)).collect()
    }
}

/// Membership fingerprint of each point across the given side sets; equal
/// fingerprints are the classes of sigma.
fn sigma_fingerprints(size: usize, sides: &[&[usize]]) -> Vec<Vec<bool>> {
    (0..size)
        .map(|x| sides.iter().map(|side| side.binary_search(&x).is_ok()).collect())
        .collect()
}

/// Extends the partial side map `src[s] -> dst[s]` to a permutation fixing
/// each fingerprint class: within a class, unmatched points are paired in
/// increasing order, so untouched classes are fixed pointwise.
fn extend_side(fingerprint: &[Vec<bool>], src: &[usize], dst: &[usize]) -> Vec<usize> {
    let n = fingerprint.len();
    let mut map = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for (&a, &b) in src.iter().zip(dst) {
        map[a] = b;
        hit[b] = true;
    }
    let mut classes: BTreeMap<&[bool], (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for x in 0..n {
        let entry = classes.entry(fingerprint[x].as_slice()).or_default();
        if map[x] == usize::MAX {
            entry.0.push(x);
        }
        if !hit[x] {
            entry.1.push(x);
        }
    }
    for (free_src, free_dst) in classes.values() {
        for (&a, &b) in free_src.iter().zip(free_dst) {
            map[a] = b;
        }
    }
    map
}

/// Builds an automorphism of `(B; B_1, ..., B_r)` sending `partial[s].0` to
/// `partial[s].1`, as `Phi_L x Phi_R` with each side map preserving the
/// sigma classes. Conditions are checked in order:
/// (1) sigma_L agreement, (2) sigma_R agreement, (3) equality pattern of the
/// left coordinates, (4) equality pattern of the right coordinates.
pub fn rb_extension_automorphism(
    band: &RectangularBand,
    subbands: &[Subband],
    partial: &[((usize, usize), (usize, usize))],
) -> Result<BandIsomorphism, BandError> {
    for &((i, j), (k, l)) in partial {
        band.check(i, j)?;
        band.check(k, l)?;
    }
    let left_sides: Vec<&[usize]> = subbands.iter().map(|b| b.left.as_slice()).collect();
    let right_sides: Vec<&[usize]> = subbands.iter().map(|b| b.right.as_slice()).collect();
    let sigma_l = sigma_fingerprints(band.left, &left_sides);
    let sigma_r = sigma_fingerprints(band.right, &right_sides);

    let violated = |condition: u8, position: usize| BandError::ConditionViolated { condition, position };
    if let Some(s) = partial.iter().position(|&((i, _), (k, _))| sigma_l[i] != sigma_l[k]) {
        return Err(violated(1, s));
    }
    if let Some(s) = partial.iter().position(|&((_, j), (_, l))| sigma_r[j] != sigma_r[l]) {
        return Err(violated(2, s));
    }
    let src_l: Vec<usize> = partial.iter().map(|p| p.0 .0).collect();
    let src_r: Vec<usize> = partial.iter().map(|p| p.0 .1).collect();
    let dst_l: Vec<usize> = partial.iter().map(|p| p.1 .0).collect();
    let dst_r: Vec<usize> = partial.iter().map(|p| p.1 .1).collect();
    if let Some(s) = first_pattern_mismatch(&src_l, &dst_l) {
        return Err(violated(3, s));
    }
    if let Some(s) = first_pattern_mismatch(&src_r, &dst_r) {
        return Err(violated(4, s));
    }
    Ok(BandIsomorphism {
        left: extend_side(&sigma_l, &src_l, &dst_l),
        right: extend_side(&sigma_r, &src_r, &dst_r),
    })
}

fn first_pattern_mismatch(a: &[usize], b: &[usize]) -> Option<usize> {
    let pa = equality_pattern(a);
    let pb = equality_pattern(b);
    pa.iter().zip(&pb).position(|(x, y)| x != y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    #[test]
    fn band_axioms() {
        let b = RectangularBand::new(2, 3).unwrap();
        let s = b.to_semigroup();
        assert!(s.is_band());
        for (x, y) in itertools::iproduct!(0..6, 0..6) {
            let (l, _) = b.coordinates(x);
            let (_, r) = b.coordinates(y);
            assert_eq!(b.coordinates(s.mul(x, y)), (l, r));
        }
        assert_eq!(RectangularBand::new(0, 2), Err(BandError::EmptySide));
    }

    #[test]
    fn every_automorphism_splits() {
        let b = RectangularBand::new(2, 3).unwrap();
        let auts = super::super::brute_force_automorphisms(&b.to_semigroup(), 12).unwrap();
        assert_eq!(auts.len(), 2 * 6);
        for map in &auts {
            let split = BandIsomorphism::from_element_map(&b, map).unwrap();
            assert_eq!(split.element_map(), *map);
        }
    }

    #[test]
    fn subband_validation() {
        let b = RectangularBand::new(3, 2).unwrap();
        assert!(Subband::from_pairs(&b, &[(0, 0), (1, 0)]).is_ok());
        assert_eq!(Subband::from_pairs(&b, &[(0, 0), (1, 1)]), Err(BandError::NotSubband(0, 1)));
        assert_eq!(Subband::from_pairs(&b, &[(3, 0)]), Err(BandError::OutOfRange(3, 0)));
    }

    #[test]
    fn unconstrained_match() {
        let b = RectangularBand::new(2, 2).unwrap();
        let phi = rb_extension_automorphism(&b, &[], &[((0, 0), (1, 1))]).unwrap();
        assert_eq!(phi, BandIsomorphism { left: vec![1, 0], right: vec![1, 0] });
    }

    #[test]
    fn subband_is_preserved() {
        let b = RectangularBand::new(3, 2).unwrap();
        let sub = Subband::from_pairs(&b, &[(0, 0), (1, 0)]).unwrap();
        let phi = rb_extension_automorphism(&b, std::slice::from_ref(&sub), &[((0, 0), (1, 0))]).unwrap();
        let map = phi.element_map();
        let mut image: Vec<usize> = sub.elements(&b).iter().map(|&x| map[x]).collect();
        image.sort_unstable();
        assert_eq!(image, sub.elements(&b));
        assert_eq!(map[b.element(0, 0)], b.element(1, 0));
    }

    #[test]
    fn condition_failures_are_named() {
        let b = RectangularBand::new(3, 2).unwrap();
        let sub = Subband::from_pairs(&b, &[(0, 0), (1, 0)]).unwrap();
        let subs = std::slice::from_ref(&sub);
        let err = |c, p| Err(BandError::ConditionViolated { condition: c, position: p });
        assert_eq!(rb_extension_automorphism(&b, subs, &[((0, 0), (2, 0))]), err(1, 0));
        assert_eq!(rb_extension_automorphism(&b, subs, &[((0, 0), (0, 1))]), err(2, 0));
        assert_eq!(rb_extension_automorphism(&b, subs, &[((0, 1), (0, 1)), ((1, 1), (0, 1))]), err(3, 1));
        let wide = RectangularBand::new(3, 3).unwrap();
        let sub = Subband::from_pairs(&wide, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(
            rb_extension_automorphism(&wide, &[sub], &[((0, 1), (0, 1)), ((0, 1), (0, 2))]),
            err(4, 1)
        );
    }

    fn band_with_subbands() -> impl Strategy<Value = (RectangularBand, Vec<Subband>)> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(l, r)| {
            let band = RectangularBand::new(l, r).unwrap();
            let side = |n: usize| proptest::sample::subsequence((0..n).collect_vec(), 1..=n);
            proptest::collection::vec((side(l), side(r)), 0..=3).prop_map(move |sides| {
                let subs = sides.into_iter().map(|(a, b)| Subband::new(&band, a, b).unwrap()).collect();
                (band, subs)
            })
        })
    }

    proptest! {
        /// Targets are images of the sources under a random automorphism of
        /// the extension, so all four conditions hold by construction.
        #[test]
        fn extension_fixes_subbands_and_extends(
            (band, subs) in band_with_subbands(),
            picks in proptest::collection::vec((0usize..16, 0usize..16), 0..4),
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let left_sides: Vec<&[usize]> = subs.iter().map(|b| b.left.as_slice()).collect();
            let right_sides: Vec<&[usize]> = subs.iter().map(|b| b.right.as_slice()).collect();
            let shuffle_classes = |fp: Vec<Vec<bool>>, rng: &mut rand_chacha::ChaCha8Rng| {
                let mut map = (0..fp.len()).collect_vec();
                let classes = (0..fp.len()).into_group_map_by(|&x| fp[x].clone());
                for class in classes.values() {
                    let mut shuffled = class.clone();
                    shuffled.shuffle(rng);
                    for (&a, &b) in class.iter().zip(&shuffled) {
                        map[a] = b;
                    }
                }
                map
            };
            let hidden_l = shuffle_classes(sigma_fingerprints(band.left_size(), &left_sides), &mut rng);
            let hidden_r = shuffle_classes(sigma_fingerprints(band.right_size(), &right_sides), &mut rng);
            let partial = picks
                .iter()
                .map(|&(a, b)| {
                    let (l, r) = (a % band.left_size(), b % band.right_size());
                    ((l, r), (hidden_l[l], hidden_r[r]))
                })
                .collect_vec();

            let phi = rb_extension_automorphism(&band, &subs, &partial).unwrap();
            let map = phi.element_map();
            prop_assert!(band.to_semigroup().is_isomorphism(&band.to_semigroup(), &map));
            for sub in &subs {
                let mut image = sub.elements(&band).iter().map(|&x| map[x]).collect_vec();
                image.sort_unstable();
                prop_assert_eq!(image, sub.elements(&band));
            }
            for &((l, r), (k, m)) in &partial {
                prop_assert_eq!(map[band.element(l, r)], band.element(k, m));
            }
        }
    }
}
