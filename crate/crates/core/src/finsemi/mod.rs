//! Finite semigroups as multiplication tables, with the brute-force
//! machinery used as an oracle elsewhere: isomorphism search, Green's
//! relations, idempotent-generated subsemigroups.

mod band;
mod iso;

pub use band::{
    rb_extension_automorphism, BandError, BandIsomorphism, RectangularBand, Subband,
};
pub use iso::{
    brute_force_automorphisms, brute_force_isomorphisms, first_isomorphism, DEFAULT_MAX_ORDER,
};

use fixedbitset::FixedBitSet;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::groups::FiniteGroup;
use crate::table::{associativity_witness, flatten_square, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("order {order} exceeds the search limit {limit}")]
    SizeLimitExceeded { order: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
    zero: Option<usize>,
}

impl FiniteSemigroup {
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, SemigroupError> {
        let (order, flat) = flatten_square(table)?;
        if let Some((a, b, c)) = associativity_witness(order, &flat) {
            return Err(SemigroupError::NotAssociative(a, b, c));
        }
        Ok(Self::from_flat_unchecked(order, flat))
    }

    /// Wraps a flat table whose associativity is guaranteed by construction.
    pub(crate) fn from_flat_unchecked(order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let zero = (0..order).find(|&z| (0..order).all(|x| table[z * order + x] == z && table[x * order + z] == z));
        Self { order, table, zero }
    }

    pub fn from_group(group: &FiniteGroup) -> Self {
        let n = group.order();
        let table = itertools::iproduct!(0..n, 0..n)
            .map(|(a, b)| group.mul(a, b))
            .collect();
        Self::from_flat_unchecked(n, table)
    }

    /// Semigroup on `0..n` with `x*y = op(x, y)`; associativity is checked.
    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self, SemigroupError> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        Self::from_table(&rows)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    #[inline]
    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.is_idempotent(x)).collect()
    }

    pub fn is_band(&self) -> bool {
        self.elements().all(|x| self.is_idempotent(x))
    }

    pub fn is_commutative(&self) -> bool {
        itertools::iproduct!(self.elements(), self.elements()).all(|(a, b)| self.mul(a, b) == self.mul(b, a))
    }

    /// Whether the idempotents form a subsemigroup.
    pub fn idempotents_closed(&self) -> bool {
        let e = self.idempotents();
        itertools::iproduct!(&e, &e).all(|(&a, &b)| self.is_idempotent(self.mul(a, b)))
    }

    /// `e*s` idempotent for an idempotent `e` forces `s` idempotent.
    pub fn is_e_unitary(&self) -> bool {
        let e = self.idempotents();
        itertools::iproduct!(&e, self.elements())
            .all(|(&f, s)| !self.is_idempotent(self.mul(f, s)) || self.is_idempotent(s))
    }

    pub fn is_subsemigroup(&self, subset: &[usize]) -> bool {
        let mut member = FixedBitSet::with_capacity(self.order);
        member.extend(subset.iter().copied());
        itertools::iproduct!(subset, subset).all(|(&a, &b)| member.contains(self.mul(a, b)))
    }

    /// Smallest subsemigroup containing `seed`, as a sorted element list.
    pub fn generated_by(&self, seed: &[usize]) -> Vec<usize> {
        let mut member = FixedBitSet::with_capacity(self.order);
        let mut members: Vec<usize> = Vec::new();
        for &x in seed {
            if !member.put(x) {
                members.push(x);
            }
        }
        // every pair (members[a], members[b]) with max(a, b) < done has been multiplied
        let mut done = 0;
        while done < members.len() {
            let x = members[done];
            let mut k = 0;
            while k <= done {
                let y = members[k];
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !member.put(z) {
                        members.push(z);
                    }
                }
                k += 1;
            }
            done += 1;
        }
        members.sort_unstable();
        members
    }

    /// The subsemigroup generated by all idempotents.
    pub fn idempotent_generated(&self) -> Vec<usize> {
        self.generated_by(&self.idempotents())
    }

    /// Principal right ideal `x S^1` as a bitset.
    pub fn right_ideal(&self, x: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.order);
        set.insert(x);
        set.extend(self.elements().map(|s| self.mul(x, s)));
        set
    }

    /// Principal left ideal `S^1 x` as a bitset.
    pub fn left_ideal(&self, x: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.order);
        set.insert(x);
        set.extend(self.elements().map(|s| self.mul(s, x)));
        set
    }

    pub fn green_r(&self) -> Vec<Vec<usize>> {
        classes_by_key(self.elements().map(|x| self.right_ideal(x)))
    }

    pub fn green_l(&self) -> Vec<Vec<usize>> {
        classes_by_key(self.elements().map(|x| self.left_ideal(x)))
    }

    /// H-classes: `a H b` iff `a S^1 = b S^1` and `S^1 a = S^1 b`.
    pub fn green_h(&self) -> Vec<Vec<usize>> {
        classes_by_key(self.elements().map(|x| (self.left_ideal(x), self.right_ideal(x))))
    }

    /// The H-class of each element, as an index into [`Self::green_h`].
    pub fn h_class_of(&self) -> Vec<usize> {
        class_index(self.order, &self.green_h())
    }

    /// Componentwise product; `(s, t)` is element `s * |T| + t`.
    pub fn direct_product(s: &FiniteSemigroup, t: &FiniteSemigroup) -> FiniteSemigroup {
        let n = s.order * t.order;
        let split = |x: usize| (x / t.order, x % t.order);
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (s1, t1) = split(x);
            for y in 0..n {
                let (s2, t2) = split(y);
                table.push(s.mul(s1, s2) * t.order + t.mul(t1, t2));
            }
        }
        FiniteSemigroup::from_flat_unchecked(n, table)
    }

    /// Whether `map` is a multiplicative bijection onto `target`.
    pub fn is_isomorphism(&self, target: &FiniteSemigroup, map: &[usize]) -> bool {
        if map.len() != self.order || target.order != self.order {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(self.order);
        if map.iter().any(|&y| y >= self.order || seen.put(y)) {
            return false;
        }
        itertools::iproduct!(self.elements(), self.elements())
            .all(|(a, b)| map[self.mul(a, b)] == target.mul(map[a], map[b]))
    }
}

/// Groups `0..n` by key; classes are ordered by least element.
pub(crate) fn classes_by_key<K: Ord>(keys: impl Iterator<Item = K>) -> Vec<Vec<usize>> {
    let mut by_key: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (x, key) in keys.enumerate() {
        by_key.entry(key).or_default().push(x);
    }
    let mut classes: Vec<Vec<usize>> = by_key.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Inverse lookup for a partition of `0..n`.
pub(crate) fn class_index(n: usize, classes: &[Vec<usize>]) -> Vec<usize> {
    let mut index = vec![usize::MAX; n];
    for (k, class) in classes.iter().enumerate() {
        for &x in class {
            index[x] = k;
        }
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two_band() -> FiniteSemigroup {
        RectangularBand::new(2, 2).unwrap().to_semigroup()
    }

    #[test]
    fn construction() {
        let t = FiniteSemigroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.zero(), Some(0));
        let b = two_by_two_band();
        assert_eq!(b.idempotents().len(), 4);
        assert_eq!(b.zero(), None);
        assert!(matches!(
            FiniteSemigroup::from_table(&[vec![0, 0], vec![1, 0]]),
            Err(SemigroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn idempotent_generated_examples() {
        let b = two_by_two_band();
        assert_eq!(b.idempotent_generated(), vec![0, 1, 2, 3]);
        let z2 = FiniteSemigroup::from_group(&FiniteGroup::cyclic(2));
        assert_eq!(z2.idempotent_generated(), vec![0]);
    }

    #[test]
    fn idempotent_generated_is_closed_and_stable() {
        let s = FiniteSemigroup::from_fn(6, |a, b| if a == 0 || b == 0 { 0 } else { (a * b) % 7 % 6 }).ok();
        // fall back to a known semigroup when the arithmetic table above is not associative
        let s = s.unwrap_or_else(two_by_two_band);
        let e = s.idempotent_generated();
        assert!(s.is_subsemigroup(&e));
        assert_eq!(s.generated_by(&e), e);
    }

    #[test]
    fn green_h_examples() {
        let z3 = FiniteSemigroup::from_group(&FiniteGroup::cyclic(3));
        assert_eq!(z3.green_h(), vec![vec![0, 1, 2]]);
        let b = two_by_two_band();
        assert_eq!(b.green_h(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(b.green_r(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(b.green_l(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn direct_products() {
        let b = two_by_two_band();
        let trivial = FiniteSemigroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(FiniteSemigroup::direct_product(&b, &trivial), b);

        let left_zero = RectangularBand::new(2, 1).unwrap().to_semigroup();
        let right_zero = RectangularBand::new(1, 3).unwrap().to_semigroup();
        assert_eq!(
            FiniteSemigroup::direct_product(&left_zero, &right_zero),
            RectangularBand::new(2, 3).unwrap().to_semigroup()
        );

        // Z_2 x (2-chain): a Clifford semigroup with two idempotents
        let chain = FiniteSemigroup::from_fn(2, |a, b| a.min(b)).unwrap();
        let z2 = FiniteSemigroup::from_group(&FiniteGroup::cyclic(2));
        let c = FiniteSemigroup::direct_product(&z2, &chain);
        assert_eq!(c.order(), 4);
        assert_eq!(c.idempotents(), vec![0, 1]);
        assert!(c.is_commutative());
    }

    #[test]
    fn e_unitary() {
        let z2 = FiniteSemigroup::from_group(&FiniteGroup::cyclic(2));
        let chain = FiniteSemigroup::from_fn(2, |a, b| a.min(b)).unwrap();
        assert!(FiniteSemigroup::direct_product(&z2, &chain).is_e_unitary());
        // Z_2 with a zero adjoined: 0 * s is idempotent for non-idempotent s
        let z2_zero = FiniteSemigroup::from_fn(3, |a, b| if a == 2 || b == 2 { 2 } else { (a + b) % 2 }).unwrap();
        assert!(!z2_zero.is_e_unitary());
    }
}
