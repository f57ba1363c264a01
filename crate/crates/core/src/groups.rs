//! Finite groups given by Cayley tables.
//!
//! Elements are the indices `0..order`. The identity is always element `0`:
//! [`FiniteGroup::from_table`] relabels the table when the identity sits
//! elsewhere, so every file and matrix format can use `0` for the identity.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

use crate::table::{associativity_witness, flatten_square, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
}

/// A finite group stored as a row-major Cayley table with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from its Cayley table, checking every axiom exhaustively.
    ///
    /// If the identity is some element `e != 0`, the labels `0` and `e` are
    /// swapped so that the returned group has identity `0`.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let (order, mut flat) = flatten_square(table)?;
        let mul = |t: &[usize], a: usize, b: usize| t[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(&flat, e, x) == x && mul(&flat, x, e) == x))
            .ok_or(GroupError::NoIdentity)?;

        if identity != 0 {
            let swap = |x: usize| {
                if x == 0 {
                    identity
                } else if x == identity {
                    0
                } else {
                    x
                }
            };
            let mut relabelled = vec![0; order * order];
            for a in 0..order {
                for b in 0..order {
                    relabelled[swap(a) * order + swap(b)] = swap(mul(&flat, a, b));
                }
            }
            flat = relabelled;
        }

        let mut inverses = Vec::with_capacity(order);
        for x in 0..order {
            let inv = (0..order)
                .find(|&y| mul(&flat, x, y) == 0 && mul(&flat, y, x) == 0)
                .ok_or(GroupError::NoInverse(x))?;
            inverses.push(inv);
        }

        if let Some((a, b, c)) = associativity_witness(order, &flat) {
            return Err(GroupError::NotAssociative(a, b, c));
        }

        Ok(Self {
            order,
            table: flat,
            inverses,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group `Z_n` with `k` standing for the residue `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a + b) % n))
            .collect();
        let inverses = (0..n).map(|a| (n - a) % n).collect();
        Self {
            order: n,
            table,
            inverses,
        }
    }

    /// Direct product `G x H`; the pair `(g, h)` is element `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let n = g.order * h.order;
        let split = |x: usize| (x / h.order, x % h.order);
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (g1, h1) = split(x);
            for y in 0..n {
                let (g2, h2) = split(y);
                table.push(g.mul(g1, g2) * h.order + h.mul(h1, h2));
            }
        }
        let inverses = (0..n)
            .map(|x| {
                let (g1, h1) = split(x);
                g.inv(g1) * h.order + h.inv(h1)
            })
            .collect();
        Self {
            order: n,
            table,
            inverses,
        }
    }

    /// `Z_2 x Z_2`.
    pub fn klein() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    /// The symmetric group on `n` points; permutations are listed in
    /// lexicographic order of their image vectors, so the identity is `0`.
    pub fn symmetric(n: usize) -> Self {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for p in &perms {
            for q in &perms {
                // apply p first, then q
                let pq: Vec<usize> = p.iter().map(|&x| q[x]).collect();
                table.push(index(&pq));
            }
        }
        let inverses = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; n];
                for (i, &x) in p.iter().enumerate() {
                    inv[x] = i;
                }
                index(&inv)
            })
            .collect();
        Self {
            order,
            table,
            inverses,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .tuple_combinations()
            .all(|(a, b)| self.mul(a, b) == self.mul(b, a))
    }

    /// Order of the element `a`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Greedy generating set: repeatedly add the least element not yet generated.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut generated = vec![false; self.order];
        generated[0] = true;
        while let Some(x) = generated.iter().position(|&g| !g) {
            gens.push(x);
            let mut frontier: Vec<usize> = (0..self.order).filter(|&y| generated[y]).collect();
            while let Some(y) = frontier.pop() {
                for &g in &gens {
                    let z = self.mul(y, g);
                    if !generated[z] {
                        generated[z] = true;
                        frontier.push(z);
                    }
                }
            }
        }
        gens
    }
}

/// A map between the element sets of two groups, `images[x]` being the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupMap {
    pub images: Vec<usize>,
}

impl GroupMap {
    pub fn identity(order: usize) -> Self {
        Self {
            images: (0..order).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        self.images.len() == source.order()
            && self.images.iter().all(|&y| y < target.order())
            && itertools::iproduct!(source.elements(), source.elements()).all(|(x, y)| {
                self.apply(source.mul(x, y)) == target.mul(self.apply(x), self.apply(y))
            })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_isomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        source.order() == target.order() && self.is_bijective() && self.is_homomorphism(source, target)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupMap) -> GroupMap {
        GroupMap {
            images: self.images.iter().map(|&x| next.apply(x)).collect(),
        }
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> GroupMap {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        GroupMap { images }
    }
}

/// All isomorphisms `source -> target`, sorted by image vector.
///
/// Backtracks over images of a generating set of `source`; each assignment
/// is propagated along words in the generators and rejected on the first
/// conflict.
pub fn group_isomorphisms(source: &FiniteGroup, target: &FiniteGroup) -> Vec<GroupMap> {
    if source.order() != target.order() {
        return Vec::new();
    }
    let gens = source.generators();
    let target_orders: Vec<usize> = target.elements().map(|x| target.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = source.element_order(g);
            target.elements().filter(|&y| target_orders[y] == k).collect()
        })
        .collect();

    let mut found = Vec::new();
    for choice in candidates.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
        if let Some(map) = extend_from_generators(source, target, &gens, &choice) {
            found.push(map);
        }
    }
    // multi_cartesian_product yields nothing for an empty generator list
    if gens.is_empty() {
        found.push(GroupMap::identity(source.order()));
    }
    found.sort();
    found.dedup();
    found
}

/// Extends `gens[k] -> images[k]` to a homomorphism and keeps it if bijective.
fn extend_from_generators(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<GroupMap> {
    let n = source.order();
    let mut map: Vec<Option<usize>> = vec![None; n];
    map[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].expect("queued elements are mapped");
        for (&g, &fg) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let fy = target.mul(fx, fg);
            match map[y] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    let map = GroupMap {
        images: map.into_iter().collect::<Option<Vec<_>>>()?,
    };
    (map.is_bijective() && map.is_homomorphism(source, target)).then_some(map)
}

/// `Aut(G)`, identity first.
pub fn group_automorphisms(group: &FiniteGroup) -> Vec<GroupMap> {
    group_isomorphisms(group, group)
}

/// Reference enumeration: every bijection of the carrier, kept if it is a
/// homomorphism. Only sensible for small orders.
pub fn automorphisms_by_bijection_scan(group: &FiniteGroup) -> Vec<GroupMap> {
    let n = group.order();
    (0..n)
        .permutations(n)
        .map(|images| GroupMap { images })
        .filter(|m| m.is_homomorphism(group, group))
        .collect()
}

pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    !group_isomorphisms(a, b).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_cyclic_tables() {
        let g = FiniteGroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let z2 = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2, FiniteGroup::cyclic(2));
    }

    #[test]
    fn semilattice_table_is_rejected() {
        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse(1))
        );
    }

    #[test]
    fn identity_is_relabelled_to_zero() {
        // Z_3 written with identity 2
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table(&t).unwrap();
        assert!(g.elements().all(|x| g.mul(0, x) == x && g.mul(x, 0) == x));
        assert!(are_isomorphic(&g, &FiniteGroup::cyclic(3)));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(
            FiniteGroup::from_table(&[]),
            Err(GroupError::Table(TableError::Empty))
        );
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1]]),
            Err(GroupError::Table(TableError::NotSquare { row: 1, .. }))
        ));
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 2], vec![1, 0]]),
            Err(GroupError::Table(TableError::EntryOutOfRange { value: 2, .. }))
        ));
        assert_eq!(
            FiniteGroup::from_table(&[vec![1, 1], vec![1, 1]]),
            Err(GroupError::NoIdentity)
        );
    }

    #[test]
    fn non_associative_loop_is_rejected() {
        // a Latin square with identity 0 and inverses, but not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(&t),
            Err(GroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(group_automorphisms(&FiniteGroup::cyclic(2)).len(), 1);
        assert_eq!(group_automorphisms(&FiniteGroup::klein()).len(), 6);
        assert_eq!(group_automorphisms(&FiniteGroup::cyclic(5)).len(), 4);
        assert_eq!(group_automorphisms(&FiniteGroup::symmetric(3)).len(), 6);
    }

    #[test]
    fn structured_matches_bijection_scan() {
        let groups = [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(4),
            FiniteGroup::klein(),
            FiniteGroup::cyclic(5),
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric(3),
        ];
        for g in &groups {
            let fast = group_automorphisms(g);
            assert_eq!(fast, automorphisms_by_bijection_scan(g), "order {}", g.order());
            assert_eq!(fast[0], GroupMap::identity(g.order()));
        }
    }

    #[test]
    fn automorphisms_form_a_group() {
        for g in [FiniteGroup::klein(), FiniteGroup::cyclic(8), FiniteGroup::symmetric(3)] {
            let auts = group_automorphisms(&g);
            for a in &auts {
                assert!(auts.contains(&a.inverse()));
                for b in &auts {
                    assert!(auts.contains(&a.then(b)));
                }
            }
        }
    }

    #[test]
    fn isomorphisms_between_presentations() {
        let z6 = FiniteGroup::cyclic(6);
        let z2z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert_eq!(group_isomorphisms(&z6, &z2z3).len(), 2);
        assert!(group_isomorphisms(&FiniteGroup::cyclic(4), &FiniteGroup::klein()).is_empty());
        assert!(group_isomorphisms(&z6, &FiniteGroup::symmetric(3)).is_empty());
    }
}
