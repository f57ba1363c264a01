//! Binary relations on `0..n`, used for the equivalences on component
//! index sets and semilattices.

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    pairs: FixedBitSet,
}

impl Relation {
    pub fn from_fn(n: usize, related: impl Fn(usize, usize) -> bool) -> Self {
        let mut pairs = FixedBitSet::with_capacity(n * n);
        for (a, b) in itertools::iproduct!(0..n, 0..n) {
            pairs.set(a * n + b, related(a, b));
        }
        Self { n, pairs }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(a * self.n + b)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        itertools::iproduct!(0..self.n, 0..self.n).all(|(a, b)| self.contains(a, b) == self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        itertools::iproduct!(0..self.n, 0..self.n, 0..self.n)
            .all(|(a, b, c)| !(self.contains(a, b) && self.contains(b, c)) || self.contains(a, c))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.n == other.n && self.pairs.is_subset(&other.pairs)
    }

    /// Classes of an equivalence, ordered by least element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.n {
            match classes.iter_mut().find(|c| self.contains(c[0], a)) {
                Some(c) => c.push(a),
                None => classes.push(vec![a]),
            }
        }
        classes
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, usize)> =
            itertools::iproduct!(0..self.n, 0..self.n).filter(|&(a, b)| self.contains(a, b)).collect();
        pairs.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_is_an_equivalence() {
        let r = Relation::from_fn(5, |a, b| a % 2 == b % 2);
        assert!(r.is_equivalence());
        assert_eq!(r.classes(), vec![vec![0, 2, 4], vec![1, 3]]);
        let eq = Relation::from_fn(5, |a, b| a == b);
        assert!(eq.is_subset_of(&r));
        assert!(!r.is_subset_of(&eq));
    }

    #[test]
    fn order_is_not_symmetric() {
        let r = Relation::from_fn(3, |a, b| a <= b);
        assert!(r.is_reflexive() && r.is_transitive());
        assert!(!r.is_symmetric());
    }
}
