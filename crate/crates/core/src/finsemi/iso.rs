//! Exhaustive isomorphism search between multiplication tables.
//!
//! Elements are bound in index order. Each binding is closed under products
//! with everything already bound, so the search branches only on elements
//! outside the subsemigroup generated by earlier choices.

use std::collections::BTreeMap;

use super::{FiniteSemigroup, SemigroupError};

pub const DEFAULT_MAX_ORDER: usize = 12;

const UNSET: usize = usize::MAX;

/// Isomorphism-invariant data attached to each element; only elements with
/// equal keys may correspond.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ElementKey {
    idempotent: bool,
    in_idempotent_generated: bool,
    h_class_size: usize,
    right_ideal: usize,
    left_ideal: usize,
    index: usize,
    period: usize,
    left_identities: usize,
    right_identities: usize,
    absorbed: usize,
}

fn element_keys(s: &FiniteSemigroup) -> Vec<ElementKey> {
    let h = s.green_h();
    let h_of = super::class_index(s.order(), &h);
    let mut in_e = vec![false; s.order()];
    for x in s.idempotent_generated() {
        in_e[x] = true;
    }
    s.elements()
        .map(|x| {
            let (index, period) = monogenic_shape(s, x);
            ElementKey {
                idempotent: s.is_idempotent(x),
                in_idempotent_generated: in_e[x],
                h_class_size: h[h_of[x]].len(),
                right_ideal: s.right_ideal(x).count_ones(..),
                left_ideal: s.left_ideal(x).count_ones(..),
                index,
                period,
                left_identities: s.elements().filter(|&y| s.mul(y, x) == x).count(),
                right_identities: s.elements().filter(|&y| s.mul(x, y) == x).count(),
                absorbed: s.elements().filter(|&y| s.mul(x, y) == s.mul(y, x) && s.mul(x, y) == y).count(),
            }
        })
        .collect()
}

/// Index and period of the cyclic subsemigroup generated by `x`.
fn monogenic_shape(s: &FiniteSemigroup, x: usize) -> (usize, usize) {
    let mut first_seen = vec![UNSET; s.order()];
    let mut power = x;
    let mut k = 1;
    loop {
        if first_seen[power] != UNSET {
            return (first_seen[power], k - first_seen[power]);
        }
        first_seen[power] = k;
        power = s.mul(power, x);
        k += 1;
    }
}

struct Search<'a> {
    s: &'a FiniteSemigroup,
    t: &'a FiniteSemigroup,
    key_s: Vec<u32>,
    key_t: Vec<u32>,
    map: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    first_only: bool,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(s: &'a FiniteSemigroup, t: &'a FiniteSemigroup, first_only: bool) -> Option<Self> {
        let ks = element_keys(s);
        let kt = element_keys(t);
        let mut sorted_s = ks.clone();
        let mut sorted_t = kt.clone();
        sorted_s.sort();
        sorted_t.sort();
        if sorted_s != sorted_t {
            return None;
        }
        let mut intern: BTreeMap<ElementKey, u32> = BTreeMap::new();
        for k in &sorted_s {
            let next = intern.len() as u32;
            intern.entry(k.clone()).or_insert(next);
        }
        let key_s: Vec<u32> = ks.iter().map(|k| intern[k]).collect();
        let key_t: Vec<u32> = kt.iter().map(|k| intern[k]).collect();
        let mut candidates = vec![Vec::new(); intern.len()];
        for (y, &k) in key_t.iter().enumerate() {
            candidates[k as usize].push(y);
        }
        let n = s.order();
        Some(Self {
            s,
            t,
            key_s,
            key_t,
            map: vec![UNSET; n],
            used: vec![false; n],
            trail: Vec::with_capacity(n),
            candidates,
            first_only,
            found: Vec::new(),
        })
    }

    fn bind(&mut self, a: usize, b: usize) -> bool {
        if self.used[b] || self.key_s[a] != self.key_t[b] {
            return false;
        }
        self.map[a] = b;
        self.used[b] = true;
        self.trail.push(a);
        true
    }

    /// Binds `a -> b` and closes the partial map under products.
    fn bind_and_propagate(&mut self, a: usize, b: usize) -> bool {
        if !self.bind(a, b) {
            return false;
        }
        let mut cursor = self.trail.len() - 1;
        while cursor < self.trail.len() {
            let x = self.trail[cursor];
            let fx = self.map[x];
            let mut k = 0;
            while k <= cursor {
                let c = self.trail[k];
                let fc = self.map[c];
                for (p, q) in [(self.s.mul(x, c), self.t.mul(fx, fc)), (self.s.mul(c, x), self.t.mul(fc, fx))] {
                    match self.map[p] {
                        UNSET => {
                            if !self.bind(p, q) {
                                return false;
                            }
                        }
                        bound if bound != q => return false,
                        _ => {}
                    }
                }
                k += 1;
            }
            cursor += 1;
        }
        true
    }

    fn undo(&mut self, checkpoint: usize) {
        while self.trail.len() > checkpoint {
            let a = self.trail.pop().expect("trail above checkpoint");
            self.used[self.map[a]] = false;
            self.map[a] = UNSET;
        }
    }

    fn run(&mut self, from: usize) {
        let Some(x) = (from..self.map.len()).find(|&x| self.map[x] == UNSET) else {
            self.found.push(self.map.clone());
            return;
        };
        let class = self.key_s[x] as usize;
        for idx in 0..self.candidates[class].len() {
            let y = self.candidates[class][idx];
            if self.used[y] {
                continue;
            }
            let checkpoint = self.trail.len();
            if self.bind_and_propagate(x, y) {
                self.run(x + 1);
            }
            self.undo(checkpoint);
            if self.first_only && !self.found.is_empty() {
                return;
            }
        }
    }
}

fn check_limit(s: &FiniteSemigroup, max_order: usize) -> Result<(), SemigroupError> {
    if s.order() > max_order {
        return Err(SemigroupError::SizeLimitExceeded { order: s.order(), limit: max_order });
    }
    Ok(())
}

fn search(s: &FiniteSemigroup, t: &FiniteSemigroup, max_order: usize, first_only: bool) -> Result<Vec<Vec<usize>>, SemigroupError> {
    check_limit(s, max_order)?;
    check_limit(t, max_order)?;
    if s.order() != t.order() {
        return Ok(Vec::new());
    }
    let Some(mut state) = Search::new(s, t, first_only) else {
        return Ok(Vec::new());
    };
    state.run(0);
    let mut found = state.found;
    found.sort_unstable();
    Ok(found)
}

/// Every isomorphism `S -> T` as an image vector, sorted lexicographically.
pub fn brute_force_isomorphisms(s: &FiniteSemigroup, t: &FiniteSemigroup, max_order: usize) -> Result<Vec<Vec<usize>>, SemigroupError> {
    search(s, t, max_order, false)
}

pub fn brute_force_automorphisms(s: &FiniteSemigroup, max_order: usize) -> Result<Vec<Vec<usize>>, SemigroupError> {
    search(s, s, max_order, false)
}

/// Stops at the first isomorphism found; cheaper than a full enumeration
/// when only existence matters.
pub fn first_isomorphism(s: &FiniteSemigroup, t: &FiniteSemigroup, max_order: usize) -> Result<Option<Vec<usize>>, SemigroupError> {
    Ok(search(s, t, max_order, true)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsemi::RectangularBand;
    use crate::groups::FiniteGroup;
    use itertools::Itertools;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// All bijections, filtered by the homomorphism law.
    fn permutation_scan(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Vec<Vec<usize>> {
        if s.order() != t.order() {
            return Vec::new();
        }
        (0..s.order())
            .permutations(s.order())
            .filter(|p| s.is_isomorphism(t, p))
            .sorted()
            .collect()
    }

    fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().map(|&x| b[x]).collect()
    }

    #[test]
    fn small_examples() {
        let trivial = FiniteSemigroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(brute_force_automorphisms(&trivial, DEFAULT_MAX_ORDER).unwrap().len(), 1);
        let left_zero = RectangularBand::new(2, 1).unwrap().to_semigroup();
        assert_eq!(brute_force_automorphisms(&left_zero, DEFAULT_MAX_ORDER).unwrap().len(), 2);
        let z3 = FiniteSemigroup::from_group(&FiniteGroup::cyclic(3));
        assert!(brute_force_isomorphisms(&z3, &left_zero, DEFAULT_MAX_ORDER).unwrap().is_empty());
    }

    #[test]
    fn limit_is_enforced() {
        let big = RectangularBand::new(4, 4).unwrap().to_semigroup();
        assert_eq!(
            brute_force_automorphisms(&big, DEFAULT_MAX_ORDER),
            Err(SemigroupError::SizeLimitExceeded { order: 16, limit: 12 })
        );
        assert_eq!(brute_force_automorphisms(&big, 16).unwrap().len(), 24 * 24);
    }

    #[test]
    fn matches_permutation_scan() {
        let chain3 = FiniteSemigroup::from_fn(3, |a, b| a.min(b)).unwrap();
        let z2 = FiniteSemigroup::from_group(&FiniteGroup::cyclic(2));
        let samples = [
            FiniteSemigroup::from_group(&FiniteGroup::symmetric(3)),
            FiniteSemigroup::from_group(&FiniteGroup::klein()),
            RectangularBand::new(2, 3).unwrap().to_semigroup(),
            chain3.clone(),
            FiniteSemigroup::direct_product(&z2, &chain3),
            FiniteSemigroup::from_fn(4, |a, b| if a == 0 || b == 0 { 0 } else { a }).unwrap(),
        ];
        for s in &samples {
            assert_eq!(brute_force_automorphisms(s, DEFAULT_MAX_ORDER).unwrap(), permutation_scan(s, s));
        }
    }

    /// Semigroups of the form `x*y = f(x)` style tables are rarely associative,
    /// so random instances come from products of small known pieces.
    fn small_semigroup() -> impl Strategy<Value = FiniteSemigroup> {
        let pieces = vec![
            FiniteSemigroup::from_table(&[vec![0]]).unwrap(),
            FiniteSemigroup::from_group(&FiniteGroup::cyclic(2)),
            FiniteSemigroup::from_group(&FiniteGroup::cyclic(3)),
            FiniteSemigroup::from_fn(2, |a, b| a.min(b)).unwrap(),
            FiniteSemigroup::from_fn(3, |a, b| a.min(b)).unwrap(),
            RectangularBand::new(2, 1).unwrap().to_semigroup(),
            RectangularBand::new(1, 2).unwrap().to_semigroup(),
            FiniteSemigroup::from_fn(3, |a, b| if a == 0 || b == 0 { 0 } else { b }).unwrap(),
        ];
        (0..pieces.len(), 0..pieces.len()).prop_map(move |(a, b)| FiniteSemigroup::direct_product(&pieces[a], &pieces[b]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn automorphisms_form_a_group(s in small_semigroup()) {
            prop_assume!(s.order() <= 8);
            let auts = brute_force_automorphisms(&s, DEFAULT_MAX_ORDER).unwrap();
            let set: BTreeSet<Vec<usize>> = auts.iter().cloned().collect();
            prop_assert!(set.contains(&(0..s.order()).collect::<Vec<_>>()));
            for a in &auts {
                let mut inv = vec![0; s.order()];
                for (x, &y) in a.iter().enumerate() {
                    inv[y] = x;
                }
                prop_assert!(set.contains(&inv));
                for b in &auts {
                    prop_assert!(set.contains(&compose(a, b)));
                }
            }
        }

        #[test]
        fn agrees_with_permutation_scan(s in small_semigroup(), t in small_semigroup()) {
            prop_assume!(s.order() <= 6 && t.order() <= 6);
            prop_assert_eq!(brute_force_isomorphisms(&s, &t, DEFAULT_MAX_ORDER).unwrap(), permutation_scan(&s, &t));
        }
    }
}
