//! Permutation groups on a finite carrier and their orbits on tuples.
//!
//! A group acts on the right: `a . g = g[a]`, coordinatewise on tuples.
//! Orbit counts are finite evidence about an automorphism group; they say
//! nothing by themselves about countably infinite structures.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::finsemi::{brute_force_automorphisms, FiniteSemigroup, SemigroupError};
use crate::tuples::{tuple_from_index, tuple_index};

/// Default cap on `|M|^n` for the union-find profile.
pub const DEFAULT_TUPLE_LIMIT: usize = 1_000_000;
/// Default cap on the number of choice tuples examined for the extension condition.
pub const DEFAULT_CHOICE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("permutation {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("entry {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("tuple space {degree}^{n} exceeds the limit {limit}")]
    TupleSpaceTooLarge { degree: usize, n: usize, limit: usize },
    #[error("{0}")]
    MalformedFamily(String),
    #[error("{choices} choice tuples exceed the limit {limit}")]
    SizeLimitExceeded { choices: u128, limit: u64 },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// `x -> q[p[x]]`: first `p`, then `q`.
fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutationGroup {
    degree: usize,
    /// Sorted; the identity comes first.
    elements: Vec<Vec<usize>>,
    /// A generating set, used by the union-find orbit count.
    generators: Vec<Vec<usize>>,
}

impl PermutationGroup {
    /// Closes `generators` under composition. An empty list gives the trivial group.
    pub fn closure(degree: usize, generators: &[Vec<usize>]) -> Result<Self, OrbitError> {
        for (index, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(OrbitError::DegreeMismatch { index, expected: degree, found: g.len() });
            }
            if !is_permutation(g) {
                return Err(OrbitError::NotAPermutation { index, degree });
            }
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let identity: Vec<usize> = (0..degree).collect();
        seen.insert(identity.clone());
        let mut frontier = vec![identity];
        while let Some(p) = frontier.pop() {
            for g in generators {
                let q = compose(&p, g);
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        Ok(Self { degree, elements: seen.into_iter().collect(), generators: generators.to_vec() })
    }

    /// The group generated by `elements`, with a reduced generating set
    /// picked greedily from them.
    pub fn from_elements(degree: usize, elements: &[Vec<usize>]) -> Result<Self, OrbitError> {
        let mut group = Self::closure(degree, &[])?;
        let mut generators = Vec::new();
        for (index, e) in elements.iter().enumerate() {
            if e.len() != degree {
                return Err(OrbitError::DegreeMismatch { index, expected: degree, found: e.len() });
            }
            if !group.contains(e) {
                generators.push(e.clone());
                group = Self::closure(degree, &generators)?;
            }
        }
        Ok(group)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::closure(degree, &[]).expect("no generators")
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut swap: Vec<usize> = (0..degree).collect();
            swap.swap(0, 1);
            gens.push(swap);
            gens.push((1..degree).chain([0]).collect());
        }
        Self::closure(degree, &gens).expect("valid generators")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(p)).is_ok()
    }

    /// Closed under composition and inverses, identity included.
    pub fn is_group(&self) -> bool {
        let identity: Vec<usize> = (0..self.degree).collect();
        self.contains(&identity)
            && itertools::iproduct!(&self.elements, &self.elements).all(|(p, q)| self.contains(&compose(p, q)))
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.is_group() && self.elements.iter().all(|p| other.contains(p))
    }
}

/// Orbit counts on `M^n` for `n = 1..=n_max`; `counts[k]` is the count for `n = k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OligomorphyProfile {
    pub degree: usize,
    pub group_order: usize,
    #[serde(serialize_with = "serialize_counts")]
    pub counts: Vec<BigUint>,
}

/// Numbers that fit in a `u64` are emitted as JSON numbers, larger ones as decimal strings.
fn serialize_counts<S: Serializer>(counts: &[BigUint], serializer: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    #[serde(untagged)]
    enum Count {
        Small(u64),
        Large(String),
    }
    let out: Vec<Count> = counts
        .iter()
        .map(|c| u64::try_from(c).map_or_else(|_| Count::Large(c.to_string()), Count::Small))
        .collect();
    out.serialize(serializer)
}

impl OligomorphyProfile {
    /// The count for `M^n`.
    pub fn count(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|k| self.counts.get(k))
    }
}

/// Burnside: `|M^n / G| = (1/|G|) sum_g fix(g)^n`, since `g` fixes a tuple iff
/// it fixes every coordinate.
pub fn oligomorphy_profile(g: &PermutationGroup, n_max: usize) -> OligomorphyProfile {
    let fixed: Vec<u32> = g
        .elements
        .iter()
        .map(|p| p.iter().enumerate().filter(|&(x, &y)| x == y).count() as u32)
        .collect();
    let order = BigUint::from(g.order());
    let counts = (1..=n_max as u32)
        .map(|n| {
            let total: BigUint = fixed.iter().map(|&f| BigUint::from(f).pow(n)).sum();
            debug_assert_eq!(&total % &order, BigUint::from(0u32));
            total / &order
        })
        .collect();
    OligomorphyProfile { degree: g.degree, group_order: g.order(), counts }
}

/// Orbit counts by union-find over mixed-radix tuple indices, joining each
/// tuple with its image under every generator.
pub fn union_find_profile(g: &PermutationGroup, n_max: usize, tuple_limit: usize) -> Result<OligomorphyProfile, OrbitError> {
    let m = g.degree;
    let mut counts = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let size = u32::try_from(n)
            .ok()
            .and_then(|e| m.checked_pow(e))
            .filter(|&s| s <= tuple_limit)
            .ok_or(OrbitError::TupleSpaceTooLarge { degree: m, n, limit: tuple_limit })?;
        let mut uf = UnionFind::<usize>::new(size);
        for index in 0..size {
            let tuple = tuple_from_index(index, m, n);
            for gen in &g.generators {
                let image: Vec<usize> = tuple.iter().map(|&x| gen[x]).collect();
                uf.union(index, tuple_index(&image, m));
            }
        }
        let roots = (0..size).filter(|&i| uf.find(i) == i).count();
        counts.push(BigUint::from(roots));
    }
    Ok(OligomorphyProfile { degree: m, group_order: g.order(), counts })
}

/// Some `g` with `a . g = b`, if any.
pub fn same_orbit_witness<'a>(g: &'a PermutationGroup, a: &[usize], b: &[usize]) -> Option<&'a [usize]> {
    if a.len() != b.len() {
        return None;
    }
    g.elements
        .iter()
        .find(|p| a.iter().zip(b).all(|(&x, &y)| p[x] == y))
        .map(Vec::as_slice)
}

/// The subgroup fixing every subset setwise.
pub fn set_extension_stabilizer(g: &PermutationGroup, subsets: &[Vec<usize>]) -> PermutationGroup {
    let sets: Vec<BTreeSet<usize>> = subsets.iter().map(|s| s.iter().copied().collect()).collect();
    let elements: Vec<Vec<usize>> = g
        .elements
        .iter()
        .filter(|p| sets.iter().all(|s| s.iter().all(|&x| s.contains(&p[x]))))
        .cloned()
        .collect();
    PermutationGroup { degree: g.degree, generators: elements.clone(), elements }
}

/// Substructures `M_i` of `M` with a partition of their index set `N` and
/// isomorphism sets `Psi_{i,j}`. A map in `Psi_{i,j}` lists the images of
/// `members[i]` in order, as elements of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PsiFamily {
    pub members: Vec<Vec<usize>>,
    pub blocks: Vec<Vec<usize>>,
    pub psi: HashMap<(usize, usize), Vec<Vec<usize>>>,
}

impl PsiFamily {
    fn maps(&self, i: usize, j: usize) -> &[Vec<usize>] {
        self.psi.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    fn position(&self, j: usize, x: usize) -> Option<usize> {
        self.members[j].binary_search(&x).ok()
    }

    /// `x -> phi'(phi(x))` for `phi : M_i -> M_j`, `phi' : M_j -> M_l`.
    fn compose(&self, j: usize, phi: &[usize], next: &[usize]) -> Vec<usize> {
        phi.iter().map(|&x| next[self.position(j, x).expect("validated")]).collect()
    }

    fn invert(&self, i: usize, j: usize, phi: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; self.members[j].len()];
        for (k, &x) in phi.iter().enumerate() {
            inv[self.position(j, x).expect("validated")] = self.members[i][k];
        }
        inv
    }

    fn validate(&self, order: usize) -> Result<(), OrbitError> {
        let n = self.members.len();
        for (i, m) in self.members.iter().enumerate() {
            if !m.windows(2).all(|w| w[0] < w[1]) || m.iter().any(|&x| x >= order) {
                return Err(OrbitError::MalformedFamily(format!("member {i} must be a sorted list of elements")));
            }
        }
        let covered: Vec<usize> = self.blocks.iter().flatten().copied().sorted().collect();
        if covered != (0..n).collect_vec() {
            return Err(OrbitError::MalformedFamily("blocks must partition the member indices".into()));
        }
        for (&(i, j), maps) in &self.psi {
            if i >= n || j >= n {
                return Err(OrbitError::MalformedFamily(format!("Psi_({i},{j}) indexes a missing member")));
            }
            for phi in maps {
                let images: BTreeSet<usize> = phi.iter().copied().collect();
                if phi.len() != self.members[i].len()
                    || images.len() != self.members[j].len()
                    || images.iter().any(|&x| self.position(j, x).is_none())
                {
                    return Err(OrbitError::MalformedFamily(format!("a map in Psi_({i},{j}) is not a bijection onto member {j}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionFailure {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseFailure {
    pub i: usize,
    pub j: usize,
    pub map: usize,
}

/// `choice[i]` indexes `Psi_{i, i pi}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionFailure {
    pub pi: Vec<usize>,
    pub choice: Vec<usize>,
}

/// At most this many failures of each kind are recorded; the counts are exact.
pub const MAX_RECORDED_FAILURES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiSystemReport {
    pub passed: bool,
    /// Nonemptiness: pairs in a common block with `Psi_{i,j}` empty.
    pub nonempty_failures: Vec<(usize, usize)>,
    /// Composition: a composite missing from `Psi_{i,l}`.
    pub composition_failures: Vec<CompositionFailure>,
    /// Inverses: an inverse missing from `Psi_{j,i}`.
    pub inverse_failures: Vec<InverseFailure>,
    /// Extension: a choice with no extending automorphism of `M`.
    pub extension_failures: Vec<ExtensionFailure>,
    pub extension_failure_count: u64,
    pub partition_automorphisms: usize,
    pub choices_checked: u64,
    pub automorphisms_of_m: usize,
}

fn push_capped<T>(v: &mut Vec<T>, x: T) {
    if v.len() < MAX_RECORDED_FAILURES {
        v.push(x);
    }
}

/// Permutations of `0..n` preserving every block setwise.
fn block_permutations(n: usize, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().copied().permutations(b.len()).collect_vec())
        .multi_cartesian_product()
        .map(|images| {
            let mut pi = vec![0; n];
            for (block, image) in blocks.iter().zip(images) {
                for (&x, y) in block.iter().zip(image) {
                    pi[x] = y;
                }
            }
            pi
        })
        .collect()
}

/// Checks the nonemptiness, composition, inverse and extension conditions
/// exhaustively. The extension condition ranges over
/// every block-preserving `pi` and every choice `phi_i in Psi_{i, i pi}`,
/// searching the brute-force automorphisms of `m` for an extension.
pub fn psi_system_check(m: &FiniteSemigroup, family: &PsiFamily, max_order: usize, choice_limit: u64) -> Result<PsiSystemReport, OrbitError> {
    family.validate(m.order())?;
    let n = family.members.len();
    let mut report = PsiSystemReport {
        passed: false,
        nonempty_failures: Vec::new(),
        composition_failures: Vec::new(),
        inverse_failures: Vec::new(),
        extension_failures: Vec::new(),
        extension_failure_count: 0,
        partition_automorphisms: 0,
        choices_checked: 0,
        automorphisms_of_m: 0,
    };

    for block in &family.blocks {
        for (&i, &j) in itertools::iproduct!(block, block) {
            if family.maps(i, j).is_empty() {
                push_capped(&mut report.nonempty_failures, (i, j));
            }
        }
    }

    let sets: HashMap<(usize, usize), HashSet<&Vec<usize>>> =
        family.psi.iter().map(|(&k, maps)| (k, maps.iter().collect())).collect();
    let has = |i: usize, j: usize, phi: &Vec<usize>| sets.get(&(i, j)).is_some_and(|s| s.contains(phi));
    for (i, j, l) in itertools::iproduct!(0..n, 0..n, 0..n) {
        for ((first, phi), (second, next)) in itertools::iproduct!(family.maps(i, j).iter().enumerate(), family.maps(j, l).iter().enumerate()) {
            if !has(i, l, &family.compose(j, phi, next)) {
                push_capped(&mut report.composition_failures, CompositionFailure { i, j, l, first, second });
            }
        }
    }
    for (i, j) in itertools::iproduct!(0..n, 0..n) {
        for (map, phi) in family.maps(i, j).iter().enumerate() {
            if !has(j, i, &family.invert(i, j, phi)) {
                push_capped(&mut report.inverse_failures, InverseFailure { i, j, map });
            }
        }
    }

    let pis = block_permutations(n, &family.blocks);
    report.partition_automorphisms = pis.len();
    let total: u128 = pis
        .iter()
        .map(|pi| (0..n).map(|i| family.maps(i, pi[i]).len() as u128).product::<u128>())
        .sum();
    if total > u128::from(choice_limit) {
        return Err(OrbitError::SizeLimitExceeded { choices: total, limit: choice_limit });
    }
    let auts = brute_force_automorphisms(m, max_order)?;
    report.automorphisms_of_m = auts.len();
    let restrictions: HashSet<Vec<usize>> = auts
        .iter()
        .map(|a| family.members.iter().flatten().map(|&x| a[x]).collect())
        .collect();
    for pi in &pis {
        let options: Vec<&[Vec<usize>]> = (0..n).map(|i| family.maps(i, pi[i])).collect();
        for choice in options.iter().map(|o| 0..o.len()).multi_cartesian_product() {
            report.choices_checked += 1;
            let wanted: Vec<usize> = choice.iter().enumerate().flat_map(|(i, &c)| options[i][c].iter().copied()).collect();
            if !restrictions.contains(&wanted) {
                report.extension_failure_count += 1;
                push_capped(&mut report.extension_failures, ExtensionFailure { pi: pi.clone(), choice });
            }
        }
    }

    report.passed = report.nonempty_failures.is_empty()
        && report.composition_failures.is_empty()
        && report.inverse_failures.is_empty()
        && report.extension_failure_count == 0;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrcWitness {
    pub automorphism: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrcReport {
    pub holds: bool,
    pub automorphisms_checked: usize,
    pub witness: Option<PrcWitness>,
}

/// Checks that every automorphism with `X_i phi = X_j` carries `A_i` onto `A_j`.
pub fn pivoted_prc_check(m: &FiniteSemigroup, pairs: &[(Vec<usize>, Vec<usize>)], max_order: usize) -> Result<PrcReport, OrbitError> {
    let auts = brute_force_automorphisms(m, max_order)?;
    let sets: Vec<BTreeSet<usize>> = pairs.iter().map(|(a, _)| a.iter().copied().collect()).collect();
    let witness = auts.iter().find_map(|phi| {
        itertools::iproduct!(0..pairs.len(), 0..pairs.len()).find_map(|(i, j)| {
            let (pivot_i, pivot_j) = (&pairs[i].1, &pairs[j].1);
            let pivots_match = pivot_i.len() == pivot_j.len() && pivot_i.iter().zip(pivot_j).all(|(&x, &y)| phi[x] == y);
            let image: BTreeSet<usize> = sets[i].iter().map(|&x| phi[x]).collect();
            (pivots_match && image != sets[j]).then(|| PrcWitness { automorphism: phi.clone(), i, j })
        })
    });
    Ok(PrcReport { holds: witness.is_none(), automorphisms_checked: auts.len(), witness })
}
