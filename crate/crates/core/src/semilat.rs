//! Finite semilattices and strong semilattices of semigroups
//! `[Y; S_alpha; psi_{alpha,beta}]`.
//!
//! The order on `Y` is `alpha >= beta` iff `alpha beta = beta`. Components
//! are kept disjoint; the flattened semigroup numbers elements
//! component-major, so element `s` of `S_alpha` is `offset(alpha) + s`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finsemi::{brute_force_automorphisms, brute_force_isomorphisms, first_isomorphism, FiniteSemigroup, SemigroupError};
use crate::relation::Relation;
use crate::table::{associativity_witness, flatten_square, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilatticeError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("meet is not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("{0} is not idempotent")]
    NotIdempotent(usize),
    #[error("meet is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SssError {
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("{components} components for a semilattice of order {order}")]
    ComponentCount { components: usize, order: usize },
    #[error("connector {alpha} -> {beta} given but {alpha} is not above {beta}")]
    NotComparable { alpha: usize, beta: usize },
    #[error("connector {alpha} -> {beta} missing")]
    MissingConnector { alpha: usize, beta: usize },
    #[error("connector {alpha} -> {beta} has the wrong length or an out-of-range image")]
    ConnectorShape { alpha: usize, beta: usize },
    #[error("connector {alpha} -> {alpha} is not the identity")]
    ConnectorNotIdentity { alpha: usize },
    #[error("connector {alpha} -> {beta} is not a homomorphism at ({a}, {b})")]
    ConnectorNotHomomorphism { alpha: usize, beta: usize, a: usize, b: usize },
    #[error("connectors {alpha} -> {beta} -> {gamma} do not compose to {alpha} -> {gamma}")]
    ConnectorNotFunctorial { alpha: usize, beta: usize, gamma: usize },
    #[error("element {element} of component {alpha} is not idempotent")]
    NotIdempotent { alpha: usize, element: usize },
    #[error("pi is not an automorphism of the semilattice")]
    PiNotAutomorphism,
    #[error("map for component {alpha} is not an isomorphism onto component {target}")]
    MapNotIsomorphism { alpha: usize, target: usize },
    #[error("diagram [{alpha}, {beta}] fails at element {element} of component {alpha}")]
    DiagramFails { alpha: usize, beta: usize, element: usize },
    #[error("the semilattice has no zero")]
    NoZero,
    #[error("connector {alpha} -> {beta} is not injective")]
    ConnectorNotInjective { alpha: usize, beta: usize },
    #[error("connector {alpha} -> {beta} is not bijective")]
    ConnectorNotBijective { alpha: usize, beta: usize },
    #[error("theta_0 does not carry the image of component {alpha} onto the image of component {target}")]
    PreconditionFails { alpha: usize, target: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Semilattice {
    order: usize,
    meet: Vec<usize>,
}

impl Semilattice {
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, SemilatticeError> {
        let (order, meet) = flatten_square(table)?;
        for (a, b) in itertools::iproduct!(0..order, 0..order) {
            if meet[a * order + b] != meet[b * order + a] {
                return Err(SemilatticeError::NotCommutative(a, b));
            }
        }
        if let Some(a) = (0..order).find(|&a| meet[a * order + a] != a) {
            return Err(SemilatticeError::NotIdempotent(a));
        }
        if let Some((a, b, c)) = associativity_witness(order, &meet) {
            return Err(SemilatticeError::NotAssociative(a, b, c));
        }
        Ok(Self { order, meet })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self { order: n, meet: itertools::iproduct!(0..n, 0..n).map(|(a, b)| a.min(b)).collect() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.order + b]
    }

    /// `a >= b`.
    #[inline]
    pub fn geq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == b
    }

    pub fn zero(&self) -> Option<usize> {
        (0..self.order).find(|&z| (0..self.order).all(|x| self.meet(z, x) == z))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.meet.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn as_semigroup(&self) -> FiniteSemigroup {
        FiniteSemigroup::from_flat_unchecked(self.order, self.meet.clone())
    }

    pub fn is_automorphism(&self, pi: &[usize]) -> bool {
        pi.len() == self.order && self.as_semigroup().is_isomorphism(&self.as_semigroup(), pi)
    }

    pub fn automorphisms(&self) -> Result<Vec<Vec<usize>>, SemigroupError> {
        brute_force_automorphisms(&self.as_semigroup(), self.order.max(crate::finsemi::DEFAULT_MAX_ORDER))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongSemilattice {
    lattice: Semilattice,
    components: Vec<FiniteSemigroup>,
    /// `connectors[alpha * |Y| + beta]` for `alpha >= beta`.
    connectors: Vec<Option<Vec<usize>>>,
    offsets: Vec<usize>,
}

impl StrongSemilattice {
    /// Connectors `alpha -> alpha` may be omitted and default to the identity.
    pub fn new(
        lattice: Semilattice,
        components: Vec<FiniteSemigroup>,
        connectors: Vec<((usize, usize), Vec<usize>)>,
    ) -> Result<Self, SssError> {
        let n = lattice.order;
        if components.len() != n {
            return Err(SssError::ComponentCount { components: components.len(), order: n });
        }
        let mut slots: Vec<Option<Vec<usize>>> = vec![None; n * n];
        for ((alpha, beta), images) in connectors {
            if alpha >= n || beta >= n || !lattice.geq(alpha, beta) {
                return Err(SssError::NotComparable { alpha, beta });
            }
            slots[alpha * n + beta] = Some(images);
        }
        for alpha in 0..n {
            let slot = &mut slots[alpha * n + alpha];
            let identity: Vec<usize> = components[alpha].elements().collect();
            match slot {
                None => *slot = Some(identity),
                Some(given) if *given != identity => return Err(SssError::ConnectorNotIdentity { alpha }),
                Some(_) => {}
            }
        }
        for (alpha, beta) in itertools::iproduct!(0..n, 0..n).filter(|&(a, b)| lattice.geq(a, b)) {
            let Some(map) = &slots[alpha * n + beta] else {
                return Err(SssError::MissingConnector { alpha, beta });
            };
            let (src, dst) = (&components[alpha], &components[beta]);
            if map.len() != src.order() || map.iter().any(|&y| y >= dst.order()) {
                return Err(SssError::ConnectorShape { alpha, beta });
            }
            if let Some((a, b)) = itertools::iproduct!(src.elements(), src.elements()).find(|&(a, b)| map[src.mul(a, b)] != dst.mul(map[a], map[b])) {
                return Err(SssError::ConnectorNotHomomorphism { alpha, beta, a, b });
            }
        }
        for (alpha, beta, gamma) in itertools::iproduct!(0..n, 0..n, 0..n) {
            if lattice.geq(alpha, beta) && lattice.geq(beta, gamma) {
                let ab = slots[alpha * n + beta].as_ref().expect("checked above");
                let bg = slots[beta * n + gamma].as_ref().expect("checked above");
                let ag = slots[alpha * n + gamma].as_ref().expect("checked above");
                if ab.iter().map(|&x| bg[x]).ne(ag.iter().copied()) {
                    return Err(SssError::ConnectorNotFunctorial { alpha, beta, gamma });
                }
            }
        }
        let offsets = components.iter().scan(0, |acc, c| {
            let start = *acc;
            *acc += c.order();
            Some(start)
        });
        let offsets = offsets.collect();
        Ok(Self { lattice, components, connectors: slots, offsets })
    }

    pub fn lattice(&self) -> &Semilattice {
        &self.lattice
    }

    pub fn components(&self) -> &[FiniteSemigroup] {
        &self.components
    }

    pub fn component(&self, alpha: usize) -> &FiniteSemigroup {
        &self.components[alpha]
    }

    /// `psi_{alpha,beta}` for `alpha >= beta`.
    pub fn connector(&self, alpha: usize, beta: usize) -> Option<&[usize]> {
        self.connectors.get(alpha * self.lattice.order + beta)?.as_deref()
    }

    /// All connectors `((alpha, beta), images)` with `alpha > beta`.
    pub fn proper_connectors(&self) -> Vec<((usize, usize), Vec<usize>)> {
        let n = self.lattice.order;
        itertools::iproduct!(0..n, 0..n)
            .filter(|&(a, b)| a != b && self.lattice.geq(a, b))
            .map(|(a, b)| ((a, b), self.connector(a, b).expect("present").to_vec()))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.components.iter().map(FiniteSemigroup::order).sum()
    }

    pub fn global(&self, alpha: usize, s: usize) -> usize {
        self.offsets[alpha] + s
    }

    /// Component and local index of a flattened element.
    pub fn locate(&self, x: usize) -> (usize, usize) {
        let alpha = self.offsets.partition_point(|&o| o <= x) - 1;
        (alpha, x - self.offsets[alpha])
    }

    pub fn component_elements(&self, alpha: usize) -> std::ops::Range<usize> {
        self.offsets[alpha]..self.offsets[alpha] + self.components[alpha].order()
    }

    /// `a * b = (a psi_{alpha, alpha beta})(b psi_{beta, alpha beta})`.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (alpha, a) = self.locate(x);
        let (beta, b) = self.locate(y);
        let gamma = self.lattice.meet(alpha, beta);
        let a = self.connector(alpha, gamma).expect("alpha >= alpha beta")[a];
        let b = self.connector(beta, gamma).expect("beta >= alpha beta")[b];
        self.global(gamma, self.components[gamma].mul(a, b))
    }

    pub fn flatten(&self) -> FiniteSemigroup {
        let n = self.order();
        FiniteSemigroup::from_flat_unchecked(n, itertools::iproduct!(0..n, 0..n).map(|(x, y)| self.mul(x, y)).collect())
    }

    pub fn connectors_injective(&self) -> bool {
        self.proper_connectors().iter().all(|(_, m)| m.iter().all_unique())
    }
}

/// `[theta_alpha, pi]`: `maps[alpha]` is an isomorphism `S_alpha -> S_{alpha pi}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SssAutomorphism {
    pub pi: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl SssAutomorphism {
    pub fn flat_map(&self, s: &StrongSemilattice) -> Vec<usize> {
        (0..s.order())
            .map(|x| {
                let (alpha, a) = s.locate(x);
                s.global(self.pi[alpha], self.maps[alpha][a])
            })
            .collect()
    }
}

/// First `(alpha, beta, element)` where
/// `psi_{alpha,beta} theta_beta != theta_alpha psi_{alpha pi, beta pi}`.
fn first_diagram_failure(s: &StrongSemilattice, pi: &[usize], maps: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = s.lattice.order;
    itertools::iproduct!(0..n, 0..n)
        .filter(|&(a, b)| s.lattice.geq(a, b))
        .find_map(|(alpha, beta)| {
            let down = s.connector(alpha, beta).expect("alpha >= beta");
            let across = s.connector(pi[alpha], pi[beta]).expect("pi preserves the order");
            s.components[alpha]
                .elements()
                .find(|&x| maps[beta][down[x]] != across[maps[alpha][x]])
                .map(|x| (alpha, beta, x))
        })
}

/// Accepts `[theta_alpha, pi]` iff `pi` is an automorphism of `Y`, each
/// `theta_alpha` is an isomorphism onto `S_{alpha pi}`, and every square
/// `[alpha, beta; alpha pi, beta pi]` commutes.
pub fn sss_build_automorphism(s: &StrongSemilattice, pi: &[usize], maps: &[Vec<usize>]) -> Result<SssAutomorphism, SssError> {
    if !s.lattice.is_automorphism(pi) {
        return Err(SssError::PiNotAutomorphism);
    }
    if maps.len() != s.lattice.order {
        return Err(SssError::ComponentCount { components: maps.len(), order: s.lattice.order });
    }
    for (alpha, map) in maps.iter().enumerate() {
        let target = pi[alpha];
        if !s.components[alpha].is_isomorphism(&s.components[target], map) {
            return Err(SssError::MapNotIsomorphism { alpha, target });
        }
    }
    if let Some((alpha, beta, element)) = first_diagram_failure(s, pi, maps) {
        return Err(SssError::DiagramFails { alpha, beta, element });
    }
    Ok(SssAutomorphism { pi: pi.to_vec(), maps: maps.to_vec() })
}

/// Splits an automorphism of the flattened semigroup as `[theta_alpha, pi]`
/// when it carries components onto components.
pub fn split_flat_automorphism(s: &StrongSemilattice, map: &[usize]) -> Option<SssAutomorphism> {
    let n = s.lattice.order;
    let mut pi = Vec::with_capacity(n);
    let mut maps = Vec::with_capacity(n);
    for alpha in 0..n {
        let target = s.locate(map[s.global(alpha, 0)]).0;
        let local: Option<Vec<usize>> = s
            .component_elements(alpha)
            .map(|x| {
                let (beta, b) = s.locate(map[x]);
                (beta == target).then_some(b)
            })
            .collect();
        pi.push(target);
        maps.push(local?);
    }
    sss_build_automorphism(s, &pi, &maps).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityReport {
    pub pure: bool,
    pub automorphisms_checked: usize,
    /// Automorphisms of the flattened semigroup with no `[theta_alpha, pi]` form.
    pub witnesses: Vec<Vec<usize>>,
}

pub fn is_automorphism_pure(s: &StrongSemilattice, max_order: usize) -> Result<PurityReport, SssError> {
    let auts = brute_force_automorphisms(&s.flatten(), max_order)?;
    let witnesses: Vec<Vec<usize>> = auts.iter().filter(|m| split_flat_automorphism(s, m).is_none()).cloned().collect();
    Ok(PurityReport { pure: witnesses.is_empty(), automorphisms_checked: auts.len(), witnesses })
}

/// A strong semilattice whose proper connectors are the constant maps onto
/// chosen idempotents `e_beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantStrongSemilattice {
    pub sss: StrongSemilattice,
    pub idempotents: Vec<usize>,
}

pub fn constant_sss(lattice: Semilattice, components: Vec<FiniteSemigroup>, idempotents: Vec<usize>) -> Result<ConstantStrongSemilattice, SssError> {
    let n = lattice.order;
    if components.len() != n || idempotents.len() != n {
        return Err(SssError::ComponentCount { components: components.len().min(idempotents.len()), order: n });
    }
    for (alpha, (&e, c)) in idempotents.iter().zip(&components).enumerate() {
        if e >= c.order() || !c.is_idempotent(e) {
            return Err(SssError::NotIdempotent { alpha, element: e });
        }
    }
    let connectors = itertools::iproduct!(0..n, 0..n)
        .filter(|&(a, b)| a != b && lattice.geq(a, b))
        .map(|(a, b)| ((a, b), vec![idempotents[b]; components[a].order()]))
        .collect();
    let sss = StrongSemilattice::new(lattice, components, connectors)?;
    Ok(ConstantStrongSemilattice { sss, idempotents })
}

/// `alpha eta beta` iff `S_alpha` and `S_beta` are isomorphic.
pub fn eta_relation(s: &StrongSemilattice, max_order: usize) -> Result<Relation, SssError> {
    let n = s.lattice.order;
    let mut related = vec![false; n * n];
    for (a, b) in itertools::iproduct!(0..n, 0..n) {
        related[a * n + b] = first_isomorphism(&s.components[a], &s.components[b], max_order)?.is_some();
    }
    Ok(Relation::from_fn(n, |a, b| related[a * n + b]))
}

/// `alpha upsilon beta` iff some isomorphism `S_alpha -> S_beta` sends
/// `e_alpha` to `e_beta`.
pub fn upsilon_relation(c: &ConstantStrongSemilattice, max_order: usize) -> Result<Relation, SssError> {
    let s = &c.sss;
    let n = s.lattice.order;
    let mut related = vec![false; n * n];
    for (a, b) in itertools::iproduct!(0..n, 0..n) {
        related[a * n + b] = brute_force_isomorphisms(&s.components[a], &s.components[b], max_order)?
            .iter()
            .any(|m| m[c.idempotents[a]] == c.idempotents[b]);
    }
    Ok(Relation::from_fn(n, |a, b| related[a * n + b]))
}

fn zero_images(s: &StrongSemilattice) -> Result<(usize, Vec<Vec<usize>>), SssError> {
    let zero = s.lattice.zero().ok_or(SssError::NoZero)?;
    let images = (0..s.lattice.order)
        .map(|alpha| s.connector(alpha, zero).expect("alpha >= 0").iter().copied().sorted().dedup().collect())
        .collect();
    Ok((zero, images))
}

/// `alpha xi beta` iff `S_alpha psi_{alpha,0} = S_beta psi_{beta,0}`.
pub fn xi_relation(s: &StrongSemilattice) -> Result<Relation, SssError> {
    let (_, images) = zero_images(s)?;
    Ok(Relation::from_fn(s.lattice.order, |a, b| images[a] == images[b]))
}

/// Builds `theta_alpha = psi_{alpha,0} theta_0 psi_{alpha pi,0}^-1` from an
/// automorphism `theta_0` of the zero component. Requires injective
/// connectors and `theta_0` carrying each image `S_alpha psi_{alpha,0}` onto
/// `S_{alpha pi} psi_{alpha pi,0}`.
pub fn lift_from_zero(s: &StrongSemilattice, theta_0: &[usize], pi: &[usize]) -> Result<SssAutomorphism, SssError> {
    let (zero, images) = zero_images(s)?;
    if let Some(((alpha, beta), _)) = s.proper_connectors().into_iter().find(|(_, m)| !m.iter().all_unique()) {
        return Err(SssError::ConnectorNotInjective { alpha, beta });
    }
    if !s.lattice.is_automorphism(pi) {
        return Err(SssError::PiNotAutomorphism);
    }
    let s0 = &s.components[zero];
    if !s0.is_isomorphism(s0, theta_0) {
        return Err(SssError::MapNotIsomorphism { alpha: zero, target: zero });
    }
    for alpha in 0..s.lattice.order {
        let target = pi[alpha];
        let moved: Vec<usize> = images[alpha].iter().map(|&x| theta_0[x]).sorted().collect();
        if moved != images[target] {
            return Err(SssError::PreconditionFails { alpha, target });
        }
    }
    let maps = (0..s.lattice.order)
        .map(|alpha| {
            let down = s.connector(alpha, zero).expect("alpha >= 0");
            let back = s.connector(pi[alpha], zero).expect("alpha pi >= 0");
            down.iter()
                .map(|&x| back.iter().position(|&y| y == theta_0[x]).expect("image sets correspond"))
                .collect()
        })
        .collect_vec();
    sss_build_automorphism(s, pi, &maps)
}

/// The isomorphism `S -> S_base x Y` when every connector is bijective:
/// `s` in `S_beta` goes to `(s psi_{beta,gamma} psi_{base,gamma}^-1, beta)`
/// with `gamma = base beta`. Returns the element map into
/// `FiniteSemigroup::direct_product(S_base, Y)` and that product.
pub fn iso_to_product(s: &StrongSemilattice, base: usize) -> Result<(Vec<usize>, FiniteSemigroup), SssError> {
    let bijective = |beta: usize, m: &[usize]| m.len() == s.components[beta].order() && m.iter().all_unique();
    if let Some(((alpha, beta), _)) = s.proper_connectors().into_iter().find(|((_, b), m)| !bijective(*b, m)) {
        return Err(SssError::ConnectorNotBijective { alpha, beta });
    }
    let y = s.lattice.order;
    let map = (0..s.order())
        .map(|x| {
            let (beta, b) = s.locate(x);
            let gamma = s.lattice.meet(base, beta);
            let down = s.connector(beta, gamma).expect("beta >= gamma")[b];
            let up = s.connector(base, gamma).expect("base >= gamma").iter().position(|&z| z == down).expect("bijective");
            up * y + beta
        })
        .collect();
    let product = FiniteSemigroup::direct_product(&s.components[base], &s.lattice.as_semigroup());
    Ok((map, product))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::finsemi::RectangularBand;
    use crate::groups::FiniteGroup;

    fn z(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_group(&FiniteGroup::cyclic(n))
    }

    pub(crate) fn two_chain_z2() -> StrongSemilattice {
        StrongSemilattice::new(Semilattice::chain(2), vec![z(2), z(2)], vec![((1, 0), vec![0, 1])]).unwrap()
    }

    /// `Y` is the chain `0 < 1`; `S_1 = Z_2` embeds in `S_0 = Z_2 x Z_2` as the first factor.
    fn embedded_chain() -> StrongSemilattice {
        let k4 = FiniteSemigroup::from_group(&FiniteGroup::klein());
        // klein elements are pairs (a, b) indexed 2a + b; the first factor is {0, 2}
        StrongSemilattice::new(Semilattice::chain(2), vec![k4, z(2)], vec![((1, 0), vec![0, 2])]).unwrap()
    }

    #[test]
    fn semilattice_validation() {
        assert!(Semilattice::from_table(&[vec![0, 0], vec![0, 1]]).is_ok());
        assert_eq!(Semilattice::from_table(&[vec![0, 1], vec![0, 1]]), Err(SemilatticeError::NotCommutative(0, 1)));
        assert_eq!(Semilattice::from_table(&[vec![1, 1], vec![1, 1]]), Err(SemilatticeError::NotIdempotent(0)));
        assert_eq!(Semilattice::chain(3).zero(), Some(0));
        // two incomparable atoms with no meet-closure below them
        let diamond = Semilattice::from_table(&[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(diamond.automorphisms().unwrap().len(), 2);
    }

    #[test]
    fn construction_examples() {
        let single = StrongSemilattice::new(Semilattice::chain(1), vec![z(3)], vec![]).unwrap();
        assert_eq!(single.flatten(), z(3));

        let c = two_chain_z2();
        let flat = c.flatten();
        assert_eq!(flat.order(), 4);
        // a in S_1, b in S_0: a * b = (a psi)(b)
        for (a, b) in itertools::iproduct!(0..2, 0..2) {
            assert_eq!(c.mul(c.global(1, a), c.global(0, b)), c.global(0, (a + b) % 2));
        }

        let bad = StrongSemilattice::new(
            Semilattice::chain(3),
            vec![z(1), RectangularBand::new(2, 1).unwrap().to_semigroup(), RectangularBand::new(2, 1).unwrap().to_semigroup()],
            vec![((2, 1), vec![1, 0]), ((1, 0), vec![0, 0]), ((2, 0), vec![0, 0])],
        );
        assert!(bad.is_ok());
        let bad = StrongSemilattice::new(
            Semilattice::chain(3),
            vec![RectangularBand::new(2, 1).unwrap().to_semigroup(); 3],
            vec![((2, 1), vec![1, 0]), ((1, 0), vec![1, 0]), ((2, 0), vec![1, 0])],
        );
        assert_eq!(bad, Err(SssError::ConnectorNotFunctorial { alpha: 2, beta: 1, gamma: 0 }));
        let not_hom = StrongSemilattice::new(Semilattice::chain(2), vec![z(2), z(2)], vec![((1, 0), vec![1, 0])]);
        assert!(matches!(not_hom, Err(SssError::ConnectorNotHomomorphism { alpha: 1, beta: 0, .. })));
        let missing = StrongSemilattice::new(Semilattice::chain(2), vec![z(2), z(2)], vec![]);
        assert_eq!(missing, Err(SssError::MissingConnector { alpha: 1, beta: 0 }));
    }

    #[test]
    fn constant_examples() {
        let c = constant_sss(Semilattice::chain(2), vec![z(2), z(2)], vec![0, 0]).unwrap();
        assert_eq!(c.sss.connector(1, 0), Some(&[0, 0][..]));
        assert!(matches!(constant_sss(Semilattice::chain(2), vec![z(2), z(2)], vec![0, 1]), Err(SssError::NotIdempotent { alpha: 1, element: 1 })));
        let upsilon = upsilon_relation(&c, 12).unwrap();
        let eta = eta_relation(&c.sss, 12).unwrap();
        assert!(upsilon.is_equivalence() && eta.is_equivalence());
        assert!(upsilon.is_subset_of(&eta));
    }

    #[test]
    fn build_examples() {
        let c = two_chain_z2();
        let id = sss_build_automorphism(&c, &[0, 1], &[vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(id.flat_map(&c), vec![0, 1, 2, 3]);

        let e = embedded_chain();
        // theta_0 fixing the first factor; theta_1 the identity
        let theta_0 = vec![0, 1, 2, 3];
        assert!(sss_build_automorphism(&e, &[0, 1], &[theta_0, vec![0, 1]]).is_ok());
        // the automorphism of Klein swapping the factors breaks the square
        assert!(matches!(
            sss_build_automorphism(&e, &[0, 1], &[vec![0, 2, 1, 3], vec![0, 1]]),
            Err(SssError::DiagramFails { alpha: 1, beta: 0, element: 1 })
        ));
    }

    #[test]
    fn constant_automorphisms_fixing_idempotents_are_accepted() {
        let band = RectangularBand::new(2, 2).unwrap().to_semigroup();
        let c = constant_sss(Semilattice::chain(2), vec![band.clone(), band.clone()], vec![0, 3]).unwrap();
        let auts = crate::finsemi::brute_force_automorphisms(&band, 12).unwrap();
        for (t0, t1) in itertools::iproduct!(&auts, &auts) {
            let accepted = sss_build_automorphism(&c.sss, &[0, 1], &[t0.clone(), t1.clone()]).is_ok();
            assert_eq!(accepted, t0[3] == 3);
        }
    }

    #[test]
    fn lift_examples() {
        let e = embedded_chain();
        let id = lift_from_zero(&e, &[0, 1, 2, 3], &[0, 1]).unwrap();
        assert_eq!(id.flat_map(&e), (0..6).collect_vec());
        // theta_0 = (a, b) -> (a + b, b) fixes the first factor {0, 2} setwise
        let shear = vec![0, 3, 2, 1];
        let lifted = lift_from_zero(&e, &shear, &[0, 1]).unwrap();
        assert!(e.flatten().is_isomorphism(&e.flatten(), &lifted.flat_map(&e)));

        // Y = {0, 1, 2} with 1, 2 atoms above 0, embedded as different factors of Klein
        let k4 = FiniteSemigroup::from_group(&FiniteGroup::klein());
        let y = Semilattice::from_table(&[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap();
        let s = StrongSemilattice::new(y, vec![k4, z(2), z(2)], vec![((1, 0), vec![0, 2]), ((2, 0), vec![0, 1])]).unwrap();
        assert_eq!(xi_relation(&s).unwrap().classes(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(lift_from_zero(&s, &[0, 1, 2, 3], &[0, 2, 1]), Err(SssError::PreconditionFails { alpha: 1, target: 2 }));
        // swapping the factors as well makes the images correspond
        assert!(lift_from_zero(&s, &[0, 2, 1, 3], &[0, 2, 1]).is_ok());
    }

    #[test]
    fn product_form() {
        let c = two_chain_z2();
        let (map, product) = iso_to_product(&c, 1).unwrap();
        assert!(c.flatten().is_isomorphism(&product, &map));
        let direct = FiniteSemigroup::direct_product(&z(2), &Semilattice::chain(2).as_semigroup());
        assert_eq!(product, direct);
        let single = StrongSemilattice::new(Semilattice::chain(1), vec![z(3)], vec![]).unwrap();
        assert_eq!(iso_to_product(&single, 0).unwrap().0, vec![0, 1, 2]);
        assert!(matches!(iso_to_product(&embedded_chain(), 0), Err(SssError::ConnectorNotBijective { .. })));
    }

    #[test]
    fn clifford_e_unitary_iff_injective() {
        let k4 = FiniteSemigroup::from_group(&FiniteGroup::klein());
        let cases = [
            two_chain_z2(),
            embedded_chain(),
            StrongSemilattice::new(Semilattice::chain(2), vec![z(2), z(1)], vec![((1, 0), vec![0])]).unwrap(),
            StrongSemilattice::new(Semilattice::chain(2), vec![k4, z(2)], vec![((1, 0), vec![0, 0])]).unwrap(),
        ];
        for c in &cases {
            assert_eq!(c.connectors_injective(), c.flatten().is_e_unitary());
        }
    }

    #[test]
    fn purity_examples() {
        let single = StrongSemilattice::new(Semilattice::chain(1), vec![z(3)], vec![]).unwrap();
        assert!(is_automorphism_pure(&single, 12).unwrap().pure);
        assert!(is_automorphism_pure(&two_chain_z2(), 12).unwrap().pure);
        let band = RectangularBand::new(2, 1).unwrap().to_semigroup();
        let normal = StrongSemilattice::new(
            Semilattice::chain(2),
            vec![RectangularBand::new(2, 2).unwrap().to_semigroup(), band],
            vec![((1, 0), vec![0, 2])],
        )
        .unwrap();
        let report = is_automorphism_pure(&normal, 12).unwrap();
        assert!(report.pure && report.witnesses.is_empty());
    }

    #[test]
    fn relations_on_a_three_chain() {
        let c = constant_sss(Semilattice::chain(3), vec![z(2), z(3), z(2)], vec![0, 0, 0]).unwrap();
        let eta = eta_relation(&c.sss, 12).unwrap();
        assert_eq!(eta.classes(), vec![vec![0, 2], vec![1]]);
        assert!(upsilon_relation(&c, 12).unwrap().is_subset_of(&eta));
        let inj = embedded_chain();
        assert!(xi_relation(&inj).unwrap().is_subset_of(&eta_relation(&inj, 12).unwrap()));
    }
}
