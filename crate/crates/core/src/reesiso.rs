//! Isomorphisms of Rees matrix semigroups as quadruples
//! `(theta, psi, (u_i), (v_lambda))` acting by
//! `(i, g, lambda) -> (i psi, u_i (g theta) v_lambda, lambda psi)`.
//!
//! A quadruple is an isomorphism `M0[G; I, Lambda; P] -> M0[G'; I', Lambda'; Q]`
//! exactly when `theta` and `psi` are isomorphisms and
//! `p_{lambda,i} theta = v_lambda q_{lambda psi, i psi} u_i` at every nonzero
//! entry of `P`.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraph::{self, BipartiteIso, ForestStep, Vertex};
use crate::groups::{group_isomorphisms, FiniteGroup, GroupMap};
use crate::rees::{Element, ReesComponentDecomposition, ReesMatrixSemigroup};
use crate::relation::Relation;

/// Default bound on `|Iso(G, G')| * |Iso(Gamma(P), Gamma(Q))| * |G'|^components`.
pub const DEFAULT_CANDIDATE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesIsoError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("codomain of the first isomorphism is not the domain of the second: {0}")]
    DomainMismatch(String),
    #[error("{candidates} candidate quadruples exceed the limit {limit}")]
    SizeLimitExceeded { candidates: u128, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReesIso {
    pub theta: GroupMap,
    pub psi: BipartiteIso,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoCheck {
    Valid,
    ThetaNotIsomorphism,
    PsiNotGraphIsomorphism,
    EntryCondition { lambda: usize, i: usize },
}

impl IsoCheck {
    pub fn is_valid(self) -> bool {
        self == IsoCheck::Valid
    }
}

impl ReesIso {
    pub fn identity(s: &ReesMatrixSemigroup) -> Self {
        let e = s.group().identity();
        Self {
            theta: GroupMap::identity(s.group().order()),
            psi: BipartiteIso::identity(s.index_size(), s.lambda_size()),
            u: vec![e; s.index_size()],
            v: vec![e; s.lambda_size()],
        }
    }

    /// Image of element `x` of `s` in `t`.
    pub fn apply(&self, s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, x: usize) -> usize {
        match s.decode(x) {
            Element::Zero => 0,
            Element::Triple { i, g, lambda } => {
                let h = t.group();
                let value = h.mul(h.mul(self.u[i], self.theta.apply(g)), self.v[lambda]);
                t.triple(self.psi.left[i], value, self.psi.right[lambda])
            }
        }
    }

    pub fn to_map(&self, s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup) -> Vec<usize> {
        (0..s.order()).map(|x| self.apply(s, t, x)).collect()
    }
}

fn shape_of(s: &ReesMatrixSemigroup) -> (usize, usize, usize) {
    (s.group().order(), s.index_size(), s.lambda_size())
}

fn check_shape(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, phi: &ReesIso) -> Result<(), ReesIsoError> {
    let (g, i, l) = shape_of(s);
    if shape_of(t) != (g, i, l) {
        return Err(ReesIsoError::ShapeMismatch(format!("(|G|, |I|, |Lambda|) = {:?} vs {:?}", (g, i, l), shape_of(t))));
    }
    let lens = [phi.theta.images.len(), phi.psi.left.len(), phi.psi.right.len(), phi.u.len(), phi.v.len()];
    if lens != [g, i, l, i, l] {
        return Err(ReesIsoError::ShapeMismatch(format!("quadruple component lengths {lens:?}, expected {:?}", [g, i, l, i, l])));
    }
    let in_range = phi.theta.images.iter().chain(&phi.u).chain(&phi.v).all(|&x| x < g)
        && phi.psi.left.iter().all(|&x| x < i)
        && phi.psi.right.iter().all(|&x| x < l);
    if !in_range {
        return Err(ReesIsoError::ShapeMismatch("quadruple entry out of range".into()));
    }
    Ok(())
}

/// Checks the quadruple against the isomorphism criterion; the first failing
/// entry is reported in row-major order.
pub fn validate_iso(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, phi: &ReesIso) -> Result<IsoCheck, ReesIsoError> {
    check_shape(s, t, phi)?;
    if !phi.theta.is_isomorphism(s.group(), t.group()) {
        return Ok(IsoCheck::ThetaNotIsomorphism);
    }
    if !phi.psi.is_isomorphism(&s.induced_graph(), &t.induced_graph()) {
        return Ok(IsoCheck::PsiNotGraphIsomorphism);
    }
    let h = t.group();
    for (lambda, i, p) in s.matrix().nonzero() {
        let q = t.matrix().get(phi.psi.right[lambda], phi.psi.left[i]).expect("psi preserves edges");
        if phi.theta.apply(p) != h.mul(h.mul(phi.v[lambda], q), phi.u[i]) {
            return Ok(IsoCheck::EntryCondition { lambda, i });
        }
    }
    Ok(IsoCheck::Valid)
}

/// `phi` followed by `next`; `target` is the group of the final codomain.
pub fn compose_iso(phi: &ReesIso, next: &ReesIso, target: &FiniteGroup) -> Result<ReesIso, ReesIsoError> {
    let mid = (phi.theta.images.len(), phi.psi.left.len(), phi.psi.right.len());
    let dom = (next.theta.images.len(), next.psi.left.len(), next.psi.right.len());
    if mid != dom || target.order() != dom.0 || next.u.len() != dom.1 || next.v.len() != dom.2 {
        return Err(ReesIsoError::DomainMismatch(format!("(|G|, |I|, |Lambda|) = {mid:?} vs {dom:?}")));
    }
    let t2 = &next.theta;
    Ok(ReesIso {
        theta: phi.theta.then(t2),
        psi: phi.psi.then(&next.psi),
        u: phi.u.iter().enumerate().map(|(i, &ui)| target.mul(next.u[phi.psi.left[i]], t2.apply(ui))).collect(),
        v: phi.v.iter().enumerate().map(|(l, &vl)| target.mul(t2.apply(vl), next.v[phi.psi.right[l]])).collect(),
    })
}

/// Inverse quadruple; `target` is the group of the codomain of `phi`.
pub fn invert_iso(phi: &ReesIso, target: &FiniteGroup) -> ReesIso {
    let theta = phi.theta.inverse();
    let psi = phi.psi.inverse();
    let u = psi.left.iter().map(|&i| theta.apply(target.inv(phi.u[i]))).collect();
    let v = psi.right.iter().map(|&l| theta.apply(target.inv(phi.v[l]))).collect();
    ReesIso { theta, psi, u, v }
}

/// Forest steps of the induced graph, split per component.
fn component_forests(s: &ReesMatrixSemigroup) -> Vec<Vec<ForestStep>> {
    let mut out: Vec<Vec<ForestStep>> = Vec::new();
    for step in bigraph::bfs_forest(&s.induced_graph()) {
        if matches!(step, ForestStep::Root(_)) {
            out.push(Vec::new());
        }
        out.last_mut().expect("forests start with a root").push(step);
    }
    out
}

/// Gauge assignments on one component: `(i, u_i)` and `(lambda, v_lambda)`.
type ComponentGauge = (Vec<(usize, usize)>, Vec<(usize, usize)>);

struct Solver<'a> {
    s: &'a ReesMatrixSemigroup,
    t: &'a ReesMatrixSemigroup,
    forests: Vec<Vec<ForestStep>>,
}

impl Solver<'_> {
    /// Every consistent gauge of one component for fixed `theta` and `psi`:
    /// the root value ranges over `G'` and the tree edges determine the rest.
    fn component_gauges(&self, forest: &[ForestStep], theta: &GroupMap, psi: &BipartiteIso) -> Vec<ComponentGauge> {
        let h = self.t.group();
        let entries = |lambda: usize, i: usize| {
            let p = self.s.matrix().get(lambda, i).expect("forest edge");
            let q = self.t.matrix().get(psi.right[lambda], psi.left[i]).expect("psi preserves edges");
            (theta.apply(p), q)
        };
        let mut out = Vec::new();
        for root_value in h.elements() {
            let mut u: BTreeMap<usize, usize> = BTreeMap::new();
            let mut v: BTreeMap<usize, usize> = BTreeMap::new();
            for step in forest {
                match *step {
                    ForestStep::Root(Vertex::Left(i)) => {
                        u.insert(i, root_value);
                    }
                    ForestStep::Root(Vertex::Right(l)) => {
                        v.insert(l, root_value);
                    }
                    // p theta = v q u  =>  v = (p theta) u^-1 q^-1,  u = q^-1 v^-1 (p theta)
                    ForestStep::Edge { parent: Vertex::Left(i), child: Vertex::Right(l) } => {
                        let (pt, q) = entries(l, i);
                        v.insert(l, h.mul(h.mul(pt, h.inv(u[&i])), h.inv(q)));
                    }
                    ForestStep::Edge { parent: Vertex::Right(l), child: Vertex::Left(i) } => {
                        let (pt, q) = entries(l, i);
                        u.insert(i, h.mul(h.mul(h.inv(q), h.inv(v[&l])), pt));
                    }
                    ForestStep::Edge { .. } => unreachable!("bipartite forest edges join opposite sides"),
                }
            }
            let consistent = itertools::iproduct!(v.keys(), u.keys()).all(|(&l, &i)| match self.s.matrix().get(l, i) {
                None => true,
                Some(_) => {
                    let (pt, q) = entries(l, i);
                    pt == h.mul(h.mul(v[&l], q), u[&i])
                }
            });
            if consistent {
                out.push((u.into_iter().collect(), v.into_iter().collect()));
            }
        }
        out
    }

    /// All quadruples for one `(theta, psi)`, calling `emit` on each.
    fn solve(&self, theta: &GroupMap, psi: &BipartiteIso, emit: &mut dyn FnMut(ReesIso) -> bool) -> bool {
        let per_component: Vec<Vec<ComponentGauge>> =
            self.forests.iter().map(|f| self.component_gauges(f, theta, psi)).collect();
        if per_component.iter().any(Vec::is_empty) {
            return true;
        }
        for choice in per_component.iter().map(|c| c.iter()).multi_cartesian_product() {
            let mut u = vec![0; self.s.index_size()];
            let mut v = vec![0; self.s.lambda_size()];
            for (us, vs) in choice {
                for &(i, x) in us {
                    u[i] = x;
                }
                for &(l, x) in vs {
                    v[l] = x;
                }
            }
            if !emit(ReesIso { theta: theta.clone(), psi: psi.clone(), u, v }) {
                return false;
            }
        }
        true
    }
}

/// Drives the search over `theta` in `thetas` and every graph isomorphism,
/// stopping when `emit` returns false.
fn search(
    s: &ReesMatrixSemigroup,
    t: &ReesMatrixSemigroup,
    thetas: &[GroupMap],
    limit: u64,
    emit: &mut dyn FnMut(ReesIso) -> bool,
) -> Result<(), ReesIsoError> {
    if shape_of(s) != shape_of(t) {
        return Ok(());
    }
    // Only the plain graph is used for pruning: entries are not invariants
    // of psi, since u and v can absorb them.
    let psis = bigraph::all_isomorphisms(&s.induced_graph(), &t.induced_graph());
    let forests = component_forests(s);
    let candidates = thetas.len() as u128 * psis.len() as u128 * (t.group().order() as u128).pow(forests.len() as u32);
    if candidates > limit as u128 {
        return Err(ReesIsoError::SizeLimitExceeded { candidates, limit });
    }
    let solver = Solver { s, t, forests };
    for theta in thetas {
        for psi in &psis {
            if !solver.solve(theta, psi, emit) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn collect_distinct(
    s: &ReesMatrixSemigroup,
    t: &ReesMatrixSemigroup,
    thetas: &[GroupMap],
    limit: u64,
) -> Result<Vec<ReesIso>, ReesIsoError> {
    let mut by_map: BTreeMap<Vec<usize>, ReesIso> = BTreeMap::new();
    search(s, t, thetas, limit, &mut |phi| {
        by_map.entry(phi.to_map(s, t)).or_insert(phi);
        true
    })?;
    Ok(by_map.into_values().collect())
}

/// Every isomorphism `S -> T`, one quadruple per element map, sorted by map.
pub fn enumerate_isos(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, limit: u64) -> Result<Vec<ReesIso>, ReesIsoError> {
    collect_distinct(s, t, &group_isomorphisms(s.group(), t.group()), limit)
}

pub fn enumerate_automorphisms(s: &ReesMatrixSemigroup, limit: u64) -> Result<Vec<ReesIso>, ReesIsoError> {
    enumerate_isos(s, s, limit)
}

pub fn first_iso(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, limit: u64) -> Result<Option<ReesIso>, ReesIsoError> {
    let mut found = None;
    search(s, t, &group_isomorphisms(s.group(), t.group()), limit, &mut |phi| {
        found = Some(phi);
        false
    })?;
    Ok(found)
}

/// The identity of `G` as a map into `G'`, when both carry the same table.
fn trivial_theta(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup) -> Vec<GroupMap> {
    let id = GroupMap::identity(s.group().order());
    if id.is_isomorphism(s.group(), t.group()) {
        vec![id]
    } else {
        Vec::new()
    }
}

/// `Iso(S; T)(1_G)`: the isomorphisms with a representation whose group
/// part is the identity. Both semigroups must be over the same group table.
pub fn enumerate_trivial_isos(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, limit: u64) -> Result<Vec<ReesIso>, ReesIsoError> {
    collect_distinct(s, t, &trivial_theta(s, t), limit)
}

pub fn first_trivial_iso(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, limit: u64) -> Result<Option<ReesIso>, ReesIsoError> {
    let mut found = None;
    search(s, t, &trivial_theta(s, t), limit, &mut |phi| {
        found = Some(phi);
        false
    })?;
    Ok(found)
}

/// Rewrites `phi` with the identity as group part when `theta` is
/// conjugation `g -> c g c^-1`: then `u_i c` and `c^-1 v_lambda` give the
/// same element map. Returns `None` for outer `theta`, for which no such
/// representation exists. Both groups must share one table.
pub fn try_trivialize(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, phi: &ReesIso) -> Option<ReesIso> {
    let g = s.group();
    if g != t.group() {
        return None;
    }
    let c = g.elements().find(|&c| g.elements().all(|x| phi.theta.apply(x) == g.mul(g.mul(c, x), g.inv(c))))?;
    Some(ReesIso {
        theta: GroupMap::identity(g.order()),
        psi: phi.psi.clone(),
        u: phi.u.iter().map(|&ui| g.mul(ui, c)).collect(),
        v: phi.v.iter().map(|&vl| g.mul(g.inv(c), vl)).collect(),
    })
}

/// An automorphism split along the connected Rees components: component
/// `k` is carried onto component `pi[k]` by `restrictions[k]`, a quadruple
/// between the component semigroups in local indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSplit {
    pub pi: Vec<usize>,
    pub restrictions: Vec<ReesIso>,
}

pub fn decompose_by_components(s: &ReesMatrixSemigroup, d: &ReesComponentDecomposition, phi: &ReesIso) -> ComponentSplit {
    let mut comp_of_i = vec![(0, 0); s.index_size()];
    let mut comp_of_l = vec![(0, 0); s.lambda_size()];
    for (k, c) in d.components.iter().enumerate() {
        for (a, &i) in c.indices.iter().enumerate() {
            comp_of_i[i] = (k, a);
        }
        for (b, &l) in c.lambdas.iter().enumerate() {
            comp_of_l[l] = (k, b);
        }
    }
    let mut pi = Vec::with_capacity(d.components.len());
    let mut restrictions = Vec::with_capacity(d.components.len());
    for c in &d.components {
        let target = comp_of_i[phi.psi.left[c.indices[0]]].0;
        pi.push(target);
        restrictions.push(ReesIso {
            theta: phi.theta.clone(),
            psi: BipartiteIso {
                left: c.indices.iter().map(|&i| comp_of_i[phi.psi.left[i]].1).collect(),
                right: c.lambdas.iter().map(|&l| comp_of_l[phi.psi.right[l]].1).collect(),
            },
            u: c.indices.iter().map(|&i| phi.u[i]).collect(),
            v: c.lambdas.iter().map(|&l| phi.v[l]).collect(),
        });
    }
    ComponentSplit { pi, restrictions }
}

/// Reassembles a global quadruple from per-component pieces sharing `theta`.
pub fn recompose(s: &ReesMatrixSemigroup, d: &ReesComponentDecomposition, split: &ComponentSplit) -> ReesIso {
    let mut psi = BipartiteIso::identity(s.index_size(), s.lambda_size());
    let mut u = vec![0; s.index_size()];
    let mut v = vec![0; s.lambda_size()];
    for (k, (c, r)) in d.components.iter().zip(&split.restrictions).enumerate() {
        let target = &d.components[split.pi[k]];
        for (a, &i) in c.indices.iter().enumerate() {
            psi.left[i] = target.indices[r.psi.left[a]];
            u[i] = r.u[a];
        }
        for (b, &l) in c.lambdas.iter().enumerate() {
            psi.right[l] = target.lambdas[r.psi.right[b]];
            v[l] = r.v[b];
        }
    }
    let theta = split.restrictions.first().map_or_else(|| GroupMap::identity(s.group().order()), |r| r.theta.clone());
    ReesIso { theta, psi, u, v }
}

/// `k eta l` iff some isomorphism between components `k` and `l` has trivial
/// group part.
pub fn eta_relation(s: &ReesMatrixSemigroup, d: &ReesComponentDecomposition, limit: u64) -> Result<Relation, ReesIsoError> {
    let parts: Vec<ReesMatrixSemigroup> = d.components.iter().map(|c| c.semigroup(s.group())).collect();
    let n = parts.len();
    let mut related = vec![false; n * n];
    for (k, l) in itertools::iproduct!(0..n, 0..n) {
        related[k * n + l] = first_trivial_iso(&parts[k], &parts[l], limit)?.is_some();
    }
    Ok(Relation::from_fn(n, |k, l| related[k * n + l]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsemi::brute_force_isomorphisms;
    use crate::rees::SandwichMatrix;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    const LIMIT: u64 = DEFAULT_CANDIDATE_LIMIT;

    fn row_matrix(group: FiniteGroup, entries: &[usize]) -> ReesMatrixSemigroup {
        ReesMatrixSemigroup::new(group, SandwichMatrix::new(vec![entries.iter().map(|&x| Some(x)).collect()]).unwrap()).unwrap()
    }

    fn maps(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup, isos: &[ReesIso]) -> Vec<Vec<usize>> {
        isos.iter().map(|phi| phi.to_map(s, t)).collect()
    }

    #[test]
    fn identity_and_trivial_group() {
        let s = ReesMatrixSemigroup::brandt(FiniteGroup::trivial(), 1);
        assert_eq!(validate_iso(&s, &s, &ReesIso::identity(&s)), Ok(IsoCheck::Valid));
        assert_eq!(enumerate_automorphisms(&s, LIMIT).unwrap().len(), 1);
    }

    #[test]
    fn row_example() {
        let z3 = FiniteGroup::cyclic(3);
        let a = 1;
        let s = row_matrix(z3.clone(), &[0, a]);
        let t = row_matrix(z3.clone(), &[0, 0]);
        let phi = ReesIso { theta: GroupMap::identity(3), psi: BipartiteIso::identity(2, 1), u: vec![0, a], v: vec![0] };
        assert_eq!(validate_iso(&s, &t, &phi), Ok(IsoCheck::Valid));
        let broken = ReesIso { u: vec![0, 0], ..phi.clone() };
        assert_eq!(validate_iso(&s, &t, &broken), Ok(IsoCheck::EntryCondition { lambda: 0, i: 1 }));
        // (2, g, 1) -> (2, a g, 1)
        for g in 0..3 {
            assert_eq!(phi.apply(&s, &t, s.triple(1, g, 0)), t.triple(1, z3.mul(a, g), 0));
        }
        let all = enumerate_isos(&s, &t, LIMIT).unwrap();
        assert!(maps(&s, &t, &all).contains(&phi.to_map(&s, &t)));
        let back = invert_iso(&phi, t.group());
        assert_eq!(validate_iso(&t, &s, &back), Ok(IsoCheck::Valid));
        let round = back.to_map(&t, &s);
        assert!((0..s.order()).all(|x| round[phi.apply(&s, &t, x)] == x));
    }

    #[test]
    fn shape_errors() {
        let s = ReesMatrixSemigroup::brandt(FiniteGroup::cyclic(2), 2);
        let t = ReesMatrixSemigroup::brandt(FiniteGroup::cyclic(2), 3);
        assert!(matches!(validate_iso(&s, &t, &ReesIso::identity(&s)), Err(ReesIsoError::ShapeMismatch(_))));
        let phi = ReesIso::identity(&s);
        assert!(matches!(compose_iso(&phi, &ReesIso::identity(&t), t.group()), Err(ReesIsoError::DomainMismatch(_))));
    }

    #[test]
    fn brandt_matches_brute_force() {
        let s = ReesMatrixSemigroup::brandt(FiniteGroup::cyclic(2), 2);
        let flat = s.to_semigroup();
        let structured: Vec<Vec<usize>> = maps(&s, &s, &enumerate_automorphisms(&s, LIMIT).unwrap());
        assert_eq!(structured, brute_force_isomorphisms(&flat, &flat, 12).unwrap());
        assert_eq!(structured.len(), 4);
    }

    #[test]
    fn diagonal_example_is_already_trivial() {
        let z3 = FiniteGroup::cyclic(3);
        let diag = ReesMatrixSemigroup::new(z3.clone(), SandwichMatrix::from_fn(3, 3, |l, i| (l == i).then_some(i))).unwrap();
        let brandt = ReesMatrixSemigroup::brandt(z3.clone(), 3);
        let phi = ReesIso {
            theta: GroupMap::identity(3),
            psi: BipartiteIso::identity(3, 3),
            u: (0..3).map(|i| z3.inv(i)).collect(),
            v: vec![0; 3],
        };
        assert_eq!(validate_iso(&brandt, &diag, &phi), Ok(IsoCheck::Valid));
        assert_eq!(try_trivialize(&brandt, &diag, &phi), Some(phi));
    }

    #[test]
    fn brandt_swap_permutes_components() {
        let s = ReesMatrixSemigroup::brandt(FiniteGroup::cyclic(2), 2);
        let d = s.decompose_components();
        let swaps: Vec<ReesIso> = enumerate_automorphisms(&s, LIMIT).unwrap().into_iter().filter(|phi| phi.psi.left == [1, 0]).collect();
        assert!(!swaps.is_empty());
        for phi in swaps {
            let split = decompose_by_components(&s, &d, &phi);
            assert_eq!(split.pi, vec![1, 0]);
            assert_eq!(recompose(&s, &d, &split), phi);
        }
        let connected = ReesMatrixSemigroup::new(FiniteGroup::cyclic(2), SandwichMatrix::from_fn(2, 2, |_, _| Some(0))).unwrap();
        let dc = connected.decompose_components();
        for phi in enumerate_automorphisms(&connected, LIMIT).unwrap() {
            let split = decompose_by_components(&connected, &dc, &phi);
            assert_eq!(split.pi, vec![0]);
            assert_eq!(split.restrictions.len(), 1);
        }
    }

    #[test]
    fn eta_on_mixed_components() {
        // blocks (0) and (1) over Z_2 are isomorphic only through a nonidentity gauge,
        // which still has trivial group part; a 2x2 all-identity block is not
        let z2 = FiniteGroup::cyclic(2);
        let m = SandwichMatrix::new(vec![
            vec![Some(0), None, None, None],
            vec![None, Some(1), None, None],
            vec![None, None, Some(0), Some(0)],
            vec![None, None, Some(0), Some(0)],
        ])
        .unwrap();
        let s = ReesMatrixSemigroup::new(z2, m).unwrap();
        let d = s.decompose_components();
        let eta = eta_relation(&s, &d, LIMIT).unwrap();
        assert!(eta.is_equivalence());
        assert_eq!(eta.classes(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn outer_automorphisms_do_not_trivialize() {
        // Z_3 has an outer automorphism (inversion), which cannot be absorbed
        let s = ReesMatrixSemigroup::brandt(FiniteGroup::cyclic(3), 1);
        let auts = enumerate_automorphisms(&s, LIMIT).unwrap();
        let trivial = enumerate_trivial_isos(&s, &s, LIMIT).unwrap();
        let by_filter: Vec<Vec<usize>> = auts.iter().filter(|phi| try_trivialize(&s, &s, phi).is_some()).map(|phi| phi.to_map(&s, &s)).collect();
        assert_eq!(maps(&s, &s, &trivial), by_filter);
        assert!(trivial.len() < auts.len());
    }

    /// Small Rees semigroups together with an isomorphic relabelled copy.
    fn instance() -> impl Strategy<Value = ReesMatrixSemigroup> {
        crate::rees::tests::small_rees().prop_filter("keep brute force fast", |s| s.order() <= 28)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enumeration_matches_brute_force(s in instance(), t in instance()) {
            let fs = s.to_semigroup();
            let ft = t.to_semigroup();
            let structured = maps(&s, &t, &enumerate_isos(&s, &t, LIMIT).unwrap());
            prop_assert_eq!(structured, brute_force_isomorphisms(&fs, &ft, 64).unwrap());
            let auts = enumerate_automorphisms(&s, LIMIT).unwrap();
            prop_assert_eq!(maps(&s, &s, &auts), brute_force_isomorphisms(&fs, &fs, 64).unwrap());
            for phi in &auts {
                prop_assert!(validate_iso(&s, &s, phi).unwrap().is_valid());
                prop_assert!(fs.is_isomorphism(&fs, &phi.to_map(&s, &s)));
            }
        }

        #[test]
        fn calculus_agrees_with_maps(s in instance()) {
            let auts = enumerate_automorphisms(&s, LIMIT).unwrap();
            let sample: Vec<&ReesIso> = auts.iter().step_by(auts.len().div_ceil(12)).collect();
            let g = s.group();
            for a in &sample {
                let ma = a.to_map(&s, &s);
                let inv = invert_iso(a, g);
                let mi = inv.to_map(&s, &s);
                prop_assert!((0..s.order()).all(|x| mi[ma[x]] == x));
                prop_assert_eq!(invert_iso(&inv, g).to_map(&s, &s), ma.clone());
                for b in &sample {
                    let mb = b.to_map(&s, &s);
                    let composed = compose_iso(a, b, g).unwrap().to_map(&s, &s);
                    prop_assert!((0..s.order()).all(|x| composed[x] == mb[ma[x]]));
                }
            }
        }

        #[test]
        fn trivial_part_is_a_subgroup(s in instance()) {
            let g = s.group();
            let trivial = enumerate_trivial_isos(&s, &s, LIMIT).unwrap();
            let set: BTreeSet<Vec<usize>> = trivial.iter().map(|phi| phi.to_map(&s, &s)).collect();
            for a in &trivial {
                prop_assert!(set.contains(&invert_iso(a, g).to_map(&s, &s)));
                for b in &trivial {
                    prop_assert!(set.contains(&compose_iso(a, b, g).unwrap().to_map(&s, &s)));
                }
            }
            let by_filter: BTreeSet<Vec<usize>> = enumerate_automorphisms(&s, LIMIT).unwrap().iter()
                .filter_map(|phi| try_trivialize(&s, &s, phi))
                .map(|phi| phi.to_map(&s, &s))
                .collect();
            prop_assert_eq!(set, by_filter);
        }

        #[test]
        fn component_split_round_trips(s in instance()) {
            let d = s.decompose_components();
            for phi in enumerate_automorphisms(&s, LIMIT).unwrap().iter().take(40) {
                let split = decompose_by_components(&s, &d, phi);
                prop_assert_eq!(&recompose(&s, &d, &split), phi);
                for (k, r) in split.restrictions.iter().enumerate() {
                    let src = d.components[k].semigroup(s.group());
                    let dst = d.components[split.pi[k]].semigroup(s.group());
                    prop_assert!(validate_iso(&src, &dst, r).unwrap().is_valid());
                    prop_assert_eq!(&r.theta, &phi.theta);
                }
            }
        }
    }
}
