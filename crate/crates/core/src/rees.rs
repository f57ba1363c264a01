//! Rees matrix semigroups `M0[G; I, Lambda; P]`.
//!
//! Elements are encoded as integers: `0` is the zero and `(i, g, lambda)` is
//! `1 + (i * |G| + g) * |Lambda| + lambda`. The sandwich matrix is stored
//! `Lambda x I`, row `lambda`, column `i`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraph::{self, BipartiteGraph, BipartiteIso, ForestStep, LabelledBipartiteGraph, Vertex};
use crate::finsemi::FiniteSemigroup;
use crate::groups::{FiniteGroup, GroupMap};
use crate::reesiso::ReesIso;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("sandwich matrix is empty")]
    EmptyMatrix,
    #[error("sandwich matrix row {row} has {len} entries, expected {expected}")]
    RaggedMatrix { row: usize, len: usize, expected: usize },
    #[error("entry ({lambda}, {i}) = {value} is not an element of a group of order {order}")]
    EntryOutOfRange { lambda: usize, i: usize, value: usize, order: usize },
    #[error("not regular: row {0} is entirely zero")]
    ZeroRow(usize),
    #[error("not regular: column {0} is entirely zero")]
    ZeroColumn(usize),
    #[error("index {0} claimed by two components")]
    IndexCollision(String),
    #[error("index {0} belongs to no component")]
    MissingIndex(String),
    #[error("component {component} has a {rows}x{cols} matrix for {expected_rows}x{expected_cols} indices")]
    ComponentShape { component: usize, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("need {needed} distinct non-identity elements, the group has {available}")]
    NotEnoughElements { needed: usize, available: usize },
    #[error("truncation {n} is smaller than k = {k}")]
    TruncationTooSmall { k: usize, n: usize },
    #[error("tuple position {0} is the zero")]
    ZeroEntry(usize),
    #[error("{0} is not an element")]
    NotAnElement(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SandwichMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Option<usize>>,
}

impl SandwichMatrix {
    /// `rows[lambda][i]`; `None` is the zero.
    pub fn new(rows: Vec<Vec<Option<usize>>>) -> Result<Self, ReesError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(ReesError::EmptyMatrix);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(ReesError::RaggedMatrix { row, len: r.len(), expected: cols });
        }
        Ok(Self { rows: rows.len(), cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> Option<usize>) -> Self {
        let entries = itertools::iproduct!(0..rows, 0..cols).map(|(l, i)| entry(l, i)).collect();
        Self { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |l, i| (l == i).then_some(0))
    }

    /// `|Lambda|`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `|I|`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, lambda: usize, i: usize) -> Option<usize> {
        self.entries[lambda * self.cols + i]
    }

    pub fn to_rows(&self) -> Vec<Vec<Option<usize>>> {
        self.entries.chunks(self.cols).map(<[Option<usize>]>::to_vec).collect()
    }

    /// `(lambda, i, p)` for every nonzero entry.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        itertools::iproduct!(0..self.rows, 0..self.cols).filter_map(|(l, i)| self.get(l, i).map(|p| (l, i, p)))
    }

    /// Matrix with rows and columns reordered: entry `(a, b)` of the result
    /// is entry `(row_order[a], col_order[b])` of `self`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        Self::from_fn(row_order.len(), col_order.len(), |a, b| self.get(row_order[a], col_order[b]))
    }

    fn check_regular(&self) -> Result<(), ReesError> {
        if let Some(l) = (0..self.rows).find(|&l| (0..self.cols).all(|i| self.get(l, i).is_none())) {
            return Err(ReesError::ZeroRow(l));
        }
        if let Some(i) = (0..self.cols).find(|&i| (0..self.rows).all(|l| self.get(l, i).is_none())) {
            return Err(ReesError::ZeroColumn(i));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Zero,
    Triple { i: usize, g: usize, lambda: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesMatrixSemigroup {
    group: FiniteGroup,
    matrix: SandwichMatrix,
}

impl ReesMatrixSemigroup {
    pub fn new(group: FiniteGroup, matrix: SandwichMatrix) -> Result<Self, ReesError> {
        let order = group.order();
        if let Some((lambda, i, value)) = matrix.nonzero().find(|&(_, _, p)| p >= order) {
            return Err(ReesError::EntryOutOfRange { lambda, i, value, order });
        }
        matrix.check_regular()?;
        Ok(Self { group, matrix })
    }

    /// The Brandt semigroup `B0[G; n]`.
    pub fn brandt(group: FiniteGroup, n: usize) -> Self {
        Self::new(group, SandwichMatrix::identity(n)).expect("identity matrices are regular")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self) -> &SandwichMatrix {
        &self.matrix
    }

    /// `|I|`.
    pub fn index_size(&self) -> usize {
        self.matrix.cols
    }

    /// `|Lambda|`.
    pub fn lambda_size(&self) -> usize {
        self.matrix.rows
    }

    pub fn order(&self) -> usize {
        self.index_size() * self.group.order() * self.lambda_size() + 1
    }

    pub fn encode(&self, e: Element) -> usize {
        match e {
            Element::Zero => 0,
            Element::Triple { i, g, lambda } => 1 + (i * self.group.order() + g) * self.lambda_size() + lambda,
        }
    }

    pub fn decode(&self, x: usize) -> Element {
        if x == 0 {
            return Element::Zero;
        }
        let rest = x - 1;
        let lambda = rest % self.lambda_size();
        let rest = rest / self.lambda_size();
        Element::Triple { i: rest / self.group.order(), g: rest % self.group.order(), lambda }
    }

    pub fn triple(&self, i: usize, g: usize, lambda: usize) -> usize {
        self.encode(Element::Triple { i, g, lambda })
    }

    /// `(i, g, l)(j, h, m) = (i, g p_{l,j} h, m)` when `p_{l,j}` is nonzero,
    /// else the zero.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match (self.decode(x), self.decode(y)) {
            (Element::Triple { i, g, lambda }, Element::Triple { i: j, g: h, lambda: mu }) => match self.matrix.get(lambda, j) {
                Some(p) => self.triple(i, self.group.mul(self.group.mul(g, p), h), mu),
                None => 0,
            },
            _ => 0,
        }
    }

    pub fn to_semigroup(&self) -> FiniteSemigroup {
        let n = self.order();
        let table = itertools::iproduct!(0..n, 0..n).map(|(x, y)| self.mul(x, y)).collect();
        FiniteSemigroup::from_flat_unchecked(n, table)
    }

    /// `{(i, p_{l,i}^-1, l) : p_{l,i} != 0}` together with the zero, sorted.
    pub fn idempotents(&self) -> Vec<usize> {
        let mut e: Vec<usize> = std::iter::once(0)
            .chain(self.matrix.nonzero().map(|(l, i, p)| self.triple(i, self.group.inv(p), l)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn induced_graph(&self) -> BipartiteGraph {
        let edges: Vec<(usize, usize)> = self.matrix.nonzero().map(|(l, i, _)| (i, l)).collect();
        BipartiteGraph::new(self.index_size(), self.lambda_size(), &edges).expect("regular matrices have both index sets")
    }

    /// Edge labels are the entries, written as decimal element indices.
    pub fn induced_labelled_graph(&self) -> LabelledBipartiteGraph {
        let edges: Vec<(usize, usize, String)> = self.matrix.nonzero().map(|(l, i, p)| (i, l, p.to_string())).collect();
        LabelledBipartiteGraph::new(self.index_size(), self.lambda_size(), &edges).expect("regular matrices have both index sets")
    }

    /// The alphabet `G(P)` of nonzero entries.
    pub fn entry_set(&self) -> BTreeSet<usize> {
        self.matrix.nonzero().map(|(_, _, p)| p).collect()
    }

    pub fn decompose_components(&self) -> ReesComponentDecomposition {
        let components: Vec<ReesComponent> = self
            .induced_graph()
            .components()
            .into_iter()
            .map(|c| ReesComponent {
                matrix: self.matrix.permuted(&c.right, &c.left),
                indices: c.left,
                lambdas: c.right,
            })
            .collect();
        let col_order = components.iter().flat_map(|c| c.indices.iter().copied()).collect();
        let row_order = components.iter().flat_map(|c| c.lambdas.iter().copied()).collect();
        ReesComponentDecomposition { components, row_order, col_order }
    }

    /// Replaces the group and matrix with isomorphic copies.
    fn with_matrix(&self, matrix: SandwichMatrix) -> Self {
        Self { group: self.group.clone(), matrix }
    }

    /// An isomorphic semigroup over the same group whose matrix is the
    /// identity on a breadth-first spanning forest of the induced graph,
    /// together with the witnessing isomorphism (trivial group part).
    pub fn graham_normalize(&self) -> Normalization {
        let g = &self.group;
        let graph = self.induced_graph();
        let forest = bigraph::bfs_forest(&graph);
        let mut u = vec![g.identity(); self.index_size()];
        let mut v = vec![g.identity(); self.lambda_size()];
        let mut tree_edges = Vec::new();
        let entry = |l: usize, i: usize| self.matrix.get(l, i).expect("forest edges are nonzero entries");
        for step in &forest {
            match *step {
                ForestStep::Root(Vertex::Left(i)) => u[i] = g.identity(),
                ForestStep::Root(Vertex::Right(l)) => v[l] = g.identity(),
                ForestStep::Edge { parent: Vertex::Left(i), child: Vertex::Right(l) } => {
                    v[l] = g.mul(entry(l, i), g.inv(u[i]));
                    tree_edges.push((i, l));
                }
                ForestStep::Edge { parent: Vertex::Right(l), child: Vertex::Left(i) } => {
                    u[i] = g.mul(g.inv(v[l]), entry(l, i));
                    tree_edges.push((i, l));
                }
                ForestStep::Edge { .. } => unreachable!("bipartite forest edges join opposite sides"),
            }
        }
        // p = v q u, so q = v^-1 p u^-1
        let normalized = SandwichMatrix::from_fn(self.lambda_size(), self.index_size(), |l, i| {
            self.matrix.get(l, i).map(|p| g.mul(g.mul(g.inv(v[l]), p), g.inv(u[i])))
        });
        let iso = ReesIso {
            theta: GroupMap::identity(g.order()),
            psi: BipartiteIso::identity(self.index_size(), self.lambda_size()),
            u,
            v,
        };
        Normalization { semigroup: self.with_matrix(normalized), iso, tree_edges }
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        let normal = self.graham_normalize().semigroup;
        let identity = self.group.identity();
        let is_pure_matrix = normal.matrix.nonzero().all(|(_, _, p)| p == identity);
        let graph = self.induced_graph();
        let is_brandt = graph.left_size() == graph.right_size()
            && (0..graph.vertex_count()).all(|v| graph.degree(graph.vertex(v)) == 1);
        let e = self.idempotents();
        let is_orthodox = itertools::iproduct!(&e, &e).all(|(&a, &b)| e.binary_search(&self.mul(a, b)).is_ok());
        let flat = self.to_semigroup();
        let h_of = flat.h_class_of();
        let generated = flat.idempotent_generated();
        let is_pure_houghton = generated.iter().map(|&x| h_of[x]).collect::<BTreeSet<_>>().len() == generated.len();
        StructuralPredicates { is_brandt, is_pure_matrix, is_pure_houghton, is_orthodox }
    }

    /// `Gamma(a)`: the vertex tuple `(i_1, l_1, ..., i_n, l_n)`.
    pub fn gamma_tuple(&self, tuple: &[usize]) -> Result<Vec<Vertex>, ReesError> {
        let mut out = Vec::with_capacity(2 * tuple.len());
        for (pos, &x) in tuple.iter().enumerate() {
            if x >= self.order() {
                return Err(ReesError::NotAnElement(x));
            }
            match self.decode(x) {
                Element::Zero => return Err(ReesError::ZeroEntry(pos)),
                Element::Triple { i, lambda, .. } => out.extend([Vertex::Left(i), Vertex::Right(lambda)]),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub semigroup: ReesMatrixSemigroup,
    /// Isomorphism from the input onto `semigroup`.
    pub iso: ReesIso,
    /// Spanning forest edges `(i, lambda)`; each carries the identity after
    /// normalization.
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralPredicates {
    /// The induced graph is a perfect matching, so the matrix is an identity
    /// matrix up to reindexing and normalization.
    pub is_brandt: bool,
    /// Normalized entries are all zero or the identity.
    pub is_pure_matrix: bool,
    /// Distinct elements of the idempotent-generated subsemigroup lie in
    /// distinct H-classes.
    pub is_pure_houghton: bool,
    /// The idempotents are closed under multiplication.
    pub is_orthodox: bool,
}

/// A connected Rees component: indices `I_k`, `Lambda_k` (in increasing
/// order) and the submatrix `P_k` on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReesComponent {
    pub indices: Vec<usize>,
    pub lambdas: Vec<usize>,
    pub matrix: SandwichMatrix,
}

impl ReesComponent {
    pub fn semigroup(&self, group: &FiniteGroup) -> ReesMatrixSemigroup {
        ReesMatrixSemigroup::new(group.clone(), self.matrix.clone()).expect("components of a regular matrix are regular")
    }

    /// The component as a subset of the parent semigroup, zero included.
    pub fn elements_in(&self, parent: &ReesMatrixSemigroup) -> Vec<usize> {
        let mut out: Vec<usize> = std::iter::once(0)
            .chain(
                itertools::iproduct!(&self.indices, parent.group.elements(), &self.lambdas)
                    .map(|(&i, g, &l)| parent.triple(i, g, l)),
            )
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReesComponentDecomposition {
    pub components: Vec<ReesComponent>,
    /// `Lambda` indices in block order.
    pub row_order: Vec<usize>,
    /// `I` indices in block order.
    pub col_order: Vec<usize>,
}

impl ReesComponentDecomposition {
    /// The original matrix with rows and columns permuted into block form.
    pub fn block_matrix(&self, s: &ReesMatrixSemigroup) -> SandwichMatrix {
        s.matrix.permuted(&self.row_order, &self.col_order)
    }
}

/// Glues components over a common group into one Rees matrix semigroup; the
/// index sets of the parts must partition `0..|I|` and `0..|Lambda|`.
pub fn compose_components(group: &FiniteGroup, parts: &[ReesComponent]) -> Result<ReesMatrixSemigroup, ReesError> {
    let total_i: usize = parts.iter().map(|p| p.indices.len()).sum();
    let total_l: usize = parts.iter().map(|p| p.lambdas.len()).sum();
    let mut owner_i = vec![None; total_i];
    let mut owner_l = vec![None; total_l];
    for (k, part) in parts.iter().enumerate() {
        let m = &part.matrix;
        if m.rows != part.lambdas.len() || m.cols != part.indices.len() {
            return Err(ReesError::ComponentShape {
                component: k,
                rows: m.rows,
                cols: m.cols,
                expected_rows: part.lambdas.len(),
                expected_cols: part.indices.len(),
            });
        }
        for (pos, &i) in part.indices.iter().enumerate() {
            let slot = owner_i.get_mut(i).ok_or_else(|| ReesError::MissingIndex(format!("I {}", total_i)))?;
            if slot.replace((k, pos)).is_some() {
                return Err(ReesError::IndexCollision(format!("I {i}")));
            }
        }
        for (pos, &l) in part.lambdas.iter().enumerate() {
            let slot = owner_l.get_mut(l).ok_or_else(|| ReesError::MissingIndex(format!("Lambda {}", total_l)))?;
            if slot.replace((k, pos)).is_some() {
                return Err(ReesError::IndexCollision(format!("Lambda {l}")));
            }
        }
    }
    let owner_i: Vec<(usize, usize)> = owner_i.into_iter().collect::<Option<_>>().ok_or_else(|| ReesError::MissingIndex("I".into()))?;
    let owner_l: Vec<(usize, usize)> = owner_l.into_iter().collect::<Option<_>>().ok_or_else(|| ReesError::MissingIndex("Lambda".into()))?;
    let matrix = SandwichMatrix::from_fn(total_l, total_i, |l, i| {
        let (kl, a) = owner_l[l];
        let (ki, b) = owner_i[i];
        (kl == ki).then(|| parts[kl].matrix.get(a, b)).flatten()
    });
    ReesMatrixSemigroup::new(group.clone(), matrix)
}

/// Finite truncation of the family whose `n x n` matrix carries the
/// non-identity elements `1, ..., k` on the first `k` diagonal positions and
/// the identity everywhere else.
pub fn counterexample_family(group: &FiniteGroup, k: usize, n: usize) -> Result<ReesMatrixSemigroup, ReesError> {
    let available = group.order() - 1;
    if k > available {
        return Err(ReesError::NotEnoughElements { needed: k, available });
    }
    if n < k || n == 0 {
        return Err(ReesError::TruncationTooSmall { k, n });
    }
    let matrix = SandwichMatrix::from_fn(n, n, |l, i| Some(if l == i && i < k { i + 1 } else { group.identity() }));
    ReesMatrixSemigroup::new(group.clone(), matrix)
}
