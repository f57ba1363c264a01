//! Bipartite graphs `<L, R, E>` and edge-labelled bipartite graphs.
//!
//! Vertices are numbered globally with `L` first: left vertex `l` is `l`,
//! right vertex `r` is `|L| + r`. Isomorphisms never exchange the sides.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("both sides of a bipartite graph must be nonempty")]
    EmptySide,
    #[error("edge ({0}, {1}) references a missing vertex")]
    VertexOutOfRange(usize, usize),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("alphabet symbol {0:?} labels no edge")]
    UnusedLabel(String),
    #[error("label {0:?} is not in the alphabet")]
    UnknownLabel(String),
    #[error("relabelling is not a bijection of the alphabet: {0}")]
    NotBijective(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    Left(usize),
    Right(usize),
}

impl Vertex {
    pub fn side(self) -> Side {
        match self {
            Vertex::Left(_) => Side::Left,
            Vertex::Right(_) => Side::Right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    /// `adjacency[l]` is the set of right neighbours of `l`.
    adjacency: Vec<FixedBitSet>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if left == 0 || right == 0 {
            return Err(GraphError::EmptySide);
        }
        let mut g = Self::empty_unchecked(left, right);
        for &(l, r) in edges {
            if l >= left || r >= right {
                return Err(GraphError::VertexOutOfRange(l, r));
            }
            if g.adjacency[l].put(r) {
                return Err(GraphError::DuplicateEdge(l, r));
            }
        }
        Ok(g)
    }

    /// May have an empty side; used for induced subgraphs such as isolated
    /// vertices.
    pub(crate) fn empty_unchecked(left: usize, right: usize) -> Self {
        Self { left, right, adjacency: vec![FixedBitSet::with_capacity(right); left] }
    }

    pub(crate) fn add_edge_unchecked(&mut self, l: usize, r: usize) {
        self.adjacency[l].insert(r);
    }

    pub fn complete(left: usize, right: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = itertools::iproduct!(0..left, 0..right).collect();
        Self::new(left, right, &edges)
    }

    pub fn perfect_matching(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n).map(|i| (i, i)).collect();
        Self::new(n, n, &edges)
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn vertex_count(&self) -> usize {
        self.left + self.right
    }

    #[inline]
    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.adjacency[l].contains(r)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.left).flat_map(|l| self.adjacency[l].ones().map(move |r| (l, r))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|row| row.count_ones(..)).sum()
    }

    pub fn left_neighbours(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[l].ones()
    }

    pub fn right_neighbours(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.left).filter(move |&l| self.has_edge(l, r))
    }

    pub fn vertex(&self, global: usize) -> Vertex {
        if global < self.left {
            Vertex::Left(global)
        } else {
            Vertex::Right(global - self.left)
        }
    }

    pub fn global(&self, v: Vertex) -> usize {
        match v {
            Vertex::Left(l) => l,
            Vertex::Right(r) => self.left + r,
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        match v {
            Vertex::Left(l) => self.adjacency[l].count_ones(..),
            Vertex::Right(r) => self.right_neighbours(r).count(),
        }
    }

    /// Same vertex sets, exactly the missing `L`-`R` pairs as edges.
    pub fn complement(&self) -> Self {
        let mut g = Self::empty_unchecked(self.left, self.right);
        for l in 0..self.left {
            g.adjacency[l].insert_range(..);
            g.adjacency[l].difference_with(&self.adjacency[l]);
        }
        g
    }

    /// Connected components ordered by least global vertex.
    pub fn components(&self) -> Vec<Component> {
        let mut uf = UnionFind::<usize>::new(self.vertex_count());
        for (l, r) in self.edges() {
            uf.union(l, self.left + r);
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        let mut first_seen: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.vertex_count() {
            let root = uf.find(v);
            let key = *first_seen.entry(root).or_insert(v);
            let entry = groups.entry(key).or_default();
            match self.vertex(v) {
                Vertex::Left(l) => entry.0.push(l),
                Vertex::Right(r) => entry.1.push(r),
            }
        }
        groups
            .into_values()
            .map(|(left, right)| {
                let mut graph = Self::empty_unchecked(left.len(), right.len());
                for (a, &l) in left.iter().enumerate() {
                    for (b, &r) in right.iter().enumerate() {
                        if self.has_edge(l, r) {
                            graph.add_edge_unchecked(a, b);
                        }
                    }
                }
                Component { left, right, graph }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

/// A connected component with its induced subgraph; local vertex `a` of the
/// subgraph is `left[a]` in the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub graph: BipartiteGraph,
}

impl Component {
    pub fn vertices(&self) -> Vec<Vertex> {
        self.left.iter().map(|&l| Vertex::Left(l)).chain(self.right.iter().map(|&r| Vertex::Right(r))).collect()
    }
}

/// A bipartite graph whose edges carry labels drawn surjectively from a
/// finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledBipartiteGraph {
    graph: BipartiteGraph,
    /// Row-major `l * |R| + r`; `Some` exactly on edges, indexing `alphabet`.
    labels: Vec<Option<u32>>,
    alphabet: Vec<String>,
}

impl LabelledBipartiteGraph {
    /// The alphabet is exactly the set of labels used, sorted.
    pub fn new(left: usize, right: usize, edges: &[(usize, usize, String)]) -> Result<Self, GraphError> {
        let alphabet: Vec<String> = edges.iter().map(|e| e.2.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        Self::with_alphabet(left, right, edges, alphabet)
    }

    pub fn with_alphabet(
        left: usize,
        right: usize,
        edges: &[(usize, usize, String)],
        mut alphabet: Vec<String>,
    ) -> Result<Self, GraphError> {
        alphabet.sort();
        alphabet.dedup();
        let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
        let graph = BipartiteGraph::new(left, right, &plain)?;
        let mut labels = vec![None; left * right];
        let mut used = vec![false; alphabet.len()];
        for (l, r, label) in edges {
            let idx = alphabet.binary_search(label).map_err(|_| GraphError::UnknownLabel(label.clone()))?;
            used[idx] = true;
            labels[l * right + r] = Some(idx as u32);
        }
        if let Some(k) = used.iter().position(|&u| !u) {
            return Err(GraphError::UnusedLabel(alphabet[k].clone()));
        }
        Ok(Self { graph, labels, alphabet })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn label(&self, l: usize, r: usize) -> Option<&str> {
        self.labels[l * self.graph.right + r].map(|k| self.alphabet[k as usize].as_str())
    }

    pub fn labelled_edges(&self) -> Vec<(usize, usize, String)> {
        self.graph
            .edges()
            .into_iter()
            .map(|(l, r)| (l, r, self.label(l, r).expect("edge is labelled").to_string()))
            .collect()
    }

    /// Composes every label with `g`, which must be a bijection from the
    /// alphabet onto its image.
    pub fn relabel(&self, g: &BTreeMap<String, String>) -> Result<Self, GraphError> {
        if let Some(missing) = self.alphabet.iter().find(|a| !g.contains_key(*a)) {
            return Err(GraphError::NotBijective(format!("{missing:?} has no image")));
        }
        if let Some(extra) = g.keys().find(|k| self.alphabet.binary_search(k).is_err()) {
            return Err(GraphError::NotBijective(format!("{extra:?} is not in the alphabet")));
        }
        let images: BTreeSet<&String> = g.values().collect();
        if images.len() != g.len() {
            return Err(GraphError::NotBijective("two symbols share an image".into()));
        }
        let edges: Vec<_> = self.labelled_edges().into_iter().map(|(l, r, a)| (l, r, g[&a].clone())).collect();
        Self::new(self.graph.left, self.graph.right, &edges)
    }

    pub fn forget_labels(&self) -> BipartiteGraph {
        self.graph.clone()
    }
}

/// Side-preserving vertex bijection `psi` with `L psi = L'` and `R psi = R'`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BipartiteIso {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BipartiteIso {
    pub fn identity(left: usize, right: usize) -> Self {
        Self { left: (0..left).collect(), right: (0..right).collect() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &BipartiteIso) -> Self {
        Self {
            left: self.left.iter().map(|&l| next.left[l]).collect(),
            right: self.right.iter().map(|&r| next.right[r]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let invert = |p: &[usize]| {
            let mut q = vec![0; p.len()];
            for (x, &y) in p.iter().enumerate() {
                q[y] = x;
            }
            q
        };
        Self { left: invert(&self.left), right: invert(&self.right) }
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        match v {
            Vertex::Left(l) => Vertex::Left(self.left[l]),
            Vertex::Right(r) => Vertex::Right(self.right[r]),
        }
    }

    fn bijective_between(&self, g: &BipartiteGraph, h: &BipartiteGraph) -> bool {
        let perm = |p: &[usize], n: usize| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        g.left == h.left && g.right == h.right && perm(&self.left, g.left) && perm(&self.right, g.right)
    }

    pub fn is_isomorphism(&self, g: &BipartiteGraph, h: &BipartiteGraph) -> bool {
        self.bijective_between(g, h)
            && itertools::iproduct!(0..g.left, 0..g.right).all(|(l, r)| g.has_edge(l, r) == h.has_edge(self.left[l], self.right[r]))
    }

    pub fn is_labelled_isomorphism(&self, g: &LabelledBipartiteGraph, h: &LabelledBipartiteGraph) -> bool {
        g.alphabet == h.alphabet
            && self.is_isomorphism(&g.graph, &h.graph)
            && g.graph.edges().into_iter().all(|(l, r)| g.label(l, r) == h.label(self.left[l], self.right[r]))
    }
}

type Labels<'a> = Option<&'a [Option<u32>]>;

/// Colour refinement run on several graphs at once so that colours are
/// comparable between them. Colours start from the side and are refined by
/// the multiset of (neighbour colour, edge label) until stable.
fn refine_jointly(graphs: &[(&BipartiteGraph, Labels<'_>)]) -> Vec<Vec<u32>> {
    let mut colours: Vec<Vec<u32>> = graphs
        .iter()
        .map(|(g, _)| (0..g.vertex_count()).map(|v| u32::from(v >= g.left)).collect())
        .collect();
    let mut class_count = colours.iter().flatten().collect::<BTreeSet<_>>().len();
    loop {
        let signatures: Vec<Vec<(u32, Vec<(u32, u32)>)>> = graphs
            .iter()
            .zip(&colours)
            .map(|((g, labels), col)| {
                let label = |l: usize, r: usize| labels.map_or(0, |ls| ls[l * g.right + r].map_or(0, |k| k + 1));
                (0..g.vertex_count())
                    .map(|v| {
                        let mut neighbourhood: Vec<(u32, u32)> = match g.vertex(v) {
                            Vertex::Left(l) => g.left_neighbours(l).map(|r| (col[g.left + r], label(l, r))).collect(),
                            Vertex::Right(r) => g.right_neighbours(r).map(|l| (col[l], label(l, r))).collect(),
                        };
                        neighbourhood.sort_unstable();
                        (col[v], neighbourhood)
                    })
                    .collect()
            })
            .collect();
        let palette: BTreeMap<&(u32, Vec<(u32, u32)>), u32> = signatures
            .iter()
            .flatten()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(k, sig)| (sig, k as u32))
            .collect();
        let next: Vec<Vec<u32>> = signatures.iter().map(|sigs| sigs.iter().map(|s| palette[s]).collect()).collect();
        let next_count = palette.len();
        colours = next;
        if next_count == class_count {
            return colours;
        }
        class_count = next_count;
    }
}

fn colour_classes(colours: &[u32]) -> Vec<Vec<usize>> {
    crate::finsemi::classes_by_key(colours.iter().copied())
}

/// Stable colour classes of global vertices, ordered by least vertex.
pub fn refine_partition(g: &BipartiteGraph) -> Vec<Vec<usize>> {
    colour_classes(&refine_jointly(&[(g, None)])[0])
}

pub fn refine_labelled_partition(g: &LabelledBipartiteGraph) -> Vec<Vec<usize>> {
    colour_classes(&refine_jointly(&[(&g.graph, Some(&g.labels))])[0])
}

struct IsoSearch<'a> {
    g: &'a BipartiteGraph,
    h: &'a BipartiteGraph,
    labels: Option<(&'a [Option<u32>], &'a [Option<u32>])>,
    colour_g: Vec<u32>,
    colour_h: Vec<u32>,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    first_only: bool,
    found: Vec<BipartiteIso>,
}

const UNSET: usize = usize::MAX;

impl IsoSearch<'_> {
    fn edge_info(g: &BipartiteGraph, labels: Option<&[Option<u32>]>, l: usize, r: usize) -> Option<u32> {
        match labels {
            Some(ls) => ls[l * g.right + r],
            None => g.has_edge(l, r).then_some(0),
        }
    }

    fn consistent(&self, v: usize, w: usize) -> bool {
        let (g, h) = (self.g, self.h);
        let (lg, lh) = match self.labels {
            Some((a, b)) => (Some(a), Some(b)),
            None => (None, None),
        };
        if v < g.left {
            (0..g.right).all(|r| {
                let img = self.image[g.left + r];
                img == UNSET || Self::edge_info(g, lg, v, r) == Self::edge_info(h, lh, w, img - h.left)
            })
        } else {
            let r = v - g.left;
            let s = w - h.left;
            (0..g.left).all(|l| {
                let img = self.image[l];
                img == UNSET || Self::edge_info(g, lg, l, r) == Self::edge_info(h, lh, img, s)
            })
        }
    }

    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            let left = self.image[..self.g.left].to_vec();
            let right = self.image[self.g.left..].iter().map(|&w| w - self.h.left).collect();
            self.found.push(BipartiteIso { left, right });
            return;
        }
        let v = self.order[depth];
        let (lo, hi) = if v < self.g.left { (0, self.h.left) } else { (self.h.left, self.h.vertex_count()) };
        for w in lo..hi {
            if self.used[w] || self.colour_h[w] != self.colour_g[v] || !self.consistent(v, w) {
                continue;
            }
            self.image[v] = w;
            self.used[w] = true;
            self.run(depth + 1);
            self.image[v] = UNSET;
            self.used[w] = false;
            if self.first_only && !self.found.is_empty() {
                return;
            }
        }
    }
}

/// One step of a breadth-first spanning forest: a component root, or a tree
/// edge reaching `child` from an already visited `parent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForestStep {
    Root(Vertex),
    Edge { parent: Vertex, child: Vertex },
}

/// Spanning forest grown breadth-first from the least left vertex of each
/// component (the least right vertex if the component has no left vertex),
/// visiting neighbours in increasing order.
pub fn bfs_forest(g: &BipartiteGraph) -> Vec<ForestStep> {
    let mut steps = Vec::with_capacity(g.vertex_count());
    let mut seen = vec![false; g.vertex_count()];
    for comp in g.components() {
        let root = comp.left.first().map_or_else(|| Vertex::Right(comp.right[0]), |&l| Vertex::Left(l));
        seen[g.global(root)] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        steps.push(ForestStep::Root(root));
        while let Some(parent) = queue.pop_front() {
            let neighbours: Vec<Vertex> = match parent {
                Vertex::Left(l) => g.left_neighbours(l).map(Vertex::Right).collect(),
                Vertex::Right(r) => g.right_neighbours(r).map(Vertex::Left).collect(),
            };
            for child in neighbours {
                if !std::mem::replace(&mut seen[g.global(child)], true) {
                    steps.push(ForestStep::Edge { parent, child });
                    queue.push_back(child);
                }
            }
        }
    }
    steps
}

/// Vertex order for backtracking: every vertex after the first of its
/// component has an already placed neighbour.
fn search_order(g: &BipartiteGraph) -> Vec<usize> {
    bfs_forest(g)
        .into_iter()
        .map(|step| match step {
            ForestStep::Root(v) | ForestStep::Edge { child: v, .. } => g.global(v),
        })
        .collect()
}

fn search(g: &BipartiteGraph, h: &BipartiteGraph, labels: Option<(&[Option<u32>], &[Option<u32>])>, first_only: bool) -> Vec<BipartiteIso> {
    if g.left != h.left || g.right != h.right || g.edge_count() != h.edge_count() {
        return Vec::new();
    }
    let colours = refine_jointly(&[(g, labels.map(|l| l.0)), (h, labels.map(|l| l.1))]);
    let mut hist_g = colours[0].clone();
    let mut hist_h = colours[1].clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return Vec::new();
    }
    let mut state = IsoSearch {
        g,
        h,
        labels,
        colour_g: colours[0].clone(),
        colour_h: colours[1].clone(),
        order: search_order(g),
        image: vec![UNSET; g.vertex_count()],
        used: vec![false; h.vertex_count()],
        first_only,
        found: Vec::new(),
    };
    state.run(0);
    let mut found = state.found;
    found.sort();
    found
}

/// Some isomorphism `g -> h`, found deterministically.
pub fn bigraph_iso(g: &BipartiteGraph, h: &BipartiteGraph) -> Option<BipartiteIso> {
    search(g, h, None, true).into_iter().next()
}

/// Label-preserving isomorphism; graphs over different alphabets are never
/// isomorphic.
pub fn labelled_bigraph_iso(g: &LabelledBipartiteGraph, h: &LabelledBipartiteGraph) -> Option<BipartiteIso> {
    if g.alphabet != h.alphabet {
        return None;
    }
    search(&g.graph, &h.graph, Some((&g.labels, &h.labels)), true).into_iter().next()
}

pub fn all_isomorphisms(g: &BipartiteGraph, h: &BipartiteGraph) -> Vec<BipartiteIso> {
    search(g, h, None, false)
}

pub fn automorphisms(g: &BipartiteGraph) -> Vec<BipartiteIso> {
    search(g, g, None, false)
}

pub fn labelled_automorphisms(g: &LabelledBipartiteGraph) -> Vec<BipartiteIso> {
    search(&g.graph, &g.graph, Some((&g.labels, &g.labels)), false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomogeneousClass {
    Complete(usize, usize),
    Empty(usize, usize),
    PerfectMatching(usize),
    ComplementPerfectMatching(usize),
    Other,
}

/// Recognises the finite homogeneous families. When one graph fits several
/// descriptions (for instance `K_{1,1}` is also a perfect matching) the
/// first of Complete, Empty, PerfectMatching, ComplementPerfectMatching wins.
pub fn classify_homogeneous(g: &BipartiteGraph) -> HomogeneousClass {
    let (n, m) = (g.left, g.right);
    let edges = g.edge_count();
    if edges == n * m {
        return HomogeneousClass::Complete(n, m);
    }
    if edges == 0 {
        return HomogeneousClass::Empty(n, m);
    }
    let regular = |d: usize| (0..g.vertex_count()).all(|v| g.degree(g.vertex(v)) == d);
    if n == m && regular(1) {
        return HomogeneousClass::PerfectMatching(n);
    }
    if n == m && regular(n - 1) {
        return HomogeneousClass::ComplementPerfectMatching(n);
    }
    HomogeneousClass::Other
}

/// Side fingerprint of a vertex tuple: tuples with equal fingerprints agree
/// on which positions lie in `L` and which in `R`.
pub fn side_pattern(tuple: &[Vertex]) -> Vec<Side> {
    tuple.iter().map(|v| v.side()).collect()
}
