//! Simple undirected graphs on dense vertex ids with bitset adjacency.

use alloc::format;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::error::{domain, Error, Result};

/// An undirected edge in canonical `(min, max)` form.
pub type Edge = (usize, usize);

#[inline]
pub fn canonical(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple graph on vertices `0..m`.
///
/// Row `v` of the adjacency is the neighbor bitset of `v`; rows are kept
/// symmetric and the diagonal is always clear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(m: usize) -> Self {
        Graph {
            adj: (0..m).map(|_| FixedBitSet::with_capacity(m)).collect(),
            edge_count: 0,
        }
    }

    pub fn complete(m: usize) -> Self {
        let mut adj: Vec<FixedBitSet> = (0..m).map(|_| FixedBitSet::with_capacity(m)).collect();
        for (v, row) in adj.iter_mut().enumerate() {
            row.insert_range(..);
            row.set(v, false);
        }
        Graph {
            adj,
            edge_count: m * m.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges(m: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Graph::empty(m);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(domain(format!("vertex {v} out of range for m = {}", self.vertex_count())));
        }
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Inserts `{u, v}`; returns whether the edge is new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(domain(format!("self-loop at vertex {u}")));
        }
        if self.adj[u].put(v) {
            return Ok(false);
        }
        self.adj[v].insert(u);
        self.edge_count += 1;
        Ok(true)
    }

    /// Removes `{u, v}`; returns whether it was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.vertex_count() || v >= self.vertex_count() || !self.adj[u].contains(v) {
            return false;
        }
        self.adj[u].set(v, false);
        self.adj[v].set(u, false);
        self.edge_count -= 1;
        true
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn min_degree(&self) -> Result<usize> {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .min()
            .ok_or_else(|| domain("min degree of a graph with no vertices"))
    }

    pub fn max_degree(&self) -> Result<usize> {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .max()
            .ok_or_else(|| domain("max degree of a graph with no vertices"))
    }

    /// All edges as canonical pairs in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, set: &[usize]) -> Result<bool> {
        for &v in set {
            self.check_vertex(v)?;
        }
        let mask = vertex_mask(self.vertex_count(), set);
        // A repeated id would need a self-loop.
        if mask.count_ones(..) != set.len() {
            return Ok(false);
        }
        Ok(set
            .iter()
            .all(|&v| self.adj[v].intersection_count(&mask) + 1 == set.len()))
    }

    /// Whether every vertex of `set` is adjacent to `v`.
    #[inline]
    pub fn sees_all(&self, v: usize, set: &FixedBitSet) -> bool {
        set.is_subset(&self.adj[v])
    }

    /// Intersection of the neighborhoods of `set` (all vertices if `set` is empty).
    pub fn common_neighbors(&self, set: &[usize]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.vertex_count());
        acc.insert_range(..);
        for &v in set {
            acc.intersect_with(&self.adj[v]);
        }
        acc
    }
}

/// A membership bitset over `0..m` built from a vertex list.
pub fn vertex_mask(m: usize, set: &[usize]) -> FixedBitSet {
    let mut mask = FixedBitSet::with_capacity(m);
    for &v in set {
        mask.insert(v);
    }
    mask
}

/// Which graphs an overlapping edge was found in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Overlap {
    G1G2,
    G1G3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DisjointnessViolation {
    pub edge: Edge,
    pub overlap: Overlap,
}

pub fn disjointness_violations(g1: &Graph, g2: &Graph, g3: &Graph) -> Vec<DisjointnessViolation> {
    let mut out = Vec::new();
    for (u, v) in g1.edges() {
        if g2.has_edge(u, v) {
            out.push(DisjointnessViolation { edge: (u, v), overlap: Overlap::G1G2 });
        }
        if g3.has_edge(u, v) {
            out.push(DisjointnessViolation { edge: (u, v), overlap: Overlap::G1G3 });
        }
    }
    out
}

/// Three graphs on one vertex set with `E1 ∩ E2 = E1 ∩ E3 = ∅`.
///
/// `E2 ∩ E3` may be nonempty. The degree parameters δ1, Δ2, Δ3 are cached
/// at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleGraphSystem {
    g1: Graph,
    g2: Graph,
    g3: Graph,
    min_degree1: usize,
    max_degree2: usize,
    max_degree3: usize,
}

impl TripleGraphSystem {
    /// Validates equal vertex counts (≥ 1) and disjointness from `E1`.
    pub fn new(g1: Graph, g2: Graph, g3: Graph) -> Result<Self> {
        let sys = Self::new_unchecked(g1, g2, g3)?;
        let violations = sys.assert_disjointness();
        if !violations.is_empty() {
            let first = violations[0];
            return Err(Error::Integrity(format!(
                "{} edges of g1 also appear in g2 or g3 (first: {:?} in {:?})",
                violations.len(),
                first.edge,
                first.overlap
            )));
        }
        Ok(sys)
    }

    /// Only checks vertex counts; use [`Self::assert_disjointness`] to audit.
    pub fn new_unchecked(g1: Graph, g2: Graph, g3: Graph) -> Result<Self> {
        let m = g1.vertex_count();
        if g2.vertex_count() != m || g3.vertex_count() != m {
            return Err(domain(format!(
                "vertex counts differ: {}, {}, {}",
                m,
                g2.vertex_count(),
                g3.vertex_count()
            )));
        }
        Ok(TripleGraphSystem {
            min_degree1: g1.min_degree()?,
            max_degree2: g2.max_degree()?,
            max_degree3: g3.max_degree()?,
            g1,
            g2,
            g3,
        })
    }

    pub fn assert_disjointness(&self) -> Vec<DisjointnessViolation> {
        disjointness_violations(&self.g1, &self.g2, &self.g3)
    }

    pub fn vertex_count(&self) -> usize {
        self.g1.vertex_count()
    }

    pub fn g1(&self) -> &Graph {
        &self.g1
    }

    pub fn g2(&self) -> &Graph {
        &self.g2
    }

    pub fn g3(&self) -> &Graph {
        &self.g3
    }

    /// δ1
    pub fn min_degree1(&self) -> usize {
        self.min_degree1
    }

    /// Δ2
    pub fn max_degree2(&self) -> usize {
        self.max_degree2
    }

    /// Δ3
    pub fn max_degree3(&self) -> usize {
        self.max_degree3
    }

    pub fn into_parts(self) -> (Graph, Graph, Graph) {
        (self.g1, self.g2, self.g3)
    }
}
