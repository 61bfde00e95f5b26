//! Alternating-(ℓ,2,ℓ,2)-bags, three-graph version.
//!
//! Two disjoint cliques `A`, `B` form a bag when some `e2 ∈ E2` and
//! `e3 ∈ E3` both cross between `A` and `B` and share no endpoint.
//! Edge colors follow the usual convention: red = `G1` (or a clique edge),
//! green = `G2`, blue = `G3`.
//!
//! Only the three-graph version is implemented; the two-graph version
//! (both crossing edges from one graph) is the special case `G2 = G3`.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::graph::{canonical, Edge, Graph};
use crate::hampower::CyclicOrder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagWitness {
    pub clique_a: Vec<usize>,
    pub clique_b: Vec<usize>,
    pub e2: Edge,
    pub e3: Edge,
}

fn crossing(a: &[usize], b: &[usize], g: &Graph) -> Vec<Edge> {
    let mut out: Vec<Edge> = a
        .iter()
        .flat_map(|&x| b.iter().filter(move |&&y| g.has_edge(x, y)).map(move |&y| canonical(x, y)))
        .collect();
    out.sort_unstable();
    out
}

#[inline]
fn disjoint_edges(e: Edge, f: Edge) -> bool {
    e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1
}

/// Lexicographically least `(e2, e3)` witness, assuming `a ∩ b = ∅`.
pub(crate) fn least_bag_edges(a: &[usize], b: &[usize], g2: &Graph, g3: &Graph) -> Option<(Edge, Edge)> {
    let c3 = crossing(a, b, g3);
    if c3.is_empty() {
        return None;
    }
    // For a given e2 the scan skips only E3 crossings touching e2's two
    // endpoints, so the total work stays near cross(E2) + cross(E3).
    crossing(a, b, g2)
        .into_iter()
        .find_map(|e2| c3.iter().find(|&&e3| disjoint_edges(e2, e3)).map(|&e3| (e2, e3)))
}

/// Allocation-free existence test, assuming `a ∩ b = ∅`.
pub(crate) fn has_bag(a: &[usize], b: &[usize], g2: &Graph, g3: &Graph) -> bool {
    for &x in a {
        for &y in b {
            if !g2.has_edge(x, y) {
                continue;
            }
            for &x3 in a.iter().filter(|&&v| v != x) {
                if b.iter().any(|&y3| y3 != y && g3.has_edge(x3, y3)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether the disjoint vertex sets `a` and `b` form a bag with `g2`, `g3`.
///
/// Clique-ness of `a` and `b` in `G1` is the caller's concern.
pub fn forms_bag(a: &[usize], b: &[usize], g2: &Graph, g3: &Graph) -> Result<Option<BagWitness>> {
    if a.iter().any(|x| b.contains(x)) {
        return Err(domain("bag test on overlapping vertex sets"));
    }
    Ok(least_bag_edges(a, b, g2, g3).map(|(e2, e3)| BagWitness {
        clique_a: a.to_vec(),
        clique_b: b.to_vec(),
        e2,
        e3,
    }))
}

/// A bag between cliques `pair.0 < pair.1` of a scanned family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanHit {
    pub pair: (usize, usize),
    pub witness: BagWitness,
}

/// All bagged pairs of a vertex-disjoint clique family.
pub fn family_bag_scan(blocks: &[Vec<usize>], g2: &Graph, g3: &Graph) -> Vec<ScanHit> {
    let mut hits = Vec::new();
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate().skip(i + 1) {
            if let Some((e2, e3)) = least_bag_edges(a, b, g2, g3) {
                hits.push(ScanHit {
                    pair: (i, j),
                    witness: BagWitness { clique_a: a.clone(), clique_b: b.clone(), e2, e3 },
                });
            }
        }
    }
    hits
}

/// All bagged pairs among the `m` length-`l` windows of a cyclic order.
///
/// Windows are indexed by start position; only vertex-disjoint pairs
/// (cyclic start distance at least `l`) are scanned.
pub fn window_bag_scan(order: &CyclicOrder, l: usize, g2: &Graph, g3: &Graph) -> Vec<ScanHit> {
    let m = order.len();
    let mut hits = Vec::new();
    if l == 0 || 2 * l > m {
        return hits;
    }
    let windows: Vec<Vec<usize>> = (0..m).map(|s| order.window(s, l)).collect();
    for s in 0..m {
        // t ranges over starts at least l ahead of s without wrapping back into s's window.
        for t in (s + l)..=(s + m - l) {
            if t >= m {
                break;
            }
            if let Some((e2, e3)) = least_bag_edges(&windows[s], &windows[t], g2, g3) {
                hits.push(ScanHit {
                    pair: (s, t),
                    witness: BagWitness {
                        clique_a: windows[s].clone(),
                        clique_b: windows[t].clone(),
                        e2,
                        e3,
                    },
                });
            }
        }
    }
    hits
}

/// Color pattern of a 4-vertex witness path `(x0, x1, x2, x3)`; red is always the middle edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathPattern {
    /// `x0–x1 ∈ E3`, `x1–x2` red, `x2–x3 ∈ E2`.
    BlueRedGreen,
    /// `x0–x1 ∈ E2`, `x1–x2` red, `x2–x3 ∈ E3`.
    GreenRedBlue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColoredPath {
    pub vertices: [usize; 4],
    pub pattern: PathPattern,
}

/// Enumerates colored paths starting at `start` (and ending in `targets`, if given).
///
/// Red edges are read from `red`, typically the union of the certified
/// cliques; all four vertices are distinct.
pub fn enumerate_witness_paths(
    start: usize,
    targets: Option<&[usize]>,
    red: &Graph,
    g2: &Graph,
    g3: &Graph,
    pattern: PathPattern,
) -> Vec<ColoredPath> {
    let (first, last) = match pattern {
        PathPattern::BlueRedGreen => (g3, g2),
        PathPattern::GreenRedBlue => (g2, g3),
    };
    let mut out = Vec::new();
    for x1 in first.neighbors(start).ones() {
        for x2 in red.neighbors(x1).ones().filter(|&x| x != start) {
            for x3 in last.neighbors(x2).ones() {
                if x3 == start || x3 == x1 {
                    continue;
                }
                if targets.is_some_and(|t| !t.contains(&x3)) {
                    continue;
                }
                out.push(ColoredPath { vertices: [start, x1, x2, x3], pattern });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn g(m: usize, e: &[Edge]) -> Graph {
        Graph::from_edges(m, e.iter().copied()).unwrap()
    }

    #[test]
    fn witness_examples() {
        let g2 = g(4, &[(0, 2)]);
        let w = forms_bag(&[0, 1], &[2, 3], &g2, &g(4, &[(1, 3)])).unwrap().unwrap();
        assert_eq!((w.e2, w.e3), ((0, 2), (1, 3)));
        assert!(forms_bag(&[0, 1], &[2, 3], &g2, &g(4, &[(0, 3)])).unwrap().is_none());
        assert!(forms_bag(&[0, 1], &[2, 3], &g2, &g(4, &[])).unwrap().is_none());
        assert!(forms_bag(&[0, 1], &[1, 3], &g2, &g2).is_err());
    }

    #[test]
    fn scan_examples() {
        let g2 = g(6, &[(0, 2)]);
        let g3 = g(6, &[(1, 3)]);
        let blocks = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let hits = family_bag_scan(&blocks, &g2, &g3);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].pair, (0, 1));
        assert!(family_bag_scan(&blocks, &g2, &g(6, &[])).is_empty());
        assert!(family_bag_scan(&blocks[..1], &g2, &g3).is_empty());
    }

    #[test]
    fn star_paths() {
        // a1 = 0 blue to d = 1, red 1–2, green 2–{3,4,5}.
        let g3 = g(6, &[(0, 1)]);
        let red = g(6, &[(1, 2)]);
        let g2 = g(6, &[(2, 3), (2, 4), (2, 5)]);
        let paths = enumerate_witness_paths(0, None, &red, &g2, &g3, PathPattern::BlueRedGreen);
        assert_eq!(paths.len(), 3);
        assert!(enumerate_witness_paths(0, None, &red, &g(6, &[]), &g3, PathPattern::BlueRedGreen).is_empty());
        assert!(enumerate_witness_paths(0, None, &red, &g2, &g3, PathPattern::GreenRedBlue).is_empty());
        let only = enumerate_witness_paths(0, Some(&[4]), &red, &g2, &g3, PathPattern::BlueRedGreen);
        assert_eq!(only[0].vertices, [0, 1, 2, 4]);
    }
}
