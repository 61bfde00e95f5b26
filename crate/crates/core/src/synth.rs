//! Seeded synthetic instances.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`).
//! Bounded draws use the multiply-shift map `(x · n) >> 64` on one 64-bit
//! output `x`, and shuffles are Fisher–Yates from the last index down. These
//! three choices fix every generated artifact as a pure function of its
//! parameters and seed.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{domain, Error, Result};
use crate::graph::{Edge, Graph, TripleGraphSystem};

/// The crate's single PRNG.
#[derive(Clone, Debug)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish draw from `0..n` (`n > 0`).
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// A graph with minimum degree at least `min_degree`.
///
/// Starts from `K_m` and visits its edges in a shuffled order, deleting an
/// edge whenever both endpoints stay at or above the floor. One pass already
/// leaves a maximal deletion set, since degrees only fall.
pub fn gen_dense(m: usize, min_degree: usize, seed: u64) -> Result<Graph> {
    if m == 0 || min_degree >= m {
        return Err(domain(alloc::format!("degree floor {min_degree} needs at most m - 1 = {}", m.saturating_sub(1))));
    }
    let mut rng = SeededRng::new(seed);
    let mut g = Graph::complete(m);
    let mut edges = g.edges();
    rng.shuffle(&mut edges);
    for (u, v) in edges {
        if g.degree(u) > min_degree && g.degree(v) > min_degree {
            g.remove_edge(u, v);
        }
    }
    Ok(g)
}

fn fill_sparse(m: usize, pool: &[Edge], cap: usize, rng: &mut SeededRng, name: &'static str) -> Result<Graph> {
    let mut g = Graph::empty(m);
    if cap == 0 {
        return Ok(g);
    }
    let mut order = pool.to_vec();
    rng.shuffle(&mut order);
    for (u, v) in order {
        if g.degree(u) < cap && g.degree(v) < cap {
            g.add_edge(u, v)?;
        }
    }
    let achieved = g.max_degree()?;
    if achieved < cap {
        return Err(Error::InsufficientRoom { graph: name, requested: cap, achieved });
    }
    Ok(g)
}

/// Two graphs with max degrees `max2`, `max3`, both avoiding `forbidden`.
///
/// Each is a greedy random maximal subgraph of the complement of
/// `forbidden` under its degree cap. `E2 ∩ E3` may be nonempty.
pub fn gen_sparse_pair(max2: usize, max3: usize, forbidden: &Graph, seed: u64) -> Result<(Graph, Graph)> {
    let m = forbidden.vertex_count();
    let mut pool = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            if !forbidden.has_edge(u, v) {
                pool.push((u, v));
            }
        }
    }
    let mut rng = SeededRng::new(seed);
    let g2 = fill_sparse(m, &pool, max2, &mut rng, "g2")?;
    let g3 = fill_sparse(m, &pool, max3, &mut rng, "g3")?;
    Ok((g2, g3))
}

/// A full system: `gen_dense(m, min_degree, seed)` then
/// `gen_sparse_pair(max2, max3, g1, seed + 1)`.
pub fn gen_system(m: usize, min_degree: usize, max2: usize, max3: usize, seed: u64) -> Result<TripleGraphSystem> {
    let g1 = gen_dense(m, min_degree, seed)?;
    let (g2, g3) = gen_sparse_pair(max2, max3, &g1, seed.wrapping_add(1))?;
    TripleGraphSystem::new(g1, g2, g3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjointness_violations;

    #[test]
    fn dense_examples() {
        assert_eq!(gen_dense(7, 6, 1).unwrap(), Graph::complete(7));
        let g = gen_dense(243, 203, 11).unwrap();
        assert!(g.min_degree().unwrap() >= 203);
        assert_eq!(g, gen_dense(243, 203, 11).unwrap());
        assert_ne!(g, gen_dense(243, 203, 12).unwrap());
        assert!(gen_dense(5, 5, 0).is_err());
    }

    #[test]
    fn dense_is_maximal() {
        let g = gen_dense(40, 30, 3).unwrap();
        for (u, v) in g.edges() {
            assert!(g.degree(u) == 30 || g.degree(v) == 30);
        }
    }

    #[test]
    fn sparse_examples() {
        let forbidden = gen_dense(243, 203, 5).unwrap();
        let (g2, g3) = gen_sparse_pair(2, 2, &forbidden, 6).unwrap();
        assert_eq!(g2.max_degree().unwrap(), 2);
        assert_eq!(g3.max_degree().unwrap(), 2);
        assert!(disjointness_violations(&forbidden, &g2, &g3).is_empty());

        let (z2, z3) = gen_sparse_pair(0, 0, &forbidden, 6).unwrap();
        assert_eq!(z2.edge_count() + z3.edge_count(), 0);

        assert!(matches!(
            gen_sparse_pair(1, 0, &Graph::complete(6), 0),
            Err(Error::InsufficientRoom { .. })
        ));
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SeededRng::new(9);
        for n in 1..50 {
            assert!(rng.below(n) < n);
        }
    }
}
