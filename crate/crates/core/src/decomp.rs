//! Bag-free almost-ℓ-decompositions by swap repair.
//!
//! Repair starts from consecutive id groups and fixes missing `G1` pairs one
//! at a time: the smaller endpoint `a1` of the first defect trades places
//! with a swap candidate `b1` from a defect-free block `B1`, where `b1` sees
//! all of `A1` and `a1` sees all of `B1`. Bag elimination then activates
//! `E3` edges in canonical order, swapping an endpoint out whenever an
//! activation would close a bag.

use alloc::format;
use alloc::vec::Vec;

use crate::bag::{family_bag_scan, has_bag};
use crate::error::{domain, Error, Result};
use crate::graph::{canonical, vertex_mask, Edge, Graph, TripleGraphSystem};
use crate::rational::Threshold;
use crate::report::{ConstructionStats, Mode, RunReport, Warning};
use crate::subsets::{binomial, build_triple_system, family_to_parpartitions, reduction_degrees, ParpartitionFamily};
use crate::verify::{self, check_conditions, subset_conditions};

/// `⌊m/ℓ⌋` pairwise-disjoint ℓ-sets intended as `K_ℓ` copies in `G1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueFamily {
    m: usize,
    l: usize,
    blocks: Vec<Vec<usize>>,
}

impl CliqueFamily {
    /// Checks shape only (sizes, range, disjointness), not clique-ness.
    pub fn new(m: usize, l: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = alloc::vec![false; m];
        for b in &blocks {
            if b.len() != l {
                return Err(domain(format!("block {b:?} does not have {l} vertices")));
            }
            for &v in b {
                if v >= m || core::mem::replace(&mut seen[v], true) {
                    return Err(domain(format!("vertex {v} out of range or used twice")));
                }
            }
        }
        Ok(CliqueFamily { m, l, blocks })
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    /// ℓ
    pub fn clique_size(&self) -> usize {
        self.l
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Members sorted within blocks, blocks sorted.
    pub fn canonicalized(&self) -> CliqueFamily {
        let mut blocks = self.blocks.clone();
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        CliqueFamily { m: self.m, l: self.l, blocks }
    }

    fn block_of(&self) -> Vec<Option<usize>> {
        let mut out = alloc::vec![None; self.m];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[v] = Some(i);
            }
        }
        out
    }

    fn swap(&mut self, a: usize, a_block: usize, b: usize, b_block: usize) {
        let pa = self.blocks[a_block].iter().position(|&x| x == a).expect("a in its block");
        let pb = self.blocks[b_block].iter().position(|&x| x == b).expect("b in its block");
        self.blocks[a_block][pa] = b;
        self.blocks[b_block][pb] = a;
    }
}

/// Consecutive groups `[0, ℓ), [ℓ, 2ℓ), …`; the last `m mod ℓ` ids stay unassigned.
pub fn initial_decomposition(m: usize, l: usize) -> Result<CliqueFamily> {
    if l < 2 {
        return Err(domain(format!("clique size {l} must be at least 2")));
    }
    if m < l {
        return Err(domain(format!("m = {m} is smaller than the clique size {l}")));
    }
    let blocks = (0..m / l).map(|i| (i * l..(i + 1) * l).collect()).collect();
    Ok(CliqueFamily { m, l, blocks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapCandidate {
    pub vertex: usize,
    pub block: usize,
}

fn missing_pair(g1: &Graph, block: &[usize]) -> Option<Edge> {
    let mut best: Option<Edge> = None;
    for (i, &x) in block.iter().enumerate() {
        for &y in &block[i + 1..] {
            if !g1.has_edge(x, y) {
                let e = canonical(x, y);
                best = Some(best.map_or(e, |b| b.min(e)));
            }
        }
    }
    best
}

/// Swap candidates for moving `a1` out of block `a_index`, in vertex order.
///
/// A candidate `b1` lives in a defect-free block `B1 ≠ A1`, is adjacent to
/// every vertex of `A1`, and `a1` is adjacent to every vertex of `B1`.
pub fn find_swap_candidates(g1: &Graph, family: &CliqueFamily, a_index: usize, a1: usize) -> Vec<SwapCandidate> {
    swap_candidates(g1, family, a_index, a1, true)
}

/// Like [`find_swap_candidates`], but host blocks may still carry unprocessed
/// defects. The adjacency conditions alone keep the swap from creating new
/// defects; the host's pending pairs are simply processed later.
pub fn find_pending_swap_candidates(g1: &Graph, family: &CliqueFamily, a_index: usize, a1: usize) -> Vec<SwapCandidate> {
    swap_candidates(g1, family, a_index, a1, false)
}

fn swap_candidates(g1: &Graph, family: &CliqueFamily, a_index: usize, a1: usize, clean_only: bool) -> Vec<SwapCandidate> {
    let a_mask = vertex_mask(g1.vertex_count(), &family.blocks[a_index]);
    let a1_nbrs = g1.neighbors(a1);
    let mut out = Vec::new();
    for (j, block) in family.blocks.iter().enumerate() {
        if j == a_index || !block.iter().all(|&b| a1_nbrs.contains(b)) {
            continue;
        }
        if clean_only && missing_pair(g1, block).is_some() {
            continue;
        }
        out.extend(
            block
                .iter()
                .filter(|&&b1| g1.sees_all(b1, &a_mask))
                .map(|&b1| SwapCandidate { vertex: b1, block: j }),
        );
    }
    out.sort_unstable_by_key(|c| c.vertex);
    out
}

/// Repairs every block into a `G1`-clique.
///
/// Defects are processed in `(block index, pair)` order; each swap removes at
/// least the processed defect and introduces none. Candidates from defect-free
/// blocks are tried first (smaller endpoint, then larger); only if neither
/// endpoint has one are hosts with pending defects allowed.
pub fn repair_decomposition(g1: &Graph, family: &CliqueFamily) -> Result<(CliqueFamily, ConstructionStats)> {
    let mut fam = family.clone();
    let mut stats = ConstructionStats::default();
    while let Some((bi, (x, y))) = fam
        .blocks
        .iter()
        .enumerate()
        .find_map(|(i, b)| missing_pair(g1, b).map(|e| (i, e)))
    {
        stats.defects_processed += 1;
        let mut applied = false;
        let tries = [(x, true), (y, true), (x, false), (y, false)];
        for (attempt, (a1, clean)) in tries.into_iter().enumerate() {
            if let Some(c) = swap_candidates(g1, &fam, bi, a1, clean).first().copied() {
                fam.swap(a1, bi, c.vertex, c.block);
                stats.repair_moves += 1;
                stats.repair_fallbacks += usize::from(attempt > 0);
                applied = true;
                break;
            }
        }
        if !applied {
            return Err(Error::RepairFailure {
                defect: (x, y),
                candidates_found: 0,
                reason: "no swap candidate for either endpoint",
            });
        }
    }
    Ok((fam, stats))
}

/// Whether any block in `changed` bags with some other block.
fn touches_bag(fam: &CliqueFamily, changed: &[usize], g2: &Graph, g3: &Graph) -> bool {
    changed.iter().any(|&c| {
        fam.blocks
            .iter()
            .enumerate()
            .any(|(j, other)| j != c && has_bag(&fam.blocks[c], other, g2, g3))
    })
}

/// An almost-ℓ-decomposition of `G1` in which no two blocks form a bag.
///
/// With `audit` set, every candidate of a forced swap is classified so the
/// recorded rejection counts are the exact numbers of bad candidates.
pub fn bagfree_decomposition(sys: &TripleGraphSystem, l: usize, audit: bool) -> Result<(CliqueFamily, ConstructionStats)> {
    let m = sys.vertex_count();
    let (g1, g2, g3) = (sys.g1(), sys.g2(), sys.g3());
    let (mut fam, mut stats) = repair_decomposition(g1, &initial_decomposition(m, l)?)?;
    stats.audit = audit;

    // Active part of E3; no bag can use an inactive E3 edge.
    let mut active = Graph::empty(m);
    for (u, v) in g3.edges() {
        stats.activations += 1;
        let block_of = fam.block_of();
        let (Some(bu), Some(bv)) = (block_of[u], block_of[v]) else {
            active.add_edge(u, v)?;
            continue;
        };
        active.add_edge(u, v)?;
        if bu == bv || !has_bag(&fam.blocks[bu], &fam.blocks[bv], g2, &active) {
            continue;
        }
        stats.forced_swaps += 1;
        let mut chosen = None;
        let mut examined = 0;
        for (a1, a_block) in [(u, bu), (v, bv)] {
            let candidates = find_swap_candidates(g1, &fam, a_block, a1);
            examined += candidates.len();
            let mut rejected = 0;
            let mut pick = None;
            for c in candidates {
                let mut trial = fam.clone();
                trial.swap(a1, a_block, c.vertex, c.block);
                if touches_bag(&trial, &[a_block, c.block], g2, &active) {
                    rejected += 1;
                } else if pick.is_none() {
                    pick = Some(trial);
                    if !audit {
                        break;
                    }
                }
            }
            stats.rejected_per_swap.push(rejected);
            if pick.is_some() {
                chosen = pick;
                break;
            }
        }
        stats.candidates_per_swap.push(examined);
        match chosen {
            Some(next) => fam = next,
            None => {
                return Err(Error::RepairFailure {
                    defect: (u, v),
                    candidates_found: examined,
                    reason: "every swap candidate is bad",
                })
            }
        }
    }

    let hits = family_bag_scan(&fam.blocks, g2, g3);
    if !hits.is_empty() {
        return Err(Error::BagCheckFailure(hits.len()));
    }
    Ok((fam, stats))
}

/// [`bagfree_decomposition`] behind the 2.1/2.2 check for the system's
/// own degrees. Guaranteed mode refuses to run when either fails.
pub fn run_decomposition(sys: &TripleGraphSystem, l: usize, mode: Mode, audit: bool) -> Result<(CliqueFamily, RunReport)> {
    let m = sys.vertex_count() as u64;
    let conditions: Vec<_> = check_conditions(m, l as u64, 1, sys.min_degree1() as u64, sys.max_degree2() as u64, sys.max_degree3() as u64)
        .into_iter()
        .filter(|c| c.id == "2.1" || c.id == "2.2")
        .collect();
    let warnings = gate(&conditions, &conditions, mode)?;
    let (family, stats) = bagfree_decomposition(sys, l, audit)?;
    Ok((family, RunReport { mode, conditions, warnings, stats }))
}

/// Warnings for failed conditions in `gating`, or `ConditionUnmet` with the
/// full `table` in guaranteed mode.
pub(crate) fn gate(table: &[verify::ConditionReport], gating: &[verify::ConditionReport], mode: Mode) -> Result<Vec<Warning>> {
    let mut warnings = Vec::new();
    for c in gating.iter().filter(|c| !c.holds) {
        if mode == Mode::Guaranteed {
            return Err(Error::ConditionUnmet(table.to_vec()));
        }
        warnings.push(Warning::ConditionFailed { id: c.id });
    }
    Ok(warnings)
}

/// Result of [`theorem2_driver`].
#[derive(Clone, Debug)]
pub struct Theorem2Output {
    pub cliques: CliqueFamily,
    pub family: ParpartitionFamily,
    pub report: RunReport,
}

fn as_u64(x: u128, what: &str) -> Result<u64> {
    u64::try_from(x).map_err(|_| domain(format!("{what} = {x} is too large")))
}

/// `⌊C(n,k)/ℓ⌋` parpartitions of `[n]`, no subset repeated, no close pair.
///
/// In guaranteed mode the degree conditions 2.1, 2.2 are checked with the
/// closed-form degrees, together with `k²ℓ ≤ n/3`, before any graph is built.
/// The output is always re-verified at the subset level.
pub fn theorem2_driver(
    n: usize,
    k: usize,
    l: usize,
    alpha: Threshold,
    beta: Threshold,
    mode: Mode,
    audit: bool,
) -> Result<Theorem2Output> {
    let m = as_u64(binomial(n as u64, k as u64).ok_or_else(|| domain("C(n, k) overflows"))?, "m")?;
    let (d1, d2, d3) = reduction_degrees(n, k, alpha, beta)?;
    let mut conditions = check_conditions(m, l as u64, 1, as_u64(d1, "deg1")?, as_u64(d2, "deg2")?, as_u64(d3, "deg3")?)
        .into_iter()
        .filter(|c| c.id == "2.1" || c.id == "2.2")
        .collect::<Vec<_>>();
    conditions.extend(subset_conditions(n, k, l, alpha, beta));
    let gating: Vec<_> = conditions
        .iter()
        .filter(|c| ["2.1", "2.2", verify::K2L_ID].contains(&c.id))
        .cloned()
        .collect();
    let mut warnings = gate(&conditions, &gating, mode)?;

    let reduction = build_triple_system(n, k, alpha, beta)?;
    warnings.extend(reduction.warnings.iter().cloned());
    let (cliques, stats) = bagfree_decomposition(&reduction.system, l, audit)?;
    let cliques = cliques.canonicalized();
    let family = family_to_parpartitions(&reduction.universe, &cliques, alpha, beta)?;
    let violations = verify::verify_parpartition_family(&family);
    if !violations.is_empty() {
        return Err(Error::Integrity(format!("subset-level verification failed: {}", violations[0])));
    }
    Ok(Theorem2Output {
        cliques,
        family,
        report: RunReport { mode, conditions, warnings, stats },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn initial_examples() {
        assert_eq!(initial_decomposition(6, 2).unwrap().blocks(), &[vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(initial_decomposition(7, 3).unwrap().blocks(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(initial_decomposition(4, 5).is_err());
        assert!(initial_decomposition(4, 1).is_err());
    }

    #[test]
    fn candidates_in_complete_graph() {
        let fam = initial_decomposition(8, 2).unwrap();
        let c = find_swap_candidates(&Graph::complete(8), &fam, 1, 2);
        assert_eq!(c.iter().map(|c| c.vertex).collect::<Vec<_>>(), vec![0, 1, 4, 5, 6, 7]);
    }

    #[test]
    fn candidate_needs_a1_to_see_host_block() {
        let mut g = Graph::complete(6);
        g.remove_edge(0, 5); // a1 = 0 misses 5, host of b1 = 4
        let fam = initial_decomposition(6, 2).unwrap();
        let c = find_swap_candidates(&g, &fam, 0, 0);
        assert!(c.iter().all(|c| c.vertex != 4 && c.vertex != 5));
        assert!(c.iter().any(|c| c.vertex == 2));
    }

    #[test]
    fn repair_examples() {
        let fam = initial_decomposition(9, 3).unwrap();
        let (out, stats) = repair_decomposition(&Graph::complete(9), &fam).unwrap();
        assert_eq!(out, fam);
        assert_eq!(stats.repair_moves, 0);
        assert!(matches!(
            repair_decomposition(&Graph::empty(4), &initial_decomposition(4, 2).unwrap()),
            Err(Error::RepairFailure { candidates_found: 0, .. })
        ));
    }

    #[test]
    fn guaranteed_mode_rejects_large_k() {
        let half: Threshold = "1/2".parse().unwrap();
        match theorem2_driver(74, 5, 2, half, half, Mode::Guaranteed, false) {
            Err(Error::ConditionUnmet(reports)) => {
                assert!(reports.iter().any(|r| r.id == verify::K2L_ID && !r.holds));
            }
            other => panic!("expected ConditionUnmet, got {other:?}"),
        }
    }
}
