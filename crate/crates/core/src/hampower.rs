//! Powers of Hamiltonian cycles inside `G1`, kept free of bags.
//!
//! A [`CyclicOrder`] `(v_0, …, v_{m−1})` stands for the Hamiltonian cycle
//! through its vertices; the `p`-th power joins every pair at cycle distance
//! at most `p`. Its `K_{p+1}` copies are exactly the `m` windows of `p + 1`
//! consecutive vertices.
//!
//! Repair fixes the first missing pair `(v_i, v_{i+d})` of the power by
//! locating a window `W*` of `2ℓ − 2` vertices that is completely joined in
//! `G1` to `S = v[i−ℓ+2 : 2ℓ−2]`, then reversing the cyclic stretch from the
//! middle of `W*` to `v_i`. Every pair that becomes close lies in `S × W*`.

use alloc::format;
use alloc::vec::Vec;

use crate::bag::{has_bag, window_bag_scan};
use crate::decomp::gate;
use crate::error::{domain, Error, Result};
use crate::graph::{canonical, Edge, Graph, TripleGraphSystem};
use crate::rational::Threshold;
use crate::report::{ConstructionStats, Mode, RunReport};
use crate::subsets::{binomial, build_triple_system, reduction_degrees};
use crate::verify::{self, check_conditions, ConditionReport, Relation};

/// A cyclic permutation of `0..m` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicOrder {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl CyclicOrder {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let m = seq.len();
        let mut pos = alloc::vec![usize::MAX; m];
        for (i, &v) in seq.iter().enumerate() {
            if v >= m || pos[v] != usize::MAX {
                return Err(domain(format!("sequence is not a permutation of 0..{m} (at {v})")));
            }
            pos[v] = i;
        }
        Ok(CyclicOrder { seq, pos })
    }

    pub fn identity(m: usize) -> Self {
        CyclicOrder { seq: (0..m).collect(), pos: (0..m).collect() }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    /// `v_i`, index taken mod `m`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.seq[i % self.seq.len()]
    }

    #[inline]
    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// `v[start : r]` (indices mod `m`).
    pub fn window(&self, start: usize, r: usize) -> Vec<usize> {
        (0..r).map(|t| self.at(start + t)).collect()
    }

    fn swap_positions(&mut self, i: usize, j: usize) {
        self.seq.swap(i, j);
        self.pos[self.seq[i]] = i;
        self.pos[self.seq[j]] = j;
    }

    /// Reverses positions `from, from+1, …, to` (cyclically, inclusive).
    fn reverse_stretch(&mut self, from: usize, to: usize) {
        let m = self.len();
        let len = (to + m - from) % m + 1;
        for t in 0..len / 2 {
            self.swap_positions((from + t) % m, (to + m - t) % m);
        }
    }
}

/// Start position and length of a run of consecutive cycle positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SegmentWindow {
    pub start: usize,
    pub len: usize,
}

impl SegmentWindow {
    /// The `2ℓ − 1` positions centered at `center`.
    pub fn centered(center: usize, l: usize, m: usize) -> Self {
        SegmentWindow { start: (center + m - (l - 1) % m) % m, len: 2 * l - 1 }
    }

    pub fn center(&self, m: usize) -> usize {
        (self.start + self.len / 2) % m
    }
}

/// A pair at cycle distance `distance ≤ p` that is missing from `G1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PowerDefect {
    pub position: usize,
    pub distance: usize,
    pub pair: Edge,
}

fn check_power(m: usize, p: usize) -> Result<()> {
    if p == 0 || 2 * p + 1 > m {
        return Err(domain(format!("power {p} outside 1..=(m-1)/2 for m = {m}")));
    }
    Ok(())
}

/// The `2p` vertices within cycle distance `p` of `v`.
pub fn power_neighbors(order: &CyclicOrder, p: usize, v: usize) -> Result<Vec<usize>> {
    let m = order.len();
    check_power(m, p)?;
    if v >= m {
        return Err(domain(format!("vertex {v} out of range")));
    }
    let i = order.position(v);
    let mut out: Vec<usize> = (1..=p).flat_map(|d| [order.at(i + d), order.at(i + m - d)]).collect();
    out.sort_unstable();
    Ok(out)
}

/// Missing pairs of the `p`-th power, by position then distance.
pub fn power_defects(order: &CyclicOrder, g1: &Graph, p: usize) -> Result<Vec<PowerDefect>> {
    check_power(order.len(), p)?;
    Ok(defects_unchecked(order, g1, p))
}

fn defects_unchecked(order: &CyclicOrder, g1: &Graph, p: usize) -> Vec<PowerDefect> {
    let mut out = Vec::new();
    for i in 0..order.len() {
        for d in 1..=p {
            let (u, v) = (order.at(i), order.at(i + d));
            if !g1.has_edge(u, v) {
                out.push(PowerDefect { position: i, distance: d, pair: canonical(u, v) });
            }
        }
    }
    out
}

fn first_defect(order: &CyclicOrder, g1: &Graph, p: usize) -> Option<PowerDefect> {
    (0..order.len()).find_map(|i| {
        (1..=p).find_map(|d| {
            let (u, v) = (order.at(i), order.at(i + d));
            (!g1.has_edge(u, v)).then(|| PowerDefect { position: i, distance: d, pair: canonical(u, v) })
        })
    })
}

/// Windows of `c0.len` positions, disjoint from `c0`, completely joined to it in `G1`.
///
/// Start positions are scanned in increasing order until `limit` are found.
pub fn find_spanning_segments(g1: &Graph, order: &CyclicOrder, c0: SegmentWindow, limit: usize) -> Vec<SegmentWindow> {
    let m = order.len();
    let r = c0.len;
    if r == 0 || 2 * r > m {
        return Vec::new();
    }
    // Members of c0 have no self-loops, so a joined window is automatically disjoint from it.
    let common = g1.common_neighbors(&order.window(c0.start, r));
    let good: Vec<bool> = order.as_slice().iter().map(|&v| common.contains(v)).collect();
    // run[i] = number of consecutive good positions starting at i (capped at r).
    let mut run = alloc::vec![0usize; m];
    for _ in 0..2 {
        for i in (0..m).rev() {
            run[i] = if good[i] { (run[(i + 1) % m] + 1).min(r) } else { 0 };
        }
    }
    (0..m)
        .filter(|&s| run[s] >= r)
        .take(limit)
        .map(|start| SegmentWindow { start, len: r })
        .collect()
}

/// A cyclic order whose `(ℓ−1)`-th power lies inside `G1`.
///
/// Each step takes the first defect `(v_i, v_{i+d})` and a window `W*` of
/// `2ℓ − 2` positions joined to `S = v[i−ℓ+2 : 2ℓ−2]`. `W*` is the front of
/// the first spanning segment of the `2ℓ − 1` window centered at `i`; when
/// there is none, windows joined to `S` itself are tried.
pub fn repair_ham_power(g1: &Graph, order: &CyclicOrder, l: usize) -> Result<(CyclicOrder, ConstructionStats)> {
    let m = order.len();
    if l < 2 {
        return Err(domain(format!("clique size {l} must be at least 2")));
    }
    if m < 4 * l {
        return Err(domain(format!("m = {m} is below 4l = {}", 4 * l)));
    }
    if g1.vertex_count() != m {
        return Err(domain("order and graph sizes differ"));
    }
    let p = l - 1;
    let mut cur = order.clone();
    let mut stats = ConstructionStats::default();
    while let Some(defect) = first_defect(&cur, g1, p) {
        stats.defects_processed += 1;
        let i = defect.position;
        let wide = SegmentWindow::centered(i, l, m);
        let s = SegmentWindow { start: (i + m + 2 - l) % m, len: 2 * l - 2 };
        let w_start = match find_spanning_segments(g1, &cur, wide, 1).first() {
            Some(u) => u.start,
            None => match find_spanning_segments(g1, &cur, s, 1).first() {
                Some(w) => {
                    stats.repair_fallbacks += 1;
                    w.start
                }
                None => {
                    return Err(Error::RepairFailure {
                        defect: defect.pair,
                        candidates_found: 0,
                        reason: "no spanning window",
                    })
                }
            },
        };
        // Reverse v_{j+ℓ−1} … v_i, giving (…, v_{j+ℓ−2}, v_i, v_{i−1}, …, v_{j+ℓ−1}, v_{i+1}, …).
        cur.reverse_stretch((w_start + l - 1) % m, i);
        stats.repair_moves += 1;
    }
    Ok((cur, stats))
}

fn windows_disjoint_and_joined(g1: &Graph, order: &CyclicOrder, a: SegmentWindow, b: SegmentWindow) -> bool {
    let (wa, wb) = (order.window(a.start, a.len), order.window(b.start, b.len));
    wa.iter().all(|x| !wb.contains(x)) && wa.iter().all(|&x| wb.iter().all(|&y| g1.has_edge(x, y)))
}

/// Exchanges the vertices at two center positions.
///
/// The `2ℓ − 1` windows around both positions must be disjoint and
/// completely joined in `G1`; then both vertices keep all their power
/// neighbors inside `G1`.
pub fn swap_centers(g1: &Graph, order: &CyclicOrder, a_pos: usize, c_pos: usize, l: usize) -> Result<CyclicOrder> {
    let m = order.len();
    if a_pos >= m || c_pos >= m || l < 2 {
        return Err(domain("swap position or clique size out of range"));
    }
    if a_pos == c_pos {
        return Ok(order.clone());
    }
    let (wa, wc) = (SegmentWindow::centered(a_pos, l, m), SegmentWindow::centered(c_pos, l, m));
    if 2 * wa.len > m || !windows_disjoint_and_joined(g1, order, wa, wc) {
        return Err(domain(format!(
            "windows around positions {a_pos} and {c_pos} are not disjoint and completely joined"
        )));
    }
    let mut out = order.clone();
    out.swap_positions(a_pos, c_pos);
    Ok(out)
}

/// Starts of the `l` windows of length `l` that contain position `i`.
fn windows_through(i: usize, l: usize, m: usize) -> impl Iterator<Item = usize> {
    (0..l).map(move |t| (i + m - t) % m)
}

#[inline]
fn starts_disjoint(s: usize, t: usize, l: usize, m: usize) -> bool {
    let d = (t + m - s) % m;
    d >= l && m - d >= l
}

/// Whether some window through one of `positions` bags with a disjoint window.
fn window_bag_near(order: &CyclicOrder, positions: &[usize], l: usize, g2: &Graph, g3: &Graph) -> bool {
    let m = order.len();
    positions.iter().any(|&i| {
        windows_through(i, l, m).any(|s| {
            let w = order.window(s, l);
            (0..m).any(|t| starts_disjoint(s, t, l, m) && has_bag(&w, &order.window(t, l), g2, g3))
        })
    })
}

/// Whether activating an E3 edge (already in `g3`) between `u` and `v` closed a bag.
fn edge_closes_bag(order: &CyclicOrder, u: usize, v: usize, l: usize, g2: &Graph, g3: &Graph) -> bool {
    let m = order.len();
    let (pu, pv) = (order.position(u), order.position(v));
    windows_through(pu, l, m).any(|s| {
        windows_through(pv, l, m)
            .any(|t| starts_disjoint(s, t, l, m) && has_bag(&order.window(s, l), &order.window(t, l), g2, g3))
    })
}

/// A cyclic order whose `(ℓ−1)`-th power lies in `G1` and has no bagged
/// pair of disjoint `K_ℓ` windows.
///
/// `E3` edges are activated in canonical order. When an activation closes a
/// bag, the smaller endpoint (then the larger) is swapped with the center of
/// one of the first `q` spanning segments around it, skipping centers whose
/// swap leaves a bag; the least non-bad center position wins.
pub fn bagfree_ham_power(sys: &TripleGraphSystem, l: usize, q: usize, audit: bool) -> Result<(CyclicOrder, ConstructionStats)> {
    bagfree_ham_power_from(sys, &CyclicOrder::identity(sys.vertex_count()), l, q, audit)
}

/// As [`bagfree_ham_power`], starting the repair from `start`.
pub fn bagfree_ham_power_from(
    sys: &TripleGraphSystem,
    start: &CyclicOrder,
    l: usize,
    q: usize,
    audit: bool,
) -> Result<(CyclicOrder, ConstructionStats)> {
    if q == 0 {
        return Err(domain("q must be at least 1"));
    }
    let m = sys.vertex_count();
    let (g1, g2, g3) = (sys.g1(), sys.g2(), sys.g3());
    let (mut order, mut stats) = repair_ham_power(g1, start, l)?;
    stats.audit = audit;

    let mut active = Graph::empty(m);
    for (u, v) in g3.edges() {
        stats.activations += 1;
        active.add_edge(u, v)?;
        if !edge_closes_bag(&order, u, v, l, g2, &active) {
            continue;
        }
        stats.forced_swaps += 1;
        let mut chosen = None;
        let mut examined = 0;
        for a1 in [u, v] {
            let a_pos = order.position(a1);
            let mut centers: Vec<usize> = find_spanning_segments(g1, &order, SegmentWindow::centered(a_pos, l, m), q)
                .iter()
                .map(|w| w.center(m))
                .collect();
            centers.sort_unstable();
            examined += centers.len();
            let mut rejected = 0;
            let mut pick = None;
            for c_pos in centers {
                let trial = swap_centers(g1, &order, a_pos, c_pos, l)?;
                if window_bag_near(&trial, &[a_pos, c_pos], l, g2, &active) {
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
            Some(next) => order = next,
            None => {
                return Err(Error::RepairFailure {
                    defect: (u, v),
                    candidates_found: examined,
                    reason: "every spanning-segment center is bad",
                })
            }
        }
    }

    if !defects_unchecked(&order, g1, l - 1).is_empty() {
        return Err(Error::Integrity("power defects remain after bag elimination".into()));
    }
    let hits = window_bag_scan(&order, l, g2, g3);
    if !hits.is_empty() {
        return Err(Error::BagCheckFailure(hits.len()));
    }
    Ok((order, stats))
}

/// [`bagfree_ham_power`] behind the 1.1/1.2 check for the system's own
/// degrees. Guaranteed mode refuses to run when either fails.
pub fn run_ham_power(sys: &TripleGraphSystem, l: usize, q: usize, mode: Mode, audit: bool) -> Result<(CyclicOrder, RunReport)> {
    let m = sys.vertex_count() as u64;
    let conditions: Vec<_> = check_conditions(m, l as u64, q as u64, sys.min_degree1() as u64, sys.max_degree2() as u64, sys.max_degree3() as u64)
        .into_iter()
        .filter(|c| c.id == "1.1" || c.id == "1.2")
        .collect();
    let warnings = gate(&conditions, &conditions, mode)?;
    let (order, stats) = bagfree_ham_power(sys, l, q, audit)?;
    Ok((order, RunReport { mode, conditions, warnings, stats }))
}

/// Result of [`theorem5_driver`].
#[derive(Clone, Debug)]
pub struct Theorem5Output {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub alpha: Threshold,
    pub beta: Threshold,
    pub order: CyclicOrder,
    /// The k-subsets in cycle order.
    pub subsets: Vec<Vec<usize>>,
    pub report: RunReport,
}

/// A cyclic ordering of `([n] choose k)` in which every `ℓ` consecutive
/// subsets are disjoint and no two disjoint windows are `(α,β)`-close.
///
/// `α + β ≥ 1` is required in every mode. Guaranteed mode also requires
/// 1.1 and 1.2 with `q = m` for the closed-form degrees. The output is
/// re-verified at the subset level.
pub fn theorem5_driver(
    n: usize,
    k: usize,
    l: usize,
    alpha: Threshold,
    beta: Threshold,
    mode: Mode,
    audit: bool,
) -> Result<Theorem5Output> {
    let sum = alpha.value() + beta.value();
    let one = crate::rational::int(1);
    let hypothesis = ConditionReport::new(verify::ALPHA_BETA_1_ID, sum, one, Relation::Ge);
    if !hypothesis.holds {
        return Err(Error::ConditionUnmet(alloc::vec![hypothesis]));
    }
    let m = binomial(n as u64, k as u64)
        .and_then(|c| u64::try_from(c).ok())
        .ok_or_else(|| domain("C(n, k) overflows"))?;
    let (d1, d2, d3) = reduction_degrees(n, k, alpha, beta)?;
    let fit = |x: u128| u64::try_from(x).map_err(|_| domain("degree overflows"));
    let mut conditions = alloc::vec![hypothesis];
    conditions.extend(
        check_conditions(m, l as u64, m, fit(d1)?, fit(d2)?, fit(d3)?)
            .into_iter()
            .filter(|c| c.id == "1.1" || c.id == "1.2"),
    );
    let mut warnings = gate(&conditions, &conditions, mode)?;

    let reduction = build_triple_system(n, k, alpha, beta)?;
    warnings.extend(reduction.warnings.iter().cloned());
    let (order, stats) = bagfree_ham_power(&reduction.system, l, m as usize, audit)?;
    let subsets = order
        .as_slice()
        .iter()
        .map(|&id| reduction.universe.unrank(id))
        .collect::<Result<Vec<_>>>()?;
    let violations = verify::verify_subset_order(n, k, l, alpha, beta, &subsets);
    if !violations.is_empty() {
        return Err(Error::Integrity(format!("subset-level verification failed: {}", violations[0])));
    }
    Ok(Theorem5Output {
        n,
        k,
        l,
        alpha,
        beta,
        order,
        subsets,
        report: RunReport { mode, conditions, warnings, stats },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn first_power_is_the_cycle() {
        let o = CyclicOrder::new(vec![3, 0, 4, 1, 2]).unwrap();
        assert_eq!(power_neighbors(&o, 1, 4).unwrap(), vec![0, 1]);
        assert_eq!(power_neighbors(&o, 1, 3).unwrap(), vec![0, 2]);
        assert!(power_neighbors(&o, 3, 0).is_err());
        assert!(power_neighbors(&o, 0, 0).is_err());
    }

    #[test]
    fn complete_graph_has_no_defects() {
        let o = CyclicOrder::identity(12);
        for p in 1..=5 {
            assert!(power_defects(&o, &Graph::complete(12), p).unwrap().is_empty());
        }
        let empty = power_defects(&o, &Graph::empty(12), 2).unwrap();
        assert_eq!(empty.len(), 24);
        assert_eq!(empty[0], PowerDefect { position: 0, distance: 1, pair: (0, 1) });
    }

    #[test]
    fn order_rejects_non_permutations() {
        assert!(CyclicOrder::new(vec![0, 0, 1]).is_err());
        assert!(CyclicOrder::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn reverse_stretch_wraps() {
        let mut o = CyclicOrder::identity(6);
        o.reverse_stretch(4, 1);
        assert_eq!(o.as_slice(), &[5, 4, 2, 3, 1, 0]);
        for (i, &v) in o.as_slice().iter().enumerate() {
            assert_eq!(o.position(v), i);
        }
    }

    #[test]
    fn spanning_segments_in_complete_graph() {
        let m = 20;
        let l = 3;
        let g = Graph::complete(m);
        let o = CyclicOrder::identity(m);
        let segs = find_spanning_segments(&g, &o, SegmentWindow::centered(0, l, m), usize::MAX);
        assert_eq!(segs.len(), m - (4 * l - 3));
        assert_eq!(segs[0].start, 3);
    }

    #[test]
    fn one_missing_crossing_edge_loses_at_most_2l_minus_1_windows() {
        let (m, l) = (30, 3);
        let mut g = Graph::complete(m);
        g.remove_edge(0, 15);
        let o = CyclicOrder::identity(m);
        let segs = find_spanning_segments(&g, &o, SegmentWindow::centered(0, l, m), usize::MAX);
        assert_eq!(segs.len(), m - (4 * l - 3) - (2 * l - 1));
        assert!(segs.iter().all(|w| !o.window(w.start, w.len).contains(&15)));
    }

    #[test]
    fn swap_center_identity_and_precondition() {
        let g = Graph::complete(12);
        let o = CyclicOrder::identity(12);
        assert_eq!(swap_centers(&g, &o, 4, 4, 3).unwrap(), o);
        let s = swap_centers(&g, &o, 0, 6, 3).unwrap();
        assert_eq!((s.at(0), s.at(6)), (6, 0));
        assert!(swap_centers(&g, &o, 0, 3, 3).is_err());
    }

    #[test]
    fn repair_single_missing_edge() {
        let mut g = Graph::complete(12);
        g.remove_edge(0, 2);
        let (out, stats) = repair_ham_power(&g, &CyclicOrder::identity(12), 3).unwrap();
        assert_eq!(stats.repair_moves, 1);
        assert!(power_defects(&out, &g, 2).unwrap().is_empty());
    }

    #[test]
    fn repair_fails_on_isolated_vertex() {
        let mut g = Graph::complete(16);
        for v in 1..16 {
            if v != 8 {
                g.remove_edge(0, v);
            }
        }
        assert!(matches!(
            repair_ham_power(&g, &CyclicOrder::identity(16), 2),
            Err(Error::RepairFailure { .. })
        ));
    }
}
