//! Independent certification of constructed artifacts.
//!
//! Nothing here calls into the construction modules for the properties it
//! certifies: clique, bag and closeness checks are reimplemented with plain
//! adjacency lookups and set intersections. All inequalities are evaluated
//! with exact rationals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{domain, Result};
use crate::graph::{canonical, Edge, Graph, TripleGraphSystem};
use crate::rational::{frac, int, Rational, Threshold};
use crate::report::ConstructionStats;
use crate::subsets::{binomial, ParpartitionFamily};
use crate::synth::SeededRng;

pub const K2L_ID: &str = "k^2*l<=n/3";
pub const ALPHA_BETA_1_ID: &str = "alpha+beta>=1";
pub const ALPHA_BETA_K_ID: &str = "alpha+beta>=(k+2)/k";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// One evaluated hypothesis: `lhs (<= | >=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub id: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
    pub relation: Relation,
    pub holds: bool,
}

impl ConditionReport {
    pub fn new(id: &'static str, lhs: Rational, rhs: Rational, relation: Relation) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        };
        ConditionReport { id, lhs, rhs, relation, holds }
    }
}

/// Conditions 1.1, 1.2, 2.1, 2.2 for the given degree parameters.
///
/// ```text
/// 1.1  m((2ℓ−1)²−1)/(2ℓ−1)² + (4ℓ−3+q)/(2ℓ−1)² <= δ1
/// 1.2  Δ2Δ3 <= (q−1)/(5ℓ(2ℓ−1))
/// 2.1  m(3ℓ−1)/(3ℓ) <= δ1
/// 2.2  Δ2Δ3 <= (m−3)/(15ℓ²)
/// ```
pub fn check_conditions(m: u64, l: u64, q: u64, min_deg1: u64, max_deg2: u64, max_deg3: u64) -> Vec<ConditionReport> {
    let (m, l, q) = (m as i128, l as i128, q as i128);
    let delta1 = int(min_deg1 as i128);
    let product = int(max_deg2 as i128 * max_deg3 as i128);
    let sq = (2 * l - 1) * (2 * l - 1);
    vec![
        ConditionReport::new("1.1", frac(m * (sq - 1), sq) + frac(4 * l - 3 + q, sq), delta1, Relation::Le),
        ConditionReport::new("1.2", product, frac(q - 1, 5 * l * (2 * l - 1)), Relation::Le),
        ConditionReport::new("2.1", frac(m * (3 * l - 1), 3 * l), delta1, Relation::Le),
        ConditionReport::new("2.2", product, frac(m - 3, 15 * l * l), Relation::Le),
    ]
}

/// The parameter hypotheses on `(n, k, ℓ, α, β)`.
pub fn subset_conditions(n: usize, k: usize, l: usize, alpha: Threshold, beta: Threshold) -> Vec<ConditionReport> {
    let (n, k, l) = (n as i128, k as i128, l as i128);
    let sum = alpha.value() + beta.value();
    vec![
        ConditionReport::new(K2L_ID, int(k * k * l), frac(n, 3), Relation::Le),
        ConditionReport::new(ALPHA_BETA_1_ID, sum, int(1), Relation::Ge),
        ConditionReport::new(ALPHA_BETA_K_ID, sum, frac(k + 2, k), Relation::Ge),
    ]
}

/// A certified failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BlockSize { block: usize, size: usize },
    VertexOutOfRange { vertex: usize },
    SharedVertex { vertex: usize, blocks: (usize, usize) },
    BlockCount { expected: usize, found: usize },
    NotClique { block: usize, pair: Edge },
    NotPermutation { detail: String },
    MissingPowerEdge { position: usize, distance: usize, pair: Edge },
    Bag { pair: (usize, usize), e2: Edge, e3: Edge },
    MalformedParpartition { index: usize, detail: String },
    RepeatedSubset { subset: Vec<usize>, first: usize, second: usize },
    WindowNotDisjoint { start: usize },
    ClosePair { pair: (usize, usize), witness: [Vec<usize>; 4] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BlockSize { block, size } => write!(f, "block {block} has {size} vertices"),
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Violation::SharedVertex { vertex, blocks } => {
                write!(f, "vertex {vertex} appears in blocks {} and {}", blocks.0, blocks.1)
            }
            Violation::BlockCount { expected, found } => write!(f, "expected {expected} blocks, found {found}"),
            Violation::NotClique { block, pair } => {
                write!(f, "block {block} is not a G1-clique: ({}, {}) missing", pair.0, pair.1)
            }
            Violation::NotPermutation { detail } => write!(f, "not a cyclic order: {detail}"),
            Violation::MissingPowerEdge { position, distance, pair } => write!(
                f,
                "positions {position} and +{distance}: ({}, {}) not in G1",
                pair.0, pair.1
            ),
            Violation::Bag { pair, e2, e3 } => write!(
                f,
                "cliques {} and {} form a bag via e2 = ({}, {}) and e3 = ({}, {})",
                pair.0, pair.1, e2.0, e2.1, e3.0, e3.1
            ),
            Violation::MalformedParpartition { index, detail } => write!(f, "parpartition {index}: {detail}"),
            Violation::RepeatedSubset { subset, first, second } => {
                write!(f, "subset {subset:?} appears in {first} and {second}")
            }
            Violation::WindowNotDisjoint { start } => write!(f, "window at {start} is not pairwise disjoint"),
            Violation::ClosePair { pair, witness } => write!(
                f,
                "{} and {} are close: {:?}, {:?} / {:?}, {:?}",
                pair.0, pair.1, witness[0], witness[1], witness[2], witness[3]
            ),
        }
    }
}

/// Shape, count and clique-ness of an almost-ℓ-decomposition.
pub fn verify_decomposition(g1: &Graph, blocks: &[Vec<usize>], l: usize) -> Vec<Violation> {
    let m = g1.vertex_count();
    let mut out = Vec::new();
    let expected = m.checked_div(l).unwrap_or(0);
    if blocks.len() != expected {
        out.push(Violation::BlockCount { expected, found: blocks.len() });
    }
    let mut owner: Vec<Option<usize>> = vec![None; m];
    for (bi, block) in blocks.iter().enumerate() {
        if block.len() != l {
            out.push(Violation::BlockSize { block: bi, size: block.len() });
        }
        for &v in block {
            if v >= m {
                out.push(Violation::VertexOutOfRange { vertex: v });
                continue;
            }
            match owner[v] {
                Some(prev) => out.push(Violation::SharedVertex { vertex: v, blocks: (prev, bi) }),
                None => owner[v] = Some(bi),
            }
        }
        for (i, &x) in block.iter().enumerate() {
            for &y in &block[i + 1..] {
                if x < m && y < m && (x == y || !g1.has_edge(x, y)) {
                    out.push(Violation::NotClique { block: bi, pair: canonical(x, y) });
                }
            }
        }
    }
    out
}

fn permutation_violation(m: usize, order: &[usize]) -> Option<Violation> {
    if order.len() != m {
        return Some(Violation::NotPermutation { detail: format!("length {} for m = {m}", order.len()) });
    }
    let mut seen = vec![false; m];
    for &v in order {
        if v >= m || core::mem::replace(&mut seen[v], true) {
            return Some(Violation::NotPermutation { detail: format!("vertex {v} out of range or repeated") });
        }
    }
    None
}

/// Every pair at cycle distance `≤ ℓ − 1` must be a `G1` edge.
pub fn verify_ham_power(g1: &Graph, order: &[usize], l: usize) -> Vec<Violation> {
    let m = g1.vertex_count();
    if let Some(v) = permutation_violation(m, order) {
        return vec![v];
    }
    let mut out = Vec::new();
    let reach = l.saturating_sub(1).min(m / 2);
    for i in 0..m {
        for d in 1..=reach {
            // Distance m/2 on an even cycle would be visited twice.
            if 2 * d == m && i >= m / 2 {
                continue;
            }
            let (u, v) = (order[i], order[(i + d) % m]);
            if !g1.has_edge(u, v) {
                out.push(Violation::MissingPowerEdge { position: i, distance: d, pair: canonical(u, v) });
            }
        }
    }
    out
}

fn bag_violations(found: BTreeMap<(usize, usize), (Edge, Edge)>) -> Vec<Violation> {
    found
        .into_iter()
        .map(|(pair, (e2, e3))| Violation::Bag { pair, e2, e3 })
        .collect()
}

/// Pairs of blocks joined by vertex-disjoint crossing `E2` and `E3` edges.
///
/// Enumerates `E2 × E3` edge pairs globally rather than clique pairs.
pub fn verify_bag_free_family(blocks: &[Vec<usize>], g2: &Graph, g3: &Graph) -> Vec<Violation> {
    let m = g2.vertex_count();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    for (bi, b) in blocks.iter().enumerate() {
        for &v in b.iter().filter(|&&v| v < m) {
            owner[v] = Some(bi);
        }
    }
    let e3s = g3.edges();
    let mut found = BTreeMap::new();
    for (x, y) in g2.edges() {
        let (Some(bx), Some(by)) = (owner[x], owner[y]) else { continue };
        if bx == by {
            continue;
        }
        let key = (bx.min(by), bx.max(by));
        if found.contains_key(&key) {
            continue;
        }
        for &(s, t) in &e3s {
            if s == x || s == y || t == x || t == y {
                continue;
            }
            let (Some(bs), Some(bt)) = (owner[s], owner[t]) else { continue };
            if (bs, bt) == (bx, by) || (bs, bt) == (by, bx) {
                found.insert(key, ((x, y), (s, t)));
                break;
            }
        }
    }
    bag_violations(found)
}

/// Disjoint length-`l` window pairs of a cyclic order that form a bag.
///
/// Pairs are keyed by window start positions `(s, t)`, `s < t`.
pub fn verify_bag_free_windows(order: &[usize], l: usize, g2: &Graph, g3: &Graph) -> Vec<Violation> {
    let m = order.len();
    if l == 0 || 2 * l > m || permutation_violation(g2.vertex_count(), order).is_some() {
        return Vec::new();
    }
    let mut pos = vec![0; m];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let inside = |p: usize, s: usize| (p + m - s) % m < l;
    let e3s = g3.edges();
    let mut found: BTreeMap<(usize, usize), (Edge, Edge)> = BTreeMap::new();
    for (x, y) in g2.edges() {
        for &(u, w) in &e3s {
            if u == x || u == y || w == x || w == y {
                continue;
            }
            for tx in 0..l {
                let s = (pos[x] + m - tx) % m;
                for ty in 0..l {
                    let t = (pos[y] + m - ty) % m;
                    let d = (t + m - s) % m;
                    if d < l || m - d < l {
                        continue;
                    }
                    let crosses = (inside(pos[u], s) && inside(pos[w], t)) || (inside(pos[u], t) && inside(pos[w], s));
                    if crosses {
                        let key = (s.min(t), s.max(t));
                        found.entry(key).or_insert(((x, y), (u, w)));
                    }
                }
            }
        }
    }
    bag_violations(found)
}

fn shared_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn more_than(count: usize, t: Threshold, k: usize) -> bool {
    int(count as i128) > t.value() * int(k as i128)
}

fn close_witness(p1: &[Vec<usize>], p2: &[Vec<usize>], alpha: Threshold, beta: Threshold, k: usize) -> Option<[Vec<usize>; 4]> {
    for (i1, a1) in p1.iter().enumerate() {
        for (i2, a2) in p2.iter().enumerate() {
            if !more_than(shared_count(a1, a2), alpha, k) {
                continue;
            }
            for (j1, b1) in p1.iter().enumerate() {
                if j1 == i1 {
                    continue;
                }
                for (j2, b2) in p2.iter().enumerate() {
                    if j2 != i2 && more_than(shared_count(b1, b2), beta, k) {
                        return Some([a1.clone(), b1.clone(), a2.clone(), b2.clone()]);
                    }
                }
            }
        }
    }
    None
}

fn check_blocks(index: usize, blocks: &[Vec<usize>], n: usize, k: usize, l: usize) -> Option<Violation> {
    let bad = |detail: String| Some(Violation::MalformedParpartition { index, detail });
    if blocks.len() != l {
        return bad(format!("{} blocks instead of {l}", blocks.len()));
    }
    let mut used = vec![false; n];
    for b in blocks {
        if b.len() != k || b.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("block {b:?} is not a sorted {k}-subset"));
        }
        for &x in b {
            if x >= n {
                return bad(format!("element {x} outside [0, {n})"));
            }
            if core::mem::replace(&mut used[x], true) {
                return bad(format!("element {x} in two blocks"));
            }
        }
    }
    None
}

/// No repeated k-subset and no `(α,β)`-close pair, checked on raw subsets.
pub fn verify_parpartition_family(family: &ParpartitionFamily) -> Vec<Violation> {
    family_violations(family, family.alpha, family.beta)
}

fn family_violations(family: &ParpartitionFamily, alpha: Threshold, beta: Threshold) -> Vec<Violation> {
    let (n, k, l) = (family.n, family.k, family.l);
    let mut out = Vec::new();
    let mut seen: BTreeMap<&[usize], usize> = BTreeMap::new();
    for (i, p) in family.parpartitions.iter().enumerate() {
        if let Some(v) = check_blocks(i, p.blocks(), n, k, l) {
            out.push(v);
        }
        for b in p.blocks() {
            if let Some(&first) = seen.get(b.as_slice()) {
                out.push(Violation::RepeatedSubset { subset: b.clone(), first, second: i });
            } else {
                seen.insert(b.as_slice(), i);
            }
        }
    }
    if l >= 2 {
        let ps = &family.parpartitions;
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                if let Some(w) = close_witness(ps[i].blocks(), ps[j].blocks(), alpha, beta, k) {
                    out.push(Violation::ClosePair { pair: (i, j), witness: w });
                }
            }
        }
    }
    out
}

/// All k-subsets exactly once; every window of `l` consecutive subsets
/// pairwise disjoint; no two position-disjoint windows close.
pub fn verify_subset_order(
    n: usize,
    k: usize,
    l: usize,
    alpha: Threshold,
    beta: Threshold,
    subsets: &[Vec<usize>],
) -> Vec<Violation> {
    let m = subsets.len();
    let mut out = Vec::new();
    let total = binomial(n as u64, k as u64).unwrap_or(0);
    if m as u128 != total {
        out.push(Violation::NotPermutation { detail: format!("{m} subsets instead of C({n}, {k}) = {total}") });
    }
    let mut seen: BTreeMap<&[usize], usize> = BTreeMap::new();
    for (i, s) in subsets.iter().enumerate() {
        if s.len() != k || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&x| x >= n) {
            out.push(Violation::NotPermutation { detail: format!("entry {i} = {s:?} is not a sorted {k}-subset of [{n}]") });
        }
        if let Some(&first) = seen.get(s.as_slice()) {
            out.push(Violation::RepeatedSubset { subset: s.clone(), first, second: i });
        } else {
            seen.insert(s.as_slice(), i);
        }
    }
    if !out.is_empty() || l == 0 || l > m {
        return out;
    }
    let windows: Vec<Vec<Vec<usize>>> = (0..m).map(|s| (0..l).map(|t| subsets[(s + t) % m].clone()).collect()).collect();
    for (s, w) in windows.iter().enumerate() {
        let disjoint = (0..l).all(|a| (a + 1..l).all(|b| shared_count(&w[a], &w[b]) == 0));
        if !disjoint {
            out.push(Violation::WindowNotDisjoint { start: s });
        }
    }
    if l >= 2 && 2 * l <= m {
        for s in 0..m {
            for t in s + 1..m {
                let d = t - s;
                if d < l || m - d < l {
                    continue;
                }
                if let Some(w) = close_witness(&windows[s], &windows[t], alpha, beta, k) {
                    out.push(Violation::ClosePair { pair: (s, t), witness: w });
                }
            }
        }
    }
    out
}

/// A subset-level artifact.
#[derive(Clone, Copy, Debug)]
pub enum TheoremArtifact<'a> {
    Family(&'a ParpartitionFamily),
    Order { n: usize, k: usize, l: usize, subsets: &'a [Vec<usize>] },
}

/// Checks either artifact against the given thresholds, which take
/// precedence over any stored with a family.
pub fn verify_theorem_output(artifact: TheoremArtifact<'_>, alpha: Threshold, beta: Threshold) -> Vec<Violation> {
    match artifact {
        TheoremArtifact::Family(f) => family_violations(f, alpha, beta),
        TheoremArtifact::Order { n, k, l, subsets } => verify_subset_order(n, k, l, alpha, beta, subsets),
    }
}

/// Minimum of a sampled count against a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleAudit {
    pub samples: usize,
    pub min_count: usize,
    pub bound: usize,
    pub passed: bool,
}

/// Maximum of measured counts against an upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundAudit {
    pub events: usize,
    pub max_count: usize,
    pub bound: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountAudit {
    pub swap_candidates: Option<SampleAudit>,
    pub spanning_segments: Option<SampleAudit>,
    pub bad_candidates: Option<BoundAudit>,
}

impl CountAudit {
    pub fn passed(&self) -> bool {
        self.swap_candidates.as_ref().is_none_or(|a| a.passed)
            && self.spanning_segments.as_ref().is_none_or(|a| a.passed)
            && self.bad_candidates.as_ref().is_none_or(|a| a.passed)
    }
}

/// Swap candidates for `(A1, a1)`, counted directly from adjacency.
pub fn count_swap_candidates(g1: &Graph, blocks: &[Vec<usize>], a_index: usize, a1: usize) -> usize {
    let a_block = &blocks[a_index];
    let mut count = 0;
    for (j, b) in blocks.iter().enumerate() {
        if j == a_index || !b.iter().all(|&y| g1.has_edge(a1, y)) {
            continue;
        }
        let defect_free = b.iter().enumerate().all(|(i, &x)| b[i + 1..].iter().all(|&y| g1.has_edge(x, y)));
        if !defect_free {
            continue;
        }
        count += b.iter().filter(|&&b1| a_block.iter().all(|&a| g1.has_edge(a, b1))).count();
    }
    count
}

/// Samples `(A1, a1)` queries; each must have at least `⌈m/3⌉` candidates.
pub fn audit_swap_candidates(g1: &Graph, blocks: &[Vec<usize>], samples: usize, seed: u64) -> SampleAudit {
    let bound = g1.vertex_count().div_ceil(3);
    let mut rng = SeededRng::new(seed);
    let mut min_count = usize::MAX;
    for _ in 0..samples {
        if blocks.is_empty() {
            break;
        }
        let bi = rng.below(blocks.len());
        let a1 = blocks[bi][rng.below(blocks[bi].len())];
        min_count = min_count.min(count_swap_candidates(g1, blocks, bi, a1));
    }
    let min_count = if min_count == usize::MAX { 0 } else { min_count };
    SampleAudit { samples, min_count, bound, passed: samples > 0 && min_count >= bound }
}

/// Windows of `2ℓ − 1` positions disjoint from, and completely joined to, the one centered at `center`.
pub fn count_spanning_segments(g1: &Graph, order: &[usize], l: usize, center: usize) -> usize {
    let m = order.len();
    let r = 2 * l - 1;
    let c0: Vec<usize> = (0..r).map(|t| order[(center + m * r - (l - 1) + t) % m]).collect();
    (0..m)
        .filter(|&s| {
            let d = (s + m - (center + m - (l - 1)) % m) % m;
            // Disjoint iff the start lies at least r past c0's start and ends before c0 wraps around.
            d >= r && m - d >= r && (0..r).all(|t| c0.iter().all(|&u| g1.has_edge(u, order[(s + t) % m])))
        })
        .count()
}

/// Samples centers; each must have at least `q` spanning segments.
pub fn audit_spanning_segments(g1: &Graph, order: &[usize], l: usize, q: usize, samples: usize, seed: u64) -> SampleAudit {
    let mut rng = SeededRng::new(seed);
    let mut min_count = usize::MAX;
    for _ in 0..samples {
        let c = rng.below(order.len());
        min_count = min_count.min(count_spanning_segments(g1, order, l, c));
    }
    let min_count = if min_count == usize::MAX { 0 } else { min_count };
    SampleAudit { samples, min_count, bound: q, passed: samples > 0 && min_count >= q }
}

/// `5ℓ²Δ2Δ3`, the bad swap-candidate bound for the decomposition.
pub fn decomposition_bad_bound(l: usize, max2: usize, max3: usize) -> usize {
    5 * l * l * max2 * max3
}

/// `4ℓ(2ℓ−1)Δ2Δ3 + (2ℓ−1)²Δ3`, the bad-center bound for cycle powers.
pub fn ham_power_bad_bound(l: usize, max2: usize, max3: usize) -> usize {
    let w = 2 * l - 1;
    4 * l * w * max2 * max3 + w * w * max3
}

pub fn audit_bad_counts(stats: &ConstructionStats, bound: usize) -> BoundAudit {
    let max_count = stats.max_rejected();
    BoundAudit {
        events: stats.rejected_per_swap.len(),
        max_count,
        bound,
        passed: stats.audit && max_count <= bound,
    }
}

/// What [`audit_counts`] inspects.
#[derive(Clone, Copy, Debug)]
pub enum AuditTarget<'a> {
    Decomposition(&'a [Vec<usize>]),
    HamPower(&'a [usize]),
}

/// Runs the sampled count audits and, given construction stats, the bad-count audit.
pub fn audit_counts(
    sys: &TripleGraphSystem,
    target: AuditTarget<'_>,
    l: usize,
    q: usize,
    samples: usize,
    seed: u64,
    stats: Option<&ConstructionStats>,
) -> CountAudit {
    let (d2, d3) = (sys.max_degree2(), sys.max_degree3());
    match target {
        AuditTarget::Decomposition(blocks) => CountAudit {
            swap_candidates: Some(audit_swap_candidates(sys.g1(), blocks, samples, seed)),
            spanning_segments: None,
            bad_candidates: stats.map(|s| audit_bad_counts(s, decomposition_bad_bound(l, d2, d3))),
        },
        AuditTarget::HamPower(order) => CountAudit {
            swap_candidates: None,
            spanning_segments: Some(audit_spanning_segments(sys.g1(), order, l, q, samples, seed)),
            bad_candidates: stats.map(|s| audit_bad_counts(s, ham_power_bad_bound(l, d2, d3))),
        },
    }
}

/// Largest graph size [`brute_force_search`] accepts.
pub const ORACLE_MAX_VERTICES: usize = 20;

struct Oracle<'a> {
    adj1: Vec<u32>,
    g2: &'a Graph,
    g3: &'a Graph,
    l: usize,
    target: usize,
    m: usize,
    chosen: Vec<Vec<usize>>,
}

impl Oracle<'_> {
    fn bagged(&self, a: &[usize], b: &[usize]) -> bool {
        for &x in a {
            for &y in b {
                if !self.g2.has_edge(x, y) {
                    continue;
                }
                for &s in a {
                    for &t in b {
                        if s != x && t != y && self.g3.has_edge(s, t) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// `used` marks vertices placed in cliques or skipped; `skips` is the remaining slack.
    fn search(&mut self, used: u32, skips: usize) -> bool {
        if self.chosen.len() == self.target {
            return true;
        }
        let free = !used & ((1u32 << self.m) - 1);
        if (free.count_ones() as usize) < (self.target - self.chosen.len()) * self.l {
            return false;
        }
        let v = free.trailing_zeros() as usize;
        let mut clique = vec![v];
        if self.extend(&mut clique, self.adj1[v] & free & !(1u32 << v), used | (1u32 << v), skips) {
            return true;
        }
        skips > 0 && self.search(used | (1u32 << v), skips - 1)
    }

    fn extend(&mut self, clique: &mut Vec<usize>, pool: u32, used: u32, skips: usize) -> bool {
        if clique.len() == self.l {
            if self.chosen.iter().any(|c| self.bagged(c, clique)) {
                return false;
            }
            self.chosen.push(clique.clone());
            if self.search(used, skips) {
                return true;
            }
            self.chosen.pop();
            return false;
        }
        let mut rest = pool;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            clique.push(w);
            // Only larger ids stay in the pool, so each clique is built once.
            if self.extend(clique, rest & self.adj1[w], used | (1u32 << w), skips) {
                return true;
            }
            clique.pop();
        }
        false
    }
}

/// Exhaustive search for `target` disjoint `G1`-cliques of size `l` with no bag among them.
///
/// Restricted to `m ≤ 20`.
pub fn brute_force_search(sys: &TripleGraphSystem, l: usize, target: usize) -> Result<Option<Vec<Vec<usize>>>> {
    let m = sys.vertex_count();
    if m > ORACLE_MAX_VERTICES {
        return Err(domain(format!("oracle is capped at m <= {ORACLE_MAX_VERTICES}, got {m}")));
    }
    if l == 0 {
        return Err(domain("clique size must be positive"));
    }
    if target * l > m {
        return Ok(None);
    }
    let adj1 = (0..m)
        .map(|u| (0..m).filter(|&v| sys.g1().has_edge(u, v)).fold(0u32, |acc, v| acc | (1 << v)))
        .collect();
    let mut oracle = Oracle { adj1, g2: sys.g2(), g3: sys.g3(), l, target, m, chosen: Vec::new() };
    Ok(oracle.search(0, m - target * l).then_some(oracle.chosen))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_arithmetic() {
        let r = check_conditions(243, 2, 1, 203, 2, 2);
        assert_eq!(r[2].lhs, frac(405, 2));
        assert!(r[2].holds);
        assert_eq!(r[3].rhs, int(4));
        assert!(r[3].holds);
        assert!(!check_conditions(243, 2, 1, 202, 2, 2)[2].holds);
        assert!(!check_conditions(243, 2, 1, 203, 1, 5)[3].holds);

        let r = check_conditions(150, 3, 76, 148, 1, 1);
        assert_eq!(r[0].lhs, frac(737, 5));
        assert!(r[0].holds);
        assert!(!check_conditions(150, 3, 76, 147, 1, 1)[0].holds);
        assert_eq!(r[1].rhs, int(1));
        assert!(r[1].holds);

        let r = check_conditions(100, 2, 1, 99, 1, 1);
        assert_eq!(r[1].rhs, int(0));
        assert!(!r[1].holds);
        assert!(check_conditions(100, 2, 1, 99, 0, 7)[1].holds);
    }

    #[test]
    fn decomposition_checks() {
        let k = Graph::complete(6);
        assert!(verify_decomposition(&k, &[vec![0, 1], vec![2, 3], vec![4, 5]], 2).is_empty());
        let v = verify_decomposition(&k, &[vec![0, 1], vec![1, 3], vec![4, 5]], 2);
        assert!(v.contains(&Violation::SharedVertex { vertex: 1, blocks: (0, 1) }));
        let v = verify_decomposition(&Graph::empty(6), &[vec![0, 1], vec![2, 3], vec![4, 5]], 2);
        assert_eq!(v.len(), 3);
        let v = verify_decomposition(&k, &[vec![0, 1]], 2);
        assert_eq!(v, vec![Violation::BlockCount { expected: 3, found: 1 }]);
    }

    #[test]
    fn ham_power_checks() {
        let order: Vec<usize> = (0..9).collect();
        for l in 2..=5 {
            assert!(verify_ham_power(&Graph::complete(9), &order, l).is_empty());
        }
        let mut g = Graph::complete(9);
        g.remove_edge(8, 0);
        assert_eq!(verify_ham_power(&g, &order, 2).len(), 1);
        assert!(matches!(verify_ham_power(&g, &[0, 1], 2)[0], Violation::NotPermutation { .. }));
    }

    #[test]
    fn oracle_examples() {
        let empty = Graph::empty(6);
        let sys = TripleGraphSystem::new(Graph::complete(6), empty.clone(), empty.clone()).unwrap();
        assert_eq!(brute_force_search(&sys, 2, 3).unwrap(), Some(vec![vec![0, 1], vec![2, 3], vec![4, 5]]));
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let sys = TripleGraphSystem::new(c6, empty.clone(), empty).unwrap();
        assert_eq!(brute_force_search(&sys, 3, 2).unwrap(), None);
        let big = Graph::empty(21);
        let sys = TripleGraphSystem::new(big.clone(), big.clone(), big).unwrap();
        assert!(brute_force_search(&sys, 2, 1).is_err());
    }

    #[test]
    fn oracle_respects_bags() {
        // K4 minus a perfect matching, with the removed edges as E2 and E3:
        // both remaining pairings {0,1},{2,3} and {0,3},{1,2} are bags.
        let g2 = Graph::from_edges(4, [(0, 2)]).unwrap();
        let g3 = Graph::from_edges(4, [(1, 3)]).unwrap();
        let mut g1 = Graph::complete(4);
        g1.remove_edge(0, 2);
        g1.remove_edge(1, 3);
        let sys = TripleGraphSystem::new(g1.clone(), g2.clone(), g3).unwrap();
        assert_eq!(brute_force_search(&sys, 2, 2).unwrap(), None);
        let sys = TripleGraphSystem::new(g1, g2, Graph::empty(4)).unwrap();
        assert_eq!(brute_force_search(&sys, 2, 2).unwrap(), Some(vec![vec![0, 1], vec![2, 3]]));
    }

    #[test]
    fn bound_formulas() {
        assert_eq!(decomposition_bad_bound(2, 2, 2), 80);
        assert_eq!(ham_power_bad_bound(3, 1, 1), 85);
    }
}
