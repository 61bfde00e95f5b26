//! k-subsets of `[n]` as graph vertices.
//!
//! Vertex ids are colexicographic ranks. Two ids are adjacent in `G1` when
//! their subsets are disjoint, in `G2` (resp. `G3`) when they share more than
//! `αk` (resp. `βk`) elements. A `(k, ℓ)`-parpartition is then a `K_ℓ` in
//! `G1`, and for parpartitions sharing no subset, `(α,β)`-closeness is
//! exactly an alternating-(ℓ,2,ℓ,2)-bag between the two cliques.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::decomp::CliqueFamily;
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, TripleGraphSystem};
use crate::hampower::CyclicOrder;
use crate::rational::Threshold;
use crate::report::Warning;

/// `C(n, k)`, or `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// The universe `([n] choose k)` with colex ranking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KSubsetUniverse {
    n: usize,
    k: usize,
    size: usize,
}

impl KSubsetUniverse {
    /// Requires `1 ≤ k < n ≤ 64`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(domain(format!("need 1 <= k < n, got n = {n}, k = {k}")));
        }
        if n > 64 {
            return Err(domain(format!("n = {n} exceeds the supported ground set size 64")));
        }
        let size = binomial(n as u64, k as u64)
            .and_then(|c| usize::try_from(c).ok())
            .ok_or_else(|| domain(format!("C({n}, {k}) does not fit in a vertex id")))?;
        Ok(KSubsetUniverse { n, k, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `m = C(n, k)`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self, subset: &[usize]) -> Result<usize> {
        if subset.len() != self.k {
            return Err(domain(format!("subset {subset:?} does not have {} elements", self.k)));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain(format!("subset {subset:?} has repeated elements")));
        }
        if let Some(&x) = sorted.last().filter(|&&x| x >= self.n) {
            return Err(domain(format!("element {x} is not in [0, {})", self.n)));
        }
        Ok(sorted
            .iter()
            .enumerate()
            .map(|(i, &c)| binomial(c as u64, i as u64 + 1).unwrap_or(0) as usize)
            .sum())
    }

    /// Sorted k-subset with colex rank `id`.
    pub fn unrank(&self, id: usize) -> Result<Vec<usize>> {
        if id >= self.size {
            return Err(domain(format!("id {id} out of range for C({}, {}) = {}", self.n, self.k, self.size)));
        }
        let mut out = vec![0; self.k];
        let mut rest = id as u128;
        let mut top = self.n;
        for i in (1..=self.k).rev() {
            // Largest c < top with C(c, i) <= rest.
            let mut c = top - 1;
            while binomial(c as u64, i as u64).unwrap_or(u128::MAX) > rest {
                c -= 1;
            }
            rest -= binomial(c as u64, i as u64).unwrap_or(0);
            out[i - 1] = c;
            top = c;
        }
        Ok(out)
    }

    pub(crate) fn mask(&self, id: usize) -> u64 {
        self.unrank(id)
            .map(|s| s.iter().fold(0u64, |acc, &x| acc | (1u64 << x)))
            .unwrap_or(0)
    }
}

/// The reduction instance for `(n, k, α, β)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub universe: KSubsetUniverse,
    pub alpha: Threshold,
    pub beta: Threshold,
    pub system: TripleGraphSystem,
    pub warnings: Vec<Warning>,
}

/// Builds `G1, G2, G3` on `([n] choose k)`.
///
/// `k > n/2` is accepted with a warning (G1 is then edgeless).
pub fn build_triple_system(n: usize, k: usize, alpha: Threshold, beta: Threshold) -> Result<Reduction> {
    let universe = KSubsetUniverse::new(n, k)?;
    let m = universe.size();
    let masks: Vec<u64> = (0..m).map(|id| universe.mask(id)).collect();
    let mut g1 = Graph::empty(m);
    let mut g2 = Graph::empty(m);
    let mut g3 = Graph::empty(m);
    for u in 0..m {
        for v in u + 1..m {
            let shared = (masks[u] & masks[v]).count_ones() as usize;
            if shared == 0 {
                g1.add_edge(u, v)?;
            }
            if alpha.exceeded_by(shared, k) {
                g2.add_edge(u, v)?;
            }
            if beta.exceeded_by(shared, k) {
                g3.add_edge(u, v)?;
            }
        }
    }
    let mut warnings = Vec::new();
    if 2 * k > n {
        warnings.push(Warning::DisjointnessGraphEmpty { n, k });
    }
    let (e2, e3) = (g2.edge_count() == 0, g3.edge_count() == 0);
    if e2 {
        warnings.push(Warning::IntersectionGraphEmpty { graph: 2 });
    }
    if e3 {
        warnings.push(Warning::IntersectionGraphEmpty { graph: 3 });
    }
    if e2 && e3 {
        warnings.push(Warning::ClosenessVacuous);
    }
    let system = TripleGraphSystem::new(g1, g2, g3)?;
    Ok(Reduction { universe, alpha, beta, system, warnings })
}

/// Sum over integers `1 ≤ i < (1 − t)k` of `C(k, i)·C(n − k, i)`.
fn intersection_degree(n: usize, k: usize, t: Threshold) -> Option<u128> {
    let (num, den) = (*t.value().numer(), *t.value().denom());
    let mut total: u128 = 0;
    for i in 1..=k {
        // i < (1 - num/den) k  <=>  i·den < (den - num)·k
        if (i as i128) * den >= (den - num) * k as i128 {
            break;
        }
        let term = binomial(k as u64, i as u64)?.checked_mul(binomial((n - k) as u64, i as u64)?)?;
        total = total.checked_add(term)?;
    }
    Some(total)
}

/// Closed-form vertex degrees `(deg1, deg2, deg3)` of the reduction graphs.
pub fn reduction_degrees(n: usize, k: usize, alpha: Threshold, beta: Threshold) -> Result<(u128, u128, u128)> {
    if k == 0 || k >= n {
        return Err(domain(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    let overflow = || domain(format!("degree formulas overflow for n = {n}, k = {k}"));
    let d1 = binomial((n - k) as u64, k as u64).ok_or_else(overflow)?;
    let d2 = intersection_degree(n, k, alpha).ok_or_else(overflow)?;
    let d3 = intersection_degree(n, k, beta).ok_or_else(overflow)?;
    Ok((d1, d2, d3))
}

/// ℓ pairwise-disjoint k-subsets, stored as sorted blocks in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parpartition {
    blocks: Vec<Vec<usize>>,
}

impl Parpartition {
    /// Accepts any nonempty list of equal-size, nonempty, pairwise-disjoint blocks.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        let k = blocks.first().map(Vec::len).ok_or_else(|| domain("parpartition with no blocks"))?;
        if k == 0 || blocks.iter().any(|b| b.len() != k) {
            return Err(domain("parpartition blocks must be nonempty and of equal size"));
        }
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Integrity(format!("element {} occurs in two blocks", w[0])));
        }
        blocks.sort();
        Ok(Parpartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// ℓ
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// k
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }
}

/// A closeness witness: `|a1 ∩ a2| > αk`, `|b1 ∩ b2| > βk`, `a1 ≠ b1`, `a2 ≠ b2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloseWitness {
    pub a1: Vec<usize>,
    pub b1: Vec<usize>,
    pub a2: Vec<usize>,
    pub b2: Vec<usize>,
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

/// Decides `(α,β)`-closeness by exhaustive search over ordered quadruples.
///
/// Returns the first witness in index order, or `None`.
pub fn are_close(p1: &Parpartition, p2: &Parpartition, alpha: Threshold, beta: Threshold) -> Result<Option<CloseWitness>> {
    if p1.len() < 2 || p2.len() < 2 {
        return Err(domain("closeness needs at least two blocks in each parpartition"));
    }
    let k = p1.block_size();
    if p2.block_size() != k {
        return Err(domain(format!("block sizes differ: {} vs {}", k, p2.block_size())));
    }
    let (x, y) = (p1.blocks(), p2.blocks());
    for (ia1, a1) in x.iter().enumerate() {
        for (ia2, a2) in y.iter().enumerate() {
            if !alpha.exceeded_by(shared(a1, a2), k) {
                continue;
            }
            for (_, b1) in x.iter().enumerate().filter(|&(i, _)| i != ia1) {
                for (_, b2) in y.iter().enumerate().filter(|&(i, _)| i != ia2) {
                    if beta.exceeded_by(shared(b1, b2), k) {
                        return Ok(Some(CloseWitness {
                            a1: a1.clone(),
                            b1: b1.clone(),
                            a2: a2.clone(),
                            b2: b2.clone(),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A family of parpartitions together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParpartitionFamily {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub alpha: Threshold,
    pub beta: Threshold,
    pub parpartitions: Vec<Parpartition>,
}

fn ids_to_parpartition(u: &KSubsetUniverse, ids: &[usize]) -> Result<Parpartition> {
    let blocks = ids.iter().map(|&id| u.unrank(id)).collect::<Result<Vec<_>>>()?;
    Parpartition::new(blocks).map_err(|e| match e {
        Error::Integrity(msg) => Error::Integrity(format!("vertices {ids:?} do not form a G1-clique: {msg}")),
        other => other,
    })
}

/// Unranks every block of a clique family.
pub fn family_to_parpartitions(
    u: &KSubsetUniverse,
    family: &CliqueFamily,
    alpha: Threshold,
    beta: Threshold,
) -> Result<ParpartitionFamily> {
    let parpartitions = family
        .blocks()
        .iter()
        .map(|b| ids_to_parpartition(u, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParpartitionFamily { n: u.n(), k: u.k(), l: family.clique_size(), alpha, beta, parpartitions })
}

/// The parpartition formed by `l` consecutive subsets of a cyclic order.
pub fn window_to_parpartition(u: &KSubsetUniverse, order: &CyclicOrder, start: usize, l: usize) -> Result<Parpartition> {
    if order.len() != u.size() {
        return Err(domain("cyclic order does not cover the k-subset universe"));
    }
    if l == 0 || l > order.len() {
        return Err(domain(format!("window length {l} out of range")));
    }
    ids_to_parpartition(u, &order.window(start, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(s: &str) -> Threshold {
        s.parse().unwrap()
    }

    #[test]
    fn colex_basics() {
        let u = KSubsetUniverse::new(4, 2).unwrap();
        assert_eq!(u.size(), 6);
        assert_eq!(u.unrank(0).unwrap(), vec![0, 1]);
        assert_eq!(u.unrank(1).unwrap(), vec![0, 2]);
        assert_eq!(u.unrank(5).unwrap(), vec![2, 3]);
        let u = KSubsetUniverse::new(5, 3).unwrap();
        for id in 0..10 {
            assert_eq!(u.rank(&u.unrank(id).unwrap()).unwrap(), id);
        }
    }

    #[test]
    fn rank_errors() {
        let u = KSubsetUniverse::new(5, 2).unwrap();
        assert!(u.rank(&[0]).is_err());
        assert!(u.rank(&[0, 5]).is_err());
        assert!(u.rank(&[1, 1]).is_err());
        assert!(u.unrank(10).is_err());
        assert!(KSubsetUniverse::new(3, 3).is_err());
        assert!(KSubsetUniverse::new(3, 0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(24, 2), Some(276));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
    }

    #[test]
    fn degree_formula_examples() {
        assert_eq!(reduction_degrees(6, 2, th("1/2"), th("1/2")).unwrap(), (6, 0, 0));
        assert_eq!(reduction_degrees(9, 3, th("1/2"), th("1/2")).unwrap().1, 18);
        // 1 <= i < 1 is empty.
        assert_eq!(reduction_degrees(9, 3, th("2/3"), th("1/2")).unwrap().1, 0);
    }

    #[test]
    fn reduction_graph_examples() {
        let r = build_triple_system(6, 2, th("1/2"), th("1/2")).unwrap();
        assert_eq!(r.system.vertex_count(), 15);
        assert_eq!(r.system.min_degree1(), 6);
        assert_eq!(r.system.g1().max_degree().unwrap(), 6);
        assert_eq!(r.system.g2().edge_count(), 0);
        assert!(r.warnings.contains(&Warning::ClosenessVacuous));

        let r = build_triple_system(9, 3, th("1/2"), th("1/2")).unwrap();
        assert_eq!(r.system.g2().min_degree().unwrap(), 18);
        assert_eq!(r.system.max_degree2(), 18);

        let r = build_triple_system(5, 3, th("1/2"), th("1/2")).unwrap();
        assert!(r.warnings.contains(&Warning::DisjointnessGraphEmpty { n: 5, k: 3 }));
    }

    #[test]
    fn closeness_examples() {
        let p = |b: &[&[usize]]| Parpartition::new(b.iter().map(|x| x.to_vec()).collect()).unwrap();
        let half = th("1/2");
        let p1 = p(&[&[0, 1, 2], &[3, 4, 5]]);
        let p2 = p(&[&[0, 1, 6], &[3, 4, 7]]);
        let w = are_close(&p1, &p2, half, half).unwrap().unwrap();
        assert_eq!((w.a1, w.a2), (vec![0, 1, 2], vec![0, 1, 6]));
        assert!(are_close(&p1, &p1, half, half).unwrap().is_some());
        let far = p(&[&[6, 7, 8], &[9, 10, 11]]);
        assert!(are_close(&p1, &far, half, half).unwrap().is_none());
        assert!(are_close(&p(&[&[0, 1, 2]]), &p1, half, half).is_err());
    }

    #[test]
    fn parpartition_rejects_overlap() {
        assert!(matches!(
            Parpartition::new(vec![vec![0, 1], vec![1, 2]]),
            Err(Error::Integrity(_))
        ));
        assert!(Parpartition::new(vec![vec![0, 1], vec![2]]).is_err());
    }
}
