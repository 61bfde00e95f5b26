//! End-to-end runs over system files, shared by the binary and its tests.

use parpart_core::decomp::{run_decomposition, theorem2_driver};
use parpart_core::hampower::{run_ham_power, theorem5_driver};
use parpart_core::subsets::{build_triple_system, reduction_degrees};
use parpart_core::synth::{gen_dense, gen_sparse_pair, gen_system};
use parpart_core::verify::{audit_bad_counts, decomposition_bad_bound, ham_power_bad_bound, BoundAudit};
use parpart_core::{Error, Graph, Mode, RunReport, Threshold, TripleGraphSystem};
use serde_json::{json, Value};

use crate::formats::{run_report_json, warning_json, FamilyFile, OrderFile, Provenance, SubsetParams, SystemFile};

/// The output of [`reduce`].
#[derive(Clone, Debug)]
pub struct Reduced {
    pub system: SystemFile,
    /// Measured and closed-form degrees plus warnings.
    pub summary: Value,
}

/// Builds the k-subset system and reports its degrees both ways.
pub fn reduce(p: SubsetParams) -> parpart_core::Result<Reduced> {
    let r = build_triple_system(p.n, p.k, p.alpha, p.beta)?;
    let (d1, d2, d3) = reduction_degrees(p.n, p.k, p.alpha, p.beta)?;
    let sys = &r.system;
    let measured = |g: &Graph| json!({ "min": g.min_degree().unwrap_or(0), "max": g.max_degree().unwrap_or(0) });
    let summary = json!({
        "m": sys.vertex_count(),
        "formula": { "deg1": d1.to_string(), "deg2": d2.to_string(), "deg3": d3.to_string() },
        "measured": { "g1": measured(sys.g1()), "g2": measured(sys.g2()), "g3": measured(sys.g3()) },
        "warnings": r.warnings.iter().map(warning_json).collect::<Vec<_>>(),
    });
    Ok(Reduced { system: SystemFile::from_system(sys, Some(Provenance::subsets(p))), summary })
}

pub fn synth_dense(m: usize, min_degree: usize, seed: u64) -> parpart_core::Result<SystemFile> {
    let g1 = gen_dense(m, min_degree, seed)?;
    let sys = TripleGraphSystem::new(g1, Graph::empty(m), Graph::empty(m))?;
    let prov = Provenance::synthetic(seed, [("m", json!(m)), ("min_degree", json!(min_degree))]);
    Ok(SystemFile::from_system(&sys, Some(prov)))
}

/// Replaces `g2`, `g3` of `base` with a seeded sparse pair avoiding its `g1`.
pub fn synth_pair(base: &SystemFile, max2: usize, max3: usize, seed: u64) -> parpart_core::Result<SystemFile> {
    let (g1, _, _) = base.to_graphs()?;
    let (g2, g3) = gen_sparse_pair(max2, max3, &g1, seed)?;
    let sys = TripleGraphSystem::new(g1, g2, g3)?;
    let mut prov = base.provenance.clone().unwrap_or_else(|| Provenance::synthetic(seed, []));
    if let Some(s) = prov.seed.replace(seed) {
        prov.params.insert("dense_seed".into(), json!(s));
    }
    prov.params.insert("max2".into(), json!(max2));
    prov.params.insert("max3".into(), json!(max3));
    Ok(SystemFile::from_system(&sys, Some(prov)))
}

/// [`gen_system`] with its provenance.
pub fn synth_system(m: usize, min_degree: usize, max2: usize, max3: usize, seed: u64) -> parpart_core::Result<SystemFile> {
    let sys = gen_system(m, min_degree, max2, max3, seed)?;
    let prov = Provenance::synthetic(
        seed,
        [("m", json!(m)), ("min_degree", json!(min_degree)), ("max2", json!(max2)), ("max3", json!(max3))],
    );
    Ok(SystemFile::from_system(&sys, Some(prov)))
}

/// The system, refusing subset files whose graphs differ from their provenance.
fn load(sys: &SystemFile) -> parpart_core::Result<(TripleGraphSystem, Option<SubsetParams>)> {
    let system = sys.to_system()?;
    let subset = sys.subset_params();
    if let Some(p) = subset {
        let rebuilt = build_triple_system(p.n, p.k, p.alpha, p.beta)?;
        if SystemFile::from_system(&rebuilt.system, sys.provenance.clone()) != *sys {
            return Err(Error::Integrity("system graphs do not match their subset provenance".into()));
        }
    }
    Ok((system, subset))
}

fn bad_count(report: &RunReport, bound: usize) -> Option<BoundAudit> {
    report.stats.audit.then(|| audit_bad_counts(&report.stats, bound))
}

/// A construction artifact and its run report.
#[derive(Clone, Debug)]
pub struct Run<A> {
    pub artifact: A,
    pub report: RunReport,
    pub bad_count: Option<BoundAudit>,
    pub report_json: Value,
}

fn base_params(sys: &SystemFile, l: usize) -> Value {
    json!({ "m": sys.m, "l": l, "provenance": sys.provenance })
}

/// Bag-free clique family, mapped to parpartitions for subset systems.
pub fn decompose(sys: &SystemFile, l: usize, mode: Mode, audit: bool) -> parpart_core::Result<Run<FamilyFile>> {
    let (system, subset) = load(sys)?;
    let bound = decomposition_bad_bound(l, system.max_degree2(), system.max_degree3());
    let (artifact, report) = match subset {
        Some(p) => {
            let out = theorem2_driver(p.n, p.k, l, p.alpha, p.beta, mode, audit)?;
            (FamilyFile::from_cliques(&out.cliques, Some(&out.family)), out.report)
        }
        None => {
            let (fam, report) = run_decomposition(&system, l, mode, audit)?;
            (FamilyFile::from_cliques(&fam, None), report)
        }
    };
    let bad_count = bad_count(&report, bound);
    let report_json = run_report_json(&report, base_params(sys, l), bad_count.as_ref());
    Ok(Run { artifact, report, bad_count, report_json })
}

/// Cyclic order with bag-free `(ℓ−1)`-th power, rendered as subsets for
/// subset systems. Subset systems always use `q = m`.
pub fn hampower(sys: &SystemFile, l: usize, q: Option<usize>, mode: Mode, audit: bool) -> parpart_core::Result<Run<OrderFile>> {
    let (system, subset) = load(sys)?;
    let m = system.vertex_count();
    let bound = ham_power_bad_bound(l, system.max_degree2(), system.max_degree3());
    let (artifact, report, q) = match subset {
        Some(p) => {
            if q.is_some_and(|q| q != m) {
                return Err(Error::Domain(format!("subset systems use q = m = {m}")));
            }
            let out = theorem5_driver(p.n, p.k, l, p.alpha, p.beta, mode, audit)?;
            (OrderFile::from_order(&out.order, l, m).with_subsets(p, out.subsets), out.report, m)
        }
        None => {
            let q = q.ok_or_else(|| Error::Domain("q is required for systems without subset provenance".into()))?;
            let (order, report) = run_ham_power(&system, l, q, mode, audit)?;
            (OrderFile::from_order(&order, l, q), report, q)
        }
    };
    let bad_count = bad_count(&report, bound);
    let mut params = base_params(sys, l);
    params["q"] = json!(q);
    let report_json = run_report_json(&report, params, bad_count.as_ref());
    Ok(Run { artifact, report, bad_count, report_json })
}

/// Parses `"p/q"` thresholds for the subset parameters.
pub fn subset_params(n: usize, k: usize, alpha: &str, beta: &str) -> parpart_core::Result<SubsetParams> {
    let alpha: Threshold = alpha.parse()?;
    let beta: Threshold = beta.parse()?;
    Ok(SubsetParams { n, k, alpha, beta })
}
