//! Runs every applicable independent check on an artifact and collects the
//! results into one report.
//!
//! Checks are read-only and run on a rayon pool of the requested size; the
//! report lists them in a fixed order regardless of completion order.

use parpart_core::verify::{
    audit_spanning_segments, audit_swap_candidates, check_conditions, verify_bag_free_family, verify_bag_free_windows,
    verify_decomposition, verify_ham_power, verify_theorem_output, ConditionReport, SampleAudit, TheoremArtifact, Violation,
};
use parpart_core::{Graph, KSubsetUniverse, Threshold};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::formats::{
    condition_json, disjointness_json, file_disjointness, sample_audit_json, violation_json, Artifact, FamilyFile, OrderFile,
    SubsetParams, SystemFile,
};

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "PARPART_WORKERS";

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Override the thresholds stored with the artifact or system.
    pub alpha: Option<Threshold>,
    pub beta: Option<Threshold>,
    /// `q` for conditions 1.1/1.2 and the spanning-segment audit.
    pub q: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Zero means rayon's default.
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { alpha: None, beta: None, q: None, samples: 100, seed: 0, workers: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub violations: Vec<Value>,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn from_violations(name: &'static str, v: Vec<Violation>) -> Self {
        Check { name, violations: v.iter().map(violation_json).collect() }
    }
}

/// A sampled count audit. It only affects the verdict when `binding`, i.e.
/// when the condition it is derived from holds.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub name: &'static str,
    pub result: SampleAudit,
    pub binding: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub conditions: Vec<ConditionReport>,
    pub audits: Vec<AuditEntry>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok) && self.audits.iter().all(|a| !a.binding || a.result.passed)
    }

    pub fn to_json(&self) -> Value {
        let audits: serde_json::Map<String, Value> = self
            .audits
            .iter()
            .map(|a| {
                let mut v = sample_audit_json(&a.result);
                v["binding"] = json!(a.binding);
                (a.name.to_owned(), v)
            })
            .collect();
        json!({
            "ok": self.ok(),
            "checks": self
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "ok": c.ok(), "violations": c.violations }))
                .collect::<Vec<_>>(),
            "conditions": self.conditions.iter().map(condition_json).collect::<Vec<_>>(),
            "audits": audits,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.ok() { "ok" } else { "FAIL" };
            out.push_str(&format!("{:<22} {status} ({} violations)\n", c.name, c.violations.len()));
            for v in c.violations.iter().take(5) {
                out.push_str(&format!("    {v}\n"));
            }
        }
        for c in &self.conditions {
            out.push_str(&format!(
                "condition {:<20} {} {} {}  {}\n",
                c.id,
                crate::formats::rational_str(&c.lhs),
                c.relation.symbol(),
                crate::formats::rational_str(&c.rhs),
                if c.holds { "holds" } else { "fails" }
            ));
        }
        for a in &self.audits {
            out.push_str(&format!(
                "audit {:<24} min {} vs bound {} over {} samples: {}{}\n",
                a.name,
                a.result.min_count,
                a.result.bound,
                a.result.samples,
                if a.result.passed { "pass" } else { "FAIL" },
                if a.binding { "" } else { " (informational)" }
            ));
        }
        out.push_str(if self.ok() { "verdict: ok\n" } else { "verdict: FAIL\n" });
        out
    }
}

/// Resolves the worker count: explicit value, else the environment, else rayon's default.
pub fn resolve_workers(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(WORKERS_ENV).ok()?.parse().ok())
        .unwrap_or(0)
}

type Task<'a> = Box<dyn Fn() -> Check + Send + Sync + 'a>;

fn run_tasks(tasks: Vec<Task<'_>>, workers: usize) -> Vec<Check> {
    let run = || tasks.par_iter().map(|t| t()).collect::<Vec<_>>();
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => tasks.iter().map(|t| t()).collect(),
    }
}

fn thresholds(opts: &VerifyOptions, artifact: &Artifact, subset: Option<SubsetParams>) -> Option<(Threshold, Threshold)> {
    let stored = artifact.thresholds().or(subset.map(|p| (p.alpha, p.beta)));
    match (opts.alpha, opts.beta, stored) {
        (Some(a), Some(b), _) => Some((a, b)),
        (a, b, Some((sa, sb))) => Some((a.unwrap_or(sa), b.unwrap_or(sb))),
        _ => None,
    }
}

fn single(name: &'static str, kind: &str, message: String) -> Check {
    Check { name, violations: vec![json!({ "kind": kind, "message": message })] }
}

/// Checks that each rendered group of subsets is exactly the unranked group
/// of vertex ids it stands for (compared as sorted lists).
fn mapping_check(p: SubsetParams, groups: Vec<(&[usize], &[Vec<usize>])>) -> Check {
    const NAME: &str = "subset_mapping";
    let u = match KSubsetUniverse::new(p.n, p.k) {
        Ok(u) => u,
        Err(e) => return single(NAME, "universe", e.to_string()),
    };
    let violations = groups
        .into_iter()
        .enumerate()
        .filter_map(|(i, (ids, rendered))| {
            let mut expected = match ids.iter().map(|&id| u.unrank(id)).collect::<parpart_core::Result<Vec<_>>>() {
                Ok(e) => e,
                Err(e) => return Some(json!({ "kind": "mismatch", "message": format!("entry {i}: {e}") })),
            };
            let mut given = rendered.to_vec();
            expected.sort();
            given.sort();
            (expected != given).then(|| {
                json!({ "kind": "mismatch", "message": format!("entry {i}: ids {ids:?} are {expected:?}, file says {given:?}") })
            })
        })
        .collect();
    Check { name: NAME, violations }
}

/// Verifies `artifact` against the system in `sys`.
///
/// Errors only for inputs that cannot be interpreted at all (bad edge lists,
/// mismatched sizes); every property failure is reported as a violation.
pub fn verify_artifact(sys: &SystemFile, artifact: &Artifact, opts: &VerifyOptions) -> parpart_core::Result<VerificationReport> {
    let (g1, g2, g3) = sys.to_graphs()?;
    let m = sys.m;
    let subset = sys.subset_params();
    let th = thresholds(opts, artifact, subset);
    let l = artifact.l();
    if l < 2 {
        return Err(parpart_core::Error::Domain(format!("clique size l = {l} must be at least 2")));
    }
    let overlaps = file_disjointness(sys)?;

    let mut tasks: Vec<Task<'_>> = Vec::new();
    tasks.push(Box::new(move || Check {
        name: "system_disjointness",
        violations: overlaps.iter().map(disjointness_json).collect(),
    }));
    let (g1, g2, g3) = (&g1, &g2, &g3);
    let q = match artifact {
        Artifact::Family(f) => {
            family_tasks(&mut tasks, f, m, (g1, g2, g3), subset, th);
            opts.q.unwrap_or(1)
        }
        Artifact::Order(o) => {
            order_tasks(&mut tasks, o, m, (g1, g2, g3), subset, th);
            opts.q.or(o.q).unwrap_or(m)
        }
    };
    let checks = run_tasks(tasks, opts.workers);

    let degrees = (g1.min_degree().unwrap_or(0), g2.max_degree().unwrap_or(0), g3.max_degree().unwrap_or(0));
    let conditions = check_conditions(m as u64, l as u64, q.max(1) as u64, degrees.0 as u64, degrees.1 as u64, degrees.2 as u64);
    let holds = |id: &str| conditions.iter().any(|c| c.id == id && c.holds);
    let mut audits = Vec::new();
    match artifact {
        Artifact::Family(f) => {
            if let Some(blocks) = f.blocks.as_ref().filter(|_| f.m == Some(m)) {
                if !blocks.is_empty() && blocks.iter().flatten().all(|&v| v < m) {
                    audits.push(AuditEntry {
                        name: "swap_candidates",
                        result: audit_swap_candidates(g1, blocks, opts.samples, opts.seed),
                        binding: holds("2.1"),
                    });
                }
            }
        }
        Artifact::Order(o) => {
            if o.m == m && m >= 4 * l - 3 && verify_ham_power(g1, &o.order, 1).is_empty() {
                audits.push(AuditEntry {
                    name: "spanning_segments",
                    result: audit_spanning_segments(g1, &o.order, l, q, opts.samples, opts.seed),
                    binding: holds("1.1"),
                });
            }
        }
    }
    Ok(VerificationReport { checks, conditions, audits })
}

fn family_tasks<'a>(
    tasks: &mut Vec<Task<'a>>,
    f: &'a FamilyFile,
    m: usize,
    (g1, g2, g3): (&'a Graph, &'a Graph, &'a Graph),
    subset: Option<SubsetParams>,
    th: Option<(Threshold, Threshold)>,
) {
    let l = f.l;
    if let Some(blocks) = &f.blocks {
        if f.m.is_some_and(|fm| fm != m) {
            let fm = f.m.unwrap_or(0);
            tasks.push(Box::new(move || single("decomposition", "size_mismatch", format!("family has m = {fm}, system has m = {m}"))));
        } else {
            tasks.push(Box::new(move || Check::from_violations("decomposition", verify_decomposition(g1, blocks, l))));
            tasks.push(Box::new(move || {
                let in_range: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().copied().filter(|&v| v < m).collect()).collect();
                Check::from_violations("bag_free", verify_bag_free_family(&in_range, g2, g3))
            }));
        }
    }
    if f.parpartitions.is_some() {
        tasks.push(Box::new(move || {
            const NAME: &str = "subset_properties";
            let Some((alpha, beta)) = th else {
                return single(NAME, "missing_thresholds", "no alpha/beta given or stored".into());
            };
            match f.subset_family(alpha, beta) {
                None => single(NAME, "missing_parameters", "parpartitions without n and k".into()),
                Some(Err(e)) => single(NAME, "malformed_parpartition", e.to_string()),
                Some(Ok(fam)) => Check::from_violations(NAME, verify_theorem_output(TheoremArtifact::Family(&fam), alpha, beta)),
            }
        }));
        if let (Some(p), Some(blocks), Some(pps)) = (subset, &f.blocks, &f.parpartitions) {
            tasks.push(Box::new(move || {
                if blocks.len() != pps.len() {
                    return single("subset_mapping", "length", format!("{} blocks, {} parpartitions", blocks.len(), pps.len()));
                }
                let groups = blocks.iter().map(Vec::as_slice).zip(pps.iter().map(Vec::as_slice)).collect();
                mapping_check(p, groups)
            }));
        }
    }
}

fn order_tasks<'a>(
    tasks: &mut Vec<Task<'a>>,
    o: &'a OrderFile,
    m: usize,
    (g1, g2, g3): (&'a Graph, &'a Graph, &'a Graph),
    subset: Option<SubsetParams>,
    th: Option<(Threshold, Threshold)>,
) {
    let l = o.l;
    if o.m != m {
        tasks.push(Box::new(move || single("ham_power", "size_mismatch", format!("order has m = {}, system has m = {m}", o.m))));
    } else {
        tasks.push(Box::new(move || Check::from_violations("ham_power", verify_ham_power(g1, &o.order, l))));
        tasks.push(Box::new(move || Check::from_violations("bag_free", verify_bag_free_windows(&o.order, l, g2, g3))));
    }
    if let Some(subsets) = &o.subsets {
        tasks.push(Box::new(move || {
            const NAME: &str = "subset_properties";
            let (Some(n), Some(k), Some((alpha, beta))) = (o.n, o.k, th) else {
                return single(NAME, "missing_parameters", "subsets without n, k, alpha and beta".into());
            };
            let art = TheoremArtifact::Order { n, k, l, subsets };
            Check::from_violations(NAME, verify_theorem_output(art, alpha, beta))
        }));
        if let Some(p) = subset {
            tasks.push(Box::new(move || {
                if subsets.len() != o.order.len() {
                    return single("subset_mapping", "length", format!("{} ids, {} subsets", o.order.len(), subsets.len()));
                }
                let groups = o.order.iter().zip(subsets).map(|(id, s)| (std::slice::from_ref(id), std::slice::from_ref(s))).collect();
                mapping_check(p, groups)
            }));
        }
    }
}
