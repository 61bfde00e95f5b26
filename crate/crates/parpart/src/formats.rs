//! Canonical JSON file formats.
//!
//! Every writer goes through [`to_canonical_string`]: object keys sorted,
//! compact, newline-terminated. Edge lists are `[u, v]` pairs with `u < v`
//! in lexicographic order; blocks and subsets are sorted.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use parpart_core::decomp::CliqueFamily;
use parpart_core::graph::disjointness_violations;
use parpart_core::graph::{DisjointnessViolation, Overlap};
use parpart_core::report::{ConstructionStats, Warning};
use parpart_core::verify::{BoundAudit, ConditionReport, SampleAudit, Violation};
use parpart_core::{CyclicOrder, Graph, Parpartition, ParpartitionFamily, Rational, RunReport, Threshold, TripleGraphSystem};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub type EdgeList = Vec<[usize; 2]>;

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("file types serialize to JSON");
    let mut s = serde_json::to_string(&sort_keys(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_canonical_string(value)).map_err(|source| Error::Io { path: path.to_owned(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    parse_json(path, &text)
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn edge_list(g: &Graph) -> EdgeList {
    g.edges().into_iter().map(|(u, v)| [u, v]).collect()
}

fn graph_from(m: usize, edges: &EdgeList) -> parpart_core::Result<Graph> {
    Graph::from_edges(m, edges.iter().map(|&[u, v]| (u, v)))
}

pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub m: usize,
    pub edges: EdgeList,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile { m: g.vertex_count(), edges: edge_list(g) }
    }

    pub fn to_graph(&self) -> parpart_core::Result<Graph> {
        graph_from(self.m, &self.edges)
    }
}

/// Where a system came from, so runs can be regenerated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    /// `"subsets"` for the k-subset reduction, `"synthetic"` for generated systems.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

/// Parameters of a k-subset system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetParams {
    pub n: usize,
    pub k: usize,
    pub alpha: Threshold,
    pub beta: Threshold,
}

impl Provenance {
    pub fn subsets(p: SubsetParams) -> Self {
        let params = BTreeMap::from([
            ("n".to_owned(), json!(p.n)),
            ("k".to_owned(), json!(p.k)),
            ("alpha".to_owned(), json!(p.alpha.to_string())),
            ("beta".to_owned(), json!(p.beta.to_string())),
        ]);
        Provenance { kind: "subsets".into(), seed: None, params }
    }

    pub fn synthetic(seed: u64, params: impl IntoIterator<Item = (&'static str, Value)>) -> Self {
        Provenance {
            kind: "synthetic".into(),
            seed: Some(seed),
            params: params.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        }
    }

    /// The subset parameters, if this is a well-formed `"subsets"` provenance.
    pub fn subset_params(&self) -> Option<SubsetParams> {
        if self.kind != "subsets" {
            return None;
        }
        let int = |key: &str| self.params.get(key)?.as_u64().map(|x| x as usize);
        let thr = |key: &str| self.params.get(key)?.as_str()?.parse().ok();
        Some(SubsetParams { n: int("n")?, k: int("k")?, alpha: thr("alpha")?, beta: thr("beta")? })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub m: usize,
    pub g1: EdgeList,
    pub g2: EdgeList,
    pub g3: EdgeList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl SystemFile {
    pub fn from_system(sys: &TripleGraphSystem, provenance: Option<Provenance>) -> Self {
        SystemFile {
            m: sys.vertex_count(),
            g1: edge_list(sys.g1()),
            g2: edge_list(sys.g2()),
            g3: edge_list(sys.g3()),
            provenance,
        }
    }

    /// Builds the three graphs without enforcing `E1 ∩ E2 = E1 ∩ E3 = ∅`,
    /// so the verifier can report overlaps instead of refusing the file.
    pub fn to_graphs(&self) -> parpart_core::Result<(Graph, Graph, Graph)> {
        Ok((graph_from(self.m, &self.g1)?, graph_from(self.m, &self.g2)?, graph_from(self.m, &self.g3)?))
    }

    pub fn to_system(&self) -> parpart_core::Result<TripleGraphSystem> {
        let (g1, g2, g3) = self.to_graphs()?;
        TripleGraphSystem::new(g1, g2, g3)
    }

    pub fn subset_params(&self) -> Option<SubsetParams> {
        self.provenance.as_ref()?.subset_params()
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_json(path)
    }
}

/// A clique family, a parpartition family, or both (the subset rendering of
/// the same cliques, block by block).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parpartitions: Option<Vec<Vec<Vec<usize>>>>,
}

impl FamilyFile {
    pub fn from_cliques(fam: &CliqueFamily, subsets: Option<&ParpartitionFamily>) -> Self {
        let fam = fam.canonicalized();
        let mut out = FamilyFile {
            m: Some(fam.vertex_count()),
            l: fam.clique_size(),
            blocks: Some(fam.blocks().to_vec()),
            n: None,
            k: None,
            alpha: None,
            beta: None,
            parpartitions: None,
        };
        if let Some(s) = subsets {
            out.n = Some(s.n);
            out.k = Some(s.k);
            out.alpha = Some(s.alpha.to_string());
            out.beta = Some(s.beta.to_string());
            out.parpartitions = Some(s.parpartitions.iter().map(|p| p.blocks().to_vec()).collect());
        }
        out
    }

    /// The parpartition family, if present. Malformed parpartitions are errors.
    pub fn subset_family(&self, alpha: Threshold, beta: Threshold) -> Option<parpart_core::Result<ParpartitionFamily>> {
        let pps = self.parpartitions.as_ref()?;
        let (n, k) = (self.n?, self.k?);
        let build = || {
            let parpartitions = pps.iter().map(|b| Parpartition::new(b.clone())).collect::<parpart_core::Result<_>>()?;
            Ok(ParpartitionFamily { n, k, l: self.l, alpha, beta, parpartitions })
        };
        Some(build())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderFile {
    pub m: usize,
    pub l: usize,
    pub order: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// The k-subsets in cycle order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsets: Option<Vec<Vec<usize>>>,
}

impl OrderFile {
    pub fn from_order(order: &CyclicOrder, l: usize, q: usize) -> Self {
        OrderFile {
            m: order.len(),
            l,
            order: order.as_slice().to_vec(),
            q: Some(q),
            n: None,
            k: None,
            alpha: None,
            beta: None,
            subsets: None,
        }
    }

    pub fn with_subsets(mut self, p: SubsetParams, subsets: Vec<Vec<usize>>) -> Self {
        self.n = Some(p.n);
        self.k = Some(p.k);
        self.alpha = Some(p.alpha.to_string());
        self.beta = Some(p.beta.to_string());
        self.subsets = Some(subsets);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Family(FamilyFile),
    Order(OrderFile),
}

impl Artifact {
    /// Reads a family or order file, telling them apart by the `"order"` key.
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let value: Value = parse_json(path, &text)?;
        if value.get("order").is_some() {
            parse_json(path, &text).map(Artifact::Order)
        } else if value.get("blocks").is_some() || value.get("parpartitions").is_some() {
            parse_json(path, &text).map(Artifact::Family)
        } else {
            Err(Error::Content {
                path: path.to_owned(),
                message: "neither a family (\"blocks\"/\"parpartitions\") nor an order (\"order\")".into(),
            })
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        match self {
            Artifact::Family(f) => write_json(path, f),
            Artifact::Order(o) => write_json(path, o),
        }
    }

    pub fn l(&self) -> usize {
        match self {
            Artifact::Family(f) => f.l,
            Artifact::Order(o) => o.l,
        }
    }

    /// Thresholds stored in a subset rendering, if any.
    pub fn thresholds(&self) -> Option<(Threshold, Threshold)> {
        let (a, b) = match self {
            Artifact::Family(f) => (f.alpha.as_ref()?, f.beta.as_ref()?),
            Artifact::Order(o) => (o.alpha.as_ref()?, o.beta.as_ref()?),
        };
        Some((a.parse().ok()?, b.parse().ok()?))
    }
}

pub fn condition_json(c: &ConditionReport) -> Value {
    json!({
        "id": c.id,
        "lhs": rational_str(&c.lhs),
        "rhs": rational_str(&c.rhs),
        "relation": c.relation.symbol(),
        "holds": c.holds,
    })
}

fn stats_json(s: &ConstructionStats) -> Value {
    json!({
        "defects_processed": s.defects_processed,
        "repair_moves": s.repair_moves,
        "repair_fallbacks": s.repair_fallbacks,
        "activations": s.activations,
        "forced_swaps": s.forced_swaps,
        "rejected_per_swap": s.rejected_per_swap,
        "candidates_per_swap": s.candidates_per_swap,
        "max_rejected": s.max_rejected(),
        "audit": s.audit,
    })
}

pub fn warning_json(w: &Warning) -> Value {
    Value::String(w.to_string())
}

/// RunReport JSON with the run's parameters and, in audit mode, the bad-count audit.
pub fn run_report_json(report: &RunReport, params: Value, bad_count: Option<&BoundAudit>) -> Value {
    let mut v = json!({
        "mode": report.mode.as_str(),
        "params": params,
        "conditions": report.conditions.iter().map(condition_json).collect::<Vec<_>>(),
        "warnings": report.warnings.iter().map(warning_json).collect::<Vec<_>>(),
        "stats": stats_json(&report.stats),
    });
    if let Some(a) = bad_count {
        v["bad_count_audit"] = bound_audit_json(a);
    }
    v
}

pub fn sample_audit_json(a: &SampleAudit) -> Value {
    json!({ "samples": a.samples, "min_count": a.min_count, "bound": a.bound, "passed": a.passed })
}

pub fn bound_audit_json(a: &BoundAudit) -> Value {
    json!({ "events": a.events, "max_count": a.max_count, "bound": a.bound, "passed": a.passed })
}

fn pair(e: (usize, usize)) -> Value {
    json!([e.0, e.1])
}

pub fn violation_json(v: &Violation) -> Value {
    let kind = match v {
        Violation::Bag { pair: p, e2, e3 } => return json!({ "pair": pair(*p), "e2": pair(*e2), "e3": pair(*e3) }),
        Violation::BlockSize { .. } => "block_size",
        Violation::VertexOutOfRange { .. } => "vertex_out_of_range",
        Violation::SharedVertex { .. } => "shared_vertex",
        Violation::BlockCount { .. } => "block_count",
        Violation::NotClique { .. } => "not_clique",
        Violation::NotPermutation { .. } => "not_permutation",
        Violation::MissingPowerEdge { .. } => "missing_power_edge",
        Violation::MalformedParpartition { .. } => "malformed_parpartition",
        Violation::RepeatedSubset { .. } => "repeated_subset",
        Violation::WindowNotDisjoint { .. } => "window_not_disjoint",
        Violation::ClosePair { .. } => "close_pair",
    };
    json!({ "kind": kind, "message": v.to_string() })
}

pub fn disjointness_json(v: &DisjointnessViolation) -> Value {
    let graphs = match v.overlap {
        Overlap::G1G2 => "g1&g2",
        Overlap::G1G3 => "g1&g3",
    };
    json!({ "edge": pair(v.edge), "graphs": graphs })
}

/// Overlaps between `g1` and the other two graphs of a file.
pub fn file_disjointness(sys: &SystemFile) -> parpart_core::Result<Vec<DisjointnessViolation>> {
    let (g1, g2, g3) = sys.to_graphs()?;
    Ok(disjointness_violations(&g1, &g2, &g3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_output_sorts_keys() {
        let v = json!({"b": 1, "a": {"d": [2, 1], "c": null}});
        assert_eq!(to_canonical_string(&v), "{\"a\":{\"c\":null,\"d\":[2,1]},\"b\":1}\n");
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_json::<GraphFile>(Path::new("g.json"), "{\"m\": 3,\n \"edges\": [[0, 1],]}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
        assert!(parse_json::<GraphFile>(Path::new("g.json"), "{\"m\": 3, \"edges\": [], \"x\": 1}").is_err());
    }

    #[test]
    fn subset_provenance_round_trips() {
        let p = SubsetParams {
            n: 9,
            k: 3,
            alpha: "1/2".parse().unwrap(),
            beta: "2/3".parse().unwrap(),
        };
        let prov = Provenance::subsets(p);
        let back: Provenance = serde_json::from_str(&to_canonical_string(&prov)).unwrap();
        assert_eq!(back.subset_params(), Some(p));
        assert_eq!(Provenance::synthetic(1, []).subset_params(), None);
    }

    #[test]
    fn rationals_always_have_a_denominator() {
        assert_eq!(rational_str(&parpart_core::rational::int(4)), "4/1");
        assert_eq!(rational_str(&parpart_core::rational::frac(6, 4)), "3/2");
    }
}
