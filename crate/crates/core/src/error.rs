use alloc::string::String;
use alloc::vec::Vec;

use crate::verify::ConditionReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input claimed a structural property it does not have.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// A repair loop found no admissible swap for a defect.
    #[error("repair failed at pair ({}, {}): {reason} ({candidates_found} candidates)", defect.0, defect.1)]
    RepairFailure {
        defect: (usize, usize),
        candidates_found: usize,
        reason: &'static str,
    },

    /// The final bag scan of a construction was not empty.
    #[error("bag check failed: {0} violating pairs after construction")]
    BagCheckFailure(usize),

    /// Guaranteed mode was requested but a hypothesis does not hold.
    #[error("conditions unmet: {}", unmet_names(.0))]
    ConditionUnmet(Vec<ConditionReport>),

    /// The complement of the forbidden graph cannot host the requested degrees.
    #[error("insufficient room in {graph}: requested max degree {requested}, reached {achieved}")]
    InsufficientRoom {
        graph: &'static str,
        requested: usize,
        achieved: usize,
    },
}

fn unmet_names(reports: &[ConditionReport]) -> String {
    let mut out = String::new();
    for r in reports.iter().filter(|r| !r.holds) {
        if !out.is_empty() {
            out.push_str(", ");
        }
        out.push_str(&alloc::format!("{} ({} vs {})", r.id, r.lhs, r.rhs));
    }
    out
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
