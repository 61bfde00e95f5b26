//! Run bookkeeping shared by the construction drivers.

use alloc::vec::Vec;
use core::fmt;

use crate::verify::ConditionReport;

/// Whether a driver insists on the sufficient conditions before running.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Guaranteed,
    BestEffort,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Guaranteed => "guaranteed",
            Mode::BestEffort => "best_effort",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "guaranteed" => Ok(Mode::Guaranteed),
            "best_effort" | "best-effort" => Ok(Mode::BestEffort),
            other => Err(crate::error::domain(alloc::format!("unknown mode {other:?}"))),
        }
    }
}

/// Non-fatal observations about an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// k > n/2: no two k-subsets are disjoint.
    DisjointnessGraphEmpty { n: usize, k: usize },
    /// The threshold leaves no admissible intersection size, so the graph is edgeless.
    IntersectionGraphEmpty { graph: u8 },
    /// Both G2 and G3 are edgeless, so closeness can never occur.
    ClosenessVacuous,
    /// A hypothesis was evaluated and failed while running in best-effort mode.
    ConditionFailed { id: &'static str },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DisjointnessGraphEmpty { n, k } => {
                write!(f, "k = {k} > n/2 = {n}/2: the disjointness graph G1 has no edges")
            }
            Warning::IntersectionGraphEmpty { graph } => write!(
                f,
                "G{graph} is edgeless: its threshold times k is at least k-1"
            ),
            Warning::ClosenessVacuous => {
                write!(f, "G2 and G3 are both edgeless: closeness is vacuous")
            }
            Warning::ConditionFailed { id } => {
                write!(f, "condition {id} does not hold; running best effort")
            }
        }
    }
}

/// Counters recorded by the swap-repair and bag-elimination loops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionStats {
    /// Defects (missing G1 pairs) processed by the repair loop.
    pub defects_processed: usize,
    /// Swaps (decomposition) or rearrangements (cycle power) applied during repair.
    pub repair_moves: usize,
    /// Repairs that needed the fallback endpoint or search route.
    pub repair_fallbacks: usize,
    /// E3 edges activated one at a time.
    pub activations: usize,
    /// Activations that would have created a bag and forced a swap.
    pub forced_swaps: usize,
    /// Per forced swap: candidates rejected as bad. In audit mode this is the
    /// exact number of bad candidates among all candidates; otherwise only
    /// the rejections seen before the chosen one.
    pub rejected_per_swap: Vec<usize>,
    /// Per forced swap: how many candidates were examined in total.
    pub candidates_per_swap: Vec<usize>,
    pub audit: bool,
}

impl ConstructionStats {
    pub fn max_rejected(&self) -> usize {
        self.rejected_per_swap.iter().copied().max().unwrap_or(0)
    }
}

/// Everything a driver run reports besides its artifact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub mode: Mode,
    pub conditions: Vec<ConditionReport>,
    pub warnings: Vec<Warning>,
    pub stats: ConstructionStats,
}
