//! Exact twin-width: a layered search over partial contraction sequences,
//! a subgraph-sampling lower bound, and the per-component driver.

mod dp;
mod key;
mod lower_bound;
mod solve;

use thiserror::Error;

use crate::preprocess::AssembleError;
use crate::reference::VerifyError;
use crate::sequence::ContractionSequence;

pub use dp::{solve_component, DpConfig, Pruning};
pub use key::{canonical_key, PartitionKey};
pub use lower_bound::{lower_bound, LowerBoundConfig};
pub use solve::{solve_exact, ExactConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lower: u32,
    pub upper: u32,
    pub upper_witness: ContractionSequence,
}

/// How a component's (or an instance's) answer was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Nothing to contract, or twin elimination alone finished it.
    Twins,
    /// Upper bound met the lower bound before any search.
    BoundsMatch,
    /// The witness fits under the width another component already needs.
    AcceptedSuboptimal,
    /// Settled by the layered search.
    Search,
    /// Heuristic answer only.
    Heuristic,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Twins => "twins",
            Stage::BoundsMatch => "bounds-match",
            Stage::AcceptedSuboptimal => "accepted-suboptimal",
            Stage::Search => "search",
            Stage::Heuristic => "heuristic",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentResult {
    pub width: u32,
    pub seq: ContractionSequence,
    /// False when accepted only because another component is at least as wide.
    pub optimal: bool,
    pub stage: Stage,
    /// Layers fully expanded by the search.
    pub layers: usize,
    /// States that entered a frontier.
    pub states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("time budget exhausted in layer {layer}")]
    Timeout { layer: usize },
    #[error("memory cap exceeded in layer {layer} ({states} live states)")]
    MemoryExhausted { layer: usize, states: usize },
    #[error("solver produced an invalid sequence: {0}")]
    Invalid(#[from] VerifyError),
    #[error("width mismatch: claimed {claimed}, replay gives {actual}")]
    WidthMismatch { claimed: u32, actual: u32 },
    #[error(transparent)]
    Assemble(#[from] AssembleError),
}
