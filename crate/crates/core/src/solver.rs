use std::time::{Duration, Instant};

use crate::budget::Budget;
use crate::exact::Stage;
use crate::heuristic::{greedy_extend_within, hill_climb, HeuristicSolution, PerturbParams};
use crate::pace_io::Instance;
use crate::preprocess::eliminate_twins;
use crate::sequence::ContractionSequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub width: u32,
    pub seq: ContractionSequence,
    pub stage: Stage,
    /// Whether `width` is proven to be the twin-width.
    pub optimal: bool,
    /// Best lower bound known when the search started.
    pub lower_bound: u32,
    /// Width of the upper-bound witness the search started from.
    pub initial_upper: u32,
    pub elapsed: Duration,
}

/// Twin elimination, then a greedy seed, then hill climbing until the
/// budget or the iteration cap runs out. `on_seed` sees the first complete
/// sequence as soon as it exists.
///
/// The seed ignores the deadline and stops early only on the stop flag, so
/// even a zero time limit yields the full greedy answer.
pub fn solve_heuristic(
    inst: &Instance,
    params: &PerturbParams,
    budget: &Budget,
    mut on_seed: impl FnMut(&ContractionSequence),
) -> SolveResult {
    let start = Instant::now();
    let (reduced, prelude) = eliminate_twins(&inst.trigraph());
    let seed = greedy_extend_within(&reduced, 0, &budget.without_deadline());
    let mut full = prelude.clone();
    full.extend_from(&seed.seq);
    on_seed(&full);
    let initial_upper = seed.width;
    let best: HeuristicSolution = hill_climb(&reduced, params, Some(seed), budget);
    let mut seq = prelude;
    seq.extend_from(&best.seq);
    SolveResult {
        width: best.width,
        seq,
        stage: if reduced.live_count() <= 1 { Stage::Twins } else { Stage::Heuristic },
        optimal: best.width == 0,
        lower_bound: 0,
        initial_upper,
        elapsed: start.elapsed(),
    }
}
