use std::time::{Duration, Instant};

use crate::budget::Budget;
use crate::heuristic::{hill_climb, HeuristicSolution, PerturbParams};
use crate::pace_io::Instance;
use crate::preprocess::{assemble_solution, eliminate_twins, restrict_sequence, split_components};
use crate::reference::verify_sequence;
use crate::sequence::ContractionSequence;
use crate::solver::SolveResult;
use crate::trigraph::VertexId;

use super::dp::{solve_component, DpConfig};
use super::lower_bound::{lower_bound, stage_budget, LowerBoundConfig};
use super::{Bounds, ExactError, Stage};

#[derive(Clone, Debug)]
pub struct ExactConfig {
    /// Hill climbing for the initial upper bounds. Iteration-capped by
    /// default so runs are reproducible.
    pub hill_climb: PerturbParams,
    pub lower_bound: LowerBoundConfig,
    pub use_lower_bound: bool,
    /// Share of the remaining time given to lower-bound sampling.
    pub lb_budget_fraction: f64,
    /// Lower-bound allowance when the run has no deadline.
    pub lb_fallback: Duration,
    pub dp: DpConfig,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            hill_climb: PerturbParams {
                max_batches: Some(16),
                ..PerturbParams::default()
            },
            lower_bound: LowerBoundConfig::default(),
            use_lower_bound: true,
            lb_budget_fraction: 0.1,
            lb_fallback: Duration::from_secs(60),
            dp: DpConfig::default(),
        }
    }
}

impl ExactConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.hill_climb.rng_seed = seed;
        self.lower_bound.seed = seed;
        self
    }
}

struct Prepared {
    // compact component, map back to instance labels
    graph: crate::trigraph::Trigraph,
    map: Vec<VertexId>,
    bounds: Bounds,
}

/// Twin elimination, a global hill climb, per-component lower bounds, then
/// the layered search per component, largest first. A later component may
/// stop at any width no larger than what an earlier one already needs.
pub fn solve_exact(inst: &Instance, config: &ExactConfig, budget: &Budget) -> Result<SolveResult, ExactError> {
    let start = Instant::now();
    let (reduced, prelude) = eliminate_twins(&inst.trigraph());
    let components = split_components(&reduced);

    let mut prepared: Vec<Option<Prepared>> = Vec::with_capacity(components.len());
    let nontrivial = components.iter().any(|c| c.vertices.len() > 1);
    let global = nontrivial.then(|| hill_climb(&reduced, &config.hill_climb, None, budget));

    for (i, comp) in components.iter().enumerate() {
        if comp.vertices.len() == 1 {
            prepared.push(None);
            continue;
        }
        let (graph, map) = comp.trigraph.compact();
        let mut back = vec![VertexId(0); inst.n + 1];
        for (new, old) in map.iter().enumerate().skip(1) {
            back[old.idx()] = VertexId(new as u32);
        }
        let global = global.as_ref().expect("nontrivial component implies a global run");
        let restricted = restrict_sequence(&global.seq, &comp.vertices, inst.n).relabel(&back);
        let initial = HeuristicSolution::from_sequence(&graph, restricted)?;
        let params = PerturbParams {
            rng_seed: config.hill_climb.rng_seed.wrapping_add(i as u64 + 1),
            ..config.hill_climb.clone()
        };
        let upper = hill_climb(&graph, &params, Some(initial), budget);
        prepared.push(Some(Prepared {
            bounds: Bounds {
                lower: 1,
                upper: upper.width,
                upper_witness: upper.seq,
            },
            graph,
            map,
        }));
    }

    if config.use_lower_bound {
        for p in prepared.iter_mut().flatten() {
            if p.bounds.upper <= p.bounds.lower {
                continue;
            }
            let lb_budget = stage_budget(budget, config.lb_budget_fraction, config.lb_fallback);
            let lb = lower_bound(&p.graph, &config.lower_bound, &lb_budget);
            p.bounds.lower = p.bounds.lower.max(lb).min(p.bounds.upper);
        }
    }

    let lower = prepared.iter().flatten().map(|p| p.bounds.lower).max().unwrap_or(0);
    let initial_upper = prepared.iter().flatten().map(|p| p.bounds.upper).max().unwrap_or(0);

    let mut accept = 0;
    let mut width = 0;
    let mut stage = Stage::Twins;
    let mut sequences = Vec::with_capacity(components.len());
    let mut survivors = Vec::with_capacity(components.len());
    for (comp, p) in components.iter().zip(prepared) {
        let Some(p) = p else {
            sequences.push(ContractionSequence::new());
            survivors.push(comp.vertices[0]);
            continue;
        };
        let result = solve_component(&p.graph, p.bounds, accept, &config.dp, budget)?;
        if result.width > width || stage == Stage::Twins {
            width = width.max(result.width);
            if result.width == width {
                stage = result.stage;
            }
        }
        accept = accept.max(result.width);
        let seq = result.seq.relabel(&p.map);
        survivors.push(final_survivor(&seq));
        sequences.push(seq);
    }

    let seq = assemble_solution(&prelude, &sequences, &survivors)?;
    let report = verify_sequence(inst, &seq)?;
    if report.width != width {
        return Err(ExactError::WidthMismatch {
            claimed: width,
            actual: report.width,
        });
    }
    Ok(SolveResult {
        width,
        seq,
        stage,
        optimal: true,
        lower_bound: lower,
        initial_upper,
        elapsed: start.elapsed(),
    })
}

fn final_survivor(seq: &ContractionSequence) -> VertexId {
    let removed: std::collections::HashSet<VertexId> = seq.iter().map(|p| p.removed).collect();
    seq.iter()
        .map(|p| p.survivor)
        .find(|s| !removed.contains(s))
        .expect("a complete component sequence keeps one vertex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::oracle_twinwidth;

    fn run(inst: &Instance) -> SolveResult {
        solve_exact(inst, &ExactConfig::default(), &Budget::unlimited()).unwrap()
    }

    #[test]
    fn single_vertex() {
        let r = run(&Instance::new(1, vec![]));
        assert_eq!(r.width, 0);
        assert!(r.seq.is_empty());
    }

    #[test]
    fn p4_plus_c5() {
        // P4 on 1..4, C5 on 5..9
        let mut e = vec![(1, 2), (2, 3), (3, 4)];
        e.extend([(5, 6), (6, 7), (7, 8), (8, 9), (9, 5)]);
        let inst = Instance::new(9, e);
        let r = run(&inst);
        assert_eq!(r.width, 2);
        assert_eq!(verify_sequence(&inst, &r.seq).unwrap().width, 2);
    }

    #[test]
    fn matches_oracle_on_small_graphs() {
        let cases = [
            Instance::new(4, vec![(1, 2), (2, 3), (3, 4)]),
            Instance::new(5, vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]),
            Instance::new(6, vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4)]),
            Instance::new(7, vec![(1, 2), (1, 3), (2, 4), (3, 5), (4, 6), (5, 7), (6, 7), (2, 5)]),
        ];
        for inst in &cases {
            assert_eq!(run(inst).width, oracle_twinwidth(inst).unwrap().0, "{inst}");
        }
    }

    #[test]
    fn isolated_vertices_and_cographs() {
        let r = run(&Instance::new(3, vec![]));
        assert_eq!((r.width, r.seq.len(), r.stage), (0, 2, Stage::Twins));
        let k23 = Instance::new(5, vec![(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert_eq!(run(&k23).width, 0);
    }
}
