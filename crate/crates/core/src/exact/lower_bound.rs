use std::collections::{HashSet, VecDeque};
use std::time::Duration;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::heuristic::greedy_extend;
use crate::preprocess::eliminate_twins;
use crate::trigraph::{Trigraph, VertexId};

use super::dp::{solve_component, DpConfig};
use super::Bounds;

#[derive(Clone, Debug)]
pub struct LowerBoundConfig {
    /// Upper limit on sampled subgraphs.
    pub samples: usize,
    /// Vertices per sampled subgraph.
    pub size_cap: usize,
    pub seed: u64,
    /// Memory cap handed to each sub-search.
    pub memory_cap: Option<usize>,
}

impl Default for LowerBoundConfig {
    fn default() -> Self {
        LowerBoundConfig {
            samples: 16,
            size_cap: 20,
            seed: 0,
            memory_cap: Some(256 << 20),
        }
    }
}

/// Twin-width of a graph bounds that of each induced subgraph, so exact
/// widths of sampled subgraphs give a lower bound. Samples are BFS balls of
/// radius 2 and 3 around high-degree vertices and randomly grown connected
/// sets, each truncated to `size_cap` vertices; a component within the cap is
/// solved whole. Samples that do not finish inside the budget are skipped.
pub fn lower_bound(component: &Trigraph, config: &LowerBoundConfig, budget: &Budget) -> u32 {
    if budget.expired() || component.live_count() <= 1 || config.size_cap == 0 {
        return 0;
    }
    if component.live_count() <= config.size_cap {
        let all: Vec<VertexId> = component.live_vertices().collect();
        return exact_width_above(component, &all, 0, config, budget).unwrap_or(0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut samples: Vec<Vec<VertexId>> = Vec::new();

    let mut by_degree: Vec<VertexId> = component.live_vertices().collect();
    by_degree.sort_by(|a, b| component.degree(*b).cmp(&component.degree(*a)).then(a.cmp(b)));
    let ball_seeds = config.samples.div_ceil(2);
    'balls: for &seed in &by_degree {
        for radius in [2, 3] {
            if samples.len() >= ball_seeds {
                break 'balls;
            }
            let mut ball = bfs_ball(component, seed, radius, config.size_cap);
            ball.sort_unstable();
            if seen.insert(ball.clone()) {
                samples.push(ball);
            }
        }
    }
    let live: Vec<VertexId> = component.live_vertices().collect();
    let mut attempts = 0;
    while samples.len() < config.samples && attempts < 4 * config.samples {
        attempts += 1;
        let start = live[rng.gen_range(0..live.len())];
        let mut set = random_connected(component, start, config.size_cap, &mut rng);
        set.sort_unstable();
        if seen.insert(set.clone()) {
            samples.push(set);
        }
    }

    let mut best = 0;
    for sample in samples {
        if budget.expired() {
            break;
        }
        if let Some(w) = exact_width_above(component, &sample, best, config, budget) {
            best = best.max(w);
        }
    }
    best
}

// Twin-width of the induced subgraph when it exceeds `floor`; a value no
// larger than `floor` otherwise. None when the sub-search gave up.
fn exact_width_above(
    g: &Trigraph,
    keep: &[VertexId],
    floor: u32,
    config: &LowerBoundConfig,
    budget: &Budget,
) -> Option<u32> {
    let sub = g.induced_subtrigraph(keep).ok()?;
    let (reduced, _) = eliminate_twins(&sub);
    let (reduced, _) = reduced.compact();
    if reduced.live_count() <= 1 {
        return Some(0);
    }
    let seed = greedy_extend(&reduced, 0);
    // Twin-free with two or more vertices, so the width is at least 1.
    if seed.width <= floor.max(1) {
        return Some(seed.width);
    }
    let bounds = Bounds {
        lower: floor.max(1),
        upper: seed.width,
        upper_witness: seed.seq,
    };
    let dp = DpConfig {
        memory_cap: config.memory_cap,
        ..DpConfig::default()
    };
    solve_component(&reduced, bounds, 0, &dp, budget).ok().map(|r| r.width)
}

fn bfs_ball(g: &Trigraph, seed: VertexId, radius: usize, cap: usize) -> Vec<VertexId> {
    let mut dist = vec![usize::MAX; g.capacity() + 1];
    let mut queue = VecDeque::from([seed]);
    dist[seed.idx()] = 0;
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        out.push(u);
        if out.len() == cap {
            break;
        }
        if dist[u.idx()] == radius {
            continue;
        }
        for &(w, _) in g.neighbors(u) {
            if dist[w.idx()] == usize::MAX {
                dist[w.idx()] = dist[u.idx()] + 1;
                queue.push_back(w);
            }
        }
    }
    out
}

fn random_connected<R: Rng>(g: &Trigraph, start: VertexId, cap: usize, rng: &mut R) -> Vec<VertexId> {
    let mut inside = vec![false; g.capacity() + 1];
    let mut set = vec![start];
    inside[start.idx()] = true;
    let mut boundary: Vec<VertexId> = Vec::new();
    let push_boundary = |u: VertexId, inside: &[bool], boundary: &mut Vec<VertexId>| {
        for &(w, _) in g.neighbors(u) {
            if !inside[w.idx()] {
                boundary.push(w);
            }
        }
    };
    push_boundary(start, &inside, &mut boundary);
    while set.len() < cap && !boundary.is_empty() {
        boundary.shuffle(rng);
        let w = boundary.pop().unwrap();
        if inside[w.idx()] {
            continue;
        }
        inside[w.idx()] = true;
        set.push(w);
        push_boundary(w, &inside, &mut boundary);
    }
    set
}

/// Budget slice for the lower-bound stage.
pub(crate) fn stage_budget(budget: &Budget, fraction: f64, fallback: Duration) -> Budget {
    match budget.remaining() {
        Some(rem) => budget.slice(rem.mul_f64(fraction)),
        None => budget.slice(fallback),
    }
}
