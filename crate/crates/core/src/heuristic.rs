//! Upper bounds: a greedy constructor and a plateau-driven hill climber.
//!
//! The greedy commits, at every step, the candidate pair whose contraction
//! leaves the smallest maximum red degree. Hill climbing perturbs the part of
//! a solution before it first reaches its final width (the plateau start `p`)
//! and re-completes greedily, preferring solutions that reach the width as
//! late as possible.

use std::time::Duration;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::budget::Budget;
use crate::reference::{replay, VerifyError};
use crate::sequence::ContractionSequence;
use crate::trigraph::{ContractionPair, Trigraph, VertexId};

pub const DEFAULT_BATCH_SIZE: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicSolution {
    pub seq: ContractionSequence,
    pub width: u32,
    /// Running maxima after each step.
    pub per_step_max: Vec<u32>,
    /// 1-based index of the first step whose running maximum equals `width`;
    /// 0 for an empty sequence.
    pub plateau_start: usize,
}

impl HeuristicSolution {
    fn new(seq: ContractionSequence, per_step_max: Vec<u32>, floor: u32) -> Self {
        let width = per_step_max.last().copied().unwrap_or(floor);
        let plateau_start = plateau_start(&per_step_max).unwrap_or(0);
        HeuristicSolution {
            seq,
            width,
            per_step_max,
            plateau_start,
        }
    }
}

impl HeuristicSolution {
    /// Replays `seq` on `base` and records its profile.
    pub fn from_sequence(base: &Trigraph, seq: ContractionSequence) -> Result<Self, VerifyError> {
        let floor = base.max_red_degree();
        let report = replay(base, &seq, floor)?;
        Ok(HeuristicSolution::new(seq, report.per_step_max, floor))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("empty width profile")]
    EmptyProfile,
}

/// Smallest 1-based `i` with `per_step_max[i] == last`.
pub fn plateau_start(per_step_max: &[u32]) -> Result<usize, HeuristicError> {
    let &last = per_step_max.last().ok_or(HeuristicError::EmptyProfile)?;
    Ok(per_step_max.iter().position(|&d| d == last).expect("last element matches") + 1)
}

pub fn greedy_extend(g: &Trigraph, prefix_width: u32) -> HeuristicSolution {
    greedy_extend_within(g, prefix_width, &Budget::unlimited())
}

/// Greedy completion of `g` to a single vertex. Once `budget` expires the
/// remaining vertices are merged in label order without scoring, so a
/// complete sequence always comes back.
pub fn greedy_extend_within(g: &Trigraph, prefix_width: u32, budget: &Budget) -> HeuristicSolution {
    let mut g = g.clone();
    let mut seq = ContractionSequence::new();
    let mut per_step = Vec::with_capacity(g.live_count().saturating_sub(1));
    let mut running = prefix_width;
    let mut scratch = Vec::new();

    while g.live_count() > 1 {
        let pair = if budget.expired() {
            let mut live = g.live_vertices();
            let (a, b) = (live.next().unwrap(), live.next().unwrap());
            ContractionPair { survivor: a, removed: b }
        } else {
            best_greedy_pair(&g, &mut scratch)
        };
        let m = g.contract(pair).expect("greedy picks live pairs");
        running = running.max(m);
        per_step.push(running);
        seq.push(pair);
    }
    HeuristicSolution::new(seq, per_step, prefix_width)
}

// Free pairs first; then smallest resulting max red degree, then smallest
// red degree at the merged vertex, then canonical order.
fn best_greedy_pair(g: &Trigraph, scratch: &mut Vec<u32>) -> ContractionPair {
    let mut pairs = g.candidate_pairs();
    if pairs.is_empty() {
        pairs = g.all_live_pairs();
    }
    let mut best: Option<((bool, u32, u32), ContractionPair)> = None;
    for p in pairs {
        let free = g.is_free_pair(p.survivor, p.removed);
        let holding_free = matches!(best, Some(((false, ..), _)));
        if holding_free && !free {
            continue;
        }
        let eff = g.effect_with_scratch(p, scratch);
        let key = (!free, eff.max_red_degree, eff.merged_red_degree);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, p));
        }
    }
    best.expect("at least two live vertices").1
}

#[derive(Clone, Debug)]
pub struct PerturbParams {
    pub batch_size: usize,
    pub rng_seed: u64,
    /// Wall-clock allowance for the whole climb; `None` leaves only the
    /// caller's budget.
    pub time_budget: Option<Duration>,
    /// Iteration budget; with no time limit this makes a run reproducible.
    pub max_batches: Option<u64>,
    /// Stop as soon as the width drops to this value (a known lower bound).
    pub target_width: u32,
}

impl Default for PerturbParams {
    fn default() -> Self {
        PerturbParams {
            batch_size: DEFAULT_BATCH_SIZE,
            rng_seed: 0,
            time_budget: None,
            max_batches: None,
            target_width: 0,
        }
    }
}

/// One concrete mutation: positions `a`, `b` are 1-based and at most the
/// plateau start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub a: usize,
    pub b: usize,
    pub u: VertexId,
    pub v: VertexId,
}

// removed_at[v] = 1-based step removing v, usize::MAX if never removed.
fn removal_steps(base: &Trigraph, seq: &ContractionSequence) -> Vec<usize> {
    let mut removed_at = vec![usize::MAX; base.capacity() + 1];
    for (i, p) in seq.iter().enumerate() {
        removed_at[p.removed.idx()] = i + 1;
    }
    removed_at
}

pub fn draw_perturbation<R: Rng>(primary: &HeuristicSolution, base: &Trigraph, rng: &mut R) -> Option<Perturbation> {
    let p = primary.plateau_start;
    if p == 0 {
        return None;
    }
    let removed_at = removal_steps(base, &primary.seq);
    let live: Vec<VertexId> = base.live_vertices().collect();
    let pick_alive_after = |step: usize, rng: &mut R| -> VertexId {
        let alive: Vec<VertexId> = live.iter().copied().filter(|v| removed_at[v.idx()] > step).collect();
        alive[rng.gen_range(0..alive.len())]
    };
    let a = rng.gen_range(1..=p);
    let b = rng.gen_range(1..=p);
    let u = pick_alive_after(a, rng);
    let v = pick_alive_after(b, rng);
    Some(Perturbation { a, b, u, v })
}

/// Applies the mutation and re-completes: pair `a` gets survivor `u`; from
/// position `b` on, labels `y_b` and `v` trade places; the first `p` pairs
/// are replayed (invalid ones dropped) and the greedy finishes the rest.
pub fn apply_perturbation(
    primary: &HeuristicSolution,
    base: &Trigraph,
    pert: Perturbation,
    budget: &Budget,
) -> HeuristicSolution {
    let p = primary.plateau_start;
    let mut pairs: Vec<ContractionPair> = primary.seq.to_vec();
    pairs[pert.a - 1].survivor = pert.u;
    let yb = pairs[pert.b - 1].removed;
    let swap = |w: VertexId| {
        if w == yb {
            pert.v
        } else if w == pert.v {
            yb
        } else {
            w
        }
    };
    for pair in &mut pairs[pert.b - 1..] {
        pair.survivor = swap(pair.survivor);
        pair.removed = swap(pair.removed);
    }

    let floor = base.max_red_degree();
    let mut g = base.clone();
    let mut seq = ContractionSequence::new();
    let mut per_step = Vec::with_capacity(primary.seq.len());
    let mut running = floor;
    for &pair in &pairs[..p] {
        if g.live_count() <= 1 {
            break;
        }
        if let Ok(m) = g.contract(pair) {
            running = running.max(m);
            per_step.push(running);
            seq.push(pair);
        }
    }
    let tail = greedy_extend_within(&g, running, budget);
    seq.extend_from(&tail.seq);
    per_step.extend_from_slice(&tail.per_step_max);
    HeuristicSolution::new(seq, per_step, floor)
}

pub fn perturb<R: Rng>(primary: &HeuristicSolution, base: &Trigraph, rng: &mut R, budget: &Budget) -> HeuristicSolution {
    match draw_perturbation(primary, base, rng) {
        Some(pert) => apply_perturbation(primary, base, pert, budget),
        None => primary.clone(),
    }
}

/// Local search from `initial` (or the greedy seed). Each batch draws
/// `batch_size` derived solutions; a strictly narrower one is adopted at
/// once, otherwise the batch's equal-width solution with the latest plateau
/// start replaces the primary if it is no earlier than the primary's.
pub fn hill_climb(
    base: &Trigraph,
    params: &PerturbParams,
    initial: Option<HeuristicSolution>,
    budget: &Budget,
) -> HeuristicSolution {
    let mut primary = initial.unwrap_or_else(|| greedy_extend_within(base, base.max_red_degree(), budget));
    let budget = match params.time_budget {
        Some(t) => budget.slice(t),
        None => budget.clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let mut batches = 0u64;

    while primary.width > params.target_width
        && !primary.seq.is_empty()
        && params.max_batches.is_none_or(|m| batches < m)
        && !budget.expired()
    {
        batches += 1;
        let mut candidate: Option<HeuristicSolution> = None;
        let mut improved = false;
        for _ in 0..params.batch_size {
            if budget.expired() {
                break;
            }
            let derived = perturb(&primary, base, &mut rng, &budget);
            if derived.width < primary.width {
                primary = derived;
                improved = true;
                break;
            }
            if derived.width == primary.width
                && candidate.as_ref().is_none_or(|c| derived.plateau_start > c.plateau_start)
            {
                candidate = Some(derived);
            }
        }
        if !improved {
            if let Some(c) = candidate {
                if c.plateau_start >= primary.plateau_start {
                    primary = c;
                }
            }
        }
    }
    primary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pace_io::Instance;
    use crate::reference::verify_sequence;

    fn complete(n: u32) -> Instance {
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                edges.push((a, b));
            }
        }
        Instance::new(n as usize, edges)
    }

    fn path(n: u32) -> Instance {
        Instance::new(n as usize, (1..n).map(|i| (i, i + 1)).collect())
    }

    fn cycle(n: u32) -> Instance {
        let mut e: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        e.push((n, 1));
        Instance::new(n as usize, e)
    }

    #[test]
    fn plateau_cases() {
        assert_eq!(plateau_start(&[1, 2, 2, 2]), Ok(2));
        assert_eq!(plateau_start(&[3, 3, 3]), Ok(1));
        assert_eq!(plateau_start(&[0, 1, 2]), Ok(3));
        assert_eq!(plateau_start(&[]), Err(HeuristicError::EmptyProfile));
    }

    #[test]
    fn greedy_small_graphs() {
        assert_eq!(greedy_extend(&complete(4).trigraph(), 0).width, 0);
        let p4 = path(4);
        let sol = greedy_extend(&p4.trigraph(), 0);
        assert_eq!(sol.width, 1);
        let report = verify_sequence(&p4, &sol.seq).unwrap();
        assert_eq!(report.per_step_max, sol.per_step_max);
    }

    #[test]
    fn greedy_single_vertex_keeps_prefix() {
        let sol = greedy_extend(&Trigraph::new(1).unwrap(), 3);
        assert!(sol.seq.is_empty());
        assert_eq!(sol.width, 3);
        assert_eq!(sol.plateau_start, 0);
    }

    #[test]
    fn greedy_expired_budget_still_completes() {
        let inst = cycle(7);
        let sol = greedy_extend_within(&inst.trigraph(), 0, &Budget::with_timeout(Duration::ZERO));
        assert_eq!(sol.seq.len(), 6);
        assert_eq!(verify_sequence(&inst, &sol.seq).unwrap().width, sol.width);
    }

    #[test]
    fn identity_perturbation_keeps_width() {
        let inst = cycle(7);
        let base = inst.trigraph();
        let primary = greedy_extend(&base, 0);
        let a = primary.plateau_start;
        let pert = Perturbation {
            a,
            b: a,
            u: primary.seq[a - 1].survivor,
            v: primary.seq[a - 1].removed,
        };
        let derived = apply_perturbation(&primary, &base, pert, &Budget::unlimited());
        assert_eq!(derived.width, primary.width);
        assert_eq!(derived.seq, primary.seq);
    }

    #[test]
    fn perturbations_stay_valid_and_above_floor() {
        let p4 = path(4);
        let base = p4.trigraph();
        let primary = greedy_extend(&base, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let d = perturb(&primary, &base, &mut rng, &Budget::unlimited());
            let r = verify_sequence(&p4, &d.seq).unwrap();
            assert_eq!(r.width, d.width);
            assert_eq!(r.per_step_max, d.per_step_max);
            assert!(d.width >= 1);
        }
        let k4 = complete(4);
        let kb = k4.trigraph();
        let primary = greedy_extend(&kb, 0);
        for _ in 0..50 {
            assert_eq!(perturb(&primary, &kb, &mut rng, &Budget::unlimited()).width, 0);
        }
    }

    #[test]
    fn hill_climb_families() {
        let params = PerturbParams {
            max_batches: Some(20),
            ..PerturbParams::default()
        };
        assert_eq!(hill_climb(&path(4).trigraph(), &params, None, &Budget::unlimited()).width, 1);
        let c5 = cycle(5);
        let sol = hill_climb(&c5.trigraph(), &params, None, &Budget::unlimited());
        assert_eq!(sol.width, 2);
        assert_eq!(verify_sequence(&c5, &sol.seq).unwrap().width, 2);
    }

    #[test]
    fn hill_climb_zero_budget_is_greedy_seed() {
        let inst = cycle(9);
        let g = inst.trigraph();
        let params = PerturbParams {
            time_budget: Some(Duration::ZERO),
            ..PerturbParams::default()
        };
        let seed = greedy_extend(&g, 0);
        assert_eq!(hill_climb(&g, &params, None, &Budget::unlimited()), seed);
        let params = PerturbParams {
            max_batches: Some(0),
            ..PerturbParams::default()
        };
        assert_eq!(hill_climb(&g, &params, None, &Budget::unlimited()), seed);
    }

    #[test]
    fn hill_climb_is_deterministic() {
        let mut edges = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for a in 1..=14u32 {
            for b in a + 1..=14 {
                if rng.gen_bool(0.35) {
                    edges.push((a, b));
                }
            }
        }
        let g = Instance::new(14, edges).trigraph();
        let params = PerturbParams {
            max_batches: Some(10),
            rng_seed: 5,
            ..PerturbParams::default()
        };
        let a = hill_climb(&g, &params, None, &Budget::unlimited());
        let b = hill_climb(&g, &params, None, &Budget::unlimited());
        assert_eq!(a, b);
        assert!(a.width <= greedy_extend(&g, 0).width);
    }
}
