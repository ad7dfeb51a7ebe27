use std::collections::HashMap;

use crate::budget::Budget;
use crate::heuristic::greedy_extend;
use crate::sequence::ContractionSequence;
use crate::trigraph::{ContractionPair, Trigraph};

use super::key::PartitionKey;
use super::{Bounds, ComponentResult, ExactError, Stage};

/// Switches for the three state-pruning rules. All on by default; turning
/// one off must never change an answer, only the work done.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pruning {
    /// Drop states whose width already reaches the upper bound.
    pub upper_bound: bool,
    /// Among states with the same partition keep the narrowest.
    pub dominance: bool,
    /// Close a state when a greedy completion does not widen it.
    pub closure: bool,
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning {
            upper_bound: true,
            dominance: true,
            closure: true,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DpConfig {
    pub pruning: Pruning,
    /// Approximate byte cap on the live frontier.
    pub memory_cap: Option<usize>,
}

const ROOT: u32 = u32::MAX;

struct State {
    width: u32,
    // tail of the representative sequence in the arena
    node: u32,
    quotient: Trigraph,
    // rep[v] = live vertex currently holding original vertex v
    rep: Vec<u32>,
}

impl State {
    fn bytes(&self) -> usize {
        self.quotient.approx_bytes() + self.rep.len() * 4 + 48
    }
}

// Parent-pointer chains: representative sequences share their prefixes.
struct Arena {
    nodes: Vec<(ContractionPair, u32)>,
}

impl Arena {
    fn push(&mut self, pair: ContractionPair, parent: u32) -> u32 {
        self.nodes.push((pair, parent));
        (self.nodes.len() - 1) as u32
    }

    fn sequence(&self, mut node: u32) -> ContractionSequence {
        let mut pairs = Vec::new();
        while node != ROOT {
            let (p, parent) = self.nodes[node as usize];
            pairs.push(p);
            node = parent;
        }
        pairs.reverse();
        pairs.into()
    }
}

struct Search {
    upper: u32,
    lower: u32,
    accept_width: u32,
    best: ContractionSequence,
    found: bool,
}

enum Outcome {
    Continue,
    Done(Stage, bool),
}

impl Search {
    /// Records a complete solution; tells the caller whether to stop.
    fn record(&mut self, width: u32, seq: ContractionSequence) -> Outcome {
        if width < self.upper {
            self.upper = width;
            self.best = seq;
            self.found = true;
        }
        self.stop_check()
    }

    fn stop_check(&self) -> Outcome {
        if self.upper <= self.lower {
            Outcome::Done(Stage::BoundsMatch, true)
        } else if self.upper <= self.accept_width {
            Outcome::Done(Stage::AcceptedSuboptimal, false)
        } else {
            Outcome::Continue
        }
    }
}

/// Layered search from the all-singletons state: every state of length `l`
/// is expanded before any of length `l + 1`. Transitions contract a twin
/// pair when one exists, otherwise every pair at distance at most two.
///
/// Labels in the result are those of `component`.
pub fn solve_component(
    component: &Trigraph,
    bounds: Bounds,
    accept_width: u32,
    config: &DpConfig,
    budget: &Budget,
) -> Result<ComponentResult, ExactError> {
    let finish = |width, seq, optimal, stage, layers, states| ComponentResult {
        width,
        seq,
        optimal,
        stage,
        layers,
        states,
    };
    if component.live_count() <= 1 {
        return Ok(finish(0, ContractionSequence::new(), true, Stage::Twins, 0, 0));
    }

    let (root, map) = component.compact();
    let mut search = Search {
        upper: bounds.upper,
        lower: bounds.lower,
        accept_width,
        best: bounds.upper_witness,
        found: false,
    };
    let pruning = config.pruning;
    if let Outcome::Done(stage, optimal) = search.stop_check() {
        return Ok(finish(search.upper, search.best, optimal, stage, 0, 0));
    }

    let mut arena = Arena { nodes: Vec::new() };
    let k = root.capacity();
    let mut frontier = vec![State {
        width: 0,
        node: ROOT,
        quotient: root,
        rep: (0..=k as u32).collect(),
    }];
    let mut states = 1usize;
    let mut layer = 0usize;

    let done = |search: Search, map: &[_], stage, optimal, layers, states| -> ComponentResult {
        // Only sequences found by the search are in compact labels.
        let seq = if search.found { search.best.relabel(map) } else { search.best };
        finish(search.upper, seq, optimal, stage, layers, states)
    };

    while !frontier.is_empty() {
        let mut next: Vec<Option<State>> = Vec::new();
        let mut index: HashMap<PartitionKey, usize> = HashMap::new();
        let mut next_bytes = 0usize;
        let mut next_live = 0usize;

        for state in frontier.drain(..) {
            if budget.expired() {
                return Err(ExactError::Timeout { layer });
            }
            if pruning.upper_bound && state.width >= search.upper {
                continue;
            }
            let q = &state.quotient;
            let moves = match q.first_twin_pair() {
                Some(t) => vec![t],
                None => {
                    let c = q.candidate_pairs();
                    if c.is_empty() {
                        q.all_live_pairs()
                    } else {
                        c
                    }
                }
            };

            for mv in moves {
                let (child, step) = q.contracted(mv).expect("moves are live pairs");
                let width = state.width.max(step);
                if pruning.upper_bound && width >= search.upper {
                    continue;
                }
                let node = arena.push(mv, state.node);

                if child.live_count() == 1 {
                    if let Outcome::Done(stage, optimal) = search.record(width, arena.sequence(node)) {
                        return Ok(done(search, &map, stage, optimal, layer, states));
                    }
                    continue;
                }

                let mut rep = state.rep.clone();
                for r in rep.iter_mut() {
                    if *r == mv.removed.get() {
                        *r = mv.survivor.get();
                    }
                }
                let key = PartitionKey::from_representatives(&rep);
                let slot = if pruning.dominance {
                    match index.get(&key) {
                        Some(&i) => match &next[i] {
                            Some(incumbent) if incumbent.width <= width => continue,
                            _ => Some(i),
                        },
                        None => None,
                    }
                } else {
                    None
                };

                if pruning.closure && width >= search.lower {
                    let completion = greedy_extend(&child, width);
                    if completion.width <= width {
                        let mut seq = arena.sequence(node);
                        seq.extend_from(&completion.seq);
                        if let Some(i) = slot {
                            if let Some(old) = next[i].take() {
                                next_bytes -= old.bytes();
                                next_live -= 1;
                            }
                        }
                        if let Outcome::Done(stage, optimal) = search.record(width, seq) {
                            return Ok(done(search, &map, stage, optimal, layer, states));
                        }
                        continue;
                    }
                }

                let child_state = State {
                    width,
                    node,
                    quotient: child,
                    rep,
                };
                next_bytes += child_state.bytes();
                states += 1;
                match slot {
                    Some(i) => {
                        if let Some(old) = next[i].replace(child_state) {
                            next_bytes -= old.bytes();
                        } else {
                            next_live += 1;
                        }
                    }
                    None => {
                        next_live += 1;
                        if pruning.dominance {
                            index.insert(key, next.len());
                        }
                        next.push(Some(child_state));
                    }
                }
                if let Some(cap) = config.memory_cap {
                    if next_bytes + arena.nodes.len() * 8 > cap {
                        return Err(ExactError::MemoryExhausted {
                            layer: layer + 1,
                            states: next_live,
                        });
                    }
                }
            }
        }
        frontier = next.into_iter().flatten().collect();
        layer += 1;
    }

    let stage = if search.found { Stage::Search } else { Stage::BoundsMatch };
    Ok(done(search, &map, stage, true, layer, states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristic::greedy_extend;
    use crate::pace_io::Instance;
    use crate::reference::verify_sequence;

    fn bounds_for(inst: &Instance, lower: u32) -> Bounds {
        let g = greedy_extend(&inst.trigraph(), 0);
        Bounds {
            lower,
            upper: g.width,
            upper_witness: g.seq,
        }
    }

    fn cycle(n: u32) -> Instance {
        let mut e: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        e.push((n, 1));
        Instance::new(n as usize, e)
    }

    #[test]
    fn p4_search() {
        let p4 = Instance::new(4, vec![(1, 2), (2, 3), (3, 4)]);
        let r = solve_component(&p4.trigraph(), bounds_for(&p4, 0), 0, &DpConfig::default(), &Budget::unlimited())
            .unwrap();
        assert_eq!(r.width, 1);
        assert!(r.optimal);
        assert_eq!(verify_sequence(&p4, &r.seq).unwrap().width, 1);
    }

    #[test]
    fn c5_bounds_match_returns_immediately() {
        let c5 = cycle(5);
        let b = bounds_for(&c5, 2);
        assert_eq!(b.upper, 2);
        let r = solve_component(&c5.trigraph(), b.clone(), 0, &DpConfig::default(), &Budget::unlimited()).unwrap();
        assert_eq!((r.width, r.stage, r.layers), (2, Stage::BoundsMatch, 0));
        assert_eq!(r.seq, b.upper_witness);
    }

    #[test]
    fn k5_no_layers() {
        let mut e = Vec::new();
        for a in 1..=5 {
            for b in a + 1..=5 {
                e.push((a, b));
            }
        }
        let k5 = Instance::new(5, e);
        let r = solve_component(&k5.trigraph(), bounds_for(&k5, 0), 0, &DpConfig::default(), &Budget::unlimited())
            .unwrap();
        assert_eq!((r.width, r.layers), (0, 0));
    }

    #[test]
    fn search_improves_a_loose_witness() {
        // C6 with a deliberately bad witness: star-like merges onto vertex 1.
        let c6 = cycle(6);
        let bad = ContractionSequence::from(&[(1, 4), (1, 2), (1, 3), (1, 5), (1, 6)][..]);
        let w = verify_sequence(&c6, &bad).unwrap().width;
        assert!(w > 2);
        let b = Bounds {
            lower: 1,
            upper: w,
            upper_witness: bad,
        };
        for pruning in [
            Pruning::default(),
            Pruning {
                closure: false,
                ..Pruning::default()
            },
        ] {
            let cfg = DpConfig {
                pruning,
                memory_cap: None,
            };
            let r = solve_component(&c6.trigraph(), b.clone(), 0, &cfg, &Budget::unlimited()).unwrap();
            assert_eq!(r.width, 2);
            assert_eq!(r.stage, Stage::Search);
            assert_eq!(verify_sequence(&c6, &r.seq).unwrap().width, 2);
        }
    }

    #[test]
    fn accept_width_short_circuits() {
        let c6 = cycle(6);
        let b = bounds_for(&c6, 1);
        let r = solve_component(&c6.trigraph(), b.clone(), b.upper, &DpConfig::default(), &Budget::unlimited())
            .unwrap();
        assert_eq!(r.stage, Stage::AcceptedSuboptimal);
        assert!(!r.optimal);
        assert_eq!(r.width, b.upper);
    }

    #[test]
    fn memory_cap_fails_structured() {
        let c7 = cycle(7);
        let bad = ContractionSequence::from(&[(1, 4), (1, 2), (1, 3), (1, 5), (1, 6), (1, 7)][..]);
        let w = verify_sequence(&c7, &bad).unwrap().width;
        let cfg = DpConfig {
            pruning: Pruning {
                closure: false,
                ..Pruning::default()
            },
            memory_cap: Some(1),
        };
        let b = Bounds {
            lower: 0,
            upper: w,
            upper_witness: bad,
        };
        let err = solve_component(&c7.trigraph(), b, 0, &cfg, &Budget::unlimited()).unwrap_err();
        assert!(matches!(err, ExactError::MemoryExhausted { layer: 1, .. }));
    }

    #[test]
    fn expired_budget_times_out() {
        let c6 = cycle(6);
        let b = bounds_for(&c6, 0);
        let err = solve_component(
            &c6.trigraph(),
            b,
            0,
            &DpConfig::default(),
            &Budget::with_timeout(std::time::Duration::ZERO),
        )
        .unwrap_err();
        assert_eq!(err, ExactError::Timeout { layer: 0 });
    }

    #[test]
    fn original_labels_are_kept() {
        // P4 on labels 3..6 inside a capacity-8 trigraph
        let g = Trigraph::from_graph(8, &[(3, 4), (4, 5), (5, 6)]).unwrap();
        let keep: Vec<_> = (3..=6).map(crate::trigraph::VertexId).collect();
        let comp = g.induced_subtrigraph(&keep).unwrap();
        let bad = ContractionSequence::from(&[(3, 6), (3, 4), (3, 5)][..]);
        assert_eq!(crate::reference::replay(&comp, &bad, 0).unwrap().width, 2);
        let b = Bounds {
            lower: 0,
            upper: 2,
            upper_witness: bad,
        };
        let r = solve_component(&comp, b, 0, &DpConfig::default(), &Budget::unlimited()).unwrap();
        assert_eq!(r.width, 1);
        let w = crate::reference::replay(&comp, &r.seq, 0).unwrap();
        assert_eq!(w.width, 1);
    }
}
