//! Cross-checks against the brute-force oracle on small graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tww::exact::{lower_bound, LowerBoundConfig, Pruning};
use tww::generators::{connected_graphs, gnp};
use tww::heuristic::{greedy_extend, hill_climb, PerturbParams};
use tww::pace_io::Instance;
use tww::preprocess::eliminate_twins;
use tww::reference::{verify_sequence, Oracle};
use tww::{solve_exact, Budget, ExactConfig, VertexId};

fn oracle_width(inst: &Instance) -> u32 {
    Oracle::default().twinwidth(inst).unwrap().0
}

fn small_connected() -> Vec<Instance> {
    (1..=5).flat_map(connected_graphs).collect()
}

fn random_graphs(count: usize, n_max: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=n_max);
            let p = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
            gnp(n, p, &mut rng)
        })
        .collect()
}

#[test]
fn oracle_witness_verifies() {
    for inst in small_connected().iter().chain(&random_graphs(40, 7, 1)) {
        let (w, seq) = Oracle::default().twinwidth(inst).unwrap();
        assert_eq!(verify_sequence(inst, &seq).unwrap().width, w, "{inst:?}");
    }
}

#[test]
fn induced_subgraphs_never_wider() {
    for inst in random_graphs(30, 7, 2) {
        let w = oracle_width(&inst);
        let g = inst.trigraph();
        for drop in 1..=inst.n as u32 {
            if inst.n == 1 {
                break;
            }
            let keep: Vec<VertexId> = (1..=inst.n as u32).filter(|&v| v != drop).map(VertexId).collect();
            let sub = g.induced_subtrigraph(&keep).unwrap();
            let (sw, _) = Oracle::default().solve(&sub).unwrap();
            assert!(sw <= w, "dropping {drop} from {inst:?}");
        }
    }
}

#[test]
fn restricted_transitions_agree_on_connected_graphs() {
    let restricted = Oracle {
        restrict_to_candidates: true,
        ..Oracle::default()
    };
    for inst in small_connected() {
        assert_eq!(restricted.twinwidth(&inst).unwrap().0, oracle_width(&inst), "{inst:?}");
    }
}

#[test]
fn twin_elimination_preserves_width() {
    for inst in small_connected().iter().chain(&random_graphs(40, 7, 3)) {
        let (reduced, prefix) = eliminate_twins(&inst.trigraph());
        assert!(!reduced.has_red_edges());
        let (rest, _) = Oracle::default().solve(&reduced).unwrap();
        assert_eq!(rest, oracle_width(inst), "{inst:?}");
        assert_eq!(prefix.len(), inst.n - reduced.live_count());
    }
}

#[test]
fn heuristics_are_sound_upper_bounds() {
    for (i, inst) in random_graphs(60, 8, 4).iter().enumerate() {
        let w = oracle_width(inst);
        let g = inst.trigraph();
        let greedy = greedy_extend(&g, 0);
        let params = PerturbParams {
            rng_seed: i as u64,
            max_batches: Some(8),
            ..PerturbParams::default()
        };
        let climbed = hill_climb(&g, &params, Some(greedy.clone()), &Budget::unlimited());
        for s in [&greedy, &climbed] {
            assert_eq!(verify_sequence(inst, &s.seq).unwrap().width, s.width);
        }
        assert!(w <= climbed.width && climbed.width <= greedy.width, "{inst:?}");
    }
}

#[test]
fn more_batches_never_hurt() {
    for (i, inst) in random_graphs(20, 9, 5).iter().enumerate() {
        let g = inst.trigraph();
        let mut last = u32::MAX;
        for batches in 0..6 {
            let params = PerturbParams {
                rng_seed: i as u64,
                max_batches: Some(batches),
                ..PerturbParams::default()
            };
            let w = hill_climb(&g, &params, None, &Budget::unlimited()).width;
            assert!(w <= last, "{inst:?} at {batches} batches");
            last = w;
        }
    }
}

#[test]
fn lower_bound_is_sound() {
    let cfg = LowerBoundConfig {
        size_cap: 5,
        samples: 6,
        ..LowerBoundConfig::default()
    };
    for inst in random_graphs(30, 8, 6) {
        let lb = lower_bound(&inst.trigraph(), &cfg, &Budget::unlimited());
        assert!(lb <= oracle_width(&inst), "{inst:?}");
    }
}

#[test]
fn exact_matches_oracle_with_each_pruning_rule_off() {
    let variants = [
        Pruning::default(),
        Pruning { upper_bound: false, ..Pruning::default() },
        Pruning { dominance: false, ..Pruning::default() },
        Pruning { closure: false, ..Pruning::default() },
    ];
    let cases: Vec<Instance> = small_connected().into_iter().chain(random_graphs(30, 7, 7)).collect();
    for pruning in variants {
        let mut cfg = ExactConfig::default();
        cfg.dp.pruning = pruning;
        for inst in &cases {
            let r = solve_exact(inst, &cfg, &Budget::unlimited()).unwrap();
            assert_eq!(r.width, oracle_width(inst), "{pruning:?} on {inst:?}");
            assert_eq!(verify_sequence(inst, &r.seq).unwrap().width, r.width);
        }
    }
}
