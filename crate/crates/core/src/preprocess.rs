//! Free-twin elimination, connected components, and stitching component
//! sequences back into one sequence for the whole instance.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::sequence::ContractionSequence;
use crate::trigraph::{ContractionPair, EdgeColor, Trigraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sorted labels.
    pub vertices: Vec<VertexId>,
    /// Induced on `vertices`, original labels.
    pub trigraph: Trigraph,
}

#[derive(Clone, Debug)]
pub struct ComponentPlan {
    /// Largest first.
    pub components: Vec<Component>,
    /// Twin contractions already applied before the split.
    pub prelude: ContractionSequence,
}

/// Contracts free pairs until none remain.
///
/// Works in rounds: vertices are bucketed by black neighborhood (open and
/// closed), and each bucket is folded onto its smallest member, re-checking
/// freeness right before every contraction.
pub fn eliminate_twins(g: &Trigraph) -> (Trigraph, ContractionSequence) {
    let mut g = g.clone();
    let mut prefix = ContractionSequence::new();
    loop {
        let mut progressed = false;
        for bucket in twin_buckets(&g) {
            let head = bucket[0];
            for &other in &bucket[1..] {
                if g.is_live(head) && g.is_live(other) && g.is_free_pair(head, other) {
                    let p = ContractionPair { survivor: head, removed: other };
                    g.contract(p).expect("both endpoints live");
                    prefix.push(p);
                    progressed = true;
                }
            }
        }
        if !progressed {
            return (g, prefix);
        }
    }
}

fn twin_buckets(g: &Trigraph) -> Vec<Vec<VertexId>> {
    let mut buckets: HashMap<(bool, Vec<VertexId>), Vec<VertexId>> = HashMap::new();
    for v in g.live_vertices() {
        let open: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .filter(|e| e.1 == EdgeColor::Black)
            .map(|e| e.0)
            .collect();
        let mut closed = open.clone();
        let at = closed.binary_search(&v).unwrap_err();
        closed.insert(at, v);
        buckets.entry((false, open)).or_default().push(v);
        buckets.entry((true, closed)).or_default().push(v);
    }
    let mut out: Vec<Vec<VertexId>> = buckets.into_values().filter(|b| b.len() > 1).collect();
    out.sort_unstable();
    out
}

/// Connected components over black and red edges, by descending size, ties
/// by smallest label.
pub fn split_components(g: &Trigraph) -> Vec<Component> {
    let mut seen = vec![false; g.capacity() + 1];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for s in g.live_vertices() {
        if seen[s.idx()] {
            continue;
        }
        seen[s.idx()] = true;
        let mut stack = vec![s];
        let mut verts = Vec::new();
        while let Some(u) = stack.pop() {
            verts.push(u);
            for &(w, _) in g.neighbors(u) {
                if !seen[w.idx()] {
                    seen[w.idx()] = true;
                    stack.push(w);
                }
            }
        }
        verts.sort_unstable();
        comps.push(verts);
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    comps
        .into_iter()
        .map(|vertices| Component {
            trigraph: g.induced_subtrigraph(&vertices).expect("component vertices are live"),
            vertices,
        })
        .collect()
}

/// Twin elimination followed by the component split.
pub fn plan(g: &Trigraph) -> ComponentPlan {
    let (reduced, prelude) = eliminate_twins(g);
    ComponentPlan {
        components: split_components(&reduced),
        prelude,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error("{sequences} component sequences but {survivors} survivors")]
    CountMismatch { sequences: usize, survivors: usize },
    #[error("survivor {0} is removed by its own component sequence")]
    RemovedSurvivor(VertexId),
    #[error("survivor {0} does not take part in its component sequence")]
    ForeignSurvivor(VertexId),
    #[error("survivor {0} listed twice")]
    DuplicateSurvivor(VertexId),
}

/// Prelude, then every component sequence, then the component survivors
/// folded onto the smallest one. The tail joins vertices without edges, so it
/// adds no red degree.
pub fn assemble_solution(
    prelude: &ContractionSequence,
    per_component: &[ContractionSequence],
    survivors: &[VertexId],
) -> Result<ContractionSequence, AssembleError> {
    if per_component.len() != survivors.len() {
        return Err(AssembleError::CountMismatch {
            sequences: per_component.len(),
            survivors: survivors.len(),
        });
    }
    let mut distinct = HashSet::new();
    for (seq, &s) in per_component.iter().zip(survivors) {
        if !distinct.insert(s) {
            return Err(AssembleError::DuplicateSurvivor(s));
        }
        if seq.iter().any(|p| p.removed == s) {
            return Err(AssembleError::RemovedSurvivor(s));
        }
        if !seq.is_empty() && !seq.iter().any(|p| p.survivor == s) {
            return Err(AssembleError::ForeignSurvivor(s));
        }
    }

    let mut out = prelude.clone();
    for seq in per_component {
        out.extend_from(seq);
    }
    if let Some(&root) = survivors.iter().min() {
        for &s in survivors {
            if s != root {
                out.push(ContractionPair { survivor: root, removed: s });
            }
        }
    }
    Ok(out)
}

/// Projects a sequence on a larger vertex set onto `keep`: whenever two
/// groups that both meet `keep` merge, their kept representatives are
/// contracted. A complete input yields a complete sequence on `keep`.
pub fn restrict_sequence(seq: &ContractionSequence, keep: &[VertexId], capacity: usize) -> ContractionSequence {
    let mut rep: Vec<Option<VertexId>> = vec![None; capacity + 1];
    for &v in keep {
        rep[v.idx()] = Some(v);
    }
    let mut out = ContractionSequence::new();
    for p in seq {
        let (x, y) = (p.survivor.idx(), p.removed.idx());
        match (rep[x], rep[y]) {
            (Some(a), Some(b)) => out.push(ContractionPair { survivor: a, removed: b }),
            (None, Some(b)) => rep[x] = Some(b),
            _ => {}
        }
        rep[y] = None;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pace_io::Instance;
    use crate::reference::verify_sequence;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn cographs_collapse() {
        let c4 = Trigraph::from_graph(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let (r, seq) = eliminate_twins(&c4);
        assert_eq!(r.live_count(), 1);
        assert_eq!(seq.len(), 3);

        let mut k5 = Vec::new();
        for a in 1..=5 {
            for b in a + 1..=5 {
                k5.push((a, b));
            }
        }
        let (r, _) = eliminate_twins(&Trigraph::from_graph(5, &k5).unwrap());
        assert_eq!(r.live_count(), 1);

        let k23 = [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)];
        let inst = Instance::new(5, k23.to_vec());
        let (r, seq) = eliminate_twins(&inst.trigraph());
        assert_eq!(r.live_count(), 1);
        assert_eq!(verify_sequence(&inst, &seq).unwrap().width, 0);
    }

    #[test]
    fn p4_has_no_twins() {
        let p4 = Trigraph::from_graph(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let (r, seq) = eliminate_twins(&p4);
        assert_eq!(r, p4);
        assert!(seq.is_empty());
    }

    #[test]
    fn star_leaves_merge() {
        let star = Trigraph::from_graph(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let (r, seq) = eliminate_twins(&star);
        assert_eq!(r.live_count(), 1);
        assert!(!r.has_red_edges());
        assert_eq!(seq.len(), 4);
    }

    #[test]
    fn components_sorted_by_size() {
        // P4 on 3..6 and K2 on 1..2
        let g = Trigraph::from_graph(6, &[(1, 2), (3, 4), (4, 5), (5, 6)]).unwrap();
        let comps = split_components(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices, vec![v(3), v(4), v(5), v(6)]);
        assert_eq!(comps[1].vertices, vec![v(1), v(2)]);
        assert_eq!(comps[0].trigraph.edge_count(), 3);

        let iso = Trigraph::new(3).unwrap();
        let comps = split_components(&iso);
        assert_eq!(comps.iter().map(|c| c.vertices[0]).collect::<Vec<_>>(), vec![v(1), v(2), v(3)]);

        let c5 = Trigraph::from_graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        assert_eq!(split_components(&c5).len(), 1);
    }

    #[test]
    fn components_follow_red_edges() {
        let g = Trigraph::from_edges(3, &[(1, 2)], &[(2, 3)]).unwrap();
        assert_eq!(split_components(&g).len(), 1);
    }

    #[test]
    fn assemble_p4_and_k2() {
        let p4 = ContractionSequence::from(&[(1, 2), (1, 3), (1, 4)][..]);
        let k2 = ContractionSequence::from(&[(5, 6)][..]);
        let seq = assemble_solution(&ContractionSequence::new(), &[p4.clone(), k2], &[v(1), v(5)]).unwrap();
        assert_eq!(seq, ContractionSequence::from(&[(1, 2), (1, 3), (1, 4), (5, 6), (1, 5)][..]));
        let inst = Instance::new(6, vec![(1, 2), (2, 3), (3, 4), (5, 6)]);
        assert_eq!(verify_sequence(&inst, &seq).unwrap().width, 1);

        let one = assemble_solution(&ContractionSequence::new(), &[p4.clone()], &[v(1)]).unwrap();
        assert_eq!(one, p4);
    }

    #[test]
    fn assemble_singletons() {
        let empty = ContractionSequence::new();
        let seq = assemble_solution(&empty, &[empty.clone(), empty.clone(), empty.clone()], &[v(1), v(2), v(3)]).unwrap();
        assert_eq!(seq, ContractionSequence::from(&[(1, 2), (1, 3)][..]));
    }

    #[test]
    fn restriction_reduces_kept_set() {
        let seq = ContractionSequence::from(&[(1, 2), (3, 4), (1, 3), (5, 1)][..]);
        let r = restrict_sequence(&seq, &[v(2), v(4), v(5)], 5);
        assert_eq!(r, ContractionSequence::from(&[(2, 4), (5, 2)][..]));
        let r = restrict_sequence(&seq, &[v(3)], 5);
        assert!(r.is_empty());
    }

    #[test]
    fn assemble_rejects_inconsistent_survivors() {
        let p = ContractionSequence::from(&[(1, 2)][..]);
        let empty = ContractionSequence::new();
        assert_eq!(
            assemble_solution(&empty, &[p.clone()], &[v(2)]),
            Err(AssembleError::RemovedSurvivor(v(2)))
        );
        assert_eq!(
            assemble_solution(&empty, &[p.clone()], &[v(3)]),
            Err(AssembleError::ForeignSurvivor(v(3)))
        );
        assert!(matches!(
            assemble_solution(&empty, &[p], &[]),
            Err(AssembleError::CountMismatch { .. })
        ));
    }
}
