//! Ground truth for everything else in the crate: a sequence verifier that
//! replays contractions from scratch, and an exhaustive twin-width oracle for
//! small graphs.

use std::collections::HashMap;

use thiserror::Error;

use crate::pace_io::Instance;
use crate::sequence::ContractionSequence;
use crate::trigraph::{ContractionPair, Trigraph, TrigraphError, VertexId};

pub const DEFAULT_ORACLE_CAP: usize = 8;

/// Width of a sequence together with the running maxima `d_1..d_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthReport {
    pub width: u32,
    pub per_step_max: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("sequence has {found} pairs, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("step {step}: label {label} out of range")]
    OutOfRange { step: usize, label: u32 },
    #[error("step {step}: invalid pair {pair}: {source}")]
    InvalidPair {
        step: usize,
        pair: ContractionPair,
        source: TrigraphError,
    },
}

impl VerifyError {
    /// 1-based step the error refers to, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            VerifyError::WrongLength { .. } => None,
            VerifyError::OutOfRange { step, .. } | VerifyError::InvalidPair { step, .. } => Some(*step),
        }
    }
}

pub fn verify_sequence(inst: &Instance, seq: &ContractionSequence) -> Result<WidthReport, VerifyError> {
    let expected = inst.n - 1;
    if seq.len() != expected {
        return Err(VerifyError::WrongLength {
            expected,
            found: seq.len(),
        });
    }
    replay(&inst.trigraph(), seq, 0)
}

/// Replays `seq` on `start` (any trigraph) without requiring it to be
/// complete. Running maxima start at `floor`.
pub fn replay(start: &Trigraph, seq: &ContractionSequence, floor: u32) -> Result<WidthReport, VerifyError> {
    let mut g = start.clone();
    let mut running = floor;
    let mut per_step_max = Vec::with_capacity(seq.len());
    for (i, &pair) in seq.iter().enumerate() {
        let step = i + 1;
        for label in [pair.survivor.get(), pair.removed.get()] {
            if label == 0 || label as usize > g.capacity() {
                return Err(VerifyError::OutOfRange { step, label });
            }
        }
        let m = g
            .contract(pair)
            .map_err(|source| VerifyError::InvalidPair { step, pair, source })?;
        running = running.max(m);
        per_step_max.push(running);
    }
    Ok(WidthReport {
        width: running,
        per_step_max,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, oracle cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("oracle input must be black-only")]
    RedInput,
}

/// Exhaustive minimum over contraction sequences, memoized on the vertex
/// partition.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub cap: usize,
    /// Only consider pairs at distance at most two (falling back to every
    /// pair when none exist).
    pub restrict_to_candidates: bool,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_ORACLE_CAP,
            restrict_to_candidates: false,
        }
    }
}

// Group minima per original vertex; identical for any two sequences that
// merged the same groups.
type GroupKey = Vec<u32>;

struct Memo {
    // best completion width from this partition, plus the move as a pair of
    // group minima.
    table: HashMap<GroupKey, (u32, Option<(u32, u32)>)>,
    restrict: bool,
}

fn group_key(rep: &[u32]) -> GroupKey {
    let mut min_of: HashMap<u32, u32> = HashMap::new();
    for (v, &r) in rep.iter().enumerate().skip(1) {
        min_of.entry(r).or_insert(v as u32);
    }
    rep.iter().map(|r| min_of.get(r).copied().unwrap_or(0)).collect()
}

fn merge_rep(rep: &mut [u32], p: ContractionPair) {
    for r in rep.iter_mut() {
        if *r == p.removed.get() {
            *r = p.survivor.get();
        }
    }
}

impl Memo {
    fn best(&mut self, g: &Trigraph, rep: &mut Vec<u32>) -> u32 {
        if g.live_count() <= 1 {
            return 0;
        }
        let key = group_key(rep);
        if let Some(&(w, _)) = self.table.get(&key) {
            return w;
        }
        let mut pairs = if self.restrict { g.candidate_pairs() } else { Vec::new() };
        if pairs.is_empty() {
            pairs = g.all_live_pairs();
        }
        let mut best = (u32::MAX, None);
        for p in pairs {
            let (child, step) = g.contracted(p).expect("live pair");
            let saved = rep.clone();
            merge_rep(rep, p);
            let w = step.max(self.best(&child, rep));
            *rep = saved;
            if w < best.0 {
                best = (w, Some((key[p.survivor.idx()], key[p.removed.idx()])));
            }
        }
        self.table.insert(key, best);
        best.0
    }
}

impl Oracle {
    pub fn twinwidth(&self, inst: &Instance) -> Result<(u32, ContractionSequence), OracleError> {
        if inst.n > self.cap {
            return Err(OracleError::TooLarge { n: inst.n, cap: self.cap });
        }
        self.solve(&inst.trigraph())
    }

    /// Same search on an arbitrary black-only trigraph (dead slots allowed).
    pub fn solve(&self, g: &Trigraph) -> Result<(u32, ContractionSequence), OracleError> {
        if g.live_count() > self.cap {
            return Err(OracleError::TooLarge {
                n: g.live_count(),
                cap: self.cap,
            });
        }
        if g.has_red_edges() {
            return Err(OracleError::RedInput);
        }
        let mut rep: Vec<u32> = (0..=g.capacity() as u32).collect();
        for v in 1..=g.capacity() {
            if !g.is_live(VertexId(v as u32)) {
                rep[v] = 0;
            }
        }
        let mut memo = Memo {
            table: HashMap::new(),
            restrict: self.restrict_to_candidates,
        };
        let width = memo.best(g, &mut rep);

        let mut seq = ContractionSequence::new();
        let mut cur = g.clone();
        while cur.live_count() > 1 {
            let key = group_key(&rep);
            let (_, mv) = memo.table[&key];
            let (a, b) = mv.expect("non-terminal state has a move");
            let p = ContractionPair {
                survivor: VertexId(rep[a as usize]),
                removed: VertexId(rep[b as usize]),
            };
            cur.contract(p).expect("oracle move is live");
            merge_rep(&mut rep, p);
            seq.push(p);
        }
        Ok((width, seq))
    }
}

pub fn oracle_twinwidth(inst: &Instance) -> Result<(u32, ContractionSequence), OracleError> {
    Oracle::default().twinwidth(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> Instance {
        Instance::new(4, vec![(1, 2), (2, 3), (3, 4)])
    }

    #[test]
    fn verify_p4() {
        let r = verify_sequence(&p4(), &ContractionSequence::from(&[(1, 2), (1, 3), (1, 4)][..])).unwrap();
        assert_eq!(r.width, 1);
        assert_eq!(r.per_step_max, vec![1, 1, 1]);
    }

    #[test]
    fn verify_k2() {
        let k2 = Instance::new(2, vec![(1, 2)]);
        let r = verify_sequence(&k2, &ContractionSequence::from(&[(1, 2)][..])).unwrap();
        assert_eq!(r.width, 0);
    }

    #[test]
    fn verify_single_vertex() {
        let r = verify_sequence(&Instance::new(1, vec![]), &ContractionSequence::new()).unwrap();
        assert_eq!(r, WidthReport { width: 0, per_step_max: vec![] });
    }

    #[test]
    fn verify_errors() {
        let err = verify_sequence(&p4(), &ContractionSequence::from(&[(1, 3), (1, 3), (1, 4)][..])).unwrap_err();
        assert_eq!(err.step(), Some(2));
        assert!(matches!(err, VerifyError::InvalidPair { source: TrigraphError::NotLive(VertexId(3)), .. }));
        let err = verify_sequence(&p4(), &ContractionSequence::from(&[(1, 2), (3, 3), (1, 4)][..])).unwrap_err();
        assert_eq!(err.step(), Some(2));
        let err = verify_sequence(&p4(), &ContractionSequence::from(&[(1, 2), (1, 7), (1, 4)][..])).unwrap_err();
        assert_eq!(err, VerifyError::OutOfRange { step: 2, label: 7 });
        let err = verify_sequence(&p4(), &ContractionSequence::from(&[(1, 2)][..])).unwrap_err();
        assert_eq!(err, VerifyError::WrongLength { expected: 3, found: 1 });
    }

    #[test]
    fn oracle_small_families() {
        let p3 = Instance::new(3, vec![(1, 2), (2, 3)]);
        assert_eq!(oracle_twinwidth(&p3).unwrap().0, 0);
        assert_eq!(oracle_twinwidth(&p4()).unwrap().0, 1);
        let c5 = Instance::new(5, vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
        let (w, seq) = oracle_twinwidth(&c5).unwrap();
        assert_eq!(w, 2);
        assert_eq!(verify_sequence(&c5, &seq).unwrap().width, 2);
    }

    #[test]
    fn oracle_cap() {
        let big = Instance::new(9, vec![]);
        assert_eq!(oracle_twinwidth(&big).unwrap_err(), OracleError::TooLarge { n: 9, cap: 8 });
        let ok = Oracle { cap: 9, ..Oracle::default() }.twinwidth(&big).unwrap();
        assert_eq!(ok.0, 0);
        assert_eq!(ok.1.len(), 8);
    }

    #[test]
    fn oracle_single_vertex() {
        let (w, seq) = oracle_twinwidth(&Instance::new(1, vec![])).unwrap();
        assert_eq!(w, 0);
        assert!(seq.is_empty());
    }
}
