use std::ops::Deref;

use crate::trigraph::{ContractionPair, VertexId};

/// Ordered contraction pairs. A complete sequence for `n` vertices has
/// `n - 1` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ContractionSequence {
    pairs: Vec<ContractionPair>,
}

impl ContractionSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, p: ContractionPair) {
        self.pairs.push(p);
    }

    pub fn extend_from(&mut self, other: &ContractionSequence) {
        self.pairs.extend_from_slice(&other.pairs);
    }

    pub fn into_pairs(self) -> Vec<ContractionPair> {
        self.pairs
    }

    /// Relabels every vertex through `map` (indexed by label).
    pub fn relabel(&self, map: &[VertexId]) -> ContractionSequence {
        self.pairs
            .iter()
            .map(|p| ContractionPair {
                survivor: map[p.survivor.idx()],
                removed: map[p.removed.idx()],
            })
            .collect()
    }
}

impl Deref for ContractionSequence {
    type Target = [ContractionPair];

    fn deref(&self) -> &[ContractionPair] {
        &self.pairs
    }
}

impl From<Vec<ContractionPair>> for ContractionSequence {
    fn from(pairs: Vec<ContractionPair>) -> Self {
        ContractionSequence { pairs }
    }
}

impl From<&[(u32, u32)]> for ContractionSequence {
    fn from(pairs: &[(u32, u32)]) -> Self {
        pairs.iter().map(|&(x, y)| ContractionPair::new(x, y)).collect()
    }
}

impl FromIterator<ContractionPair> for ContractionSequence {
    fn from_iter<I: IntoIterator<Item = ContractionPair>>(iter: I) -> Self {
        ContractionSequence {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a ContractionSequence {
    type Item = &'a ContractionPair;
    type IntoIter = std::slice::Iter<'a, ContractionPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}
