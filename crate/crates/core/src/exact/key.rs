use std::fmt;

use crate::trigraph::VertexId;

/// Canonical encoding of a vertex partition: groups ordered by their
/// smallest member, members ascending, each group terminated by `0` (labels
/// are 1-based, so the delimiter is unambiguous).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionKey(Box<[u32]>);

impl PartitionKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    /// From `rep[v]` = label of the live vertex that absorbed `v`, for
    /// `v` in `1..rep.len()`.
    pub(crate) fn from_representatives(rep: &[u32]) -> Self {
        let n = rep.len();
        // slot[r] = 1 + index of r's group in first-appearance order
        let mut slot = vec![0u32; n];
        let mut groups: Vec<Vec<u32>> = Vec::new();
        for (v, &r) in rep.iter().enumerate().skip(1) {
            let s = &mut slot[r as usize];
            if *s == 0 {
                groups.push(Vec::new());
                *s = groups.len() as u32;
            }
            groups[*s as usize - 1].push(v as u32);
        }
        let mut out = Vec::with_capacity(n - 1 + groups.len());
        for g in groups {
            out.extend_from_slice(&g);
            out.push(0);
        }
        PartitionKey(out.into_boxed_slice())
    }
}

impl fmt::Debug for PartitionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<&[u32]> = self.0.split(|&w| w == 0).filter(|g| !g.is_empty()).collect();
        write!(f, "PartitionKey{groups:?}")
    }
}

pub fn canonical_key(partition: &[Vec<VertexId>]) -> PartitionKey {
    let mut groups: Vec<Vec<u32>> = partition
        .iter()
        .map(|g| {
            let mut g: Vec<u32> = g.iter().map(|v| v.get()).collect();
            g.sort_unstable();
            g
        })
        .collect();
    groups.sort_unstable_by_key(|g| g[0]);
    let mut out = Vec::new();
    for g in groups {
        out.extend_from_slice(&g);
        out.push(0);
    }
    PartitionKey(out.into_boxed_slice())
}
