//! Trigraphs and the contraction calculus.
//!
//! A trigraph carries two disjoint edge sets, black and red. Contracting
//! `x` and `y` keeps `x`'s label; a neighbor stays black only when it was a
//! black neighbor of both endpoints, every other neighbor of either endpoint
//! becomes red.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// 1-based vertex label. Labels survive contractions unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColor {
    Black,
    Red,
}

/// One step of a contraction sequence: `removed` is merged into `survivor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContractionPair {
    pub survivor: VertexId,
    pub removed: VertexId,
}

impl ContractionPair {
    pub fn new(survivor: u32, removed: u32) -> Self {
        ContractionPair {
            survivor: VertexId(survivor),
            removed: VertexId(removed),
        }
    }

    /// Smaller label survives.
    pub fn canonical(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            ContractionPair { survivor: a, removed: b }
        } else {
            ContractionPair { survivor: b, removed: a }
        }
    }
}

impl fmt::Display for ContractionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.survivor, self.removed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrigraphError {
    #[error("a trigraph needs at least one vertex")]
    Empty,
    #[error("vertex {0} is out of range")]
    OutOfRange(u32),
    #[error("vertex {0} is not live")]
    NotLive(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("cannot contract vertex {0} with itself")]
    SameVertex(VertexId),
    #[error("quotient base must not contain red edges")]
    RedBase,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// Net effect of a contraction, computed without mutating the trigraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractionEffect {
    /// Maximum red degree of the trigraph after the contraction.
    pub max_red_degree: u32,
    /// Red degree of the merged vertex.
    pub merged_red_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trigraph {
    // Indexed by label; slot 0 is unused. Neighbor lists are sorted by label.
    adj: Vec<Vec<(VertexId, EdgeColor)>>,
    live: Vec<bool>,
    live_count: usize,
    red_degree: Vec<u32>,
    // red_histogram[d] = number of live vertices with red degree d.
    red_histogram: Vec<u32>,
    max_red: u32,
}

impl Trigraph {
    /// `n` isolated vertices labeled `1..=n`.
    pub fn new(n: usize) -> Result<Self, TrigraphError> {
        if n == 0 {
            return Err(TrigraphError::Empty);
        }
        let mut live = vec![true; n + 1];
        live[0] = false;
        let mut red_histogram = vec![0; n + 1];
        red_histogram[0] = n as u32;
        Ok(Trigraph {
            adj: vec![Vec::new(); n + 1],
            live,
            live_count: n,
            red_degree: vec![0; n + 1],
            red_histogram,
            max_red: 0,
        })
    }

    pub fn from_edges(
        n: usize,
        black: &[(u32, u32)],
        red: &[(u32, u32)],
    ) -> Result<Self, TrigraphError> {
        let mut g = Trigraph::new(n)?;
        let mut tagged: Vec<(VertexId, VertexId, EdgeColor)> = Vec::with_capacity(black.len() + red.len());
        for (edges, color) in [(black, EdgeColor::Black), (red, EdgeColor::Red)] {
            for &(u, v) in edges {
                for w in [u, v] {
                    if w == 0 || w as usize > n {
                        return Err(TrigraphError::OutOfRange(w));
                    }
                }
                if u == v {
                    return Err(TrigraphError::SelfLoop(VertexId(u)));
                }
                let (a, b) = (VertexId(u.min(v)), VertexId(u.max(v)));
                tagged.push((a, b, color));
            }
        }
        tagged.sort_unstable();
        for w in tagged.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(TrigraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        for &(a, b, color) in &tagged {
            g.adj[a.idx()].push((b, color));
            g.adj[b.idx()].push((a, color));
        }
        for list in g.adj.iter_mut() {
            list.sort_unstable();
        }
        for v in 1..=n {
            let r = g.adj[v].iter().filter(|e| e.1 == EdgeColor::Red).count() as u32;
            g.set_red_degree(v, r);
        }
        g.settle_max();
        Ok(g)
    }

    /// Black-only trigraph of a simple graph.
    pub fn from_graph(n: usize, edges: &[(u32, u32)]) -> Result<Self, TrigraphError> {
        Trigraph::from_edges(n, edges, &[])
    }

    /// Largest label this trigraph can hold.
    pub fn capacity(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        self.live.get(v.idx()).copied().unwrap_or(false)
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.live
            .iter()
            .enumerate()
            .filter(|(_, &l)| l)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeColor)] {
        &self.adj[v.idx()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.idx()].len()
    }

    pub fn red_degree(&self, v: VertexId) -> u32 {
        self.red_degree[v.idx()]
    }

    pub fn max_red_degree(&self) -> u32 {
        self.max_red
    }

    pub fn color(&self, u: VertexId, v: VertexId) -> Option<EdgeColor> {
        let list = self.adj.get(u.idx())?;
        list.binary_search_by_key(&v, |e| e.0).ok().map(|i| list[i].1)
    }

    pub fn has_red_edges(&self) -> bool {
        self.red_degree.iter().any(|&r| r > 0)
    }

    /// All edges once each, `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, EdgeColor)> {
        let mut out = Vec::new();
        for u in self.live_vertices() {
            for &(v, c) in &self.adj[u.idx()] {
                if u < v {
                    out.push((u, v, c));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Rough heap footprint, used by the exact solver's memory guard.
    pub fn approx_bytes(&self) -> usize {
        let lists: usize = self.adj.iter().map(|l| l.capacity() * 8 + 24).sum();
        lists + self.live.len() + (self.red_degree.len() + self.red_histogram.len()) * 4
    }

    fn set_red_degree(&mut self, v: usize, r: u32) {
        let old = self.red_degree[v] as usize;
        self.red_histogram[old] -= 1;
        self.red_histogram[r as usize] += 1;
        self.red_degree[v] = r;
        if r > self.max_red {
            self.max_red = r;
        }
    }

    fn settle_max(&mut self) {
        while self.max_red > 0 && self.red_histogram[self.max_red as usize] == 0 {
            self.max_red -= 1;
        }
    }

    fn check_pair(&self, p: ContractionPair) -> Result<(usize, usize), TrigraphError> {
        for v in [p.survivor, p.removed] {
            if !self.is_live(v) {
                return Err(TrigraphError::NotLive(v));
            }
        }
        if p.survivor == p.removed {
            return Err(TrigraphError::SameVertex(p.survivor));
        }
        Ok((p.survivor.idx(), p.removed.idx()))
    }

    /// Contracts in place and returns the new maximum red degree.
    pub fn contract(&mut self, p: ContractionPair) -> Result<u32, TrigraphError> {
        let (x, y) = self.check_pair(p)?;
        let ax = std::mem::take(&mut self.adj[x]);
        let ay = std::mem::take(&mut self.adj[y]);
        let mut merged = Vec::with_capacity(ax.len().max(ay.len()));

        for (u, cx, cy) in MergeIter::new(&ax, &ay, p.survivor, p.removed) {
            let new = if cx == Some(EdgeColor::Black) && cy == Some(EdgeColor::Black) {
                EdgeColor::Black
            } else {
                EdgeColor::Red
            };
            let list = &mut self.adj[u.idx()];
            if cy.is_some() {
                let i = list.binary_search_by_key(&p.removed, |e| e.0).expect("symmetric adjacency");
                list.remove(i);
            }
            match list.binary_search_by_key(&p.survivor, |e| e.0) {
                Ok(i) => list[i].1 = new,
                Err(i) => list.insert(i, (p.survivor, new)),
            }
            let old_red = red_count(cx) + red_count(cy);
            let new_red = (new == EdgeColor::Red) as u32;
            if old_red != new_red {
                let r = self.red_degree[u.idx()] + new_red - old_red;
                self.set_red_degree(u.idx(), r);
            }
            merged.push((u, new));
        }

        let merged_red = merged.iter().filter(|e| e.1 == EdgeColor::Red).count() as u32;
        self.adj[x] = merged;
        self.set_red_degree(y, 0);
        self.red_histogram[0] -= 1;
        self.live[y] = false;
        self.live_count -= 1;
        self.set_red_degree(x, merged_red);
        self.settle_max();
        debug_assert_eq!(self.validate(), Ok(()));
        Ok(self.max_red)
    }

    /// Contracted copy plus its maximum red degree.
    pub fn contracted(&self, p: ContractionPair) -> Result<(Trigraph, u32), TrigraphError> {
        let mut g = self.clone();
        let m = g.contract(p)?;
        Ok((g, m))
    }

    /// What `contract` would produce, without touching `self`.
    pub fn contraction_effect(&self, p: ContractionPair) -> Result<ContractionEffect, TrigraphError> {
        let mut scratch = Vec::new();
        self.check_pair(p)?;
        Ok(self.effect_with_scratch(p, &mut scratch))
    }

    /// `scratch` collects the old red degrees of every touched vertex so the
    /// untouched maximum can be read off the histogram.
    pub(crate) fn effect_with_scratch(&self, p: ContractionPair, scratch: &mut Vec<u32>) -> ContractionEffect {
        let (x, y) = (p.survivor.idx(), p.removed.idx());
        scratch.clear();
        scratch.push(self.red_degree[x]);
        scratch.push(self.red_degree[y]);
        let mut merged_red = 0u32;
        let mut touched_max = 0u32;
        for (u, cx, cy) in MergeIter::new(&self.adj[x], &self.adj[y], p.survivor, p.removed) {
            let black = cx == Some(EdgeColor::Black) && cy == Some(EdgeColor::Black);
            let new_red = (!black) as u32;
            merged_red += new_red;
            let old = self.red_degree[u.idx()];
            scratch.push(old);
            let r = old + new_red - red_count(cx) - red_count(cy);
            touched_max = touched_max.max(r);
        }
        let mut best = touched_max.max(merged_red);

        // Largest red degree among vertices the contraction leaves alone.
        scratch.sort_unstable_by(|a, b| b.cmp(a));
        let mut d = self.max_red;
        let mut i = 0;
        while d > best {
            let mut taken = 0;
            while i < scratch.len() && scratch[i] > d {
                i += 1;
            }
            while i < scratch.len() && scratch[i] == d {
                taken += 1;
                i += 1;
            }
            if self.red_histogram[d as usize] > taken {
                best = d;
                break;
            }
            d -= 1;
        }
        ContractionEffect {
            max_red_degree: best,
            merged_red_degree: merged_red,
        }
    }

    /// Live pairs that are adjacent or share a neighbor, smaller label first,
    /// sorted.
    pub fn candidate_pairs(&self) -> Vec<ContractionPair> {
        let mut stamp = vec![0u32; self.adj.len()];
        let mut out = Vec::new();
        let mut row = Vec::new();
        for u in self.live_vertices() {
            let mark = u.get();
            row.clear();
            for &(v, _) in &self.adj[u.idx()] {
                if v > u && stamp[v.idx()] != mark {
                    stamp[v.idx()] = mark;
                    row.push(v);
                }
                for &(w, _) in &self.adj[v.idx()] {
                    if w > u && stamp[w.idx()] != mark {
                        stamp[w.idx()] = mark;
                        row.push(w);
                    }
                }
            }
            row.sort_unstable();
            out.extend(row.iter().map(|&v| ContractionPair { survivor: u, removed: v }));
        }
        out
    }

    /// Every live pair, smaller label first, sorted.
    pub fn all_live_pairs(&self) -> Vec<ContractionPair> {
        let live: Vec<VertexId> = self.live_vertices().collect();
        let mut out = Vec::with_capacity(live.len() * live.len().saturating_sub(1) / 2);
        for (i, &u) in live.iter().enumerate() {
            for &v in &live[i + 1..] {
                out.push(ContractionPair { survivor: u, removed: v });
            }
        }
        out
    }

    fn black_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v.idx()]
            .iter()
            .filter(|e| e.1 == EdgeColor::Black)
            .map(|e| e.0)
    }

    /// Pairs whose black neighborhoods, each without the other endpoint,
    /// coincide. Contracting such a pair turns no black edge red.
    pub fn free_pairs(&self) -> Vec<ContractionPair> {
        // open key: N_B(v); closed key: N_B(v) + v. Two vertices share a
        // closed key exactly when they are black-adjacent twins.
        let mut buckets: HashMap<(bool, Vec<VertexId>), Vec<VertexId>> = HashMap::new();
        for v in self.live_vertices() {
            let open: Vec<VertexId> = self.black_neighbors(v).collect();
            let mut closed = open.clone();
            let at = closed.binary_search(&v).unwrap_err();
            closed.insert(at, v);
            buckets.entry((false, open)).or_default().push(v);
            buckets.entry((true, closed)).or_default().push(v);
        }
        pairs_from_buckets(buckets.into_values())
    }

    pub fn is_free_pair(&self, x: VertexId, y: VertexId) -> bool {
        let bx = self.black_neighbors(x).filter(|&u| u != y);
        let by = self.black_neighbors(y).filter(|&u| u != x);
        bx.eq(by)
    }

    /// Pairs with identical colored neighborhoods (ignoring each other).
    /// Contracting one of these yields a copy of the trigraph minus the
    /// removed vertex, so it can never hurt.
    pub fn twin_pairs(&self) -> Vec<ContractionPair> {
        // Closed keys record the color the vertex would see to its twin.
        let mut buckets: HashMap<(Option<EdgeColor>, Vec<(VertexId, EdgeColor)>), Vec<VertexId>> = HashMap::new();
        for v in self.live_vertices() {
            let open = self.adj[v.idx()].clone();
            for c in [EdgeColor::Black, EdgeColor::Red] {
                let mut closed = open.clone();
                let at = closed.binary_search_by_key(&v, |e| e.0).unwrap_err();
                closed.insert(at, (v, c));
                buckets.entry((Some(c), closed)).or_default().push(v);
            }
            buckets.entry((None, open)).or_default().push(v);
        }
        pairs_from_buckets(buckets.into_values())
    }

    /// First twin pair in canonical order, if any.
    pub fn first_twin_pair(&self) -> Option<ContractionPair> {
        self.twin_pairs().into_iter().next()
    }

    /// Trigraph on `keep` with the edges of `self` between kept vertices.
    /// Labels are preserved.
    pub fn induced_subtrigraph(&self, keep: &[VertexId]) -> Result<Trigraph, TrigraphError> {
        let mut inside = vec![false; self.adj.len()];
        for &v in keep {
            if !self.is_live(v) {
                return Err(TrigraphError::NotLive(v));
            }
            inside[v.idx()] = true;
        }
        let n = self.capacity();
        let mut g = Trigraph::new(n)?;
        for v in 1..=n {
            if !inside[v] {
                g.live[v] = false;
                g.red_histogram[0] -= 1;
            }
        }
        g.live_count = inside.iter().filter(|&&b| b).count();
        for v in 1..=n {
            if inside[v] {
                g.adj[v] = self.adj[v].iter().copied().filter(|e| inside[e.0.idx()]).collect();
                let r = g.adj[v].iter().filter(|e| e.1 == EdgeColor::Red).count() as u32;
                g.set_red_degree(v, r);
            }
        }
        g.settle_max();
        Ok(g)
    }

    /// Relabels the live vertices to `1..=k` in label order. Returns the new
    /// trigraph and `map[new_label] = old_label` (slot 0 unused).
    pub fn compact(&self) -> (Trigraph, Vec<VertexId>) {
        let mut map = vec![VertexId(0)];
        let mut back = vec![0u32; self.adj.len()];
        for v in self.live_vertices() {
            back[v.idx()] = map.len() as u32;
            map.push(v);
        }
        let mut black = Vec::new();
        let mut red = Vec::new();
        for (u, v, c) in self.edges() {
            let e = (back[u.idx()], back[v.idx()]);
            match c {
                EdgeColor::Black => black.push(e),
                EdgeColor::Red => red.push(e),
            }
        }
        let g = Trigraph::from_edges(map.len() - 1, &black, &red).expect("live trigraph is non-empty and simple");
        (g, map)
    }

    /// Full recomputation of every cached quantity.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.capacity();
        let mut hist = vec![0u32; n + 1];
        let mut live = 0;
        for v in 1..=n {
            if !self.live[v] {
                if !self.adj[v].is_empty() || self.red_degree[v] != 0 {
                    return Err(format!("dead vertex {v} has edges"));
                }
                continue;
            }
            live += 1;
            let list = &self.adj[v];
            if list.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(format!("neighbors of {v} not strictly sorted"));
            }
            let mut red = 0;
            for &(u, c) in list {
                if u.idx() == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.is_live(u) {
                    return Err(format!("edge {v}-{u} to dead vertex"));
                }
                if self.color(u, VertexId(v as u32)) != Some(c) {
                    return Err(format!("asymmetric edge {v}-{u}"));
                }
                red += (c == EdgeColor::Red) as u32;
            }
            if red != self.red_degree[v] {
                return Err(format!("stale red degree at {v}"));
            }
            hist[red as usize] += 1;
        }
        if live != self.live_count {
            return Err("stale live count".into());
        }
        if hist != self.red_histogram {
            return Err("stale red-degree histogram".into());
        }
        let max = (0..=n).rev().find(|&d| hist[d] > 0).unwrap_or(0) as u32;
        if max != self.max_red {
            return Err(format!("cached max red degree {} != {}", self.max_red, max));
        }
        Ok(())
    }
}

/// Trigraph on one vertex per group, labeled by the group's first element.
/// Between two groups the edge is black when every base pair is an edge, red
/// when only some are, absent otherwise.
pub fn quotient_trigraph(base: &Trigraph, partition: &[Vec<VertexId>]) -> Result<Trigraph, TrigraphError> {
    if base.has_red_edges() {
        return Err(TrigraphError::RedBase);
    }
    let mut group_of = vec![usize::MAX; base.adj.len()];
    for (gi, group) in partition.iter().enumerate() {
        if group.is_empty() {
            return Err(TrigraphError::InvalidPartition(format!("group {gi} is empty")));
        }
        for &v in group {
            if !base.is_live(v) {
                return Err(TrigraphError::InvalidPartition(format!("vertex {v} is not live")));
            }
            if group_of[v.idx()] != usize::MAX {
                return Err(TrigraphError::InvalidPartition(format!("vertex {v} appears twice")));
            }
            group_of[v.idx()] = gi;
        }
    }
    if let Some(v) = base.live_vertices().find(|v| group_of[v.idx()] == usize::MAX) {
        return Err(TrigraphError::InvalidPartition(format!("vertex {v} is not covered")));
    }

    let mut between: HashMap<(usize, usize), usize> = HashMap::new();
    for (u, v, _) in base.edges() {
        let (a, b) = (group_of[u.idx()], group_of[v.idx()]);
        if a != b {
            *between.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut black = Vec::new();
    let mut red = Vec::new();
    for ((a, b), count) in between {
        let e = (partition[a][0].get(), partition[b][0].get());
        if count == partition[a].len() * partition[b].len() {
            black.push(e);
        } else {
            red.push(e);
        }
    }
    let mut g = Trigraph::from_edges(base.capacity(), &black, &red)?;
    for group in partition {
        for &v in &group[1..] {
            g.live[v.idx()] = false;
            g.live_count -= 1;
            g.red_histogram[0] -= 1;
        }
    }
    for v in 1..g.live.len() {
        if !base.live[v] && g.live[v] {
            g.live[v] = false;
            g.live_count -= 1;
            g.red_histogram[0] -= 1;
        }
    }
    Ok(g)
}

fn red_count(c: Option<EdgeColor>) -> u32 {
    (c == Some(EdgeColor::Red)) as u32
}

fn pairs_from_buckets<I: Iterator<Item = Vec<VertexId>>>(buckets: I) -> Vec<ContractionPair> {
    let mut out = Vec::new();
    for group in buckets {
        for (i, &u) in group.iter().enumerate() {
            for &v in &group[i + 1..] {
                out.push(ContractionPair::canonical(u, v));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Sorted merge of two neighbor lists, skipping the contracted pair itself.
/// Yields each neighbor with its color towards x and towards y.
struct MergeIter<'a> {
    a: &'a [(VertexId, EdgeColor)],
    b: &'a [(VertexId, EdgeColor)],
    x: VertexId,
    y: VertexId,
}

impl<'a> MergeIter<'a> {
    fn new(a: &'a [(VertexId, EdgeColor)], b: &'a [(VertexId, EdgeColor)], x: VertexId, y: VertexId) -> Self {
        MergeIter { a, b, x, y }
    }
}

impl Iterator for MergeIter<'_> {
    type Item = (VertexId, Option<EdgeColor>, Option<EdgeColor>);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let item = match (self.a.first(), self.b.first()) {
                (None, None) => return None,
                (Some(&(u, c)), None) => {
                    self.a = &self.a[1..];
                    (u, Some(c), None)
                }
                (None, Some(&(u, c))) => {
                    self.b = &self.b[1..];
                    (u, None, Some(c))
                }
                (Some(&(u, cu)), Some(&(v, cv))) => {
                    if u < v {
                        self.a = &self.a[1..];
                        (u, Some(cu), None)
                    } else if v < u {
                        self.b = &self.b[1..];
                        (v, None, Some(cv))
                    } else {
                        self.a = &self.a[1..];
                        self.b = &self.b[1..];
                        (u, Some(cu), Some(cv))
                    }
                }
            };
            if item.0 != self.x && item.0 != self.y {
                return Some(item);
            }
        }
    }
}
