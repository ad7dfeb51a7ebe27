//! Small graph families and random instances for tests and benchmarks.

use std::collections::HashSet;

use rand::Rng;

use crate::pace_io::Instance;

pub fn path(n: usize) -> Instance {
    Instance::new(n, (1..n as u32).map(|i| (i, i + 1)).collect())
}

/// Needs `n >= 3`.
pub fn cycle(n: usize) -> Instance {
    assert!(n >= 3, "a cycle needs three vertices");
    let mut inst = path(n);
    inst.edges.push((1, n as u32));
    inst
}

pub fn complete(n: usize) -> Instance {
    let mut edges = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            edges.push((a, b));
        }
    }
    Instance::new(n, edges)
}

/// Erdős–Rényi graph; each pair is an edge with probability `p`.
pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Instance {
    let mut edges = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Instance::new(n, edges)
}

/// Random cograph on `n` vertices: split the label range in two, build both
/// sides recursively and join them completely or not at all.
pub fn random_cograph<R: Rng>(n: usize, rng: &mut R) -> Instance {
    let mut edges = Vec::new();
    cograph_rec(1, n as u32, rng, &mut edges);
    edges.sort_unstable();
    Instance::new(n, edges)
}

fn cograph_rec<R: Rng>(lo: u32, hi: u32, rng: &mut R, edges: &mut Vec<(u32, u32)>) {
    if lo >= hi {
        return;
    }
    let mid = rng.gen_range(lo..hi);
    cograph_rec(lo, mid, rng, edges);
    cograph_rec(mid + 1, hi, rng, edges);
    if rng.gen_bool(0.5) {
        for a in lo..=mid {
            for b in mid + 1..=hi {
                edges.push((a, b));
            }
        }
    }
}

fn pair_index(n: usize) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            pairs.push((a, b));
        }
    }
    pairs
}

fn connected(n: usize, adj: &[u32]) -> bool {
    let mut seen = 1u32;
    let mut stack = vec![0usize];
    while let Some(u) = stack.pop() {
        let fresh = adj[u] & !seen;
        seen |= fresh;
        for w in 0..n {
            if fresh >> w & 1 == 1 {
                stack.push(w);
            }
        }
    }
    seen.count_ones() as usize == n
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, cur, out);
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, in increasing order of their canonical edge mask. Brute force
/// over all labelings, so only meant for `n <= 6`.
pub fn connected_graphs(n: usize) -> Vec<Instance> {
    assert!((1..=6).contains(&n), "exhaustive enumeration supports 1..=6 vertices");
    let pairs = pair_index(n);
    let perms = permutations(n);
    let mut index = vec![vec![0usize; n]; n];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        index[a as usize][b as usize] = i;
        index[b as usize][a as usize] = i;
    }

    let mut classes: HashSet<u32> = HashSet::new();
    for mask in 0u32..1 << pairs.len() {
        let mut adj = vec![0u32; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[a as usize] |= 1 << b;
                adj[b as usize] |= 1 << a;
            }
        }
        if !connected(n, &adj) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                pairs.iter().enumerate().fold(0u32, |acc, (i, &(a, b))| {
                    if mask >> i & 1 == 1 {
                        acc | 1 << index[p[a as usize]][p[b as usize]]
                    } else {
                        acc
                    }
                })
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }

    let mut reps: Vec<u32> = classes.into_iter().collect();
    reps.sort_unstable();
    reps.into_iter()
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(a, b))| (a + 1, b + 1))
                .collect();
            Instance::new(n, edges)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn connected_class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn families() {
        assert_eq!(path(4).edges, vec![(1, 2), (2, 3), (3, 4)]);
        assert_eq!(cycle(3).m(), 3);
        assert_eq!(complete(5).m(), 10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(gnp(6, 1.0, &mut rng).m(), 15);
        assert_eq!(gnp(6, 0.0, &mut rng).m(), 0);
        let c = random_cograph(10, &mut rng);
        assert!(c.edges.iter().all(|&(a, b)| a < b && b <= 10));
    }
}
