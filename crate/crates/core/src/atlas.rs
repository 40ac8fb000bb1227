//! Small-graph atlas: one representative per isomorphism class, generated by
//! adding a vertex at a time. Classes are bucketed by a colour-refinement
//! invariant and separated inside a bucket by an exact isomorphism test.

use std::collections::BTreeMap;

use crate::graph::Graph;

/// Largest order the atlas generates.
pub const MAX_ATLAS_N: usize = 10;

/// Colour refinement run to stability. The key lists, for every round, the
/// sorted signatures `(colour, sorted neighbour colours)`; colours are
/// ranks of signatures, so the key is an isomorphism invariant.
fn refine(g: &Graph) -> (Vec<Vec<u32>>, Vec<u32>) {
    let n = g.n();
    let mut colour = vec![0u32; n];
    let mut key = Vec::new();
    let mut classes = 1;
    loop {
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut s: Vec<u32> = g.neighbourhood(v).iter().map(|u| colour[u]).collect();
                s.sort_unstable();
                s.insert(0, colour[v]);
                s
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colour = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("own signature") as u32)
            .collect();
        let mut round: Vec<u32> = Vec::new();
        let mut all = sigs;
        all.sort();
        for s in all {
            round.push(s.len() as u32);
            round.extend(s);
        }
        key.push(round);
        if distinct.len() == classes {
            return (key, colour);
        }
        classes = distinct.len();
    }
}

/// Exact isomorphism test by backtracking over colour-preserving maps.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (ka, ca) = refine(a);
    let (kb, cb) = refine(b);
    ka == kb && extend(a, b, &ca, &cb, &mut Vec::new(), &mut vec![false; b.n()])
}

fn extend(
    a: &Graph,
    b: &Graph,
    ca: &[u32],
    cb: &[u32],
    map: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let v = map.len();
    if v == a.n() {
        return true;
    }
    for w in 0..b.n() {
        if used[w] || ca[v] != cb[w] {
            continue;
        }
        if (0..v).any(|u| a.has_edge(u, v) != b.has_edge(map[u], w)) {
            continue;
        }
        map.push(w);
        used[w] = true;
        if extend(a, b, ca, cb, map, used) {
            return true;
        }
        map.pop();
        used[w] = false;
    }
    false
}

/// Isomorphism classes collected so far, bucketed by invariant.
#[derive(Default)]
struct Classes {
    buckets: BTreeMap<Vec<Vec<u32>>, Vec<Graph>>,
}

impl Classes {
    fn add(&mut self, g: Graph) {
        let bucket = self.buckets.entry(refine(&g).0).or_default();
        if !bucket.iter().any(|h| is_isomorphic(h, &g)) {
            bucket.push(g);
        }
    }

    fn into_vec(self) -> Vec<Graph> {
        self.buckets.into_values().flatten().collect()
    }
}

/// One graph per isomorphism class on `0..=max_n` vertices satisfying
/// `keep`, which must be hereditary (closed under deleting a vertex) so
/// that every class is reached by extending a smaller one. `out[m]` holds
/// the classes on `m` vertices in a deterministic order.
pub fn hereditary_classes(max_n: usize, keep: &dyn Fn(&Graph) -> bool) -> Vec<Vec<Graph>> {
    assert!(
        max_n <= MAX_ATLAS_N,
        "atlas order {max_n} above {MAX_ATLAS_N}"
    );
    let mut out = vec![vec![Graph::empty(0)]];
    for m in 1..=max_n {
        let mut next = Classes::default();
        for g in &out[m - 1] {
            for mask in 0u32..1 << (m - 1) {
                let h = Graph::from_fn(m, |u, v| {
                    if v == m - 1 {
                        mask >> u & 1 == 1
                    } else {
                        g.has_edge(u, v)
                    }
                });
                if keep(&h) {
                    next.add(h);
                }
            }
        }
        out.push(next.into_vec());
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = crate::VertexSet::from_iter(g.n(), [0]);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for u in g.neighbourhood(v).difference(&seen).iter() {
            seen.insert(u);
            stack.push(u);
        }
    }
    seen.len() == g.n()
}
