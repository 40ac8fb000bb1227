//! Pair finders for [`super::PairFinder`].

use crate::bitset::VertexSet;
use crate::extract::split::eh_pair;
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rational::{le_scaled, Rational};
use crate::rng;
use crate::witness::Mode;

use super::{FoundPair, PairFinder};

/// The `size` vertices of `pool` with fewest neighbours in `x`; ties go to
/// the lowest index.
pub fn fewest_neighbours(
    g: &Graph,
    pool: &VertexSet,
    x: &VertexSet,
    size: usize,
) -> Option<VertexSet> {
    if pool.len() < size {
        return None;
    }
    let mut cand: Vec<(usize, usize)> = pool.iter().map(|v| (g.degree_in(v, x), v)).collect();
    cand.sort_unstable();
    Some(VertexSet::from_iter(
        g.n(),
        cand[..size].iter().map(|c| c.1),
    ))
}

fn accept(g: &Graph, x: &VertexSet, y: &VertexSet, eps: &Rational) -> bool {
    le_scaled(g.e_pair(x, y) as usize, eps, x.len() * y.len())
}

/// Consecutive chunks: `X` is the lowest `size` vertices of `U`, `Y` the
/// next `size`; the first graph in which they are sparse wins.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChunkFinder;

impl PairFinder for ChunkFinder {
    fn name(&self) -> &str {
        "chunk"
    }

    fn find(
        &self,
        graphs: &[Graph],
        u: &VertexSet,
        size: usize,
        eps: &Rational,
    ) -> Option<FoundPair> {
        let x = u.take_lowest(size);
        let y = u.difference(&x).take_lowest(size);
        if y.len() < size {
            return None;
        }
        graphs
            .iter()
            .position(|g| accept(g, &x, &y, eps))
            .map(|index| FoundPair { index, x, y })
    }
}

/// Low-degree seeding followed by alternating best responses: `X` starts as
/// the lowest-degree vertices of `G_i[U]`, then `Y` and `X` are refitted as
/// the vertices with fewest neighbours on the other side.
#[derive(Clone, Copy, Debug)]
pub struct GreedyFinder {
    pub rounds: usize,
}

impl Default for GreedyFinder {
    fn default() -> Self {
        GreedyFinder { rounds: 3 }
    }
}

impl GreedyFinder {
    fn pair_in(&self, g: &Graph, u: &VertexSet, size: usize) -> Option<(VertexSet, VertexSet)> {
        let mut x = fewest_neighbours(g, u, u, size)?;
        let mut y = fewest_neighbours(g, &u.difference(&x), &x, size)?;
        let mut best = g.e_pair(&x, &y);
        for _ in 0..self.rounds {
            let nx = fewest_neighbours(g, &u.difference(&y), &y, size)?;
            let ny = fewest_neighbours(g, &u.difference(&nx), &nx, size)?;
            let e = g.e_pair(&nx, &ny);
            if e >= best {
                break;
            }
            (x, y, best) = (nx, ny, e);
        }
        Some((x, y))
    }
}

impl PairFinder for GreedyFinder {
    fn name(&self) -> &str {
        "greedy"
    }

    fn find(
        &self,
        graphs: &[Graph],
        u: &VertexSet,
        size: usize,
        eps: &Rational,
    ) -> Option<FoundPair> {
        graphs.iter().enumerate().find_map(|(index, g)| {
            let (x, y) = self.pair_in(g, u, size)?;
            accept(g, &x, &y, eps).then_some(FoundPair { index, x, y })
        })
    }
}

/// Uses a known vertex labelling, e.g. the blocks of a planted partition:
/// `X` and `Y` come from two different label classes inside `U`, largest
/// classes first.
#[derive(Clone, Debug)]
pub struct ClusterFinder {
    pub labels: Vec<usize>,
}

impl PairFinder for ClusterFinder {
    fn name(&self) -> &str {
        "cluster"
    }

    fn find(
        &self,
        graphs: &[Graph],
        u: &VertexSet,
        size: usize,
        eps: &Rational,
    ) -> Option<FoundPair> {
        let n = u.universe();
        let mut classes: std::collections::BTreeMap<usize, VertexSet> = Default::default();
        for v in u.iter() {
            classes
                .entry(self.labels[v])
                .or_insert_with(|| VertexSet::new(n))
                .insert(v);
        }
        let mut order: Vec<&VertexSet> = classes.values().filter(|c| c.len() >= size).collect();
        order.sort_by_key(|c| std::cmp::Reverse(c.len()));
        for (i, a) in order.iter().enumerate() {
            for b in &order[i + 1..] {
                let x = a.take_lowest(size);
                for (index, g) in graphs.iter().enumerate() {
                    let y = fewest_neighbours(g, b, &x, size)?;
                    if accept(g, &x, &y, eps) {
                        return Some(FoundPair { index, x, y });
                    }
                }
            }
        }
        None
    }
}

/// For the pair `(G, Ḡ)` of an `H`-free graph: a sparse/dense pair from the
/// embed-or-split procedure at threshold `eps`, with `X` the lowest vertices
/// of `A` and `Y` the vertices of `B` with fewest neighbours in `X`.
/// A dense pair is reported as sparse in the complement (index 1).
#[derive(Clone, Debug)]
pub struct HFreeFinder {
    pub pattern: PatternGraph,
    pub seed: u64,
}

impl PairFinder for HFreeFinder {
    fn name(&self) -> &str {
        "h-free"
    }

    fn find(
        &self,
        graphs: &[Graph],
        u: &VertexSet,
        size: usize,
        eps: &Rational,
    ) -> Option<FoundPair> {
        if graphs.len() != 2 || u.len() < 2 {
            return None;
        }
        let verts = u.to_vec();
        let sub = graphs[0].induced_subgraph(u);
        let seed = rng::derive(self.seed, (u.len() as u64) ^ ((verts[0] as u64) << 32));
        let w = eh_pair(&sub, &self.pattern, eps, seed).ok()?;
        let index = match w.mode {
            Mode::Sparse => 0,
            Mode::Dense => 1,
        };
        let n = u.universe();
        let lift = |s: &VertexSet| VertexSet::from_iter(n, s.iter().map(|i| verts[i]));
        let a = lift(&w.a);
        let b = lift(&w.b);
        if a.len() < size {
            return None;
        }
        let x = a.take_lowest(size);
        let y = fewest_neighbours(&graphs[index], &b, &x, size)?;
        accept(&graphs[index], &x, &y, eps).then_some(FoundPair { index, x, y })
    }
}
