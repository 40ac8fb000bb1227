use rand::Rng;

use crate::bitset::{and_count, words_for, VertexSet};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Hard cap on vertex count.
pub const MAX_VERTICES: usize = 1 << 20;

/// Simple undirected graph with bitset adjacency rows.
///
/// Rows are stored contiguously, `stride` words per vertex. The matrix is
/// symmetric with an empty diagonal; every constructor maintains this.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph too large: {n} > {MAX_VERTICES}");
        let stride = words_for(n);
        Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for v in 0..n {
                g.set_edge(v, (v + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.set_edge(v - 1, v);
        }
        g
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_fn(a + b, |u, v| (u < a) != (v < a))
    }

    /// Star with `leaves` leaves centred at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Self::from_fn(leaves + 1, |u, v| u == 0 || v == 0)
    }

    /// Graph whose edges are the pairs `u < v` with `f(u, v)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if f(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Resource {
                what: "vertex count".into(),
                limit: MAX_VERTICES as u128,
            });
        }
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::pre(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::pre(format!("self-loop at {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Binomial random graph `G(n, p)` with exact rational `p`.
    pub fn gnp<R: Rng>(n: usize, p: &Rational, rng: &mut R) -> Self {
        let num = *p.numer();
        let den = *p.denom();
        assert!(num >= 0 && num <= den, "edge probability {p} outside [0,1]");
        let (num, den) = (num as u128, den as u128);
        Self::from_fn(n, |_, _| rng.gen_range(0..den) < num)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
        self.rows[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// Low word of row `v`; the full row when `n <= 64`.
    #[inline]
    pub fn row_mask(&self, v: usize) -> u64 {
        if self.stride == 0 {
            0
        } else {
            self.rows[v * self.stride]
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|N(v) ∩ S|`.
    #[inline]
    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        and_count(self.row(v), s.words())
    }

    pub fn neighbourhood(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    /// `N(v) ∩ S`.
    pub fn neighbours_in(&self, v: usize, s: &VertexSet) -> VertexSet {
        let words = self
            .row(v)
            .iter()
            .zip(s.words())
            .map(|(a, b)| a & b)
            .collect();
        VertexSet::from_words(self.n, words)
    }

    /// `S \ N(v)`, excluding `v` itself.
    pub fn non_neighbours_in(&self, v: usize, s: &VertexSet) -> VertexSet {
        let words = self
            .row(v)
            .iter()
            .zip(s.words())
            .map(|(a, b)| b & !a)
            .collect();
        let mut out = VertexSet::from_words(self.n, words);
        out.remove(v);
        out
    }

    pub fn edge_count(&self) -> u64 {
        let total: u64 = self.rows.iter().map(|w| w.count_ones() as u64).sum();
        total / 2
    }

    /// `e(A)`: edges with both ends in `A`.
    pub fn e_set(&self, a: &VertexSet) -> u64 {
        let twice: u64 = a.iter().map(|v| self.degree_in(v, a) as u64).sum();
        twice / 2
    }

    /// `e(X, Y)`: pairs `(x, y) ∈ X × Y` that are edges. For overlapping
    /// sets an edge inside the overlap is counted once per orientation.
    pub fn e_pair(&self, x: &VertexSet, y: &VertexSet) -> u64 {
        x.iter().map(|v| self.degree_in(v, y) as u64).sum()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count() as usize);
        for u in 0..self.n {
            for v in self.neighbourhood(u).iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph {
            n: self.n,
            stride: self.stride,
            rows: self.rows.iter().map(|w| !w).collect(),
        };
        let r = self.n % 64;
        for v in 0..self.n {
            if r != 0 {
                g.rows[v * self.stride + self.stride - 1] &= (1u64 << r) - 1;
            }
            g.rows[v * self.stride + v / 64] &= !(1 << (v % 64));
        }
        g
    }

    /// Subgraph induced by `w`, relabelled so that the `i`-th smallest
    /// member of `w` becomes vertex `i`.
    pub fn induced_subgraph(&self, w: &VertexSet) -> Graph {
        let verts = w.to_vec();
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    /// Replaces every vertex by an independent `m`-set and every edge by a
    /// complete bipartite graph. Vertex `u` becomes `u*m .. u*m+m`.
    pub fn blow_up(&self, m: usize) -> Graph {
        assert!(m >= 1, "blow-up factor must be positive");
        Graph::from_fn(self.n * m, |a, b| self.has_edge(a / m, b / m))
    }

    /// Disjoint union with `other`'s vertices shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n;
        Graph::from_fn(n + other.n, |u, v| {
            if v < n {
                self.has_edge(u, v)
            } else if u >= n {
                other.has_edge(u - n, v - n)
            } else {
                false
            }
        })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    /// `true` iff `0..n` row bits are symmetric with an empty diagonal.
    pub fn check_invariants(&self) -> bool {
        (0..self.n).all(|u| {
            !self.has_edge(u, u) && self.neighbourhood(u).iter().all(|v| self.has_edge(v, u))
        })
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    #[test]
    fn small_families() {
        assert_eq!(Graph::complete(5).edge_count(), 10);
        assert_eq!(Graph::cycle(5).edge_count(), 5);
        assert_eq!(Graph::path(4).edge_count(), 3);
        assert_eq!(Graph::complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(Graph::star(3).degree(0), 3);
    }

    #[test]
    fn blow_up_of_an_edge_is_k22() {
        let g = Graph::complete(2).blow_up(2);
        assert_eq!(g, Graph::complete_bipartite(2, 2));
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn complement_of_c5_is_a_5_cycle() {
        let c = Graph::cycle(5).complement();
        assert_eq!(c.edge_count(), 5);
        assert!((0..5).all(|v| c.degree(v) == 2));
        assert!(c.check_invariants());
    }

    #[test]
    fn from_edges_rejects_loops_and_range() {
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
    }

    proptest! {
        #[test]
        fn gnp_is_symmetric_and_edge_count_matches_rows(n in 0usize..90, seed in any::<u64>()) {
            let g = Graph::gnp(n, &crate::rational::rat(1, 3), &mut seeded(seed));
            prop_assert!(g.check_invariants());
            let deg_sum: usize = (0..n).map(|v| g.degree(v)).sum();
            prop_assert_eq!(deg_sum as u64, 2 * g.edge_count());
            let c = g.complement();
            prop_assert!(c.check_invariants());
            prop_assert_eq!(g.edge_count() + c.edge_count(), (n * n.saturating_sub(1) / 2) as u64);
        }

        #[test]
        fn blow_up_multiplies_edges(n in 1usize..9, m in 1usize..4, seed in any::<u64>()) {
            let g = Graph::gnp(n, &crate::rational::rat(1, 2), &mut seeded(seed));
            prop_assert_eq!(g.blow_up(m).edge_count(), (m * m) as u64 * g.edge_count());
        }
    }
}
