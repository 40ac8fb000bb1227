//! Large induced subgraphs of very low or very high density in `H`-free
//! graphs, by recursing on the sides of a sparse/dense pair.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::density::{choose2, density_set, Density};
use crate::error::{Error, Result};
use crate::extract::split::eh_pair;
use crate::graph::Graph;
use crate::oracles;
use crate::pattern::PatternGraph;
use crate::rational::{self, le_scaled, rat, Rational};
use crate::rng;
use crate::witness::Mode;

/// Pattern-freeness is pre-checked exhaustively when `n^k` is at most this.
pub const PRECHECK_WORK: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Low,
    High,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::Low => Side::High,
            Side::High => Side::Low,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractMethod {
    Recursive,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityCertificate {
    pub set: VertexSet,
    pub side: Side,
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    pub density: Density,
    pub size_floor: usize,
    pub method: ExtractMethod,
    /// Deepest recursion level reached.
    pub depth: usize,
}

/// `max(2, ⌊2^{-15k·log²(1/ε)}·n⌋)`.
pub fn size_floor(n: usize, k: usize, eps: &Rational) -> usize {
    analytic_floor(n, k, eps).max(2)
}

fn analytic_floor(n: usize, k: usize, eps: &Rational) -> usize {
    let l = (1.0 / rational::to_f64(eps)).log2();
    let exponent = 15.0 * k as f64 * l * l;
    if exponent > (n.max(1) as f64).log2() + 1.0 {
        return 0;
    }
    ((n as f64) * (-exponent).exp2()).floor() as usize
}

fn side_of(g: &Graph, s: &VertexSet, lo: &Rational) -> Side {
    if s.len() < 2 || le_scaled(g.e_set(s) as usize, lo, choose2(s.len()) as usize) {
        Side::Low
    } else {
        Side::High
    }
}

/// `d(S) <= lo` (Low) or `d(S) >= 1 - hi` (High); sets below two vertices
/// count as density 0.
fn satisfies(edges: u64, size: usize, lo: &Rational, hi: &Rational, side: Side) -> bool {
    if size < 2 {
        return side == Side::Low;
    }
    let pairs = choose2(size) as usize;
    match side {
        Side::Low => le_scaled(edges as usize, lo, pairs),
        Side::High => le_scaled(pairs - edges as usize, hi, pairs),
    }
}

/// Largest subset of a graph on fewer than 16 vertices meeting either side;
/// ties go to the numerically smallest mask.
fn best_small(g: &Graph, lo: &Rational, hi: &Rational) -> (VertexSet, Side) {
    let n = g.n();
    debug_assert!(n <= 20);
    let mut edges = vec![0u32; 1 << n];
    let mut best: (usize, u64, Side) = (0, 0, Side::Low);
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        edges[mask] = edges[rest] + (g.row_mask(v) & rest as u64).count_ones();
        let size = mask.count_ones() as usize;
        if size <= best.0 {
            continue;
        }
        for side in [Side::Low, Side::High] {
            if satisfies(edges[mask] as u64, size, lo, hi, side) {
                best = (size, mask as u64, side);
                break;
            }
        }
    }
    (VertexSet::from_mask(n, best.1), best.2)
}

struct Recursion<'a> {
    seed: u64,
    calls: u64,
    depth: usize,
    pattern: &'a PatternGraph,
    co_pattern: PatternGraph,
}

impl Recursion<'_> {
    /// `verts[i]` is the label in the caller's graph of local vertex `i`;
    /// used only to report an embedding in caller labels.
    fn run(
        &mut self,
        g: &Graph,
        verts: &[usize],
        complemented: bool,
        lo: Rational,
        hi: Rational,
        depth: usize,
    ) -> Result<(VertexSet, Side)> {
        self.depth = self.depth.max(depth);
        let n = g.n();
        if n < 2 || lo + hi >= Rational::from_integer(1) {
            let all = VertexSet::full(n);
            return Ok((all.clone(), side_of(g, &all, &lo)));
        }
        let h = if complemented {
            &self.co_pattern
        } else {
            self.pattern
        };
        if n < h.k {
            return Ok(best_small(g, &lo, &hi));
        }
        let eps = lo.min(hi);
        let seed = rng::derive(self.seed, self.calls);
        self.calls += 1;
        let w = eh_pair(g, h, &(eps / 4), seed).map_err(|e| match e {
            Error::NotHFree(mut emb) => {
                for v in emb.map.iter_mut() {
                    *v = verts[*v];
                }
                Error::NotHFree(emb)
            }
            other => other,
        })?;
        match w.mode {
            Mode::Sparse => self.sparse_case(g, verts, complemented, lo, hi, &w.a, &w.b, depth),
            Mode::Dense => {
                let gc = g.complement();
                let (s, side) =
                    self.sparse_case(&gc, verts, !complemented, hi, lo, &w.a, &w.b, depth)?;
                Ok((s, side.flip()))
            }
        }
    }

    /// Every vertex of `a` has at most `(eps/4)|b|` neighbours in `b`.
    #[allow(clippy::too_many_arguments)]
    fn sparse_case(
        &mut self,
        g: &Graph,
        verts: &[usize],
        complemented: bool,
        lo: Rational,
        hi: Rational,
        a: &VertexSet,
        b: &VertexSet,
        depth: usize,
    ) -> Result<(VertexSet, Side)> {
        let n = g.n();
        let eps = lo.min(hi);
        let lo_up = lo * rat(3, 2);

        let a_verts = a.to_vec();
        let a_sub: Vec<usize> = a_verts.iter().map(|&v| verts[v]).collect();
        let (a1, side) = self.run(
            &g.induced_subgraph(a),
            &a_sub,
            complemented,
            lo_up,
            hi,
            depth + 1,
        )?;
        let a1 = VertexSet::from_iter(n, a1.iter().map(|i| a_verts[i]));
        if side == Side::High {
            return Ok((a1, Side::High));
        }

        let half = eps / 2;
        let b1 = VertexSet::from_iter(
            n,
            b.iter()
                .filter(|&v| le_scaled(g.degree_in(v, &a1), &half, a1.len())),
        );
        if b1.is_empty() {
            return Err(Error::Contract(
                "no vertex of B is sparse towards A'".into(),
            ));
        }
        let b_verts = b1.to_vec();
        let b_sub: Vec<usize> = b_verts.iter().map(|&v| verts[v]).collect();
        let (b2, side) = self.run(
            &g.induced_subgraph(&b1),
            &b_sub,
            complemented,
            lo_up,
            hi,
            depth + 1,
        )?;
        let mut b2 = VertexSet::from_iter(n, b2.iter().map(|i| b_verts[i]));
        if side == Side::High {
            return Ok((b2, Side::High));
        }

        let mut a2 = a1;
        let m = a2.len().min(b2.len());
        trim_against(g, &mut a2, &b2, m);
        trim_against(g, &mut b2, &a2, m);
        let merged = a2.union(&b2);
        if !satisfies(g.e_set(&merged), merged.len(), &lo, &hi, Side::Low) {
            return Err(Error::Contract(format!(
                "merged set of size {} exceeds density {lo}",
                merged.len()
            )));
        }
        Ok((merged, Side::Low))
    }
}

/// Shrinks `s` to `m` vertices without raising the expected value of
/// `e(T) + e(T, other)` over uniform `m`-subsets `T` of `s`: each round drops
/// the vertex whose removal minimises that conditional expectation.
/// Ties drop the highest index.
pub fn trim_against(g: &Graph, s: &mut VertexSet, other: &VertexSet, m: usize) {
    while s.len() > m {
        let size = s.len();
        let key = |v: usize| -> u128 {
            let d_int = g.degree_in(v, s) as u128;
            let d_cross = g.degree_in(v, other) as u128;
            if size == 2 {
                d_cross
            } else {
                d_int * (m as u128).saturating_sub(1) + d_cross * (size as u128 - 2)
            }
        };
        let v = s.iter().max_by_key(|&v| (key(v), v)).expect("non-empty");
        s.remove(v);
    }
}

/// Adds vertices to a valid set while the bound for `side` still holds,
/// preferring the fewest (Low) or most (High) neighbours inside, then the
/// lowest index.
fn extend_greedily(g: &Graph, s: &mut VertexSet, eps: &Rational, side: Side) {
    let mut edges = g.e_set(s);
    loop {
        let size = s.len();
        let outside = s.complement();
        let pick = outside.iter().min_by_key(|&v| {
            let d = g.degree_in(v, s);
            (if side == Side::Low { d } else { size - d }, v)
        });
        let Some(v) = pick else { return };
        let d = g.degree_in(v, s) as u64;
        if !satisfies(edges + d, size + 1, eps, eps, side) {
            return;
        }
        s.insert(v);
        edges += d;
    }
}

/// Finds `W` with `d(W) <= ε` or `d(W) >= 1-ε` in an `H`-free graph.
///
/// The recursion result is extended greedily. When the analytic size floor
/// is below 2 and `n <= 18`, the exhaustive optimum is returned instead if it
/// is strictly larger.
pub fn sparse_or_dense_subset(
    g: &Graph,
    h: &PatternGraph,
    eps: &Rational,
    seed: u64,
) -> Result<DensityCertificate> {
    if !(rational::in_open_unit(eps) && *eps < rat(1, 2)) {
        return Err(Error::param(format!("eps = {eps} must lie in (0,1/2)")));
    }
    let (n, k) = (g.n(), h.k);
    if k < 2 {
        return Err(Error::param("pattern needs at least 2 vertices"));
    }
    if n < 2 {
        return Err(Error::pre("need at least 2 vertices"));
    }
    if (n as f64).powi(k as i32) <= PRECHECK_WORK {
        if let Some(map) = oracles::find_induced(g, h) {
            return Err(Error::NotHFree(Box::new(crate::Embedding {
                map,
                color: None,
            })));
        }
    }
    let mut rec = Recursion {
        seed,
        calls: 0,
        depth: 0,
        pattern: h,
        co_pattern: h.complement(),
    };
    let verts: Vec<usize> = (0..n).collect();
    let (mut set, mut side) = rec.run(g, &verts, false, *eps, *eps, 0)?;
    if set.len() < 2 {
        set = VertexSet::from_iter(n, [0, 1]);
        side = side_of(g, &set, eps);
    }
    extend_greedily(g, &mut set, eps, side);
    let mut method = ExtractMethod::Recursive;
    if analytic_floor(n, k, eps) < 2 && n <= oracles::MAX_SPARSE_DENSE_N {
        let best = oracles::best_sparse_or_dense(g, eps)?;
        if best.set.len() > set.len() {
            side = side_of(g, &best.set, eps);
            set = best.set;
            method = ExtractMethod::Oracle;
        }
    }
    let cert = DensityCertificate {
        density: density_set(g, &set)?,
        set,
        side,
        eps: *eps,
        size_floor: size_floor(n, k, eps),
        method,
        depth: rec.depth,
    };
    verify_density_certificate(g, &cert)?;
    Ok(cert)
}

pub fn verify_density_certificate(g: &Graph, c: &DensityCertificate) -> Result<()> {
    if c.set.universe() != g.n() {
        return Err(Error::Contract(
            "certificate indexes a different universe".into(),
        ));
    }
    if c.set.len() < c.size_floor {
        return Err(Error::Contract(format!(
            "|W| = {} below the claimed floor {}",
            c.set.len(),
            c.size_floor
        )));
    }
    let d = density_set(g, &c.set)?;
    let one_minus = Rational::from_integer(1) - c.eps;
    let ok = match c.side {
        Side::Low => d.le(&c.eps),
        Side::High => d.ge(&one_minus),
    };
    if !ok || d != c.density {
        return Err(Error::Contract(format!(
            "density {d} does not meet the {:?} bound at eps {}",
            c.side, c.eps
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_empty_graphs_return_everything() {
        let h = PatternGraph::named("p4").unwrap();
        let c = sparse_or_dense_subset(&Graph::complete(12), &h, &rat(1, 4), 1).unwrap();
        assert_eq!((c.set.len(), c.side), (12, Side::High));
        let c = sparse_or_dense_subset(&Graph::empty(12), &h, &rat(1, 4), 1).unwrap();
        assert_eq!((c.set.len(), c.side), (12, Side::Low));
    }

    #[test]
    fn trimming_keeps_the_merge_bound() {
        let g = Graph::from_fn(10, |u, v| (u + v) % 3 == 0);
        let mut s = VertexSet::from_iter(10, 0..6);
        let other = VertexSet::from_iter(10, 6..10);
        let before = g.e_set(&s) as f64 * 6.0 / 15.0 + g.e_pair(&s, &other) as f64 * 4.0 / 6.0;
        trim_against(&g, &mut s, &other, 4);
        assert_eq!(s.len(), 4);
        let after = (g.e_set(&s) + g.e_pair(&s, &other)) as f64;
        assert!(after <= before + 1e-9);
    }

    #[test]
    fn floor_is_two_at_desk_scale() {
        assert_eq!(size_floor(1000, 3, &rat(1, 4)), 2);
        assert_eq!(analytic_floor(1000, 3, &rat(1, 4)), 0);
    }

    #[test]
    fn small_leaf_search_handles_both_sides() {
        let (s, side) = best_small(&Graph::complete(5), &rat(1, 4), &rat(1, 4));
        assert_eq!((s.len(), side), (5, Side::High));
    }
}
