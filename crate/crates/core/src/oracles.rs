//! Brute-force ground truth for small instances.
//!
//! Every routine here has a hard size cap and returns a resource error
//! beyond it; none of them samples.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::EdgeColoring;
use crate::density::{choose2, Density};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rational::Rational;
use num_traits::Signed;

pub const MAX_HOMOGENEOUS_N: usize = 40;
pub const MAX_SPARSE_DENSE_N: usize = 18;
pub const MAX_HALF_SUBSET_N: usize = 24;
pub const MAX_RAMSEY_EDGES: usize = 25;
pub const MAX_UNIVERSAL_K: usize = 5;

/// Work budget for the enumerations whose cost depends on the input rather
/// than on a fixed size cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    pub max_work: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_work: 1 << 32 }
    }
}

fn resource(what: impl Into<String>, limit: u128) -> Error {
    Error::Resource {
        what: what.into(),
        limit,
    }
}

fn check_cap(what: &str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(resource(format!("{what} = {value}"), cap as u128))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Induced copies
// ---------------------------------------------------------------------------

/// Candidate set for pattern vertex `i` given images of `0..i`.
fn extend_candidates(
    g: &Graph,
    h: &PatternGraph,
    cand: &VertexSet,
    i: usize,
    img: usize,
    j: usize,
) -> VertexSet {
    debug_assert!(j > i);
    if h.has_edge(i, j) {
        g.neighbours_in(img, cand)
    } else {
        g.non_neighbours_in(img, cand)
    }
}

/// Depth-first enumeration of labelled induced copies. `visit` returns
/// `false` to stop early.
fn for_each_induced(g: &Graph, h: &PatternGraph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let k = h.k;
    if k > g.n() {
        return;
    }
    let mut map = Vec::with_capacity(k);
    let cands: Vec<VertexSet> = (0..k).map(|_| VertexSet::full(g.n())).collect();
    induced_rec(g, h, &mut map, cands, visit);
}

fn induced_rec(
    g: &Graph,
    h: &PatternGraph,
    map: &mut Vec<usize>,
    cands: Vec<VertexSet>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let i = map.len();
    if i == h.k {
        return visit(map);
    }
    for v in cands[i].iter() {
        let mut next = cands.clone();
        for (j, c) in next.iter_mut().enumerate().skip(i + 1) {
            *c = extend_candidates(g, h, c, i, v, j);
            c.remove(v);
        }
        map.push(v);
        let go_on = induced_rec(g, h, map, next, visit);
        map.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn count_budget(g: &Graph, h: &PatternGraph, budget: &OracleBudget) -> Result<()> {
    let work = (g.n() as u128).checked_pow(h.k as u32).unwrap_or(u128::MAX);
    if work > budget.max_work {
        return Err(resource(
            format!("n^k = {}^{} induced-copy enumeration", g.n(), h.k),
            budget.max_work,
        ));
    }
    Ok(())
}

/// Number of injective maps `[k] → V(G)` preserving edges and non-edges.
pub fn count_labeled_induced(g: &Graph, h: &PatternGraph, budget: &OracleBudget) -> Result<u128> {
    count_budget(g, h, budget)?;
    let k = h.k;
    if k > g.n() {
        return Ok(0);
    }
    if k == 1 {
        return Ok(g.n() as u128);
    }
    // Split on the image of pattern vertex 0; the last level is a popcount.
    let total = (0..g.n())
        .into_par_iter()
        .map(|v0| {
            let mut cands: Vec<VertexSet> = (0..k).map(|_| VertexSet::full(g.n())).collect();
            for (j, c) in cands.iter_mut().enumerate().skip(1) {
                *c = extend_candidates(g, h, c, 0, v0, j);
                c.remove(v0);
            }
            count_rec(g, h, 1, &cands)
        })
        .sum();
    Ok(total)
}

fn count_rec(g: &Graph, h: &PatternGraph, i: usize, cands: &[VertexSet]) -> u128 {
    if i + 1 == h.k {
        return cands[i].len() as u128;
    }
    let mut total = 0;
    for v in cands[i].iter() {
        let mut next = cands.to_vec();
        for (j, c) in next.iter_mut().enumerate().skip(i + 1) {
            *c = extend_candidates(g, h, c, i, v, j);
            c.remove(v);
        }
        total += count_rec(g, h, i + 1, &next);
    }
    total
}

/// First labelled induced copy of `h` in depth-first lexicographic order.
pub fn find_induced(g: &Graph, h: &PatternGraph) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_induced(g, h, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

pub fn is_h_free(g: &Graph, h: &PatternGraph) -> bool {
    find_induced(g, h).is_none()
}

/// First `k`-tuple `(v_0..v_{k-1})` with `phi(v_i, v_j) == psi(i, j)` for
/// all `i < j`, where `phi` colours `K_n` and `psi` colours `K_k`.
pub fn find_color_pattern(phi: &EdgeColoring, psi: &EdgeColoring) -> Option<Vec<usize>> {
    let n = phi.n();
    let k = psi.n();
    if k > n {
        return None;
    }
    let host = phi.host();
    let mut map = Vec::with_capacity(k);
    let cands: Vec<VertexSet> = (0..k).map(|_| VertexSet::full(n)).collect();
    if color_rec(phi, &host, psi, &mut map, cands) {
        Some(map)
    } else {
        None
    }
}

fn color_rec(
    phi: &EdgeColoring,
    host: &Graph,
    psi: &EdgeColoring,
    map: &mut Vec<usize>,
    cands: Vec<VertexSet>,
) -> bool {
    let i = map.len();
    if i == psi.n() {
        return true;
    }
    for v in cands[i].iter() {
        let mut next = cands.clone();
        for (j, c) in next.iter_mut().enumerate().skip(i + 1) {
            let col = psi.color(i, j);
            *c = if col == 0 {
                host.non_neighbours_in(v, c)
            } else {
                phi.layer(col).neighbours_in(v, c)
            };
            c.remove(v);
        }
        map.push(v);
        if color_rec(phi, host, psi, map, next) {
            return true;
        }
        map.pop();
    }
    false
}

// ---------------------------------------------------------------------------
// Homogeneous sets
// ---------------------------------------------------------------------------

/// A maximum clique or independent set, whichever is larger (clique on ties).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousOpt {
    pub set: VertexSet,
    pub clique: bool,
}

pub fn max_homogeneous(g: &Graph) -> Result<HomogeneousOpt> {
    check_cap("n", g.n(), MAX_HOMOGENEOUS_N)?;
    let c = max_clique_small(g);
    let i = max_clique_small(&g.complement());
    let (mask, clique) = if c.count_ones() >= i.count_ones() {
        (c, true)
    } else {
        (i, false)
    };
    Ok(HomogeneousOpt {
        set: VertexSet::from_mask(g.n(), mask),
        clique,
    })
}

/// Maximum clique for `n <= 64` as a bitmask; branch and bound with a
/// greedy-colouring bound. Among maximum cliques the first one found in
/// ascending-vertex branching order wins.
pub fn max_clique_small(g: &Graph) -> u64 {
    assert!(g.n() <= 64);
    let rows: Vec<u64> = (0..g.n()).map(|v| g.row_mask(v)).collect();
    let all = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let mut best = 0u64;
    clique_rec(&rows, 0, all, &mut best);
    best
}

fn colour_bound(rows: &[u64], mut p: u64) -> u32 {
    let mut colours = 0;
    while p != 0 {
        colours += 1;
        let mut q = p;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1u64 << v) & !rows[v];
            p &= !(1u64 << v);
        }
    }
    colours
}

fn clique_rec(rows: &[u64], current: u64, mut p: u64, best: &mut u64) {
    if p == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    while p != 0 {
        if current.count_ones() + colour_bound(rows, p) <= best.count_ones() {
            return;
        }
        let v = p.trailing_zeros() as usize;
        clique_rec(rows, current | 1 << v, p & rows[v], best);
        p &= !(1u64 << v);
    }
}

// ---------------------------------------------------------------------------
// Sparse-or-dense and half-set optima
// ---------------------------------------------------------------------------

/// `e(S)` for every subset mask of a graph with `n <= 24` vertices.
fn subset_edge_table(g: &Graph) -> Vec<u16> {
    let n = g.n();
    let mut e = vec![0u16; 1 << n];
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        e[mask] = e[rest] + (g.row_mask(v) & rest as u64).count_ones() as u16;
    }
    e
}

/// `A` precedes `B` in lexicographic order of sorted member lists (equal
/// sizes assumed): the smallest element of the symmetric difference lies
/// in `A`.
fn lex_before(a: u64, b: u64) -> bool {
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) != 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseDenseOpt {
    pub set: VertexSet,
    pub density: Density,
}

/// A maximum `W` with `d(W) <= eps` or `d(W) >= 1 - eps`; sets of size
/// below 2 count as density 0. Ties: lexicographically first `W`.
pub fn best_sparse_or_dense(g: &Graph, eps: &Rational) -> Result<SparseDenseOpt> {
    check_cap("n", g.n(), MAX_SPARSE_DENSE_N)?;
    let n = g.n();
    let table = subset_edge_table(g);
    let one_minus = Rational::from_integer(1) - eps;
    for size in (2..=n).rev() {
        let pairs = choose2(size);
        let mut best: Option<u64> = None;
        for mask in 0u64..1 << n {
            if mask.count_ones() as usize != size {
                continue;
            }
            let d = Density::new(table[mask as usize] as u64, pairs);
            if (d.le(eps) || d.ge(&one_minus)) && best.is_none_or(|b| lex_before(mask, b)) {
                best = Some(mask);
            }
        }
        if let Some(mask) = best {
            return Ok(SparseDenseOpt {
                set: VertexSet::from_mask(n, mask),
                density: Density::new(table[mask as usize] as u64, pairs),
            });
        }
    }
    Ok(SparseDenseOpt {
        set: VertexSet::from_iter(n, (0..n).take(1)),
        density: Density::ZERO,
    })
}

/// A half-set together with its exact deviation from a target edge count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfSetOpt {
    pub set: VertexSet,
    pub edges: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub deviation: Rational,
}

/// `S` of size `⌊n/2⌋` maximising `|e(S) - n²/16|`.
pub fn best_half_subset(g: &Graph) -> Result<HalfSetOpt> {
    let n = g.n() as i128;
    best_half_subset_against(g, &Rational::new(n * n, 16))
}

/// `S` of size `⌊n/2⌋` maximising `|e(S) - target|`. Ties: the first mask
/// in increasing numeric order.
pub fn best_half_subset_against(g: &Graph, target: &Rational) -> Result<HalfSetOpt> {
    check_cap("n", g.n(), MAX_HALF_SUBSET_N)?;
    let n = g.n();
    let h = n / 2;
    let rows: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
    let edges_of = |mask: u64| -> u64 {
        let mut twice = 0u64;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            twice += (rows[v] & mask).count_ones() as u64;
            m &= m - 1;
        }
        twice / 2
    };
    let dev = |e: u64| (Rational::from_integer(e as i128) - target).abs();
    let mut best_mask = (1u64 << h) - 1;
    let mut best_e = edges_of(best_mask);
    let mut best_dev = dev(best_e);
    if h > 0 {
        let mut mask = best_mask;
        let limit = 1u64 << n;
        loop {
            // Gosper's hack: next mask with the same popcount.
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask >= limit {
                break;
            }
            let e = edges_of(mask);
            let d = dev(e);
            if d > best_dev {
                best_mask = mask;
                best_e = e;
                best_dev = d;
            }
        }
    }
    Ok(HalfSetOpt {
        set: VertexSet::from_mask(n, best_mask),
        edges: best_e,
        deviation: best_dev,
    })
}

// ---------------------------------------------------------------------------
// Induced Ramsey
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamseyVerdict {
    /// Every red/blue colouring contains a monochromatic induced copy.
    pub arrows: bool,
    /// When `arrows` is false: a colouring (colour 1 or 2 per edge of
    /// `G.edges()`) with no monochromatic induced copy.
    pub bad_coloring: Option<Vec<u8>>,
    pub induced_copies: usize,
}

/// Decides whether every 2-colouring of `E(G)` has a monochromatic induced
/// copy of `H`, by depth-first search for a colouring that avoids one.
pub fn exhaustive_induced_ramsey(g: &Graph, h: &PatternGraph) -> Result<RamseyVerdict> {
    let edges = g.edges();
    check_cap("e(G)", edges.len(), MAX_RAMSEY_EDGES)?;
    let index = |u: usize, v: usize| {
        edges
            .binary_search(&(u.min(v), u.max(v)))
            .expect("image pair is an edge")
    };
    let mut copies: BTreeSet<u32> = BTreeSet::new();
    let mut any_copy = false;
    for_each_induced(g, h, &mut |m| {
        any_copy = true;
        let mut mask = 0u32;
        for &(i, j) in &h.edges {
            mask |= 1 << index(m[i], m[j]);
        }
        copies.insert(mask);
        true
    });
    if !any_copy {
        return Ok(RamseyVerdict {
            arrows: false,
            bad_coloring: Some(vec![1; edges.len()]),
            induced_copies: 0,
        });
    }
    if copies.contains(&0) {
        // An edgeless pattern is monochromatic in every colouring.
        return Ok(RamseyVerdict {
            arrows: true,
            bad_coloring: None,
            induced_copies: copies.len(),
        });
    }
    // Each copy is checked when its highest edge gets coloured.
    let mut by_last: Vec<Vec<u32>> = vec![Vec::new(); edges.len()];
    for &c in &copies {
        by_last[31 - c.leading_zeros() as usize].push(c);
    }
    let mut red = 0u32;
    let found = avoid_rec(&by_last, 0, &mut red);
    Ok(RamseyVerdict {
        arrows: !found,
        bad_coloring: found.then(|| {
            (0..edges.len())
                .map(|e| if red >> e & 1 == 1 { 1 } else { 2 })
                .collect()
        }),
        induced_copies: copies.len(),
    })
}

fn avoid_rec(by_last: &[Vec<u32>], e: usize, red: &mut u32) -> bool {
    if e == by_last.len() {
        return true;
    }
    // Colour swap symmetry: edge 0 is red.
    let choices: &[bool] = if e == 0 { &[true] } else { &[true, false] };
    for &is_red in choices {
        if is_red {
            *red |= 1 << e;
        } else {
            *red &= !(1 << e);
        }
        let ok = by_last[e].iter().all(|&c| *red & c != c && *red & c != 0);
        if ok && avoid_rec(by_last, e + 1, red) {
            return true;
        }
    }
    *red &= !(1 << e);
    false
}

// ---------------------------------------------------------------------------
// Universality
// ---------------------------------------------------------------------------

/// Canonical form of the graph on `m <= 5` vertices given by `adj` (bit
/// `i*m+j`): the minimum relabelled upper-triangle code over all
/// permutations.
fn canonical_code(m: usize, has: &dyn Fn(usize, usize) -> bool) -> u32 {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = u32::MAX;
    permute_all(&mut perm, 0, &mut |p| {
        let mut code = 0u32;
        let mut bit = 0;
        for i in 0..m {
            for j in i + 1..m {
                if has(p[i], p[j]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
    });
    best
}

fn permute_all(p: &mut [usize], i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute_all(p, i + 1, f);
        p.swap(i, j);
    }
}

/// Canonical codes of all isomorphism classes on `m` vertices.
pub fn isomorphism_classes(m: usize) -> BTreeSet<u32> {
    assert!(m <= MAX_UNIVERSAL_K);
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let mut out = BTreeSet::new();
    for code in 0u32..1 << pairs.len() {
        let has = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            let idx = pairs.iter().position(|&p| p == (a, b)).unwrap();
            code >> idx & 1 == 1
        };
        out.insert(canonical_code(m, &has));
    }
    out
}

/// Whether every graph on at most `k` vertices occurs induced in `g`.
pub fn is_k_universal(g: &Graph, k: usize, budget: &OracleBudget) -> Result<bool> {
    check_cap("k", k, MAX_UNIVERSAL_K)?;
    if k > g.n() {
        return Ok(false);
    }
    for m in 1..=k {
        let want = isomorphism_classes(m);
        let subsets = binomial(g.n(), m);
        let factorial: u128 = (1..=m as u128).product();
        if subsets.saturating_mul(factorial) > budget.max_work {
            return Err(resource(
                format!("C({}, {m}) * {m}! canonical forms", g.n()),
                budget.max_work,
            ));
        }
        let mut seen = BTreeSet::new();
        let mut combo: Vec<usize> = (0..m).collect();
        loop {
            let has = |a: usize, b: usize| g.has_edge(combo[a], combo[b]);
            seen.insert(canonical_code(m, &has));
            if seen.len() == want.len() || !next_combination(&mut combo, g.n()) {
                break;
            }
        }
        if seen != want {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic order.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
