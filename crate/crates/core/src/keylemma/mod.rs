//! Sparse families across a sequence of graphs on one vertex set.
//!
//! A witness for `(α, ρ, ε, t)` on a set `U` gives, for every graph `i`, a
//! family of `t_i` disjoint subsets of `U`, all of size `⌈ρ|U|⌉`, whose
//! multi-density in graph `i` is at most `ε`, with `∏ t_i >= t`.
//! A [`PairFinder`] supplies the `t = 2` case; [`compose_sparse`] doubles
//! `t` at the cost of halving `ρ`.

pub mod finders;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::density::density_multi;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, ceil_mul, le_scaled, rat, Rational};

pub use finders::{ChunkFinder, ClusterFinder, GreedyFinder, HFreeFinder};

pub const MAX_LEVELS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SparseSpec {
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub rho: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    pub t: u64,
}

impl SparseSpec {
    /// Whether a witness for `self` also witnesses `weaker`.
    pub fn implies(&self, weaker: &SparseSpec) -> bool {
        weaker.alpha >= self.alpha
            && weaker.rho <= self.rho
            && weaker.eps >= self.eps
            && weaker.t <= self.t
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseWitness {
    pub u: VertexSet,
    pub part_size: usize,
    /// `families[i]` holds the disjoint sets for graph `i`.
    pub families: Vec<Vec<VertexSet>>,
    pub spec: SparseSpec,
}

impl SparseWitness {
    pub fn counts(&self) -> Vec<usize> {
        self.families.iter().map(Vec::len).collect()
    }

    pub fn product(&self) -> u128 {
        self.families.iter().map(|f| f.len() as u128).product()
    }
}

/// A disjoint pair `X, Y` of equal size with low density in graph `index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundPair {
    pub index: usize,
    pub x: VertexSet,
    pub y: VertexSet,
}

/// Supplies `(α, ρ, ε, 2)`-sparse pairs: given `U`, a target `size` and a
/// density bound `eps`, returns disjoint `X, Y ⊆ U` with `|X| = |Y| = size`
/// and `d_{G_i}(X, Y) <= eps`, or `None`.
pub trait PairFinder: Sync {
    fn name(&self) -> &str;
    fn find(
        &self,
        graphs: &[Graph],
        u: &VertexSet,
        size: usize,
        eps: &Rational,
    ) -> Option<FoundPair>;
}

fn check_graphs(graphs: &[Graph], u: &VertexSet) -> Result<()> {
    let Some(first) = graphs.first() else {
        return Err(Error::param("need at least one graph"));
    };
    if graphs.iter().any(|g| g.n() != first.n()) || u.universe() != first.n() {
        return Err(Error::param("graphs and U must share one vertex set"));
    }
    Ok(())
}

/// Calls the finder and re-verifies its pair exactly.
pub fn find_pair(
    graphs: &[Graph],
    finder: &dyn PairFinder,
    u: &VertexSet,
    rho: &Rational,
    eps: &Rational,
    level: usize,
) -> Result<FoundPair> {
    let size = ceil_mul(rho, u.len());
    let fail = |detail: String| Error::FinderFailure {
        level,
        u_size: u.len(),
        detail,
    };
    if 2 * size > u.len() {
        return Err(fail(format!("two disjoint sets of size {size} do not fit")));
    }
    let p = finder
        .find(graphs, u, size, eps)
        .ok_or_else(|| fail(format!("{} found no pair of size {size}", finder.name())))?;
    let ok = p.index < graphs.len()
        && p.x.len() == size
        && p.y.len() == size
        && p.x.is_subset(u)
        && p.y.is_subset(u)
        && p.x.is_disjoint(&p.y)
        && le_scaled(
            graphs[p.index].e_pair(&p.x, &p.y) as usize,
            eps,
            size * size,
        );
    if !ok {
        return Err(Error::Contract(format!(
            "{} returned a pair that fails verification at level {level}",
            finder.name()
        )));
    }
    Ok(p)
}

/// One set of the right size standing in for a graph with no family.
fn filler(u: &VertexSet, size: usize) -> Vec<VertexSet> {
    vec![u.take_lowest(size)]
}

/// Shrinks every member of `family` to `m` vertices without raising the
/// expected cross-edge count over uniform `m`-subsets. Members are trimmed
/// in order; each removal takes the vertex with the largest weighted degree
/// into the other members, weighting members by the inverse of their
/// current size. Ties remove the highest index.
pub fn trim_family(g: &Graph, family: &mut [VertexSet], m: usize) {
    for a in 0..family.len() {
        while family[a].len() > m {
            let sizes: Vec<u128> = family.iter().map(|s| s.len() as u128).collect();
            let scale: u128 = sizes
                .iter()
                .copied()
                .filter(|&s| s > 0)
                .fold(1, num_integer::lcm);
            let key = |v: usize| -> u128 {
                (0..family.len())
                    .filter(|&b| b != a)
                    .map(|b| g.degree_in(v, &family[b]) as u128 * (scale / sizes[b]))
                    .sum()
            };
            let v = family[a]
                .iter()
                .max_by_key(|&v| (key(v), v))
                .expect("non-empty");
            family[a].remove(v);
        }
    }
}

/// The `t = 1` witness: one set of size `⌈ρ|U|⌉` per graph, of
/// multi-density 0 by convention.
pub fn trivial_witness(
    graphs: &[Graph],
    u: &VertexSet,
    alpha: &Rational,
    rho: &Rational,
    eps: &Rational,
) -> Result<SparseWitness> {
    check_graphs(graphs, u)?;
    let size = ceil_mul(rho, u.len());
    if size == 0 || size > u.len() {
        return Err(Error::param("rho must give a non-empty set inside U"));
    }
    Ok(SparseWitness {
        u: u.clone(),
        part_size: size,
        families: graphs.iter().map(|_| filler(u, size)).collect(),
        spec: SparseSpec {
            alpha: *alpha,
            rho: *rho,
            eps: *eps,
            t: 1,
        },
    })
}

/// Builds a witness for `(α, ρρ'/2, ε, 2t)` on `u` from a finder pair at
/// `ε/4` and an inner witness generator for `(αρ/2, ρ', ε, t)`.
#[allow(clippy::too_many_arguments)]
pub fn compose_sparse(
    graphs: &[Graph],
    finder: &dyn PairFinder,
    alpha: &Rational,
    rho: &Rational,
    eps: &Rational,
    u: &VertexSet,
    level: usize,
    inner: &mut dyn FnMut(&VertexSet) -> Result<SparseWitness>,
) -> Result<SparseWitness> {
    check_graphs(graphs, u)?;
    let n = u.universe();
    let pair = find_pair(graphs, finder, u, rho, &(eps / 4), level)?;
    let gi = &graphs[pair.index];
    let half = ceil_mul(&rat(1, 2), pair.x.len());

    let eps_half = eps / 2;
    let mut x1 = VertexSet::from_iter(
        n,
        pair.x
            .iter()
            .filter(|&v| le_scaled(gi.degree_in(v, &pair.y), &eps_half, pair.y.len())),
    );
    if x1.len() < half {
        return Err(Error::Contract(format!("|X1| = {} below {half}", x1.len())));
    }
    x1.truncate(half);
    let wx = inner(&x1)?;

    let xi_union = wx.families[pair.index]
        .iter()
        .fold(VertexSet::new(n), |acc, s| acc.union(s));
    let mut y1 = VertexSet::from_iter(
        n,
        pair.y
            .iter()
            .filter(|&v| le_scaled(gi.degree_in(v, &xi_union), eps, xi_union.len())),
    );
    if y1.len() < half {
        return Err(Error::Contract(format!("|Y1| = {} below {half}", y1.len())));
    }
    y1.truncate(half);
    let wy = inner(&y1)?;

    if wx.part_size != wy.part_size || wx.spec != wy.spec {
        return Err(Error::Contract(
            "inner witnesses disagree on their parameters".into(),
        ));
    }
    let mut families: Vec<Vec<VertexSet>> = wx
        .families
        .iter()
        .zip(&wy.families)
        .enumerate()
        .map(|(j, (fx, fy))| {
            if j == pair.index {
                fx.iter().chain(fy).cloned().collect()
            } else if fy.len() > fx.len() {
                fy.clone()
            } else {
                fx.clone()
            }
        })
        .collect();

    let spec = SparseSpec {
        alpha: *alpha,
        rho: rho * wx.spec.rho / 2,
        eps: *eps,
        t: 2 * wx.spec.t,
    };
    let part_size = ceil_mul(&spec.rho, u.len());
    for (g, f) in graphs.iter().zip(families.iter_mut()) {
        trim_family(g, f, part_size);
    }
    let w = SparseWitness {
        u: u.clone(),
        part_size,
        families,
        spec,
    };
    verify_sparse_witness(graphs, &w)?;
    Ok(w)
}

/// Applies [`compose_sparse`] `h - 1` times below a finder pair, giving a
/// witness for `((2/ρ)^{h-1}α, 2^{1-h}ρ^h, ε, 2^h)`.
pub fn iterate_sparse(
    graphs: &[Graph],
    finder: &dyn PairFinder,
    alpha: &Rational,
    rho: &Rational,
    eps: &Rational,
    h: usize,
    u: &VertexSet,
) -> Result<SparseWitness> {
    check_graphs(graphs, u)?;
    if h == 0 || h > MAX_LEVELS {
        return Err(Error::param(format!("h must lie in 1..={MAX_LEVELS}")));
    }
    rational::check_open_unit("rho", rho)?;
    if *rho > rat(1, 2) {
        return Err(Error::param(
            "rho above 1/2 leaves no room for two disjoint sets",
        ));
    }
    rational::check_open_unit("eps", eps)?;
    iterate_level(graphs, finder, alpha, rho, eps, h, u, h)
}

#[allow(clippy::too_many_arguments)]
fn iterate_level(
    graphs: &[Graph],
    finder: &dyn PairFinder,
    alpha: &Rational,
    rho: &Rational,
    eps: &Rational,
    h: usize,
    u: &VertexSet,
    top: usize,
) -> Result<SparseWitness> {
    let level = top - h;
    let level_alpha = alpha * rational::pow(&(rat(2, 1) / rho), (h - 1) as u32);
    if h == 1 {
        let p = find_pair(graphs, finder, u, rho, &(eps / 4), level)?;
        let size = p.x.len();
        let families = (0..graphs.len())
            .map(|j| {
                if j == p.index {
                    vec![p.x.clone(), p.y.clone()]
                } else {
                    filler(u, size)
                }
            })
            .collect();
        // A pair at ε/4 is in particular a family at ε.
        let w = SparseWitness {
            u: u.clone(),
            part_size: size,
            families,
            spec: SparseSpec {
                alpha: level_alpha,
                rho: *rho,
                eps: *eps,
                t: 2,
            },
        };
        verify_sparse_witness(graphs, &w)?;
        return Ok(w);
    }
    let mut inner = |s: &VertexSet| iterate_level(graphs, finder, alpha, rho, eps, h - 1, s, top);
    compose_sparse(graphs, finder, &level_alpha, rho, eps, u, level, &mut inner)
}

/// Checks a witness against its own spec: sets inside `U`, disjoint within
/// each family, all of size `⌈ρ|U|⌉`, product of counts at least `t`, and
/// every family's multi-density at most `ε`.
pub fn verify_sparse_witness(graphs: &[Graph], w: &SparseWitness) -> Result<()> {
    let bad = |m: String| Err(Error::Contract(m));
    if w.families.len() != graphs.len() {
        return bad("one family per graph required".into());
    }
    let want = ceil_mul(&w.spec.rho, w.u.len());
    if w.part_size != want {
        return bad(format!(
            "part size {} differs from ⌈ρ|U|⌉ = {want}",
            w.part_size
        ));
    }
    for (i, (g, fam)) in graphs.iter().zip(&w.families).enumerate() {
        if fam.is_empty() {
            return bad(format!("graph {i} has an empty family"));
        }
        let mut seen = VertexSet::new(w.u.universe());
        for s in fam {
            if s.len() != want || !s.is_subset(&w.u) || !s.is_disjoint(&seen) {
                return bad(format!(
                    "family {i} has a set of wrong size, outside U, or overlapping"
                ));
            }
            seen.union_with(s);
        }
        if !density_multi(g, fam)?.le(&w.spec.eps) {
            return bad(format!("family {i} has multi-density above {}", w.spec.eps));
        }
    }
    if w.product() < w.spec.t as u128 {
        return bad(format!(
            "count product {} below t = {}",
            w.product(),
            w.spec.t
        ));
    }
    Ok(())
}

/// Re-targets a witness at a weaker spec by trimming every set to
/// `⌈ρ'|U|⌉`; the counts already dominate `t'`.
pub fn weaken(graphs: &[Graph], w: &SparseWitness, weaker: &SparseSpec) -> Result<SparseWitness> {
    if !w.spec.implies(weaker) {
        return Err(Error::param("target spec is not weaker"));
    }
    let size = ceil_mul(&weaker.rho, w.u.len());
    let mut families = w.families.clone();
    for (g, f) in graphs.iter().zip(families.iter_mut()) {
        trim_family(g, f, size);
    }
    let out = SparseWitness {
        u: w.u.clone(),
        part_size: size,
        families,
        spec: *weaker,
    };
    verify_sparse_witness(graphs, &out)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowDensityMember {
    pub index: usize,
    pub set: VertexSet,
    pub h: usize,
    pub parts: usize,
    pub density: crate::density::Density,
    pub witness: SparseWitness,
}

/// `⌈r·log₂(2/ε)⌉`.
pub fn levels_for(r: usize, eps: &Rational) -> usize {
    let x = r as f64 * (2.0 / rational::to_f64(eps)).log2();
    // Guard against the float landing just above an integer.
    let c = x.ceil();
    if (c - 1.0 - x).abs() < 1e-12 {
        (c - 1.0) as usize
    } else {
        c as usize
    }
}

/// A set of density at most `ε` in one of the graphs: the union of the
/// largest family of an `h`-level witness built at `ε/2`.
pub fn low_density_member(
    graphs: &[Graph],
    finder: &dyn PairFinder,
    rho: &Rational,
    eps: &Rational,
) -> Result<LowDensityMember> {
    rational::check_open_unit("eps", eps)?;
    let n = graphs.first().map_or(0, Graph::n);
    let h = levels_for(graphs.len(), eps);
    let alpha = rational::pow(&(rho / 2), (h.max(1) - 1) as u32);
    let w = iterate_sparse(
        graphs,
        finder,
        &alpha,
        rho,
        &(eps / 2),
        h,
        &VertexSet::full(n),
    )?;
    let (index, fam) = w
        .families
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, f)| f.len())
        .expect("at least one graph");
    let set = fam.iter().fold(VertexSet::new(n), |acc, s| acc.union(s));
    let density = crate::density::density_set(&graphs[index], &set)?;
    if !density.le(eps) {
        return Err(Error::Contract(format!(
            "union of {} parts has density {density} above {eps}",
            fam.len()
        )));
    }
    Ok(LowDensityMember {
        index,
        parts: fam.len(),
        set,
        h,
        density,
        witness: w,
    })
}
