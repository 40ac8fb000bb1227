//! Equitable partition into parts that are each very sparse or very dense.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::density::{choose2, density_set, Density};
use crate::error::{Error, Result};
use crate::extract::sparse_dense::{sparse_or_dense_subset, trim_against, Side};
use crate::graph::Graph;
use crate::oracles::{self, OracleBudget};
use crate::pattern::PatternGraph;
use crate::rational::{self, le_scaled, rat, Rational};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub set: VertexSet,
    pub side: Side,
    pub density: Density,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquitablePartition {
    pub parts: Vec<Part>,
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    /// Claimed bound on the number of parts: `⌊n/s⌋` for the common core
    /// size `s` of the extracted sets.
    pub bound_c: usize,
    pub core_size: usize,
}

fn meets(edges: u64, size: usize, eps: &Rational, side: Side) -> bool {
    if size < 2 {
        return side == Side::Low;
    }
    let pairs = choose2(size) as usize;
    match side {
        Side::Low => le_scaled(edges as usize, eps, pairs),
        Side::High => le_scaled(pairs - edges as usize, eps, pairs),
    }
}

/// Removes vertices from `s` until it has `m` left without moving its
/// density away from `side`.
fn shrink(g: &Graph, s: &mut VertexSet, side: Side, m: usize) {
    match side {
        Side::Low => trim_against(g, s, &VertexSet::new(g.n()), m),
        Side::High => {
            let gc = g.complement();
            trim_against(&gc, s, &VertexSet::new(g.n()), m);
        }
    }
}

/// Slack of part `p` after absorbing `extra`, as `ε·C(s,2) − e` (Low) or
/// `e − (1−ε)·C(s,2)` (High), scaled by the denominator of `ε`.
fn slack(g: &Graph, p: &VertexSet, extra: usize, side: Side, eps: &Rational) -> i128 {
    let mut s = p.clone();
    s.insert(extra);
    let pairs = choose2(s.len()) as i128;
    let e = g.e_set(&s) as i128;
    match side {
        Side::Low => eps.numer() * pairs - e * eps.denom(),
        Side::High => e * eps.denom() - (eps.denom() - eps.numer()) * pairs,
    }
}

/// Spreads `residue` over the parts so that final sizes differ by at most
/// one, each vertex going to the part with the largest remaining slack among
/// those with the fewest extras. Returns `None` if some part breaks its
/// bound.
fn absorb(
    g: &Graph,
    cores: &[(VertexSet, Side)],
    residue: &VertexSet,
    eps: &Rational,
) -> Option<Vec<VertexSet>> {
    let l = cores.len();
    let mut parts: Vec<VertexSet> = cores.iter().map(|c| c.0.clone()).collect();
    let mut extras = vec![0usize; l];
    for v in residue.iter() {
        let fewest = *extras.iter().min().expect("at least one part");
        let j = (0..l).filter(|&j| extras[j] == fewest).max_by_key(|&j| {
            (
                slack(g, &parts[j], v, cores[j].1, eps),
                std::cmp::Reverse(j),
            )
        })?;
        parts[j].insert(v);
        extras[j] += 1;
    }
    let ok = parts
        .iter()
        .zip(cores)
        .all(|(p, c)| meets(g.e_set(p), p.len(), eps, c.1));
    ok.then_some(parts)
}

/// Repeated extraction at `ε/4` with a common core size; leftover vertices
/// are spread over the cores as soon as every core can absorb its share.
///
/// The instance must be `H`-free; this is checked with the exhaustive
/// counter within `budget`.
pub fn equitable_density_partition(
    g: &Graph,
    h: &PatternGraph,
    eps: &Rational,
    seed: u64,
    budget: &OracleBudget,
) -> Result<EquitablePartition> {
    if !(rational::in_open_unit(eps) && *eps < rat(1, 2)) {
        return Err(Error::param(format!("eps = {eps} must lie in (0,1/2)")));
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::pre("need at least 2 vertices"));
    }
    match oracles::count_labeled_induced(g, h, budget) {
        Ok(0) => {}
        Ok(count) => {
            return Err(Error::NotSparseInH {
                count,
                bound: "0 (the pattern must be absent)".into(),
            })
        }
        Err(Error::Resource { .. }) => {}
        Err(e) => return Err(e),
    }
    let quarter = eps / 4;
    let mut cores: Vec<(VertexSet, Side)> = Vec::new();
    let mut residue = VertexSet::full(n);
    let mut s = usize::MAX;
    let mut calls = 0u64;
    while !residue.is_empty() {
        if !cores.is_empty() {
            if let Some(parts) = absorb(g, &cores, &residue, eps) {
                return finish(g, parts, &cores, eps, s);
            }
        }
        if residue.len() >= 2 {
            let sub = g.induced_subgraph(&residue);
            let verts = residue.to_vec();
            let cert = sparse_or_dense_subset(&sub, h, &quarter, rng::derive(seed, calls))?;
            calls += 1;
            let mut w = VertexSet::from_iter(n, cert.set.iter().map(|i| verts[i]));
            if w.len() > s {
                shrink(g, &mut w, cert.side, s);
            }
            residue = residue.difference(&w);
            if w.len() < s {
                s = w.len();
                for (c, side) in cores.iter_mut() {
                    let before = c.clone();
                    shrink(g, c, *side, s);
                    residue.union_with(&before.difference(c));
                }
            }
            cores.push((w, cert.side));
        } else {
            // A single leftover vertex that fits nowhere: shrink every core.
            if s <= 2 {
                return Err(Error::SearchFailure {
                    attempts: calls as usize,
                    detail: "residue could not be absorbed at core size 2".into(),
                });
            }
            s -= 1;
            for (c, side) in cores.iter_mut() {
                let before = c.clone();
                shrink(g, c, *side, s);
                residue.union_with(&before.difference(c));
            }
        }
    }
    let parts = cores.iter().map(|c| c.0.clone()).collect();
    finish(g, parts, &cores, eps, s)
}

fn finish(
    g: &Graph,
    parts: Vec<VertexSet>,
    cores: &[(VertexSet, Side)],
    eps: &Rational,
    s: usize,
) -> Result<EquitablePartition> {
    let out = EquitablePartition {
        parts: parts
            .into_iter()
            .zip(cores)
            .map(|(set, c)| {
                let density = if set.len() >= 2 {
                    density_set(g, &set)?
                } else {
                    Density::ZERO
                };
                Ok(Part {
                    set,
                    side: c.1,
                    density,
                })
            })
            .collect::<Result<_>>()?,
        eps: *eps,
        bound_c: g.n() / s.max(1),
        core_size: s,
    };
    verify_partition(g, &out)?;
    Ok(out)
}

pub fn verify_partition(g: &Graph, p: &EquitablePartition) -> Result<()> {
    let n = g.n();
    let mut seen = VertexSet::new(n);
    for part in &p.parts {
        if !part.set.is_disjoint(&seen) {
            return Err(Error::Contract("partition parts overlap".into()));
        }
        seen.union_with(&part.set);
        if !meets(g.e_set(&part.set), part.set.len(), &p.eps, part.side) {
            return Err(Error::Contract(format!(
                "part of size {} misses its {:?} bound",
                part.set.len(),
                part.side
            )));
        }
    }
    if seen.len() != n {
        return Err(Error::Contract(
            "partition does not cover every vertex".into(),
        ));
    }
    let sizes = p.parts.iter().map(|q| q.set.len());
    let (lo, hi) = (sizes.clone().min().unwrap_or(0), sizes.max().unwrap_or(0));
    if hi - lo > 1 {
        return Err(Error::Contract(format!(
            "part sizes range over {lo}..={hi}"
        )));
    }
    if p.parts.len() > p.bound_c {
        return Err(Error::Contract(format!(
            "{} parts exceed the claimed bound {}",
            p.parts.len(),
            p.bound_c
        )));
    }
    Ok(())
}
