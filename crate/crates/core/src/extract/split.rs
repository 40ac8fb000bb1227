//! Embed-or-split: greedily build a labelled induced copy of `H` across a
//! random equipartition, or stop at the first step where too few vertices
//! are good and report the offending pair of sets.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rational::{self, big, big_ceil, big_int, ge_scaled, BigRational, Rational};
use crate::rng;
use crate::witness::{verify_embedding, verify_split, Embedding, Mode, SplitWitness};

pub const DEFAULT_RETRIES: usize = 64;
pub const DEFAULT_NODE_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitPolicy {
    /// Take the lowest good vertex at every step and return whatever the
    /// first partition yields.
    FirstOutcome,
    /// Search over good vertices depth-first for a split, resampling the
    /// partition when every branch completes an embedding.
    PreferSplit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionParams {
    /// `eps[i-1]` is the per-vertex threshold at step `i`, for `i` in `1..k`.
    pub eps: Vec<Rational>,
    /// `delta[i-1]` is the tolerated fraction of bad vertices at step `i`.
    pub delta: Vec<BigRational>,
    pub retries: usize,
    pub node_budget: usize,
    pub seed: u64,
    pub policy: SplitPolicy,
}

impl ExtractionParams {
    pub fn uniform(k: usize, eps: Rational, delta: Rational, seed: u64) -> Self {
        ExtractionParams {
            eps: vec![eps; k.saturating_sub(1)],
            delta: vec![big(&delta); k.saturating_sub(1)],
            retries: DEFAULT_RETRIES,
            node_budget: DEFAULT_NODE_BUDGET,
            seed,
            policy: SplitPolicy::FirstOutcome,
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.eps.len() != k - 1 || self.delta.len() != k - 1 {
            return Err(Error::param(format!(
                "need {} thresholds for a pattern on {k} vertices",
                k - 1
            )));
        }
        for e in &self.eps {
            rational::check_open_unit("eps_i", e)?;
        }
        let one = big_int(1);
        for d in &self.delta {
            if *d <= big_int(0) || *d >= one {
                return Err(Error::param("delta_i must lie in (0,1)"));
            }
        }
        if self.retries == 0 {
            return Err(Error::param("retry budget must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum SplitOutcome {
    Embedding(Embedding),
    Split(SplitWitness),
}

/// Claimed floors at (1-based) step `i`: `|A| >= δ_i⌊n/k⌋∏_{j<i}ε_j/(k−i)`
/// and `|B| >= ⌊n/k⌋∏_{j<i}ε_j`.
pub fn split_floors(n: usize, k: usize, params: &ExtractionParams, i: usize) -> (usize, usize) {
    let mut b = big_int(n / k);
    for e in &params.eps[..i - 1] {
        b *= big(e);
    }
    let a = &b * &params.delta[i - 1] / big_int(k - i);
    (big_ceil(&a), big_ceil(&b))
}

/// `Ñ(v, S)`: neighbours in `S` if `(i, j)` is an edge of `H`, otherwise
/// non-neighbours.
fn tilde(g: &Graph, h: &PatternGraph, i: usize, j: usize, v: usize, s: &VertexSet) -> VertexSet {
    if h.has_edge(i, j) {
        g.neighbours_in(v, s)
    } else {
        s.difference(&g.neighbourhood(v))
    }
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a PatternGraph,
    params: &'a ExtractionParams,
    nodes: usize,
    first_embedding: Option<Vec<usize>>,
}

enum Step {
    Split(SplitWitness),
    Embedded(Vec<usize>),
    /// Node budget exhausted, or every branch completed an embedding under
    /// `PreferSplit`.
    Exhausted,
}

impl Search<'_> {
    /// `cur[j]` for `j >= i` are the candidate sets `V_{j,i}`; `chosen`
    /// holds `v_0..v_{i-1}`.
    fn step(&mut self, i: usize, cur: &[VertexSet], chosen: &mut Vec<usize>) -> Step {
        let k = self.h.k;
        self.nodes += 1;
        if i == k - 1 {
            let Some(v) = cur[i].first() else {
                return Step::Exhausted;
            };
            chosen.push(v);
            let map = chosen.clone();
            chosen.pop();
            return Step::Embedded(map);
        }
        let eps = &self.params.eps[i];
        let cand = &cur[i];
        let mut good = Vec::new();
        // First violating later index for each bad vertex, grouped.
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
        for v in cand.iter() {
            let bad_j = (i + 1..k).find(|&j| {
                let t = tilde(self.g, self.h, i, j, v, &cur[j]).len();
                !ge_scaled(t, eps, cur[j].len())
            });
            match bad_j {
                Some(j) => groups[j].push(v),
                None => good.push(v),
            }
        }
        let bad = cand.len() - good.len();
        if big_int(bad) > &self.params.delta[i] * big_int(cand.len()) {
            // Largest group; ties go to the lowest index.
            let (j, members) = groups
                .iter()
                .enumerate()
                .rev()
                .max_by_key(|(_, m)| m.len())
                .expect("k >= 2");
            let step = i + 1;
            let (a_floor, b_floor) = split_floors(self.g.n(), k, self.params, step);
            return Step::Split(SplitWitness {
                index: 0,
                step,
                a: VertexSet::from_iter(self.g.n(), members.iter().copied()),
                b: cur[j].clone(),
                mode: if self.h.has_edge(i, j) {
                    Mode::Sparse
                } else {
                    Mode::Dense
                },
                eps: *eps,
                a_floor,
                b_floor,
            });
        }
        let branch_limit = match self.params.policy {
            SplitPolicy::FirstOutcome => 1,
            SplitPolicy::PreferSplit => good.len(),
        };
        for &v in good.iter().take(branch_limit) {
            if self.nodes >= self.params.node_budget {
                return Step::Exhausted;
            }
            let mut next = cur.to_vec();
            for j in i + 1..k {
                next[j] = tilde(self.g, self.h, i, j, v, &cur[j]);
            }
            chosen.push(v);
            let r = self.step(i + 1, &next, chosen);
            chosen.pop();
            match r {
                Step::Split(w) => return Step::Split(w),
                Step::Embedded(map) => {
                    if self.params.policy == SplitPolicy::FirstOutcome {
                        return Step::Embedded(map);
                    }
                    self.first_embedding.get_or_insert(map);
                }
                Step::Exhausted => {}
            }
        }
        Step::Exhausted
    }
}

/// Seeded equipartition into `k` parts whose sizes differ by at most one.
fn equipartition(n: usize, k: usize, seed: u64) -> Vec<VertexSet> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::seeded(seed));
    (0..k)
        .map(|i| {
            let lo = i * n / k;
            let hi = (i + 1) * n / k;
            VertexSet::from_iter(n, perm[lo..hi].iter().copied())
        })
        .collect()
}

/// Runs the embed-or-split procedure over up to `params.retries` seeded
/// partitions. Every returned certificate has been re-verified.
pub fn split_or_embed(
    g: &Graph,
    h: &PatternGraph,
    params: &ExtractionParams,
) -> Result<SplitOutcome> {
    let (n, k) = (g.n(), h.k);
    if k < 2 {
        return Err(Error::param("pattern needs at least 2 vertices"));
    }
    if n < k {
        return Err(Error::pre(format!("need n >= k, got n={n}, k={k}")));
    }
    params.validate(k)?;
    let mut fallback: Option<Vec<usize>> = None;
    for attempt in 0..params.retries {
        let parts = equipartition(n, k, rng::derive(params.seed, attempt as u64));
        let mut s = Search {
            g,
            h,
            params,
            nodes: 0,
            first_embedding: None,
        };
        match s.step(0, &parts, &mut Vec::new()) {
            Step::Split(w) => {
                verify_split(g, &w)?;
                return Ok(SplitOutcome::Split(w));
            }
            Step::Embedded(map) => return embedding_outcome(g, h, map),
            Step::Exhausted => {
                if fallback.is_none() {
                    fallback = s.first_embedding;
                }
            }
        }
    }
    match fallback {
        Some(map) => embedding_outcome(g, h, map),
        None => Err(Error::SearchFailure {
            attempts: params.retries,
            detail: format!(
                "node budget {} exhausted on every partition",
                params.node_budget
            ),
        }),
    }
}

fn embedding_outcome(g: &Graph, h: &PatternGraph, map: Vec<usize>) -> Result<SplitOutcome> {
    verify_embedding(g, None, h, &map, None)
        .map_err(|v| Error::Contract(format!("greedy embedding invalid: {}", v.reason)))?;
    Ok(SplitOutcome::Embedding(Embedding { map, color: None }))
}

/// Disjoint `A, B` with `|A|, |B| >= ε^{k-1}⌊n/k⌋` and every vertex of `A`
/// having at most `ε|B|` or at least `(1-ε)|B|` neighbours in `B`, for an
/// `H`-free `g`.
pub fn eh_pair(g: &Graph, h: &PatternGraph, eps: &Rational, seed: u64) -> Result<SplitWitness> {
    rational::check_open_unit("eps", eps)?;
    let (n, k) = (g.n(), h.k);
    if n < 2 {
        return Err(Error::pre("need at least 2 vertices"));
    }
    if k < 2 {
        return Err(Error::param("pattern needs at least 2 vertices"));
    }
    if n < k {
        // Two singletons always form a sparse or a dense pair.
        let mode = if g.has_edge(0, 1) {
            Mode::Dense
        } else {
            Mode::Sparse
        };
        return Ok(SplitWitness {
            index: 0,
            step: 1,
            a: VertexSet::from_iter(n, [0]),
            b: VertexSet::from_iter(n, [1]),
            mode,
            eps: *eps,
            a_floor: 1,
            b_floor: 1,
        });
    }
    let be = big(eps);
    let params = ExtractionParams {
        eps: vec![*eps; k - 1],
        delta: (1..k)
            .map(|i| {
                let mut d = big_int(k - i);
                for _ in 0..k - i {
                    d *= &be;
                }
                d
            })
            .collect(),
        retries: DEFAULT_RETRIES,
        node_budget: DEFAULT_NODE_BUDGET,
        seed,
        policy: SplitPolicy::FirstOutcome,
    };
    if params.delta.iter().any(|d| *d >= big_int(1)) {
        return Err(Error::param(format!("eps = {eps} too large for k = {k}")));
    }
    match split_or_embed(g, h, &params)? {
        SplitOutcome::Split(w) => Ok(w),
        SplitOutcome::Embedding(e) => Err(Error::NotHFree(Box::new(e))),
    }
}
