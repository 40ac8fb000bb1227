//! Greedy induced blue embedding across prescribed parts of a
//! pseudo-random host whose red edges are scarce between the parts of
//! pattern edges.
//!
//! Pattern vertices are placed along the degeneracy order ("positions").
//! After `i` placements the state keeps, for every later position `j`, a
//! candidate set `V_{j,i} ⊆ V_j`; [`check_conditions`] re-checks the four
//! step invariants from scratch.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::{EdgeColoring, BLUE, RED};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rational::{self, big, big_int, rat, BigRational, Rational};
use crate::witness::{verify_embedding, Embedding};

use super::check_red_blue;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedParams {
    #[serde(with = "crate::rational::serde_str")]
    pub p: Rational,
    /// Red-density budget between parts of pattern edges, `p/(1000k²)`.
    #[serde(with = "crate::rational::serde_str")]
    pub beta: Rational,
    /// Per-step growth of the red budget, `1/k`.
    #[serde(with = "crate::rational::serde_str")]
    pub eps1: Rational,
    /// Slack on neighbourhood sizes, `p/(10k)`.
    #[serde(with = "crate::rational::serde_str")]
    pub eps2: Rational,
    /// `(1−p)^k p^d`; reported, not used by the search.
    #[serde(with = "crate::rational::serde_big")]
    pub delta: BigRational,
}

impl EmbedParams {
    pub fn new(p: Rational, k: usize, d: usize) -> Result<Self> {
        if !(rational::in_open_unit(&p) && p <= rat(3, 4)) {
            return Err(Error::param(format!("p = {p} must lie in (0,3/4]")));
        }
        if k == 0 {
            return Err(Error::param("pattern must be non-empty"));
        }
        let k128 = k as i128;
        Ok(EmbedParams {
            p,
            beta: p / (1000 * k128 * k128),
            eps1: rat(1, k128),
            eps2: p / (10 * k128),
            delta: (big_int(1) - big(&p)).pow(k as i32) * big(&p).pow(d as i32),
        })
    }

    /// `(1+ε₁)^i β`, the red budget after `i` placements.
    pub fn red_budget(&self, i: usize) -> BigRational {
        (big_int(1) + big(&self.eps1)).pow(i as i32) * big(&self.beta)
    }
}

/// Red edge count between the candidate sets of a pattern edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedLedger {
    pub j: usize,
    pub l: usize,
    pub red: u64,
    pub pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedState {
    /// Number of placed vertices.
    pub step: usize,
    /// `labels[a]` is the pattern vertex at position `a`.
    pub labels: Vec<usize>,
    /// Host images of positions `0..step`.
    pub placed: Vec<usize>,
    /// `candidates[j]` is `V_{j,step}` for positions `j >= step`; earlier
    /// entries are empty.
    pub candidates: Vec<VertexSet>,
    /// One entry per pattern edge between unplaced positions.
    pub ledger: Vec<RedLedger>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedFailure {
    /// 1-based step at which no good vertex was found.
    pub step: usize,
    pub reason: String,
    /// `|V_{i+1,i}|`, and what survived the red filter and the degree filter.
    pub candidates: usize,
    pub after_red_filter: usize,
    /// The set scanned for a good vertex.
    pub surviving: VertexSet,
    /// State at the failure step; it satisfies all four invariants.
    pub state: Option<EmbedState>,
}

fn ge_big(count: usize, r: &BigRational, size: usize) -> bool {
    big_int(count) >= r * big_int(size)
}

fn le_big(count: u64, r: &BigRational, size: u64) -> bool {
    BigRational::from_integer(count.into()) <= r * BigRational::from_integer(size.into())
}

/// Pattern relabelled along its degeneracy order.
struct Frame {
    h: PatternGraph,
    labels: Vec<usize>,
    parts: Vec<VertexSet>,
}

fn frame(h: &PatternGraph, parts: &[VertexSet]) -> Frame {
    let (hh, labels) = h.relabel_by_degeneracy();
    let parts = labels.iter().map(|&o| parts[o].clone()).collect();
    Frame {
        h: hh,
        labels,
        parts,
    }
}

fn check_parts(g: &Graph, h: &PatternGraph, parts: &[VertexSet]) -> Result<()> {
    if parts.len() != h.k {
        return Err(Error::pre(format!(
            "need {} parts, got {}",
            h.k,
            parts.len()
        )));
    }
    let size = parts[0].len();
    let mut seen = VertexSet::new(g.n());
    for p in parts {
        if p.universe() != g.n() || p.len() != size || p.is_empty() || !p.is_disjoint(&seen) {
            return Err(Error::pre(
                "parts must be non-empty, disjoint and of equal size",
            ));
        }
        seen.union_with(p);
    }
    Ok(())
}

/// `Ñ(w, S)` (`edge`) or `S \ N(w)`, and its blue version `B̃(w, S)`.
fn tilde(g: &Graph, blue: &Graph, w: usize, s: &VertexSet, edge: bool) -> (VertexSet, VertexSet) {
    if edge {
        (g.neighbours_in(w, s), blue.neighbours_in(w, s))
    } else {
        let non = g.non_neighbours_in(w, s);
        (non.clone(), non)
    }
}

fn ledger(red: &Graph, h: &PatternGraph, cand: &[VertexSet], from: usize) -> Vec<RedLedger> {
    let mut out = Vec::new();
    for j in from..h.k {
        for l in j + 1..h.k {
            if h.has_edge(j, l) {
                out.push(RedLedger {
                    j,
                    l,
                    red: red.e_pair(&cand[j], &cand[l]),
                    pairs: (cand[j].len() * cand[l].len()) as u64,
                });
            }
        }
    }
    out
}

/// Re-checks the four invariants of `state` against the inputs:
/// placed pairs are induced and blue; placed vertices see each later
/// candidate set completely (blue) or not at all as the pattern demands;
/// `|V_{j,i}| >= (1−p−ε₂)^{i−D}(p−ε₂)^D |V_j|` with `D` the placed
/// neighbours of `j`; the red density between candidate sets of a pattern
/// edge is at most `(1+ε₁)^i β`.
pub fn check_conditions(
    g: &Graph,
    coloring: &EdgeColoring,
    h: &PatternGraph,
    parts: &[VertexSet],
    params: &EmbedParams,
    state: &EmbedState,
) -> Result<()> {
    let f = frame(h, parts);
    let bad = |m: String| {
        Err(Error::Contract(format!(
            "after {} placements: {m}",
            state.step
        )))
    };
    if f.labels != state.labels || state.candidates.len() != h.k || state.placed.len() != state.step
    {
        return bad("state shape does not match the pattern".into());
    }
    let (red, blue) = (coloring.layer(RED), coloring.layer(BLUE));
    let i = state.step;
    let hh = &f.h;
    for a in 0..i {
        if !f.parts[a].contains(state.placed[a]) {
            return bad(format!("position {a} placed outside its part"));
        }
        for b in a + 1..i {
            let (u, v) = (state.placed[a], state.placed[b]);
            let ok = if hh.has_edge(a, b) {
                blue.has_edge(u, v)
            } else {
                !g.has_edge(u, v)
            };
            if !ok {
                return bad(format!("condition 1 fails at positions ({a},{b})"));
            }
        }
        for j in i..h.k {
            let c = &state.candidates[j];
            let ok = if hh.has_edge(a, j) {
                blue.degree_in(state.placed[a], c) == c.len()
            } else {
                g.degree_in(state.placed[a], c) == 0
            };
            if !ok {
                return bad(format!("condition 2 fails between position {a} and V_{j}"));
            }
        }
    }
    let p = big(&params.p);
    let e2 = big(&params.eps2);
    let one = big_int(1);
    for j in i..h.k {
        let c = &state.candidates[j];
        if !c.is_subset(&f.parts[j]) {
            return bad(format!("V_{j} left its part"));
        }
        let dd = (0..i).filter(|&a| hh.has_edge(a, j)).count();
        let bound = (&one - &p - &e2).pow((i - dd) as i32) * (&p - &e2).pow(dd as i32);
        if !ge_big(c.len(), &bound, f.parts[j].len()) {
            return bad(format!("condition 3 fails: |V_{j}| = {}", c.len()));
        }
    }
    let budget = params.red_budget(i);
    let fresh = ledger(red, hh, &state.candidates, i);
    if fresh != state.ledger {
        return bad("red ledger is stale".into());
    }
    for e in &fresh {
        if !le_big(e.red, &budget, e.pairs) {
            return bad(format!(
                "condition 4 fails on ({},{}): {}/{} red",
                e.j, e.l, e.red, e.pairs
            ));
        }
    }
    Ok(())
}

/// Finds an induced blue copy of `h` with vertex `i` inside `parts[i]`.
///
/// At each step the candidates of the next position lose vertices with at
/// least `(ε₂/2)|V_j|` red edges into the set of a later pattern neighbour,
/// then vertices whose (non-)neighbourhood in some later set falls below
/// `(p_{ij} − ε₂/2)|V_j|`. The survivors are scanned in ascending order for
/// the first good vertex: blue (non-)neighbourhoods of size at least
/// `(p_{ij} − ε₂)|V_j|` whose pairwise red densities stay within the next
/// budget. No good vertex is an [`Error::EmbedFailure`].
pub fn embed_induced_monochromatic(
    g: &Graph,
    coloring: &EdgeColoring,
    h: &PatternGraph,
    parts: &[VertexSet],
    params: &EmbedParams,
) -> Result<Embedding> {
    check_red_blue(g, coloring)?;
    check_parts(g, h, parts)?;
    let f = frame(h, parts);
    let hh = &f.h;
    let k = h.k;
    let (red, blue) = (coloring.layer(RED), coloring.layer(BLUE));
    let mut state = EmbedState {
        step: 0,
        labels: f.labels.clone(),
        placed: Vec::with_capacity(k),
        candidates: f.parts.clone(),
        ledger: ledger(red, hh, &f.parts, 0),
    };
    let budget0 = params.red_budget(0);
    if let Some(e) = state
        .ledger
        .iter()
        .find(|e| !le_big(e.red, &budget0, e.pairs))
    {
        return Err(Error::pre(format!(
            "red density {}/{} between parts of pattern edge ({},{}) exceeds beta = {}",
            e.red, e.pairs, f.labels[e.j], f.labels[e.l], params.beta
        )));
    }
    check_conditions(g, coloring, h, parts, params, &state)?;

    let p = big(&params.p);
    let q = big_int(1) - &p;
    let half_e2 = big(&params.eps2) / big_int(2);
    let e2 = big(&params.eps2);
    for i in 0..k {
        let cand = state.candidates[i].clone();
        let later: Vec<usize> = (i + 1..k).collect();
        let p_of = |j: usize| if hh.has_edge(i, j) { &p } else { &q };
        let v1 = VertexSet::from_iter(
            g.n(),
            cand.iter().filter(|&w| {
                later.iter().all(|&j| {
                    let c = &state.candidates[j];
                    !hh.has_edge(i, j) || !ge_big(red.degree_in(w, c), &half_e2, c.len())
                })
            }),
        );
        let v2 = VertexSet::from_iter(
            g.n(),
            v1.iter().filter(|&w| {
                later.iter().all(|&j| {
                    let c = &state.candidates[j];
                    let (nt, _) = tilde(g, blue, w, c, hh.has_edge(i, j));
                    ge_big(nt.len(), &(p_of(j) - &half_e2), c.len())
                })
            }),
        );
        let next_budget = params.red_budget(i + 1);
        let good = v2.iter().find_map(|w| {
            let mut next = state.candidates.clone();
            for &j in &later {
                let c = &state.candidates[j];
                let (_, bt) = tilde(g, blue, w, c, hh.has_edge(i, j));
                if !ge_big(bt.len(), &(p_of(j) - &e2), c.len()) {
                    return None;
                }
                next[j] = bt;
            }
            let led = ledger(red, hh, &next, i + 1);
            led.iter()
                .all(|e| le_big(e.red, &next_budget, e.pairs))
                .then_some((w, next, led))
        });
        let Some((w, mut next, led)) = good else {
            return Err(Error::EmbedFailure(Box::new(EmbedFailure {
                step: i + 1,
                reason: format!(
                    "no good vertex among {} survivors of {} candidates for pattern vertex {}",
                    v2.len(),
                    cand.len(),
                    f.labels[i]
                ),
                candidates: cand.len(),
                after_red_filter: v1.len(),
                surviving: v2,
                state: Some(state),
            })));
        };
        next[i] = VertexSet::new(g.n());
        state.step = i + 1;
        state.placed.push(w);
        state.candidates = next;
        state.ledger = led;
        check_conditions(g, coloring, h, parts, params, &state)?;
    }
    let mut map = vec![0; k];
    for (a, &v) in state.placed.iter().enumerate() {
        map[f.labels[a]] = v;
    }
    verify_embedding(g, Some(coloring), h, &map, Some(BLUE)).map_err(|e| {
        Error::Contract(format!(
            "embedding fails at ({},{}): {}",
            e.i, e.j, e.reason
        ))
    })?;
    Ok(Embedding {
        map,
        color: Some(BLUE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudorandom::paley;

    fn blue(g: &Graph) -> EdgeColoring {
        EdgeColoring::monochromatic(g, 3, BLUE).unwrap()
    }

    fn thirds(n: usize) -> Vec<VertexSet> {
        let s = n / 3;
        (0..3)
            .map(|i| VertexSet::from_iter(n, i * s..(i + 1) * s))
            .collect()
    }

    #[test]
    fn constants_are_exact() {
        let p = EmbedParams::new(rat(1, 2), 3, 2).unwrap();
        assert_eq!(p.beta, rat(1, 18000));
        assert_eq!(p.eps1, rat(1, 3));
        assert_eq!(p.eps2, rat(1, 60));
        assert_eq!(p.delta, big(&rat(1, 32)));
        assert!(EmbedParams::new(rat(4, 5), 3, 1).is_err());
    }

    #[test]
    fn non_edge_and_edge_in_all_blue_paley() {
        let g = paley(13).unwrap();
        let parts = vec![
            VertexSet::from_iter(13, 0..6),
            VertexSet::from_iter(13, 6..12),
        ];
        for name in ["e2", "k2"] {
            let h = PatternGraph::named(name).unwrap();
            let params = EmbedParams::new(rat(1, 2), 2, h.degeneracy).unwrap();
            let e = embed_induced_monochromatic(&g, &blue(&g), &h, &parts, &params).unwrap();
            assert!(parts[0].contains(e.map[0]) && parts[1].contains(e.map[1]));
            assert_eq!(g.has_edge(e.map[0], e.map[1]), name == "k2");
        }
    }

    #[test]
    fn red_between_pattern_parts_is_rejected() {
        let g = Graph::complete(9);
        let col = EdgeColoring::monochromatic(&g, 3, RED).unwrap();
        let h = PatternGraph::named("p3").unwrap();
        let params = EmbedParams::new(rat(1, 2), 3, 1).unwrap();
        let r = embed_induced_monochromatic(&g, &col, &h, &thirds(9), &params);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn failure_state_satisfies_the_invariants() {
        // In K_9 every pair is adjacent, so the path's non-edge cannot be
        // placed.
        let g = Graph::complete(9);
        let h = PatternGraph::named("p3").unwrap();
        let params = EmbedParams::new(rat(1, 2), 3, 1).unwrap();
        match embed_induced_monochromatic(&g, &blue(&g), &h, &thirds(9), &params) {
            Err(Error::EmbedFailure(f)) => {
                let st = f.state.as_ref().unwrap();
                check_conditions(&g, &blue(&g), &h, &thirds(9), &params, st).unwrap();
            }
            other => panic!("expected an embedding failure, got {other:?}"),
        }
    }
}
