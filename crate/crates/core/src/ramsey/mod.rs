//! Monochromatic induced copies in red/blue colourings of pseudo-random
//! hosts.
//!
//! Colourings use [`RED`] and [`BLUE`]; the host's non-edges play the role
//! of a third colour, [`crate::coloring::GREEN`], when the colouring is
//! viewed as a colouring of the complete graph.

pub mod embed;
pub mod pipeline;
pub mod psi;

use rand::Rng;

use crate::bitset::VertexSet;
use crate::coloring::{EdgeColoring, BLUE, GREEN, RED};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rng;

pub use crate::witness::verify_embedding;
pub use embed::{
    check_conditions, embed_induced_monochromatic, EmbedFailure, EmbedParams, EmbedState,
};
pub use pipeline::{
    cascade, induced_ramsey_pipeline, preset_host, BranchOutcome, BranchReport, Cascade,
    PipelineHit, PipelineParams, PipelineReport, Preset, PresetHost,
};
pub use psi::{psi_floor, psi_free_split, PsiFreeFinder, PsiOutcome};

/// A red/blue colouring of exactly the edges of `g`.
pub(crate) fn check_red_blue(g: &Graph, coloring: &EdgeColoring) -> Result<()> {
    if coloring.n() != g.n() || coloring.colors() < BLUE {
        return Err(Error::param(
            "colouring must cover the host with colours red and blue",
        ));
    }
    if coloring.layer(GREEN).edge_count() != 0
        || (BLUE + 1..=coloring.colors()).any(|c| coloring.layer(c).edge_count() != 0)
    {
        return Err(Error::param(format!(
            "only colours {RED} (red) and {BLUE} (blue) may be used"
        )));
    }
    if coloring.host() != *g {
        return Err(Error::param("coloured pairs differ from the host's edges"));
    }
    Ok(())
}

/// Red/blue colouring of `g` with every edge independently red with
/// probability `red_num/red_den`.
pub fn random_coloring(g: &Graph, red_num: u32, red_den: u32, seed: u64) -> EdgeColoring {
    let mut r = rng::seeded(seed);
    EdgeColoring::of_host(g, BLUE, |_, _| {
        if r.gen_ratio(red_num, red_den) {
            RED
        } else {
            BLUE
        }
    })
    .expect("colours in range")
}

/// Random red/blue colouring that respects the embedder's red budget: edges
/// between the parts of a pattern edge are red only up to
/// `⌊β |V_j||V_l|⌋` per pair of parts, every other edge is red with
/// probability 1/2.
pub fn budget_coloring(
    g: &Graph,
    h: &PatternGraph,
    parts: &[VertexSet],
    beta: &crate::Rational,
    seed: u64,
) -> EdgeColoring {
    let n = g.n();
    let mut part_of = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for v in p.iter() {
            part_of[v] = i;
        }
    }
    let mut r = rng::seeded(seed);
    let mut left: Vec<Vec<usize>> = parts
        .iter()
        .map(|a| {
            parts
                .iter()
                .map(|b| crate::rational::floor_mul(beta, a.len() * b.len()))
                .collect()
        })
        .collect();
    EdgeColoring::of_host(g, BLUE, |u, v| {
        let (a, b) = (part_of[u], part_of[v]);
        let guarded = a != usize::MAX && b != usize::MAX && a != b && h.has_edge(a, b);
        let want_red = r.gen_bool(0.5);
        if !guarded {
            return if want_red { RED } else { BLUE };
        }
        if want_red && left[a][b] > 0 {
            left[a][b] -= 1;
            left[b][a] -= 1;
            RED
        } else {
            BLUE
        }
    })
    .expect("colours in range")
}
