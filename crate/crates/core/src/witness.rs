//! Certificates shared by the extraction, discrepancy and Ramsey modules,
//! together with their independent checkers.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rational::{ge_scaled, le_scaled, Rational};

/// Injective map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    /// `map[i]` is the image of pattern vertex `i`.
    pub map: Vec<usize>,
    /// Claimed colour of every image edge, when a monochromatic copy is
    /// claimed.
    pub color: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sparse,
    Dense,
}

/// Two disjoint sets with a per-vertex degree bound from `A` into `B`.
///
/// `Sparse`: every `a ∈ A` has at most `eps·|B|` neighbours in `B`.
/// `Dense`: every `a ∈ A` has at least `(1-eps)·|B|` neighbours in `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    /// Graph or colour the bound refers to.
    pub index: usize,
    /// Step of the greedy embedding at which the split was found (1-based).
    pub step: usize,
    pub a: VertexSet,
    pub b: VertexSet,
    pub mode: Mode,
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    /// Claimed lower bounds on `|A|` and `|B|`, rounded up to integers.
    pub a_floor: usize,
    pub b_floor: usize,
}

/// Checks a split witness against `g` exactly, including the size floors.
pub fn verify_split(g: &Graph, w: &SplitWitness) -> Result<()> {
    if w.a.universe() != g.n() || w.b.universe() != g.n() {
        return Err(Error::Contract(
            "split sets index a different universe".into(),
        ));
    }
    if w.a.is_empty() || w.b.is_empty() || !w.a.is_disjoint(&w.b) {
        return Err(Error::Contract(
            "split sets must be non-empty and disjoint".into(),
        ));
    }
    if w.a.len() < w.a_floor || w.b.len() < w.b_floor {
        return Err(Error::Contract(format!(
            "split sizes {}/{} below claimed floors {}/{}",
            w.a.len(),
            w.b.len(),
            w.a_floor,
            w.b_floor
        )));
    }
    let nb = w.b.len();
    let one_minus = Rational::from_integer(1) - w.eps;
    for v in w.a.iter() {
        let d = g.degree_in(v, &w.b);
        let ok = match w.mode {
            Mode::Sparse => le_scaled(d, &w.eps, nb),
            Mode::Dense => ge_scaled(d, &one_minus, nb),
        };
        if !ok {
            return Err(Error::Contract(format!(
                "vertex {v} has {d} neighbours in B (|B|={nb}), violating {:?} bound {}",
                w.mode, w.eps
            )));
        }
    }
    Ok(())
}

/// First pair of pattern vertices whose image disagrees with the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingViolation {
    pub i: usize,
    pub j: usize,
    pub reason: String,
}

/// Checks that `map` is an induced copy of `h` in `g`; if `coloring` and a
/// colour are given, also that every image edge has that colour.
pub fn verify_embedding(
    g: &Graph,
    coloring: Option<&EdgeColoring>,
    h: &PatternGraph,
    map: &[usize],
    color: Option<u8>,
) -> std::result::Result<(), EmbeddingViolation> {
    let bad = |i, j, reason: String| Err(EmbeddingViolation { i, j, reason });
    if map.len() != h.k {
        return bad(0, 0, format!("map has {} entries for k={}", map.len(), h.k));
    }
    for (i, &v) in map.iter().enumerate() {
        if v >= g.n() {
            return bad(i, i, format!("image {v} out of range"));
        }
    }
    for i in 0..h.k {
        for j in i + 1..h.k {
            let (u, v) = (map[i], map[j]);
            if u == v {
                return bad(i, j, format!("vertices {i} and {j} share image {u}"));
            }
            let want = h.has_edge(i, j);
            if g.has_edge(u, v) != want {
                let what = if want { "missing edge" } else { "extra edge" };
                return bad(i, j, format!("{what} between images {u} and {v}"));
            }
            if let (true, Some(c), Some(col)) = (want, color, coloring) {
                let got = col.color(u, v);
                if got != c {
                    return bad(i, j, format!("edge {u}-{v} has colour {got}, expected {c}"));
                }
            }
        }
    }
    Ok(())
}

/// Checks that `map` realises the colouring pattern `psi` of `K_k` inside
/// the colouring `phi` of `K_n`: `phi(map i, map j) == psi(i, j)`.
pub fn verify_color_pattern(
    phi: &EdgeColoring,
    psi: &EdgeColoring,
    map: &[usize],
) -> std::result::Result<(), EmbeddingViolation> {
    let k = psi.n();
    if map.len() != k {
        return Err(EmbeddingViolation {
            i: 0,
            j: 0,
            reason: "map length differs from pattern size".into(),
        });
    }
    for i in 0..k {
        for j in i + 1..k {
            let (u, v) = (map[i], map[j]);
            if u == v || phi.color(u, v) != psi.color(i, j) {
                return Err(EmbeddingViolation {
                    i,
                    j,
                    reason: format!(
                        "pair ({u},{v}) has colour {} but pattern wants {}",
                        phi.color(u, v),
                        psi.color(i, j)
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Homogeneous set certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homogeneous {
    pub set: VertexSet,
    pub clique: bool,
}

pub fn is_clique(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|v| g.degree_in(v, s) == s.len() - 1)
}

pub fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|v| g.degree_in(v, s) == 0)
}

pub fn is_homogeneous(g: &Graph, s: &VertexSet) -> bool {
    s.len() <= 1 || is_clique(g, s) || is_independent(g, s)
}
