//! Homogeneous sets in `H`-free graphs: extract a very sparse or very dense
//! set, then search for an independent set (or clique) inside it.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::extract::sparse_dense::{sparse_or_dense_subset, DensityCertificate, Side};
use crate::graph::Graph;
use crate::pattern::PatternGraph;
use crate::rational::{self, rat, Rational};
use crate::witness::{is_clique, is_independent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomSource {
    /// Found inside the extracted set.
    Extracted,
    /// The neighbourhood-bisection baseline on the whole graph.
    Baseline,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomResult {
    pub set: VertexSet,
    pub clique: bool,
    pub source: HomSource,
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    pub extraction: DensityCertificate,
    /// `⌈½ log₂ n⌉`.
    pub guaranteed: usize,
}

/// `⌈½ log₂ n⌉` for `n >= 1`.
pub fn half_log_floor(n: usize) -> usize {
    // Smallest t with 4^t >= n.
    let mut t = 0;
    while (1u128 << (2 * t)) < n as u128 {
        t += 1;
    }
    t
}

/// `min(2^{-(1/5)√(log₂ n / k)}, 1/4)`, rounded down to a multiple of
/// `2^-20`.
pub fn hom_eps(n: usize, k: usize) -> Rational {
    let x = (-(((n.max(2) as f64).log2() / k as f64).sqrt()) / 5.0).exp2();
    rational::dyadic_floor(x, 20).min(rat(1, 4))
}

/// Greedy independent set in `g[s]`: repeatedly take the vertex of minimum
/// degree in what is left (lowest index on ties) and discard its
/// neighbours.
pub fn greedy_independent(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut left = s.clone();
    let mut out = VertexSet::new(g.n());
    while let Some(v) = left.iter().min_by_key(|&v| (g.degree_in(v, &left), v)) {
        out.insert(v);
        left = left.difference(&g.neighbourhood(v));
        left.remove(v);
    }
    out
}

/// Neighbourhood bisection: pick the lowest vertex, continue into the larger
/// of its neighbourhood and non-neighbourhood. Vertices followed by their
/// neighbourhood form a clique, the others an independent set, and the last
/// vertex joins both. Returns `(set, clique)`.
pub fn bisection_homogeneous(g: &Graph, s: &VertexSet) -> (VertexSet, bool) {
    let n = g.n();
    let mut left = s.clone();
    let mut clique = VertexSet::new(n);
    let mut indep = VertexSet::new(n);
    while let Some(v) = left.first() {
        left.remove(v);
        let nb = g.neighbours_in(v, &left);
        let non = left.difference(&nb);
        if left.is_empty() {
            clique.insert(v);
            indep.insert(v);
        } else if nb.len() >= non.len() {
            clique.insert(v);
            left = nb;
        } else {
            indep.insert(v);
            left = non;
        }
    }
    if clique.len() >= indep.len() {
        (clique, true)
    } else {
        (indep, false)
    }
}

/// Largest of the extracted-set search and the bisection baseline; always a
/// verified clique or independent set of size at least `⌈½ log₂ n⌉`.
pub fn hom_lower_bound(g: &Graph, h: &PatternGraph, seed: u64) -> Result<HomResult> {
    let n = g.n();
    if n < 2 {
        return Err(Error::pre("need at least 2 vertices"));
    }
    let eps = hom_eps(n, h.k);
    let cert = sparse_or_dense_subset(g, h, &eps, seed)?;
    // Work in the frame where W is sparse.
    let frame = match cert.side {
        Side::Low => g.clone(),
        Side::High => g.complement(),
    };
    let greedy = greedy_independent(&frame, &cert.set);
    let (bis, bis_clique) = bisection_homogeneous(&frame, &cert.set);
    let (inner, inner_clique_in_frame) = if greedy.len() >= bis.len() {
        (greedy, false)
    } else {
        (bis, bis_clique)
    };
    let inner_clique = inner_clique_in_frame ^ (cert.side == Side::High);
    let (base, base_clique) = bisection_homogeneous(g, &VertexSet::full(n));
    let (set, clique, source) = if inner.len() >= base.len() {
        (inner, inner_clique, HomSource::Extracted)
    } else {
        (base, base_clique, HomSource::Baseline)
    };
    let ok = if clique {
        is_clique(g, &set)
    } else {
        is_independent(g, &set)
    };
    let guaranteed = half_log_floor(n);
    if !ok || set.len() < guaranteed {
        return Err(Error::Contract(format!(
            "homogeneous search returned an invalid set of size {}",
            set.len()
        )));
    }
    Ok(HomResult {
        set,
        clique,
        source,
        eps,
        extraction: cert,
        guaranteed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_log_values() {
        assert_eq!(half_log_floor(1), 0);
        assert_eq!(half_log_floor(4), 1);
        assert_eq!(half_log_floor(5), 2);
        assert_eq!(half_log_floor(16), 2);
        assert_eq!(half_log_floor(17), 3);
    }

    #[test]
    fn complete_graph_is_its_own_answer() {
        let h = PatternGraph::named("p4").unwrap();
        let r = hom_lower_bound(&Graph::complete(16), &h, 0).unwrap();
        assert_eq!((r.set.len(), r.clique), (16, true));
    }

    #[test]
    fn bisection_on_a_path() {
        let (s, clique) = bisection_homogeneous(&Graph::path(7), &VertexSet::full(7));
        assert!(!clique);
        assert!(is_independent(&Graph::path(7), &s));
    }
}
