use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest pattern the exhaustive routines accept.
pub const MAX_PATTERN: usize = 16;

/// A small pattern graph `H` on `0..k` with its degeneracy data and an
/// optimal proper colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternGraph {
    pub name: String,
    #[serde(skip)]
    graph: Graph,
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
    pub degeneracy: usize,
    /// Every vertex has at most `degeneracy` neighbours earlier in this order.
    pub order: Vec<usize>,
    pub chromatic_number: usize,
    /// Colour class of each vertex, `0..chromatic_number`.
    pub coloring: Vec<usize>,
}

impl PatternGraph {
    pub fn new(name: impl Into<String>, graph: Graph) -> Result<Self> {
        let k = graph.n();
        if k == 0 || k > MAX_PATTERN {
            return Err(Error::param(format!(
                "pattern size {k} outside 1..={MAX_PATTERN}"
            )));
        }
        let (degeneracy, order) = degeneracy_order(&graph);
        let (chromatic_number, coloring) = optimal_coloring(&graph);
        Ok(PatternGraph {
            name: name.into(),
            edges: graph.edges(),
            graph,
            k,
            degeneracy,
            order,
            chromatic_number,
            coloring,
        })
    }

    /// Built-in patterns: `k<n>`, `p<n>` (path), `c<n>`, `e<n>`/`empty<n>`,
    /// `star<n>` (`n` leaves), `k<a>,<b>`.
    pub fn named(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let num = |prefix: &str| -> Option<usize> { lower.strip_prefix(prefix)?.parse().ok() };
        let g = if let Some((a, b)) = lower
            .strip_prefix('k')
            .and_then(|r| r.split_once(','))
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
        {
            Graph::complete_bipartite(a, b)
        } else if let Some(m) = num("star") {
            Graph::star(m)
        } else if let Some(m) = num("empty").or_else(|| num("e")) {
            Graph::empty(m)
        } else if let Some(m) = num("k") {
            Graph::complete(m)
        } else if let Some(m) = num("p") {
            Graph::path(m)
        } else if let Some(m) = num("c") {
            if m < 3 {
                return Err(Error::param(format!(
                    "cycle pattern needs >= 3 vertices: {name}"
                )));
            }
            Graph::cycle(m)
        } else {
            return Err(Error::param(format!("unknown pattern name {name:?}")));
        };
        Self::new(lower, g)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(i, j)
    }

    pub fn complement(&self) -> PatternGraph {
        Self::new(format!("co-{}", self.name), self.graph.complement())
            .expect("complement has the same size")
    }

    /// Number of `j < i` adjacent to `i`.
    pub fn back_degree(&self, i: usize) -> usize {
        (0..i).filter(|&j| self.has_edge(i, j)).count()
    }

    /// Whether the identity labelling already witnesses the degeneracy.
    pub fn is_degeneracy_labelled(&self) -> bool {
        (0..self.k).all(|i| self.back_degree(i) <= self.degeneracy)
    }

    /// The same pattern relabelled along its degeneracy order, with the map
    /// from new labels to old labels.
    pub fn relabel_by_degeneracy(&self) -> (PatternGraph, Vec<usize>) {
        let mut new_of_old = vec![0; self.k];
        for (new, &old) in self.order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let g = self.graph.permute(&new_of_old);
        let p = PatternGraph::new(self.name.clone(), g).expect("same size");
        (p, self.order.clone())
    }
}

/// Min-degree elimination; the removed vertex goes to the end of the list.
/// Ties pick the lowest index.
pub fn degeneracy_order(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut alive: Vec<bool> = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut rev = Vec::with_capacity(n);
    let mut d = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("a live vertex remains");
        d = d.max(deg[v]);
        alive[v] = false;
        rev.push(v);
        for u in g.neighbourhood(v).iter() {
            if alive[u] {
                deg[u] -= 1;
            }
        }
    }
    rev.reverse();
    (d, rev)
}

/// Exact chromatic number by backtracking; fine for pattern sizes.
pub fn optimal_coloring(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    if n == 0 {
        return (0, Vec::new());
    }
    for c in 1..=n {
        let mut col = vec![usize::MAX; n];
        if color_backtrack(g, 0, c, &mut col) {
            return (c, col);
        }
    }
    unreachable!("n colours always suffice")
}

fn color_backtrack(g: &Graph, v: usize, c: usize, col: &mut [usize]) -> bool {
    if v == col.len() {
        return true;
    }
    // Symmetry breaking: vertex v may open at most one new colour.
    let used = col[..v].iter().copied().max().map_or(0, |m| m + 1);
    for x in 0..c.min(used + 1) {
        if (0..v).all(|u| !(g.has_edge(u, v) && col[u] == x)) {
            col[v] = x;
            if color_backtrack(g, v + 1, c, col) {
                return true;
            }
        }
    }
    col[v] = usize::MAX;
    false
}
