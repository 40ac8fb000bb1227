use crate::error::{Error, Result};
use crate::graph::Graph;

/// Conventional colour ids used by the induced-Ramsey pipeline.
pub const GREEN: u8 = 1;
pub const RED: u8 = 2;
pub const BLUE: u8 = 3;

/// An edge colouring with colours `1..=r`, either of a host graph or of the
/// complete graph `K_n`. Colour 0 means "not an edge of the host".
///
/// Each colour class is kept as its own bitset graph so that colour-matched
/// neighbourhoods are a single row intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    r: u8,
    complete: bool,
    layers: Vec<Graph>,
}

impl EdgeColoring {
    /// Colours each edge `u < v` of `host` with `f(u, v) ∈ 1..=r`.
    pub fn of_host(host: &Graph, r: u8, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        if r == 0 {
            return Err(Error::param("a colouring needs r >= 1"));
        }
        let n = host.n();
        let mut layers = vec![Graph::empty(n); r as usize];
        for (u, v) in host.edges() {
            let c = f(u, v);
            if c == 0 || c > r {
                return Err(Error::param(format!(
                    "colour {c} on ({u},{v}) outside 1..={r}"
                )));
            }
            layers[c as usize - 1].set_edge(u, v);
        }
        Ok(EdgeColoring {
            n,
            r,
            complete: host.edge_count() == (n * n.saturating_sub(1) / 2) as u64,
            layers,
        })
    }

    /// Colours every pair of `K_n`.
    pub fn of_complete(n: usize, r: u8, f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        Self::of_host(&Graph::complete(n), r, f)
    }

    /// Every edge of `host` gets colour `c`.
    pub fn monochromatic(host: &Graph, r: u8, c: u8) -> Result<Self> {
        Self::of_host(host, r, |_, _| c)
    }

    /// Builds a colouring from per-colour layers, which must be pairwise
    /// edge-disjoint.
    pub fn from_layers(layers: Vec<Graph>) -> Result<Self> {
        let r = layers.len();
        if r == 0 || r > u8::MAX as usize {
            return Err(Error::param("colour count out of range"));
        }
        let n = layers[0].n();
        let mut seen = Graph::empty(n);
        for l in &layers {
            if l.n() != n {
                return Err(Error::param("colour layers disagree on vertex count"));
            }
            for (u, v) in l.edges() {
                if seen.has_edge(u, v) {
                    return Err(Error::param(format!("pair ({u},{v}) has two colours")));
                }
                seen.set_edge(u, v);
            }
        }
        let complete = seen.edge_count() == (n * n.saturating_sub(1) / 2) as u64;
        Ok(EdgeColoring {
            n,
            r: r as u8,
            complete,
            layers,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn colors(&self) -> u8 {
        self.r
    }

    /// Whether every pair carries a colour.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Colour of the pair `{u, v}`, or 0 if it is not a host edge.
    pub fn color(&self, u: usize, v: usize) -> u8 {
        if u == v {
            return 0;
        }
        for (i, l) in self.layers.iter().enumerate() {
            if l.has_edge(u, v) {
                return i as u8 + 1;
            }
        }
        0
    }

    /// Graph of colour `c` (`1..=r`).
    pub fn layer(&self, c: u8) -> &Graph {
        &self.layers[c as usize - 1]
    }

    /// The host graph: union of all colour classes.
    pub fn host(&self) -> Graph {
        Graph::from_fn(self.n, |u, v| self.color(u, v) != 0)
    }

    /// Exchanges colours `a` and `b`.
    pub fn swap_colors(&self, a: u8, b: u8) -> Self {
        let mut layers = self.layers.clone();
        layers.swap(a as usize - 1, b as usize - 1);
        EdgeColoring {
            layers,
            ..self.clone()
        }
    }

    /// Colouring of `K_n` that keeps this colouring on host edges and
    /// gives every non-edge the fresh colour `r + 1`.
    pub fn pad_non_edges(&self) -> Self {
        let host = self.host();
        let mut layers = self.layers.clone();
        layers.push(host.complement());
        EdgeColoring {
            n: self.n,
            r: self.r + 1,
            complete: true,
            layers,
        }
    }

    /// Colour triples `(u, v, c)` with `u < v`, in lexicographic order.
    pub fn triples(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = self.color(u, v);
                if c != 0 {
                    out.push((u, v, c));
                }
            }
        }
        out
    }

    /// Restriction to the vertex list `verts`, relabelled `0..len`.
    pub fn restrict(&self, verts: &[usize]) -> Self {
        let layers = self
            .layers
            .iter()
            .map(|l| Graph::from_fn(verts.len(), |i, j| l.has_edge(verts[i], verts[j])))
            .collect();
        let m = verts.len();
        let mut out = EdgeColoring {
            n: m,
            r: self.r,
            complete: false,
            layers,
        };
        out.complete = (0..m).all(|i| (i + 1..m).all(|j| out.color(i, j) != 0));
        out
    }
}
