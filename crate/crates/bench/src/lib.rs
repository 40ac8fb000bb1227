//! Fixed inputs shared by the benchmarks, so every run measures the same
//! instances.

use ramsey_forge::coloring::{BLUE, RED};
use ramsey_forge::rational::rat;
use ramsey_forge::{rng, EdgeColoring, Graph, PatternGraph, VertexSet};

/// Random cograph on `n` vertices (a `P_4`-free host).
pub fn cograph(n: usize, seed: u64) -> Graph {
    fn build(lo: usize, hi: usize, s: u64, e: &mut Vec<(usize, usize)>) {
        if hi - lo <= 1 {
            return;
        }
        let mix = rng::derive(s, (lo * 7919 + hi) as u64);
        let cut = lo + 1 + (mix as usize) % (hi - lo - 1);
        build(lo, cut, mix, e);
        build(cut, hi, mix ^ 1, e);
        if mix >> 63 == 1 {
            e.extend((lo..cut).flat_map(|x| (cut..hi).map(move |y| (x, y))));
        }
    }
    let mut e = Vec::new();
    build(0, n, seed, &mut e);
    Graph::from_edges(n, &e).expect("edges in range")
}

pub fn gnp(n: usize, num: i128, den: i128, seed: u64) -> Graph {
    Graph::gnp(n, &rat(num, den), &mut rng::seeded(seed))
}

/// Red inside the two halves, blue across.
pub fn halves_coloring(g: &Graph) -> EdgeColoring {
    let h = g.n() / 2;
    EdgeColoring::of_host(g, 3, |u, v| if (u < h) == (v < h) { RED } else { BLUE })
        .expect("valid colouring")
}

pub fn equal_parts(n: usize, k: usize) -> Vec<VertexSet> {
    let m = n / k;
    (0..k)
        .map(|i| VertexSet::from_iter(n, i * m..(i + 1) * m))
        .collect()
}

pub fn pattern(name: &str) -> PatternGraph {
    PatternGraph::named(name).expect("built-in pattern")
}
