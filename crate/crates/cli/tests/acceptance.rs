//! Acceptance suite. Prints one `criterion N: PASS|FAIL (detail)` line per
//! criterion and exits non-zero if any fails. Every check recomputes its
//! claims with code local to this file wherever the library's own verifier
//! would otherwise be the only judge.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ramsey_forge::atlas::{hereditary_classes, is_connected};
use ramsey_forge::coloring::{BLUE, RED};
use ramsey_forge::discrepancy::{
    deviation_witness, find_clique, low_discrepancy_graph, WitnessMethod,
};
use ramsey_forge::extract::hom::hom_lower_bound;
use ramsey_forge::extract::sparse_dense::{sparse_or_dense_subset, ExtractMethod, Side};
use ramsey_forge::keylemma::{
    compose_sparse, iterate_sparse, trivial_witness, ChunkFinder, ClusterFinder, GreedyFinder,
    PairFinder, SparseWitness,
};
use ramsey_forge::oracles::{
    best_half_subset, best_sparse_or_dense, count_labeled_induced, exhaustive_induced_ramsey,
    is_h_free, max_clique_small, max_homogeneous, OracleBudget,
};
use ramsey_forge::pseudorandom::{
    certify_mixing, dgt, is_prime, paley, regular_degree, spectral_profile, CertMode, Lambda,
};
use ramsey_forge::ramsey::{
    budget_coloring, check_conditions, embed_induced_monochromatic, induced_ramsey_pipeline,
    EmbedParams, PipelineParams,
};
use ramsey_forge::rational::rat;
use ramsey_forge::{io, rng, EdgeColoring, Error, Graph, PatternGraph, Rational, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn pattern(name: &str) -> PatternGraph {
    PatternGraph::named(name).expect("built-in pattern")
}

/// Edges inside `set`, by pairwise adjacency queries.
fn edges_inside(g: &Graph, set: &[usize]) -> u64 {
    let mut e = 0;
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            e += g.has_edge(u, v) as u64;
        }
    }
    e
}

fn members(s: &VertexSet) -> Vec<usize> {
    s.iter().collect()
}

/// Random cograph: split the vertex range, build both halves, then join
/// them completely or leave them apart.
fn random_cograph(n: usize, seed: u64) -> Graph {
    fn build(vs: &[usize], r: &mut rng::Rng, e: &mut Vec<(usize, usize)>) {
        if vs.len() <= 1 {
            return;
        }
        let cut = r.gen_range(1..vs.len());
        let (a, b) = vs.split_at(cut);
        build(a, r, e);
        build(b, r, e);
        if r.gen_bool(0.5) {
            e.extend(a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))));
        }
    }
    let mut r = rng::seeded(seed);
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(&mut r);
    let mut e = Vec::new();
    build(&vs, &mut r, &mut e);
    Graph::from_edges(n, &e).expect("edges in range")
}

/// Random bipartite graph (triangle-free) with a random side split.
fn random_bipartite(n: usize, seed: u64) -> Graph {
    let mut r = rng::seeded(seed);
    let side: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
    Graph::from_fn(n, |u, v| side[u] != side[v] && r.gen_bool(0.5))
}

// ---------------------------------------------------------------------------

fn paley_certification() -> Outcome {
    let start = Instant::now();
    let g = paley(13).unwrap();
    let cert = certify_mixing(
        &g,
        &rat(1, 2),
        Lambda::Sqrt(rat(13, 1)),
        CertMode::Exhaustive,
    )
    .unwrap();
    // Ordered pairs of disjoint non-empty sets: 3^13 − 2·2^13 + 1.
    let pairs = 3u64.pow(13) - 2 * (1 << 13) + 1;
    let prof = spectral_profile(&g).unwrap();
    let s13 = 13f64.sqrt();
    let mut want = vec![6.0];
    want.extend([(s13 - 1.0) / 2.0; 6]);
    want.extend([(-s13 - 1.0) / 2.0; 6]);
    let err = prof
        .eigenvalues
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = cert.pass
        && cert.violations == 0
        && cert.pairs_checked == pairs
        && prof.eigenvalues.len() == 13
        && err <= 1e-9
        && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} pairs, {} violations, spectrum error {err:.1e}, {:.2}s",
            cert.pairs_checked,
            cert.violations,
            elapsed.as_secs_f64()
        ),
    )
}

fn dgt_spectra() -> Outcome {
    let start = Instant::now();
    let mut graphs = 0;
    let mut bad = Vec::new();
    for r in (2..=7).filter(|&r| is_prime(r as u64)) {
        for t in 1..=r + 1 {
            graphs += 1;
            let g = dgt(r, t).unwrap();
            let prof = spectral_profile(&g).unwrap();
            let d = t * (r - 1);
            let regular = regular_degree(&g) == Some(d) && (0..g.n()).all(|v| g.degree(v) == d);
            let (lo, hi) = (-(t as f64), r as f64 - t as f64);
            let top_ok = (prof.eigenvalues[0] - d as f64).abs() <= 1e-9;
            let rest_ok = prof.eigenvalues[1..]
                .iter()
                .all(|&x| (x - lo).abs() <= 1e-9 || (x - hi).abs() <= 1e-9);
            if !(regular && top_ok && rest_ok) {
                bad.push(format!("r={r} t={t}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "{graphs} graphs, failures {bad:?}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn extraction_soundness() -> Outcome {
    let start = Instant::now();
    let (mut runs, mut substituted) = (0, 0);
    let mut bad = Vec::new();
    for name in ["p4", "k3"] {
        let h = pattern(name);
        let atlas = hereditary_classes(9, &|g: &Graph| is_h_free(g, &h));
        for (n, classes) in atlas.iter().enumerate().skip(2) {
            for (idx, g) in classes.iter().enumerate().filter(|(_, g)| is_connected(g)) {
                for eps in [rat(1, 4), rat(1, 8)] {
                    runs += 1;
                    let tag = format!("{name} n={n} #{idx} eps={eps}");
                    let c = match sparse_or_dense_subset(g, &h, &eps, idx as u64) {
                        Ok(c) => c,
                        Err(e) => {
                            bad.push(format!("{tag}: {e}"));
                            continue;
                        }
                    };
                    substituted += (c.method == ExtractMethod::Oracle) as usize;
                    let set = members(&c.set);
                    let s = set.len() as i128;
                    let e = edges_inside(g, &set) as i128;
                    let pairs = s * (s - 1) / 2;
                    let (num, den) = (*eps.numer(), *eps.denom());
                    let density_ok = match c.side {
                        Side::Low => e * den <= num * pairs,
                        Side::High => e * den >= (den - num) * pairs,
                    };
                    let log = (den as f64 / num as f64).log2();
                    let analytic =
                        ((-15.0 * h.k as f64 * log * log).exp2() * n as f64).floor() as usize;
                    let floor_ok = set.len() >= analytic.max(2);
                    let opt = best_sparse_or_dense(g, &eps).unwrap();
                    if !(density_ok && floor_ok && set.len() <= opt.set.len()) {
                        bad.push(format!(
                            "{tag}: size {} vs oracle {}",
                            set.len(),
                            opt.set.len()
                        ));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(300),
        format!(
            "{runs} runs ({substituted} took the larger exhaustive optimum), {} failures {:?}, {:.1}s",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Checks a sparse-family witness without the library's verifier.
fn check_sparse_witness(
    graphs: &[Graph],
    w: &SparseWitness,
    eps: &Rational,
    h: u32,
) -> Result<(), String> {
    if w.families.len() != graphs.len() {
        return Err("family count".into());
    }
    if w.spec.eps != *eps {
        return Err(format!("spec eps {} differs from {eps}", w.spec.eps));
    }
    let u = members(&w.u);
    let (rn, rd) = (*w.spec.rho.numer(), *w.spec.rho.denom());
    let want = ((rn * u.len() as i128 + rd - 1) / rd) as usize;
    if w.part_size != want {
        return Err(format!(
            "part size {} against ceil(rho|U|) = {want}",
            w.part_size
        ));
    }
    let mut product: u128 = 1;
    for (g, fam) in graphs.iter().zip(&w.families) {
        let mut owner = vec![usize::MAX; g.n()];
        let sets: Vec<Vec<usize>> = fam.iter().map(members).collect();
        for (i, s) in sets.iter().enumerate() {
            if s.len() != want {
                return Err(format!("set of size {} against {want}", s.len()));
            }
            for &v in s {
                if !w.u.contains(v) {
                    return Err(format!("vertex {v} outside U"));
                }
                if owner[v] != usize::MAX {
                    return Err(format!("vertex {v} in two sets"));
                }
                owner[v] = i;
            }
        }
        let (mut cross, mut pairs) = (0i128, 0i128);
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                pairs += (sets[i].len() * sets[j].len()) as i128;
                for &x in &sets[i] {
                    cross += sets[j].iter().filter(|&&y| g.has_edge(x, y)).count() as i128;
                }
            }
        }
        if sets.len() >= 2 && cross * eps.denom() > eps.numer() * pairs {
            return Err(format!("multi-density {cross}/{pairs} above {eps}"));
        }
        product *= sets.len() as u128;
    }
    if product < 1u128 << h {
        return Err(format!("count product {product} below 2^{h}"));
    }
    Ok(())
}

/// Blow-up of a random base graph with shuffled labels, with the block of
/// every vertex.
fn planted_blocks(r: &mut rng::Rng) -> (Graph, Vec<usize>) {
    let b = r.gen_range(3..=6);
    let m = r.gen_range(24..=256 / b);
    let base = Graph::from_fn(b, |_, _| r.gen_bool(0.5));
    let mut perm: Vec<usize> = (0..b * m).collect();
    perm.shuffle(r);
    let mut labels = vec![0; b * m];
    for v in 0..b * m {
        labels[perm[v]] = v / m;
    }
    (base.blow_up(m).permute(&perm), labels)
}

fn key_lemma_round_trip() -> Outcome {
    let (mut accepted, mut finder_failures, mut rejected) = (0, 0, Vec::new());
    for seed in 0..1000u64 {
        let mut r = rng::seeded(rng::derive(seed, 4));
        let compose = seed % 2 == 1;
        let eps = [rat(1, 2), rat(1, 4), rat(1, 8)][r.gen_range(0..3)];
        let mut rho = [rat(1, 4), rat(1, 5), rat(1, 6)][r.gen_range(0..3)];
        let mut h = r.gen_range(1..=3usize);
        let (graphs, finder): (Vec<Graph>, Box<dyn PairFinder>) = match seed % 8 / 2 {
            0 => {
                let (g, _) = planted_blocks(&mut r);
                let c = g.complement();
                (vec![g, c], Box::new(GreedyFinder::default()))
            }
            1 => {
                let n = r.gen_range(96..=256);
                (
                    vec![Graph::gnp(n, &rat(1, 128), &mut r)],
                    Box::new(GreedyFinder::default()),
                )
            }
            2 => {
                let n = r.gen_range(96..=256);
                let g = Graph::gnp(n, &rat(1, 128), &mut r);
                (vec![g.complement(), g], Box::new(ChunkFinder))
            }
            _ => {
                // Pairs of distinct blocks only exist at the top level.
                h = 1;
                let (g, labels) = planted_blocks(&mut r);
                // One block holds a set of size ⌈ρn⌉.
                rho = rat(1, *labels.iter().max().unwrap() as i128 + 1);
                let c = g.complement();
                (vec![g, c], Box::new(ClusterFinder { labels }))
            }
        };
        let u = VertexSet::full(graphs[0].n());
        let alpha = rat(1, 1);
        let result = if compose {
            let mut inner = |s: &VertexSet| {
                if h == 1 {
                    trivial_witness(&graphs, s, &alpha, &rat(1, 2), &eps)
                } else {
                    iterate_sparse(&graphs, finder.as_ref(), &alpha, &rho, &eps, h - 1, s)
                }
            };
            compose_sparse(
                &graphs,
                finder.as_ref(),
                &alpha,
                &rho,
                &eps,
                &u,
                0,
                &mut inner,
            )
        } else {
            iterate_sparse(&graphs, finder.as_ref(), &alpha, &rho, &eps, h, &u)
        };
        match result {
            Ok(w) => match check_sparse_witness(&graphs, &w, &eps, h as u32) {
                Ok(()) => accepted += 1,
                Err(m) => rejected.push(format!("seed {seed}: {m}")),
            },
            Err(Error::FinderFailure { .. }) => finder_failures += 1,
            Err(e) => rejected.push(format!("seed {seed}: {e}")),
        }
    }
    // A finder may legitimately find nothing; the suite still insists that
    // nearly every run yields a witness so the check is not vacuous.
    outcome(
        rejected.is_empty() && accepted >= 900,
        format!(
            "{accepted} witnesses accepted, {finder_failures} finder failures, {} rejections {:?}",
            rejected.len(),
            rejected.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn is_mono_induced_copy(
    g: &Graph,
    col: &EdgeColoring,
    h: &PatternGraph,
    map: &[usize],
    c: u8,
) -> bool {
    map.len() == h.k
        && (0..h.k).all(|i| {
            (i + 1..h.k).all(|j| {
                let (u, v) = (map[i], map[j]);
                u != v
                    && g.has_edge(u, v) == h.has_edge(i, j)
                    && (!h.has_edge(i, j) || col.color(u, v) == c)
            })
        })
}

fn embedding_soundness() -> Outcome {
    let names = ["p3", "p4", "star3"];
    let (mut embedded, mut certified, mut bad) = (0, 0, Vec::new());
    for seed in 0..500u64 {
        let h = pattern(names[seed as usize % 3]);
        let g = Graph::gnp(300, &rat(1, 3), &mut rng::seeded(seed));
        let m = 300 / h.k;
        let parts: Vec<VertexSet> = (0..h.k)
            .map(|i| VertexSet::from_iter(300, i * m..(i + 1) * m))
            .collect();
        let mut params = EmbedParams::new(rat(1, 3), h.k, h.degeneracy).unwrap();
        // Every other run uses a loose budget so that failures occur too.
        if seed % 2 == 1 {
            params.beta = rat(1, 4);
        }
        let col = budget_coloring(&g, &h, &parts, &params.beta, seed);
        match embed_induced_monochromatic(&g, &col, &h, &parts, &params) {
            Ok(e) => {
                let ok =
                    ramsey_forge::witness::verify_embedding(&g, Some(&col), &h, &e.map, Some(BLUE))
                        .is_ok()
                        && is_mono_induced_copy(&g, &col, &h, &e.map, BLUE)
                        && e.map.iter().enumerate().all(|(i, &v)| parts[i].contains(v));
                if ok {
                    embedded += 1;
                } else {
                    bad.push(format!(
                        "seed {seed}: embedding {:?} does not verify",
                        e.map
                    ));
                }
            }
            Err(Error::EmbedFailure(f)) => match f.state.as_ref() {
                Some(st) if st.step + 1 == f.step => {
                    match check_conditions(&g, &col, &h, &parts, &params, st) {
                        Ok(()) => certified += 1,
                        Err(e) => bad.push(format!("seed {seed}: {e}")),
                    }
                }
                _ => bad.push(format!("seed {seed}: failure without a matching state")),
            },
            Err(e) => bad.push(format!("seed {seed}: {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{embedded} verified embeddings, {certified} certified failures, {} errors {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

/// All `2^{e(G)}` red/blue colourings of `g`.
fn all_colorings(g: &Graph) -> Vec<EdgeColoring> {
    let edges = g.edges();
    (0u32..1 << edges.len())
        .map(|mask| {
            EdgeColoring::of_host(g, BLUE, |u, v| {
                let i = edges
                    .iter()
                    .position(|&e| e == (u.min(v), u.max(v)))
                    .expect("host edge");
                if mask >> i & 1 == 1 {
                    RED
                } else {
                    BLUE
                }
            })
            .expect("valid colouring")
        })
        .collect()
}

/// Whether some colour class contains an induced copy of `h`, by trying
/// every injective map.
fn has_mono_copy(g: &Graph, col: &EdgeColoring, h: &PatternGraph) -> bool {
    fn go(g: &Graph, col: &EdgeColoring, h: &PatternGraph, c: u8, map: &mut Vec<usize>) -> bool {
        let i = map.len();
        if i == h.k {
            return true;
        }
        for v in 0..g.n() {
            if map.contains(&v) {
                continue;
            }
            let ok = (0..i).all(|j| {
                let u = map[j];
                g.has_edge(u, v) == h.has_edge(i, j) && (!h.has_edge(i, j) || col.color(u, v) == c)
            });
            if ok {
                map.push(v);
                if go(g, col, h, c, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    [RED, BLUE]
        .into_iter()
        .any(|c| go(g, col, h, c, &mut Vec::new()))
}

fn ramsey_cross_check() -> Outcome {
    let p3 = pattern("p3");
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, g, arrows) in [
        ("c5", Graph::cycle(5), true),
        ("k3", Graph::complete(3), false),
    ] {
        let verdict = exhaustive_induced_ramsey(&g, &p3).unwrap();
        let colorings = all_colorings(&g);
        let brute = colorings.iter().all(|c| has_mono_copy(&g, c, &p3));
        pass &= verdict.arrows == arrows && brute == arrows;
        let (mut hits, mut misses) = (0, 0);
        for (i, col) in colorings.iter().enumerate() {
            let params = PipelineParams {
                seed: i as u64,
                ..PipelineParams::desk(rat(1, 2), 3)
            };
            match induced_ramsey_pipeline(&g, col, &p3, &p3, &params) {
                Ok(rep) => match rep.result {
                    Some(hit) => {
                        hits += 1;
                        // A host that does not arrow admits no real copy
                        // under the oracle's colouring, and every copy must
                        // be real.
                        if !arrows
                            || !is_mono_induced_copy(&g, col, &p3, &hit.embedding.map, hit.color)
                        {
                            pass = false;
                        }
                    }
                    None => misses += 1,
                },
                Err(Error::Contract(m)) => {
                    pass = false;
                    notes.push(format!("{name}: contract error {m}"));
                }
                Err(_) => misses += 1,
            }
        }
        notes.push(format!(
            "{name}: oracle {} brute {brute}, pipeline {hits} copies / {misses} without",
            verdict.arrows
        ));
    }
    outcome(pass, notes.join("; "))
}

fn quarter_deviation_sq16(g: &Graph, set: &[usize]) -> i128 {
    // 16·|e(S) − n²/16|, kept integral.
    let n = g.n() as i128;
    (16 * edges_inside(g, set) as i128 - n * n).abs()
}

fn half_set_ladder() -> Outcome {
    let k3 = pattern("k3");
    let eps = rat(1, 2);
    let budget = OracleBudget::default();
    let (mut fallback, mut bad) = (0, Vec::new());
    // Returns whether `g` passed the copy-count filter.
    let mut check = |g: &Graph, seed: u64, tag: String| {
        let n = g.n() as u128;
        let copies = count_labeled_induced(g, &k3, &budget).unwrap();
        if 16 * copies > n * n * n {
            return false;
        }
        let r = match deviation_witness(g, &k3, &eps, seed) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{tag}: {e}"));
                return true;
            }
        };
        if r.method == WitnessMethod::Exhaustive {
            fallback += 1;
        }
        let set = members(&r.set);
        let dev16 = quarter_deviation_sq16(g, &set);
        let opt = best_half_subset(g).unwrap();
        let opt16 = quarter_deviation_sq16(g, &members(&opt.set));
        let ok = set.len() == g.n() / 2
            && Rational::new(dev16, 16) == r.deviation
            && dev16 <= opt16
            && (opt16 < 80 || dev16 >= 16)
            && r.oracle_optimum == Some(Rational::new(opt16, 16))
            && !r.below_guarantee;
        if !ok {
            bad.push(format!(
                "{tag}: deviation {}/16 against optimum {opt16}/16",
                dev16
            ));
        }
        true
    };
    let start = Instant::now();
    let atlas = hereditary_classes(9, &|_| true);
    let (mut exhaustive, mut sampled) = (0, 0);
    for (n, classes) in atlas.iter().enumerate().skip(2) {
        for (i, g) in classes.iter().enumerate() {
            exhaustive += check(g, i as u64, format!("n={n} #{i}")) as usize;
        }
    }
    for n in [10usize] {
        for seed in 0..5000u64 {
            let p = [rat(1, 5), rat(1, 3), rat(1, 2), rat(2, 3)][seed as usize % 4];
            let g = Graph::gnp(n, &p, &mut rng::seeded(rng::derive(seed, n as u64)));
            sampled += check(&g, seed, format!("n={n} seed {seed}")) as usize;
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{exhaustive} atlas graphs (n <= 9) and {} sampled (n = 10), exhaustive fallback {fallback}, {} failures {:?}, {:.1}s",
            sampled,
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn construction_bound() -> Outcome {
    let start = Instant::now();
    let c = low_discrepancy_graph(6, 16, 0).unwrap();
    let g = &c.graph;
    let clique_free = find_clique(g, 6).is_none() && max_clique_small(g).count_ones() < 6;
    let rows: Vec<u16> = (0..16)
        .map(|u| {
            (0..16)
                .filter(|&v| g.has_edge(u, v))
                .fold(0u16, |m, v| m | 1 << v)
        })
        .collect();
    // Bound 2^{-6/4+2}·16² = √2·256, compared squared: dev² <= 2·256².
    let mut worst = 0i64;
    let mut subsets = 0;
    for mask in 0u32..1 << 16 {
        if mask.count_ones() != 8 {
            continue;
        }
        subsets += 1;
        let e: u32 = (0..16)
            .filter(|&u| mask >> u & 1 == 1)
            .map(|u| (rows[u] as u32 & mask).count_ones())
            .sum::<u32>()
            / 2;
        worst = worst.max((e as i64 - 16).abs());
    }
    let opt = best_half_subset(g).unwrap();
    let bound_sq = 2 * 256 * 256;
    let pass = c.certificate.l == 8
        && clique_free
        && subsets == 12870
        && worst * worst <= bound_sq
        && opt.deviation == Rational::from_integer(worst as i128)
        && start.elapsed() < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "l = {}, clique-free {clique_free}, {subsets} half-sets, worst deviation {worst} against bound {:.2}, oracle {}, {:.2}s",
            c.certificate.l,
            (bound_sq as f64).sqrt(),
            opt.deviation,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn hom_floor() -> Outcome {
    let (mut sizes, mut bad) = (Vec::new(), Vec::new());
    for seed in 0..200u64 {
        let n = if seed % 4 < 2 { 16 } else { 32 };
        let (name, g) = if seed % 2 == 0 {
            ("k3", random_bipartite(n, seed))
        } else {
            ("p4", random_cograph(n, seed))
        };
        let h = pattern(name);
        let r = match hom_lower_bound(&g, &h, seed) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let set = members(&r.set);
        let e = edges_inside(&g, &set);
        let pairs = (set.len() * set.len().saturating_sub(1) / 2) as u64;
        let homogeneous = if r.clique { e == pairs } else { e == 0 };
        // Smallest t with 4^t >= n.
        let floor = (0..).find(|&t| 1usize << (2 * t) >= n).unwrap();
        let opt = max_homogeneous(&g).unwrap().set.len();
        if !(homogeneous && set.len() >= floor && set.len() <= opt) {
            bad.push(format!(
                "seed {seed}: size {} floor {floor} optimum {opt}",
                set.len()
            ));
        }
        sizes.push(set.len());
    }
    outcome(
        bad.is_empty() && sizes.len() == 200,
        format!(
            "{} instances, smallest set {}, {} violations {:?}",
            sizes.len(),
            sizes.iter().min().copied().unwrap_or(0),
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn cli(dir: &Path, args: &[&str], threads: usize) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ramsey-forge"))
        .args(args)
        .current_dir(dir)
        .env("RAMSEY_FORGE_THREADS", threads.to_string())
        .output()
        .expect("run the CLI");
    (out.status.code(), out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cli");
    std::fs::create_dir_all(&dir).unwrap();
    let write =
        |name: &str, g: &Graph| std::fs::write(dir.join(name), io::write_edge_list(g)).unwrap();
    write("paley13.txt", &paley(13).unwrap());
    write("cograph40.txt", &random_cograph(40, 3));
    write("bipartite20.txt", &random_bipartite(20, 5));
    write(
        "gnp120.txt",
        &Graph::gnp(120, &rat(1, 2), &mut rng::seeded(8)),
    );
    write(
        "gnp16.txt",
        &Graph::gnp(16, &rat(1, 3), &mut rng::seeded(2)),
    );
    let runs: &[&[&str]] = &[
        &["gen", "gnp", "--n", "40", "--p", "1/3", "--seed", "5"],
        &[
            "certify",
            "mixing",
            "--graph",
            "paley13.txt",
            "--p",
            "1/2",
            "--lambda",
            "sqrt",
            "--mode",
            "sampled",
            "--samples",
            "3000",
            "--seed",
            "3",
        ],
        &["certify", "spectrum", "--graph", "paley13.txt"],
        &[
            "extract",
            "--graph",
            "cograph40.txt",
            "--pattern",
            "p4",
            "--eps",
            "1/4",
            "--seed",
            "2",
        ],
        &[
            "partition",
            "--graph",
            "cograph40.txt",
            "--pattern",
            "p4",
            "--eps",
            "1/4",
            "--seed",
            "2",
        ],
        &[
            "hom",
            "--graph",
            "cograph40.txt",
            "--pattern",
            "p4",
            "--format",
            "csv",
        ],
        &[
            "ramsey", "--preset", "dgt", "--r", "7", "--t", "3", "--h1", "p3", "--h2", "p3",
            "--seed", "1",
        ],
        &[
            "ramsey",
            "--graph",
            "gnp120.txt",
            "--h1",
            "p3",
            "--h2",
            "p3",
            "--seed",
            "9",
            "--budget-retries",
            "4",
        ],
        &[
            "discrepancy",
            "witness",
            "--graph",
            "bipartite20.txt",
            "--pattern",
            "k3",
            "--eps",
            "1/2",
            "--seed",
            "4",
        ],
        &[
            "discrepancy",
            "construct",
            "--k",
            "4",
            "6",
            "--n",
            "16",
            "--format",
            "csv",
        ],
        &["oracle", "half-set", "--graph", "gnp16.txt"],
        &[
            "oracle",
            "count",
            "--graph",
            "cograph40.txt",
            "--pattern",
            "k3",
        ],
    ];
    let mut bad = Vec::new();
    for args in runs {
        let reference = cli(&dir, args, 1);
        if !matches!(reference.0, Some(0) | Some(2)) || reference.1.is_empty() {
            bad.push(format!("{} exited {:?}", args[..2].join(" "), reference.0));
            continue;
        }
        for threads in [1, 4, 4] {
            if cli(&dir, args, threads) != reference {
                bad.push(format!(
                    "{} differs at {threads} threads",
                    args[..2].join(" ")
                ));
            }
        }
    }
    // `--out` writes the same bytes as stdout.
    let out_args = [
        "discrepancy",
        "witness",
        "--graph",
        "bipartite20.txt",
        "--pattern",
        "k3",
        "--eps",
        "1/2",
        "--seed",
        "4",
    ];
    let stdout = cli(&dir, &out_args, 4).1;
    let mut with_out: Vec<&str> = out_args.to_vec();
    with_out.extend(["--out", "report.json"]);
    cli(&dir, &with_out, 1);
    if std::fs::read(dir.join("report.json")).ok() != Some(stdout) {
        bad.push("--out differs from stdout".into());
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} invocations, 4 runs each, mismatches {bad:?}",
            runs.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 10] = [
        paley_certification,
        dgt_spectra,
        extraction_soundness,
        key_lemma_round_trip,
        embedding_soundness,
        ramsey_cross_check,
        half_set_ladder,
        construction_bound,
        hom_floor,
        cli_determinism,
    ];
    let mut failed = 0;
    for (i, check) in criteria.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += !o.pass as usize;
        println!(
            "criterion {}: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
