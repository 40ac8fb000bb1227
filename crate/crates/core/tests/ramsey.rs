use proptest::prelude::*;
use ramsey_forge::coloring::{EdgeColoring, BLUE, RED};
use ramsey_forge::oracles::{exhaustive_induced_ramsey, find_color_pattern};
use ramsey_forge::pseudorandom::paley;
use ramsey_forge::ramsey::*;
use ramsey_forge::rational::{rat, Rational};
use ramsey_forge::rng;
use ramsey_forge::witness::{verify_color_pattern, verify_split};
use ramsey_forge::{Error, Graph, PatternGraph, VertexSet};

fn equal_parts(n: usize, k: usize) -> Vec<VertexSet> {
    let m = n / k;
    (0..k)
        .map(|i| VertexSet::from_iter(n, i * m..(i + 1) * m))
        .collect()
}

/// Pair-by-pair check written independently of `verify_embedding`.
fn naive_ok(g: &Graph, col: &EdgeColoring, h: &PatternGraph, map: &[usize], c: u8) -> bool {
    let k = h.k;
    let distinct = (0..k).all(|i| (i + 1..k).all(|j| map[i] != map[j]));
    distinct
        && (0..k).all(|i| {
            (0..k).all(|j| {
                i == j
                    || (g.has_edge(map[i], map[j]) == h.has_edge(i, j)
                        && (!h.has_edge(i, j) || col.color(map[i], map[j]) == c))
            })
        })
}

#[test]
fn monochromatic_paley_colourings() {
    let g = paley(13).unwrap();
    let k2 = PatternGraph::named("k2").unwrap();
    for c in [BLUE, RED] {
        let col = EdgeColoring::monochromatic(&g, 3, c).unwrap();
        let r = induced_ramsey_pipeline(&g, &col, &k2, &k2, &PipelineParams::desk(rat(1, 2), 2))
            .unwrap();
        let hit = r.result.expect("a monochromatic edge exists");
        assert_eq!(hit.color, c);
        assert!(g.has_edge(hit.embedding.map[0], hit.embedding.map[1]));
    }
}

#[test]
fn random_host_pipeline_is_verified_and_deterministic() {
    let g = Graph::gnp(400, &rat(1, 4), &mut rng::seeded(11));
    let p3 = PatternGraph::named("p3").unwrap();
    // Red inside two halves, blue across: both colour classes are dense.
    let col = EdgeColoring::of_host(
        &g,
        3,
        |u, v| if (u < 200) == (v < 200) { RED } else { BLUE },
    )
    .unwrap();
    let params = PipelineParams::desk(rat(1, 4), 3);
    let r = induced_ramsey_pipeline(&g, &col, &p3, &p3, &params).unwrap();
    let hit = r.result.as_ref().expect("pipeline finds a copy");
    assert!(naive_ok(&g, &col, &p3, &hit.embedding.map, hit.color));
    let again = induced_ramsey_pipeline(&g, &col, &p3, &p3, &params).unwrap();
    assert_eq!(
        serde_json::to_string(&r).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
}

#[test]
fn subsample_agrees_with_the_exhaustive_oracle() {
    let g = Graph::gnp(400, &rat(1, 4), &mut rng::seeded(3));
    let p3 = PatternGraph::named("p3").unwrap();
    let sub = g.induced_subgraph(&VertexSet::from_iter(400, (0..10).map(|i| i * 37)));
    let verdict = exhaustive_induced_ramsey(&sub, &p3).unwrap();
    let params = PipelineParams::desk(rat(1, 4), 3);
    if let Some(bad) = verdict.bad_coloring {
        // On a colouring with no monochromatic copy the pipeline must fail.
        let edges = sub.edges();
        let col = EdgeColoring::of_host(&sub, 3, |u, v| {
            let e = edges.binary_search(&(u, v)).unwrap();
            if bad[e] == 1 {
                RED
            } else {
                BLUE
            }
        })
        .unwrap();
        let r = induced_ramsey_pipeline(&sub, &col, &p3, &p3, &params).unwrap();
        assert!(r.result.is_none());
    } else {
        for s in 0..8 {
            let col = random_coloring(&sub, 1, 2, s);
            let r = induced_ramsey_pipeline(&sub, &col, &p3, &p3, &params).unwrap();
            if let Some(hit) = r.result {
                assert!(naive_ok(&sub, &col, &p3, &hit.embedding.map, hit.color));
            }
        }
    }
}

#[test]
fn embedder_failures_carry_valid_states() {
    // Sparse hosts with a generous red budget make the greedy search fail
    // sometimes; every failure must still satisfy the step invariants.
    let mut failures = 0;
    for s in 0..40u64 {
        let g = Graph::gnp(24, &rat(1, 3), &mut rng::seeded(s));
        for name in ["p3", "p4", "star3"] {
            let h = PatternGraph::named(name).unwrap();
            let parts = equal_parts(24, h.k);
            let mut params = EmbedParams::new(rat(1, 3), h.k, h.degeneracy).unwrap();
            params.beta = rat(1, 4);
            let col = budget_coloring(&g, &h, &parts, &params.beta, s);
            match embed_induced_monochromatic(&g, &col, &h, &parts, &params) {
                Ok(e) => assert!(naive_ok(&g, &col, &h, &e.map, BLUE)),
                Err(Error::EmbedFailure(f)) => {
                    failures += 1;
                    let st = f.state.as_ref().unwrap();
                    assert_eq!(st.step + 1, f.step);
                    check_conditions(&g, &col, &h, &parts, &params, st).unwrap();
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn mutated_embeddings_are_caught() {
    let g = Graph::gnp(300, &rat(1, 3), &mut rng::seeded(5));
    let h = PatternGraph::named("p4").unwrap();
    let parts = equal_parts(300, 4);
    let params = EmbedParams::new(rat(1, 3), 4, 1).unwrap();
    let col = budget_coloring(&g, &h, &parts, &params.beta, 5);
    let e = embed_induced_monochromatic(&g, &col, &h, &parts, &params).unwrap();
    let mut r = rng::seeded(99);
    for _ in 0..500 {
        let mut map = e.map.clone();
        let i = rand::Rng::gen_range(&mut r, 0..4);
        map[i] = rand::Rng::gen_range(&mut r, 0..300);
        let fast = verify_embedding(&g, Some(&col), &h, &map, Some(BLUE)).is_ok();
        assert_eq!(fast, naive_ok(&g, &col, &h, &map, BLUE));
    }
}

fn random_k_coloring(n: usize, seed: u64) -> EdgeColoring {
    let mut r = rng::seeded(seed);
    EdgeColoring::of_complete(n, 2, |_, _| rand::Rng::gen_range(&mut r, 1..=2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_split_outcomes_verify(seed in any::<u64>(), pattern in 0u64..8) {
        let phi = random_k_coloring(16, seed);
        let psi = EdgeColoring::of_complete(3, 2, |i, j| 1 + (pattern >> (i + j - 1) & 1) as u8).unwrap();
        let (q, eps) = (rat(1, 4), rat(1, 3));
        let present = find_color_pattern(&phi, &psi).is_some();
        match psi_free_split(&phi, &psi, &q, &eps) {
            Ok(PsiOutcome::Embedding(e)) => {
                prop_assert!(present);
                prop_assert!(verify_color_pattern(&phi, &psi, &e.map).is_ok());
            }
            Ok(PsiOutcome::Split(w)) => {
                prop_assert!(verify_split(phi.layer(2), &w).is_ok());
                prop_assert!(w.a.len() >= w.a_floor && w.b.len() >= w.b_floor);
            }
            Err(Error::BiDensityViolation(v)) => {
                // Colour-1 density below q between the reported sets.
                let e = phi.layer(1).e_pair(&v.a, &v.b) as i128;
                prop_assert_eq!(e as u64, v.edges);
                prop_assert!(Rational::from_integer(e) < q * (v.a.len() * v.b.len()) as i128);
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn psi_floor_is_monotone_in_n(n in 8usize..200) {
        let f = |n| psi_floor(n, 3, 1, &rat(1, 2), &rat(1, 4));
        prop_assert!(f(n) <= f(n + 3));
    }
}
