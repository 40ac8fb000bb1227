use proptest::prelude::*;
use ramsey_forge::discrepancy::*;
use ramsey_forge::oracles::{best_half_subset, is_h_free, max_clique_small};
use ramsey_forge::rational::{abs_diff, rat, Rational};
use ramsey_forge::{rng, Graph, PatternGraph, VertexSet};

fn quarter_dev(g: &Graph, s: &VertexSet) -> Rational {
    let n = g.n() as i128;
    abs_diff(
        &Rational::from_integer(g.e_set(s) as i128),
        &Rational::new(n * n, 16),
    )
}

#[test]
fn empty_graph_witness() {
    let r = deviation_witness(
        &Graph::empty(8),
        &PatternGraph::named("k2").unwrap(),
        &rat(1, 2),
        0,
    )
    .unwrap();
    assert_eq!(r.set.len(), 4);
    assert_eq!(r.deviation, Rational::from_integer(4));
}

#[test]
fn complete_graph_witness() {
    let r = deviation_witness(
        &Graph::complete(8),
        &PatternGraph::named("e2").unwrap(),
        &rat(1, 2),
        0,
    )
    .unwrap();
    assert_eq!(r.edges, 6);
    assert_eq!(r.deviation, Rational::from_integer(2));
}

#[test]
fn bipartite_witness_against_the_oracle() {
    let g = Graph::complete_bipartite(4, 4);
    let r = deviation_witness(&g, &PatternGraph::named("k3").unwrap(), &rat(1, 4), 0).unwrap();
    let opt = best_half_subset(&g).unwrap();
    assert_eq!(opt.deviation, Rational::from_integer(4));
    assert_eq!(opt.set, VertexSet::from_iter(8, 0..4));
    assert_eq!(r.oracle_optimum, Some(opt.deviation));
    assert!(r.deviation <= opt.deviation && r.deviation >= opt.deviation / 5);
    assert_eq!(r.pattern_copies, Some(0));
    assert!(!r.below_guarantee);
}

#[test]
fn too_many_triangles_is_rejected() {
    let r = deviation_witness(
        &Graph::complete(8),
        &PatternGraph::named("k3").unwrap(),
        &rat(1, 2),
        0,
    );
    assert!(matches!(
        r,
        Err(ramsey_forge::Error::NotSparseInH { count: 336, .. })
    ));
}

#[test]
fn witness_is_deterministic_on_a_large_graph() {
    // Above the exhaustive range: the ladder alone answers.
    let g = Graph::complete_bipartite(20, 20);
    let k3 = PatternGraph::named("k3").unwrap();
    let a = deviation_witness(&g, &k3, &rat(1, 2), 7).unwrap();
    let b = deviation_witness(&g, &k3, &rat(1, 2), 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.oracle_optimum, None);
    assert_eq!(a.set.len(), 20);
    assert_eq!(a.deviation, quarter_dev(&g, &a.set));
    // One full side has no edges: 40²/16 = 100.
    assert_eq!(a.deviation, Rational::from_integer(100));
    assert!(!a.below_guarantee);
}

#[test]
fn smallest_construction() {
    let c = low_discrepancy_graph(4, 8, 0).unwrap();
    assert_eq!(c.certificate.l, 4);
    assert!(c.certificate.exhaustive);
    assert_eq!(c.graph.edge_count(), 4 * c.base.edge_count());
    assert!(is_h_free(&c.graph, &PatternGraph::named("k4").unwrap()));
    let opt = best_half_subset(&c.graph).unwrap();
    assert_eq!(c.half_set_max, Some(opt.deviation));
    assert!(within_half_set_bound(8, 4, opt.edges));
}

#[test]
fn construction_for_six() {
    let c = low_discrepancy_graph(6, 16, 0).unwrap();
    assert_eq!(c.certificate.l, 8);
    assert_eq!(c.certificate.subsets_checked, 256);
    assert!(c.certificate.clique_number < 6);
    assert!((max_clique_small(&c.graph).count_ones() as usize) < 6);
    assert_eq!(c.graph.edge_count(), 4 * c.base.edge_count());
    let opt = best_half_subset(&c.graph).unwrap();
    assert!(within_half_set_bound(16, 8, opt.edges));
    assert!(c.half_set_bound > 362.0 && c.half_set_bound < 363.0);
}

#[test]
fn sampled_certificate_above_the_exhaustive_range() {
    let c = low_discrepancy_graph(10, 64, 3).unwrap();
    assert_eq!(c.certificate.l, 32);
    assert!(!c.certificate.exhaustive);
    assert_eq!(c.certificate.subsets_checked, BASE_SAMPLES as u64);
    assert!(c.certificate.clique_number < 10);
}

#[test]
fn construction_rejects_bad_orders() {
    assert!(low_discrepancy_graph(6, 12, 0).is_err());
    assert!(low_discrepancy_graph(1, 4, 0).is_err());
}

#[test]
fn envelope_rows_bracket() {
    let row = envelope_row(6, 16, &rat(1, 2), 0).unwrap();
    assert!(row.lower_witness <= row.upper_bound);
    assert_eq!(
        row.csv().split(',').count(),
        ENVELOPE_HEADER.split(',').count()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reports_recompute_and_respect_the_oracle(seed in any::<u64>(), n in 4usize..=12) {
        let g = Graph::gnp(n, &rat(1, 3), &mut rng::seeded(seed));
        let k3 = PatternGraph::named("k3").unwrap();
        match deviation_witness(&g, &k3, &rat(1, 4), seed) {
            Ok(r) => {
                prop_assert_eq!(r.set.len(), n / 2);
                prop_assert_eq!(r.edges, g.e_set(&r.set));
                prop_assert_eq!(r.deviation, quarter_dev(&g, &r.set));
                let opt = r.oracle_optimum.unwrap();
                prop_assert!(r.deviation <= opt);
                prop_assert!(r.deviation >= opt / 5);
                if r.target >= Rational::from_integer(1) {
                    prop_assert!(r.deviation >= r.target);
                }
            }
            Err(ramsey_forge::Error::NotSparseInH { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn half_set_ladder_meets_a_fifth_in_range(seed in any::<u64>(), n in 4usize..=14, size in 2usize..=14) {
        let g = Graph::gnp(n, &rat(1, 2), &mut rng::seeded(seed));
        let r0 = VertexSet::from_iter(n, 0..size.min(n));
        let eta = rat(g.edge_count() as i128, (n * (n - 1) / 2) as i128);
        let r = egps_half_set(&g, &r0, &eta, seed).unwrap();
        prop_assert_eq!(r.set.len(), n / 2);
        prop_assert!(!r.below_guarantee);
        prop_assert!(r.deviation * 5 >= r.start_deviation);
    }
}
