use proptest::prelude::*;
use ramsey_forge::pseudorandom::*;
use ramsey_forge::rational::rat;
use ramsey_forge::{rng, Graph};

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() < 1e-9
}

#[test]
fn paley_thirteen_mixes_exhaustively() {
    let g = paley(13).unwrap();
    let c = certify_mixing(
        &g,
        &rat(1, 2),
        Lambda::Sqrt(rat(13, 1)),
        CertMode::Exhaustive,
    )
    .unwrap();
    assert!(c.pass);
    assert_eq!(c.violations, 0);
    // Ordered pairs of disjoint non-empty sets: 3^13 - 2·2^13 + 1.
    assert_eq!(c.pairs_checked, 3u64.pow(13) - 2 * 2u64.pow(13) + 1);
}

#[test]
fn paley_thirteen_spectrum() {
    let s = spectral_profile(&paley(13).unwrap()).unwrap();
    assert!(close(s.eigenvalues[0], 6.0));
    let (hi, lo) = ((-1.0 + 13f64.sqrt()) / 2.0, (-1.0 - 13f64.sqrt()) / 2.0);
    assert!((hi - 1.302_775_637_7).abs() < 1e-10);
    assert_eq!(
        s.eigenvalues[1..7]
            .iter()
            .filter(|&&x| close(x, hi))
            .count(),
        6
    );
    assert_eq!(
        s.eigenvalues[7..].iter().filter(|&&x| close(x, lo)).count(),
        6
    );
}

#[test]
fn dgt_spectra_take_two_values() {
    for r in [2usize, 3, 5, 7] {
        for t in 1..=r + 1 {
            let g = dgt(r, t).unwrap();
            assert_eq!(regular_degree(&g), Some(t * (r - 1)), "dgt({r},{t})");
            let s = spectral_profile(&g).unwrap();
            let (a, b) = (-(t as f64), r as f64 - t as f64);
            assert!(
                s.eigenvalues[1..]
                    .iter()
                    .all(|&x| close(x, a) || close(x, b)),
                "dgt({r},{t}): {:?}",
                s.eigenvalues
            );
        }
    }
}

#[test]
fn dgt_five_three_frozen_values() {
    let s = spectral_profile(&dgt(5, 3).unwrap()).unwrap();
    assert_eq!(s.degree, Some(12));
    assert!(close(s.lambda, 3.0));
    assert!(s
        .eigenvalues
        .iter()
        .all(|&x| close(x, 12.0) || close(x, 2.0) || close(x, -3.0)));
}

#[test]
fn complete_bipartite_worst_pair() {
    let c = certify_mixing(
        &Graph::complete_bipartite(4, 4),
        &rat(1, 2),
        Lambda::Value(rat(4, 1)),
        CertMode::Exhaustive,
    )
    .unwrap();
    assert!(c.pass);
    assert!(close(c.worst.unwrap().statistic, 2.0));
}

#[test]
fn paley_is_not_bi_dense_at_a_quarter() {
    let r = bi_dense_check(
        &paley(13).unwrap(),
        &rat(1, 4),
        &rat(3, 10),
        CheckMode::Exhaustive,
    )
    .unwrap();
    assert!(!r.pass);
    let v = r.violation.unwrap();
    assert!(v.a.is_disjoint(&v.b));
    assert!(v.a.len() >= r.min_size && v.b.len() >= r.min_size);
    assert!(4 * v.edges <= (v.a.len() * v.b.len()) as u64);
}

#[test]
fn spectral_mode_agrees_with_exhaustive_on_paley() {
    let g = paley(13).unwrap();
    // The spectral route needs p = d/n exactly.
    let s = certify_mixing(
        &g,
        &rat(6, 13),
        Lambda::Sqrt(rat(13, 1)),
        CertMode::Spectral,
    )
    .unwrap();
    assert!(s.pass);
    let off = certify_mixing(&g, &rat(1, 2), Lambda::Sqrt(rat(13, 1)), CertMode::Spectral).unwrap();
    assert!(!off.pass);
    let tight = certify_mixing(
        &g,
        &rat(1, 2),
        Lambda::Value(rat(1, 1)),
        CertMode::Exhaustive,
    )
    .unwrap();
    assert!(!tight.pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampling_never_beats_the_exhaustive_worst(seed in any::<u64>()) {
        let g = Graph::gnp(9, &rat(1, 2), &mut rng::seeded(seed));
        let lam = Lambda::Value(rat(3, 1));
        let ex = certify_mixing(&g, &rat(1, 2), lam, CertMode::Exhaustive).unwrap();
        let sa = certify_mixing(&g, &rat(1, 2), lam, CertMode::Sampled { samples: 500, seed }).unwrap();
        let worst = ex.worst.unwrap().statistic;
        prop_assert!(sa.worst.unwrap().statistic <= worst + 1e-12);
        prop_assert!(sa.violations <= ex.violations);
    }
}
