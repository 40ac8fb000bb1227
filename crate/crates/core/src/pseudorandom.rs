//! Explicit pseudo-random graphs and certification of their edge
//! distribution.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, Rational};
use crate::rng;

pub const MAX_SPECTRAL_N: usize = 4096;
pub const MAX_EXHAUSTIVE_N: usize = 14;
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley graph on `F_q`: `x ~ y` iff `x - y` is a non-zero square.
pub fn paley(q: usize) -> Result<Graph> {
    if !is_prime(q as u64) || q % 4 != 1 {
        return Err(Error::param(format!(
            "paley needs a prime q ≡ 1 (mod 4), got {q}"
        )));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    Ok(Graph::from_fn(q, |u, v| square[(v - u) % q]))
}

/// Line-direction graph on `F_r²`: `x ~ y` iff `x - y` is parallel to one of
/// the first `t` directions in the order `(1,0), (1,1), …, (1,r-1), (0,1)`.
/// Vertex `(a, b)` has index `a·r + b`.
pub fn dgt(r: usize, t: usize) -> Result<Graph> {
    if !is_prime(r as u64) {
        return Err(Error::param(format!("dgt needs a prime r, got {r}")));
    }
    if t == 0 || t > r + 1 {
        return Err(Error::param(format!("dgt needs 1 <= t <= r+1, got t={t}")));
    }
    let n = r * r;
    let mut diff = vec![false; n];
    for dir in 0..t {
        let (dx, dy) = if dir < r { (1, dir) } else { (0, 1) };
        for s in 1..r {
            diff[(dx * s % r) * r + dy * s % r] = true;
        }
    }
    Ok(Graph::from_fn(n, |u, v| {
        let (ua, ub) = (u / r, u % r);
        let (va, vb) = (v / r, v % r);
        diff[((ua + r - va) % r) * r + (ub + r - vb) % r]
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralProfile {
    pub n: usize,
    pub degree: Option<usize>,
    /// Non-increasing.
    pub eigenvalues: Vec<f64>,
    /// `max_{i>=2} |λ_i|`.
    pub lambda: f64,
    pub tolerance: f64,
    /// Largest `‖Av − λv‖` over the returned eigenpairs.
    pub max_residual: f64,
}

pub fn regular_degree(g: &Graph) -> Option<usize> {
    let d = if g.n() == 0 { 0 } else { g.degree(0) };
    (0..g.n()).all(|v| g.degree(v) == d).then_some(d)
}

/// Full adjacency spectrum by a dense symmetric eigensolve.
pub fn spectral_profile(g: &Graph) -> Result<SpectralProfile> {
    let n = g.n();
    if n > MAX_SPECTRAL_N {
        return Err(Error::Resource {
            what: format!("spectral profile of n = {n}"),
            limit: MAX_SPECTRAL_N as u128,
        });
    }
    let a = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::new(a.clone());
    let mut max_residual: f64 = 0.0;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k).into_owned();
        let av: DVector<f64> = &a * &v;
        let r = (av - v * lam).norm();
        max_residual = max_residual.max(r);
    }
    // Residuals scale with the matrix norm, which is at most n.
    if max_residual > SPECTRAL_TOLERANCE * n.max(1) as f64 {
        return Err(Error::Contract(format!(
            "eigensolver residual {max_residual:e} above tolerance"
        )));
    }
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    let lambda = eigenvalues
        .iter()
        .skip(1)
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    Ok(SpectralProfile {
        n,
        degree: regular_degree(g),
        eigenvalues,
        lambda,
        tolerance: SPECTRAL_TOLERANCE,
        max_residual,
    })
}

/// A real bound given exactly: either a rational or the square root of one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lambda {
    Value(Rational),
    Sqrt(Rational),
}

impl Lambda {
    pub fn squared(&self) -> Rational {
        match self {
            Lambda::Value(v) => v * v,
            Lambda::Sqrt(x) => *x,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Lambda::Value(v) => rational::to_f64(v),
            Lambda::Sqrt(x) => rational::to_f64(x).sqrt(),
        }
    }
}

impl std::fmt::Display for Lambda {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lambda::Value(v) => write!(f, "{v}"),
            Lambda::Sqrt(x) => write!(f, "sqrt({x})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMode {
    Spectral,
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// A pair `(A, B)` with its edge count and mixing statistic
/// `|d(A,B) − p|·√(|A||B|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairStat {
    pub a: VertexSet,
    pub b: VertexSet,
    pub edges: u64,
    pub statistic: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudorandomCert {
    #[serde(with = "crate::rational::serde_str")]
    pub p: Rational,
    pub lambda: String,
    pub method: CertMode,
    pub pass: bool,
    pub pairs_checked: u64,
    pub violations: u64,
    pub worst: Option<PairStat>,
    pub spectral: Option<SpectralProfile>,
}

/// `(e − p·ab)² · ab'` numerators for exact comparison of statistics:
/// returns `(num, den)` with statistic² = num / den.
fn stat_sq(e: u64, a: u64, b: u64, p: &Rational) -> (i128, i128) {
    let ab = (a * b) as i128;
    let dev = e as i128 * p.denom() - p.numer() * ab;
    (dev * dev, ab * p.denom() * p.denom())
}

fn stat_le(x: (i128, i128), y: (i128, i128)) -> bool {
    x.0 * y.1 <= y.0 * x.1
}

fn pair_stat(a: u64, b: u64, n: usize, e: u64, p: &Rational) -> PairStat {
    let ab = (a.count_ones() * b.count_ones()) as f64;
    PairStat {
        a: VertexSet::from_mask(n, a),
        b: VertexSet::from_mask(n, b),
        edges: e,
        statistic: ((e as f64 - rational::to_f64(p) * ab).abs()) / ab.sqrt(),
    }
}

struct PairScan {
    pairs: u64,
    violations: u64,
    /// Largest statistic: (a mask, b mask, edges, squared statistic).
    worst: Option<(u64, u64, u64, (i128, i128))>,
}

fn merge_scan(x: PairScan, y: PairScan) -> PairScan {
    let worst = match (x.worst, y.worst) {
        (None, w) | (w, None) => w,
        (Some(a), Some(b)) => {
            // Larger statistic wins; ties keep the lexicographically smaller pair.
            let a_ge = stat_le(b.3, a.3);
            let b_ge = stat_le(a.3, b.3);
            if a_ge && (!b_ge || (a.0, a.1) <= (b.0, b.1)) {
                Some(a)
            } else {
                Some(b)
            }
        }
    };
    PairScan {
        pairs: x.pairs + y.pairs,
        violations: x.violations + y.violations,
        worst,
    }
}

/// For one `A`, scans every non-empty `B ⊆ V \ A` with an incremental edge
/// count.
fn scan_a(rows: &[u64], n: usize, a: u64, mut visit: impl FnMut(u64, u64)) {
    let full = (1u64 << n) - 1;
    let rest = full & !a;
    let cnt: Vec<u64> = (0..n).map(|v| (rows[v] & a).count_ones() as u64).collect();
    // e(A, B) for submasks B of `rest`, indexed by compressed submask.
    let free: Vec<usize> = (0..n).filter(|&v| rest >> v & 1 == 1).collect();
    let m = free.len();
    let mut e = vec![0u64; 1 << m];
    for s in 1usize..1 << m {
        let low = s.trailing_zeros() as usize;
        e[s] = e[s & (s - 1)] + cnt[free[low]];
        let mut b = 0u64;
        let mut t = s;
        while t != 0 {
            b |= 1 << free[t.trailing_zeros() as usize];
            t &= t - 1;
        }
        visit(b, e[s]);
    }
}

/// Checks `|d(A,B) − p| ≤ λ/√(|A||B|)` for all disjoint non-empty `A, B`
/// (exhaustive), for seeded random pairs (sampled), or via the spectrum of
/// a regular graph (spectral).
pub fn certify_mixing(
    g: &Graph,
    p: &Rational,
    lambda: Lambda,
    mode: CertMode,
) -> Result<PseudorandomCert> {
    let n = g.n();
    let lam_sq = lambda.squared();
    let violates = |s: (i128, i128)| s.0 * lam_sq.denom() > lam_sq.numer() * s.1;
    let mut cert = PseudorandomCert {
        p: *p,
        lambda: lambda.to_string(),
        method: mode,
        pass: false,
        pairs_checked: 0,
        violations: 0,
        worst: None,
        spectral: None,
    };
    match mode {
        CertMode::Spectral => {
            let d = regular_degree(g)
                .ok_or_else(|| Error::pre("spectral certification needs a regular graph"))?;
            let prof = spectral_profile(g)?;
            let p_ok = *p * Rational::from_integer(n as i128) == Rational::from_integer(d as i128);
            let lam_ok =
                rational::to_f64(&lam_sq) + SPECTRAL_TOLERANCE >= prof.lambda * prof.lambda;
            cert.pass = p_ok && lam_ok;
            cert.spectral = Some(prof);
        }
        CertMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::Resource {
                    what: format!("exhaustive pair scan at n = {n}"),
                    limit: MAX_EXHAUSTIVE_N as u128,
                });
            }
            let rows: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
            let scan = (1u64..1 << n)
                .into_par_iter()
                .map(|a| {
                    let mut s = PairScan {
                        pairs: 0,
                        violations: 0,
                        worst: None,
                    };
                    let ac = a.count_ones() as u64;
                    scan_a(&rows, n, a, |b, e| {
                        let st = stat_sq(e, ac, b.count_ones() as u64, p);
                        s.pairs += 1;
                        if violates(st) {
                            s.violations += 1;
                        }
                        let better = match s.worst {
                            None => true,
                            Some(w) => !stat_le(st, w.3),
                        };
                        if better {
                            s.worst = Some((a, b, e, st));
                        }
                    });
                    s
                })
                .reduce(
                    || PairScan {
                        pairs: 0,
                        violations: 0,
                        worst: None,
                    },
                    merge_scan,
                );
            cert.pairs_checked = scan.pairs;
            cert.violations = scan.violations;
            cert.pass = scan.violations == 0;
            cert.worst = scan.worst.map(|(a, b, e, _)| pair_stat(a, b, n, e, p));
        }
        CertMode::Sampled { samples, seed } => {
            let mut r = rng::seeded(seed);
            let mut worst: Option<(VertexSet, VertexSet, u64, (i128, i128))> = None;
            for _ in 0..samples {
                let (a, b) = random_pair(n, 1, &mut r);
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let e = g.e_pair(&a, &b);
                let st = stat_sq(e, a.len() as u64, b.len() as u64, p);
                cert.pairs_checked += 1;
                if violates(st) {
                    cert.violations += 1;
                }
                if worst.as_ref().is_none_or(|w| !stat_le(st, w.3)) {
                    worst = Some((a, b, e, st));
                }
            }
            cert.pass = cert.violations == 0;
            cert.worst = worst.map(|(a, b, e, _)| {
                let ab = (a.len() * b.len()) as f64;
                let statistic = (e as f64 - rational::to_f64(p) * ab).abs() / ab.sqrt();
                PairStat {
                    a,
                    b,
                    edges: e,
                    statistic,
                }
            });
        }
    }
    Ok(cert)
}

/// Random disjoint pair: each vertex joins `A`, `B` or neither uniformly,
/// then both sides are topped up to `min_size` from the unused vertices.
fn random_pair(n: usize, min_size: usize, r: &mut rng::Rng) -> (VertexSet, VertexSet) {
    let mut a = VertexSet::new(n);
    let mut b = VertexSet::new(n);
    for v in 0..n {
        match r.gen_range(0..3) {
            0 => a.insert(v),
            1 => b.insert(v),
            _ => {}
        }
    }
    let mut free: Vec<usize> = (0..n)
        .filter(|&v| !a.contains(v) && !b.contains(v))
        .collect();
    while a.len() < min_size && !free.is_empty() {
        let i = r.gen_range(0..free.len());
        a.insert(free.swap_remove(i));
    }
    while b.len() < min_size && !free.is_empty() {
        let i = r.gen_range(0..free.len());
        b.insert(free.swap_remove(i));
    }
    (a, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityPairViolation {
    pub a: VertexSet,
    pub b: VertexSet,
    pub edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiDenseResult {
    pub pass: bool,
    pub min_size: usize,
    pub pairs_checked: u64,
    /// The lowest-density pair with both sides at least `min_size`, when it
    /// violates `d(A,B) > q`.
    pub violation: Option<DensityPairViolation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Checks `d(A, B) > q` for all disjoint `A, B` with `|A|, |B| >= δn`.
pub fn bi_dense_check(
    g: &Graph,
    q: &Rational,
    delta: &Rational,
    mode: CheckMode,
) -> Result<BiDenseResult> {
    let n = g.n();
    let min_size = rational::ceil_mul(delta, n).max(1);
    // (a, b, e) with the smallest e/(|a||b|); ties keep the smaller masks.
    let lower = |x: &(u64, u64, u64), y: &(u64, u64, u64)| -> bool {
        let lx = x.2 as u128 * (y.0.count_ones() * y.1.count_ones()) as u128;
        let ly = y.2 as u128 * (x.0.count_ones() * x.1.count_ones()) as u128;
        lx < ly || (lx == ly && (x.0, x.1) < (y.0, y.1))
    };
    match mode {
        CheckMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::Resource {
                    what: format!("exhaustive bi-density scan at n = {n}"),
                    limit: MAX_EXHAUSTIVE_N as u128,
                });
            }
            let rows: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
            let (pairs, best) = (1u64..1 << n)
                .into_par_iter()
                .filter(|a| a.count_ones() as usize >= min_size)
                .map(|a| {
                    let mut pairs = 0u64;
                    let mut best: Option<(u64, u64, u64)> = None;
                    scan_a(&rows, n, a, |b, e| {
                        if (b.count_ones() as usize) < min_size {
                            return;
                        }
                        pairs += 1;
                        let cand = (a, b, e);
                        if best.as_ref().is_none_or(|w| lower(&cand, w)) {
                            best = Some(cand);
                        }
                    });
                    (pairs, best)
                })
                .reduce(
                    || (0, None),
                    |(p1, b1), (p2, b2)| {
                        let best = match (b1, b2) {
                            (None, w) | (w, None) => w,
                            (Some(x), Some(y)) => Some(if lower(&y, &x) { y } else { x }),
                        };
                        (p1 + p2, best)
                    },
                );
            let violation = best
                .filter(|&(a, b, e)| !gt(e, q, (a.count_ones() * b.count_ones()) as usize))
                .map(|(a, b, e)| DensityPairViolation {
                    a: VertexSet::from_mask(n, a),
                    b: VertexSet::from_mask(n, b),
                    edges: e,
                });
            Ok(BiDenseResult {
                pass: violation.is_none(),
                min_size,
                pairs_checked: pairs,
                violation,
            })
        }
        CheckMode::Sampled { samples, seed } => {
            let mut r = rng::seeded(seed);
            let mut pairs = 0;
            let mut worst: Option<DensityPairViolation> = None;
            if 2 * min_size <= n {
                for _ in 0..samples {
                    let (a, b) = random_pair(n, min_size, &mut r);
                    pairs += 1;
                    let e = g.e_pair(&a, &b);
                    let size = a.len() * b.len();
                    if gt(e, q, size) {
                        continue;
                    }
                    let replace = match &worst {
                        None => true,
                        Some(w) => {
                            (e as u128) * ((w.a.len() * w.b.len()) as u128)
                                < (w.edges as u128) * size as u128
                        }
                    };
                    if replace {
                        worst = Some(DensityPairViolation { a, b, edges: e });
                    }
                }
            }
            Ok(BiDenseResult {
                pass: worst.is_none(),
                min_size,
                pairs_checked: pairs,
                violation: worst,
            })
        }
    }
}

/// `e > q · size`.
fn gt(e: u64, q: &Rational, size: usize) -> bool {
    !rational::le_scaled(e as usize, q, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn paley_small_cases() {
        let p5 = paley(5).unwrap();
        assert_eq!(p5, Graph::cycle(5));
        let p13 = paley(13).unwrap();
        assert_eq!(regular_degree(&p13), Some(6));
        assert!(paley(7).is_err());
        assert!(paley(9).is_err());
    }

    #[test]
    fn dgt_small_cases() {
        let g = dgt(3, 2).unwrap();
        assert_eq!((g.n(), regular_degree(&g)), (9, Some(4)));
        assert!(dgt(4, 2).is_err());
        assert!(dgt(3, 5).is_err());
    }

    #[test]
    fn spectra_of_small_graphs() {
        let k4 = spectral_profile(&Graph::complete(4)).unwrap();
        assert!((k4.eigenvalues[0] - 3.0).abs() < 1e-9);
        assert!(k4.eigenvalues[1..].iter().all(|x| (x + 1.0).abs() < 1e-9));
        let c4 = spectral_profile(&Graph::cycle(4)).unwrap();
        let want = [2.0, 0.0, 0.0, -2.0];
        for (x, y) in c4.eigenvalues.iter().zip(want) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_graph_is_trivially_mixing() {
        let c = certify_mixing(
            &Graph::empty(6),
            &rat(0, 1),
            Lambda::Value(rat(0, 1)),
            CertMode::Exhaustive,
        )
        .unwrap();
        assert!(c.pass);
        assert_eq!(c.pairs_checked, 3u64.pow(6) - 2 * 2u64.pow(6) + 1);
    }

    #[test]
    fn bidense_trivial_cases() {
        let k = bi_dense_check(
            &Graph::complete(8),
            &rat(1, 2),
            &rat(1, 4),
            CheckMode::Exhaustive,
        )
        .unwrap();
        assert!(k.pass);
        let e = bi_dense_check(
            &Graph::empty(8),
            &rat(1, 10),
            &rat(1, 4),
            CheckMode::Exhaustive,
        )
        .unwrap();
        assert!(!e.pass);
        let v = e.violation.unwrap();
        assert!(v.a.len() >= 2 && v.b.len() >= 2 && v.edges == 0);
    }
}
