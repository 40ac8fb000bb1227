//! Half-set discrepancy: a deviation witness for graphs with few induced
//! copies of a pattern, the half-set step that transfers a deviating set to
//! one of size `⌊n/2⌋`, and a blown-up random graph whose half-sets all
//! stay close to `n²/16`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::extract::split::{split_or_embed, ExtractionParams, SplitOutcome, SplitPolicy};
use crate::graph::Graph;
use crate::oracles::{
    self, best_half_subset, best_half_subset_against, OracleBudget, MAX_HALF_SUBSET_N,
};
use crate::pattern::PatternGraph;
use crate::rational::{self, big, big_int, rat, Rational};
use crate::rng;

/// Seeded restarts of the half-set local search.
pub const EGPS_RESTARTS: usize = 16;
/// Base graphs tried by [`low_discrepancy_graph`] before giving up.
pub const BASE_RETRIES: usize = 256;
/// Random subsets checked when the base graph is too large to enumerate.
pub const BASE_SAMPLES: usize = 4096;
/// Largest base graph certified over every subset.
pub const MAX_EXHAUSTIVE_BASE: usize = 16;

fn choose2(m: usize) -> i128 {
    let m = m as i128;
    m * (m - 1) / 2
}

/// `|e - target|`.
fn dev(e: u64, target: &Rational) -> Rational {
    (Rational::from_integer(e as i128) - target).abs()
}

/// `n²/16`, the edge count of a half-set at density one half.
pub fn quarter_target(n: usize) -> Rational {
    let n = n as i128;
    Rational::new(n * n, 16)
}

// ---------------------------------------------------------------------------
// Half-set ladder
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfSetStage {
    Greedy,
    Restart,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EgpsResult {
    pub set: VertexSet,
    pub edges: u64,
    /// `|e(S) - η·C(|S|,2)|`.
    #[serde(with = "rational::serde_str")]
    pub deviation: Rational,
    /// Deviation of the starting set from density `η`.
    #[serde(with = "rational::serde_str")]
    pub start_deviation: Rational,
    pub stage: HalfSetStage,
    /// `deviation < start_deviation / 5`.
    pub below_guarantee: bool,
}

/// A vertex set with the degree of every vertex into it.
struct Tracked<'a> {
    g: &'a Graph,
    set: VertexSet,
    deg: Vec<i64>,
    edges: i64,
}

impl<'a> Tracked<'a> {
    fn new(g: &'a Graph, set: VertexSet) -> Self {
        let deg = (0..g.n()).map(|v| g.degree_in(v, &set) as i64).collect();
        let edges = g.e_set(&set) as i64;
        Tracked { g, set, deg, edges }
    }

    fn insert(&mut self, v: usize) {
        self.edges += self.deg[v];
        self.set.insert(v);
        for u in self.g.neighbourhood(v).iter() {
            self.deg[u] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.set.remove(v);
        self.edges -= self.deg[v];
        for u in self.g.neighbourhood(v).iter() {
            self.deg[u] -= 1;
        }
    }

    /// Best-improving single swaps against a fixed target until none helps;
    /// ties keep the lowest `(out, in)` pair.
    fn swap_search(&mut self, target: &Rational) {
        let n = self.g.n();
        for _ in 0..n.max(8) {
            let cur = dev(self.edges as u64, target);
            let mut best: Option<(Rational, usize, usize)> = None;
            for u in self.set.iter() {
                for v in (0..n).filter(|&v| !self.set.contains(v)) {
                    let e = self.edges - self.deg[u] + self.deg[v] - self.g.has_edge(u, v) as i64;
                    let d = dev(e as u64, target);
                    if d > cur && best.as_ref().is_none_or(|b| d > b.0) {
                        best = Some((d, u, v));
                    }
                }
            }
            let Some((_, u, v)) = best else { return };
            self.remove(u);
            self.insert(v);
        }
    }
}

fn check_eta(eta: &Rational) -> Result<()> {
    if *eta < Rational::zero() || *eta > Rational::one() {
        return Err(Error::param(format!("density {eta} outside [0,1]")));
    }
    Ok(())
}

/// Moves `r` to a set of size `⌊n/2⌋` whose edge count deviates from
/// `η·C(⌊n/2⌋,2)` by at least a fifth of `r`'s deviation from density `η`.
///
/// The ladder stops at the first stage meeting that bound: greedy
/// grow/shrink from `r` followed by swaps, then seeded random restarts,
/// then exhaustive search when `n <= 24`. If nothing reaches the bound the
/// best set found is returned with `below_guarantee` set.
pub fn egps_half_set(g: &Graph, r: &VertexSet, eta: &Rational, seed: u64) -> Result<EgpsResult> {
    check_eta(eta)?;
    let n = g.n();
    if r.universe() != n {
        return Err(Error::param(
            "start set lives in a different vertex universe",
        ));
    }
    let h = n / 2;
    let d = dev(g.e_set(r), &(*eta * choose2(r.len())));
    let need = d / 5;
    let target = *eta * choose2(h);
    let finish = |set: VertexSet, edges: u64, stage| {
        let deviation = dev(edges, &target);
        EgpsResult {
            set,
            edges,
            deviation,
            start_deviation: d,
            stage,
            below_guarantee: deviation < need,
        }
    };

    let mut t = Tracked::new(g, r.clone());
    while t.set.len() != h {
        let s = t.set.len();
        let (grow, next) = if s < h { (true, s + 1) } else { (false, s - 1) };
        let goal = *eta * choose2(next);
        let pick = (0..n)
            .filter(|&v| t.set.contains(v) != grow)
            .map(|v| {
                let e = if grow {
                    t.edges + t.deg[v]
                } else {
                    t.edges - t.deg[v]
                };
                (dev(e as u64, &goal), v)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(_, v)| v)
            .expect("a vertex is available to move");
        if grow {
            t.insert(pick);
        } else {
            t.remove(pick);
        }
    }
    t.swap_search(&target);
    let greedy = finish(t.set, t.edges as u64, HalfSetStage::Greedy);
    if !greedy.below_guarantee {
        return Ok(greedy);
    }

    let restarts: Vec<(Rational, usize, VertexSet, u64)> = (0..EGPS_RESTARTS)
        .into_par_iter()
        .map(|i| {
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(&mut rng::seeded(rng::derive(seed, i as u64)));
            let mut t = Tracked::new(g, VertexSet::from_iter(n, verts[..h].iter().copied()));
            t.swap_search(&target);
            (dev(t.edges as u64, &target), i, t.set, t.edges as u64)
        })
        .collect();
    let best = restarts
        .into_iter()
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("at least one restart");
    let mut out = if best.0 > greedy.deviation {
        finish(best.2, best.3, HalfSetStage::Restart)
    } else {
        greedy
    };
    if !out.below_guarantee {
        return Ok(out);
    }

    if n <= MAX_HALF_SUBSET_N {
        let opt = best_half_subset_against(g, &target)?;
        if opt.deviation > out.deviation {
            out = finish(opt.set, opt.edges, HalfSetStage::Exhaustive);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Deviation witness
// ---------------------------------------------------------------------------

/// Which set fed the half-set step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RSource {
    A,
    B,
    Union,
    /// No split was available (tiny `n`, or only embeddings were found at
    /// `n <= 24`); the whole vertex set was used.
    Whole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMethod {
    Ladder,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub set: VertexSet,
    pub edges: u64,
    /// `|e(S) - n²/16|`.
    #[serde(with = "rational::serde_str")]
    pub deviation: Rational,
    pub r_source: RSource,
    pub r: VertexSet,
    /// `|e(R) - C(|R|,2)/2|`.
    #[serde(with = "rational::serde_str")]
    pub r_deviation: Rational,
    /// Edge density of the whole graph.
    #[serde(with = "rational::serde_str")]
    pub eta: Rational,
    pub half_set: EgpsResult,
    /// Lower bound on `deviation` implied by the half-set step:
    /// `start_deviation/5 - |η·C(⌊n/2⌋,2) - n²/16|`, floored at zero.
    #[serde(with = "rational::serde_str")]
    pub target: Rational,
    /// Best half-set deviation from `n²/16`, when `n <= 24`.
    #[serde(serialize_with = "opt_rational")]
    pub oracle_optimum: Option<Rational>,
    pub method: WitnessMethod,
    /// Labelled induced copies of the pattern, when the oracle budget allowed
    /// counting them.
    pub pattern_copies: Option<u128>,
    pub below_guarantee: bool,
}

fn opt_rational<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

/// Per-step thresholds `ε_i = (1 - 2^{i-k-2}ε)/2` and `δ_i = 2^{i-k-2}ε`.
pub fn witness_params(k: usize, eps: &Rational, seed: u64) -> ExtractionParams {
    let (eps_i, delta): (Vec<Rational>, Vec<_>) = (1..k)
        .map(|i| {
            let x = *eps / Rational::from_integer(1i128 << (k + 2 - i));
            ((Rational::one() - x) / 2, big(&x))
        })
        .unzip();
    ExtractionParams {
        eps: eps_i,
        delta,
        retries: crate::extract::split::DEFAULT_RETRIES,
        node_budget: crate::extract::split::DEFAULT_NODE_BUDGET,
        seed,
        policy: SplitPolicy::PreferSplit,
    }
}

/// `count <= (1 - ε)2^{-C(k,2)}n^k`.
fn sparse_in_pattern(count: u128, n: usize, k: usize, eps: &Rational) -> bool {
    let lhs = BigInt::from(count) * (BigInt::one() << (k * (k - 1) / 2));
    let rhs = (big_int(1) - big(eps)) * big_int(n).pow(k as i32);
    num_rational::BigRational::from_integer(lhs) <= rhs
}

/// Finds a half-set deviating from `n²/16` in a graph with few induced
/// copies of `h`. The embed-or-split search with per-step thresholds
/// [`witness_params`] yields a pair `(A, B)` of density far from one half;
/// one of `A`, `B`, `A ∪ B` then deviates from density one half and the
/// half-set ladder moves it to size `⌊n/2⌋`.
///
/// At `n <= 24` the result is compared with the exhaustive optimum and
/// replaced by it when the ladder falls short of a fifth of it.
pub fn deviation_witness(
    g: &Graph,
    h: &PatternGraph,
    eps: &Rational,
    seed: u64,
) -> Result<DiscrepancyReport> {
    rational::check_open_unit("eps", eps)?;
    let (n, k) = (g.n(), h.k);
    if n < 2 {
        return Err(Error::pre("need at least 2 vertices"));
    }
    let pattern_copies = match oracles::count_labeled_induced(g, h, &OracleBudget::default()) {
        Ok(c) => Some(c),
        Err(Error::Resource { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(count) = pattern_copies {
        if !sparse_in_pattern(count, n, k, eps) {
            return Err(Error::NotSparseInH {
                count,
                bound: format!("(1-{eps})·2^-{}·{n}^{k}", k * (k - 1) / 2),
            });
        }
    }

    let small = n <= MAX_HALF_SUBSET_N;
    let whole = (RSource::Whole, VertexSet::full(n));
    let (r_source, r) = if n < k.max(2) {
        whole
    } else {
        match split_or_embed(g, h, &witness_params(k, eps, seed)) {
            Ok(SplitOutcome::Split(w)) => {
                let u = w.a.union(&w.b);
                [(RSource::A, w.a), (RSource::B, w.b), (RSource::Union, u)]
                    .into_iter()
                    .max_by(|x, y| half_dev(g, &x.1).cmp(&half_dev(g, &y.1)).then(y.0.cmp_rank(&x.0)))
                    .expect("three candidates")
            }
            Ok(SplitOutcome::Embedding(e)) if !small => {
                return Err(Error::pre(format!(
                    "only induced copies of the pattern were found (e.g. {:?}); the graph is not sparse in it",
                    e.map
                )))
            }
            Err(e @ Error::SearchFailure { .. }) if !small => return Err(e),
            Ok(SplitOutcome::Embedding(_)) | Err(Error::SearchFailure { .. }) => whole,
            Err(e) => return Err(e),
        }
    };
    let r_deviation = half_dev(g, &r);
    let eta = Rational::new(g.edge_count() as i128, choose2(n));
    let half_set = egps_half_set(g, &r, &eta, seed)?;

    let quarter = quarter_target(n);
    let gap = (eta * choose2(n / 2) - quarter).abs();
    let target = (half_set.start_deviation / 5 - gap).max(Rational::zero());
    // The half-set step aims at density η; swaps retarget it at n²/16.
    let mut t = Tracked::new(g, half_set.set.clone());
    t.swap_search(&quarter);
    let (mut set, mut edges) = (t.set, t.edges as u64);
    let mut deviation = dev(edges, &quarter);
    let mut method = WitnessMethod::Ladder;
    let mut oracle_optimum = None;
    if small {
        let opt = best_half_subset(g)?;
        if deviation < opt.deviation / 5 {
            set = opt.set;
            edges = opt.edges;
            deviation = opt.deviation;
            method = WitnessMethod::Exhaustive;
        }
        oracle_optimum = Some(opt.deviation);
    }
    let below_guarantee = deviation < target || oracle_optimum.is_some_and(|o| deviation < o / 5);
    Ok(DiscrepancyReport {
        n,
        set,
        edges,
        deviation,
        r_source,
        r,
        r_deviation,
        eta,
        half_set,
        target,
        oracle_optimum,
        method,
        pattern_copies,
        below_guarantee,
    })
}

impl RSource {
    /// Tie order among equally deviating candidates: `A`, `B`, `A ∪ B`.
    fn cmp_rank(&self, other: &Self) -> std::cmp::Ordering {
        (*self as u8).cmp(&(*other as u8))
    }
}

/// `|e(R) - C(|R|,2)/2|`.
fn half_dev(g: &Graph, r: &VertexSet) -> Rational {
    dev(g.e_set(r), &Rational::new(choose2(r.len()), 2))
}

// ---------------------------------------------------------------------------
// Low-discrepancy construction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseCertificate {
    /// Size of the base graph.
    pub l: usize,
    pub attempts: usize,
    /// Every subset was checked, rather than a random sample.
    pub exhaustive: bool,
    pub subsets_checked: u64,
    /// Largest `|4e(X) - |X|²|` seen; the bound is `8ℓ^{3/2}`.
    pub worst_scaled: u64,
    pub worst_set: VertexSet,
    pub clique_number: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowDiscrepancy {
    pub k: usize,
    pub n: usize,
    #[serde(serialize_with = "edge_list")]
    pub base: Graph,
    /// The blow-up; recoverable from `base`, so not serialised.
    #[serde(skip)]
    pub graph: Graph,
    pub certificate: BaseCertificate,
    /// `4n²/√ℓ`, the half-set deviation bound implied by the certificate.
    pub half_set_bound: f64,
    /// Exact best half-set deviation from `n²/16`, when `n <= 24`.
    #[serde(serialize_with = "opt_rational")]
    pub half_set_max: Option<Rational>,
}

fn edge_list<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(g.edges())
}

/// `ℓ = 2^{⌊k/2⌋}`.
pub fn base_size(k: usize) -> usize {
    1 << (k / 2)
}

/// `|e(S) - n²/16| <= 4n²/√ℓ`, decided exactly as
/// `(16e - n²)²·ℓ <= 4096·n⁴`.
pub fn within_half_set_bound(n: usize, l: usize, edges: u64) -> bool {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let scaled = BigInt::from(16u64) * BigInt::from(edges) - &n2;
    &scaled * &scaled * BigInt::from(l) <= BigInt::from(4096u64) * &n2 * &n2
}

/// `(4e - m²)² <= 64ℓ³`, i.e. `|e(X) - |X|²/4| <= 2ℓ^{3/2}`.
fn base_ok(scaled: u64, l: usize) -> bool {
    let l = l as u128;
    (scaled as u128).pow(2) <= 64 * l * l * l
}

fn scaled_dev(e: u64, m: usize) -> u64 {
    (4 * e as i128 - (m * m) as i128).unsigned_abs() as u64
}

/// Some clique on `k` vertices, by branch and bound with a greedy
/// colouring bound.
pub fn find_clique(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn colour_bound(g: &Graph, p: &VertexSet) -> usize {
        let mut left = p.clone();
        let mut colours = 0;
        while left.first().is_some() {
            colours += 1;
            let mut q = left.clone();
            while let Some(v) = q.first() {
                q = q.difference(&g.neighbourhood(v));
                q.remove(v);
                left.remove(v);
            }
        }
        colours
    }
    fn rec(g: &Graph, k: usize, cur: &mut Vec<usize>, mut p: VertexSet) -> bool {
        if cur.len() == k {
            return true;
        }
        while let Some(v) = p.first() {
            if cur.len() + colour_bound(g, &p) < k {
                return false;
            }
            cur.push(v);
            if rec(g, k, cur, g.neighbours_in(v, &p)) {
                return true;
            }
            cur.pop();
            p.remove(v);
        }
        false
    }
    let mut cur = Vec::new();
    rec(g, k, &mut cur, g.vertices()).then_some(cur)
}

fn clique_number(g: &Graph) -> usize {
    let mut w = 0;
    while find_clique(g, w + 1).is_some() {
        w += 1;
    }
    w
}

/// Checks `|e(X) - |X|²/4| <= 2ℓ^{3/2}` on every subset of `base` when it
/// has at most 16 vertices, else on `samples` seeded random subsets.
fn certify_base(base: &Graph, samples: usize, seed: u64) -> (bool, bool, u64, u64, VertexSet) {
    let l = base.n();
    let mut worst = (0u64, VertexSet::new(l));
    let mut note = |scaled: u64, x: &dyn Fn() -> VertexSet| {
        if scaled > worst.0 {
            worst = (scaled, x());
        }
    };
    if l <= MAX_EXHAUSTIVE_BASE {
        let mut e = vec![0u16; 1 << l];
        for mask in 1usize..1 << l {
            let v = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            e[mask] = e[rest] + (base.row_mask(v) & rest as u64).count_ones() as u16;
            note(
                scaled_dev(e[mask] as u64, mask.count_ones() as usize),
                &|| VertexSet::from_mask(l, mask as u64),
            );
        }
        let ok = base_ok(worst.0, l);
        return (ok, true, 1 << l, worst.0, worst.1);
    }
    let mut r = rng::seeded(seed);
    for _ in 0..samples {
        let size = r.gen_range(0..=l);
        let mut verts: Vec<usize> = (0..l).collect();
        verts.shuffle(&mut r);
        let x = VertexSet::from_iter(l, verts[..size].iter().copied());
        note(scaled_dev(base.e_set(&x), size), &|| x.clone());
    }
    (base_ok(worst.0, l), false, samples as u64, worst.0, worst.1)
}

/// A `K_k`-free graph on `n` vertices whose half-sets all have close to
/// `n²/16` edges: a seeded `G(ℓ, 1/2)` base with `ℓ = 2^{⌊k/2⌋}`, retried
/// until it is `K_k`-free and passes the subset certificate, blown up by
/// `n/ℓ`.
pub fn low_discrepancy_graph(k: usize, n: usize, seed: u64) -> Result<LowDiscrepancy> {
    if !(2..=16).contains(&k) {
        return Err(Error::param(format!("k must lie in 2..=16, got {k}")));
    }
    let l = base_size(k);
    if n < l || !n.is_multiple_of(l) {
        return Err(Error::pre(format!(
            "n = {n} must be a positive multiple of {l}"
        )));
    }
    let half = rat(1, 2);
    let mut cliquey = 0;
    let mut uncertified = 0;
    for attempt in 0..BASE_RETRIES {
        let s = rng::derive(seed, attempt as u64);
        let base = Graph::gnp(l, &half, &mut rng::seeded(s));
        if find_clique(&base, k).is_some() {
            cliquey += 1;
            continue;
        }
        let (ok, exhaustive, subsets_checked, worst_scaled, worst_set) =
            certify_base(&base, BASE_SAMPLES, rng::derive(s, u64::MAX));
        if !ok {
            uncertified += 1;
            continue;
        }
        let graph = base.blow_up(n / l);
        let half_set_max = if n <= MAX_HALF_SUBSET_N {
            Some(best_half_subset(&graph)?.deviation)
        } else {
            None
        };
        return Ok(LowDiscrepancy {
            k,
            n,
            certificate: BaseCertificate {
                l,
                attempts: attempt + 1,
                exhaustive,
                subsets_checked,
                worst_scaled,
                worst_set,
                clique_number: clique_number(&base),
            },
            base,
            graph,
            half_set_bound: 4.0 * (n * n) as f64 / (l as f64).sqrt(),
            half_set_max,
        });
    }
    Err(Error::SearchFailure {
        attempts: BASE_RETRIES,
        detail: format!(
            "{cliquey} bases contained K_{k}, {uncertified} failed the subset certificate"
        ),
    })
}

/// One row of the measured discrepancy envelope at `(k, n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub k: usize,
    pub n: usize,
    /// Deviation of the witness found in the constructed `K_k`-free graph.
    pub lower_witness: f64,
    /// The construction's certified half-set bound.
    pub upper_bound: f64,
}

pub fn envelope_row(k: usize, n: usize, eps: &Rational, seed: u64) -> Result<EnvelopeRow> {
    let c = low_discrepancy_graph(k, n, seed)?;
    let kk = PatternGraph::new(format!("k{k}"), Graph::complete(k))?;
    let w = deviation_witness(&c.graph, &kk, eps, seed)?;
    Ok(EnvelopeRow {
        k,
        n,
        lower_witness: rational::to_f64(&w.deviation),
        upper_bound: c.half_set_bound,
    })
}

pub const ENVELOPE_HEADER: &str = "k,n,measured_lower_witness,measured_upper_bound";

impl EnvelopeRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.k, self.n, self.lower_witness, self.upper_bound
        )
    }
}
