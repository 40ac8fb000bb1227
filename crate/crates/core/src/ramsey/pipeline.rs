//! Red `H1` or blue `H2` in a red/blue colouring of a pseudo-random host.
//!
//! The host's non-edges are coloured green. If there is no induced red
//! `H1`, the red/green colouring avoids the pattern "red on `H1`, green
//! elsewhere", so the pattern-avoiding split feeds the sparse-family
//! iteration, which yields `2^h` sets with little red between them. Each
//! set is cut into blocks, the blocks are assigned along a proper colouring
//! of `H2`, and the greedy embedder looks for a blue `H2`.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::{EdgeColoring, BLUE, GREEN, RED};
use crate::error::{DensityViolation, Error, Result};
use crate::graph::Graph;
use crate::keylemma::{iterate_sparse, SparseWitness};
use crate::pattern::PatternGraph;
use crate::pseudorandom::{dgt, paley, spectral_profile};
use crate::rational::{self, big, big_int, big_to_f64, rat, BigRational, Rational};
use crate::rng;
use crate::witness::{verify_embedding, Embedding};

use super::check_red_blue;
use super::embed::{embed_induced_monochromatic, EmbedFailure, EmbedParams};
use super::psi::PsiFreeFinder;

/// Parameters actually used for a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineParams {
    /// Edge density of the host.
    #[serde(with = "crate::rational::serde_str")]
    pub p: Rational,
    /// Density bound handed to the sparse-family iteration.
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    /// Set-size ratio handed to the sparse-family iteration.
    #[serde(with = "crate::rational::serde_str")]
    pub rho: Rational,
    /// Vertex orders the pattern-avoiding split tries per call.
    pub orders: usize,
    pub seed: u64,
    /// Mixing constant of the host, if known; only used to report whether
    /// the run is inside the asymptotic regime.
    pub lambda: Option<f64>,
}

impl PipelineParams {
    /// Desk-scale defaults: `eps = 4p/(1000k²)`, so that finder pairs meet
    /// the embedder's red budget, `rho = 1/(2k²)` and 8 vertex orders.
    pub fn desk(p: Rational, k: usize) -> Self {
        let k = k.max(1) as i128;
        PipelineParams {
            p,
            eps: (p * 4 / (1000 * k * k)).min(rat(1, 2)),
            rho: rat(1, 2 * k * k).min(rat(1, 2)),
            orders: 8,
            seed: 0,
            lambda: None,
        }
    }
}

/// The asymptotic parameter chain, exact where it is rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cascade {
    pub k: usize,
    pub d: usize,
    pub chi: usize,
    /// `1 − 7p/6`.
    #[serde(with = "crate::rational::serde_big")]
    pub q: BigRational,
    /// `p/(1000k⁶)`.
    #[serde(with = "crate::rational::serde_big")]
    pub eps: BigRational,
    /// `(ε/4)^d q^k k^{−2}`.
    #[serde(with = "crate::rational::serde_big")]
    pub rho: BigRational,
    /// `⌈log₂ χ⌉`.
    pub h: usize,
    /// `(ρ/2)^{h−1}`.
    #[serde(with = "crate::rational::serde_big")]
    pub alpha: BigRational,
    /// `p/(1000k²)`.
    #[serde(with = "crate::rational::serde_big")]
    pub beta: BigRational,
    /// Guaranteed set size `αρn`, as a float.
    pub set_size: f64,
    /// `((p/(10k))^d 2^{−pk})^{20 log₂ χ} n`, as a float.
    pub lambda_bound: f64,
    pub lambda: Option<f64>,
    pub within_regime: Option<bool>,
}

fn ceil_log2(x: usize) -> usize {
    (usize::BITS - (x.max(1) - 1).leading_zeros()) as usize
}

pub fn cascade(
    n: usize,
    p: &Rational,
    h1: &PatternGraph,
    h2: &PatternGraph,
    lambda: Option<f64>,
) -> Cascade {
    let k = h1.k.max(h2.k);
    let d = h1.degeneracy.max(h2.degeneracy);
    let chi = h1.chromatic_number.max(h2.chromatic_number).max(2);
    let bp = big(p);
    let bk = big_int(k);
    let q = big_int(1) - &bp * big(&rat(7, 6));
    let eps = &bp / (big_int(1000) * bk.pow(6));
    let rho = (&eps / big_int(4)).pow(d as i32) * q.pow(k as i32) / bk.pow(2);
    let h = ceil_log2(chi);
    let alpha = (&rho / big_int(2)).pow(h as i32 - 1);
    let beta = &bp / (big_int(1000) * bk.pow(2));
    let pf = rational::to_f64(p);
    let base = (pf / (10.0 * k as f64)).powi(d as i32) * (-pf * k as f64).exp2();
    let lambda_bound = base.powf(20.0 * (chi as f64).log2()) * n as f64;
    Cascade {
        k,
        d,
        chi,
        set_size: big_to_f64(&(&alpha * &rho)) * n as f64,
        q,
        eps,
        rho,
        h,
        alpha,
        beta,
        lambda_bound,
        lambda,
        within_regime: lambda.map(|l| l <= lambda_bound),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum BranchOutcome {
    /// The forbidden pattern appeared in the forbidden colour.
    Forbidden { embedding: Embedding },
    /// The target pattern was embedded in the target colour.
    Target { embedding: Embedding },
    Failed {
        stage: String,
        detail: String,
        embed_failure: Option<Box<EmbedFailure>>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    /// Colour the forbidden pattern is sought in, in the input colouring.
    pub forbidden_color: u8,
    pub forbidden_pattern: String,
    pub target_color: u8,
    pub target_pattern: String,
    pub witness: Option<SparseWitness>,
    pub parts: Option<Vec<VertexSet>>,
    pub density_violations: Vec<DensityViolation>,
    pub outcome: BranchOutcome,
}

/// A verified monochromatic induced copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineHit {
    pub color: u8,
    pub pattern: String,
    pub embedding: Embedding,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub params: PipelineParams,
    pub cascade: Cascade,
    pub branches: Vec<BranchReport>,
    /// The first branch's copy if it found one, else the second's.
    pub result: Option<PipelineHit>,
}

fn failed(stage: &str, detail: impl Into<String>) -> BranchOutcome {
    BranchOutcome::Failed {
        stage: stage.into(),
        detail: detail.into(),
        embed_failure: None,
    }
}

/// One branch, on a colouring where the forbidden colour is `RED` and the
/// target colour is `BLUE`. `swap` says whether that colouring has its
/// colours exchanged relative to the input, for reporting.
fn branch(
    g: &Graph,
    coloring: &EdgeColoring,
    forbidden: &PatternGraph,
    target: &PatternGraph,
    params: &PipelineParams,
    swap: bool,
) -> BranchReport {
    let outer = |c: u8| if swap { RED + BLUE - c } else { c };
    let mut report = BranchReport {
        forbidden_color: outer(RED),
        forbidden_pattern: forbidden.name.clone(),
        target_color: outer(BLUE),
        target_pattern: target.name.clone(),
        witness: None,
        parts: None,
        density_violations: Vec::new(),
        outcome: failed("start", ""),
    };
    let n = g.n();
    let red = coloring.layer(RED).clone();
    let phi = EdgeColoring::from_layers(vec![
        g.complement(),
        red.clone(),
        coloring.layer(BLUE).clone(),
    ])
    .expect("green, red and blue partition the pairs");
    debug_assert_eq!(phi.layer(GREEN), &g.complement());
    let psi =
        EdgeColoring::of_complete(
            forbidden.k,
            2,
            |i, j| if forbidden.has_edge(i, j) { 2 } else { 1 },
        )
        .expect("two colours");
    let q = Rational::from_integer(1) - params.p * rat(7, 6);
    let finder = PsiFreeFinder::new(
        &phi,
        &psi,
        q,
        params.orders,
        rng::derive(params.seed, swap as u64),
    );
    let h = ceil_log2(target.chromatic_number.max(2));
    let alpha = rational::pow(&(params.rho / 2), h as u32 - 1);
    let res = iterate_sparse(
        &[red],
        &finder,
        &alpha,
        &params.rho,
        &params.eps,
        h,
        &VertexSet::full(n),
    );
    report.density_violations = finder.violations();
    if let Some(e) = finder.found() {
        report.outcome = match verify_embedding(g, Some(coloring), forbidden, &e.map, Some(RED)) {
            Ok(()) => BranchOutcome::Forbidden {
                embedding: Embedding {
                    map: e.map,
                    color: Some(outer(RED)),
                },
            },
            Err(v) => failed("forbidden-check", v.reason),
        };
        return report;
    }
    let w = match res {
        Ok(w) => w,
        Err(e) => {
            report.outcome = failed("sparse-families", e.to_string());
            return report;
        }
    };
    let sets = w.families[0].clone();
    report.witness = Some(w);
    let kt = target.k;
    let block = sets[0].len() / kt;
    if block == 0 || sets.len() < target.chromatic_number {
        report.outcome = failed(
            "blocks",
            format!(
                "{} sets of size {} cannot host {kt} blocks",
                sets.len(),
                sets[0].len()
            ),
        );
        return report;
    }
    let parts: Vec<VertexSet> = (0..kt)
        .map(|i| {
            let vs = sets[target.coloring[i]].to_vec();
            VertexSet::from_iter(n, vs[i * block..(i + 1) * block].iter().copied())
        })
        .collect();
    report.parts = Some(parts.clone());
    let ep = match EmbedParams::new(params.p, kt, target.degeneracy) {
        Ok(ep) => ep,
        Err(e) => {
            report.outcome = failed("embed-params", e.to_string());
            return report;
        }
    };
    report.outcome = match embed_induced_monochromatic(g, coloring, target, &parts, &ep) {
        Ok(e) => BranchOutcome::Target {
            embedding: Embedding {
                map: e.map,
                color: Some(outer(BLUE)),
            },
        },
        Err(Error::EmbedFailure(f)) => BranchOutcome::Failed {
            stage: "embed".into(),
            detail: f.reason.clone(),
            embed_failure: Some(f),
        },
        Err(e) => failed("embed", e.to_string()),
    };
    report
}

/// Looks for an induced red `h1` or an induced blue `h2`, first with red as
/// the forbidden colour and then with the colours exchanged. Both branches
/// run; the report keeps every intermediate certificate. A missing
/// `result` means both branches failed.
pub fn induced_ramsey_pipeline(
    g: &Graph,
    coloring: &EdgeColoring,
    h1: &PatternGraph,
    h2: &PatternGraph,
    params: &PipelineParams,
) -> Result<PipelineReport> {
    check_red_blue(g, coloring)?;
    rational::check_open_unit("eps", &params.eps)?;
    rational::check_open_unit("rho", &params.rho)?;
    if params.rho > rat(1, 2) {
        return Err(Error::param(
            "rho above 1/2 leaves no room for two disjoint sets",
        ));
    }
    let swapped = coloring.swap_colors(RED, BLUE);
    let (a, b) = rayon::join(
        || branch(g, coloring, h1, h2, params, false),
        || branch(g, &swapped, h2, h1, params, true),
    );
    let hit = |r: &BranchReport| match &r.outcome {
        BranchOutcome::Forbidden { embedding } => Some(PipelineHit {
            color: r.forbidden_color,
            pattern: r.forbidden_pattern.clone(),
            embedding: embedding.clone(),
        }),
        BranchOutcome::Target { embedding } => Some(PipelineHit {
            color: r.target_color,
            pattern: r.target_pattern.clone(),
            embedding: embedding.clone(),
        }),
        BranchOutcome::Failed { .. } => None,
    };
    let result = hit(&a).or_else(|| hit(&b));
    if let Some(r) = &result {
        // Red copies are of `h1` and blue copies of `h2` in both branches.
        let h = if r.color == RED { h1 } else { h2 };
        verify_embedding(g, Some(coloring), h, &r.embedding.map, Some(r.color)).map_err(|v| {
            Error::Contract(format!("pipeline copy fails re-verification: {}", v.reason))
        })?;
    }
    Ok(PipelineReport {
        params: params.clone(),
        cascade: cascade(g.n(), &params.p, h1, h2, params.lambda),
        branches: vec![a, b],
        result,
    })
}

/// Named pseudo-random hosts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Paley { q: usize },
    Dgt { r: usize, t: usize },
}

#[derive(Clone, Debug)]
pub struct PresetHost {
    pub name: String,
    pub graph: Graph,
    pub p: Rational,
    /// Largest non-principal eigenvalue in absolute value.
    pub lambda: f64,
}

/// The host with `p = degree / n` and its measured spectral `λ`.
pub fn preset_host(preset: Preset) -> Result<PresetHost> {
    let (name, graph) = match preset {
        Preset::Paley { q } => (format!("paley({q})"), paley(q)?),
        Preset::Dgt { r, t } => (format!("dgt({r},{t})"), dgt(r, t)?),
    };
    let prof = spectral_profile(&graph)?;
    let degree = prof
        .degree
        .ok_or_else(|| Error::Contract(format!("{name} is not regular")))?;
    Ok(PresetHost {
        name,
        p: rat(degree as i128, graph.n() as i128),
        lambda: prof.lambda,
        graph,
    })
}
