use std::path::Path;

use ramsey_forge::coloring::{BLUE, RED};
use ramsey_forge::discrepancy::{self, deviation_witness, envelope_row, low_discrepancy_graph};
use ramsey_forge::extract::{
    equitable_density_partition, hom_lower_bound, sparse_or_dense_subset,
    verify_density_certificate, verify_partition,
};
use ramsey_forge::io::{self, GraphFormat};
use ramsey_forge::oracles::{self, OracleBudget};
use ramsey_forge::pseudorandom::{self, CertMode, CheckMode, Lambda};
use ramsey_forge::ramsey::{
    embed_induced_monochromatic, induced_ramsey_pipeline, preset_host, random_coloring,
    verify_embedding, EmbedParams, PipelineParams, Preset,
};
use ramsey_forge::rational::{parse_rational, Rational};
use ramsey_forge::witness::is_homogeneous;
use ramsey_forge::{rng, EdgeColoring, Error, Graph, PatternGraph, VertexSet};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{
    CertifyKind, CheckModeArg, Cli, Command, DiscrepancyKind, GenKind, OracleOp, PatternArgs,
    PresetArg, RamseyArgs,
};

/// What a subcommand produced, before formatting.
pub struct Report {
    pub command: String,
    /// Digest of the canonical text of every input.
    pub digest: String,
    /// `false` when the run was valid but its claim was not met.
    pub met: bool,
    pub result: Value,
    /// Oracle runs report their witness separately.
    pub witness: Option<Value>,
    /// Raw text output (generated graphs).
    pub text: Option<String>,
    /// Header and rows for commands with a natural table form.
    pub table: Option<(String, Vec<String>)>,
}

type Res<T> = std::result::Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

fn report(command: &str, inputs: &[String], met: bool, result: Value) -> Report {
    Report {
        command: command.to_string(),
        digest: digest(inputs),
        met,
        result,
        witness: None,
        text: None,
        table: None,
    }
}

fn digest(inputs: &[String]) -> String {
    let mut h = Sha256::new();
    for (i, s) in inputs.iter().enumerate() {
        if i > 0 {
            h.update(b"\n--\n");
        }
        h.update(s.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read_text(path: &Path) -> Res<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| e.to_string())?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// The graph and its canonical edge-list text.
fn load_graph(path: &Path) -> Res<(Graph, String)> {
    let text = read_text(path)?;
    let g = io::read_graph(&text, None).map_err(|e| format!("{}: {e}", path.display()))?;
    let canon = io::write_edge_list(&g);
    Ok((g, canon))
}

fn load_coloring(path: &Path) -> Res<(EdgeColoring, String)> {
    let text = read_text(path)?;
    let c = io::read_coloring(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let canon = io::write_coloring(&c);
    Ok((c, canon))
}

/// A built-in pattern name, or an edge-list file when one exists at `spec`.
fn pattern(spec: &str) -> Res<(PatternGraph, String)> {
    let path = Path::new(spec);
    let h = if path.is_file() {
        let (g, _) = load_graph(path)?;
        let name = path
            .file_stem()
            .map_or("pattern".into(), |s| s.to_string_lossy().into_owned());
        PatternGraph::new(name, g).map_err(err)?
    } else {
        PatternGraph::named(spec).map_err(err)?
    };
    let canon = io::write_edge_list(h.graph());
    Ok((h, canon))
}

fn rational(name: &str, s: &str) -> Res<Rational> {
    parse_rational(s).map_err(|e| format!("--{name}: {e}"))
}

fn budget(cli: &Cli) -> OracleBudget {
    OracleBudget {
        max_work: cli.config.oracle_cap,
    }
}

pub fn run(cli: &Cli) -> Res<Report> {
    match &cli.command {
        Command::Gen { kind, graph_format } => gen(cli, kind, graph_format),
        Command::Certify { kind } => certify(kind),
        Command::Extract(a) => extract(cli, a),
        Command::Partition(a) => partition(cli, a),
        Command::Hom { input, pattern: p } => hom(cli, &input.graph, p),
        Command::Embed {
            input,
            coloring,
            pattern: p,
            p: density,
        } => embed(&input.graph, coloring, p, density),
        Command::Ramsey(a) => ramsey(cli, a),
        Command::Discrepancy { kind } => discrepancy(cli, kind),
        Command::Oracle { op } => oracle(cli, op),
    }
}

fn gen(cli: &Cli, kind: &GenKind, format: &str) -> Res<Report> {
    let format: GraphFormat = format.parse().map_err(err)?;
    let (name, g, inputs) = match kind {
        GenKind::Paley { q } => (
            "gen paley",
            pseudorandom::paley(*q).map_err(err)?,
            vec![format!("q={q}")],
        ),
        GenKind::Dgt { r, t } => (
            "gen dgt",
            pseudorandom::dgt(*r, *t).map_err(err)?,
            vec![format!("r={r} t={t}")],
        ),
        GenKind::Gnp { n, p } => {
            let p = rational("p", p)?;
            if p < Rational::from_integer(0) || p > Rational::from_integer(1) {
                return Err(format!("--p {p} outside [0,1]"));
            }
            let g = Graph::gnp(*n, &p, &mut rng::seeded(cli.config.seed));
            (
                "gen gnp",
                g,
                vec![format!("n={n} p={p} seed={}", cli.config.seed)],
            )
        }
        GenKind::Blowup { input, m } => {
            if *m == 0 {
                return Err("--m must be positive".into());
            }
            let (g, canon) = load_graph(&input.graph)?;
            ("gen blowup", g.blow_up(*m), vec![canon, format!("m={m}")])
        }
    };
    let mut r = report(
        name,
        &inputs,
        true,
        json!({ "n": g.n(), "edges": g.edge_count() }),
    );
    r.text = Some(io::write_graph(&g, format));
    Ok(r)
}

fn check_mode(mode: CheckModeArg, samples: u64, seed: u64) -> Res<CheckMode> {
    match mode {
        CheckModeArg::Exhaustive => Ok(CheckMode::Exhaustive),
        CheckModeArg::Sampled => Ok(CheckMode::Sampled { samples, seed }),
        CheckModeArg::Spectral => Err("bi-density has no spectral mode".into()),
    }
}

/// `sqrt` (√n), `sqrt(x)` or a rational.
fn parse_lambda(s: &str, n: usize) -> Res<Lambda> {
    let s = s.trim();
    if s == "sqrt" {
        return Ok(Lambda::Sqrt(Rational::from_integer(n as i128)));
    }
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Lambda::Sqrt(rational("lambda", inner)?));
    }
    Ok(Lambda::Value(rational("lambda", s)?))
}

fn certify(kind: &CertifyKind) -> Res<Report> {
    match kind {
        CertifyKind::Mixing {
            input,
            p,
            lambda,
            mode,
            samples,
        } => {
            let (g, canon) = load_graph(&input.graph)?;
            let p = rational("p", p)?;
            let lam = parse_lambda(lambda, g.n())?;
            let mode = match mode {
                CheckModeArg::Exhaustive => CertMode::Exhaustive,
                CheckModeArg::Spectral => CertMode::Spectral,
                CheckModeArg::Sampled => CertMode::Sampled {
                    samples: *samples,
                    seed: 0,
                },
            };
            let c = pseudorandom::certify_mixing(&g, &p, lam, mode).map_err(err)?;
            let inputs = [canon, format!("p={p} lambda={lam} mode={mode:?}")];
            Ok(report("certify mixing", &inputs, c.pass, to_value(&c)))
        }
        CertifyKind::Bidense {
            input,
            q,
            delta,
            mode,
            samples,
        } => {
            let (g, canon) = load_graph(&input.graph)?;
            let (q, delta) = (rational("q", q)?, rational("delta", delta)?);
            let mode = check_mode(*mode, *samples, 0)?;
            let r = pseudorandom::bi_dense_check(&g, &q, &delta, mode).map_err(err)?;
            let inputs = [canon, format!("q={q} delta={delta} mode={mode:?}")];
            Ok(report("certify bidense", &inputs, r.pass, to_value(&r)))
        }
        CertifyKind::Spectrum { input } => {
            let (g, canon) = load_graph(&input.graph)?;
            let s = pseudorandom::spectral_profile(&g).map_err(err)?;
            Ok(report("certify spectrum", &[canon], true, to_value(&s)))
        }
    }
}

fn extract(cli: &Cli, a: &PatternArgs) -> Res<Report> {
    let (g, canon) = load_graph(&a.input.graph)?;
    let (h, hcanon) = pattern(&a.pattern)?;
    let eps = rational("eps", &a.eps)?;
    let c = sparse_or_dense_subset(&g, &h, &eps, cli.config.seed).map_err(err)?;
    verify_density_certificate(&g, &c).map_err(err)?;
    let inputs = [canon, hcanon, format!("eps={eps} seed={}", cli.config.seed)];
    Ok(report("extract", &inputs, true, to_value(&c)))
}

fn partition(cli: &Cli, a: &PatternArgs) -> Res<Report> {
    let (g, canon) = load_graph(&a.input.graph)?;
    let (h, hcanon) = pattern(&a.pattern)?;
    let eps = rational("eps", &a.eps)?;
    let p =
        equitable_density_partition(&g, &h, &eps, cli.config.seed, &budget(cli)).map_err(err)?;
    verify_partition(&g, &p).map_err(err)?;
    let inputs = [canon, hcanon, format!("eps={eps} seed={}", cli.config.seed)];
    Ok(report("partition", &inputs, true, to_value(&p)))
}

fn hom(cli: &Cli, graph: &Path, p: &str) -> Res<Report> {
    let (g, canon) = load_graph(graph)?;
    let (h, hcanon) = pattern(p)?;
    let r = hom_lower_bound(&g, &h, cli.config.seed).map_err(err)?;
    if !is_homogeneous(&g, &r.set) {
        return Err("internal error: reported set is not homogeneous".into());
    }
    let met = r.set.len() >= r.guaranteed;
    let inputs = [canon, hcanon, format!("seed={}", cli.config.seed)];
    Ok(report("hom", &inputs, met, to_value(&r)))
}

fn equal_parts(n: usize, k: usize) -> Vec<VertexSet> {
    let m = n / k;
    (0..k)
        .map(|i| VertexSet::from_iter(n, i * m..(i + 1) * m))
        .collect()
}

fn embed(graph: &Path, coloring: &Path, p: &str, density: &str) -> Res<Report> {
    let (g, canon) = load_graph(graph)?;
    let (col, ccanon) = load_coloring(coloring)?;
    let (h, hcanon) = pattern(p)?;
    let p = rational("p", density)?;
    let params = EmbedParams::new(p, h.k, h.degeneracy).map_err(err)?;
    let parts = equal_parts(g.n(), h.k);
    let inputs = [canon, ccanon, hcanon, format!("p={p}")];
    match embed_induced_monochromatic(&g, &col, &h, &parts, &params) {
        Ok(e) => {
            verify_embedding(&g, Some(&col), &h, &e.map, Some(BLUE)).map_err(|v| v.reason)?;
            Ok(report(
                "embed",
                &inputs,
                true,
                json!({ "params": params, "embedding": e }),
            ))
        }
        Err(Error::EmbedFailure(f)) => Ok(report(
            "embed",
            &inputs,
            false,
            json!({ "params": params, "failure": f }),
        )),
        Err(e) => Err(err(e)),
    }
}

fn ramsey(cli: &Cli, a: &RamseyArgs) -> Res<Report> {
    let (h1, c1) = pattern(&a.h1)?;
    let (h2, c2) = pattern(&a.h2)?;
    let (g, mut inputs, preset_p, lambda) = match (a.preset, &a.graph) {
        (Some(kind), None) => {
            let preset = match kind {
                PresetArg::Paley => Preset::Paley {
                    q: a.q.ok_or("--preset paley needs --q")?,
                },
                PresetArg::Dgt => Preset::Dgt {
                    r: a.r.ok_or("--preset dgt needs --r")?,
                    t: a.t.ok_or("--preset dgt needs --t")?,
                },
            };
            let host = preset_host(preset).map_err(err)?;
            let canon = io::write_edge_list(&host.graph);
            (host.graph, vec![canon], Some(host.p), Some(host.lambda))
        }
        (None, Some(path)) => {
            let (g, canon) = load_graph(path)?;
            (g, vec![canon], None, None)
        }
        _ => return Err("give exactly one of --graph and --preset".into()),
    };
    let col = match &a.coloring {
        Some(path) => {
            let (c, canon) = load_coloring(path)?;
            inputs.push(canon);
            c
        }
        None => {
            let red = rational("red", &a.red)?;
            let (num, den) = (u32::try_from(*red.numer()), u32::try_from(*red.denom()));
            let (Ok(num), Ok(den)) = (num, den) else {
                return Err("--red must be a fraction in [0,1]".into());
            };
            if num > den {
                return Err("--red must be a fraction in [0,1]".into());
            }
            inputs.push(format!("random red={red} seed={}", cli.config.seed));
            random_coloring(&g, num, den, cli.config.seed)
        }
    };
    let p = match (&a.p, preset_p) {
        (Some(s), _) => rational("p", s)?,
        (None, Some(p)) => p,
        (None, None) => {
            let n = g.n() as i128;
            if n < 2 {
                return Err("host needs at least 2 vertices".into());
            }
            Rational::new(g.edge_count() as i128, n * (n - 1) / 2)
        }
    };
    let mut params = PipelineParams::desk(p, h1.k.max(h2.k));
    params.seed = cli.config.seed;
    params.lambda = lambda;
    if let Some(r) = cli.config.budget_retries {
        params.orders = r.max(1);
    }
    inputs.extend([
        c1,
        c2,
        format!("p={p} seed={} orders={}", params.seed, params.orders),
    ]);
    let r = induced_ramsey_pipeline(&g, &col, &h1, &h2, &params).map_err(err)?;
    if let Some(hit) = &r.result {
        let h = if hit.color == RED { &h1 } else { &h2 };
        verify_embedding(&g, Some(&col), h, &hit.embedding.map, Some(hit.color))
            .map_err(|v| v.reason)?;
    }
    Ok(report("ramsey", &inputs, r.result.is_some(), to_value(&r)))
}

fn discrepancy(cli: &Cli, kind: &DiscrepancyKind) -> Res<Report> {
    let seed = cli.config.seed;
    match kind {
        DiscrepancyKind::Witness {
            input,
            pattern: p,
            eps,
        } => {
            let (g, canon) = load_graph(&input.graph)?;
            let (h, hcanon) = pattern(p)?;
            let eps = rational("eps", eps)?;
            let r = deviation_witness(&g, &h, &eps, seed).map_err(err)?;
            if r.edges != g.e_set(&r.set) || r.set.len() != g.n() / 2 {
                return Err("internal error: witness does not recompute".into());
            }
            let inputs = [canon, hcanon, format!("eps={eps} seed={seed}")];
            Ok(report(
                "discrepancy witness",
                &inputs,
                !r.below_guarantee,
                to_value(&r),
            ))
        }
        DiscrepancyKind::Construct { k, n, eps } => {
            let eps = rational("eps", eps)?;
            let inputs = [format!("k={k:?} n={n} eps={eps} seed={seed}")];
            let mut built = Vec::new();
            let mut rows = Vec::new();
            for &k in k {
                let c = low_discrepancy_graph(k, *n, seed).map_err(err)?;
                if discrepancy::find_clique(&c.graph, k).is_some() {
                    return Err(format!("internal error: construction contains K_{k}"));
                }
                if cli.config.format == crate::Format::Csv {
                    rows.push(envelope_row(k, *n, &eps, seed).map_err(err)?.csv());
                }
                built.push(c);
            }
            let met = built.iter().all(|c| {
                c.half_set_max
                    .is_none_or(|m| ramsey_forge::rational::to_f64(&m) <= c.half_set_bound)
            });
            let mut r = report("discrepancy construct", &inputs, met, to_value(&built));
            if !rows.is_empty() {
                r.table = Some((discrepancy::ENVELOPE_HEADER.to_string(), rows));
            }
            Ok(r)
        }
    }
}

fn oracle(cli: &Cli, op: &OracleOp) -> Res<Report> {
    let b = budget(cli);
    let (name, inputs, result, witness) = match op {
        OracleOp::Count { input, pattern: p } => {
            let (g, canon) = load_graph(&input.graph)?;
            let (h, hcanon) = pattern(p)?;
            let c = oracles::count_labeled_induced(&g, &h, &b).map_err(err)?;
            let w = oracles::find_induced(&g, &h);
            (
                "count",
                vec![canon, hcanon],
                json!(c.to_string()),
                to_value(&w),
            )
        }
        OracleOp::Homogeneous { input } => {
            let (g, canon) = load_graph(&input.graph)?;
            let r = oracles::max_homogeneous(&g).map_err(err)?;
            ("homogeneous", vec![canon], json!(r.set.len()), to_value(&r))
        }
        OracleOp::SparseDense { input, eps } => {
            let (g, canon) = load_graph(&input.graph)?;
            let eps = rational("eps", eps)?;
            let r = oracles::best_sparse_or_dense(&g, &eps).map_err(err)?;
            (
                "sparse-dense",
                vec![canon, format!("eps={eps}")],
                json!(r.set.len()),
                to_value(&r),
            )
        }
        OracleOp::HalfSet { input } => {
            let (g, canon) = load_graph(&input.graph)?;
            let r = oracles::best_half_subset(&g).map_err(err)?;
            let d = format!("{}/{}", r.deviation.numer(), r.deviation.denom());
            ("half-set", vec![canon], json!(d), to_value(&r))
        }
        OracleOp::Ramsey { input, pattern: p } => {
            let (g, canon) = load_graph(&input.graph)?;
            let (h, hcanon) = pattern(p)?;
            let v = oracles::exhaustive_induced_ramsey(&g, &h).map_err(err)?;
            ("ramsey", vec![canon, hcanon], json!(v.arrows), to_value(&v))
        }
        OracleOp::Universal { input, k } => {
            let (g, canon) = load_graph(&input.graph)?;
            let u = oracles::is_k_universal(&g, *k, &b).map_err(err)?;
            (
                "universal",
                vec![canon, format!("k={k}")],
                json!(u),
                Value::Null,
            )
        }
    };
    let mut r = report(&format!("oracle {name}"), &inputs, true, result);
    r.witness = Some(witness);
    Ok(r)
}
