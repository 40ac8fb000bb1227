//! Embed-or-split for colourings of `K_n` that avoid a two-colour pattern
//! `Ψ` of `K_k` whose colour-2 graph is `d`-degenerate.

use std::sync::Mutex;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::EdgeColoring;
use crate::error::{DensityViolation, Error, Result};
use crate::graph::Graph;
use crate::keylemma::finders::fewest_neighbours;
use crate::keylemma::{FoundPair, PairFinder};
use crate::pattern::degeneracy_order;
use crate::rational::{self, big, big_ceil, big_int, ge_scaled, le_scaled, Rational};
use crate::rng;
use crate::witness::{verify_color_pattern, verify_split, Embedding, Mode, SplitWitness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum PsiOutcome {
    /// `map[i]` realises vertex `i` of `Ψ`.
    Embedding(Embedding),
    /// Every `a ∈ A` has at most `eps·|B|` colour-2 edges into `B`.
    Split(SplitWitness),
}

/// `⌈ε^d q^k ⌊n/k⌋ / k⌉`, the size floor on both split sides.
pub fn psi_floor(n: usize, k: usize, d: usize, q: &Rational, eps: &Rational) -> usize {
    let r = big(eps).pow(d as i32) * big(q).pow(k as i32) * big_int(n / k) / big_int(k);
    big_ceil(&r)
}

fn check_inputs(
    phi: &EdgeColoring,
    psi: &EdgeColoring,
    q: &Rational,
    eps: &Rational,
) -> Result<()> {
    rational::check_open_unit("q", q)?;
    rational::check_open_unit("eps", eps)?;
    if !phi.is_complete() || !psi.is_complete() {
        return Err(Error::pre("both colourings must colour every pair"));
    }
    if psi.colors() > 2 || phi.colors() < 2 {
        return Err(Error::param(
            "the pattern uses colours 1 and 2 and the host needs both",
        ));
    }
    if psi.n() == 0 || psi.n() > phi.n() {
        return Err(Error::pre(format!(
            "pattern on {} vertices does not fit in K_{}",
            psi.n(),
            phi.n()
        )));
    }
    Ok(())
}

/// Tries to build a copy of `psi` inside `phi` one vertex at a time, along
/// the degeneracy order of the colour-2 graph of `psi` and over consecutive
/// blocks of `⌊n/k⌋` vertices. A vertex is good if it has at least `eps`
/// (colour 2) or `q` (colour 1) of every later candidate set in the
/// pattern's colour; the lowest good vertex is taken. When no vertex is
/// good, the largest group of vertices failing at the same later index `j`
/// (lowest `j` on ties) becomes `A` and the candidate set of `j` becomes `B`.
///
/// A colour-1 failure contradicts the bi-density hypothesis and is reported
/// as [`Error::BiDensityViolation`].
pub fn psi_free_split(
    phi: &EdgeColoring,
    psi: &EdgeColoring,
    q: &Rational,
    eps: &Rational,
) -> Result<PsiOutcome> {
    check_inputs(phi, psi, q, eps)?;
    let n = phi.n();
    let k = psi.n();
    let (d, order) = degeneracy_order(psi.layer(2));
    let pat = psi.restrict(&order);
    let block = n / k;
    let mut cand: Vec<VertexSet> = (0..k)
        .map(|l| VertexSet::from_iter(n, l * block..(l + 1) * block))
        .collect();
    let mut placed = Vec::with_capacity(k);
    for i in 0..k {
        let later = i + 1..k;
        let threshold = |j: usize| if pat.color(i, j) == 2 { eps } else { q };
        let mut groups: Vec<VertexSet> = vec![VertexSet::new(n); k];
        let mut good = None;
        for w in cand[i].iter() {
            let first_bad = later.clone().find(|&j| {
                let hits = phi.layer(pat.color(i, j)).degree_in(w, &cand[j]);
                !ge_scaled(hits, threshold(j), cand[j].len())
            });
            match first_bad {
                None => {
                    good = Some(w);
                    break;
                }
                Some(j) => groups[j].insert(w),
            }
        }
        let Some(w) = good else {
            let j = later
                .clone()
                .max_by_key(|&j| (groups[j].len(), std::cmp::Reverse(j)))
                .expect("a failing vertex names a later index");
            let a = std::mem::replace(&mut groups[j], VertexSet::new(n));
            let b = cand[j].clone();
            if pat.color(i, j) == 1 {
                return Err(Error::BiDensityViolation(Box::new(DensityViolation {
                    edges: phi.layer(1).e_pair(&a, &b),
                    a,
                    b,
                    step: i + 1,
                })));
            }
            let floor = psi_floor(n, k, d, q, eps);
            let witness = SplitWitness {
                index: 2,
                step: i + 1,
                a,
                b,
                mode: Mode::Sparse,
                eps: *eps,
                a_floor: floor,
                b_floor: floor,
            };
            verify_split(phi.layer(2), &witness)?;
            return Ok(PsiOutcome::Split(witness));
        };
        placed.push(w);
        for j in later {
            cand[j] = phi.layer(pat.color(i, j)).neighbours_in(w, &cand[j]);
        }
    }
    let mut map = vec![0; k];
    for (a, &v) in placed.iter().enumerate() {
        map[order[a]] = v;
    }
    verify_color_pattern(phi, psi, &map).map_err(|e| Error::Contract(e.reason))?;
    Ok(PsiOutcome::Embedding(Embedding { map, color: None }))
}

/// Pair finder for the colour-2 graph of a colouring `phi`: runs
/// [`psi_free_split`] on `phi` restricted to `U`, first in ascending vertex
/// order and then in up to `orders - 1` seeded shuffles, since the split
/// works for any partition into blocks. A copy of `psi` found on the way is
/// kept (the caller usually wants it more than a pair), as are observed
/// bi-density violations.
pub struct PsiFreeFinder<'a> {
    pub phi: &'a EdgeColoring,
    pub psi: &'a EdgeColoring,
    pub q: Rational,
    pub orders: usize,
    pub seed: u64,
    found: Mutex<Option<Embedding>>,
    violations: Mutex<Vec<DensityViolation>>,
}

impl<'a> PsiFreeFinder<'a> {
    pub fn new(
        phi: &'a EdgeColoring,
        psi: &'a EdgeColoring,
        q: Rational,
        orders: usize,
        seed: u64,
    ) -> Self {
        PsiFreeFinder {
            phi,
            psi,
            q,
            orders: orders.max(1),
            seed,
            found: Mutex::new(None),
            violations: Mutex::new(Vec::new()),
        }
    }

    /// The first copy of `psi` met during any call, in host labels.
    pub fn found(&self) -> Option<Embedding> {
        self.found.lock().expect("finder lock").clone()
    }

    pub fn violations(&self) -> Vec<DensityViolation> {
        self.violations.lock().expect("finder lock").clone()
    }
}

impl PairFinder for PsiFreeFinder<'_> {
    fn name(&self) -> &str {
        "psi-free"
    }

    fn find(
        &self,
        _graphs: &[Graph],
        u: &VertexSet,
        size: usize,
        eps: &Rational,
    ) -> Option<FoundPair> {
        let n = u.universe();
        let stream = u
            .iter()
            .fold(u.len() as u64, |h, v| rng::derive(h, v as u64));
        for attempt in 0..self.orders {
            let mut verts = u.to_vec();
            if attempt > 0 {
                verts.shuffle(&mut rng::seeded(rng::derive(
                    self.seed ^ stream,
                    attempt as u64,
                )));
            }
            let lift = |s: &VertexSet| VertexSet::from_iter(n, s.iter().map(|i| verts[i]));
            let sub = self.phi.restrict(&verts);
            match psi_free_split(&sub, self.psi, &self.q, eps) {
                Ok(PsiOutcome::Embedding(e)) => {
                    let mut found = self.found.lock().expect("finder lock");
                    if found.is_none() {
                        *found = Some(Embedding {
                            map: e.map.iter().map(|&i| verts[i]).collect(),
                            color: None,
                        });
                    }
                    return None;
                }
                Ok(PsiOutcome::Split(w)) => {
                    let (a, b) = (lift(&w.a), lift(&w.b));
                    if a.len() < size || b.len() < size {
                        continue;
                    }
                    // Every vertex of X has at most eps|B| red edges into B,
                    // so the `size` vertices of B with fewest edges back keep
                    // the pair density at most eps.
                    let red = self.phi.layer(2);
                    let x = a.take_lowest(size);
                    let y = fewest_neighbours(red, &b, &x, size)?;
                    if le_scaled(red.e_pair(&x, &y) as usize, eps, size * size) {
                        return Some(FoundPair { index: 0, x, y });
                    }
                }
                Err(Error::BiDensityViolation(v)) => {
                    let v = DensityViolation {
                        a: lift(&v.a),
                        b: lift(&v.b),
                        ..*v
                    };
                    self.violations.lock().expect("finder lock").push(v);
                }
                Err(_) => return None,
            }
        }
        None
    }
}
