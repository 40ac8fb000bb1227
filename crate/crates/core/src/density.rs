use std::cmp::Ordering;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;

/// An unreduced edge-density fraction `edges / pairs`.
///
/// The fraction is kept unreduced so certificates show the raw counts.
/// All comparisons cross-multiply in `i128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Density {
    pub numerator: u64,
    pub denominator: u64,
}

impl Density {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "density with zero pair count");
        assert!(numerator <= denominator, "density above one");
        Density {
            numerator,
            denominator,
        }
    }

    pub const ZERO: Density = Density {
        numerator: 0,
        denominator: 1,
    };

    pub fn to_rational(self) -> Rational {
        Rational::new(self.numerator as i128, self.denominator as i128)
    }

    /// `self <= r`.
    pub fn le(&self, r: &Rational) -> bool {
        self.numerator as i128 * r.denom() <= r.numer() * self.denominator as i128
    }

    /// `self >= r`.
    pub fn ge(&self, r: &Rational) -> bool {
        self.numerator as i128 * r.denom() >= r.numer() * self.denominator as i128
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.numerator as u128 * other.denominator as u128;
        let r = other.numerator as u128 * self.denominator as u128;
        l.cmp(&r)
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[inline]
pub fn choose2(m: usize) -> u64 {
    (m as u64) * (m as u64).saturating_sub(1) / 2
}

/// `d(X, Y) = e(X, Y) / (|X||Y|)` for disjoint non-empty sets.
pub fn density_pair(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<Density> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::pre("density_pair needs non-empty sets"));
    }
    if !x.is_disjoint(y) {
        return Err(Error::pre("density_pair needs disjoint sets"));
    }
    let pairs = (x.len() * y.len()) as u64;
    Ok(Density::new(g.e_pair(x, y), pairs))
}

/// `d(A) = e(A) / C(|A|, 2)` for `|A| >= 2`.
pub fn density_set(g: &Graph, a: &VertexSet) -> Result<Density> {
    if a.len() < 2 {
        return Err(Error::pre(format!(
            "density_set needs |A| >= 2, got {}",
            a.len()
        )));
    }
    Ok(Density::new(g.e_set(a), choose2(a.len())))
}

/// Multi-set density `Σ_{i<j} e(W_i, W_j) / Σ_{i<j} |W_i||W_j|`; zero for
/// a single set.
pub fn density_multi(g: &Graph, parts: &[VertexSet]) -> Result<Density> {
    if parts.is_empty() {
        return Err(Error::pre("density_multi needs at least one set"));
    }
    if parts.len() == 1 {
        return Ok(Density::ZERO);
    }
    let mut union = VertexSet::new(g.n());
    let mut total = 0usize;
    for p in parts {
        if !p.is_disjoint(&union) {
            return Err(Error::pre("density_multi needs pairwise disjoint sets"));
        }
        union.union_with(p);
        total += p.len();
    }
    let size_sq: u64 = parts.iter().map(|p| (p.len() * p.len()) as u64).sum();
    let pairs = ((total * total) as u64 - size_sq) / 2;
    if pairs == 0 {
        return Err(Error::pre("density_multi needs non-empty sets"));
    }
    // Cross edges = edges in the union minus edges inside the parts.
    let inner: u64 = parts.iter().map(|p| g.e_set(p)).sum();
    Ok(Density::new(g.e_set(&union) - inner, pairs))
}
