//! Exact rational thresholds.
//!
//! Every comparison on a certificate path is a cross-multiplication in
//! `i128`; floating point never decides a guarantee.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Used where products of many thresholds would overflow `i128`.
pub type BigRational = num_rational::BigRational;

pub fn rat(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

pub fn int(v: i128) -> Rational {
    Ratio::from_integer(v)
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"0.3"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a
            .trim()
            .parse()
            .map_err(|_| Error::param(format!("bad numerator in {s:?}")))?;
        let b: i128 = b
            .trim()
            .parse()
            .map_err(|_| Error::param(format!("bad denominator in {s:?}")))?;
        if b == 0 {
            return Err(Error::param(format!("zero denominator in {s:?}")));
        }
        return Ok(rat(a, b));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::param(format!("bad decimal {s:?}")));
        }
        let neg = whole.starts_with('-');
        let w: i128 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole
                .parse()
                .map_err(|_| Error::param(format!("bad decimal {s:?}")))?
        };
        let den = 10i128.pow(frac.len() as u32);
        let f: i128 = frac.parse().unwrap_or(0);
        let num = w.abs() * den + f;
        return Ok(rat(if neg { -num } else { num }, den));
    }
    s.parse::<i128>()
        .map(int)
        .map_err(|_| Error::param(format!("bad rational {s:?}")))
}

/// `true` iff `count <= r * size`.
#[inline]
pub fn le_scaled(count: usize, r: &Rational, size: usize) -> bool {
    (count as i128) * r.denom() <= r.numer() * (size as i128)
}

/// `true` iff `count >= r * size`.
#[inline]
pub fn ge_scaled(count: usize, r: &Rational, size: usize) -> bool {
    (count as i128) * r.denom() >= r.numer() * (size as i128)
}

/// `true` iff `count < r * size`.
#[inline]
pub fn lt_scaled(count: usize, r: &Rational, size: usize) -> bool {
    !ge_scaled(count, r, size)
}

/// `ceil(r * n)` for non-negative `r`.
pub fn ceil_mul(r: &Rational, n: usize) -> usize {
    let v = r * int(n as i128);
    v.ceil().to_integer().max(0) as usize
}

/// `floor(r * n)` for non-negative `r`.
pub fn floor_mul(r: &Rational, n: usize) -> usize {
    let v = r * int(n as i128);
    v.floor().to_integer().max(0) as usize
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= *r;
    }
    acc
}

/// `true` iff `0 < r < 1`.
pub fn in_open_unit(r: &Rational) -> bool {
    r.is_positive() && *r < Rational::one()
}

pub fn check_open_unit(name: &str, r: &Rational) -> Result<()> {
    if in_open_unit(r) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {r} must lie in (0,1)")))
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Largest `a/2^bits` not exceeding the positive real `x`.
pub fn dyadic_floor(x: f64, bits: u32) -> Rational {
    let den = 1i128 << bits;
    let num = (x * den as f64).floor() as i128;
    rat(num.max(0), den)
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

/// `|a - b|` for rationals.
pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// Greatest common divisor helper re-exported for count normalisation.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn big(r: &Rational) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

pub fn big_int(v: usize) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `ceil(r)` for a non-negative big rational, saturating at `usize::MAX`.
pub fn big_ceil(r: &BigRational) -> usize {
    use num_traits::ToPrimitive;
    r.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// `floor(r)` for a non-negative big rational, saturating at `usize::MAX`.
pub fn big_floor(r: &BigRational) -> usize {
    use num_traits::ToPrimitive;
    r.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serialises a rational as the string `"a/b"`.
pub mod serde_str {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

/// Serialises a big rational as the string `"a/b"`.
pub mod serde_big {
    use super::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

pub mod serde_str_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format!("{}/{}", r.numer(), r.denom()))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("1/4").unwrap(), rat(1, 4));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational(".25").unwrap(), rat(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn scaled_comparisons_are_exact() {
        let q = rat(1, 3);
        assert!(le_scaled(1, &q, 3));
        assert!(!le_scaled(2, &q, 3));
        assert!(ge_scaled(1, &q, 3));
        assert!(lt_scaled(0, &q, 3));
        assert_eq!(ceil_mul(&rat(1, 3), 7), 3);
        assert_eq!(floor_mul(&rat(1, 3), 7), 2);
    }
}
