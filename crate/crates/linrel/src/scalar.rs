//! Gaussian rationals `ℚ(i)` and their text form `"a/b+c/d*i"`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

pub type Q = BigRational;
pub type GQ = Complex<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse scalar {0:?}")]
pub struct ParseScalarError(pub String);

pub fn zero() -> GQ {
    GQ::zero()
}

pub fn one() -> GQ {
    GQ::one()
}

pub fn from_ints(re: i64, im: i64) -> GQ {
    GQ::new(Q::from_integer(BigInt::from(re)), Q::from_integer(BigInt::from(im)))
}

fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n.trim().parse().ok()?, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Parses `"a/b"`, `"c/d*i"`, `"a/b+c/d*i"` and `"a/b-c/d*i"`.
pub fn parse(s: &str) -> Result<GQ, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return parse_rational(&t).map(|re| GQ::new(re, Q::zero())).ok_or_else(err);
    };
    let body = body.strip_suffix('*').unwrap_or(body);
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-') && !body[..k].ends_with('/'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (parse_rational(&body[..k]), &body[k..]),
        None => (Some(Q::zero()), body),
    };
    let im = match im {
        "" | "+" => Some(Q::one()),
        "-" => Some(-Q::one()),
        x => parse_rational(x),
    };
    match (re, im) {
        (Some(re), Some(im)) => Ok(GQ::new(re, im)),
        _ => Err(err()),
    }
}

/// Canonical text: the real part alone when the imaginary part vanishes.
pub fn format(z: &GQ) -> String {
    if z.im.is_zero() {
        return z.re.to_string();
    }
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!("{}{}{}*i", z.re, sign, z.im.abs())
}

/// A small random scalar: numerators in `−3..=3`, denominators in `1..=2`;
/// real when `real` is set.
pub fn random<R: Rng>(rng: &mut R, real: bool) -> GQ {
    let part = |rng: &mut R| Q::new(BigInt::from(rng.gen_range(-3i64..=3)), BigInt::from(rng.gen_range(1i64..=2)));
    let re = part(rng);
    let im = if real { Q::zero() } else { part(rng) };
    GQ::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["0", "3", "-1/2", "1/2+3/4*i", "1/2-3/4*i", "-5*i", "2/3*i"] {
            let z = parse(s).unwrap();
            assert_eq!(parse(&format(&z)).unwrap(), z, "{s}");
        }
        assert_eq!(parse("1+i").unwrap(), from_ints(1, 1));
        assert_eq!(parse("-i").unwrap(), from_ints(0, -1));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
