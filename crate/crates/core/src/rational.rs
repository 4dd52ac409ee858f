//! Exact rational scalars.
//!
//! Every quantity in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.476"` exactly.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, digits)) = s.split_once('.') {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let tail = BigInt::from_str(digits).map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + tail;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical `"p/q"` (or `"p"` for integers) rendering.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with `sig` significant digits, rounded half away from
/// zero. Annotation only; all decisions are taken on the exact value.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let negative = r.is_negative();
    let a = r.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(BigInt::from(10).pow(k as u32))
        } else {
            Rational::one() / Rational::from_integer(BigInt::from(10).pow((-k) as u32))
        }
    };
    while a < pow(e) {
        e -= 1;
    }
    while a >= pow(e + 1) {
        e += 1;
    }
    // scaled = round(a * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow(shift);
    let mut digits = (scaled.clone() + Rational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer();
    if digits >= BigInt::from(10).pow(sig as u32) {
        digits /= 10;
        e += 1;
    }
    let mut text = digits.to_string();
    let shift = sig as i64 - 1 - e;
    let body = if (-4..=15).contains(&e) {
        if shift <= 0 {
            text.push_str(&"0".repeat((-shift) as usize));
            text
        } else {
            let shift = shift as usize;
            if text.len() <= shift {
                let pad = "0".repeat(shift - text.len());
                format!("0.{pad}{text}")
            } else {
                let (i, f) = text.split_at(text.len() - shift);
                format!("{i}.{f}")
            }
        }
    } else {
        let (head, tail) = text.split_at(1);
        if tail.is_empty() {
            format!("{head}e{e}")
        } else {
            format!("{head}.{tail}e{e}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// True iff `r` is an integer multiple of `1/k`.
pub fn on_grid(r: &Rational, k: u64) -> bool {
    (r * Rational::from_integer(BigInt::from(k))).is_integer()
}

/// `r * k` as an integer, if it is one.
pub fn grid_index(r: &Rational, k: u64) -> Option<BigInt> {
    let s = r * Rational::from_integer(BigInt::from(k));
    s.is_integer().then(|| s.to_integer())
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// String-encoded rational for serde containers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatStr(pub Rational);

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse(&t).map(RatStr).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(RatStr(int(i))),
        }
    }
}

/// `#[serde(with = "crate::rational::as_str")]` for single fields.
pub mod as_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RatStr::deserialize(d).map(|r| r.0)
    }
}

/// Same as [`as_str`] for `Vec<Rational>`.
pub mod vec_as_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<RatStr>::deserialize(d).map(|v| v.into_iter().map(|r| r.0).collect())
    }
}
