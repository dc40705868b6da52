//! Exact scalars.
//!
//! Coefficients are arbitrary-precision rationals ([`Rational`], always in
//! lowest terms with a positive denominator). Dyadic rationals `t·2^(-e)` are
//! the lattice points of the net and get their own canonical type,
//! [`Dyadic`], which embeds losslessly into [`Rational`].

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a rational. Panics if `d == 0`; use [`checked_div`] for
/// untrusted input.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new_raw(BigInt::one(), p)
    }
}

/// Smallest `e ≥ 0` with `q·2^e ∈ ℤ`, or `None` when the denominator is not
/// a power of two.
pub fn dyadic_exponent(q: &Rational) -> Option<u64> {
    let d = q.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    if (d >> tz).is_one() {
        Some(tz)
    } else {
        None
    }
}

/// The exact square root of `q` when it is rational.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Canonical `p/q` text (the denominator is always written).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A dyadic rational `mantissa · 2^(-exponent)` in canonical form: the
/// mantissa is odd, or it is zero and the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: u64) -> Self {
        if mantissa.is_zero() {
            return Dyadic {
                mantissa,
                exponent: 0,
            };
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0).min(exponent);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent - tz,
        }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_rational(q: &Rational) -> Option<Self> {
        let e = dyadic_exponent(q)?;
        Some(Dyadic::new(q.numer().clone(), e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The integer `t` with `self = t·2^(-e)`, if `e` is at least the
    /// canonical exponent.
    pub fn mantissa_at(&self, e: u64) -> Option<BigInt> {
        if e < self.exponent {
            None
        } else {
            Some(&self.mantissa << (e - self.exponent))
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), BigInt::one() << self.exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }
}

impl From<Dyadic> for Rational {
    fn from(d: Dyadic) -> Self {
        d.to_rational()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}·2^-{}", self.mantissa, self.exponent)
        }
    }
}

/// Ceiling for non-negative inputs and floor for negative ones: rounding
/// away from zero to the nearest integer.
pub fn round_away_from_zero(q: &Rational) -> BigInt {
    if q.is_negative() {
        q.floor().to_integer()
    } else {
        q.ceil().to_integer()
    }
}

/// Largest integer `u ≥ 0` with `u ≤ q` (q ≥ 0).
pub fn floor_nonneg(q: &Rational) -> BigInt {
    let (n, d) = (q.numer(), q.denom());
    if n.is_negative() {
        BigInt::zero()
    } else {
        n.div_floor(d)
    }
}
