//! The dyadic net `𝔇`.
//!
//! Given tolerances `Δ = (δ_n)`, a strictly increasing exponent sequence
//! `(k_n)` with `2^(-k_n+1) ≤ δ_n` fixes the coefficient lattices
//! `Λ(i, l) = 2^(-l(k_i+1))·ℤ`. A nonzero vector `x` with support segment
//! `I = [min supp x, max supp x]` of length `l` belongs to `𝔇` when every
//! coefficient on `I` lies in `Λ(i, l)` and `‖x‖ ≤ 1`.

mod cover;
mod enumerate;
mod round;

pub use cover::{covering_sequence, verify_covering, Covering, CoveringCertificate, CoveringEntry};
pub use enumerate::{count_net_below, enumerate_net_below, NetCursor, NetIter};
pub use round::{round_to_net, Rounding};

use std::sync::RwLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::norm::{NormKind, NormPlugin};
use crate::scalar::{dyadic_exponent, pow2, Rational};
use crate::tolerance::ToleranceSequence;
use crate::vector::BlockVector;

/// A finite nonempty segment `[lo, hi]` of basis indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub lo: usize,
    pub hi: usize,
}

impl Segment {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!(
                "segment [{lo}, {hi}] is empty"
            )));
        }
        Ok(Segment { lo, hi })
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn of(x: &BlockVector) -> Option<Self> {
        let (lo, hi) = x.support_range()?;
        Some(Segment { lo, hi })
    }
}

/// Smallest `k ≥ 1` with `2^(-k+1) ≤ δ`.
pub fn minimal_exponent(delta: &Rational) -> u64 {
    if delta >= &Rational::one() {
        return 1;
    }
    // smallest e ≥ 0 with 2^e · numer ≥ denom
    let (n, d) = (delta.numer(), delta.denom());
    let guess = d.bits().saturating_sub(n.bits());
    let mut e = guess.saturating_sub(1);
    while (n << e) < *d {
        e += 1;
    }
    e + 1
}

/// A strictly increasing `(k_n)` with `2^(-k_n+1) ≤ δ_n`. Terms past the
/// stored prefix follow `k_n = max(k_{n-1} + 1, minimal_exponent(δ_n))`.
#[derive(Debug)]
pub struct ExponentSequence {
    prefix: Vec<u64>,
    delta: ToleranceSequence,
    /// Terms past the prefix computed so far; a cache only.
    extended: RwLock<Vec<u64>>,
}

impl Clone for ExponentSequence {
    fn clone(&self) -> Self {
        ExponentSequence::from_prefix(self.prefix.clone(), self.delta.clone())
    }
}

impl PartialEq for ExponentSequence {
    fn eq(&self, other: &Self) -> bool {
        self.prefix == other.prefix && self.delta == other.delta
    }
}

impl Eq for ExponentSequence {}

/// Number of exponents materialized up front.
pub const EXPONENT_PREFIX_LEN: usize = 16;

impl ExponentSequence {
    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    fn from_prefix(prefix: Vec<u64>, delta: ToleranceSequence) -> Self {
        ExponentSequence {
            prefix,
            delta,
            extended: RwLock::new(Vec::new()),
        }
    }

    pub fn value(&self, n: usize) -> u64 {
        if n < self.prefix.len() {
            return self.prefix[n];
        }
        let i = n - self.prefix.len();
        if let Some(&k) = self.extended.read().expect("not poisoned").get(i) {
            return k;
        }
        let mut ext = self.extended.write().expect("not poisoned");
        let start = self.prefix.len() + ext.len();
        let mut k = ext.last().or(self.prefix.last()).copied().unwrap_or(0);
        let mut d = self.delta.delta(start);
        for m in start..=n {
            if m > start {
                d = self.delta.next_after(m - 1, &d);
            }
            k = (k + 1).max(minimal_exponent(&d));
            ext.push(k);
        }
        k
    }
}

/// Minimal exponents: `k_n = max(k_{n-1} + 1, min{k : 2^(-k+1) ≤ δ_n})`,
/// `k_{-1} = 0`.
pub fn derive_exponents(delta: &ToleranceSequence) -> ExponentSequence {
    let seq = ExponentSequence::from_prefix(Vec::new(), delta.clone());
    let prefix = (0..EXPONENT_PREFIX_LEN).map(|n| seq.value(n)).collect();
    ExponentSequence::from_prefix(prefix, delta.clone())
}

/// Everything that determines `𝔇`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetConfig {
    delta: ToleranceSequence,
    exponents: ExponentSequence,
    norm: NormPlugin,
}

impl Default for NetConfig {
    /// `δ_n = 2^(-n)` under `ell1`.
    fn default() -> Self {
        NetConfig::new(ToleranceSequence::halving(), NormPlugin::ell1())
    }
}

impl NetConfig {
    pub fn new(delta: ToleranceSequence, norm: NormPlugin) -> Self {
        let exponents = derive_exponents(&delta);
        NetConfig {
            delta,
            exponents,
            norm,
        }
    }

    /// Uses a caller-supplied exponent prefix (checked against both
    /// invariants) and derives the rest.
    pub fn with_exponent_prefix(
        delta: ToleranceSequence,
        norm: NormPlugin,
        prefix: Vec<u64>,
    ) -> Result<Self> {
        delta.validate()?;
        for (n, &k) in prefix.iter().enumerate() {
            if k == 0 {
                return Err(Error::InvalidTolerance(format!("k_{n} must be positive")));
            }
            if n > 0 && k <= prefix[n - 1] {
                return Err(Error::InvalidTolerance(format!(
                    "exponents must strictly increase (k_{} = {}, k_{n} = {k})",
                    n - 1,
                    prefix[n - 1]
                )));
            }
            if pow2(1 - k as i64) > delta.delta(n) {
                return Err(Error::InvalidTolerance(format!(
                    "2^(-k_{n}+1) exceeds δ_{n} for k_{n} = {k}"
                )));
            }
        }
        let mut exponents = ExponentSequence::from_prefix(prefix, delta.clone());
        if exponents.prefix.len() < EXPONENT_PREFIX_LEN {
            let full = (0..EXPONENT_PREFIX_LEN)
                .map(|n| exponents.value(n))
                .collect();
            exponents = ExponentSequence::from_prefix(full, delta.clone());
        }
        Ok(NetConfig {
            delta,
            exponents,
            norm,
        })
    }

    pub fn delta(&self) -> &ToleranceSequence {
        &self.delta
    }

    pub fn exponents(&self) -> &ExponentSequence {
        &self.exponents
    }

    pub fn norm(&self) -> &NormPlugin {
        &self.norm
    }

    /// `k_n`.
    pub fn k(&self, n: usize) -> u64 {
        self.exponents.value(n)
    }

    /// Exponent `l·(k_i + 1)` of the lattice `Λ(i, l)`.
    pub fn lattice_exponent(&self, i: usize, l: usize) -> u64 {
        l as u64 * (self.k(i) + 1)
    }

    /// Same net, different norm.
    pub fn with_norm(&self, norm: NormPlugin) -> Self {
        NetConfig {
            norm,
            ..self.clone()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct NormDoc {
    kind: NormKind,
}

#[derive(Serialize, Deserialize)]
struct NetConfigDoc {
    delta: ToleranceSequence,
    norm: NormDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent_prefix: Option<Vec<u64>>,
}

impl Serialize for NetConfig {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NetConfigDoc {
            delta: self.delta.clone(),
            norm: NormDoc {
                kind: self.norm.kind(),
            },
            exponent_prefix: Some(self.exponents.prefix.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NetConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = NetConfigDoc::deserialize(d)?;
        doc.delta.validate().map_err(serde::de::Error::custom)?;
        let norm = NormPlugin::new(doc.norm.kind);
        match doc.exponent_prefix {
            Some(prefix) => NetConfig::with_exponent_prefix(doc.delta, norm, prefix)
                .map_err(serde::de::Error::custom),
            None => Ok(NetConfig::new(doc.delta, norm)),
        }
    }
}

/// `λ ∈ Λ(i, l)`: `λ·2^(l(k_i+1)) ∈ ℤ`.
pub fn lattice_member(lambda: &Rational, i: usize, l: usize, cfg: &NetConfig) -> bool {
    match dyadic_exponent(lambda) {
        Some(e) => e <= cfg.lattice_exponent(i, l),
        None => false,
    }
}

/// Membership in `𝔇`. Coefficients absent from the support are zero and
/// always lie in the lattice.
pub fn net_member(x: &BlockVector, cfg: &NetConfig) -> Result<bool> {
    let seg = Segment::of(x).ok_or(Error::ZeroVector)?;
    let l = seg.len();
    if !x.iter().all(|(i, c)| lattice_member(c, i, l, cfg)) {
        return Ok(false);
    }
    Ok(cfg.norm().in_unit_ball(x))
}

/// `t` with `λ = t·2^(-l(k_i+1))`, for lattice members.
pub fn lattice_mantissa(lambda: &Rational, i: usize, l: usize, cfg: &NetConfig) -> Option<BigInt> {
    if !lattice_member(lambda, i, l, cfg) {
        return None;
    }
    let scaled = lambda * pow2(cfg.lattice_exponent(i, l) as i64);
    debug_assert!(scaled.is_integer());
    let t = scaled.to_integer();
    debug_assert!(!t.is_negative() || lambda.is_negative());
    Some(t)
}
