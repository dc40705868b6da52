//! Exact norm evaluation.
//!
//! Three plugins ship, all for monotone bases (basis constant `C = 1`):
//! `ell1` and `sup` return exact rationals, `ell2` returns `‖x‖²` and answers
//! comparisons against rationals by squaring.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, sqrt_exact, Rational};
use crate::tolerance::ToleranceSequence;
use crate::vector::{BlockVector, FiniteBlockSequence};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Ell1,
    Sup,
    Ell2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormPlugin {
    kind: NormKind,
    basis_constant: Rational,
}

impl Default for NormPlugin {
    fn default() -> Self {
        NormPlugin::new(NormKind::Ell1)
    }
}

impl NormPlugin {
    pub fn new(kind: NormKind) -> Self {
        NormPlugin {
            kind,
            basis_constant: int(1),
        }
    }

    pub fn ell1() -> Self {
        Self::new(NormKind::Ell1)
    }

    pub fn sup() -> Self {
        Self::new(NormKind::Sup)
    }

    pub fn ell2() -> Self {
        Self::new(NormKind::Ell2)
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    /// `C`.
    pub fn basis_constant(&self) -> &Rational {
        &self.basis_constant
    }

    /// For `‖x‖ ≤ 1`, every coordinate satisfies `|λ_i| ≤ 2C`.
    pub fn coefficient_bound(&self) -> Rational {
        int(2) * &self.basis_constant
    }

    pub fn norm(&self, x: &BlockVector) -> NormValue {
        match self.kind {
            NormKind::Ell1 => NormValue::Exact(x.iter().map(|(_, c)| c.abs()).sum()),
            NormKind::Sup => NormValue::Exact(x.max_abs()),
            NormKind::Ell2 => NormValue::Sqrt(x.iter().map(|(_, c)| c * c).sum()),
        }
    }

    /// A rational `≥ ‖x‖`; exact for `ell1` and `sup`.
    pub fn upper_bound(&self, x: &BlockVector) -> Rational {
        match self.norm(x) {
            NormValue::Exact(q) => q,
            NormValue::Sqrt(s) => match sqrt_exact(&s) {
                Some(q) => q,
                None => NormPlugin::ell1().norm(x).exact().expect("ell1 is exact"),
            },
        }
    }

    /// A rational `≤ ‖x‖`; exact for `ell1` and `sup`.
    pub fn lower_bound(&self, x: &BlockVector) -> Rational {
        match self.norm(x) {
            NormValue::Exact(q) => q,
            NormValue::Sqrt(s) => sqrt_exact(&s).unwrap_or_else(|| x.max_abs()),
        }
    }

    pub fn in_unit_ball(&self, x: &BlockVector) -> bool {
        self.norm(x).le(&int(1))
    }
}

/// A norm value: either an exact rational or `√s` for a rational `s ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormValue {
    Exact(Rational),
    Sqrt(Rational),
}

impl NormValue {
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match self {
            NormValue::Exact(v) => v.cmp(q),
            NormValue::Sqrt(s) => {
                if q.is_negative() {
                    Ordering::Greater
                } else {
                    s.cmp(&(q * q))
                }
            }
        }
    }

    pub fn le(&self, q: &Rational) -> bool {
        self.cmp_rational(q) != Ordering::Greater
    }

    pub fn lt(&self, q: &Rational) -> bool {
        self.cmp_rational(q) == Ordering::Less
    }

    pub fn eq_rational(&self, q: &Rational) -> bool {
        self.cmp_rational(q) == Ordering::Equal
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact(v) | NormValue::Sqrt(v) => v.is_zero(),
        }
    }

    /// The value as a rational, when it is one.
    pub fn exact(&self) -> Option<Rational> {
        match self {
            NormValue::Exact(v) => Some(v.clone()),
            NormValue::Sqrt(s) => sqrt_exact(s),
        }
    }

    pub fn squared(&self) -> Rational {
        match self {
            NormValue::Exact(v) => v * v,
            NormValue::Sqrt(s) => s.clone(),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(q) => write!(f, "{}", format_rational(&q)),
            None => match self {
                NormValue::Sqrt(s) => write!(f, "sqrt({})", format_rational(s)),
                NormValue::Exact(_) => unreachable!(),
            },
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `dist(U, V) ≤ Δ`: `‖u_n − v_n‖ ≤ δ_n` for every `n`.
pub fn dist_leq_delta(
    u: &FiniteBlockSequence,
    v: &FiniteBlockSequence,
    delta: &ToleranceSequence,
    norm: &NormPlugin,
) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter()
        .zip(v.iter())
        .enumerate()
        .all(|(n, (a, b))| norm.norm(&(a - b)).le(&delta.delta(n))))
}
