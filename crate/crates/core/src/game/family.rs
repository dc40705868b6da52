//! Target families, decided on finite prefixes.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::scalar::{serde_rational, Rational};
use crate::vector::{BlockVector, FiniteBlockSequence};

/// Three-valued membership of a finite prefix. Families must be monotone:
/// once a prefix is `In` or `Out`, every extension gets the same answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Determination {
    In,
    Out,
    Undetermined,
}

pub trait Family {
    fn decide(&self, seq: &FiniteBlockSequence) -> Determination;
}

impl<F> Family for F
where
    F: Fn(&FiniteBlockSequence) -> Determination,
{
    fn decide(&self, seq: &FiniteBlockSequence) -> Determination {
        self(seq)
    }
}

/// Families available from configuration files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Everything in, or everything out.
    Constant { value: bool },
    /// Decided by the first vector: in iff its support has `size` elements.
    PickSupportSize { size: usize },
    /// In iff the first `length` vectors all have a positive leading
    /// coefficient.
    PositiveLeading { length: usize },
    /// In iff the first `length` vectors all have leading coefficient at
    /// least `bound`.
    LeadingAtLeast {
        length: usize,
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// In iff the sequence starts with exactly these vectors.
    Cylinder { prefix: Vec<BlockVector> },
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec::PositiveLeading { length: 3 }
    }
}

fn leading(x: &BlockVector) -> Option<&Rational> {
    x.iter().next().map(|(_, c)| c)
}

fn all_leading(
    seq: &FiniteBlockSequence,
    length: usize,
    ok: impl Fn(&Rational) -> bool,
) -> Determination {
    for x in seq.iter().take(length) {
        if !leading(x).is_some_and(&ok) {
            return Determination::Out;
        }
    }
    if seq.len() >= length {
        Determination::In
    } else {
        Determination::Undetermined
    }
}

impl Family for FamilySpec {
    fn decide(&self, seq: &FiniteBlockSequence) -> Determination {
        match self {
            FamilySpec::Constant { value: true } => Determination::In,
            FamilySpec::Constant { value: false } => Determination::Out,
            FamilySpec::PickSupportSize { size } => match seq.get(0) {
                None => Determination::Undetermined,
                Some(x) if x.support_len() == *size => Determination::In,
                Some(_) => Determination::Out,
            },
            FamilySpec::PositiveLeading { length } => {
                all_leading(seq, *length, |c| c.is_positive())
            }
            FamilySpec::LeadingAtLeast { length, bound } => {
                all_leading(seq, *length, |c| c >= bound)
            }
            FamilySpec::Cylinder { prefix } => {
                for (x, p) in seq.iter().zip(prefix) {
                    if x != p {
                        return Determination::Out;
                    }
                }
                if seq.len() >= prefix.len() {
                    Determination::In
                } else {
                    Determination::Undetermined
                }
            }
        }
    }
}
