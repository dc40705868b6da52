//! Tolerance sequences `Δ = (δ_n)` with exact terms.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, ratio, serde_rational, serde_rational_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ToleranceSequence {
    /// `δ_n = c·r^n`.
    Geometric {
        #[serde(with = "serde_rational")]
        c: Rational,
        #[serde(with = "serde_rational")]
        r: Rational,
    },
    /// Explicit `δ_0 … δ_{m-1}`, then `δ_n = δ_{m-1}·r^(n-m+1)`.
    PrefixGeometric {
        #[serde(with = "serde_rational_vec")]
        prefix: Vec<Rational>,
        #[serde(with = "serde_rational")]
        r: Rational,
    },
}

impl Default for ToleranceSequence {
    fn default() -> Self {
        Self::halving()
    }
}

impl ToleranceSequence {
    /// `δ_n = 2^(-n)`.
    pub fn halving() -> Self {
        ToleranceSequence::Geometric {
            c: int(1),
            r: ratio(1, 2),
        }
    }

    pub fn geometric(c: Rational, r: Rational) -> Result<Self> {
        let t = ToleranceSequence::Geometric { c, r };
        t.validate()?;
        Ok(t)
    }

    pub fn prefix_geometric(prefix: Vec<Rational>, r: Rational) -> Result<Self> {
        let t = ToleranceSequence::PrefixGeometric { prefix, r };
        t.validate()?;
        Ok(t)
    }

    /// Every term positive.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidTolerance(m.to_string()));
        match self {
            ToleranceSequence::Geometric { c, r } => {
                if !c.is_positive() {
                    return bad("scale must be positive");
                }
                if !r.is_positive() {
                    return bad("ratio must be positive");
                }
            }
            ToleranceSequence::PrefixGeometric { prefix, r } => {
                if prefix.is_empty() {
                    return bad("prefix must be nonempty");
                }
                if prefix.iter().any(|d| !d.is_positive()) {
                    return bad("prefix terms must be positive");
                }
                if !r.is_positive() {
                    return bad("ratio must be positive");
                }
            }
        }
        Ok(())
    }

    pub fn delta(&self, n: usize) -> Rational {
        match self {
            ToleranceSequence::Geometric { c, r } => c * pow(r, n),
            ToleranceSequence::PrefixGeometric { prefix, r } => {
                if n < prefix.len() {
                    prefix[n].clone()
                } else {
                    let last = prefix.last().expect("validated nonempty");
                    last * pow(r, n - prefix.len() + 1)
                }
            }
        }
    }

    /// `δ_{n+1}` given `δ_n`, without recomputing powers.
    pub fn next_after(&self, n: usize, delta_n: &Rational) -> Rational {
        match self {
            ToleranceSequence::PrefixGeometric { prefix, .. } if n + 1 < prefix.len() => {
                prefix[n + 1].clone()
            }
            _ => delta_n * self.ratio(),
        }
    }

    pub fn ratio(&self) -> &Rational {
        match self {
            ToleranceSequence::Geometric { r, .. }
            | ToleranceSequence::PrefixGeometric { r, .. } => r,
        }
    }

    /// `δ_n · factor` for every `n`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        match self {
            ToleranceSequence::Geometric { c, r } => ToleranceSequence::Geometric {
                c: c * factor,
                r: r.clone(),
            },
            ToleranceSequence::PrefixGeometric { prefix, r } => {
                ToleranceSequence::PrefixGeometric {
                    prefix: prefix.iter().map(|d| d * factor).collect(),
                    r: r.clone(),
                }
            }
        }
    }

    /// Exact value of `Σ_{j>n} δ_j`, or `None` when the series diverges.
    pub fn tail_sum(&self, n: usize) -> Option<Rational> {
        let r = self.ratio();
        if r >= &int(1) {
            return None;
        }
        let geo = r / (int(1) - r);
        Some(match self {
            ToleranceSequence::Geometric { .. } => self.delta(n) * geo,
            ToleranceSequence::PrefixGeometric { prefix, .. } => {
                let m = prefix.len();
                if n + 1 >= m {
                    self.delta(n) * geo
                } else {
                    let head: Rational = prefix[n + 1..].iter().sum();
                    head + &prefix[m - 1] * geo
                }
            }
        })
    }

    /// Checks `δ_0 ≤ 1` and `Σ_{j>n} δ_j ≤ δ_n` for every `n`. Beyond the
    /// explicit prefix the condition reduces to `r ≤ 1/2`, so a finite number
    /// of exact comparisons decides it.
    pub fn check_summable(&self) -> Result<()> {
        self.validate()?;
        if self.delta(0) > int(1) {
            return Err(Error::InvalidTolerance(format!(
                "δ_0 = {} exceeds 1",
                format_rational(&self.delta(0))
            )));
        }
        let r = self.ratio();
        if r > &ratio(1, 2) {
            return Err(Error::InvalidTolerance(format!(
                "ratio {} exceeds 1/2; tail sums would exceed the current term",
                format_rational(r)
            )));
        }
        let checked = match self {
            ToleranceSequence::Geometric { .. } => 1,
            ToleranceSequence::PrefixGeometric { prefix, .. } => prefix.len(),
        };
        for n in 0..checked {
            let tail = self.tail_sum(n).expect("ratio < 1");
            if tail > self.delta(n) {
                return Err(Error::InvalidTolerance(format!(
                    "Σ_(j>{n}) δ_j = {} exceeds δ_{n} = {}",
                    format_rational(&tail),
                    format_rational(&self.delta(n))
                )));
            }
        }
        Ok(())
    }
}

fn pow(r: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut base = r.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    if acc.is_zero() {
        Rational::zero()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_after_steps_the_sequence() {
        let d =
            ToleranceSequence::prefix_geometric(vec![int(2), ratio(1, 5)], ratio(1, 3)).unwrap();
        let mut x = d.delta(0);
        for n in 0..10 {
            x = d.next_after(n, &x);
            assert_eq!(x, d.delta(n + 1));
        }
    }

    #[test]
    fn halving_terms() {
        let d = ToleranceSequence::halving();
        assert_eq!(d.delta(0), int(1));
        assert_eq!(d.delta(5), ratio(1, 32));
        assert_eq!(d.tail_sum(3), Some(ratio(1, 8)));
        d.check_summable().unwrap();
    }

    #[test]
    fn prefix_then_geometric() {
        let d = ToleranceSequence::prefix_geometric(vec![ratio(1, 2), ratio(1, 8)], ratio(1, 4))
            .unwrap();
        assert_eq!(d.delta(0), ratio(1, 2));
        assert_eq!(d.delta(1), ratio(1, 8));
        assert_eq!(d.delta(2), ratio(1, 32));
        // Σ_{j>0} = 1/8 + (1/8)(1/4)/(3/4) = 1/8 + 1/24 = 1/6
        assert_eq!(d.tail_sum(0), Some(ratio(1, 6)));
        d.check_summable().unwrap();
    }

    #[test]
    fn summability_failures() {
        assert!(ToleranceSequence::geometric(int(1), ratio(2, 3))
            .unwrap()
            .check_summable()
            .is_err());
        assert!(ToleranceSequence::geometric(int(2), ratio(1, 2))
            .unwrap()
            .check_summable()
            .is_err());
        let bad = ToleranceSequence::prefix_geometric(vec![ratio(1, 10), ratio(1, 2)], ratio(1, 2))
            .unwrap();
        assert!(bad.check_summable().is_err());
        assert!(ToleranceSequence::geometric(int(0), ratio(1, 2)).is_err());
    }

    #[test]
    fn scaling() {
        let d = ToleranceSequence::halving().scaled(&ratio(1, 10));
        assert_eq!(d.delta(2), ratio(1, 40));
    }

    #[test]
    fn json_shape() {
        let d = ToleranceSequence::halving();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"geometric","params":{"c":"1/1","r":"1/2"}}"#
        );
        let back: ToleranceSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
