//! Certified rounding of a unit-ball vector in `<Z̃>` onto `<Z̃>_𝔇`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{net_member, NetConfig};
use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::scalar::{pow2, round_away_from_zero, serde_rational, serde_rational_vec, Rational};
use crate::vector::{BlockVector, FiniteBlockSequence};

/// The rounded vector together with every quantity that was checked.
#[derive(Clone, Debug, Serialize)]
pub struct Rounding {
    #[serde(rename = "w_tilde")]
    pub rounded: BlockVector,
    /// `μ_j`, one per board vector.
    #[serde(with = "serde_rational_vec")]
    pub coefficients: Vec<Rational>,
    /// `μ̃_j`, one per board vector.
    #[serde(with = "serde_rational_vec")]
    pub rounded_coefficients: Vec<Rational>,
    pub m1: usize,
    pub m2: usize,
    /// `1 - 2^(-k_{m_1})`.
    #[serde(with = "serde_rational")]
    pub shrink: Rational,
    /// `‖w - w̃‖`.
    pub error_norm: NormValue,
    /// `2^(-k_{m_1}+1)`.
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    /// `Σ_{j∈[m_1,m_2]} 2^(-(k_{n_1(j)}+1))`.
    #[serde(with = "serde_rational")]
    pub aggregate: Rational,
    /// `2^(-k_{n_1(m_1)})`.
    #[serde(with = "serde_rational")]
    pub aggregate_bound: Rational,
    pub pass: bool,
}

/// Rounds `w = Σ μ_j z̃_j` to `w̃ = Σ μ̃_j z̃_j ∈ 𝔇` with
/// `μ̃_j = s_j·2^(-(k_{n_1(j)}+1))`, where `s_j` rounds
/// `(1 - 2^(-k_{m_1}))·μ_j·2^(k_{n_1(j)}+1)` away from zero.
///
/// Every guarantee is checked exactly before returning: equal `Z̃`-support,
/// `‖w - w̃‖ ≤ 2^(-k_{m_1}+1)`, `w̃ ∈ 𝔇`, the per-coefficient bounds and
/// the aggregate bound on the rounding steps.
pub fn round_to_net(
    w: &BlockVector,
    board: &FiniteBlockSequence,
    cfg: &NetConfig,
) -> Result<Rounding> {
    for (j, z) in board.iter().enumerate() {
        if !net_member(z, cfg)? {
            return Err(Error::NotInNet(format!("z̃_{j} = {z}")));
        }
    }
    let mu = board
        .span_coefficients(w)
        .ok_or_else(|| Error::NotInSpan(w.to_string()))?;
    let support: Vec<usize> = (0..mu.len()).filter(|&j| !mu[j].is_zero()).collect();
    if support.len() < 2 {
        return Err(Error::SingletonSupport(support.len()));
    }
    let norm = cfg.norm();
    if !norm.in_unit_ball(w) {
        return Err(Error::OutsideUnitBall(w.to_string()));
    }
    let (m1, m2) = (support[0], *support.last().expect("nonempty"));
    let k_m1 = cfg.k(m1) as i64;
    let shrink = Rational::one() - pow2(-k_m1);

    let step_exponent = |j: usize| -> i64 {
        let n1 = board
            .get(j)
            .and_then(BlockVector::min_support)
            .expect("nonzero");
        cfg.k(n1) as i64 + 1
    };

    let mut rounded_coefficients = vec![Rational::zero(); mu.len()];
    let mut aggregate = Rational::zero();
    for j in m1..=m2 {
        let e = step_exponent(j);
        let target = &shrink * &mu[j];
        let s = round_away_from_zero(&(&target * pow2(e)));
        let tilde = Rational::from_integer(s) * pow2(-e);
        let step = pow2(-e);
        if tilde.abs() < target.abs() {
            return Err(Error::certification(
                format!("|μ̃_{j}| ≥ |(1 - 2^(-k_m1))μ_{j}|"),
                tilde.abs(),
                target.abs(),
            ));
        }
        let gap = (&tilde - &target).abs();
        if gap >= step {
            return Err(Error::certification(
                format!("|μ̃_{j} - (1 - 2^(-k_m1))μ_{j}| < 2^(-(k_n1+1))"),
                gap,
                step,
            ));
        }
        aggregate += &step;
        rounded_coefficients[j] = tilde;
    }
    let first_n1 = board
        .get(m1)
        .and_then(BlockVector::min_support)
        .expect("nonzero");
    let aggregate_bound = pow2(-(cfg.k(first_n1) as i64));
    if aggregate > aggregate_bound {
        return Err(Error::certification(
            "Σ 2^(-(k_n1(j)+1))",
            crate::scalar::format_rational(&aggregate),
            crate::scalar::format_rational(&aggregate_bound),
        ));
    }

    let rounded = board.combine(
        rounded_coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero()),
    );
    let same_support = mu
        .iter()
        .zip(&rounded_coefficients)
        .all(|(a, b)| a.is_zero() == b.is_zero());
    if !same_support {
        return Err(Error::certification(
            "Z̃-support equality",
            "differs",
            "equal",
        ));
    }
    let error_norm = norm.norm(&(w - &rounded));
    let bound = pow2(1 - k_m1);
    if !error_norm.le(&bound) {
        return Err(Error::certification(
            "‖w - w̃‖",
            &error_norm,
            crate::scalar::format_rational(&bound),
        ));
    }
    if !net_member(&rounded, cfg)? {
        return Err(Error::certification(
            "w̃ ∈ 𝔇",
            rounded.to_string(),
            "net member",
        ));
    }
    Ok(Rounding {
        rounded,
        coefficients: mu,
        rounded_coefficients,
        m1,
        m2,
        shrink,
        error_norm,
        bound,
        aggregate,
        aggregate_bound,
        pass: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::NormPlugin;
    use crate::scalar::{int, ratio};

    fn e(i: usize) -> BlockVector {
        BlockVector::basis(i)
    }

    #[test]
    fn two_halves_on_standard_basis() {
        // k_0 = 1: shrink 1/2, so the targets are 1/4 on both coordinates.
        // Step at j = 0 is 2^-2, at j = 1 is 2^-3; both 1/4 are on-lattice.
        let cfg = NetConfig::default();
        let board = FiniteBlockSequence::standard_basis(2);
        let w = BlockVector::from_pairs([(0, ratio(1, 2)), (1, ratio(1, 2))]);
        let r = round_to_net(&w, &board, &cfg).unwrap();
        assert_eq!(r.shrink, ratio(1, 2));
        assert_eq!(r.rounded_coefficients, vec![ratio(1, 4), ratio(1, 4)]);
        assert_eq!(r.error_norm, NormValue::Exact(ratio(1, 2)));
        assert_eq!(r.bound, int(1));
        assert_eq!(r.aggregate, ratio(3, 8));
        assert_eq!(r.aggregate_bound, ratio(1, 2));
    }

    #[test]
    fn shrink_always_applies() {
        // w is already a net element, yet w̃ differs from it
        let cfg = NetConfig::default();
        let board = FiniteBlockSequence::standard_basis(4);
        let w = BlockVector::from_pairs([(2, ratio(1, 2)), (3, ratio(-1, 2))]);
        let r = round_to_net(&w, &board, &cfg).unwrap();
        // k_2 = 3: shrink 7/8, targets ±7/16, steps 2^-4 and 2^-5
        assert_eq!(r.rounded_coefficients[2], ratio(7, 16));
        assert_eq!(r.rounded_coefficients[3], ratio(-7, 16));
        assert_ne!(r.rounded, w);
        assert!(r.error_norm.le(&r.bound));
    }

    #[test]
    fn rounding_goes_away_from_zero() {
        let cfg = NetConfig::default();
        let board = FiniteBlockSequence::standard_basis(3);
        let w = BlockVector::from_pairs([(0, ratio(1, 3)), (2, ratio(-1, 3))]);
        let r = round_to_net(&w, &board, &cfg).unwrap();
        // targets ±1/6; steps 2^-2 and 2^-4
        assert_eq!(r.rounded_coefficients[0], ratio(1, 4));
        assert_eq!(r.rounded_coefficients[2], ratio(-3, 16));
        assert!(r.rounded_coefficients[1].is_zero());
    }

    #[test]
    fn singleton_support_is_rejected() {
        let cfg = NetConfig::default();
        let board = FiniteBlockSequence::standard_basis(2);
        let err =
            round_to_net(&BlockVector::from_pairs([(0, ratio(1, 2))]), &board, &cfg).unwrap_err();
        assert!(err.to_string().contains("claim requires card ≥ 2"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn preconditions() {
        let cfg = NetConfig::default();
        let board = FiniteBlockSequence::standard_basis(2);
        let big = &e(0) + &e(1);
        assert!(matches!(
            round_to_net(&big, &board, &cfg),
            Err(Error::OutsideUnitBall(_))
        ));
        let outside = BlockVector::from_pairs([(0, ratio(1, 4)), (5, ratio(1, 4))]);
        assert!(matches!(
            round_to_net(&outside, &board, &cfg),
            Err(Error::NotInSpan(_))
        ));
        let bad_board =
            FiniteBlockSequence::new(vec![BlockVector::from_pairs([(0, ratio(1, 3))]), e(1)])
                .unwrap();
        let w = BlockVector::from_pairs([(0, ratio(1, 9)), (1, ratio(1, 2))]);
        assert!(matches!(
            round_to_net(&w, &bad_board, &cfg),
            Err(Error::NotInNet(_))
        ));
    }

    #[test]
    fn works_under_every_norm() {
        let board = FiniteBlockSequence::new(vec![
            BlockVector::from_pairs([(0, ratio(1, 2)), (1, ratio(1, 2))]),
            e(2),
            BlockVector::from_pairs([(3, ratio(1, 4)), (5, ratio(-1, 2))]),
        ])
        .unwrap();
        for norm in [NormPlugin::ell1(), NormPlugin::sup(), NormPlugin::ell2()] {
            let cfg = NetConfig::default().with_norm(norm);
            let w = board.combine([(0, &ratio(1, 3)), (2, &ratio(-2, 3))]);
            let r = round_to_net(&w, &board, &cfg).unwrap();
            assert!(r.pass);
            assert!(net_member(&r.rounded, &cfg).unwrap());
        }
    }
}
