//! From a player II strategy in the discrete game on `Z̃` to one in the
//! continuous game on the covering board `Z`, with every bound of the
//! construction checked on every round.
//!
//! The net is built for the inner tolerance `δ'_n = δ_n/(10C)`. When player I
//! offers `Z_n = (z_k)`, each `z_k` is normalized and rounded onto the net
//! (`z̃_k`, within `δ'_k`). The discrete strategy answers the tail
//! `(z̃_k)_{k≥k_0}` with `x̃_n = Σ λ_k z̃_k`, and the adapter plays
//! `x_n = Σ λ_k z_k`.
//!
//! `x_n` itself can leave the unit ball by up to `‖x_n - x̃_n‖`. The adapter
//! then plays `x_n/r` with a rational `r ≥ ‖x_n‖` and certifies the error of
//! the vector actually played as well.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    check_move_ii, Determination, Family, GameMode, GameTranscript, Position, StrategyI, StrategyII,
};
use crate::net::{covering_sequence, net_member, verify_covering, CoveringCertificate, NetConfig};
use crate::norm::{dist_leq_delta, NormKind, NormPlugin, NormValue};
use crate::scalar::{format_rational, int, ratio, serde_rational, sqrt_exact, Rational};
use crate::tolerance::ToleranceSequence;
use crate::vector::{block_less, BlockVector, FiniteBlockSequence};

/// Everything the adapter needs: both boards, the outer tolerance `Δ`, and
/// the net for the inner tolerance `Δ/(10C)`.
#[derive(Clone, Debug)]
pub struct TransferContext {
    board_net: FiniteBlockSequence,
    board: FiniteBlockSequence,
    outer: NetConfig,
    inner: NetConfig,
}

impl TransferContext {
    /// `outer` carries `Δ` and the norm; it must satisfy `δ_0 ≤ 1` and
    /// `Σ_{j>n} δ_j ≤ δ_n`.
    pub fn new(board_net: FiniteBlockSequence, outer: NetConfig) -> Result<Self> {
        outer.delta().check_summable()?;
        let ten_c = int(10) * outer.norm().basis_constant();
        let inner_delta = outer.delta().scaled(&(Rational::one() / ten_c));
        let inner = NetConfig::new(inner_delta, outer.norm().clone());
        for (j, z) in board_net.iter().enumerate() {
            if !net_member(z, &inner)? {
                return Err(Error::NotInNet(format!("z̃_{j} = {z}")));
            }
        }
        let board = covering_sequence(&board_net);
        Ok(TransferContext {
            board_net,
            board,
            outer,
            inner,
        })
    }

    /// `Z̃`.
    pub fn board_net(&self) -> &FiniteBlockSequence {
        &self.board_net
    }

    /// `Z`, with `z_j = z̃_{2j} + z̃_{2j+1}`.
    pub fn board(&self) -> &FiniteBlockSequence {
        &self.board
    }

    pub fn outer(&self) -> &NetConfig {
        &self.outer
    }

    /// The net configuration for `Δ/(10C)`.
    pub fn inner(&self) -> &NetConfig {
        &self.inner
    }

    pub fn inner_delta(&self) -> &ToleranceSequence {
        self.inner.delta()
    }

    pub fn basis_constant(&self) -> &Rational {
        self.outer.norm().basis_constant()
    }

    fn delta(&self, n: usize) -> Rational {
        self.outer.delta().delta(n)
    }

    fn inner_delta_at(&self, n: usize) -> Rational {
        self.inner.delta().delta(n)
    }
}

/// Bounds checked on one adapted round.
#[derive(Clone, Debug, Serialize)]
pub struct RoundCertificate {
    pub round: usize,
    pub k0: usize,
    #[serde(with = "serde_rational")]
    pub lambda_max: Rational,
    /// `4C`.
    #[serde(with = "serde_rational")]
    pub lambda_bound: Rational,
    /// `‖x_n - x̃_n‖` for `x_n = Σ λ_k z_k`.
    pub pick_error: NormValue,
    /// `(4/5)δ_n`.
    #[serde(with = "serde_rational")]
    pub pick_bound: Rational,
    /// `‖x̃_n‖`, checked against `1 + δ_n/(10C)`.
    pub discrete_norm: NormValue,
    /// Whether `x_n` left the unit ball and was scaled back.
    pub rescaled: bool,
    /// `‖x_played - x̃_n‖`.
    pub played_error: NormValue,
    pub pass: bool,
}

/// Rational `r ≥ ‖x‖`, exact whenever the norm is rational.
fn norm_upper_rational(norm: &NormPlugin, x: &BlockVector) -> Rational {
    match norm.norm(x) {
        NormValue::Exact(q) => q,
        NormValue::Sqrt(s) => match sqrt_exact(&s) {
            Some(q) => q,
            None => {
                // ⌈√s · 2^40⌉ / 2^40
                let scale = BigInt::one() << 40u32;
                let scaled = &s * Rational::from_integer(&scale * &scale);
                let root = scaled.floor().to_integer().sqrt() + 1;
                Rational::new(root, scale)
            }
        },
    }
}

fn exact_norm(norm: &NormPlugin, x: &BlockVector) -> Result<Rational> {
    norm.norm(x).exact().ok_or_else(|| {
        Error::Precondition(format!(
            "vector {x} has irrational norm {}; the {} adapter needs rational norms to normalize",
            norm.norm(x),
            match norm.kind() {
                NormKind::Ell2 => "ell2",
                NormKind::Ell1 => "ell1",
                NormKind::Sup => "sup",
            }
        ))
    })
}

/// The continuous strategy built from a discrete one.
pub struct AdaptedStrategy<'c, S> {
    ctx: &'c TransferContext,
    discrete: S,
    discrete_picks: Vec<BlockVector>,
    certificates: Vec<RoundCertificate>,
    coverings: Vec<CoveringCertificate>,
}

impl<'c, S: StrategyII> AdaptedStrategy<'c, S> {
    pub fn new(ctx: &'c TransferContext, discrete: S) -> Self {
        AdaptedStrategy {
            ctx,
            discrete,
            discrete_picks: Vec::new(),
            certificates: Vec::new(),
            coverings: Vec::new(),
        }
    }

    /// `(x̃_n)`: the picks of the shadow discrete game.
    pub fn discrete_picks(&self) -> &[BlockVector] {
        &self.discrete_picks
    }

    pub fn certificates(&self) -> &[RoundCertificate] {
        &self.certificates
    }

    /// The rounding certificates for each player I move.
    pub fn coverings(&self) -> &[CoveringCertificate] {
        &self.coverings
    }
}

impl<S: StrategyII> StrategyII for AdaptedStrategy<'_, S> {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        let ctx = self.ctx;
        let norm = ctx.outer.norm();
        let n = pos.round;
        if !pos.prefix.is_empty() {
            return Err(Error::Precondition(
                "the adapter plays from an empty prefix".into(),
            ));
        }
        if pos.picks.len() != self.discrete_picks.len() {
            return Err(Error::Precondition(
                "adapter state is out of step with the game".into(),
            ));
        }

        // (a) normalize
        let mut normalized = Vec::with_capacity(offer.len());
        for z in offer.iter() {
            let r = exact_norm(norm, z)?;
            normalized.push(z.scale(&(Rational::one() / r)));
        }
        let normalized = FiniteBlockSequence::new(normalized)?;

        // (b) round onto the net at Δ/(10C)
        let (rounded, covering) =
            verify_covering(&normalized, &ctx.board, &ctx.board_net, &ctx.inner)?;
        for (k, zt) in rounded.iter().enumerate() {
            let floor = Rational::one() - ctx.inner_delta_at(k);
            let value = norm.norm(zt);
            if value.lt(&floor) {
                return Err(Error::certification(
                    format!("1 - ‖z̃_{k}‖ at round {n}"),
                    value,
                    format_rational(&floor),
                ));
            }
        }
        self.coverings.push(covering);

        // (c) minimal k_0 ≥ n with x_{n-1} < z_{k_0}
        let k0 = (n..normalized.len())
            .find(|&k| match pos.picks.last() {
                None => true,
                Some(prev) => block_less(prev, &normalized.as_slice()[k]).unwrap_or(false),
            })
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "player I's move of length {} has no vector with index ≥ {n} after the last pick",
                    normalized.len()
                ))
            })?;
        let tail = rounded.slice(k0..rounded.len());
        let empty = FiniteBlockSequence::empty();
        let discrete_pos = Position {
            mode: GameMode::Discrete,
            board: &ctx.board_net,
            prefix: &empty,
            round: n,
            picks: &self.discrete_picks,
            cfg: &ctx.inner,
        };
        let xt = self.discrete.respond(&discrete_pos, &tail)?;

        let ten_c = int(10) * ctx.basis_constant();
        let delta_n = ctx.delta(n);
        let discrete_norm = norm.norm(&xt);
        let norm_cap = Rational::one() + &delta_n / &ten_c;
        if !discrete_norm.le(&norm_cap) {
            return Err(Error::certification(
                format!("‖x̃_{n}‖"),
                &discrete_norm,
                format_rational(&norm_cap),
            ));
        }
        if let Some(reason) = check_move_ii(
            GameMode::Discrete,
            &tail,
            self.discrete_picks.last(),
            &xt,
            &ctx.inner,
        )? {
            return Err(Error::IllegalMove {
                round: n,
                player: crate::error::Player::II,
                reason: format!("discrete strategy: {reason}"),
            });
        }

        // (d) transport the expansion
        let lambdas = tail
            .span_coefficients(&xt)
            .expect("legal picks lie in the span");
        let lambda_max = lambdas
            .iter()
            .map(|l| l.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let lambda_bound = int(4) * ctx.basis_constant();
        if lambda_max > lambda_bound {
            return Err(Error::certification(
                format!("max |λ_k| at round {n}"),
                format_rational(&lambda_max),
                format_rational(&lambda_bound),
            ));
        }
        let raw = normalized
            .slice(k0..normalized.len())
            .combine(lambdas.iter().enumerate().filter(|(_, l)| !l.is_zero()));
        let pick_bound = ratio(4, 5) * &delta_n;
        let pick_error = norm.norm(&(&raw - &xt));
        if !pick_error.le(&pick_bound) {
            return Err(Error::certification(
                format!("‖x_{n} - x̃_{n}‖"),
                &pick_error,
                format_rational(&pick_bound),
            ));
        }
        let (played, rescaled) = if norm.in_unit_ball(&raw) {
            (raw, false)
        } else {
            let r = norm_upper_rational(norm, &raw);
            (raw.scale(&(Rational::one() / r)), true)
        };
        let played_error = norm.norm(&(&played - &xt));
        if !played_error.le(&pick_bound) {
            return Err(Error::certification(
                format!("‖x_{n} - x̃_{n}‖ after rescaling"),
                &played_error,
                format_rational(&pick_bound),
            ));
        }
        self.certificates.push(RoundCertificate {
            round: n,
            k0,
            lambda_max,
            lambda_bound,
            pick_error,
            pick_bound,
            discrete_norm,
            rescaled,
            played_error,
            pass: true,
        });
        self.discrete_picks.push(xt);
        Ok(played)
    }
}

/// A finished adapted play.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptedRun {
    pub transcript: GameTranscript,
    pub discrete_outcome: FiniteBlockSequence,
    pub rounds: Vec<RoundCertificate>,
}

/// Plays the continuous game on `Z` with the adapted strategy against
/// `strat_i`, from the empty prefix.
pub fn run_adapted<S: StrategyII>(
    ctx: &TransferContext,
    strat_i: &mut dyn StrategyI,
    discrete: S,
    horizon: usize,
    family: &dyn Family,
) -> Result<AdaptedRun> {
    let mut adapted = AdaptedStrategy::new(ctx, discrete);
    let transcript = crate::game::play_continuous(
        &ctx.board,
        &FiniteBlockSequence::empty(),
        horizon,
        strat_i,
        &mut adapted,
        family,
        &ctx.outer,
    )?;
    let discrete_outcome = FiniteBlockSequence::new(adapted.discrete_picks.clone())?;
    Ok(AdaptedRun {
        transcript,
        discrete_outcome,
        rounds: adapted.certificates,
    })
}

/// Per-index check that `played` is within `(4/5)δ_n + δ_n/(10C) ≤ δ_n` of
/// `reference`, where `reference` is `Δ/(10C)`-near the discrete outcome.
pub fn composite_nearness(
    played: &FiniteBlockSequence,
    discrete: &FiniteBlockSequence,
    reference: &FiniteBlockSequence,
    ctx: &TransferContext,
) -> Result<Vec<NormValue>> {
    let norm = ctx.outer.norm();
    if !dist_leq_delta(discrete, reference, ctx.inner.delta(), norm)? {
        return Err(Error::Precondition(
            "reference is not Δ/(10C)-near the discrete outcome".into(),
        ));
    }
    if played.len() != reference.len() {
        return Err(Error::LengthMismatch {
            left: played.len(),
            right: reference.len(),
        });
    }
    let ten_c = int(10) * ctx.basis_constant();
    let mut out = Vec::with_capacity(played.len());
    for (n, (x, v)) in played.iter().zip(reference.iter()).enumerate() {
        let delta_n = ctx.delta(n);
        let bound = ratio(4, 5) * &delta_n + &delta_n / &ten_c;
        if bound > delta_n {
            return Err(Error::certification(
                format!("(4/5)δ_{n} + δ_{n}/(10C)"),
                format_rational(&bound),
                format_rational(&delta_n),
            ));
        }
        let d = norm.norm(&(x - v));
        if !d.le(&bound) {
            return Err(Error::certification(
                format!("‖x_{n} - v_{n}‖"),
                &d,
                format_rational(&bound),
            ));
        }
        out.push(d);
    }
    Ok(out)
}

/// `U ∈ ℱ_Δ` for a family listed extensionally. Members of a different
/// length cannot be `Δ`-near `U` and are skipped.
pub fn expansion_member(
    u: &FiniteBlockSequence,
    family: &[FiniteBlockSequence],
    delta: &ToleranceSequence,
    norm: &NormPlugin,
) -> Result<bool> {
    for v in family {
        if v.len() == u.len() && dist_leq_delta(u, v, delta, norm)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The rounded image `Ũ` of `U` and the family's answer on it.
#[derive(Clone, Debug, Serialize)]
pub struct EmptinessCertificate {
    pub rounded: FiniteBlockSequence,
    pub covering: CoveringCertificate,
    pub verdict: Determination,
}

/// Rounds a unit-ball block subsequence `U ⪯ Z` onto `Ũ ⪯ Z̃` and evaluates
/// the net-side family on `Ũ`.
pub fn emptiness_transfer(
    u: &FiniteBlockSequence,
    ctx: &TransferContext,
    family: &dyn Family,
) -> Result<EmptinessCertificate> {
    for (n, x) in u.iter().enumerate() {
        if !ctx.outer.norm().in_unit_ball(x) {
            return Err(Error::OutsideUnitBall(format!("u_{n} = {x}")));
        }
    }
    let (rounded, covering) = verify_covering(u, &ctx.board, &ctx.board_net, &ctx.inner)?;
    let verdict = family.decide(&rounded);
    Ok(EmptinessCertificate {
        rounded,
        covering,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{BoardTail, FamilySpec, FirstLegal, ScriptedII};

    fn open(_: &FiniteBlockSequence) -> Determination {
        Determination::Undetermined
    }

    fn ctx(norm: NormPlugin, len: usize) -> TransferContext {
        let cfg = NetConfig::default().with_norm(norm);
        TransferContext::new(FiniteBlockSequence::standard_basis(len), cfg).unwrap()
    }

    #[test]
    fn inner_exponents() {
        // δ'_n = 2^-n/10 needs 2^(k-1) ≥ 10·2^n, so k'_n = n + 5
        let c = ctx(NormPlugin::ell1(), 4);
        assert_eq!(c.inner().k(0), 5);
        assert_eq!(c.inner().k(3), 8);
        assert_eq!(c.board().len(), 2);
    }

    #[test]
    fn first_legal_through_the_covering_board() {
        for norm in [NormPlugin::ell1(), NormPlugin::sup()] {
            let c = ctx(norm, 16);
            let run = run_adapted(&c, &mut BoardTail, FirstLegal, 3, &open).unwrap();
            assert_eq!(run.rounds.len(), 3);
            for r in &run.rounds {
                assert!(r.lambda_max <= int(4));
                assert!(r.pick_error.le(&r.pick_bound));
                assert!(r.played_error.le(&r.pick_bound));
            }
            let played = run.transcript.outcome().unwrap();
            assert_eq!(played.len(), 3);
            let nearness =
                composite_nearness(&played, &run.discrete_outcome, &run.discrete_outcome, &c)
                    .unwrap();
            assert_eq!(nearness.len(), 3);
        }
    }

    #[test]
    fn oversized_discrete_pick_is_caught() {
        let c = ctx(NormPlugin::ell1(), 8);
        let huge = BlockVector::from_pairs([(0, int(2)), (1, int(2))]);
        let err =
            run_adapted(&c, &mut BoardTail, ScriptedII::new(vec![huge]), 1, &open).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn ell2_requires_rational_norms() {
        let c = ctx(NormPlugin::ell2(), 8);
        // z_0 = e_0 + e_1 has norm √2
        let err = run_adapted(&c, &mut BoardTail, FirstLegal, 1, &open).unwrap_err();
        assert!(err.to_string().contains("irrational"));
    }

    #[test]
    fn summability_is_required() {
        let delta = ToleranceSequence::geometric(int(1), ratio(3, 4)).unwrap();
        let cfg = NetConfig::new(delta, NormPlugin::ell1());
        assert!(TransferContext::new(FiniteBlockSequence::standard_basis(4), cfg).is_err());
    }

    #[test]
    fn expansion_examples() {
        let norm = NormPlugin::ell1();
        let delta = ToleranceSequence::halving();
        let u = FiniteBlockSequence::standard_basis(3);
        assert!(expansion_member(&u, std::slice::from_ref(&u), &delta, &norm).unwrap());
        assert!(!expansion_member(&u, &[], &delta, &norm).unwrap());
        let mut vs = u.clone().into_vec();
        vs[1] = &vs[1] + &BlockVector::basis(1).scale(&ratio(1, 4));
        let v = FiniteBlockSequence::new(vs).unwrap();
        assert!(expansion_member(&u, &[v], &delta, &norm).unwrap());
    }

    #[test]
    fn emptiness_examples() {
        let c = ctx(NormPlugin::sup(), 8);
        let out = FamilySpec::Constant { value: false };
        let cert = emptiness_transfer(&c.board().slice(0..2), &c, &out).unwrap();
        assert_eq!(cert.verdict, Determination::Out);
        assert_eq!(cert.rounded.len(), 2);
        let empty =
            emptiness_transfer(&FiniteBlockSequence::empty(), &c, &FamilySpec::default()).unwrap();
        assert!(empty.rounded.is_empty());
        assert_eq!(empty.verdict, Determination::Undetermined);
    }
}
