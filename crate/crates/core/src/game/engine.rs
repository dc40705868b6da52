//! Finite-horizon play with exact move validation.

use super::family::{Determination, Family};
use super::strategy::{GameMode, Position, ScriptedI, ScriptedII, StrategyI, StrategyII};
use super::transcript::{GameTranscript, Move};
use crate::error::{Error, Player, Result};
use crate::net::{net_member, NetConfig};
use crate::vector::{is_block_subsequence, BlockVector, FiniteBlockSequence};

/// Why a player I move is illegal, if it is.
pub fn check_move_i(
    mode: GameMode,
    board: &FiniteBlockSequence,
    offer: &FiniteBlockSequence,
    cfg: &NetConfig,
) -> Result<Option<String>> {
    if offer.is_empty() {
        return Ok(Some("move must be nonempty".into()));
    }
    if !is_block_subsequence(offer, board) {
        return Ok(Some("move is not a block subsequence of the board".into()));
    }
    if mode == GameMode::Discrete {
        for (k, v) in offer.iter().enumerate() {
            if !net_member(v, cfg)? {
                return Ok(Some(format!("vector {k} of the move is not a net element")));
            }
        }
    }
    Ok(None)
}

/// Why a player II pick is illegal, if it is.
pub fn check_move_ii(
    mode: GameMode,
    offer: &FiniteBlockSequence,
    after: Option<&BlockVector>,
    pick: &BlockVector,
    cfg: &NetConfig,
) -> Result<Option<String>> {
    if pick.is_zero() {
        return Ok(Some("pick is the zero vector".into()));
    }
    if !offer.spans(pick) {
        return Ok(Some("pick is not in the span of player I's move".into()));
    }
    match mode {
        GameMode::Discrete => {
            if !net_member(pick, cfg)? {
                return Ok(Some("pick is not a net element".into()));
            }
        }
        GameMode::Continuous => {
            if !cfg.norm().in_unit_ball(pick) {
                return Ok(Some(format!("pick has norm {} > 1", cfg.norm().norm(pick))));
            }
        }
    }
    if let Some(prev) = after {
        if !crate::vector::block_less(prev, pick)? {
            return Ok(Some(
                "pick is not strictly block-after the previous vector".into(),
            ));
        }
    }
    Ok(None)
}

/// Whether some vector of `offer` lies strictly after `after`; otherwise
/// player II has no legal reply.
fn has_reply(offer: &FiniteBlockSequence, after: Option<&BlockVector>) -> bool {
    match after.and_then(BlockVector::max_support) {
        None => !offer.is_empty(),
        Some(m) => offer
            .iter()
            .any(|v| v.min_support().is_some_and(|lo| lo > m)),
    }
}

fn wrap(round: usize, player: Player, e: Error) -> Error {
    match e {
        Error::Certification { .. } | Error::IllegalMove { .. } => e,
        other => Error::IllegalMove {
            round,
            player,
            reason: other.to_string(),
        },
    }
}

/// Plays up to `horizon` rounds, stopping early once the family decides
/// `prefix ⌢ picks`. The verdict is `true` only when the family answers
/// `In`; an undetermined outcome at the horizon, or player II having no
/// legal reply, counts as out.
#[allow(clippy::too_many_arguments)]
pub fn play(
    mode: GameMode,
    board: &FiniteBlockSequence,
    prefix: &FiniteBlockSequence,
    horizon: usize,
    strat_i: &mut dyn StrategyI,
    strat_ii: &mut dyn StrategyII,
    family: &dyn Family,
    cfg: &NetConfig,
) -> Result<GameTranscript> {
    if mode == GameMode::Discrete {
        for (j, z) in board.iter().enumerate() {
            if !net_member(z, cfg)? {
                return Err(Error::Precondition(format!(
                    "board vector {j} is not a net element"
                )));
            }
        }
    }
    let mut transcript = GameTranscript::new(board.clone(), prefix.clone(), horizon);
    let mut picks: Vec<BlockVector> = Vec::new();
    let mut outcome = prefix.clone();
    let mut stuck = false;
    for round in 0..horizon {
        if family.decide(&outcome) != Determination::Undetermined {
            break;
        }
        let pos = Position {
            mode,
            board,
            prefix,
            round,
            picks: &picks,
            cfg,
        };
        let offer = strat_i.play(&pos).map_err(|e| wrap(round, Player::I, e))?;
        if let Some(reason) = check_move_i(mode, board, &offer, cfg)? {
            return Err(Error::IllegalMove {
                round,
                player: Player::I,
                reason,
            });
        }
        transcript.moves.push(Move::I(offer.clone()));
        if !has_reply(&offer, pos.last()) {
            stuck = true;
            break;
        }
        let pick = strat_ii
            .respond(&pos, &offer)
            .map_err(|e| wrap(round, Player::II, e))?;
        if let Some(reason) = check_move_ii(mode, &offer, pos.last(), &pick, cfg)? {
            return Err(Error::IllegalMove {
                round,
                player: Player::II,
                reason,
            });
        }
        transcript.moves.push(Move::II(pick.clone()));
        outcome.push(pick.clone())?;
        picks.push(pick);
    }
    transcript.verdict = Some(!stuck && family.decide(&outcome) == Determination::In);
    Ok(transcript)
}

/// The discrete game: picks must be net elements.
pub fn play_discrete(
    board: &FiniteBlockSequence,
    prefix: &FiniteBlockSequence,
    horizon: usize,
    strat_i: &mut dyn StrategyI,
    strat_ii: &mut dyn StrategyII,
    family: &dyn Family,
    cfg: &NetConfig,
) -> Result<GameTranscript> {
    play(
        GameMode::Discrete,
        board,
        prefix,
        horizon,
        strat_i,
        strat_ii,
        family,
        cfg,
    )
}

/// The continuous game: picks must lie in the unit ball.
pub fn play_continuous(
    board: &FiniteBlockSequence,
    prefix: &FiniteBlockSequence,
    horizon: usize,
    strat_i: &mut dyn StrategyI,
    strat_ii: &mut dyn StrategyII,
    family: &dyn Family,
    cfg: &NetConfig,
) -> Result<GameTranscript> {
    play(
        GameMode::Continuous,
        board,
        prefix,
        horizon,
        strat_i,
        strat_ii,
        family,
        cfg,
    )
}

/// Re-runs a transcript's moves through the engine, revalidating each one.
pub fn replay(
    transcript: &GameTranscript,
    mode: GameMode,
    family: &dyn Family,
    cfg: &NetConfig,
) -> Result<GameTranscript> {
    transcript.check_shape()?;
    let mut strat_i = ScriptedI::new(transcript.moves_i().into_iter().cloned().collect());
    let mut strat_ii = ScriptedII::new(transcript.picks().into_iter().cloned().collect());
    let again = play(
        mode,
        &transcript.board,
        &transcript.prefix,
        transcript.horizon,
        &mut strat_i,
        &mut strat_ii,
        family,
        cfg,
    )?;
    if again.moves != transcript.moves {
        return Err(Error::certification(
            "replayed moves",
            format!("{} moves differing from the record", again.moves.len()),
            format!("the {} recorded moves", transcript.moves.len()),
        ));
    }
    Ok(again)
}
