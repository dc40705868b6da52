//! Strategy interfaces and the stock strategies.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::span::{enumerate_net_in_span, first_net_in_span, sample_net_in_span};
use crate::error::{Error, Result};
use crate::net::NetConfig;
use crate::vector::{BlockVector, FiniteBlockSequence};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameMode {
    /// Player II picks net elements.
    #[default]
    Discrete,
    /// Player II picks any vector of norm at most 1.
    Continuous,
}

/// What a strategy sees when asked to move.
#[derive(Clone, Copy, Debug)]
pub struct Position<'a> {
    pub mode: GameMode,
    pub board: &'a FiniteBlockSequence,
    pub prefix: &'a FiniteBlockSequence,
    pub round: usize,
    pub picks: &'a [BlockVector],
    pub cfg: &'a NetConfig,
}

impl Position<'_> {
    /// The vector player II's next pick must come strictly after.
    pub fn last(&self) -> Option<&BlockVector> {
        self.picks.last().or_else(|| self.prefix.last())
    }

    /// First board index strictly block-after [`Position::last`].
    pub fn next_board_index(&self) -> Option<usize> {
        let bound = self.last().and_then(BlockVector::max_support);
        self.board.iter().position(|v| match bound {
            None => true,
            Some(m) => v.min_support().is_some_and(|lo| lo > m),
        })
    }
}

pub trait StrategyI {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence>;
}

pub trait StrategyII {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector>;
}

impl<T: StrategyI + ?Sized> StrategyI for Box<T> {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence> {
        (**self).play(pos)
    }
}

impl<T: StrategyII + ?Sized> StrategyII for Box<T> {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        (**self).respond(pos, offer)
    }
}

fn exhausted() -> Error {
    Error::Precondition("no board vector is left after the last pick".into())
}

/// Offers the single next board vector after the last pick.
#[derive(Clone, Debug, Default)]
pub struct NextElement;

impl StrategyI for NextElement {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence> {
        let j = pos.next_board_index().ok_or_else(exhausted)?;
        Ok(pos.board.slice(j..j + 1))
    }
}

/// Offers the whole board tail after the last pick.
#[derive(Clone, Debug, Default)]
pub struct BoardTail;

impl StrategyI for BoardTail {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence> {
        let j = pos.next_board_index().ok_or_else(exhausted)?;
        Ok(pos.board.slice(j..pos.board.len()))
    }
}

/// Plays a fixed list of moves, one per round.
#[derive(Clone, Debug)]
pub struct ScriptedI {
    moves: Vec<FiniteBlockSequence>,
    next: usize,
}

impl ScriptedI {
    pub fn new(moves: Vec<FiniteBlockSequence>) -> Self {
        ScriptedI { moves, next: 0 }
    }
}

impl StrategyI for ScriptedI {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence> {
        let m = self.moves.get(self.next).ok_or_else(|| {
            Error::Precondition(format!("script has no move for round {}", pos.round))
        })?;
        self.next += 1;
        Ok(m.clone())
    }
}

/// Plays menu entries by index, one index per round.
#[derive(Clone, Debug)]
pub struct MenuScript {
    menu: Vec<FiniteBlockSequence>,
    indices: Vec<usize>,
}

impl MenuScript {
    pub fn new(menu: Vec<FiniteBlockSequence>, indices: Vec<usize>) -> Self {
        MenuScript { menu, indices }
    }
}

impl StrategyI for MenuScript {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence> {
        let idx = *self
            .indices
            .get(pos.round)
            .ok_or_else(|| Error::Precondition(format!("no menu index for round {}", pos.round)))?;
        self.menu
            .get(idx)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("menu index {idx} out of range")))
    }
}

/// Picks the first legal net vector in canonical order.
#[derive(Clone, Debug, Default)]
pub struct FirstLegal;

impl StrategyII for FirstLegal {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        first_net_in_span(offer, pos.last(), pos.cfg)?.ok_or_else(|| {
            Error::Precondition("no net vector is available in the offered span".into())
        })
    }
}

/// Picks the `i`-th legal net vector (canonical order) in round `r`, with `i`
/// taken from a list.
#[derive(Clone, Debug)]
pub struct ChoiceIndices {
    indices: Vec<usize>,
}

impl ChoiceIndices {
    pub fn new(indices: Vec<usize>) -> Self {
        ChoiceIndices { indices }
    }
}

impl StrategyII for ChoiceIndices {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        let idx = *self.indices.get(pos.round).ok_or_else(|| {
            Error::Precondition(format!("no choice index for round {}", pos.round))
        })?;
        let options = enumerate_net_in_span(offer, pos.last(), pos.cfg)?;
        options.get(idx).cloned().ok_or_else(|| {
            Error::Precondition(format!(
                "choice {idx} out of range ({} legal moves)",
                options.len()
            ))
        })
    }
}

/// Plays a fixed list of vectors, one per round.
#[derive(Clone, Debug)]
pub struct ScriptedII {
    picks: Vec<BlockVector>,
    next: usize,
}

impl ScriptedII {
    pub fn new(picks: Vec<BlockVector>) -> Self {
        ScriptedII { picks, next: 0 }
    }
}

impl StrategyII for ScriptedII {
    fn respond(&mut self, pos: &Position<'_>, _offer: &FiniteBlockSequence) -> Result<BlockVector> {
        let x = self.picks.get(self.next).ok_or_else(|| {
            Error::Precondition(format!("script has no pick for round {}", pos.round))
        })?;
        self.next += 1;
        Ok(x.clone())
    }
}

/// Picks a random legal net vector from a seeded generator.
#[derive(Clone, Debug)]
pub struct SampledLegal {
    rng: ChaCha8Rng,
}

impl SampledLegal {
    pub fn new(rng: ChaCha8Rng) -> Self {
        SampledLegal { rng }
    }
}

impl StrategyII for SampledLegal {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        sample_net_in_span(offer, pos.last(), pos.cfg, &mut self.rng)?.ok_or_else(|| {
            Error::Precondition("no net vector is available in the offered span".into())
        })
    }
}
