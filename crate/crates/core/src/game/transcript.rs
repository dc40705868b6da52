use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{BlockVector, FiniteBlockSequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "player", content = "payload")]
pub enum Move {
    /// A block subsequence of the board.
    I(FiniteBlockSequence),
    /// A vector from the span of the preceding player I move.
    II(BlockVector),
}

/// A finished (or aborted) play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub board: FiniteBlockSequence,
    pub prefix: FiniteBlockSequence,
    pub horizon: usize,
    pub moves: Vec<Move>,
    pub verdict: Option<bool>,
}

impl GameTranscript {
    pub fn new(board: FiniteBlockSequence, prefix: FiniteBlockSequence, horizon: usize) -> Self {
        GameTranscript {
            board,
            prefix,
            horizon,
            moves: Vec::new(),
            verdict: None,
        }
    }

    pub fn moves_i(&self) -> Vec<&FiniteBlockSequence> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                Move::I(s) => Some(s),
                Move::II(_) => None,
            })
            .collect()
    }

    /// Player II's picks in order.
    pub fn picks(&self) -> Vec<&BlockVector> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                Move::II(x) => Some(x),
                Move::I(_) => None,
            })
            .collect()
    }

    /// `prefix ⌢ picks`.
    pub fn outcome(&self) -> Result<FiniteBlockSequence> {
        let mut seq = self.prefix.clone();
        for x in self.picks() {
            seq.push(x.clone())?;
        }
        Ok(seq)
    }

    /// Moves alternate starting with player I, and there are at most
    /// `2·horizon` of them.
    pub fn check_shape(&self) -> Result<()> {
        if self.moves.len() > 2 * self.horizon {
            return Err(Error::Precondition(format!(
                "{} moves exceed twice the horizon {}",
                self.moves.len(),
                self.horizon
            )));
        }
        for (n, m) in self.moves.iter().enumerate() {
            let expected_i = n % 2 == 0;
            if matches!(m, Move::I(_)) != expected_i {
                return Err(Error::Precondition(format!("move {n} is out of turn")));
            }
        }
        Ok(())
    }
}
