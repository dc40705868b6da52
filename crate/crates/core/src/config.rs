//! Run configuration for the command-line tool. Every field has a default,
//! so `{}` is a valid configuration.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    BoardTail, ChoiceIndices, FamilySpec, FirstLegal, GameMode, MenuScript, NextElement,
    SampledLegal, ScriptedI, ScriptedII, StrategyI, StrategyII,
};
use crate::net::NetConfig;
use crate::vector::{BlockVector, FiniteBlockSequence};

/// The board `Z̃`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoardSpec {
    /// `(e_0, …, e_{length-1})`.
    Standard {
        length: usize,
    },
    Explicit {
        vectors: FiniteBlockSequence,
    },
}

impl Default for BoardSpec {
    fn default() -> Self {
        BoardSpec::Standard { length: 6 }
    }
}

impl BoardSpec {
    pub fn build(&self) -> FiniteBlockSequence {
        match self {
            BoardSpec::Standard { length } => FiniteBlockSequence::standard_basis(*length),
            BoardSpec::Explicit { vectors } => vectors.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlayerISpec {
    /// The next unused board vector, alone.
    #[default]
    NextElement,
    /// Every board vector after the last pick.
    BoardTail,
    Script {
        moves: Vec<FiniteBlockSequence>,
    },
    /// Indices into the configured menu, one per round.
    Menu {
        indices: Vec<usize>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlayerIISpec {
    /// The first legal net vector in canonical order.
    #[default]
    FirstLegal,
    /// Indices into the canonical list of legal replies, one per round.
    ChoiceIndices {
        indices: Vec<usize>,
    },
    Script {
        picks: Vec<BlockVector>,
    },
    /// A legal reply drawn from the seeded generator.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub net: NetConfig,
    pub board: BoardSpec,
    pub prefix: FiniteBlockSequence,
    pub horizon: usize,
    pub seed: u64,
    pub mode: GameMode,
    pub family: FamilySpec,
    pub player_i: PlayerISpec,
    pub player_ii: PlayerIISpec,
    /// Player I's menu for the solver; defaults to the board's singletons.
    pub menu: Option<Vec<FiniteBlockSequence>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            net: NetConfig::default(),
            board: BoardSpec::default(),
            prefix: FiniteBlockSequence::empty(),
            horizon: 3,
            seed: 0,
            mode: GameMode::default(),
            family: FamilySpec::default(),
            player_i: PlayerISpec::default(),
            player_ii: PlayerIISpec::default(),
            menu: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn board(&self) -> FiniteBlockSequence {
        self.board.build()
    }

    pub fn menu(&self) -> Vec<FiniteBlockSequence> {
        match &self.menu {
            Some(menu) => menu.clone(),
            None => self
                .board()
                .iter()
                .map(|z| FiniteBlockSequence::new(vec![z.clone()]).expect("one vector"))
                .collect(),
        }
    }

    pub fn strategy_i(&self) -> Box<dyn StrategyI> {
        match &self.player_i {
            PlayerISpec::NextElement => Box::new(NextElement),
            PlayerISpec::BoardTail => Box::new(BoardTail),
            PlayerISpec::Script { moves } => Box::new(ScriptedI::new(moves.clone())),
            PlayerISpec::Menu { indices } => {
                Box::new(MenuScript::new(self.menu(), indices.clone()))
            }
        }
    }

    pub fn strategy_ii(&self) -> Box<dyn StrategyII> {
        match &self.player_ii {
            PlayerIISpec::FirstLegal => Box::new(FirstLegal),
            PlayerIISpec::ChoiceIndices { indices } => {
                Box::new(ChoiceIndices::new(indices.clone()))
            }
            PlayerIISpec::Script { picks } => Box::new(ScriptedII::new(picks.clone())),
            PlayerIISpec::Sampled => {
                Box::new(SampledLegal::new(ChaCha8Rng::seed_from_u64(self.seed)))
            }
        }
    }
}
