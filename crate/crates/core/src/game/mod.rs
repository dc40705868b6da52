//! Bounded discrete and continuous block-sequence games.

mod engine;
mod family;
mod solver;
mod span;
mod strategy;
mod transcript;

pub use engine::{check_move_i, check_move_ii, play, play_continuous, play_discrete, replay};
pub use family::{Determination, Family, FamilySpec};
pub use solver::{game_tree_size, solve_bounded, SolveOutcome, WinningStrategy};
pub use span::{enumerate_net_in_span, first_net_in_span, sample_net_in_span};
pub use strategy::{
    BoardTail, ChoiceIndices, FirstLegal, GameMode, MenuScript, NextElement, Position,
    SampledLegal, ScriptedI, ScriptedII, StrategyI, StrategyII,
};
pub use transcript::{GameTranscript, Move};
