//! Plays a three-round discrete game with scripted choices, then replays the
//! transcript.

use blockgame::game::{play_discrete, replay, ChoiceIndices, FamilySpec, GameMode, NextElement};
use blockgame::{FiniteBlockSequence, NetConfig};

fn main() -> blockgame::Result<()> {
    let cfg = NetConfig::default();
    let board = FiniteBlockSequence::standard_basis(6);
    let family = FamilySpec::PositiveLeading { length: 3 };
    let t = play_discrete(
        &board,
        &FiniteBlockSequence::empty(),
        3,
        &mut NextElement,
        &mut ChoiceIndices::new(vec![7, 15, 31]),
        &family,
        &cfg,
    )?;
    println!("{}", serde_json::to_string_pretty(&t)?);
    let again = replay(&t, GameMode::Discrete, &family, &cfg)?;
    assert_eq!(again.verdict, t.verdict);
    Ok(())
}
