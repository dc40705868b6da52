use blockgame::net::round_to_net;
use blockgame::scalar::ratio;
use blockgame::{BlockVector, FiniteBlockSequence, NetConfig};

fn main() -> blockgame::Result<()> {
    let cfg = NetConfig::default();
    let board = FiniteBlockSequence::standard_basis(4);
    let w = BlockVector::from_pairs([(0, ratio(1, 3)), (2, ratio(-1, 3)), (3, ratio(1, 5))]);
    let r = round_to_net(&w, &board, &cfg)?;
    println!("w      = {w}");
    println!("w~     = {}", r.rounded);
    println!("error  = {} <= {}", r.error_norm, r.bound);
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(())
}
