//! Pairs up the standard basis and rounds a block subsequence of the pairs
//! back onto the net.

use blockgame::net::{covering_sequence, verify_covering};
use blockgame::scalar::ratio;
use blockgame::{FiniteBlockSequence, NetConfig};

fn main() -> blockgame::Result<()> {
    let cfg = NetConfig::default();
    let board = FiniteBlockSequence::standard_basis(12);
    let z = covering_sequence(&board);
    let u = FiniteBlockSequence::new(vec![
        z.as_slice()[0].scale(&ratio(1, 3)),
        z.slice(2..4)
            .combine([(0, &ratio(1, 4)), (1, &ratio(-1, 5))]),
        z.as_slice()[5].scale(&ratio(-1, 2)),
    ])?;
    let (rounded, cert) = verify_covering(&u, &z, &board, &cfg)?;
    for (e, x) in cert.entries.iter().zip(rounded.iter()) {
        println!(
            "u~_{} = {x}  error {} <= delta {}",
            e.index, e.error, e.delta
        );
    }
    Ok(())
}
