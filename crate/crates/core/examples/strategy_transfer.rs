//! Runs a discrete strategy in the continuous game through the adapter and
//! prints the per-round certificates.

use blockgame::game::{Determination, SampledLegal};
use blockgame::transfer::{run_adapted, TransferContext};
use blockgame::verify::RandomBlocks;
use blockgame::{FiniteBlockSequence, NetConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn open(_: &FiniteBlockSequence) -> Determination {
    Determination::Undetermined
}

fn main() -> blockgame::Result<()> {
    let ctx = TransferContext::new(
        FiniteBlockSequence::standard_basis(64),
        NetConfig::default(),
    )?;
    let mut player_i = RandomBlocks::new(ChaCha8Rng::seed_from_u64(1));
    let discrete = SampledLegal::new(ChaCha8Rng::seed_from_u64(2));
    let run = run_adapted(&ctx, &mut player_i, discrete, 4, &open)?;
    for r in &run.rounds {
        println!(
            "round {}: k0 = {}, max |lambda| = {} <= {}, error {} <= {}",
            r.round, r.k0, r.lambda_max, r.lambda_bound, r.pick_error, r.pick_bound
        );
    }
    println!(
        "discrete outcome: {}",
        serde_json::to_string(&run.discrete_outcome)?
    );
    Ok(())
}
