//! Moves a tuple of block subsequences from W to a nearby V.

use blockgame::combinatorics::{block_mod_k_restriction, reconstruct_tuple, IndexSet};
use blockgame::scalar::ratio;
use blockgame::{BlockVector, FiniteBlockSequence, NormPlugin, ToleranceSequence};

fn main() -> blockgame::Result<()> {
    let norm = NormPlugin::ell1();
    let delta = ToleranceSequence::halving();
    let delta_prime = delta.scaled(&ratio(1, 4));
    // w_j = e_{2j}, v_j nudges the spare index 2j+1
    let w = FiniteBlockSequence::new((0..6).map(|j| BlockVector::basis(2 * j)).collect())?;
    let v = FiniteBlockSequence::new(
        (0..6)
            .map(|j| {
                BlockVector::from_pairs([(2 * j, ratio(1, 1)), (2 * j + 1, delta_prime.delta(j))])
            })
            .collect(),
    )?;
    let boards = block_mod_k_restriction(&w, &IndexSet::range(0, 6), 2)?;
    let w_tuple: Vec<FiniteBlockSequence> = boards
        .iter()
        .map(|b| {
            FiniteBlockSequence::new(vec![b
                .slice(0..2)
                .combine([(0, &ratio(1, 2)), (1, &ratio(-1, 2))])])
        })
        .collect::<blockgame::Result<_>>()?;
    let r = reconstruct_tuple(&v, &w, &w_tuple, &delta_prime, &delta, &norm)?;
    for e in &r.entries {
        println!(
            "v^{}_{}: error {} <= {} <= {}",
            e.coordinate, e.n, e.error, e.tail_bound, e.delta
        );
    }
    Ok(())
}
