use blockgame::game::{solve_bounded, FamilySpec};
use blockgame::scalar::ratio;
use blockgame::{BlockVector, FiniteBlockSequence, NetConfig};

fn main() -> blockgame::Result<()> {
    let cfg = NetConfig::default();
    let board = FiniteBlockSequence::standard_basis(4);
    let menu: Vec<_> = [1, 3]
        .iter()
        .map(|&i| FiniteBlockSequence::new(vec![BlockVector::basis(i)]))
        .collect::<blockgame::Result<_>>()?;
    let families = [
        FamilySpec::PositiveLeading { length: 2 },
        FamilySpec::LeadingAtLeast {
            length: 1,
            bound: ratio(3, 4),
        },
        FamilySpec::Constant { value: false },
    ];
    for family in &families {
        let out = solve_bounded(
            &board,
            &FiniteBlockSequence::empty(),
            2,
            &menu,
            family,
            &cfg,
        )?;
        let size = out.strategy.as_ref().map_or(0, |s| s.len());
        println!(
            "{family:?}: accepts = {}, {} positions, strategy of {size} replies",
            out.accepts, out.positions
        );
    }
    Ok(())
}
