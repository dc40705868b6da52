use blockgame::combinatorics::{disjointify, in_circ_product, non_heredity_witness, IndexSet};

fn main() -> blockgame::Result<()> {
    let m = [IndexSet::new(vec![2, 10])?, IndexSet::new(vec![6, 14])?];
    let p = disjointify(&m, 2)?;
    println!("{}", serde_json::to_string(&p)?);

    if let Some((l_prime, tuple)) = non_heredity_witness(&p.l, 2)? {
        assert!(in_circ_product(&tuple, &l_prime, 2)? && !in_circ_product(&tuple, &p.l, 2)?);
        println!(
            "L' = {:?}: the tuple {:?} follows the classes of L' but not those of L",
            l_prime.as_slice(),
            tuple.iter().map(IndexSet::as_slice).collect::<Vec<_>>()
        );
    }
    Ok(())
}
