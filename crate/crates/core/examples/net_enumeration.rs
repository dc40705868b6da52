//! Lists the net elements supported in [0, n) and shows how fast the count
//! grows with n.

use blockgame::net::{count_net_below, enumerate_net_below, net_member};
use blockgame::NetConfig;

fn main() -> blockgame::Result<()> {
    let cfg = NetConfig::default();
    for x in enumerate_net_below(1, &cfg)? {
        assert!(net_member(&x, &cfg)?);
        println!("{x}");
    }
    for n in 1..=3 {
        println!("n = {n}: {} elements", count_net_below(n, &cfg)?);
    }
    Ok(())
}
