//! Routing instances to the first solver within its caps.

use gstp::instance::families::{complete, path, wall};
use gstp::instance::from_stp;
use gstp::twdp::{stp_dispatch, DispatchConfig};

fn main() {
    let mut cfg = DispatchConfig::default();
    for (name, inst) in [
        ("K4 d2", from_stp(complete(4), vec![0, 1, 2, 3], 2).unwrap()),
        ("P4 d6", from_stp(path(4), vec![0, 3], 6).unwrap()),
        ("wall(6)", from_stp(wall(6), (0..12).collect(), 1).unwrap()),
    ] {
        println!("{name}: {:?}", stp_dispatch(&inst, &cfg));
    }
    cfg.apply("order oracle\noracle.edge_budget 8\n").unwrap();
    let inst = from_stp(complete(5), vec![0, 4], 3).unwrap();
    println!("K5 with a small oracle budget: {:?}", stp_dispatch(&inst, &cfg));
}
