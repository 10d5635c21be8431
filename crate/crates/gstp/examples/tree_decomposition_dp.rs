//! The treewidth plus total demand dynamic program, with table statistics
//! and a reconstructed witness.

use gstp::instance::families::wall;
use gstp::instance::{from_stp, verify, GstpInstance};
use gstp::twdp::{decide_tw, make_nice, tree_decomposition, treewidth, TwConfig};

fn main() {
    let g = wall(3);
    println!("wall(3): n = {}, treewidth = {}", g.n(), treewidth(&g));
    let td = tree_decomposition(&g, 20);
    let nice = make_nice(&td, &g).unwrap();
    println!("decomposition: {} nodes, nice form: {} nodes", td.len(), nice.len());

    let inst = from_stp(g.clone(), vec![0, 5, 12, 17], 1).unwrap();
    let cfg = TwConfig { witness: true, ..TwConfig::default() };
    let out = decide_tw(&inst, Some(&td), &cfg).unwrap();
    println!("feasible {} stats {:?}", out.feasible, out.stats);
    if let Some(sol) = &out.witness {
        println!("witness verifies: {:?}", verify(&inst, sol));
    }

    // Two sets on the same graph, total demand 3.
    let inst = GstpInstance::new(g, vec![vec![0, 17], vec![5, 12]], vec![1, 2]).unwrap();
    let out = decide_tw(&inst, None, &TwConfig::default()).unwrap();
    println!("two sets: feasible {} max table {}", out.feasible, out.stats.max_table);
}
