//! Exhaustive search on a small STP instance, then an independent check of
//! the packing it returns.
//!
//! ```bash
//! cargo run --example oracle_solve
//! ```

use gstp::instance::families::complete;
use gstp::instance::{from_stp, verify};
use gstp::oracle::{solve_exact, OracleConfig, OracleResult};

fn main() {
    // Two edge-disjoint spanning trees of K4.
    let inst = from_stp(complete(4), vec![0, 1, 2, 3], 2).unwrap();
    match solve_exact(&inst, &OracleConfig::default()) {
        OracleResult::Feasible(sol) => {
            for p in &sol.parts {
                println!("set {} uses {:?}", p.terminal, p.edges);
            }
            println!("verify: {:?}", verify(&inst, &sol));
        }
        other => println!("{other:?}"),
    }

    // Three spanning trees need 9 edges; K4 has 6.
    let inst = from_stp(complete(4), vec![0, 1, 2, 3], 3).unwrap();
    println!("d = 3: {:?}", solve_exact(&inst, &OracleConfig::default()).decision());
}
