//! Thin-node recursion rules with the oracle as sub-solver.

use gstp::instance::Reduced;
use gstp::oracle::{decide, solve_exact, OracleConfig};
use gstp::treecut::families::thin_node_instance;
use gstp::treecut::{apply_thin_reduction, reduce_thin_nodes};
use gstp::GstpInstance;

fn main() {
    let mut solve =
        |x: &GstpInstance| solve_exact(x, &OracleConfig::default()).decision().ok_or_else(|| "budget".to_string());
    for seed in 0..6 {
        let (inst, tcd, s) = thin_node_instance(seed);
        let before = decide(&inst);
        match apply_thin_reduction(&inst, &tcd, s, &mut solve).unwrap() {
            Reduced::Instance(r) => {
                println!(
                    "seed {seed}: {} n {} -> {}, decision {before} -> {}",
                    r.rule,
                    inst.graph().n(),
                    r.instance.graph().n(),
                    decide(&r.instance)
                );
            }
            Reduced::TriviallyNegative => println!("seed {seed}: negative, decision {before}"),
        }
    }
    let (inst, tcd, _) = thin_node_instance(42);
    if let Reduced::Instance((out, _, rules)) = reduce_thin_nodes(&inst, &tcd, &mut solve).unwrap() {
        println!("exhaustive: rules {rules:?}, n {} -> {}", inst.graph().n(), out.graph().n());
    }
}
