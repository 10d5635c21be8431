//! The instance-level and decomposition-aware reduction rules.

use gstp::instance::{rr_degree_negative, rr_sensible_terminals, GstpInstance, Reduced};
use gstp::oracle::decide;
use gstp::treecut::{apply_rr_adh1, apply_rr_components, apply_rr_crosslink, TreeCutDecomposition};
use gstp::Graph;

fn main() {
    // Singleton sets need no edges.
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
    let inst = GstpInstance::new(g.clone(), vec![vec![2], vec![0, 3]], vec![3, 1]).unwrap();
    println!("sensible terminals: {:?}", rr_sensible_terminals(&inst).terminals());

    // A leaf cannot meet demand 2.
    let inst = GstpInstance::new(g.clone(), vec![vec![0, 2]], vec![2]).unwrap();
    println!("degree: {:?}", matches!(rr_degree_negative(&inst), Reduced::TriviallyNegative));

    // Two components with one set each split into two instances.
    let two = Graph::from_edges(4, &[(0, 1), (2, 3)]);
    let inst = GstpInstance::new(two, vec![vec![0, 1], vec![2, 3]], vec![1, 1]).unwrap();
    if let Reduced::Instance(parts) = apply_rr_components(&inst) {
        println!("components: {} instances", parts.len());
    }

    // The bridge 1-2 carries at most one crossing tree.
    let tcd = TreeCutDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![None, Some(0)], 0);
    let inst = GstpInstance::new(g.clone(), vec![vec![0, 3]], vec![2]).unwrap();
    println!("crosslink rejects: {}", matches!(apply_rr_crosslink(&inst, &tcd), Reduced::TriviallyNegative));

    // Removing the bridge splits the crossing set at its endpoints.
    let inst = GstpInstance::new(g, vec![vec![0, 3]], vec![1]).unwrap();
    let (out, _) = apply_rr_adh1(&inst, &tcd, 1).unwrap();
    println!("adhesion 1: sets {:?}, decision {} -> {}", out.terminals(), decide(&inst), decide(&out));
}
