//! Vertex and clique augmentation of an instance.

use gstp::instance::families::three_paths;
use gstp::instance::{augment, AugmentMode};

fn main() {
    let inst = three_paths(2);
    let v = augment(&inst, AugmentMode::Vertex);
    println!("vertex mode: n {} m {} aug vertices {:?}", v.graph.n(), v.graph.edge_count(), v.aug_vertex_of);
    for a in &v.aug_vertex_of {
        println!("  aug {a} serves set {:?}", v.terminal_of(*a));
    }
    let c = augment(&inst, AugmentMode::Clique);
    println!("clique mode: n {} m {} multigraph {}", c.graph.n(), c.graph.edge_count(), c.graph.is_multigraph());
}
