//! Deciding an instance through a nice fracture modulator of its
//! vertex-augmented graph and an ILP over component configurations.

use gstp::fnilp::{choose_nice_modulator, decide_by_fracture, FnConfig};
use gstp::instance::families::star_with_spoke_terminals;
use gstp::instance::GstpInstance;
use gstp::oracle::decide;
use gstp::Graph;

fn main() {
    let inst = star_with_spoke_terminals(4);
    let nice = choose_nice_modulator(&inst, &FnConfig::default()).unwrap();
    println!("nice modulator {:?}", nice.modulator);
    let r = decide_by_fracture(&inst).unwrap();
    println!("star: feasible {} ({} classes, {} variables)", r.feasible, r.classes, r.variables);

    // Two triangles joined at vertex 0; a pair in each needs two disjoint routes.
    let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]);
    let inst = GstpInstance::new(g, vec![vec![1, 2], vec![3, 4]], vec![2, 1]).unwrap();
    let r = decide_by_fracture(&inst).unwrap();
    println!("bowtie: fnilp {} oracle {}", r.feasible, decide(&inst));
}
