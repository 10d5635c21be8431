//! Tree-cut decompositions: adhesions, torsos, centers and widths.

use gstp::instance::families::cycle;
use gstp::treecut::families::three_paths_decomposition;
use gstp::treecut::{adhesions, slim_width, three_center, torso, two_center, width, TreeCutDecomposition};

fn main() {
    // A cycle split into three bags on a path-shaped tree.
    let g = cycle(6);
    let tcd = TreeCutDecomposition::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]], vec![None, Some(0), Some(1)], 0);
    tcd.validate(&g).unwrap();
    println!("adhesions {:?}", adhesions(&tcd, &g));
    let t = torso(&tcd, &g, 1);
    println!("torso at 1: n {} m {}", t.graph.n(), t.graph.edge_count());
    println!("3-center {} 2-center {}", three_center(&t).size(), two_center(&t).size());
    println!("width {} slim width {}", width(&tcd, &g), slim_width(&tcd, &g));

    for i in 1..=3 {
        let m = 4 * i * i * i * i;
        let (_, aug, tcd) = three_paths_decomposition(m);
        println!("three paths m={m}: width {} slim width {}", width(&tcd, &aug.graph), slim_width(&tcd, &aug.graph));
    }
}
