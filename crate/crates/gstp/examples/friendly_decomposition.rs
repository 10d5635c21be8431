//! A nice decomposition whose node has many bold children, made friendly by
//! blowing it up.

use gstp::treecut::families::unlimited_bold;
use gstp::treecut::{bold_children, fake_nodes, friendly_violations, is_friendly, make_friendly, width};

fn main() {
    for l in [3, 8, 20] {
        let f = unlimited_bold(l);
        let bold = bold_children(&f.tcd, &f.graph, f.hub).len();
        let fakes = fake_nodes(&f.tcd, &f.graph, f.hub).len();
        println!(
            "l={l}: width {} bold {bold} fake {fakes} violations {}",
            width(&f.tcd, &f.graph),
            friendly_violations(&f.tcd, &f.graph).len()
        );
        let out = make_friendly(&f.tcd, &f.graph).unwrap();
        println!(
            "  friendly {} width {} nodes {} -> {}",
            is_friendly(&out, &f.graph),
            width(&out, &f.graph),
            f.tcd.len(),
            out.len()
        );
    }
}
