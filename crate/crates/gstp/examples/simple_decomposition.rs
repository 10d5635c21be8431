//! Turning an almost-simple decomposition into a simple one.

use gstp::instance::families::cycle;
use gstp::instance::GstpInstance;
use gstp::oracle::decide;
use gstp::treecut::{is_simple, make_simple, simple_violations, width, TreeCutDecomposition};

fn main() {
    let inst = GstpInstance::new(cycle(6), vec![vec![0, 1]], vec![1]).unwrap();
    let tcd = TreeCutDecomposition::new(vec![vec![0, 1, 2, 5], vec![3, 4]], vec![None, Some(0)], 0);
    println!("before: {:?}", simple_violations(&inst, &tcd));
    let (out, simple, target) = make_simple(&inst, &tcd).unwrap();
    println!("after: simple {} width {} target {target}", is_simple(&out, &simple), width(&simple, out.graph()));
    println!("n {} -> {}, decision {} -> {}", inst.graph().n(), out.graph().n(), decide(&inst), decide(&out));
}
