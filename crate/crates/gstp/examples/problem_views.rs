//! EDP and STP as special cases of GSTP.

use gstp::instance::families::{cycle, wall};
use gstp::instance::{from_edp, from_stp};
use gstp::oracle::decide;

fn main() {
    // On a cycle, two crossing pairs cannot be routed disjointly.
    let c4 = cycle(4);
    let crossing = from_edp(c4.clone(), &[(0, 2), (1, 3)]).unwrap();
    let nested = from_edp(c4, &[(0, 1), (2, 3)]).unwrap();
    println!("C4 crossing pairs: {}", decide(&crossing));
    println!("C4 nested pairs:   {}", decide(&nested));

    // Equal pairs merge into one set with summed demand.
    let twice = from_edp(cycle(5), &[(0, 2), (2, 0)]).unwrap();
    println!("sets {:?} demands {:?}", twice.terminals(), twice.demands());

    let h = wall(2);
    let stp = from_stp(h, vec![0, 3, 4, 7], 1).unwrap();
    println!("wall corners in one tree: {}", decide(&stp));
}
