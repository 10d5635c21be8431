//! `(k, d)`-fracture deletion and minimum fracture modulators.

use gstp::fracture::{fracture_deletion, fracture_modulator, FractureQuery};
use gstp::instance::families::{path, windmill};

fn main() {
    let p5 = path(5);
    println!("P5, k=1 d=1: {:?}", fracture_deletion(&p5, FractureQuery { k: 1, d: 1 }));
    let two = p5.disjoint_union(&p5);
    println!("2 x P5, k=2 d=2: {:?}", fracture_deletion(&two, FractureQuery { k: 2, d: 2 }));
    for i in 2..=4 {
        let (s, k) = fracture_modulator(&windmill(i));
        println!("windmill({i}): fracture number {k}, modulator {s:?}");
    }
}
