//! The bounded integer feasibility solver behind the fracture pipeline.

use gstp::fnilp::{ilp_feasible, IlpModel, Relation};

fn main() {
    // x + y = 7, x - y >= 3, x <= 5 over 0..=10.
    let mut m = IlpModel::new();
    let x = m.add_var("x", 0, 10);
    let y = m.add_var("y", 0, 10);
    m.add_constraint(vec![(x, 1), (y, 1)], Relation::Eq, 7);
    m.add_constraint(vec![(x, 1), (y, -1)], Relation::Ge, 3);
    m.add_constraint(vec![(x, 1)], Relation::Le, 5);
    print!("{}", m.to_lp());
    println!("{:?}", ilp_feasible(&m));
    m.add_constraint(vec![(y, 2)], Relation::Eq, 5);
    println!("with 2y = 5: {:?}", ilp_feasible(&m));
}
