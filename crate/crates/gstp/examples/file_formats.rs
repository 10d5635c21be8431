//! Instance, solution and decomposition files.

use gstp::instance::families::complete;
use gstp::instance::{from_stp, verify};
use gstp::io::{
    load_decomposition, parse_instance, parse_solution, write_decomposition, write_instance, write_solution,
    Decomposition,
};
use gstp::oracle::{solve_exact, OracleConfig, OracleResult};
use gstp::twdp::tree_decomposition;

fn main() {
    let inst = from_stp(complete(4), vec![0, 1, 2, 3], 2).unwrap();
    let text = write_instance(&inst);
    print!("{text}");
    assert_eq!(parse_instance(&text).unwrap(), inst);

    if let OracleResult::Feasible(sol) = solve_exact(&inst, &OracleConfig::default()) {
        let text = write_solution(&sol);
        print!("{text}");
        println!("reparsed verifies: {:?}", verify(&inst, &parse_solution(&text).unwrap()));
    }

    let td = Decomposition::Tree(tree_decomposition(inst.graph(), 20));
    let text = write_decomposition(&td);
    print!("{text}");
    assert_eq!(load_decomposition(&text, inst.graph()).unwrap(), td);

    match parse_instance("p gstp 3 1 0\ne 0 7\n") {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
}
