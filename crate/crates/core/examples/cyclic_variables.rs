//! An axiom reachable only through a cut: its value never reaches the
//! conclusions, so the machine carries it as a variable.
//!
//!     cargo run --example cyclic_variables

use relcheck::mll::parse_proof_structure;
use relcheck::relsem::{oracle_check, parse_point};
use relcheck::riam::normal_run;

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/cyclic.mllps")).unwrap();
    let ps = parse_proof_structure(&text).unwrap();
    for point in ["a, a", "a, b"] {
        let x = parse_point(point).unwrap();
        let run = normal_run(&ps, &x).unwrap();
        println!("-- {point} (oracle: {})", oracle_check(&ps, &x).unwrap());
        print!("{}", run.render(&ps));
    }
}
