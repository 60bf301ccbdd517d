//! Parse a `.mllps` file, validate it and print it back.
//!
//!     cargo run --example parse_structure -- data/cyclic.mllps

use relcheck::mll::parse_proof_structure;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/tensor_par_cut.mllps").into());
    let text = std::fs::read_to_string(&path).expect("readable structure file");
    let ps = match parse_proof_structure(&text) {
        Ok(ps) => ps,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    println!("{} ports, {} cells, size {}", ps.ports().len(), ps.cells().len(), ps.size());
    for &c in ps.conclusions() {
        println!("  conclusion {} : {}", ps.port(c).name, ps.formula(c));
    }
    print!("{ps}");
}
