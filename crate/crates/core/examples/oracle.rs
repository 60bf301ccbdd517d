//! Compare the token machine with exhaustive search over experiments, and
//! show an experiment witnessing a point.

use relcheck::mll::parse_proof_structure;
use relcheck::relsem::{oracle_witness, parse_point, verify_experiment};
use relcheck::riam::check;

fn main() {
    let ps = parse_proof_structure(
        "port p : X * Y\nport q : X^ | Y^\nport x : X\nport y : Y\nport xd : X^\nport yd : Y^\n\
         cell ax1 : ax(x, xd)\ncell ax2 : ax(y, yd)\ncell t : tensor(x, y ; p)\ncell r : par(xd, yd ; q)\n\
         conclusions: p, q\n",
    )
    .unwrap();
    for point in ["(a,b), (a,b)", "(a,b), (b,a)"] {
        let x = parse_point(point).unwrap();
        let machine = check(&ps, &x).unwrap();
        match oracle_witness(&ps, &x).unwrap() {
            Some(e) => {
                assert!(verify_experiment(&ps, &e));
                let labels: Vec<String> =
                    ps.port_ids().map(|p| format!("{}={}", ps.port(p).name, e.get(p))).collect();
                println!("{point}: machine {machine}, witnessed by {}", labels.join(" "));
            }
            None => println!("{point}: machine {machine}, no experiment"),
        }
    }
}
