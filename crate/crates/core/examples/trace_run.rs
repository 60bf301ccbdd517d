//! Print the event trace of a run, and replay it step by step.

use relcheck::mll::parse_proof_structure;
use relcheck::relsem::parse_point;
use relcheck::riam::{initial_config, normal_run, replay};

fn main() {
    let ps = parse_proof_structure(
        "port 1 : A^\nport 2 : A\nport 3 : A * B\nport 4 : B\nport 5 : B^\n\
         cell ax12 : ax(1, 2)\ncell ax45 : ax(4, 5)\ncell tensor : tensor(2, 4 ; 3)\n\
         conclusions: 1, 3, 5\n",
    )
    .unwrap();
    let x = parse_point("a, (a,b), b").unwrap();
    let run = normal_run(&ps, &x).unwrap();
    print!("{}", run.render(&ps));

    println!("\nstart: {}", initial_config(&ps, &x).unwrap().display(&ps));
    for i in 0..run.trace.len() {
        let c = replay(&ps, &x, &run.trace[..=i]).unwrap();
        println!("after {:>2}: {}", i + 1, c.display(&ps));
    }
}
