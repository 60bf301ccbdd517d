//! Decide membership of a few points with the token machine.

use relcheck::mll::parse_proof_structure;
use relcheck::relsem::parse_point;
use relcheck::riam::check;

const STRUCTURE: &str = "
port a1 : A
port b1 : B
port a2 : A^
port b2 : B^
port tens : A * B
port par : A^ | B^
port ab : A * B
port ab_dual : A^ | B^
cell axA : ax(a1, a2)
cell axB : ax(b1, b2)
cell tensor : tensor(a1, b1 ; tens)
cell par : par(a2, b2 ; par)
cell cut : cut(par, ab)
cell axAB : ax(ab, ab_dual)
conclusions: tens, ab_dual
";

fn main() {
    let ps = parse_proof_structure(STRUCTURE).unwrap();
    for point in ["(a,b), (a,b)", "(a,b), (a,c)", "(b,a), (b,a)", "(a,a), (b,b)"] {
        let x = parse_point(point).unwrap();
        let verdict = if check(&ps, &x).unwrap() { "in" } else { "not in" };
        println!("{point:>14}  {verdict} the interpretation");
    }
}
