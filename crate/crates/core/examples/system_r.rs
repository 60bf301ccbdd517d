//! Build a System R derivation for a point of an open term and check the
//! resource bookkeeping: every use of a context variable is accounted for.

use relcheck::lambda::{derive_point, parse_rpoint, parse_term, parse_type, Multiset, SimpleType};

fn main() {
    // f : o -> o -> o used once, c : o used twice
    let m = parse_term("f c c").unwrap();
    let mut cs = Multiset::new();
    cs.insert(parse_rpoint("a").unwrap());
    cs.insert(parse_rpoint("*").unwrap());
    let mut fs = Multiset::new();
    fs.insert(parse_rpoint("[a] -> [*] -> a").unwrap());
    let ctx = vec![
        ("c".to_string(), SimpleType::Base, cs),
        ("f".to_string(), parse_type("o -> o -> o").unwrap(), fs),
    ];
    let alpha = parse_rpoint("a").unwrap();
    match derive_point(&ctx, &m, &SimpleType::Base, &alpha).unwrap() {
        Some(d) => {
            println!("derivation of {m} : {alpha}");
            println!("  variable uses: {}", d.context_size());
            println!("  head nodes:    {}", d.head_nodes());
            println!("  accounting:    {}", d.accounting_holds());
        }
        None => println!("{alpha} is not in the interpretation of {m}"),
    }
}
