//! Evaluate closed boolean terms through their interpretation, without
//! reducing them.

use relcheck::lambda::{boolean_eval, is_normal, parse_term, BoolValue};

fn main() {
    let not = r"\b:o -> o -> o. \x:o. \y:o. b y x";
    let and = r"\p:o -> o -> o. \q:o -> o -> o. \x:o. \y:o. p (q x y) y";
    let t = r"\x:o. \y:o. x";
    let f = r"\x:o. \y:o. y";
    let terms = [
        t.to_string(),
        f.to_string(),
        format!("({not}) ({t})"),
        format!("({not}) (({not}) ({t}))"),
        format!("({and}) ({t}) (({not}) ({f}))"),
        format!("({and}) ({t}) ({f})"),
    ];
    for src in &terms {
        let m = parse_term(src).unwrap();
        let v = match boolean_eval(&m).unwrap() {
            BoolValue::IsTrue => "true",
            BoolValue::IsFalse => "false",
        };
        println!("{v:>5}  {}{src}", if is_normal(&m) { "" } else { "(redex) " });
    }
}
