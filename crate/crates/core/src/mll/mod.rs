//! MLL formulas and proof-structures.

mod formula;
mod parse;
mod structure;

pub use formula::Formula;
pub use parse::{parse_formula, parse_proof_structure, ParseError, StructureError};
pub(crate) use parse::is_ident_char;
pub use structure::{
    check_invariants, BuildError, Cell, CellId, CellKind, Port, PortId, ProofStructure,
    StructureBuilder, Violation,
};

/// Linear negation of `a`.
pub fn dual(a: &Formula) -> Formula {
    a.dual()
}
