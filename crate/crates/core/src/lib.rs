//! Semantic type checking in the relational model of linear logic.
//!
//! * [`mll`]: formulas and proof-structures of multiplicative linear logic,
//!   with the `.mllps` text format.
//! * [`relsem`]: relational points (with atomic variables), unification,
//!   experiments and an exhaustive membership oracle.
//! * [`riam`]: a token machine deciding whether a point belongs to the
//!   relational interpretation of a proof-structure, in time linear in the
//!   structure.
//! * [`lambda`]: simply-typed λ-terms and their non-idempotent intersection
//!   type semantics (System R), including boolean evaluation.
//!
//! ```
//! use relcheck::{mll::parse_proof_structure, relsem::parse_point, riam::check};
//!
//! let ps = parse_proof_structure("
//!     port p : X
//!     port q : X^
//!     cell a : ax(p, q)
//!     conclusions: p, q
//! ").unwrap();
//! assert!(check(&ps, &parse_point("a, a").unwrap()).unwrap());
//! assert!(!check(&ps, &parse_point("a, b").unwrap()).unwrap());
//! ```

pub mod lambda;
pub mod mll;
pub mod relsem;
pub mod riam;
