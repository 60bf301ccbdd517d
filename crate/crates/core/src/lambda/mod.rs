//! Simply-typed λ-calculus with its relational semantics (System R).

mod point;
mod reduce;
mod syntax;
mod sysr;

pub use point::{parse_rpoint, Multiset, RPoint};
pub use reduce::{beta_step, is_normal, normalize, substitute, typecheck, TypeError};
pub use syntax::{parse_term, parse_type, LambdaTerm, SimpleType};
pub use sysr::{
    boolean_eval, check_judgment, check_point, derive_point, true_point, BoolValue, Derivation,
    RContext, Rule, SysRError,
};
