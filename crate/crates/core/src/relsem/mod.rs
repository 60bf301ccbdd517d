//! Relational points with variables, unification, experiments and the
//! brute-force membership oracle.

mod experiment;
mod fresh;
mod term;
mod unify;

pub use experiment::{
    check_point_shape, oracle_check, oracle_witness, result, verify_experiment, Experiment,
    PointError,
};
pub use fresh::{FreshNames, DEFAULT_FRESH_PREFIX};
pub use term::{format_point, parse_point, parse_term, web_member, RelTerm};
pub use unify::{apply_subst, mgu, Substitution, UnifyError};
