//! The relational interaction abstract machine.
//!
//! A configuration assigns each port a signed formal sum of points: `+a` is
//! an upward token carrying `a`, `-a` a downward one. Displacements move
//! tokens through cells, unifications annihilate opposite tokens that agree
//! up to variables. A point is accepted when the configuration built from it
//! can be emptied.

mod config;
mod machine;
mod series;

pub use config::{
    delta_instances, initial_config, step_displacement, step_unification, Configuration,
    Displacement, UnificationError,
};
pub use machine::{
    check, normal_run, normal_run_with, replay, Outcome, RejectReason, ReplayError, Run,
    RunOptions, TraceEvent,
};
pub use series::{series_add, Series, Sign};
