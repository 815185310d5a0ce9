//! Exact normal forms for weakly dissipative, nearly integrable systems, with
//! quantitative parameter bounds, stability estimates and numerical checks.

pub mod arith;
pub mod bounds;
pub mod dynamics;
pub mod problem;
pub mod series;
pub mod transform;

pub use arith::RatFn;
pub use bounds::{
    check_conditions, check_conditions_at, make_tables, stability_constants, BoundsError, ConditionReport, DomainParams,
    StabilityMode, StabilityReport, StabilityTable,
};
pub use dynamics::{DynamicsError, State, Trajectory};
pub use problem::{Problem, ProblemError, RunParams};
pub use series::{Mode, Names, Series};
pub use transform::{build_normal_form, build_normal_form_with, NormalFormResult, TransformError, VectorFieldSpec};
