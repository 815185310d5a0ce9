//! Quantitative estimates: non-resonance constant, smallness conditions,
//! Fourier tail bounds and exponential stability constants.

mod conditions;
mod domain;
mod stability;

pub use conditions::{
    check_conditions, check_conditions_at, Condition, ConditionEntry, ConditionReport, Inequality, CAP_SEARCH_MAX,
    C_INV,
};
pub use domain::{modes_up_to, nonres_constant, DomainParams, NonresDomain, R2Policy};
pub use stability::{
    make_tables, make_tables_with, modes_for_tau, sig4, stability_constants, tail_bound, tau_for_modes, StabilityMode, StabilityReport,
    StabilityTable, TABLE_ROWS,
};

pub use crate::series::tail_constant;

use crate::series::NormError;
use crate::transform::TransformError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("exact resonance omega.k + m = {value:e} for k = {k:?}, m = {m}")]
    ResonantDomain { k: Vec<i64>, m: i64, value: f64 },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("invalid domain parameters: {0}")]
    Params(String),
    #[error("sigma = {sigma} must lie in (0, s0 = {s0})")]
    SigmaOutOfRange { sigma: f64, s0: f64 },
}
