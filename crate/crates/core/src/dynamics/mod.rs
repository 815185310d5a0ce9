//! Numerical checks: RK4 integration of the original field, the normal form
//! flow mapped back to original variables, error and drift metrics.

mod compare;
mod energy;
mod integrate;
mod system;

pub use compare::{error_curves, ErrorCurves};
pub use energy::{crossing_period, energy_track, linear_fit, EnergyModel, EnergyTrack};
pub use integrate::{rk4, FnField, OdeField};
pub use system::{back_transform, forward_transform, nf_flow, AnalyticSolution, NumericSystem, POLE_GUARD};

use serde::Serialize;
use thiserror::Error;

/// Default number of steps between stored samples.
pub const DEFAULT_STRIDE: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("step size {0} must be positive and finite")]
    BadStep(f64),
    #[error("state has {got} actions, the system has {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("coefficient pole reached at t = {t}: |Q(y)| = {value:e} at y = {y:?}")]
    PoleEncountered { t: f64, y: Vec<f64>, value: f64 },
    #[error("state became non-finite at t = {0}")]
    NonFinite(f64),
    #[error("inverse change of variables did not converge")]
    NoConvergence,
    #[error("d h0 / d y_{0} differs from the frequency")]
    EnergyMismatch(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct State {
    pub t: f64,
    pub y: Vec<f64>,
    /// Unwrapped angles.
    pub x: Vec<f64>,
}

impl State {
    pub fn new(t: f64, y: Vec<f64>, x: Vec<f64>) -> State {
        State { t, y, x }
    }

    fn from_flat(t: f64, z: &[f64]) -> State {
        let d = z.len() / 2;
        State { t, y: z[..d].to_vec(), x: z[d..].to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<State>,
}

impl Trajectory {
    pub fn new(s0: State) -> Trajectory {
        Trajectory { samples: vec![s0] }
    }

    pub fn push(&mut self, s: State) {
        self.samples.push(s);
    }

    pub fn first(&self) -> &State {
        &self.samples[0]
    }

    pub fn last(&self) -> &State {
        self.samples.last().expect("trajectory is never empty")
    }
}

/// Relative error between a numerical and an analytical state:
/// `|z_num - z_ana| / (2 sqrt(|z_num|^2 + |z_ana|^2))`, zero when both vanish.
pub fn err(num: &State, ana: &State) -> f64 {
    let mut diff = 0.0;
    let mut size = 0.0;
    for (a, b) in num.x.iter().zip(&ana.x).chain(num.y.iter().zip(&ana.y)) {
        diff += (a - b) * (a - b);
        size += a * a + b * b;
    }
    if size == 0.0 {
        return 0.0;
    }
    0.5 * diff.sqrt() / size.sqrt()
}

/// Largest `|y(t) - y(0)|` over the samples.
pub fn drift_measure(traj: &Trajectory) -> f64 {
    let y0 = &traj.first().y;
    traj.samples
        .iter()
        .map(|s| s.y.iter().zip(y0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}
