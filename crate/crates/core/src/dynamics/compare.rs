use super::{err, rk4, AnalyticSolution, DynamicsError, NumericSystem, State, Trajectory};
use crate::transform::{NormalFormResult, VectorFieldSpec};
use rayon::prelude::*;

/// One numerical trajectory and the relative error of each order's analytic solution along it.
#[derive(Clone, Debug)]
pub struct ErrorCurves {
    pub orders: Vec<u32>,
    pub trajectory: Trajectory,
    /// `err[i][o]` at sample `i` for `orders[o]`.
    pub err: Vec<Vec<f64>>,
}

impl ErrorCurves {
    /// Whether the errors decrease strictly with the order at every sample with `t > t0`.
    pub fn strictly_ordered(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.orders.len()).collect();
        idx.sort_by_key(|&o| self.orders[o]);
        let t0 = self.trajectory.first().t;
        self.trajectory
            .samples
            .iter()
            .zip(&self.err)
            .filter(|(s, _)| s.t > t0)
            .all(|(_, e)| idx.windows(2).all(|w| e[w[1]] < e[w[0]]))
    }
}

/// Integrate the original field from `s0` and compare with every normal form in `nfs`.
///
/// The drift in the integrated field is that of the highest order.
pub fn error_curves(
    spec: &VectorFieldSpec,
    nfs: &[NormalFormResult],
    s0: &State,
    eps: f64,
    mu: f64,
    dt: f64,
    t_end: f64,
    stride: usize,
) -> Result<ErrorCurves, DynamicsError> {
    let top = nfs.iter().max_by_key(|nf| nf.order);
    let eta = top.map(|nf| nf.drift_in_original()).unwrap_or_default();
    let sys = NumericSystem::new(spec, &eta, eps, mu)?;
    let trajectory = rk4(&sys, s0, dt, t_end, stride)?;
    let sols = nfs.iter().map(|nf| AnalyticSolution::through(nf, s0, eps, mu)).collect::<Result<Vec<_>, _>>()?;
    let err = trajectory.samples.par_iter().map(|s| sols.iter().map(|a| err(s, &a.original(s.t))).collect()).collect();
    Ok(ErrorCurves { orders: nfs.iter().map(|nf| nf.order).collect(), trajectory, err })
}
