use super::{DynamicsError, State, Trajectory};

/// Right-hand side of `z' = v(t, z)` on a flat state `z = (y.., x..)`.
pub trait OdeField {
    /// Number of actions; the state has twice as many components.
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, z: &[f64], out: &mut [f64]) -> Result<(), DynamicsError>;
}

/// Plain closure field, handy for tests.
pub struct FnField<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, z: &[f64], out: &mut [f64]) -> Result<(), DynamicsError> {
        (self.f)(t, z, out);
        Ok(())
    }
}

/// Classical fixed-step RK4 from `s0.t` to `t_end`, sampling every `stride` steps
/// and at the final time. The increments are accumulated with compensated summation.
pub fn rk4<F: OdeField + ?Sized>(
    field: &F,
    s0: &State,
    dt: f64,
    t_end: f64,
    stride: usize,
) -> Result<Trajectory, DynamicsError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DynamicsError::BadStep(dt));
    }
    let dim = field.dim();
    if s0.y.len() != dim || s0.x.len() != dim {
        return Err(DynamicsError::Dimension { expected: dim, got: s0.y.len() });
    }
    let stride = stride.max(1);
    let span = t_end - s0.t;
    let mut traj = Trajectory::new(s0.clone());
    if span <= 0.0 {
        return Ok(traj);
    }
    let full = (span / dt).floor() as usize;
    let rest = span - full as f64 * dt;
    let last = if rest > 1e-9 * dt { Some(rest) } else { None };
    let n = 2 * dim;
    let mut z: Vec<f64> = s0.y.iter().chain(s0.x.iter()).copied().collect();
    let mut comp = vec![0.0; n];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut step = |t: f64, h: f64, z: &mut [f64], comp: &mut [f64]| -> Result<(), DynamicsError> {
        field.eval(t, z, &mut k1)?;
        for i in 0..n {
            tmp[i] = z[i] + 0.5 * h * k1[i];
        }
        field.eval(t + 0.5 * h, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = z[i] + 0.5 * h * k2[i];
        }
        field.eval(t + 0.5 * h, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = z[i] + h * k3[i];
        }
        field.eval(t + h, &tmp, &mut k4)?;
        for i in 0..n {
            let inc = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) - comp[i];
            let next = z[i] + inc;
            comp[i] = (next - z[i]) - inc;
            z[i] = next;
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite(t + h));
        }
        Ok(())
    };
    for i in 0..full {
        let t = s0.t + i as f64 * dt;
        step(t, dt, &mut z, &mut comp)?;
        if (i + 1) % stride == 0 || (i + 1 == full && last.is_none()) {
            traj.push(State::from_flat(s0.t + (i + 1) as f64 * dt, &z));
        }
    }
    if let Some(h) = last {
        step(s0.t + full as f64 * dt, h, &mut z, &mut comp)?;
        traj.push(State::from_flat(t_end, &z));
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay() -> FnField<impl Fn(f64, &[f64], &mut [f64])> {
        // y' = -y, x' = 1
        FnField {
            dim: 1,
            f: |_t: f64, z: &[f64], o: &mut [f64]| {
                o[0] = -z[0];
                o[1] = 1.0;
            },
        }
    }

    #[test]
    fn exponential_decay_oracle() {
        let s0 = State::new(0.0, vec![1.0], vec![0.0]);
        let tr = rk4(&decay(), &s0, 1e-2, 5.0, 10).unwrap();
        let end = tr.last();
        assert!((end.t - 5.0).abs() < 1e-12);
        assert!((end.y[0] - (-5f64).exp()).abs() < 1e-9);
        assert!((end.x[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn halving_the_step_gains_sixteen() {
        let s0 = State::new(0.0, vec![1.0], vec![0.0]);
        let err = |h: f64| (rk4(&decay(), &s0, h, 2.0, 1000).unwrap().last().y[0] - (-2f64).exp()).abs();
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 0.2 * 16.0, "ratio {ratio}");
    }

    #[test]
    fn partial_last_step_lands_on_end_time() {
        let s0 = State::new(0.0, vec![1.0], vec![0.0]);
        let tr = rk4(&decay(), &s0, 0.3, 1.0, 1).unwrap();
        let ts: Vec<f64> = tr.samples.iter().map(|s| s.t).collect();
        assert_eq!(ts.len(), 5);
        assert_eq!(*ts.last().unwrap(), 1.0);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_span_gives_initial_state_only() {
        let s0 = State::new(0.0, vec![1.0], vec![0.0]);
        assert_eq!(rk4(&decay(), &s0, 0.1, 0.0, 1).unwrap().samples.len(), 1);
    }
}
