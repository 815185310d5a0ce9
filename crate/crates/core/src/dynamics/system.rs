use super::{DynamicsError, OdeField, State};
use crate::arith::factor::{self, FactorId};
use crate::series::{CompiledField, CompiledSeries, FrozenSeries, Series};
use crate::transform::{NormalFormResult, VectorFieldSpec};
use num_complex::Complex64;
use std::collections::BTreeSet;

/// Smallest admissible `|Q(y)|` for a coefficient denominator factor `Q`.
pub const POLE_GUARD: f64 = 1e-8;

fn denominator_factors<'a>(series: impl IntoIterator<Item = &'a Series>) -> Vec<FactorId> {
    let mut ids = BTreeSet::new();
    for s in series {
        for (_, c) in s.iter() {
            ids.extend(c.factors().iter().map(|(id, _)| *id));
        }
    }
    ids.into_iter().collect()
}

fn guard(ids: &[FactorId], y: &[f64], t: f64) -> Result<(), DynamicsError> {
    if ids.is_empty() {
        return Ok(());
    }
    let yc: Vec<Complex64> = y.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    for id in ids {
        let q = factor::eval(*id, &yc).norm();
        let scale = factor::poly(*id).terms().iter().map(|(_, c)| c.to_c64().norm()).fold(1.0, f64::max);
        if q < POLE_GUARD * scale {
            return Err(DynamicsError::PoleEncountered { t, y: y.to_vec(), value: q });
        }
    }
    Ok(())
}

/// The original field with `eps`, `mu` substituted and the drift included.
pub struct NumericSystem {
    dim: usize,
    field: CompiledField,
    poles: Vec<FactorId>,
}

impl NumericSystem {
    /// `eta` holds the drift as graded series in the original action (empty for none).
    pub fn new(spec: &VectorFieldSpec, eta: &[Series], eps: f64, mu: f64) -> Result<NumericSystem, DynamicsError> {
        let dim = spec.dim();
        if !eta.is_empty() && eta.len() != dim {
            return Err(DynamicsError::Dimension { expected: dim, got: eta.len() });
        }
        let mut comps = spec.field();
        for (v, e) in eta.iter().enumerate() {
            comps[v] = comps[v].add(&e.shift_grade(0, 1).scale_int(spec.drift_sign()));
        }
        let poles = denominator_factors(comps.iter());
        Ok(NumericSystem { dim, field: CompiledField::new(&comps, eps, mu), poles })
    }
}

impl OdeField for NumericSystem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, z: &[f64], out: &mut [f64]) -> Result<(), DynamicsError> {
        let (y, x) = z.split_at(self.dim);
        guard(&self.poles, y, t)?;
        self.field.eval(y, x, t, out);
        Ok(())
    }
}

/// Linear flow of the normal form from `(Y0, X0)`.
pub fn nf_flow(nf: &NormalFormResult, y0: &[f64], x0: &[f64], t: f64, eps: f64, mu: f64) -> Result<State, DynamicsError> {
    guard(&denominator_factors(nf.omega_d.iter()), y0, 0.0)?;
    let w = nf.nf_frequency(y0, eps, mu);
    Ok(State::new(t, y0.to_vec(), x0.iter().zip(&w).map(|(x, w)| x + w * t).collect()))
}

/// Original variables of a normal form state.
pub fn back_transform(nf: &NormalFormResult, s: &State, eps: f64, mu: f64) -> Result<State, DynamicsError> {
    guard(&denominator_factors(nf.phi_y.iter().chain(nf.phi_x.iter())), &s.y, s.t)?;
    let ev = |f: &Series| CompiledSeries::new(f, eps, mu).eval(&s.y, &s.x, s.t);
    Ok(State::new(
        s.t,
        s.y.iter().zip(&nf.phi_y).map(|(v, f)| v + ev(f)).collect(),
        s.x.iter().zip(&nf.phi_x).map(|(v, f)| v + ev(f)).collect(),
    ))
}

/// Normal form variables of an original state, by fixed-point inversion of [`back_transform`].
pub fn forward_transform(nf: &NormalFormResult, s: &State, eps: f64, mu: f64) -> Result<State, DynamicsError> {
    guard(&denominator_factors(nf.phi_y.iter().chain(nf.phi_x.iter())), &s.y, s.t)?;
    let py: Vec<CompiledSeries> = nf.phi_y.iter().map(|f| CompiledSeries::new(f, eps, mu)).collect();
    let px: Vec<CompiledSeries> = nf.phi_x.iter().map(|f| CompiledSeries::new(f, eps, mu)).collect();
    let (mut y, mut x) = (s.y.clone(), s.x.clone());
    for _ in 0..200 {
        let ny: Vec<f64> = s.y.iter().zip(&py).map(|(v, f)| v - f.eval(&y, &x, s.t)).collect();
        let nx: Vec<f64> = s.x.iter().zip(&px).map(|(v, f)| v - f.eval(&y, &x, s.t)).collect();
        let change = ny.iter().zip(&y).chain(nx.iter().zip(&x)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        y = ny;
        x = nx;
        if change <= 1e-15 * (1.0 + y.iter().chain(&x).map(|v| v.abs()).fold(0.0, f64::max)) {
            return Ok(State::new(s.t, y, x));
        }
    }
    Err(DynamicsError::NoConvergence)
}

/// Back-transformed normal form solution, with the change of variables frozen at `Y0`.
pub struct AnalyticSolution {
    pub y0: Vec<f64>,
    pub x0: Vec<f64>,
    pub frequency: Vec<f64>,
    phi_y: Vec<FrozenSeries>,
    phi_x: Vec<FrozenSeries>,
}

impl AnalyticSolution {
    pub fn new(nf: &NormalFormResult, y0: &[f64], x0: &[f64], eps: f64, mu: f64) -> Result<AnalyticSolution, DynamicsError> {
        guard(&denominator_factors(nf.phi_y.iter().chain(nf.phi_x.iter()).chain(nf.omega_d.iter())), y0, 0.0)?;
        let freeze = |f: &Series| CompiledSeries::new(f, eps, mu).freeze(y0);
        Ok(AnalyticSolution {
            y0: y0.to_vec(),
            x0: x0.to_vec(),
            frequency: nf.nf_frequency(y0, eps, mu),
            phi_y: nf.phi_y.iter().map(freeze).collect(),
            phi_x: nf.phi_x.iter().map(freeze).collect(),
        })
    }

    /// Starting from the original state `s0` at `t = s0.t`.
    pub fn through(nf: &NormalFormResult, s0: &State, eps: f64, mu: f64) -> Result<AnalyticSolution, DynamicsError> {
        let n0 = forward_transform(nf, s0, eps, mu)?;
        let x_at_zero: Vec<f64> = {
            let w = nf.nf_frequency(&n0.y, eps, mu);
            n0.x.iter().zip(&w).map(|(x, w)| x - w * s0.t).collect()
        };
        AnalyticSolution::new(nf, &n0.y, &x_at_zero, eps, mu)
    }

    pub fn normal(&self, t: f64) -> State {
        State::new(t, self.y0.clone(), self.x0.iter().zip(&self.frequency).map(|(x, w)| x + w * t).collect())
    }

    pub fn original(&self, t: f64) -> State {
        let n = self.normal(t);
        let y = n.y.iter().zip(&self.phi_y).map(|(v, f)| v + f.eval(&n.x, t)).collect();
        let x = n.x.iter().zip(&self.phi_x).map(|(v, f)| v + f.eval(&n.x, t)).collect();
        State::new(t, y, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{parse_series, Names};

    fn damped() -> VectorFieldSpec {
        let n = Names::default_for(1);
        let s = |src: &str| parse_series(src, &n).unwrap();
        VectorFieldSpec::new(vec![crate::RatFn::var(0)], s("-cos(x)"), vec![s("0")], vec![s("-y")]).unwrap()
    }

    #[test]
    fn numeric_field_matches_closed_form() {
        let (eps, mu) = (1e-2, 3e-2);
        let eta = vec![parse_series("2*y", &Names::default_for(1)).unwrap()];
        let sys = NumericSystem::new(&damped(), &eta, eps, mu).unwrap();
        let (y, x) = (1.3, 0.4);
        let mut out = [0.0; 2];
        sys.eval(0.0, &[y, x], &mut out).unwrap();
        assert!((out[0] - (-eps * x.sin() + mu * (-y - 2.0 * y))).abs() < 1e-15);
        assert!((out[1] - y).abs() < 1e-15);
    }

    #[test]
    fn drift_length_must_match() {
        let eta = vec![Series::zero(1), Series::zero(1)];
        assert!(matches!(NumericSystem::new(&damped(), &eta, 0.0, 0.0), Err(DynamicsError::Dimension { .. })));
    }
}
