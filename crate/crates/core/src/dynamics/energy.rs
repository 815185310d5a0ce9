use super::{DynamicsError, Trajectory};
use crate::series::{CompiledSeries, Series};
use crate::transform::VectorFieldSpec;
use serde::Serialize;

/// Conservative energy `H = h0(y) + eps h10` and its rate of change along the full field.
pub struct EnergyModel {
    h: CompiledSeries,
    /// `dH/dt` minus the explicit time derivative: the non-conservative part.
    rate: CompiledSeries,
    /// Explicit `dH/dt` at fixed `(y, x)`.
    h_t: CompiledSeries,
    dim: usize,
}

impl EnergyModel {
    /// `h0` must satisfy `d h0 / d y = omega`.
    pub fn new(spec: &VectorFieldSpec, h0: &Series, eta: &[Series], eps: f64, mu: f64) -> Result<EnergyModel, DynamicsError> {
        let dim = spec.dim();
        for v in 0..dim {
            let w = Series::from_ratfn(dim, spec.omega()[v].clone());
            if h0.dy(v) != w {
                return Err(DynamicsError::EnergyMismatch(v));
            }
        }
        let h = h0.add(&spec.hamiltonian_perturbation());
        let nmax = h.max_grade().unwrap_or(0) + 1 + eta.iter().filter_map(|e| e.max_grade()).max().unwrap_or(0);
        let mut parts = Vec::new();
        for v in 0..dim {
            let mut force = spec.g01()[v].clone();
            if let Some(e) = eta.get(v) {
                force = force.add(&e.scale_int(spec.drift_sign()));
            }
            parts.push(h.dy(v).mul(&force.shift_grade(0, 1), nmax));
            parts.push(h.dx(v).mul(&spec.f01()[v].shift_grade(0, 1), nmax));
        }
        let rate = Series::sum_all(dim, &parts.iter().collect::<Vec<_>>());
        Ok(EnergyModel {
            h: CompiledSeries::new(&h, eps, mu),
            rate: CompiledSeries::new(&rate, eps, mu),
            h_t: CompiledSeries::new(&h.dt(), eps, mu),
            dim,
        })
    }

    pub fn energy(&self, y: &[f64], x: &[f64], t: f64) -> f64 {
        self.h.eval(y, x, t)
    }

    /// Non-conservative rate, e.g. `mu y^2 sin x - mu y eta`.
    pub fn rate(&self, y: &[f64], x: &[f64], t: f64) -> f64 {
        self.rate.eval(y, x, t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyTrack {
    pub energy: Vec<f64>,
    /// `H + T` with `T' = -dH/dt|_explicit` accumulated by the trapezoid rule,
    /// the energy of the extended phase space.
    pub extended: Vec<f64>,
    pub mean: f64,
    /// Largest `|finite difference - formula|` over the largest `|formula|`, on evenly spaced triples.
    pub rate_rel_err: Option<f64>,
    pub period: Option<f64>,
    pub extended_period: Option<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
}

/// Mean spacing of upward zero crossings of `v - mean(v)`.
pub fn crossing_period(t: &[f64], v: &[f64]) -> Option<f64> {
    if v.len() < 3 {
        return None;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let mut ups = Vec::new();
    for i in 1..v.len() {
        let (a, b) = (v[i - 1] - mean, v[i] - mean);
        if a < 0.0 && b >= 0.0 {
            ups.push(t[i - 1] + (t[i] - t[i - 1]) * (-a) / (b - a));
        }
    }
    if ups.len() < 2 {
        return None;
    }
    Some((ups[ups.len() - 1] - ups[0]) / (ups.len() - 1) as f64)
}

/// Least-squares slope and its standard error.
pub fn linear_fit(t: &[f64], v: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    if t.len() < 3 {
        return (0.0, f64::INFINITY);
    }
    let (mt, mv) = (t.iter().sum::<f64>() / n, v.iter().sum::<f64>() / n);
    let (mut stt, mut stv) = (0.0, 0.0);
    for (a, b) in t.iter().zip(v) {
        stt += (a - mt) * (a - mt);
        stv += (a - mt) * (b - mv);
    }
    let slope = stv / stt;
    let rss: f64 = t.iter().zip(v).map(|(a, b)| (b - mv - slope * (a - mt)).powi(2)).sum();
    (slope, (rss / (n - 2.0) / stt).sqrt())
}

pub fn energy_track(model: &EnergyModel, traj: &Trajectory) -> EnergyTrack {
    let t: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let energy: Vec<f64> = traj.samples.iter().map(|s| model.energy(&s.y, &s.x, s.t)).collect();
    let h_t: Vec<f64> = traj.samples.iter().map(|s| model.h_t.eval(&s.y, &s.x, s.t)).collect();
    let mut extended = Vec::with_capacity(energy.len());
    let mut gauge = 0.0;
    for i in 0..energy.len() {
        if i > 0 {
            gauge -= 0.5 * (h_t[i] + h_t[i - 1]) * (t[i] - t[i - 1]);
        }
        extended.push(energy[i] + gauge);
    }
    let mean = if energy.is_empty() { 0.0 } else { energy.iter().sum::<f64>() / energy.len() as f64 };
    let (mut worst, mut scale, mut used) = (0.0f64, 0.0f64, false);
    for i in 1..t.len().saturating_sub(1) {
        let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        if (h1 - h0).abs() > 1e-9 * h0 {
            continue;
        }
        let s = &traj.samples[i];
        let fd = (energy[i + 1] - energy[i - 1]) / (t[i + 1] - t[i - 1]);
        let formula = model.rate(&s.y, &s.x, s.t) + h_t[i];
        worst = worst.max((fd - formula).abs());
        scale = scale.max(formula.abs());
        used = true;
    }
    let rate_rel_err = used.then(|| if scale > 0.0 { worst / scale } else { worst });
    let (slope, slope_stderr) = linear_fit(&t, &energy);
    EnergyTrack {
        period: crossing_period(&t, &energy),
        extended_period: crossing_period(&t, &extended),
        energy,
        extended,
        mean,
        rate_rel_err,
        slope,
        slope_stderr,
    }
}
