use crate::arith::RatFn;
use crate::series::Series;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("dimension {0} unsupported")]
    Dimension(usize),
    #[error("{0} has {1} components, expected {2}")]
    Components(&'static str, usize, usize),
    #[error("{0} is not real-valued")]
    NotReal(String),
    #[error("{0} must not carry eps or mu factors")]
    Graded(String),
    #[error("frequency map is not a gradient (d omega_{0}/d y_{1} != d omega_{1}/d y_{0})")]
    NonHamiltonianFrequency(usize, usize),
}

/// The perturbed system
///
/// ```text
/// x' = omega(y) + eps h10_y + mu f01
/// y' = -eps h10_x + mu (g01 - eta)
/// ```
///
/// with `h10`, `f01`, `g01` real Poisson series in `(y, x, t)`. The drift may
/// also enter with the opposite sign, `y' = ... + mu (g01 + eta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldSpec {
    dim: usize,
    drift_sign: i64,
    omega: Vec<RatFn>,
    h10: Series,
    f01: Vec<Series>,
    g01: Vec<Series>,
}

fn check_plain(name: &str, s: &Series) -> Result<(), SpecError> {
    if s.iter().any(|(k, _)| k.j != 0 || k.p != 0) {
        return Err(SpecError::Graded(name.to_string()));
    }
    if !s.is_real() {
        return Err(SpecError::NotReal(name.to_string()));
    }
    Ok(())
}

impl VectorFieldSpec {
    pub fn new(omega: Vec<RatFn>, h10: Series, f01: Vec<Series>, g01: Vec<Series>) -> Result<Self, SpecError> {
        let dim = omega.len();
        if dim == 0 || dim > crate::arith::MAX_VARS {
            return Err(SpecError::Dimension(dim));
        }
        if f01.len() != dim {
            return Err(SpecError::Components("f01", f01.len(), dim));
        }
        if g01.len() != dim {
            return Err(SpecError::Components("g01", g01.len(), dim));
        }
        for (i, w) in omega.iter().enumerate() {
            if *w != w.conj() {
                return Err(SpecError::NotReal(format!("omega[{i}]")));
            }
        }
        for i in 0..dim {
            for j in 0..i {
                if omega[i].derivative(j) != omega[j].derivative(i) {
                    return Err(SpecError::NonHamiltonianFrequency(i, j));
                }
            }
        }
        check_plain("h10", &h10)?;
        for (i, s) in f01.iter().enumerate() {
            check_plain(&format!("f01[{i}]"), s)?;
        }
        for (i, s) in g01.iter().enumerate() {
            check_plain(&format!("g01[{i}]"), s)?;
        }
        Ok(VectorFieldSpec { dim, drift_sign: -1, omega, h10, f01, g01 })
    }

    /// Use `y' = ... + mu (g01 + eta)` instead of `mu (g01 - eta)`.
    pub fn with_positive_drift(mut self, positive: bool) -> Self {
        self.drift_sign = if positive { 1 } else { -1 };
        self
    }

    /// Sign of `mu * eta` in the action equation.
    pub fn drift_sign(&self) -> i64 {
        self.drift_sign
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self) -> &[RatFn] {
        &self.omega
    }

    pub fn h10(&self) -> &Series {
        &self.h10
    }

    pub fn f01(&self) -> &[Series] {
        &self.f01
    }

    pub fn g01(&self) -> &[Series] {
        &self.g01
    }

    /// `eps * h10` as a graded series.
    pub fn hamiltonian_perturbation(&self) -> Series {
        self.h10.shift_grade(1, 0)
    }

    /// Components `(y'_1..y'_l, x'_1..x'_l)` without the drift term.
    pub fn field(&self) -> Vec<Series> {
        let d = self.dim;
        let h = self.hamiltonian_perturbation();
        let mut v = Vec::with_capacity(2 * d);
        for i in 0..d {
            v.push(h.dx(i).neg().add(&self.g01[i].shift_grade(0, 1)));
        }
        for i in 0..d {
            let w = Series::from_ratfn(d, self.omega[i].clone());
            v.push(w.add(&h.dy(i)).add(&self.f01[i].shift_grade(0, 1)));
        }
        v
    }

    /// Largest Fourier order appearing in the perturbation.
    pub fn max_mode_order(&self) -> u32 {
        let mut m = self.h10.max_mode_order();
        for s in self.f01.iter().chain(self.g01.iter()) {
            m = m.max(s.max_mode_order());
        }
        m
    }
}
