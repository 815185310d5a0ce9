//! Order-by-order normal form construction.
//!
//! The conservative change is generated by mixed-variable functions
//! `psi_{j0}(Y~, x, t)`; the dissipative change is the explicit shift
//! `Y = y~ + beta`, `X = x~ + alpha`. The drift `eta` is chosen order by order
//! as the average of the remaining action equation.

pub mod maps;
mod report;
mod normalize;
mod spec;

pub use maps::{compose_vec, invert_near_identity, jacobian, push_field, solve_identity_plus};
pub use normalize::{
    conservative_inverse, conservative_order, conservative_phase, dissipative_order, final_field, potential_cross_check,
    transformed_hamiltonian, Conservative, Dissipative, DriftConvention, FinalField, IntermediateField,
};
pub use spec::{SpecError, VectorFieldSpec};

use crate::arith::RatFn;
use crate::series::{compose, CompiledSeries, Divisors, HomologicalError, Key, Mode, Series};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest normalization order accepted.
pub const MAX_ORDER: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error("transformed field disagrees with the gradient of the transformed Hamiltonian at order {0}")]
    PotentialMismatch(u32),
    #[error("normal form invariant violated at grading ({j}, {p}), mode {mode:?}")]
    InvariantViolated { j: u8, p: u8, mode: Mode },
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u32),
}

/// Everything produced by [`build_normal_form`].
#[derive(Clone, Debug)]
pub struct NormalFormResult {
    pub order: u32,
    pub modes: u32,
    pub convention: DriftConvention,
    pub dim: usize,
    pub omega: Vec<RatFn>,
    pub conservative: Conservative,
    pub dissipative: Dissipative,
    /// Normalized frequency, graded, action only; includes `omega` at grading zero.
    pub omega_d: Vec<Series>,
    /// Inverse maps `y = Y + phi_y(Y, X, t)`, `x = X + phi_x(Y, X, t)`, through grading `order`.
    pub phi_y: Vec<Series>,
    pub phi_x: Vec<Series>,
    /// Forward action map `Y = y + t_map(y, x, t)`, through grading `order`.
    pub t_map: Vec<Series>,
    /// Forward conservative change `y~ = y + r`, `x~ = x + s` in original variables.
    pub xi_c: Vec<Series>,
    /// Inverse conservative shift in intermediate variables.
    pub gamma: Vec<Series>,
    /// Inverse dissipative shift in normal form variables.
    pub delta: Vec<Series>,
    /// Transformed field `(Y'.., X'..)` through grading `order + 1`.
    pub field: Vec<Series>,
    pub f_next: Vec<Series>,
    pub g_next: Vec<Series>,
    pub f_high: Vec<Series>,
    pub g_high: Vec<Series>,
}

/// Build the normal form of order `n` with Fourier cut-off `k`.
pub fn build_normal_form(spec: &VectorFieldSpec, n: u32, k: u32) -> Result<NormalFormResult, TransformError> {
    build_normal_form_with(spec, n, k, DriftConvention::default())
}

pub fn build_normal_form_with(
    spec: &VectorFieldSpec,
    n: u32,
    k: u32,
    conv: DriftConvention,
) -> Result<NormalFormResult, TransformError> {
    if n > MAX_ORDER {
        return Err(TransformError::OrderTooLarge(n));
    }
    let dim = spec.dim();
    let mut div = Divisors::new(spec.omega().to_vec());
    let cons = conservative_phase(spec, n, k, &mut div)?;
    let psi = cons.psi_total(dim);
    let top = n + 1;
    let inter = IntermediateField::new(spec, &psi, top);
    let h = transformed_hamiltonian(spec, &psi, &inter.gamma, top);
    potential_cross_check(&inter.field, &h, top)?;

    let mut diss = Dissipative::new(spec.drift_sign());
    for m in 1..=n {
        dissipative_order(spec, &inter, &mut diss, conv, m, k, &mut div)?;
    }
    let ff = final_field(&inter, &diss, conv, top);
    let field = ff.field;
    check_invariant(&field, dim, n, k)?;

    let split = |part: &dyn Fn(&Series) -> Series| -> (Vec<Series>, Vec<Series>) {
        (field[..dim].iter().map(part).collect(), field[dim..].iter().map(part).collect())
    };
    let (g_next, f_next) = split(&|s| s.total_grade_part(top));
    let (g_high, f_high) = split(&|s| s.truncate(n).high_modes(k));
    let omega_d: Vec<Series> = field[dim..].iter().map(|s| s.truncate(n).low_modes(k).average()).collect();

    let delta = maps::truncate_vec(&ff.delta, n);
    let gamma_n = maps::truncate_vec(&inter.gamma, n);
    let g_at = compose_vec(&gamma_n, &delta, n);
    let phi_y = (0..dim).map(|v| delta[v].add(&g_at[v])).collect();
    let phi_x = (0..dim).map(|v| delta[dim + v].add(&g_at[dim + v])).collect();
    let xi_c = conservative_forward(&psi, n);
    let t_map = action_map(&xi_c, &diss.beta_total(dim), n);

    Ok(NormalFormResult {
        order: n,
        modes: k,
        convention: conv,
        dim,
        omega: spec.omega().to_vec(),
        conservative: cons,
        dissipative: diss,
        omega_d,
        phi_y,
        phi_x,
        t_map,
        xi_c,
        gamma: inter.gamma,
        delta,
        field,
        f_next,
        g_next,
        f_high,
        g_high,
    })
}

/// `Y'` vanishes and `X'` is action-only at every grading `<= n` and mode order `<= k`.
fn check_invariant(field: &[Series], dim: usize, n: u32, k: u32) -> Result<(), TransformError> {
    for (i, s) in field.iter().enumerate() {
        let low = s.truncate(n).low_modes(k);
        let bad = if i < dim { low } else { low.oscillating() };
        let first = bad.iter().next().map(|(key, _)| *key);
        if let Some(key) = first {
            return Err(TransformError::InvariantViolated { j: key.j, p: key.p, mode: key.mode() });
        }
    }
    Ok(())
}

/// Forward conservative change in original variables: `y~ = y + r`, `x~ = x + s`
/// with `r = -psi_x(y + r, x, t)` and `s = psi_y(y + r, x, t)`.
pub fn conservative_forward(psi: &Series, nmax: u32) -> Vec<Series> {
    let dim = psi.dim();
    let zero = vec![Series::zero(dim); dim];
    let psi_x: Vec<Series> = (0..dim).map(|v| psi.dx(v).truncate(nmax)).collect();
    let psi_y: Vec<Series> = (0..dim).map(|v| psi.dy(v).truncate(nmax)).collect();
    let mut r: Vec<Series> = psi_x.iter().map(|s| s.neg()).collect();
    if r.iter().any(|s| !s.is_zero()) {
        for _ in 0..nmax {
            let next: Vec<Series> = psi_x.iter().map(|f| compose(f, &r, &zero, nmax).neg()).collect();
            if next == r {
                break;
            }
            r = next;
        }
    }
    let s: Vec<Series> = psi_y.iter().map(|f| compose(f, &r, &zero, nmax)).collect();
    r.into_iter().chain(s).collect()
}

/// `Y - y` as a function of the original variables.
fn action_map(xi_c: &[Series], beta: &[Series], nmax: u32) -> Vec<Series> {
    let dim = beta.len();
    let (r, s) = xi_c.split_at(dim);
    beta.iter()
        .zip(r.iter())
        .map(|(b, rv)| rv.add(&compose(&b.truncate(nmax), r, s, nmax)))
        .collect()
}

impl NormalFormResult {
    /// `psi_{j0}`, `1 <= j <= order`.
    pub fn psi(&self, j: u32) -> &Series {
        &self.conservative.psi[j as usize - 1]
    }

    /// Frequency correction at grading `(j, p)`, one action-only series per component.
    pub fn omega_correction(&self, j: u8, p: u8) -> Vec<RatFn> {
        self.omega_d.iter().map(|s| s.coeff(j, p, Mode::default())).collect()
    }

    pub fn alpha(&self, j: u8, p: u8) -> Vec<Series> {
        self.dissipative.alpha.get(&(j, p)).cloned().unwrap_or_else(|| vec![Series::zero(self.dim); self.dim])
    }

    pub fn beta(&self, j: u8, p: u8) -> Vec<Series> {
        self.dissipative.beta.get(&(j, p)).cloned().unwrap_or_else(|| vec![Series::zero(self.dim); self.dim])
    }

    /// Drift coefficient of `eps^j mu^(p-1)` in `eta`.
    pub fn eta(&self, j: u8, p: u8) -> Vec<RatFn> {
        self.dissipative.eta.get(&(j, p)).cloned().unwrap_or_else(|| vec![RatFn::zero(); self.dim])
    }

    /// `eta` as graded series in the action: the `(j, p)` coefficient sits at
    /// grading `(j, p - 1)`.
    pub fn eta_series(&self) -> Vec<Series> {
        self.dissipative
            .mu_eta(self.dim)
            .into_iter()
            .map(|s| Series::from_terms(self.dim, s.iter().map(|(k, c)| (Key::new(k.j, k.p - 1, k.mode()), c.clone()))))
            .collect()
    }

    /// `eta` expressed through the original action `y`.
    pub fn drift_in_original(&self) -> Vec<Series> {
        let eta = self.eta_series();
        match self.convention {
            DriftConvention::OriginalAction => eta,
            DriftConvention::NormalAction => {
                let zero = vec![Series::zero(self.dim); self.dim];
                eta.iter().map(|s| compose(s, &self.t_map, &zero, self.order)).collect()
            }
        }
    }

    /// `Omega_d` evaluated at a real action.
    pub fn nf_frequency(&self, y0: &[f64], eps: f64, mu: f64) -> Vec<f64> {
        self.omega_d.iter().map(|s| CompiledSeries::new(s, eps, mu).eval(y0, &vec![0.0; self.dim], 0.0)).collect()
    }

    /// Per-grading term counts of the conservative and dissipative forward maps.
    pub fn term_counts(&self) -> BTreeMap<u32, (usize, usize)> {
        let mut out = BTreeMap::new();
        for n in 1..=self.order {
            let c: usize = self.xi_c.iter().map(|s| s.total_grade_part(n).len()).sum();
            let d: usize = self
                .dissipative
                .alpha
                .iter()
                .chain(self.dissipative.beta.iter())
                .filter(|((j, p), _)| (*j + *p) as u32 == n)
                .map(|(_, v)| v.iter().map(|s| s.len()).sum::<usize>())
                .sum();
            out.insert(n, (c, d));
        }
        out
    }
}
