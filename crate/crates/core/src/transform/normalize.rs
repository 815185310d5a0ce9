use super::maps::{compose_vec, invert_near_identity, jacobian, push_field, solve_identity_plus, truncate_vec};
use super::spec::VectorFieldSpec;
use super::TransformError;
use crate::arith::RatFn;
use crate::series::{compose, potential_shift, Divisors, Mode, Series};
use std::collections::BTreeMap;

/// How the drift enters the field while the dissipative maps are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriftConvention {
    /// `eta` is a function of the original action `y`.
    #[default]
    OriginalAction,
    /// `eta` is a function of the normal form action `Y`.
    NormalAction,
}

/// Mixed-variable inverse of the conservative change: with `psi(Y, x, t)`,
/// `x = X + gx`, `y = Y + gy` where `gx = -psi_y(Y, X + gx)`, `gy = psi_x(Y, X + gx)`.
pub fn conservative_inverse(psi: &Series, nmax: u32) -> Vec<Series> {
    let dim = psi.dim();
    let zero = vec![Series::zero(dim); dim];
    let psi_y: Vec<Series> = (0..dim).map(|v| psi.dy(v).truncate(nmax)).collect();
    let psi_x: Vec<Series> = (0..dim).map(|v| psi.dx(v).truncate(nmax)).collect();
    let mut gx: Vec<Series> = psi_y.iter().map(|s| s.neg()).collect();
    if gx.iter().any(|s| !s.is_zero()) {
        for _ in 0..nmax {
            let next: Vec<Series> = psi_y.iter().map(|f| compose(f, &zero, &gx, nmax).neg()).collect();
            if next == gx {
                break;
            }
            gx = next;
        }
    }
    let gy: Vec<Series> = psi_x.iter().map(|f| compose(f, &zero, &gx, nmax)).collect();
    gy.into_iter().chain(gx).collect()
}

/// Transformed Hamiltonian minus the unperturbed part `h0(y)`.
pub fn transformed_hamiltonian(spec: &VectorFieldSpec, psi: &Series, gamma: &[Series], nmax: u32) -> Series {
    let dim = spec.dim();
    let zero = vec![Series::zero(dim); dim];
    let (gy, gx) = gamma.split_at(dim);
    let parts = [
        potential_shift(spec.omega(), gy, nmax),
        compose(&spec.hamiltonian_perturbation(), gy, gx, nmax),
        compose(&psi.dt(), &zero, gx, nmax),
    ];
    Series::sum_all(dim, &parts.iter().collect::<Vec<_>>())
}

/// Generating functions and frequency corrections of the conservative phase.
#[derive(Clone, Debug)]
pub struct Conservative {
    /// `psi[j - 1]` has grading `(j, 0)`.
    pub psi: Vec<Series>,
    /// `omega[j - 1][v]` is the action-only correction at grading `(j, 0)`.
    pub omega: Vec<Vec<Series>>,
}

impl Conservative {
    pub fn psi_total(&self, dim: usize) -> Series {
        Series::sum_all(dim, &self.psi.iter().collect::<Vec<_>>())
    }
}

/// One conservative step: returns `psi_{n0}` and `Omega_{n0}` given the lower orders.
pub fn conservative_order(
    spec: &VectorFieldSpec,
    psi_lower: &Series,
    n: u32,
    k: u32,
    div: &mut Divisors,
) -> Result<(Series, Vec<Series>), TransformError> {
    let gamma = conservative_inverse(psi_lower, n);
    let h = transformed_hamiltonian(spec, psi_lower, &gamma, n);
    let m = h.total_grade_part(n);
    let psi = div.solve(&m.oscillating().low_modes(k).neg())?;
    let avg = m.average();
    let omega = (0..spec.dim()).map(|v| avg.dy(v)).collect();
    Ok((psi, omega))
}

pub fn conservative_phase(spec: &VectorFieldSpec, order: u32, k: u32, div: &mut Divisors) -> Result<Conservative, TransformError> {
    let dim = spec.dim();
    let mut out = Conservative { psi: Vec::new(), omega: Vec::new() };
    let mut total = Series::zero(dim);
    for n in 1..=order {
        let (psi, omega) = conservative_order(spec, &total, n, k, div)?;
        total.add_assign(&psi);
        out.psi.push(psi);
        out.omega.push(omega);
    }
    Ok(out)
}

/// Check that the pushed field agrees with the symplectic gradient of the
/// transformed Hamiltonian at every grading `(j, 0)`, `1 <= j <= nmax`.
pub fn potential_cross_check(field: &[Series], h: &Series, nmax: u32) -> Result<(), TransformError> {
    let dim = h.dim();
    for j in 1..=nmax {
        let hj = h.grade_part(j as u8, 0);
        for v in 0..dim {
            let ydot = field[v].grade_part(j as u8, 0);
            let xdot = field[dim + v].grade_part(j as u8, 0);
            if ydot != hj.dx(v).neg() || xdot != hj.dy(v) {
                return Err(TransformError::PotentialMismatch(j));
            }
        }
    }
    Ok(())
}

/// Dissipative maps and drift, keyed by grading `(j, p)` with `p >= 1`.
#[derive(Clone, Debug)]
pub struct Dissipative {
    pub alpha: BTreeMap<(u8, u8), Vec<Series>>,
    pub beta: BTreeMap<(u8, u8), Vec<Series>>,
    /// Coefficients of `mu * eta`, action only.
    pub eta: BTreeMap<(u8, u8), Vec<RatFn>>,
    /// Sign of `mu * eta` in the action equation.
    pub drift_sign: i64,
    pub omega: BTreeMap<(u8, u8), Vec<Series>>,
}

impl Dissipative {
    pub fn new(drift_sign: i64) -> Dissipative {
        Dissipative {
            alpha: BTreeMap::new(),
            beta: BTreeMap::new(),
            eta: BTreeMap::new(),
            drift_sign,
            omega: BTreeMap::new(),
        }
    }

    fn sum(map: &BTreeMap<(u8, u8), Vec<Series>>, dim: usize) -> Vec<Series> {
        (0..dim)
            .map(|v| Series::sum_all(dim, &map.values().map(|c| &c[v]).collect::<Vec<_>>()))
            .collect()
    }

    pub fn alpha_total(&self, dim: usize) -> Vec<Series> {
        Self::sum(&self.alpha, dim)
    }

    pub fn beta_total(&self, dim: usize) -> Vec<Series> {
        Self::sum(&self.beta, dim)
    }

    /// `mu * eta` as graded action-only series, one per component.
    pub fn mu_eta(&self, dim: usize) -> Vec<Series> {
        (0..dim)
            .map(|v| {
                let mut s = Series::zero(dim);
                for ((j, p), c) in &self.eta {
                    if !c[v].is_zero() {
                        s.add_assign(&Series::from_ratfn(dim, c[v].clone()).shift_grade(*j, *p));
                    }
                }
                s
            })
            .collect()
    }
}

/// Data of the conservative phase needed to push through the dissipative maps.
pub struct IntermediateField {
    /// Field without drift in intermediate variables.
    pub field: Vec<Series>,
    /// `columns[v]` is the image of the unit vector `e_{y_v}` under the
    /// differential of the conservative change.
    pub columns: Vec<Vec<Series>>,
    /// Inverse conservative shift.
    pub gamma: Vec<Series>,
}

impl IntermediateField {
    pub fn new(spec: &VectorFieldSpec, psi: &Series, nmax: u32) -> IntermediateField {
        let dim = spec.dim();
        let gamma = conservative_inverse(psi, nmax);
        let field = push_field(&spec.field(), &gamma, nmax);
        let jac = jacobian(&gamma);
        let columns = (0..dim)
            .map(|v| {
                let e: Vec<Series> =
                    (0..2 * dim).map(|a| if a == v { Series::constant(dim, 1) } else { Series::zero(dim) }).collect();
                solve_identity_plus(&jac, &e, nmax)
            })
            .collect();
        IntermediateField { field, columns, gamma }
    }
}

/// Field in normal form variables with the dissipative maps truncated at `nmax`.
pub struct FinalField {
    pub field: Vec<Series>,
    /// Inverse dissipative shift.
    pub delta: Vec<Series>,
}

pub fn final_field(
    inter: &IntermediateField,
    diss: &Dissipative,
    conv: DriftConvention,
    nmax: u32,
) -> FinalField {
    let dim = inter.columns.len();
    let xi: Vec<Series> = diss.beta_total(dim).into_iter().chain(diss.alpha_total(dim)).collect();
    let delta = invert_near_identity(&xi, nmax);
    let mut u = compose_vec(&truncate_vec(&inter.field, nmax), &delta, nmax);
    let mu_eta = diss.mu_eta(dim);
    if mu_eta.iter().any(|s| !s.is_zero()) {
        let eta_at: Vec<Series> = match conv {
            DriftConvention::NormalAction => mu_eta.iter().map(|s| s.truncate(nmax)).collect(),
            DriftConvention::OriginalAction => {
                let gy_d = compose_vec(&truncate_vec(&inter.gamma[..dim], nmax), &delta, nmax);
                let shift: Vec<Series> = (0..dim).map(|v| delta[v].add(&gy_d[v])).collect();
                let zero = vec![Series::zero(dim); dim];
                mu_eta.iter().map(|s| compose(s, &shift, &zero, nmax)).collect()
            }
        };
        for v in 0..dim {
            if eta_at[v].is_zero() {
                continue;
            }
            let col = compose_vec(&truncate_vec(&inter.columns[v], nmax), &delta, nmax);
            let e = eta_at[v].scale_int(diss.drift_sign);
            for (ua, ca) in u.iter_mut().zip(col.iter()) {
                *ua = ua.add(&e.mul(ca, nmax));
            }
        }
    }
    for (ua, da) in u.iter_mut().zip(delta.iter()) {
        *ua = ua.sub(&da.dt());
    }
    let field = solve_identity_plus(&jacobian(&delta), &u, nmax);
    FinalField { field, delta }
}

/// Dissipative step at total order `n`: fills every grading `(n - p, p)`, `p >= 1`.
pub fn dissipative_order(
    spec: &VectorFieldSpec,
    inter: &IntermediateField,
    diss: &mut Dissipative,
    conv: DriftConvention,
    n: u32,
    k: u32,
    div: &mut Divisors,
) -> Result<(), TransformError> {
    let dim = spec.dim();
    let ff = final_field(inter, diss, conv, n);
    let omega_y: Vec<Vec<RatFn>> =
        (0..dim).map(|v| (0..dim).map(|w| spec.omega()[v].derivative(w)).collect()).collect();
    for p in 1..=n {
        let (j, p) = ((n - p) as u8, p as u8);
        let mut eta = Vec::with_capacity(dim);
        let mut beta = Vec::with_capacity(dim);
        for v in 0..dim {
            let b = ff.field[v].grade_part(j, p);
            eta.push(b.coeff(j, p, Mode::default()).scale_int(-diss.drift_sign));
            beta.push(div.solve(&b.oscillating().low_modes(k).neg())?);
        }
        let mut alpha = Vec::with_capacity(dim);
        let mut omega = Vec::with_capacity(dim);
        for v in 0..dim {
            let a = ff.field[dim + v].grade_part(j, p);
            let mut rhs = a.oscillating().low_modes(k);
            for w in 0..dim {
                if !omega_y[v][w].is_zero() && !beta[w].is_zero() {
                    rhs = rhs.sub(&beta[w].mul_ratfn(&omega_y[v][w]));
                }
            }
            alpha.push(div.solve(&rhs.neg())?);
            omega.push(a.average());
        }
        diss.eta.insert((j, p), eta);
        diss.beta.insert((j, p), beta);
        diss.alpha.insert((j, p), alpha);
        diss.omega.insert((j, p), omega);
    }
    Ok(())
}
