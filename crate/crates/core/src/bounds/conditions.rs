//! Inversion and non-resonance smallness conditions, with the constant 70.

use super::{BoundsError, DomainParams};
use crate::series::{NormEvaluator, Series};
use crate::transform::{conservative_forward, NormalFormResult};
use serde::Serialize;

/// Constant of the inversion lemmas.
pub const C_INV: f64 = 70.0;

/// Upper end of the cap search; a condition still holding there is reported unbounded.
pub const CAP_SEARCH_MAX: f64 = 1.0;
const CAP_SEARCH_MIN: f64 = 1e-16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4,
    C5,
    #[serde(rename = "33ter")]
    C33ter,
    C6,
    C7,
    C8,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::C5,
        Condition::C33ter,
        Condition::C6,
        Condition::C7,
        Condition::C8,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::C4 => "C4",
            Condition::C5 => "C5",
            Condition::C33ter => "33ter",
            Condition::C6 => "C6",
            Condition::C7 => "C7",
            Condition::C8 => "C8",
        }
    }

    /// Which of `(eps, mu)` the left-hand side depends on.
    fn depends(&self) -> (bool, bool) {
        match self {
            Condition::C1 | Condition::C2 | Condition::C3 | Condition::C33ter | Condition::C6 => (true, false),
            Condition::C4 | Condition::C5 => (false, true),
            Condition::C7 | Condition::C8 => (true, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub threshold: f64,
}

impl Inequality {
    fn holds(&self) -> bool {
        self.lhs < self.threshold
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionEntry {
    pub name: &'static str,
    /// The part closest to failing.
    pub lhs: f64,
    pub threshold: f64,
    pub parts: Vec<Inequality>,
    /// Largest admissible `eps` with `mu` at its declared cap; `None` when unbounded.
    pub eps_cap: Option<f64>,
    /// Largest admissible `mu` with `eps` at its declared cap.
    pub mu_cap: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub order: u32,
    pub eps: f64,
    pub mu: f64,
    pub conditions: Vec<ConditionEntry>,
    pub eps_cap: Option<f64>,
    pub mu_cap: Option<f64>,
    pub eps_binding: Option<&'static str>,
    pub mu_binding: Option<&'static str>,
    pub all_pass: bool,
}

impl ConditionReport {
    pub fn get(&self, name: &str) -> Option<&ConditionEntry> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &ConditionEntry> {
        self.conditions.iter().filter(|c| !c.pass)
    }
}

/// Euclidean norm of a list of components on a fixed domain.
struct VecNorm {
    parts: Vec<NormEvaluator>,
    s: f64,
}

impl VecNorm {
    fn new(fs: &[Series], center: &[f64], r: f64, s: f64) -> Result<VecNorm, BoundsError> {
        let parts = fs
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| NormEvaluator::new(f, center, r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VecNorm { parts, s })
    }

    fn at(&mut self, eps: f64, mu: f64) -> f64 {
        let s = self.s;
        self.parts.iter_mut().map(|p| p.norm(s, eps, mu).powi(2)).sum::<f64>().sqrt()
    }
}

/// Precompiled norms of every piece entering the conditions.
struct Pieces {
    psi10_y: VecNorm,
    psi10_x: VecNorm,
    r1: VecNorm,
    r1_lin: VecNorm,
    alpha01: VecNorm,
    beta01: VecNorm,
    beta01_x: VecNorm,
    psi_y: VecNorm,
    rn: VecNorm,
    alpha: VecNorm,
    beta: VecNorm,
    beta_x: VecNorm,
    omega_y: f64,
}

fn derivs_y(s: &Series) -> Vec<Series> {
    (0..s.dim()).map(|v| s.dy(v)).collect()
}

fn derivs_x(fs: &[Series]) -> Vec<Series> {
    fs.iter().flat_map(|f| (0..f.dim()).map(move |v| f.dx(v))).collect()
}

impl Pieces {
    fn new(p: &DomainParams, nf: &NormalFormResult) -> Result<Pieces, BoundsError> {
        let dim = nf.dim;
        let c = &p.y0;
        let zero = Series::zero(dim);
        let psi1 = if nf.order >= 1 { nf.psi(1).clone() } else { zero.clone() };
        let psi_n = nf.conservative.psi_total(dim);
        let fwd1 = conservative_forward(&psi1, nf.order.max(1));
        let r1 = &fwd1[..dim];
        let r1_lin: Vec<Series> = r1.iter().map(|s| s.grade_part(1, 0)).collect();
        let alpha01 = nf.alpha(0, 1);
        let beta01 = nf.beta(0, 1);
        let alpha = nf.dissipative.alpha_total(dim);
        let beta = nf.dissipative.beta_total(dim);
        let mut omega_y = 0.0;
        for w in &nf.omega {
            for v in 0..dim {
                let d = Series::from_ratfn(dim, w.derivative(v));
                if !d.is_zero() {
                    omega_y += NormEvaluator::new(&d, c, p.r0)?.norm(0.0, 0.0, 0.0).powi(2);
                }
            }
        }
        Ok(Pieces {
            psi10_y: VecNorm::new(&derivs_y(&psi1), c, p.r0_tilde, p.s0)?,
            psi10_x: VecNorm::new(&(0..dim).map(|v| psi1.dx(v)).collect::<Vec<_>>(), c, p.r0_tilde, p.s0)?,
            r1: VecNorm::new(r1, c, p.r0_prime, p.s0)?,
            r1_lin: VecNorm::new(&r1_lin, c, p.r0_prime, p.s0)?,
            alpha01: VecNorm::new(&alpha01, c, p.r0_tilde, p.s0_tilde)?,
            beta01: VecNorm::new(&beta01, c, p.r0_tilde, p.s0_tilde)?,
            beta01_x: VecNorm::new(&derivs_x(&beta01), c, p.r0_tilde, p.s0_tilde)?,
            psi_y: VecNorm::new(&derivs_y(&psi_n), c, p.r0_tilde, p.s0)?,
            rn: VecNorm::new(&nf.xi_c[..dim], c, p.r0_prime, p.s0)?,
            alpha: VecNorm::new(&alpha, c, p.r0_tilde, p.s0_tilde)?,
            beta: VecNorm::new(&beta, c, p.r0_tilde, p.s0_tilde)?,
            beta_x: VecNorm::new(&derivs_x(&beta), c, p.r0_tilde, p.s0_tilde)?,
            omega_y: omega_y.sqrt(),
        })
    }

    /// `||R||` for `y~ = y + eps R`, given the evaluator of `eps R` and of its linear part.
    fn per_eps(full: &mut VecNorm, lin: Option<&mut VecNorm>, eps: f64) -> f64 {
        if eps > 0.0 {
            full.at(eps, 0.0) / eps
        } else {
            match lin {
                Some(l) => l.at(1.0, 0.0),
                None => full.at(1.0, 0.0),
            }
        }
    }

    fn eval(&mut self, c: Condition, p: &DomainParams, eps: f64, mu: f64) -> Vec<Inequality> {
        let k = p.k as f64;
        let ineq = |lhs: f64, threshold: f64| Inequality { lhs, threshold };
        let div = |num: f64, den: f64| if den == 0.0 { f64::INFINITY } else { num / den };
        let mu = mu.abs();
        match c {
            Condition::C1 => {
                vec![ineq(C_INV * self.psi10_y.at(eps, mu) * (2.0 * p.s0).exp() / p.delta0, 1.0)]
            }
            Condition::C2 => vec![ineq(C_INV * self.psi10_x.at(eps, mu) / (p.r0_tilde - p.r0_prime), 1.0)],
            Condition::C3 => {
                let r = Self::per_eps(&mut self.r1, Some(&mut self.r1_lin), eps);
                vec![ineq(eps, div(p.a, 2.0 * k * r * self.omega_y))]
            }
            Condition::C4 => {
                let (a, b, bx) = (self.alpha01.at(eps, mu), self.beta01.at(eps, mu), self.beta01_x.at(eps, mu));
                vec![
                    ineq(C_INV * a * (2.0 * p.s0_tilde).exp() / p.delta0_tilde, 1.0),
                    ineq(C_INV * (b + bx * a) / (p.r0_tilde - p.big_r0), 1.0),
                ]
            }
            Condition::C5 => {
                let b = self.beta01.at(1.0, 1.0);
                vec![ineq(mu, div(p.a, 4.0 * k * b * self.omega_y))]
            }
            Condition::C33ter => {
                vec![ineq(C_INV * self.psi_y.at(eps, mu) * (2.0 * p.s0).exp() / p.delta0, 1.0)]
            }
            Condition::C6 => {
                let r = Self::per_eps(&mut self.rn, Some(&mut self.r1_lin), eps);
                vec![ineq(eps, div(p.a, 2.0 * k * r * self.omega_y))]
            }
            Condition::C7 => {
                let (a, b, bx) = (self.alpha.at(eps, mu), self.beta.at(eps, mu), self.beta_x.at(eps, mu));
                vec![
                    ineq(C_INV * a * (2.0 * p.s0_tilde).exp() / p.delta0_tilde, 1.0),
                    ineq(C_INV * (b + bx * a) / (p.r0_tilde - p.big_r0), 1.0),
                ]
            }
            Condition::C8 => vec![ineq(k * self.beta.at(eps, mu) * self.omega_y, p.a / 4.0)],
        }
    }

    fn holds(&mut self, c: Condition, p: &DomainParams, eps: f64, mu: f64) -> bool {
        self.eval(c, p, eps, mu).iter().all(Inequality::holds)
    }
}

/// Largest `v` in `[0, CAP_SEARCH_MAX]` with `ok(v)`, assuming `ok` is monotone.
fn bisect_cap<F: FnMut(f64) -> bool>(mut ok: F) -> Option<f64> {
    if ok(CAP_SEARCH_MAX) {
        return None;
    }
    if !ok(CAP_SEARCH_MIN) {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (CAP_SEARCH_MIN.ln(), CAP_SEARCH_MAX.ln());
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if ok(mid.exp()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo.exp())
}

fn min_cap(caps: impl Iterator<Item = (Option<f64>, &'static str)>) -> (Option<f64>, Option<&'static str>) {
    caps.fold((None, None), |acc, (c, name)| match (acc.0, c) {
        (_, None) => acc,
        (None, Some(v)) => (Some(v), Some(name)),
        (Some(a), Some(v)) if v < a => (Some(v), Some(name)),
        _ => acc,
    })
}

/// Evaluate every condition at the declared caps `(eps0, mu0)`.
pub fn check_conditions(params: &DomainParams, nf: &NormalFormResult) -> Result<ConditionReport, BoundsError> {
    check_conditions_at(params, nf, params.eps0, params.mu0)
}

/// Evaluate every condition at `(eps, mu)`; caps are searched with the other
/// parameter held at its declared cap.
pub fn check_conditions_at(
    params: &DomainParams,
    nf: &NormalFormResult,
    eps: f64,
    mu: f64,
) -> Result<ConditionReport, BoundsError> {
    params.validate()?;
    if params.y0.len() != nf.dim {
        return Err(BoundsError::Params("base action dimension differs from the system".into()));
    }
    let mut pieces = Pieces::new(params, nf)?;
    let mut entries = Vec::new();
    for c in Condition::ALL {
        let parts = pieces.eval(c, params, eps, mu);
        let worst = parts
            .iter()
            .max_by(|a, b| (a.lhs / a.threshold).partial_cmp(&(b.lhs / b.threshold)).unwrap_or(std::cmp::Ordering::Equal))
            .cloned()
            .unwrap_or(Inequality { lhs: 0.0, threshold: 1.0 });
        let pass = parts.iter().all(Inequality::holds);
        let (de, dm) = c.depends();
        let eps_cap = if de { bisect_cap(|e| pieces.holds(c, params, e, params.mu0)) } else { None };
        let mu_cap = if dm { bisect_cap(|m| pieces.holds(c, params, params.eps0, m)) } else { None };
        entries.push(ConditionEntry {
            name: c.name(),
            lhs: worst.lhs,
            threshold: worst.threshold,
            parts,
            eps_cap,
            mu_cap,
            pass,
        });
    }
    let (eps_cap, eps_binding) = min_cap(entries.iter().map(|e| (e.eps_cap, e.name)));
    let (mu_cap, mu_binding) = min_cap(entries.iter().map(|e| (e.mu_cap, e.name)));
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(ConditionReport {
        order: nf.order,
        eps,
        mu,
        conditions: entries,
        eps_cap,
        mu_cap,
        eps_binding,
        mu_binding,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_search_on_linear_condition() {
        let cap = bisect_cap(|v| 3.0 * v < 1e-3).unwrap();
        assert!((cap - 1e-3 / 3.0).abs() < 1e-9 * cap);
    }

    #[test]
    fn cap_search_extremes() {
        assert_eq!(bisect_cap(|_| true), None);
        assert_eq!(bisect_cap(|_| false), Some(0.0));
    }

    #[test]
    fn binding_cap_is_the_smallest() {
        let (v, n) = min_cap([(Some(2.0), "a"), (None, "b"), (Some(1.0), "c")].into_iter());
        assert_eq!((v, n), (Some(1.0), Some("c")));
    }
}
