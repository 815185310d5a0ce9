use super::{BoundsError, DomainParams, R2Policy};
use crate::series::{tail_constant, weighted_norm, NormEvaluator, Series};
use crate::transform::{build_normal_form_with, DriftConvention, NormalFormResult, VectorFieldSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which of `K`, `tau0` is held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityMode {
    FixK(u32),
    FixTau(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub order: u32,
    pub modes: u32,
    pub tau0: f64,
    pub lambda0: f64,
    pub g_norm: f64,
    pub t_norm: f64,
    pub c_p: f64,
    pub c_y: f64,
    pub c_t: f64,
    pub r1: f64,
    pub r2: f64,
    pub rho0: f64,
    pub t0: f64,
}

/// `tau0` from `N = K tau0 / |log lambda0|`.
pub fn tau_for_modes(n: u32, k: u32, lambda0: f64) -> f64 {
    n as f64 * lambda0.ln().abs() / k as f64
}

/// Largest `K` with `K tau0 <= N |log lambda0|`.
pub fn modes_for_tau(n: u32, tau0: f64, lambda0: f64) -> u32 {
    (n as f64 * lambda0.ln().abs() / tau0 + 1e-12).floor() as u32
}

/// `C_a ||f||_{r0, s0 + sigma} e^{-(K+1) sigma}`, bounding `||f^{>K}||_{r0, s0}`.
pub fn tail_bound(
    f: &Series,
    center: &[f64],
    r0: f64,
    s0: f64,
    sigma: f64,
    k: u32,
    eps: f64,
    mu: f64,
) -> Result<f64, BoundsError> {
    if !(sigma > 0.0 && sigma < s0) {
        return Err(BoundsError::SigmaOutOfRange { sigma, s0 });
    }
    let n = weighted_norm(f, center, r0, s0 + sigma, eps, mu)?;
    Ok(tail_constant(k, sigma, f.dim()) * n * (-((k + 1) as f64) * sigma).exp())
}

fn vec_norm(fs: &[Series], center: &[f64], r: f64, s: f64, eps: f64, mu: f64) -> Result<f64, BoundsError> {
    let mut acc = 0.0;
    for f in fs.iter().filter(|f| !f.is_zero()) {
        acc += NormEvaluator::new(f, center, r)?.norm(s, eps, mu).powi(2);
    }
    Ok(acc.sqrt())
}

/// Stability constants of the normal form `nf` built with the matching `K`.
pub fn stability_constants(
    params: &DomainParams,
    nf: &NormalFormResult,
    mode: StabilityMode,
) -> Result<StabilityReport, BoundsError> {
    params.validate()?;
    let lambda0 = params.lambda0();
    if !(lambda0 > 0.0 && lambda0 < 1.0) {
        return Err(BoundsError::Params(format!("lambda0 = {lambda0} must lie in (0, 1)")));
    }
    let n = nf.order;
    let (k, tau0) = match mode {
        StabilityMode::FixK(k) => (k, tau_for_modes(n, k, lambda0)),
        StabilityMode::FixTau(t) => (modes_for_tau(n, t, lambda0), t),
    };
    if k != nf.modes {
        return Err(BoundsError::Params(format!("normal form built with K = {}, estimate needs K = {k}", nf.modes)));
    }
    let (e, m) = (params.eps0, params.mu0);
    let g_norm = vec_norm(&nf.g_next, &params.y0, params.big_r0, params.big_s0, e, m)?;
    let t_norm = vec_norm(&nf.t_map, &params.y0, params.r0, params.s0, e, m)?;
    let c_p = t_norm / lambda0;
    let c_y = g_norm / lambda0.powi(n as i32 + 1);
    let r1 = c_p * lambda0;
    let r2 = match params.r2 {
        R2Policy::Cp => c_p,
        R2Policy::R1 => r1,
        R2Policy::Fixed(v) => v,
    };
    let c_t = r2 / c_y;
    let rho0 = 2.0 * r1 + r2 * lambda0;
    let t0 = c_t * (k as f64 * tau0).exp();
    Ok(StabilityReport { order: n, modes: k, tau0, lambda0, g_norm, t_norm, c_p, c_y, c_t, r1, r2, rho0, t0 })
}

/// Both table variants share this layout: one report per order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityTable {
    pub mode: StabilityMode,
    pub columns: Vec<StabilityReport>,
}

/// Row labels and accessors, in the order the tables print them.
pub const TABLE_ROWS: [(&str, fn(&StabilityReport) -> f64); 11] = [
    ("tau0", |r| r.tau0),
    ("K", |r| r.modes as f64),
    ("G_norm", |r| r.g_norm),
    ("T_norm", |r| r.t_norm),
    ("lambda0", |r| r.lambda0),
    ("C_p", |r| r.c_p),
    ("C_Y", |r| r.c_y),
    ("C_t", |r| r.c_t),
    ("r2", |r| r.r2),
    ("rho0", |r| r.rho0),
    ("T0", |r| r.t0),
];

/// Round to four significant digits.
pub fn sig4(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.3e}")
}

impl StabilityTable {
    /// One row per constant; each order contributes a full-precision and a 4-digit column.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head = vec!["quantity".to_string()];
        for c in &self.columns {
            head.push(format!("N={}", c.order));
            head.push(format!("N={} (4 s.f.)", c.order));
        }
        w.write_record(&head).expect("in-memory csv");
        for (name, get) in TABLE_ROWS {
            let mut row = vec![name.to_string()];
            for c in &self.columns {
                let v = get(c);
                row.push(format!("{v:e}"));
                row.push(sig4(v));
            }
            w.write_record(&row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
    }
}

/// Build the normal forms for every order in `orders` and collect their stability constants.
pub fn make_tables(
    spec: &VectorFieldSpec,
    params: &DomainParams,
    orders: &[u32],
    mode: StabilityMode,
) -> Result<StabilityTable, BoundsError> {
    make_tables_with(spec, params, orders, mode, DriftConvention::default())
}

pub fn make_tables_with(
    spec: &VectorFieldSpec,
    params: &DomainParams,
    orders: &[u32],
    mode: StabilityMode,
    conv: DriftConvention,
) -> Result<StabilityTable, BoundsError> {
    let lambda0 = params.lambda0();
    let columns = orders
        .par_iter()
        .map(|&n| {
            let k = match mode {
                StabilityMode::FixK(k) => k,
                StabilityMode::FixTau(t) => modes_for_tau(n, t, lambda0),
            };
            let nf = build_normal_form_with(spec, n, k, conv)?;
            stability_constants(params, &nf, mode)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StabilityTable { mode, columns })
}
