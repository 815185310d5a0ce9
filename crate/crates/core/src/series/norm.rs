//! Weighted analytic norms on complex neighbourhoods.
//!
//! `||f||_{r,s} = sum_{k,m} sup_{|y - y0| <= r} |f_km(y)| e^{(|k| + |m|) s}`,
//! with the supremum taken on the boundary circle (polydisc torus for more
//! than one action).

use super::eval::CompiledRatFn;
use super::{Mode, Series};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("denominator root {re}{im:+}i lies within the domain (distance {dist:.6e} <= radius {radius:.6e})")]
    PoleInsideDomain { re: f64, im: f64, dist: f64, radius: f64 },
    #[error("invalid norm parameters: {0}")]
    BadParameters(String),
}

const REL_TOL: f64 = 1e-6;
const MAX_SAMPLES: usize = 1 << 14;

/// Reject series with a denominator root in the closed polydisc of radius
/// `r * (1 + 1e-9)` around `center` (univariate factors are checked per
/// coordinate).
pub fn pole_check(f: &Series, center: &[f64], r: f64) -> Result<(), NormError> {
    let lim = r * (1.0 + 1e-9);
    let mut seen = std::collections::HashSet::new();
    for (_, c) in f.iter() {
        for (id, _) in c.factors() {
            if !seen.insert(*id) {
                continue;
            }
            let p = crate::arith::factor::poly(*id);
            if !p.is_univariate() {
                continue;
            }
            for z in crate::arith::factor::roots(*id) {
                let d = (z - Complex64::new(center[0], 0.0)).norm();
                if d <= lim {
                    return Err(NormError::PoleInsideDomain { re: z.re, im: z.im, dist: d, radius: r });
                }
            }
        }
    }
    Ok(())
}

struct ModeFn {
    parts: Vec<(u8, u8, CompiledRatFn)>,
    eps: f64,
    mu: f64,
}

impl ModeFn {
    fn eval(&self, y: &[Complex64]) -> f64 {
        let v: Complex64 =
            self.parts.iter().map(|(j, p, r)| r.eval(y) * (self.eps.powi(*j as i32) * self.mu.powi(*p as i32))).sum();
        v.norm()
    }
}

fn circle_point(center: f64, r: f64, th: f64) -> [Complex64; 1] {
    [Complex64::new(center + r * th.cos(), r * th.sin())]
}

/// Golden-section maximisation of `g` on `[a, b]`.
fn golden_max<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..60 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd)
}

fn sup_circle(f: &ModeFn, center: f64, r: f64, hints: &[f64]) -> f64 {
    if r == 0.0 {
        return f.eval(&[Complex64::new(center, 0.0)]);
    }
    let g = |th: f64| f.eval(&circle_point(center, r, th));
    let mut n = 64usize;
    let mut prev = f64::NAN;
    loop {
        let h = 2.0 * PI / n as f64;
        let mut samples: Vec<(f64, f64)> = (0..n).map(|i| i as f64 * h).map(|th| (g(th), th)).collect();
        samples.extend(hints.iter().map(|th| (g(*th), *th)));
        samples.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut best = samples[0].0;
        for (_, th) in samples.iter().take(4) {
            best = best.max(golden_max(&g, th - h, th + h));
        }
        if (best - prev).abs() <= REL_TOL * best.abs().max(f64::MIN_POSITIVE) || n >= MAX_SAMPLES {
            return best;
        }
        prev = best;
        n *= 2;
    }
}

fn sup_torus(f: &ModeFn, center: &[f64], r: f64) -> f64 {
    let dim = center.len();
    let mut n = 8usize;
    let mut prev = f64::NAN;
    loop {
        let total = n.pow(dim as u32);
        let mut best = 0.0f64;
        let mut y = vec![Complex64::new(0.0, 0.0); dim];
        for idx in 0..total {
            let mut rem = idx;
            for (v, yv) in y.iter_mut().enumerate() {
                let th = 2.0 * PI * (rem % n) as f64 / n as f64;
                rem /= n;
                *yv = Complex64::new(center[v] + r * th.cos(), r * th.sin());
            }
            best = best.max(f.eval(&y));
        }
        if (best - prev).abs() <= REL_TOL * best.abs().max(f64::MIN_POSITIVE) || total >= MAX_SAMPLES * 4 {
            return best;
        }
        prev = best;
        n *= 2;
    }
}

/// Precompiled norm evaluation of a fixed series at varying `eps`, `mu`, `s`.
pub struct NormEvaluator {
    center: Vec<f64>,
    r: f64,
    modes: Vec<(Mode, ModeFn, Vec<f64>)>,
}

impl NormEvaluator {
    pub fn new(f: &Series, center: &[f64], r: f64) -> Result<NormEvaluator, NormError> {
        if r < 0.0 || center.len() != f.dim() {
            return Err(NormError::BadParameters(format!("radius {r}, center dimension {}", center.len())));
        }
        pole_check(f, center, r)?;
        let mut by_mode: BTreeMap<Mode, (ModeFn, Vec<f64>)> = BTreeMap::new();
        for (k, c) in f.iter() {
            let e = by_mode.entry(k.mode()).or_insert_with(|| (ModeFn { parts: Vec::new(), eps: 0.0, mu: 0.0 }, Vec::new()));
            e.0.parts.push((k.j, k.p, CompiledRatFn::new(c)));
            if f.dim() == 1 {
                for z in c.poles() {
                    e.1.push((z.im).atan2(z.re - center[0]));
                }
            }
        }
        Ok(NormEvaluator {
            center: center.to_vec(),
            r,
            modes: by_mode.into_iter().map(|(m, (mf, h))| (m, mf, h)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode_sups(&mut self, eps: f64, mu: f64) -> Vec<(Mode, f64)> {
        let (center, r) = (&self.center, self.r);
        self.modes
            .iter_mut()
            .map(|(m, mf, hints)| {
                mf.eps = eps;
                mf.mu = mu;
                let sup = if center.len() == 1 { sup_circle(mf, center[0], r, hints) } else { sup_torus(mf, center, r) };
                (*m, sup)
            })
            .collect()
    }

    pub fn norm(&mut self, s: f64, eps: f64, mu: f64) -> f64 {
        self.mode_sups(eps, mu).into_iter().map(|(m, sup)| sup * (m.order() as f64 * s).exp()).sum()
    }
}

/// Per-mode suprema of `f` with `eps`, `mu` substituted.
pub fn mode_sups(f: &Series, center: &[f64], r: f64, eps: f64, mu: f64) -> Result<Vec<(Mode, f64)>, NormError> {
    Ok(NormEvaluator::new(f, center, r)?.mode_sups(eps, mu))
}

/// `||f||_{r,s}` with `eps`, `mu` substituted.
pub fn weighted_norm(f: &Series, center: &[f64], r: f64, s: f64, eps: f64, mu: f64) -> Result<f64, NormError> {
    if s < 0.0 {
        return Err(NormError::BadParameters(format!("strip width {s}")));
    }
    Ok(NormEvaluator::new(f, center, r)?.norm(s, eps, mu))
}

/// Euclidean combination of component norms.
pub fn vector_norm(fs: &[Series], center: &[f64], r: f64, s: f64, eps: f64, mu: f64) -> Result<f64, NormError> {
    let mut acc = 0.0;
    for f in fs {
        let n = weighted_norm(f, center, r, s, eps, mu)?;
        acc += n * n;
    }
    Ok(acc.sqrt())
}

/// Constant of the Fourier tail estimate,
/// `e^{(K+1) sigma/2} ((1 + e^{-sigma/2}) / (1 - e^{-sigma/2}))^{l+1}`.
pub fn tail_constant(k: u32, sigma: f64, dim: usize) -> f64 {
    let q = (-sigma / 2.0).exp();
    ((k as f64 + 1.0) * sigma / 2.0).exp() * ((1.0 + q) / (1.0 - q)).powi(dim as i32 + 1)
}
