use super::BoundsError;
use crate::arith::RatFn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How the confinement radius `r2` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "value")]
pub enum R2Policy {
    /// `r2 = C_p`, so that `r2 * lambda0 = r1`.
    #[default]
    Cp,
    /// `r2 = r1 = C_p * lambda0`.
    R1,
    Fixed(f64),
}

/// Radii, strip widths and parameter caps of the estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainParams {
    pub y0: Vec<f64>,
    pub x0: Vec<f64>,
    pub r0: f64,
    pub s0: f64,
    pub delta0: f64,
    pub r0_tilde: f64,
    pub s0_tilde: f64,
    pub r0_prime: f64,
    #[serde(rename = "R0")]
    pub big_r0: f64,
    #[serde(rename = "S0")]
    pub big_s0: f64,
    pub delta0_tilde: f64,
    /// Non-resonance order.
    pub k: u32,
    /// Non-resonance constant.
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0: Option<f64>,
    pub eps0: f64,
    pub mu0: f64,
    #[serde(default)]
    pub r2: R2Policy,
}

const TOL: f64 = 1e-12;

impl DomainParams {
    pub fn lambda0(&self) -> f64 {
        self.eps0.max(self.mu0)
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        let bad = |m: &str| Err(BoundsError::Params(m.to_string()));
        if self.y0.is_empty() || self.x0.len() != self.y0.len() {
            return bad("y0 and x0 must have the same non-zero length");
        }
        let pos = [
            ("r0", self.r0),
            ("s0", self.s0),
            ("delta0", self.delta0),
            ("r0_tilde", self.r0_tilde),
            ("s0_tilde", self.s0_tilde),
            ("r0_prime", self.r0_prime),
            ("R0", self.big_r0),
            ("S0", self.big_s0),
            ("delta0_tilde", self.delta0_tilde),
            ("a", self.a),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BoundsError::Params(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.eps0 >= 0.0 && self.mu0 >= 0.0) {
            return bad("eps0 and mu0 must be non-negative");
        }
        if self.k == 0 {
            return bad("K must be at least 1");
        }
        if let Some(t) = self.tau0 {
            if !(t > 0.0) {
                return bad("tau0 must be positive");
            }
        }
        if !(self.r0_prime < self.r0_tilde && self.r0_tilde < self.r0) {
            return bad("need r0' < r0~ < r0");
        }
        if !(self.big_r0 < self.r0_tilde) {
            return bad("need R0 < r0~");
        }
        if (self.s0_tilde - (self.s0 - self.delta0)).abs() > TOL {
            return bad("need s0~ = s0 - delta0");
        }
        if (self.delta0_tilde - self.s0_tilde / 2.0).abs() > TOL {
            return bad("need delta0~ = s0~ / 2");
        }
        if !(self.big_s0 < self.s0_tilde - self.delta0_tilde + TOL) {
            return bad("need S0 < s0~ - delta0~");
        }
        Ok(())
    }
}

/// Where the small divisors are bounded from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NonresDomain {
    /// Only at the base action `y0`.
    #[default]
    Point,
    /// On the real ball of radius `r0` about `y0`.
    Disc,
}

/// All `(k, m)` with `0 < |k| + |m| <= order`, one per sign pair.
pub fn modes_up_to(dim: usize, order: u32) -> Vec<(Vec<i64>, i64)> {
    let o = order as i64;
    let mut out = Vec::new();
    let mut k = vec![-o; dim];
    loop {
        let used: i64 = k.iter().map(|c| c.abs()).sum();
        if used <= o {
            let rest = o - used;
            for m in -rest..=rest {
                let first = k.iter().copied().find(|c| *c != 0).unwrap_or(m);
                if first > 0 {
                    out.push((k.clone(), m));
                }
            }
        }
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            if k[i] < o {
                k[i] += 1;
                break;
            }
            k[i] = -o;
            i += 1;
        }
    }
}

fn divisor(omega: &[f64], k: &[i64], m: i64) -> f64 {
    (omega.iter().zip(k).map(|(w, c)| w * *c as f64).sum::<f64>() + m as f64).abs()
}

fn eval_omega(omega: &[RatFn], y: &[f64]) -> Vec<f64> {
    let yc: Vec<Complex64> = y.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    omega.iter().map(|w| w.eval_c64(&yc).re).collect()
}

fn golden_min<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..80 {
        if gc < gd {
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
    gc.min(gd)
}

/// Smallest `|omega(y) . k + m|` over `0 < |k| + |m| <= order` and `y` in the domain.
pub fn nonres_constant(
    omega: &[RatFn],
    y0: &[f64],
    r0: f64,
    order: u32,
    domain: NonresDomain,
) -> Result<f64, BoundsError> {
    if order == 0 {
        return Err(BoundsError::Params("K must be at least 1".into()));
    }
    if omega.len() != y0.len() {
        return Err(BoundsError::Params("frequency and base action dimensions differ".into()));
    }
    let dim = y0.len();
    let modes = modes_up_to(dim, order);
    let mut best = (f64::INFINITY, None);
    let mut take = |v: f64, k: &[i64], m: i64| {
        if v < best.0 {
            best = (v, Some((k.to_vec(), m)));
        }
    };
    match domain {
        NonresDomain::Point => {
            let w = eval_omega(omega, y0);
            for (k, m) in &modes {
                take(divisor(&w, k, *m), k, *m);
            }
        }
        NonresDomain::Disc if dim == 1 => {
            const N: usize = 512;
            let h = 2.0 * r0 / N as f64;
            let ws: Vec<f64> = (0..=N).map(|i| eval_omega(omega, &[y0[0] - r0 + i as f64 * h])[0]).collect();
            for (k, m) in &modes {
                let g = |y: f64| divisor(&eval_omega(omega, &[y]), k, *m);
                let (i, _) = ws
                    .iter()
                    .enumerate()
                    .map(|(i, w)| (i, divisor(&[*w], k, *m)))
                    .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
                let lo = (y0[0] - r0 + (i as f64 - 1.0) * h).max(y0[0] - r0);
                let hi = (y0[0] - r0 + (i as f64 + 1.0) * h).min(y0[0] + r0);
                take(golden_min(&g, lo, hi).min(g(lo)).min(g(hi)), k, *m);
            }
        }
        NonresDomain::Disc => {
            let n = 24usize;
            let total = (n + 1).pow(dim as u32);
            let mut y = vec![0.0; dim];
            for idx in 0..total {
                let mut rem = idx;
                for (v, yv) in y.iter_mut().enumerate() {
                    *yv = y0[v] - r0 + 2.0 * r0 * (rem % (n + 1)) as f64 / n as f64;
                    rem /= n + 1;
                }
                let d2: f64 = y.iter().zip(y0).map(|(a, b)| (a - b) * (a - b)).sum();
                if d2 > r0 * r0 * (1.0 + 1e-12) {
                    continue;
                }
                let w = eval_omega(omega, &y);
                for (k, m) in &modes {
                    take(divisor(&w, k, *m), k, *m);
                }
            }
        }
    }
    match best {
        (v, Some((k, m))) if v <= 1e-12 => Err(BoundsError::ResonantDomain { k, m, value: v }),
        (v, _) => Ok(v),
    }
}
