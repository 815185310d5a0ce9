use super::{Mode, Series};
use crate::arith::factor;
use crate::arith::poly::{exponent, Poly};
use crate::arith::{RatFn, MAX_VARS};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Floating point image of a polynomial.
#[derive(Clone, Debug)]
enum CPoly {
    /// Coefficients by degree in the first variable.
    Dense(Vec<Complex64>),
    Sparse(Vec<([u32; MAX_VARS], Complex64)>),
}

impl CPoly {
    fn new(p: &Poly) -> CPoly {
        if p.is_univariate() {
            CPoly::Dense(p.to_dense().iter().map(|c| c.to_c64()).collect())
        } else {
            CPoly::Sparse(
                p.terms()
                    .iter()
                    .map(|(m, c)| (std::array::from_fn(|v| exponent(*m, v)), c.to_c64()))
                    .collect(),
            )
        }
    }

    #[inline]
    fn eval(&self, y: &[Complex64]) -> Complex64 {
        match self {
            CPoly::Dense(c) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for v in c.iter().rev() {
                    acc = acc * y[0] + v;
                }
                acc
            }
            CPoly::Sparse(t) => t
                .iter()
                .map(|(e, c)| {
                    let mut v = *c;
                    for (i, ei) in e.iter().enumerate() {
                        if *ei > 0 {
                            v *= y[i].powu(*ei);
                        }
                    }
                    v
                })
                .sum(),
        }
    }
}

/// Floating point image of a rational function.
#[derive(Clone, Debug)]
pub struct CompiledRatFn {
    num: CPoly,
    den: Vec<(CPoly, i32)>,
    scale: f64,
}

impl CompiledRatFn {
    pub fn new(r: &RatFn) -> CompiledRatFn {
        CompiledRatFn {
            num: CPoly::new(r.num()),
            den: r.factors().iter().map(|(id, e)| (CPoly::new(&factor::poly(*id)), *e as i32)).collect(),
            scale: 1.0 / r.den_int().to_f64(),
        }
    }

    #[inline]
    pub fn eval(&self, y: &[Complex64]) -> Complex64 {
        let mut v = self.num.eval(y) * self.scale;
        for (f, e) in &self.den {
            v /= f.eval(y).powi(*e);
        }
        v
    }
}

/// Series with coefficients compiled for fast evaluation at fixed `eps`, `mu`.
///
/// Real series are stored by one representative per conjugate mode pair.
#[derive(Clone, Debug)]
pub struct CompiledSeries {
    dim: usize,
    real: bool,
    modes: Vec<(Mode, f64, Vec<(f64, CompiledRatFn)>)>,
}

impl CompiledSeries {
    pub fn new(s: &Series, eps: f64, mu: f64) -> CompiledSeries {
        let real = s.is_real();
        let mut by_mode: BTreeMap<Mode, Vec<(f64, CompiledRatFn)>> = BTreeMap::new();
        for (k, c) in s.iter() {
            let mode = k.mode();
            if real && !representative(&mode) {
                continue;
            }
            let w = eps.powi(k.j as i32) * mu.powi(k.p as i32);
            by_mode.entry(mode).or_default().push((w, CompiledRatFn::new(c)));
        }
        let modes = by_mode
            .into_iter()
            .map(|(m, v)| {
                let mult = if real && !m.is_zero() { 2.0 } else { 1.0 };
                (m, mult, v)
            })
            .collect();
        CompiledSeries { dim: s.dim(), real, modes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Per-mode coefficients at a fixed action value.
    pub fn freeze(&self, y: &[f64]) -> FrozenSeries {
        let yc: Vec<Complex64> = y.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        FrozenSeries {
            real: self.real,
            modes: self
                .modes
                .iter()
                .map(|(m, mult, cs)| {
                    let c: Complex64 = cs.iter().map(|(w, r)| r.eval(&yc) * *w).sum();
                    (*m, c * *mult)
                })
                .collect(),
        }
    }

    /// Value at a real point; the real part when the series is real.
    pub fn eval(&self, y: &[f64], x: &[f64], t: f64) -> f64 {
        self.eval_complex(y, x, t).re
    }

    pub fn eval_complex(&self, y: &[f64], x: &[f64], t: f64) -> Complex64 {
        let yc: Vec<Complex64> = y.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, mult, cs) in &self.modes {
            let c: Complex64 = cs.iter().map(|(w, r)| r.eval(&yc) * *w).sum();
            acc += c * phase(m, x, t) * *mult;
        }
        if self.real {
            Complex64::new(acc.re, 0.0)
        } else {
            acc
        }
    }
}

/// Series with coefficients evaluated at a fixed action value.
#[derive(Clone, Debug)]
pub struct FrozenSeries {
    real: bool,
    modes: Vec<(Mode, Complex64)>,
}

impl FrozenSeries {
    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        let acc: Complex64 = self.modes.iter().map(|(m, c)| c * phase(m, x, t)).sum();
        acc.re
    }

    pub fn is_real(&self) -> bool {
        self.real
    }
}

#[inline]
fn phase(m: &Mode, x: &[f64], t: f64) -> Complex64 {
    let mut th = m.m as f64 * t;
    for (k, xv) in m.k.iter().zip(x.iter()) {
        th += *k as f64 * xv;
    }
    Complex64::from_polar(1.0, th)
}

fn representative(mode: &Mode) -> bool {
    for v in mode.k.iter().chain(std::iter::once(&mode.m)) {
        if *v != 0 {
            return *v > 0;
        }
    }
    true
}

/// Vector of compiled series, e.g. the right-hand side of an ODE.
#[derive(Clone, Debug)]
pub struct CompiledField {
    pub components: Vec<CompiledSeries>,
}

impl CompiledField {
    pub fn new(components: &[Series], eps: f64, mu: f64) -> CompiledField {
        CompiledField { components: components.iter().map(|s| CompiledSeries::new(s, eps, mu)).collect() }
    }

    pub fn eval(&self, y: &[f64], x: &[f64], t: f64, out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(self.components.iter()) {
            *o = c.eval(y, x, t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_series, Names};
    use super::*;

    #[test]
    fn evaluates_real_series() {
        let s = parse_series("eps*sin(x - t)/(y - 1) + mu^2*cos(2*x)*y + 3", &Names::default_for(1)).unwrap();
        let c = CompiledSeries::new(&s, 0.1, 0.2);
        let (y, x, t) = (1.7f64, 0.4f64, 2.5f64);
        let want = 0.1 * (x - t).sin() / (y - 1.0) + 0.04 * (2.0 * x).cos() * y + 3.0;
        assert!((c.eval(&[y], &[x], t) - want).abs() < 1e-14);
        let f = c.freeze(&[y]);
        assert!((f.eval(&[x], t) - want).abs() < 1e-14);
    }
}
