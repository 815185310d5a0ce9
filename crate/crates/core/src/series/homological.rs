use super::{Mode, Series};
use crate::arith::RatFn;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomologicalError {
    #[error("right-hand side has a non-zero average at grading ({0}, {1})")]
    NonZeroAverage(u8, u8),
    #[error("k.omega + m vanishes identically for k = {k:?}, m = {m}")]
    ExactResonance { k: Vec<i16>, m: i16 },
}

/// Inverse small divisors `1 / (k . omega(y) + m)`, cached per mode.
pub struct Divisors {
    omega: Vec<RatFn>,
    cache: HashMap<Mode, RatFn>,
}

impl Divisors {
    pub fn new(omega: Vec<RatFn>) -> Divisors {
        Divisors { omega, cache: HashMap::new() }
    }

    pub fn omega(&self) -> &[RatFn] {
        &self.omega
    }

    /// `k . omega + m` as a function of the actions.
    pub fn divisor(&self, mode: &Mode) -> RatFn {
        let mut parts = vec![RatFn::from_int(mode.m as i64)];
        for (v, w) in self.omega.iter().enumerate() {
            if mode.k[v] != 0 {
                parts.push(w.scale_int(mode.k[v] as i64));
            }
        }
        RatFn::sum(parts.iter())
    }

    pub fn inverse(&mut self, mode: &Mode) -> Result<RatFn, HomologicalError> {
        if let Some(r) = self.cache.get(mode) {
            return Ok(r.clone());
        }
        let d = self.divisor(mode);
        if d.is_zero() {
            let dim = self.omega.len();
            return Err(HomologicalError::ExactResonance { k: mode.k[..dim].to_vec(), m: mode.m });
        }
        let r = d.recip();
        self.cache.insert(*mode, r.clone());
        Ok(r)
    }

    /// Solve `omega . psi_x + psi_t = rhs` for `psi` with zero average.
    pub fn solve(&mut self, rhs: &Series) -> Result<Series, HomologicalError> {
        let mut out = Series::zero(rhs.dim());
        for (key, c) in rhs.iter() {
            let mode = key.mode();
            if mode.is_zero() {
                return Err(HomologicalError::NonZeroAverage(key.j, key.p));
            }
            // i (k.omega + m) psi_hat = rhs_hat
            let inv = self.inverse(&mode)?;
            out.insert(*key, c.mul(&inv).mul_i().neg());
        }
        Ok(out)
    }

    /// Apply `omega . d_x + d_t` to a series.
    pub fn apply(&self, psi: &Series) -> Series {
        psi.map_coeffs(|k, c| c.mul(&self.divisor(&k.mode())).mul_i())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_series, Names};
    use super::*;

    fn s(src: &str) -> Series {
        parse_series(src, &Names::default_for(1)).unwrap()
    }

    #[test]
    fn first_order_generating_function() {
        // y psi_x + psi_t = cos(x - t) + cos(x)
        let mut d = Divisors::new(vec![RatFn::var(0)]);
        let psi = d.solve(&s("eps*(cos(x - t) + cos(x))")).unwrap();
        assert_eq!(psi, s("eps*(sin(x - t)/(y - 1) + sin(x)/y)"));
        assert_eq!(d.apply(&psi), s("eps*(cos(x - t) + cos(x))"));
    }

    #[test]
    fn errors() {
        let mut d = Divisors::new(vec![RatFn::from_int(2)]);
        assert!(matches!(d.solve(&s("cos(x - 2*t)")), Err(HomologicalError::ExactResonance { .. })));
        assert!(matches!(d.solve(&s("eps*y")), Err(HomologicalError::NonZeroAverage(1, 0))));
    }
}
