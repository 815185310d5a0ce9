//! Graded Poisson series in the exponential basis.
//!
//! A series is a finite sum of terms `eps^j mu^p c(y) exp(i(k.x + m t))`
//! with `c` an exact rational function of the actions.

mod eval;
mod homological;
mod literal;
mod norm;
mod subst;

pub use eval::{CompiledField, CompiledRatFn, CompiledSeries, FrozenSeries};
pub use homological::{Divisors, HomologicalError};
pub use literal::{parse_decimal, parse_ratfn, parse_series, print_series, print_series_real, LiteralError, Names};
pub use norm::{mode_sups, NormEvaluator, pole_check, tail_constant, vector_norm, weighted_norm, NormError};
pub use subst::{compose, exp_i, potential_shift};

use crate::arith::{GaussianRational, RatFn, MAX_VARS};
use std::collections::{BTreeMap, HashMap};

/// Grading and Fourier mode of a term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Key {
    pub j: u8,
    pub p: u8,
    pub k: [i16; MAX_VARS],
    pub m: i16,
}

/// Fourier mode `(k, m)` without grading.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mode {
    pub k: [i16; MAX_VARS],
    pub m: i16,
}

impl Mode {
    pub fn new(k: &[i16], m: i16) -> Mode {
        let mut kk = [0; MAX_VARS];
        kk[..k.len()].copy_from_slice(k);
        Mode { k: kk, m }
    }

    pub fn order(&self) -> u32 {
        self.k.iter().map(|v| v.unsigned_abs() as u32).sum::<u32>() + self.m.unsigned_abs() as u32
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0 && self.k.iter().all(|v| *v == 0)
    }

    pub fn neg(&self) -> Mode {
        let mut k = self.k;
        for v in k.iter_mut() {
            *v = -*v;
        }
        Mode { k, m: -self.m }
    }

    pub fn add(&self, o: &Mode) -> Mode {
        let mut k = self.k;
        for (a, b) in k.iter_mut().zip(o.k.iter()) {
            *a += *b;
        }
        Mode { k, m: self.m + o.m }
    }
}

impl Key {
    pub fn new(j: u8, p: u8, mode: Mode) -> Key {
        Key { j, p, k: mode.k, m: mode.m }
    }

    pub fn mode(&self) -> Mode {
        Mode { k: self.k, m: self.m }
    }

    pub fn grade(&self) -> u32 {
        self.j as u32 + self.p as u32
    }

    fn add(&self, o: &Key) -> Key {
        let mode = self.mode().add(&o.mode());
        Key::new(self.j + o.j, self.p + o.p, mode)
    }
}

/// Truncated graded Poisson series.
#[derive(Clone, PartialEq, Default)]
pub struct PoissonSeries {
    dim: usize,
    terms: BTreeMap<Key, RatFn>,
}

pub type Series = PoissonSeries;

impl PoissonSeries {
    pub fn zero(dim: usize) -> Series {
        assert!((1..=MAX_VARS).contains(&dim), "dimension must be in 1..={MAX_VARS}");
        Series { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Single term `eps^j mu^p c exp(i(k.x + m t))`.
    pub fn term(dim: usize, j: u8, p: u8, mode: Mode, c: RatFn) -> Series {
        let mut s = Series::zero(dim);
        s.insert(Key::new(j, p, mode), c);
        s
    }

    /// Mode-free, grade-zero series equal to `c`.
    pub fn from_ratfn(dim: usize, c: RatFn) -> Series {
        Series::term(dim, 0, 0, Mode::default(), c)
    }

    pub fn constant(dim: usize, c: i64) -> Series {
        Series::from_ratfn(dim, RatFn::from_int(c))
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, RatFn)>>(dim: usize, it: I) -> Series {
        let mut s = Series::zero(dim);
        for (k, c) in it {
            s.add_term(k, &c);
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &RatFn)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &Key) -> Option<&RatFn> {
        self.terms.get(k)
    }

    /// Coefficient at a key, zero when absent.
    pub fn coeff(&self, j: u8, p: u8, mode: Mode) -> RatFn {
        self.terms.get(&Key::new(j, p, mode)).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, k: Key, c: RatFn) {
        if c.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, c);
        }
    }

    pub fn add_term(&mut self, k: Key, c: &RatFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                let s = v.add(c);
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn max_grade(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.grade()).max()
    }

    pub fn min_grade(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.grade()).min()
    }

    pub fn max_mode_order(&self) -> u32 {
        self.terms.keys().map(|k| k.mode().order()).max().unwrap_or(0)
    }

    pub fn map_coeffs<F: Fn(&Key, &RatFn) -> RatFn>(&self, f: F) -> Series {
        let mut s = Series::zero(self.dim);
        for (k, c) in &self.terms {
            s.insert(*k, f(k, c));
        }
        s
    }

    pub fn filter<F: Fn(&Key) -> bool>(&self, f: F) -> Series {
        Series {
            dim: self.dim,
            terms: self.terms.iter().filter(|(k, _)| f(k)).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        let mut s = self.clone();
        for (k, c) in &o.terms {
            s.add_term(*k, c);
        }
        s
    }

    pub fn add_assign(&mut self, o: &Series) {
        for (k, c) in &o.terms {
            self.add_term(*k, c);
        }
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Series {
        self.map_coeffs(|_, c| c.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Series {
        self.map_coeffs(|_, v| v.scale(c))
    }

    pub fn scale_int(&self, c: i64) -> Series {
        self.scale(&GaussianRational::from_int(c))
    }

    /// Multiply every coefficient by a function of the actions.
    pub fn mul_ratfn(&self, c: &RatFn) -> Series {
        self.map_coeffs(|_, v| v.mul(c))
    }

    /// Shift every grading by `(dj, dp)`.
    pub fn shift_grade(&self, dj: u8, dp: u8) -> Series {
        Series {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (Key { j: k.j + dj, p: k.p + dp, ..*k }, c.clone())).collect(),
        }
    }

    /// Product truncated to total grading `<= nmax`.
    pub fn mul(&self, o: &Series, nmax: u32) -> Series {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        if self.is_empty() || o.is_empty() {
            return Series::zero(self.dim);
        }
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut by_grade: Vec<Vec<(&Key, &RatFn)>> = vec![Vec::new(); nmax as usize + 1];
        for (k, c) in &b.terms {
            if k.grade() <= nmax {
                by_grade[k.grade() as usize].push((k, c));
            }
        }
        let mut acc: HashMap<Key, Vec<RatFn>> = HashMap::new();
        for (ka, ca) in &a.terms {
            let ga = ka.grade();
            if ga > nmax {
                continue;
            }
            for bucket in &by_grade[..=(nmax - ga) as usize] {
                for (kb, cb) in bucket {
                    acc.entry(ka.add(kb)).or_default().push(ca.mul_raw(cb));
                }
            }
        }
        let mut s = Series::zero(self.dim);
        for (k, v) in acc {
            let c = RatFn::sum(v.iter());
            s.insert(k, c);
        }
        s
    }

    /// `self^e` truncated at `nmax`.
    pub fn pow(&self, e: u32, nmax: u32) -> Series {
        let mut r = Series::constant(self.dim, 1);
        for _ in 0..e {
            r = r.mul(self, nmax);
        }
        r
    }

    /// Linear combination `sum c_i s_i` computed over common denominators.
    pub fn sum_all(dim: usize, parts: &[&Series]) -> Series {
        let mut acc: HashMap<Key, Vec<RatFn>> = HashMap::new();
        for s in parts {
            for (k, c) in &s.terms {
                acc.entry(*k).or_default().push(c.clone());
            }
        }
        let mut out = Series::zero(dim);
        for (k, v) in acc {
            out.insert(k, RatFn::sum(v.iter()));
        }
        out
    }

    /// Partial derivative in the angle `x_v`.
    pub fn dx(&self, v: usize) -> Series {
        self.map_coeffs(|k, c| if k.k[v] == 0 { RatFn::zero() } else { c.mul_i().scale_int(k.k[v] as i64) })
    }

    /// Partial derivative in time.
    pub fn dt(&self) -> Series {
        self.map_coeffs(|k, c| if k.m == 0 { RatFn::zero() } else { c.mul_i().scale_int(k.m as i64) })
    }

    /// Partial derivative in the action `y_v`.
    pub fn dy(&self, v: usize) -> Series {
        self.map_coeffs(|_, c| c.derivative(v))
    }

    /// Mode-zero part.
    pub fn average(&self) -> Series {
        self.filter(|k| k.mode().is_zero())
    }

    /// Everything except the mode-zero part.
    pub fn oscillating(&self) -> Series {
        self.filter(|k| !k.mode().is_zero())
    }

    /// Terms with `|k| + |m| <= cap`.
    pub fn low_modes(&self, cap: u32) -> Series {
        self.filter(|k| k.mode().order() <= cap)
    }

    /// Terms with `|k| + |m| > cap`.
    pub fn high_modes(&self, cap: u32) -> Series {
        self.filter(|k| k.mode().order() > cap)
    }

    pub fn grade_part(&self, j: u8, p: u8) -> Series {
        self.filter(|k| k.j == j && k.p == p)
    }

    pub fn total_grade_part(&self, n: u32) -> Series {
        self.filter(|k| k.grade() == n)
    }

    pub fn truncate(&self, nmax: u32) -> Series {
        self.filter(|k| k.grade() <= nmax)
    }

    /// Coefficient-wise complex conjugate with modes reflected; equals
    /// `self` exactly when the series is real-valued.
    pub fn conj(&self) -> Series {
        let mut s = Series::zero(self.dim);
        for (k, c) in &self.terms {
            s.insert(Key::new(k.j, k.p, k.mode().neg()), c.conj());
        }
        s
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(k, c)| match self.terms.get(&Key::new(k.j, k.p, k.mode().neg())) {
            Some(o) => *o == c.conj(),
            None => false,
        })
    }

    /// Gradings present, sorted.
    pub fn gradings(&self) -> Vec<(u8, u8)> {
        let mut g: Vec<(u8, u8)> = self.terms.keys().map(|k| (k.j, k.p)).collect();
        g.dedup();
        g
    }

    /// Distinct Fourier modes present.
    pub fn modes(&self) -> Vec<Mode> {
        let mut m: Vec<Mode> = self.terms.keys().map(|k| k.mode()).collect();
        m.sort();
        m.dedup();
        m
    }

    /// Mode-zero, grade-zero coefficient.
    pub fn constant_part(&self) -> RatFn {
        self.coeff(0, 0, Mode::default())
    }
}

impl std::fmt::Debug for PoissonSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", literal::print_series(self, &Names::default_for(self.dim)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s(src: &str) -> Series {
        parse_series(src, &Names::default_for(1)).unwrap()
    }

    #[test]
    fn product_of_trig_terms() {
        let a = s("cos(x)");
        let b = s("sin(x)");
        assert_eq!(a.mul(&b, 10), s("sin(2*x)/2"));
        let c = s("eps*cos(x - t)/(y - 1)");
        assert_eq!(c.mul(&c, 1), Series::zero(1));
        assert_eq!(c.mul(&c, 2), s("eps^2*(1 + cos(2*x - 2*t))/(2*(y-1)^2)"));
    }

    #[test]
    fn derivatives() {
        let a = s("sin(x - t)/(y - 1) + sin(x)/y");
        assert_eq!(a.dx(0), s("cos(x - t)/(y - 1) + cos(x)/y"));
        assert_eq!(a.dt(), s("-cos(x - t)/(y - 1)"));
        assert_eq!(a.dy(0), s("-sin(x - t)/(y - 1)^2 - sin(x)/y^2"));
    }

    #[test]
    fn reality_and_projections() {
        let a = s("cos(x) + eps*mu*sin(3*x - 2*t) + 5");
        assert!(a.is_real());
        assert_eq!(a.average(), s("5"));
        assert_eq!(a.low_modes(1), s("cos(x) + 5"));
        assert_eq!(a.high_modes(1), s("eps*mu*sin(3*x - 2*t)"));
        assert_eq!(a.grade_part(1, 1).len(), 2);
        assert!(!s("exp(i*x)").is_real());
    }
}
