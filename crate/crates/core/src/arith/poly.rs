use super::gauss::{GInt, GaussianRational};
use super::int::Int;
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;

/// Maximum number of action variables.
pub const MAX_VARS: usize = 4;
const BITS: u32 = 16;
const FIELD: u64 = (1 << BITS) - 1;
/// Bits occupied by every variable except the first.
const TAIL_MASK: u64 = (1 << (BITS * (MAX_VARS as u32 - 1))) - 1;

/// Packed exponent vector. Variable 0 sits in the most significant field,
/// so integer order on the packed word is lexicographic order.
pub type Monomial = u64;

#[inline]
fn shift(var: usize) -> u32 {
    BITS * (MAX_VARS as u32 - 1 - var as u32)
}

#[inline]
pub fn exponent(m: Monomial, var: usize) -> u32 {
    ((m >> shift(var)) & FIELD) as u32
}

pub fn monomial(exps: &[u32]) -> Monomial {
    let mut m = 0;
    for (v, e) in exps.iter().enumerate() {
        assert!(*e as u64 <= FIELD, "exponent overflow");
        m |= (*e as u64) << shift(v);
    }
    m
}

#[inline]
fn divides(a: Monomial, b: Monomial) -> bool {
    (0..MAX_VARS).all(|v| exponent(a, v) <= exponent(b, v))
}

fn total_degree_of(m: Monomial) -> u32 {
    (0..MAX_VARS).map(|v| exponent(m, v)).sum()
}

/// Sparse polynomial over `Z[i]` in up to [`MAX_VARS`] variables.
///
/// Terms are sorted by decreasing monomial and carry no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, GInt)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: GInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(0, c)] }
        }
    }

    pub fn one() -> Poly {
        Poly::constant(GInt::one())
    }

    pub fn var(v: usize) -> Poly {
        assert!(v < MAX_VARS);
        Poly { terms: vec![(1 << shift(v), GInt::one())] }
    }

    /// Builds from arbitrary terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Monomial, GInt)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, GInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => lc.add_assign(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    /// Univariate polynomial in variable 0 from dense coefficients (index = degree).
    pub fn from_dense(coeffs: Vec<GInt>) -> Poly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.into_iter().enumerate().rev() {
            if !c.is_zero() {
                terms.push(((e as u64) << shift(0), c));
            }
        }
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, GInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == 0)
    }

    pub fn constant_term(&self) -> GInt {
        match self.terms.last() {
            Some((0, c)) => c.clone(),
            _ => GInt::zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, GInt)> {
        self.terms.first()
    }

    /// True when only variable 0 occurs.
    pub fn is_univariate(&self) -> bool {
        self.terms.iter().all(|(m, _)| m & TAIL_MASK == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| total_degree_of(*m)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| exponent(*m, v)).max().unwrap_or(0)
    }

    /// Dense coefficients in variable 0; only valid when univariate.
    pub fn to_dense(&self) -> Vec<GInt> {
        let deg = self.degree_in(0) as usize;
        let mut out = vec![GInt::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            out[exponent(*m, 0) as usize] = c.clone();
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn conj(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    pub fn scale(&self, k: &GInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.mul(k))).collect() }
    }

    pub fn scale_int(&self, k: &Int) -> Poly {
        if k.is_one() {
            return self.clone();
        }
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.scale(k))).collect() }
    }

    pub fn div_int_exact(&self, k: &Int) -> Poly {
        if k.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.div_int_exact(k))).collect() }
    }

    /// Non-negative gcd of all integer components.
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(&c.re);
            if !c.im.is_zero() {
                g = g.gcd(&c.im);
            }
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].0 > b[j].0 {
                out.push(a[i].clone());
                i += 1;
            } else if a[i].0 < b[j].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let c = a[i].1.add(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, &o.terms[0].1);
        }
        if self.is_univariate() && o.is_univariate() {
            let da = self.degree_in(0) as usize;
            let db = o.degree_in(0) as usize;
            let mut acc = vec![GInt::zero(); da + db + 1];
            for (ma, ca) in &self.terms {
                let ea = exponent(*ma, 0) as usize;
                for (mb, cb) in &o.terms {
                    acc[ea + exponent(*mb, 0) as usize].add_assign(&ca.mul(cb));
                }
            }
            return Poly::from_dense(acc);
        }
        let mut acc: HashMap<Monomial, GInt> = HashMap::with_capacity(self.len() * o.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                acc.entry(ma + mb).or_default().add_assign(&ca.mul(cb));
            }
        }
        Poly::from_terms(acc.into_iter().collect())
    }

    fn mul_term(&self, m: Monomial, c: &GInt) -> Poly {
        Poly { terms: self.terms.iter().map(|(mm, cc)| (mm + m, cc.mul(c))).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let unit = 1u64 << shift(v);
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = exponent(*m, v);
            if e > 0 {
                out.push((m - unit, c.scale(&Int::from(e as i64))));
            }
        }
        Poly { terms: out }
    }

    /// Exact quotient `self / d` over `Z[i]`, or `None` when `d` does not divide.
    pub fn try_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 && d.terms[0].0 == 0 {
            let c = &d.terms[0].1;
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, cc) in &self.terms {
                out.push((*m, cc.checked_div(c)?));
            }
            return Some(Poly { terms: out });
        }
        if self.is_univariate() && d.is_univariate() {
            return self.try_div_dense(d);
        }
        let (dm, dc) = d.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            if !divides(dm, rm) {
                return None;
            }
            let qc = rc.checked_div(&dc)?;
            let qm = rm - dm;
            rem = rem.sub(&d.mul_term(qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    fn try_div_dense(&self, d: &Poly) -> Option<Poly> {
        let mut r = self.to_dense();
        let dd = d.to_dense();
        let n = r.len() - 1;
        let m = dd.len() - 1;
        if n < m {
            return None;
        }
        let lc = &dd[m];
        let mut q = vec![GInt::zero(); n - m + 1];
        for k in (0..=n - m).rev() {
            let c = &r[k + m];
            if c.is_zero() {
                continue;
            }
            let qc = c.checked_div(lc)?;
            for (j, dj) in dd.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] = r[k + j].sub(&qc.mul(dj));
                }
            }
            q[k] = qc;
        }
        if r[..m].iter().all(|c| c.is_zero()) {
            Some(Poly::from_dense(q))
        } else {
            None
        }
    }

    /// Evaluate at a complex point (one entry per variable in use).
    pub fn eval_c64(&self, y: &[Complex64]) -> Complex64 {
        if self.is_univariate() {
            let y0 = y.first().copied().unwrap_or_default();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut prev = match self.terms.first() {
                Some((m, _)) => exponent(*m, 0),
                None => return acc,
            };
            for (m, c) in &self.terms {
                let e = exponent(*m, 0);
                for _ in e..prev {
                    acc *= y0;
                }
                acc += c.to_c64();
                prev = e;
            }
            for _ in 0..prev {
                acc *= y0;
            }
            return acc;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (v, yv) in y.iter().enumerate().take(MAX_VARS) {
                let e = exponent(*m, v);
                if e > 0 {
                    t *= yv.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact value at a point of `Q(i)^n`.
    pub fn eval_exact(&self, y: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = GaussianRational::new(c.clone(), Int::ONE);
            for (v, yv) in y.iter().enumerate().take(MAX_VARS) {
                for _ in 0..exponent(*m, v) {
                    t = t.mul(yv);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute `y_v -> y_v + c` (exact Taylor shift).
    pub fn shift_var(&self, v: usize, c: &GaussianRational) -> (Poly, Int) {
        // returns (P, d) with self(y + c e_v) = P / d
        let lin = (Poly::var(v).scale_int(c.den()).add(&Poly::constant(c.num().clone())), c.den().clone());
        let deg = self.degree_in(v);
        let mut total = Poly::zero();
        for (m, cc) in &self.terms {
            let e = exponent(*m, v);
            let rest = m - ((e as u64) << shift(v));
            let p = lin.0.pow(e).scale_int(&lin.1.pow(deg - e));
            total = total.add(&p.mul_term(rest, cc));
        }
        (total, lin.1.pow(deg))
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = (0..MAX_VARS)
                .filter_map(|v| {
                    let e = exponent(*m, v);
                    let name = names.get(v).copied().unwrap_or("?");
                    match e {
                        0 => None,
                        1 => Some(name.to_string()),
                        _ => Some(format!("{name}^{e}")),
                    }
                })
                .collect();
            let coef = GaussianRational::new(c.clone(), Int::ONE);
            let (neg, body) = fmt_signed_coef(&coef);
            let mono = mono.join("*");
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&term);
        }
        s
    }
}

/// Splits a coefficient into an explicit sign and a body for printing.
pub(crate) fn fmt_signed_coef(c: &GaussianRational) -> (bool, String) {
    if c.is_real() {
        let (n, d) = c.re_parts();
        let neg = n.is_negative();
        let n = n.abs();
        let body = if d.is_one() { format!("{n}") } else { format!("{n}/{d}") };
        return (neg, body);
    }
    let (rn, _) = c.re_parts();
    if rn.is_zero() {
        let (n, d) = c.im_parts();
        let neg = n.is_negative();
        let n = n.abs();
        let body = match (n.is_one(), d.is_one()) {
            (true, true) => "i".to_string(),
            (false, true) => format!("{n}*i"),
            _ => format!("{n}/{d}*i"),
        };
        return (neg, body);
    }
    (false, format!("{c}"))
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&["y1", "y2", "y3", "y4"]))
    }
}
