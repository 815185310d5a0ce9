use super::factor::{self, FactorId};
use super::gauss::{GInt, GaussianRational};
use super::int::Int;
use super::poly::Poly;
use num_complex::Complex64;
use smallvec::SmallVec;
use std::fmt;

pub type Factors = SmallVec<[(FactorId, u32); 4]>;

/// Exact rational function of the action variables over `Q(i)`.
///
/// Stored as `num / (den * prod f^e)` with `den > 0`, the `f` interned
/// irreducible factors sorted by id, no factor dividing `num` and no integer
/// common to `den` and every coefficient of `num`.
#[derive(Clone, Eq)]
pub struct RatFn {
    num: Poly,
    den: Int,
    fac: Factors,
}

pub type ActionRational = RatFn;

fn merge_max(a: &Factors, b: &Factors) -> Factors {
    let mut out = Factors::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1.max(b[j].1)));
            i += 1;
            j += 1;
        }
    }
    out
}

fn merge_add(a: &Factors, b: &Factors) -> Factors {
    let mut out = Factors::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Polynomial `prod f^(target - have)` for `have` a sub-multiset of `target`.
fn cofactor(target: &Factors, have: &Factors) -> Poly {
    let mut p = Poly::one();
    let mut j = 0;
    for (id, e) in target {
        let mut h = 0;
        while j < have.len() && have[j].0 < *id {
            j += 1;
        }
        if j < have.len() && have[j].0 == *id {
            h = have[j].1;
        }
        if *e > h {
            p = p.mul(&factor::power(*id, e - h));
        }
    }
    p
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Int::ONE, fac: Factors::new() }
    }

    pub fn one() -> RatFn {
        RatFn::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Int::ONE, fac: Factors::new() }
    }

    pub fn from_int(v: i64) -> RatFn {
        RatFn::from_poly(Poly::constant(GInt::from_i64(v, 0)))
    }

    pub fn constant(c: &GaussianRational) -> RatFn {
        RatFn { num: Poly::constant(c.num().clone()), den: c.den().clone(), fac: Factors::new() }
    }

    /// The action variable `y_v`.
    pub fn var(v: usize) -> RatFn {
        RatFn::from_poly(Poly::var(v))
    }

    /// `num / den` with `den` an arbitrary non-zero polynomial.
    pub fn from_quotient(num: Poly, den: &Poly) -> RatFn {
        let (c, fac) = factor::factorize(den);
        // 1/c = conj(c)/|c|^2
        let n = c.norm();
        RatFn::build(num.scale(&c.conj()), n, fac.into_iter().collect())
    }

    /// Canonicalise an arbitrary triple.
    pub fn build(mut num: Poly, mut den: Int, fac: Factors) -> RatFn {
        if num.is_zero() {
            return RatFn::zero();
        }
        if den.is_negative() {
            den = den.neg();
            num = num.neg();
        }
        let mut kept = Factors::new();
        for (id, e) in fac {
            if e == 0 {
                continue;
            }
            let f = factor::poly(id);
            let mut left = e;
            while left > 0 {
                match num.try_div(&f) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                kept.push((id, left));
            }
        }
        if !den.is_one() {
            let g = num.content().gcd(&den);
            if !g.is_one() {
                num = num.div_int_exact(&g);
                den = den.div_exact(&g);
            }
        }
        RatFn { num, den, fac: kept }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_int(&self) -> &Int {
        &self.den
    }

    pub fn factors(&self) -> &Factors {
        &self.fac
    }

    /// Expanded denominator `den * prod f^e`.
    pub fn den_poly(&self) -> Poly {
        cofactor(&self.fac, &Factors::new()).scale_int(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.fac.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.fac.is_empty() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(GaussianRational::new(self.num.constant_term(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone(), fac: self.fac.clone() }
    }

    pub fn conj(&self) -> RatFn {
        if self.fac.is_empty() {
            return RatFn { num: self.num.conj(), den: self.den.clone(), fac: Factors::new() };
        }
        let mut num = self.num.conj();
        let mut fac = Factors::new();
        let mut scale = GInt::one();
        for (id, e) in &self.fac {
            // conj(f) = c * f'
            let (c, cid) = factor::conj(*id);
            for _ in 0..*e {
                scale = scale.mul(&c);
            }
            fac.push((cid, *e));
        }
        fac.sort();
        // 1/scale = conj(scale)/|scale|^2, and |scale| = 1 for primitive factors
        let n = scale.norm();
        num = num.scale(&scale.conj());
        RatFn::build(num, self.den.mul(&n), fac)
    }

    pub fn scale(&self, c: &GaussianRational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn::build(self.num.scale(c.num()), self.den.mul(c.den()), self.fac.clone())
    }

    /// Multiply by an integer (no re-canonicalisation needed beyond content).
    pub fn scale_int(&self, k: i64) -> RatFn {
        self.scale(&GaussianRational::from_int(k))
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> RatFn {
        RatFn {
            num: self.num.scale(&GInt::i()),
            den: self.den.clone(),
            fac: self.fac.clone(),
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.fac == o.fac && self.den == o.den {
            return RatFn::build(self.num.add(&o.num), self.den.clone(), self.fac.clone());
        }
        RatFn::sum([self, o])
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    /// Sum of many terms over a single common denominator.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatFn>>(items: I) -> RatFn {
        let items: Vec<&RatFn> = items.into_iter().filter(|r| !r.is_zero()).collect();
        match items.len() {
            0 => return RatFn::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        let mut fac = Factors::new();
        let mut den = Int::ONE;
        for r in &items {
            fac = merge_max(&fac, &r.fac);
            if !r.den.is_one() {
                let g = den.gcd(&r.den);
                den = den.mul(&r.den.div_exact(&g));
            }
        }
        let mut num = Poly::zero();
        for r in &items {
            let mut t = r.num.scale_int(&den.div_exact(&r.den));
            if r.fac != fac {
                t = t.mul(&cofactor(&fac, &r.fac));
            }
            num = num.add(&t);
        }
        RatFn::build(num, den, fac)
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if o.fac.is_empty() && self.fac.is_empty() {
            return RatFn::build(self.num.mul(&o.num), self.den.mul(&o.den), Factors::new());
        }
        // cancel each numerator against the other denominator first
        let a = RatFn::build(self.num.clone(), Int::ONE, o.fac.clone());
        let b = RatFn::build(o.num.clone(), Int::ONE, self.fac.clone());
        let fac = merge_add(&a.fac, &b.fac);
        RatFn::build(a.num.mul(&b.num), self.den.mul(&o.den), fac)
    }

    /// Product without cancellation; the result is valid but may not be
    /// canonical until passed through [`RatFn::sum`] or [`RatFn::build`].
    pub fn mul_raw(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.mul(&o.num), den: self.den.mul(&o.den), fac: merge_add(&self.fac, &o.fac) }
    }

    pub fn canonical(self) -> RatFn {
        RatFn::build(self.num, self.den, self.fac)
    }

    pub fn pow(&self, e: u32) -> RatFn {
        let fac = self.fac.iter().map(|(id, k)| (*id, k * e)).collect();
        RatFn { num: self.num.pow(e), den: self.den.pow(e), fac }
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> RatFn {
        assert!(!self.is_zero(), "reciprocal of zero");
        let (c, nf) = factor::factorize(&self.num);
        let num = self.den_poly().scale(&c.conj());
        RatFn::build(num, c.norm(), nf.into_iter().collect())
    }

    pub fn div(&self, o: &RatFn) -> RatFn {
        self.mul(&o.recip())
    }

    /// Partial derivative in `y_v`.
    pub fn derivative(&self, v: usize) -> RatFn {
        if self.fac.is_empty() {
            return RatFn::build(self.num.derivative(v), self.den.clone(), Factors::new());
        }
        // d(P/F) = (P' G - P sum e_i f_i' G/f_i) / (F G), G = prod f_i
        let mut g = Poly::one();
        for (id, _) in &self.fac {
            g = g.mul(&factor::poly(*id));
        }
        let mut num = self.num.derivative(v).mul(&g);
        for (id, e) in &self.fac {
            let f = factor::poly(*id);
            let df = f.derivative(v);
            if df.is_zero() {
                continue;
            }
            let g_over_f = g.try_div(&f).expect("factor divides product");
            let t = self.num.mul(&df).mul(&g_over_f).scale_int(&Int::from(*e as i64));
            num = num.sub(&t);
        }
        let fac = self.fac.iter().map(|(id, e)| (*id, e + 1)).collect();
        RatFn::build(num, self.den.clone(), fac)
    }

    pub fn eval_c64(&self, y: &[Complex64]) -> Complex64 {
        let mut d = Complex64::new(self.den.to_f64(), 0.0);
        for (id, e) in &self.fac {
            d *= factor::eval(*id, y).powu(*e);
        }
        self.num.eval_c64(y) / d
    }

    /// Exact value; `None` at a pole.
    pub fn eval_exact(&self, y: &[GaussianRational]) -> Option<GaussianRational> {
        let mut d = GaussianRational::new(GInt::real(self.den.clone()), Int::ONE);
        for (id, e) in &self.fac {
            let v = factor::poly(*id).eval_exact(y);
            for _ in 0..*e {
                d = d.mul(&v);
            }
        }
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_exact(y).div(&d))
    }

    /// Numeric roots of the denominator (univariate factors only).
    pub fn poles(&self) -> Vec<Complex64> {
        self.fac.iter().flat_map(|(id, _)| factor::roots(*id)).collect()
    }

    pub fn num_degree(&self) -> u32 {
        self.num.total_degree()
    }

    pub fn den_degree(&self) -> u32 {
        self.fac.iter().map(|(id, e)| factor::poly(*id).total_degree() * e).sum()
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        let num = self.num.fmt_with(names);
        if self.fac.is_empty() && self.den.is_one() {
            return num;
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.den.is_one() {
            parts.push(format!("{}", self.den));
        }
        for (id, e) in &self.fac {
            let f = factor::poly(*id);
            let s = f.fmt_with(names);
            let s = if f.len() > 1 || s.contains('*') && *e > 1 { format!("({s})") } else { s };
            if *e == 1 {
                parts.push(s);
            } else {
                parts.push(format!("{s}^{e}"));
            }
        }
        let den = parts.join("*");
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        let den = if parts.len() > 1 { format!("({den})") } else { den };
        format!("{num}/{den}")
    }
}

impl PartialEq for RatFn {
    fn eq(&self, o: &RatFn) -> bool {
        if self.fac == o.fac && self.den == o.den {
            return self.num == o.num;
        }
        self.sub(o).is_zero()
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&["y", "y2", "y3", "y4"]))
    }
}

impl Default for RatFn {
    fn default() -> RatFn {
        RatFn::zero()
    }
}
