use super::int::Int;
use num_complex::Complex64;
use std::fmt;

/// Gaussian integer `re + i im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GInt {
    pub re: Int,
    pub im: Int,
}

impl GInt {
    pub fn new(re: Int, im: Int) -> GInt {
        GInt { re, im }
    }

    pub fn zero() -> GInt {
        GInt::default()
    }

    pub fn one() -> GInt {
        GInt::real(Int::ONE)
    }

    pub fn i() -> GInt {
        GInt::new(Int::ZERO, Int::ONE)
    }

    pub fn real(re: Int) -> GInt {
        GInt { re, im: Int::ZERO }
    }

    pub fn from_i64(re: i64, im: i64) -> GInt {
        GInt::new(re.into(), im.into())
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    #[inline]
    pub fn add(&self, o: &GInt) -> GInt {
        GInt::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    #[inline]
    pub fn sub(&self, o: &GInt) -> GInt {
        GInt::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    #[inline]
    pub fn add_assign(&mut self, o: &GInt) {
        self.re = self.re.add(&o.re);
        if !o.im.is_zero() {
            self.im = self.im.add(&o.im);
        }
    }

    #[inline]
    pub fn mul(&self, o: &GInt) -> GInt {
        if self.im.is_zero() && o.im.is_zero() {
            return GInt::real(self.re.mul(&o.re));
        }
        if self.im.is_zero() {
            return GInt::new(self.re.mul(&o.re), self.re.mul(&o.im));
        }
        if o.im.is_zero() {
            return GInt::new(self.re.mul(&o.re), self.im.mul(&o.re));
        }
        GInt::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, k: &Int) -> GInt {
        GInt::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn neg(&self) -> GInt {
        GInt::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> GInt {
        GInt::new(self.re.clone(), self.im.neg())
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> GInt {
        GInt::new(self.im.neg(), self.re.clone())
    }

    pub fn norm(&self) -> Int {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// gcd of the integer components.
    pub fn content(&self) -> Int {
        self.re.gcd(&self.im)
    }

    pub fn div_int_exact(&self, k: &Int) -> GInt {
        GInt::new(self.re.div_exact(k), self.im.div_exact(k))
    }

    /// Exact quotient in `Z[i]`, if it exists.
    pub fn checked_div(&self, o: &GInt) -> Option<GInt> {
        if o.im.is_zero() {
            return Some(GInt::new(self.re.checked_div(&o.re)?, self.im.checked_div(&o.re)?));
        }
        let n = o.norm();
        let p = self.mul(&o.conj());
        Some(GInt::new(p.re.checked_div(&n)?, p.im.checked_div(&n)?))
    }

    /// Unit `u` with `u * self` in the half-open first quadrant.
    pub fn normalizing_unit(&self) -> GInt {
        let (r, i) = (self.re.signum(), self.im.signum());
        if r > 0 && i >= 0 {
            GInt::one()
        } else if r <= 0 && i > 0 {
            GInt::from_i64(0, -1)
        } else if r < 0 && i <= 0 {
            GInt::from_i64(-1, 0)
        } else {
            GInt::i()
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for GInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

/// Exact element of `Q(i)`, kept as `num / den` with `den > 0` and no
/// common integer factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: GInt,
    den: Int,
}

impl GaussianRational {
    pub fn new(num: GInt, den: Int) -> GaussianRational {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = GaussianRational { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = self.den.neg();
            self.num = self.num.neg();
        }
        if self.num.is_zero() {
            self.den = Int::ONE;
            return;
        }
        let g = self.num.content().gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_int_exact(&g);
            self.den = self.den.div_exact(&g);
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational { num: GInt::i(), den: Int::ONE }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational { num: GInt::from_i64(v, 0), den: Int::ONE }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(GInt::from_i64(n, 0), d.into())
    }

    pub fn from_parts(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        let re = Self::from_ratio(re_n, re_d);
        let im = Self::from_ratio(im_n, im_d);
        re.add(&im.mul(&Self::i()))
    }

    pub fn num(&self) -> &GInt {
        &self.num
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.num.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self.num.scale(&o.den).add(&o.num.scale(&self.den));
        Self::new(num, self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        GaussianRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn conj(&self) -> Self {
        GaussianRational { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        let n = self.num.norm();
        Self::new(self.num.conj().scale(&self.den), n)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Real and imaginary parts as `(num, den)` integer pairs.
    pub fn re_parts(&self) -> (Int, Int) {
        let g = self.num.re.gcd(&self.den);
        if g.is_zero() {
            return (Int::ZERO, Int::ONE);
        }
        (self.num.re.div_exact(&g), self.den.div_exact(&g))
    }

    pub fn im_parts(&self) -> (Int, Int) {
        let g = self.num.im.gcd(&self.den);
        if g.is_zero() {
            return (Int::ZERO, Int::ONE);
        }
        (self.num.im.div_exact(&g), self.den.div_exact(&g))
    }

    pub fn to_c64(&self) -> Complex64 {
        let d = self.den.to_f64();
        Complex64::new(self.num.re.to_f64() / d, self.num.im.to_f64() / d)
    }
}

fn fmt_ratio(n: &Int, d: &Int) -> String {
    if d.is_one() {
        format!("{n}")
    } else {
        format!("{n}/{d}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (rn, rd) = self.re_parts();
        let (inn, ind) = self.im_parts();
        match (rn.is_zero(), inn.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&rn, &rd)),
            (true, false) => write!(f, "{}*i", fmt_ratio(&inn, &ind)),
            (false, false) => {
                if inn.is_negative() {
                    write!(f, "({} - {}*i)", fmt_ratio(&rn, &rd), fmt_ratio(&inn.neg(), &ind))
                } else {
                    write!(f, "({} + {}*i)", fmt_ratio(&rn, &rd), fmt_ratio(&inn, &ind))
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = GaussianRational::from_parts(1, 2, 3, 4);
        let b = GaussianRational::from_parts(-2, 3, 1, 5);
        let q = a.div(&b);
        assert_eq!(q.mul(&b), a);
        assert_eq!(a.sub(&a), GaussianRational::zero());
        assert_eq!(a.mul(&a.recip()), GaussianRational::one());
        assert_eq!(GaussianRational::i().mul(&GaussianRational::i()), GaussianRational::from_int(-1));
        assert_eq!(format!("{a}"), "(1/2 + 3/4*i)");
    }

    #[test]
    fn gint_division() {
        let a = GInt::from_i64(3, 4);
        let b = GInt::from_i64(1, -2);
        let p = a.mul(&b);
        assert_eq!(p.checked_div(&b), Some(a.clone()));
        assert_eq!(GInt::from_i64(1, 0).checked_div(&GInt::from_i64(1, 1)), None);
        for z in [GInt::from_i64(2, 3), GInt::from_i64(-2, 3), GInt::from_i64(-2, -3), GInt::from_i64(2, -3), GInt::from_i64(0, 5)] {
            let w = z.normalizing_unit().mul(&z);
            assert!(w.re.signum() > 0 && w.im.signum() >= 0, "{z:?}");
        }
    }
}
