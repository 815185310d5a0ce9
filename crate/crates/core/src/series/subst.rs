use super::Series;
use crate::arith::{GaussianRational, RatFn, MAX_VARS};
use std::collections::HashMap;

type Multi = [u32; MAX_VARS];

/// Multi-indices over `dim` variables with `1 <= |a| <= maxsum`, by degree.
fn multi_indices(dim: usize, maxsum: u32) -> Vec<Multi> {
    let mut out = Vec::new();
    for total in 1..=maxsum {
        let mut cur = [0u32; MAX_VARS];
        fill(dim, 0, total, &mut cur, &mut out);
    }
    out
}

fn fill(dim: usize, v: usize, left: u32, cur: &mut Multi, out: &mut Vec<Multi>) {
    if v + 1 == dim {
        cur[v] = left;
        out.push(*cur);
        cur[v] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[v] = e;
        fill(dim, v + 1, left - e, cur, out);
    }
    cur[v] = 0;
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Cache of monomials `prod d_v^{a_v}` in a vector of series.
struct Powers<'a> {
    base: &'a [Series],
    nmax: u32,
    cache: HashMap<Multi, Series>,
}

impl<'a> Powers<'a> {
    fn new(base: &'a [Series], nmax: u32) -> Self {
        let dim = base[0].dim();
        let mut cache = HashMap::new();
        cache.insert([0; MAX_VARS], Series::constant(dim, 1));
        Powers { base, nmax, cache }
    }

    fn get(&mut self, a: &Multi) -> Series {
        if let Some(s) = self.cache.get(a) {
            return s.clone();
        }
        let v = a.iter().position(|e| *e > 0).unwrap();
        let mut prev = *a;
        prev[v] -= 1;
        let p = self.get(&prev);
        let s = p.mul(&self.base[v], self.nmax);
        self.cache.insert(*a, s.clone());
        s
    }
}

/// `exp(i * sign * d)` truncated at grading `nmax`; `d` must have no grade-zero part.
pub fn exp_i(d: &Series, sign: i64, nmax: u32) -> Series {
    assert!(d.min_grade().is_none_or(|g| g >= 1), "exponent must start at grade one");
    let id = d.map_coeffs(|_, c| c.mul_i().scale_int(sign));
    let mut acc = Series::constant(d.dim(), 1);
    let mut term = acc.clone();
    for n in 1..=nmax as i64 {
        term = term.mul(&id, nmax).scale(&GaussianRational::from_ratio(1, n));
        if term.is_zero() {
            break;
        }
        acc.add_assign(&term);
    }
    acc
}

/// Shift angles: `g(y, x + dx, t)`.
struct AngleShift {
    nmax: u32,
    plus: Vec<Series>,
    minus: Vec<Series>,
    cache: HashMap<[i16; MAX_VARS], Series>,
}

impl AngleShift {
    fn new(dx: &[Series], nmax: u32) -> Self {
        let plus = dx.iter().map(|d| exp_i(d, 1, nmax)).collect();
        let minus = dx.iter().map(|d| exp_i(d, -1, nmax)).collect();
        let mut cache = HashMap::new();
        cache.insert([0; MAX_VARS], Series::constant(dx[0].dim(), 1));
        AngleShift { nmax, plus, minus, cache }
    }

    fn factor(&mut self, k: &[i16; MAX_VARS]) -> Series {
        if let Some(s) = self.cache.get(k) {
            return s.clone();
        }
        let v = k.iter().position(|e| *e != 0).unwrap();
        let mut prev = *k;
        let step = if k[v] > 0 { &self.plus[v] } else { &self.minus[v] };
        prev[v] -= k[v].signum();
        let step = step.clone();
        let s = self.factor(&prev).mul(&step, self.nmax);
        self.cache.insert(*k, s.clone());
        s
    }

    fn apply(&mut self, g: &Series) -> Series {
        let mut groups: HashMap<[i16; MAX_VARS], Series> = HashMap::new();
        for (key, c) in g.iter() {
            groups.entry(key.k).or_insert_with(|| Series::zero(g.dim())).insert(*key, c.clone());
        }
        let mut parts = Vec::new();
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort();
        for k in keys {
            let part = &groups[&k];
            if k.iter().all(|v| *v == 0) {
                parts.push(part.clone());
            } else {
                let e = self.factor(&k);
                parts.push(part.mul(&e, self.nmax));
            }
        }
        let refs: Vec<&Series> = parts.iter().collect();
        Series::sum_all(g.dim(), &refs)
    }
}

/// Simultaneous substitution `f(y + dy, x + dx, t)` truncated at `nmax`.
///
/// Every non-zero shift component must start at grade one.
pub fn compose(f: &Series, dy: &[Series], dx: &[Series], nmax: u32) -> Series {
    let dim = f.dim();
    assert!(dy.len() == dim && dx.len() == dim, "shift dimension mismatch");
    for d in dy.iter().chain(dx.iter()) {
        assert!(d.min_grade().is_none_or(|g| g >= 1), "shift must start at grade one");
    }
    let f = f.truncate(nmax);
    if f.is_zero() {
        return f;
    }
    let has_dx = dx.iter().any(|d| !d.is_zero());
    let mut shift = if has_dx { Some(AngleShift::new(dx, nmax)) } else { None };
    let mut xs = |g: &Series| match shift.as_mut() {
        Some(s) => s.apply(g),
        None => g.clone(),
    };
    let fmin = f.min_grade().unwrap_or(0);
    let amax = nmax.saturating_sub(fmin);
    let mut parts = vec![xs(&f)];
    if dy.iter().any(|d| !d.is_zero()) && amax > 0 {
        let mut powers = Powers::new(dy, nmax);
        let mut derivs: HashMap<Multi, Series> = HashMap::new();
        derivs.insert([0; MAX_VARS], f.clone());
        for a in multi_indices(dim, amax) {
            if (0..dim).any(|v| a[v] > 0 && dy[v].is_zero()) {
                continue;
            }
            let v = a.iter().position(|e| *e > 0).unwrap();
            let mut prev = a;
            prev[v] -= 1;
            let Some(base) = derivs.get(&prev) else { continue };
            let d = base.truncate(nmax - a.iter().sum::<u32>()).dy(v);
            derivs.insert(a, d.clone());
            if d.is_zero() {
                continue;
            }
            let denom: i64 = a.iter().map(|e| factorial(*e)).product();
            let d = d.scale(&GaussianRational::from_ratio(1, denom));
            let p = powers.get(&a);
            parts.push(p.mul(&xs(&d), nmax));
        }
    }
    let refs: Vec<&Series> = parts.iter().collect();
    Series::sum_all(dim, &refs)
}

/// `h(y + dy) - h(y)` for a potential `h` with gradient `omega`.
pub fn potential_shift(omega: &[RatFn], dy: &[Series], nmax: u32) -> Series {
    let dim = omega.len();
    assert_eq!(dy.len(), dim);
    let mut powers = Powers::new(dy, nmax);
    let mut parts = Vec::new();
    for a in multi_indices(dim, nmax) {
        if (0..dim).any(|v| a[v] > 0 && dy[v].is_zero()) {
            continue;
        }
        let i = a.iter().position(|e| *e > 0).unwrap();
        let mut c = omega[i].clone();
        for (v, e) in a.iter().enumerate() {
            let e = if v == i { e - 1 } else { *e };
            for _ in 0..e {
                c = c.derivative(v);
            }
        }
        if c.is_zero() {
            continue;
        }
        let denom: i64 = a.iter().map(|e| factorial(*e)).product();
        let c = c.scale(&GaussianRational::from_ratio(1, denom));
        parts.push(powers.get(&a).mul_ratfn(&c));
    }
    let refs: Vec<&Series> = parts.iter().collect();
    Series::sum_all(dim, &refs)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_series, Names};
    use super::*;

    fn s(src: &str) -> Series {
        parse_series(src, &Names::default_for(1)).unwrap()
    }

    #[test]
    fn angle_shift_of_cosine() {
        // cos(x + eps*a) = cos x cos(eps a) - sin x sin(eps a)
        let f = s("cos(x)");
        let dx = s("eps*y");
        let got = compose(&f, &[Series::zero(1)], &[dx], 3);
        let want = s("cos(x) - eps*y*sin(x) - eps^2*y^2*cos(x)/2 + eps^3*y^3*sin(x)/6");
        assert_eq!(got, want);
    }

    #[test]
    fn action_shift_is_taylor() {
        let f = s("1/(y - 1)");
        let dy = s("eps*cos(x)");
        let got = compose(&f, &[dy], &[Series::zero(1)], 2);
        let want = s("1/(y-1) - eps*cos(x)/(y-1)^2 + eps^2*cos(x)^2/(y-1)^3");
        assert_eq!(got, want);
    }

    #[test]
    fn simultaneous_shift_matches_nested() {
        // f(y + dy(y, x), x + dx(y, x)) with both shifts oscillating
        let f = s("sin(x - t)/y");
        let dy = s("eps*cos(x)");
        let dx = s("eps*sin(x)/y");
        let got = compose(&f, &[dy.clone()], &[dx.clone()], 2);
        // expand by hand: f + f_y dy + f_x dx + f_yy dy^2/2 + f_xy dx dy + f_xx dx^2/2
        let fy = f.dy(0);
        let fx = f.dx(0);
        let n = 2;
        let want = f
            .add(&fy.mul(&dy, n))
            .add(&fx.mul(&dx, n))
            .add(&fy.dy(0).mul(&dy.mul(&dy, n), n).scale(&GaussianRational::from_ratio(1, 2)))
            .add(&fx.dy(0).mul(&dx.mul(&dy, n), n))
            .add(&fx.dx(0).mul(&dx.mul(&dx, n), n).scale(&GaussianRational::from_ratio(1, 2)));
        assert_eq!(got, want);
    }

    #[test]
    fn potential_of_linear_frequency() {
        // h = y^2/2: h(y + d) - h(y) = y d + d^2/2
        let d = s("eps*cos(x)");
        let got = potential_shift(&[RatFn::var(0)], &[d.clone()], 3);
        let want = d.mul(&s("y"), 3).add(&d.mul(&d, 3).scale(&GaussianRational::from_ratio(1, 2)));
        assert_eq!(got, want);
    }
}
