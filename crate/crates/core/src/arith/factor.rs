//! Interned irreducible denominator factors.
//!
//! Every denominator in the crate is a product of powers of factors kept in a
//! process-wide registry. A factor is a primitive polynomial over `Z[i]` whose
//! leading coefficient lies in the first quadrant, so two factors with the
//! same id are equal and distinct ids are non-associated.

use super::gauss::{GInt, GaussianRational};
use super::int::Int;
use super::poly::{exponent, Poly};
use super::roots::poly_roots;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

pub type FactorId = u32;

struct Entry {
    poly: Arc<Poly>,
    roots: Vec<Complex64>,
    powers: Vec<Arc<Poly>>,
}

#[derive(Default)]
struct Registry {
    entries: Vec<Entry>,
    index: HashMap<Poly, FactorId>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(Registry::default()))
}

/// Primitive, unit-normalised associate of `p` together with the constant
/// `c` such that `p = c * normalised`.
pub fn normalize(p: &Poly) -> (GInt, Poly) {
    let content = p.content();
    let prim = p.div_int_exact(&content);
    let unit = prim.leading().map(|(_, c)| c.normalizing_unit()).unwrap_or_else(GInt::one);
    let normed = prim.scale(&unit);
    // p = content * unit^-1 * normed and unit^-1 = conj(unit)
    (unit.conj().scale(&content), normed)
}

/// Register an already normalised factor.
pub fn intern(p: Poly) -> FactorId {
    if let Some(id) = registry().read().unwrap().index.get(&p) {
        return *id;
    }
    let mut reg = registry().write().unwrap();
    if let Some(id) = reg.index.get(&p) {
        return *id;
    }
    let roots = if p.is_univariate() {
        let c: Vec<Complex64> = p.to_dense().iter().map(|v| v.to_c64()).collect();
        poly_roots(&c)
    } else {
        Vec::new()
    };
    let id = reg.entries.len() as FactorId;
    let arc = Arc::new(p.clone());
    reg.entries.push(Entry { poly: arc.clone(), roots, powers: vec![Arc::new(Poly::one()), arc] });
    reg.index.insert(p, id);
    id
}

pub fn poly(id: FactorId) -> Arc<Poly> {
    registry().read().unwrap().entries[id as usize].poly.clone()
}

/// Numeric roots of a univariate factor (empty for multivariate ones).
pub fn roots(id: FactorId) -> Vec<Complex64> {
    registry().read().unwrap().entries[id as usize].roots.clone()
}

/// `f^e` as an expanded polynomial, cached.
pub fn power(id: FactorId, e: u32) -> Arc<Poly> {
    {
        let reg = registry().read().unwrap();
        if let Some(p) = reg.entries[id as usize].powers.get(e as usize) {
            return p.clone();
        }
    }
    let mut reg = registry().write().unwrap();
    let entry = &mut reg.entries[id as usize];
    while entry.powers.len() <= e as usize {
        let next = entry.powers.last().unwrap().mul(&entry.poly);
        entry.powers.push(Arc::new(next));
    }
    entry.powers[e as usize].clone()
}

/// Factor id of the complex conjugate factor.
pub fn conj(id: FactorId) -> (GInt, FactorId) {
    let p = poly(id);
    let (c, n) = normalize(&p.conj());
    (c, intern(n))
}

/// Split `p` into a constant and powers of registered factors.
///
/// Univariate linear factors over `Q(i)` are found exactly; whatever is left
/// after removing them is registered as one factor. Multivariate input is
/// first divided by already registered factors.
pub fn factorize(p: &Poly) -> (GInt, Vec<(FactorId, u32)>) {
    assert!(!p.is_zero(), "factorize(0)");
    let (mut unit, mut rest) = normalize(p);
    let mut out: Vec<(FactorId, u32)> = Vec::new();
    let push = |id: FactorId, out: &mut Vec<(FactorId, u32)>| match out.iter_mut().find(|(f, _)| *f == id) {
        Some((_, e)) => *e += 1,
        None => out.push((id, 1)),
    };
    if rest.is_constant() {
        return (unit.mul(&rest.constant_term()), out);
    }
    if rest.is_univariate() {
        // powers of y
        let low = rest.terms().iter().map(|(m, _)| exponent(*m, 0)).min().unwrap_or(0);
        if low > 0 {
            let y = intern(Poly::var(0));
            for _ in 0..low {
                rest = rest.try_div(&Poly::var(0)).expect("monomial divides");
                push(y, &mut out);
            }
        }
        loop {
            if rest.is_constant() || rest.degree_in(0) == 1 {
                break;
            }
            let Some(lin) = find_linear_factor(&rest) else { break };
            let (_, lin) = normalize(&lin);
            let id = intern(lin.clone());
            while let Some(q) = rest.try_div(&lin) {
                rest = q;
                push(id, &mut out);
            }
        }
    } else {
        let known: Vec<(FactorId, Arc<Poly>)> = {
            let reg = registry().read().unwrap();
            reg.entries.iter().enumerate().map(|(i, e)| (i as FactorId, e.poly.clone())).collect()
        };
        for (id, f) in known {
            if f.total_degree() > rest.total_degree() {
                continue;
            }
            while let Some(q) = rest.try_div(&f) {
                rest = q;
                push(id, &mut out);
            }
        }
    }
    if !rest.is_constant() {
        let (c, n) = normalize(&rest);
        unit = unit.mul(&c);
        push(intern(n), &mut out);
    } else {
        unit = unit.mul(&rest.constant_term());
    }
    out.sort();
    (unit, out)
}

/// A factor `q y - p` of a univariate primitive polynomial, if one exists.
fn find_linear_factor(p: &Poly) -> Option<Poly> {
    let dense = p.to_dense();
    let c: Vec<Complex64> = dense.iter().map(|v| v.to_c64()).collect();
    let lc = dense.last()?.clone();
    let lcf = lc.to_c64();
    for z in poly_roots(&c) {
        // a root p/q in lowest terms has q | lc, so lc * root is a Gaussian integer
        let w = z * lcf;
        if !w.re.is_finite() || !w.im.is_finite() || w.norm() > 1e30 {
            continue;
        }
        let g = GInt::new(Int::from(w.re.round() as i128), Int::from(w.im.round() as i128));
        let cand = GaussianRational::new(g, Int::ONE).div(&GaussianRational::new(lc.clone(), Int::ONE));
        if p.eval_exact(std::slice::from_ref(&cand)).is_zero() {
            let lin = Poly::var(0).scale_int(cand.den()).sub(&Poly::constant(cand.num().clone()));
            return Some(lin);
        }
    }
    None
}

/// Numeric value of `f` at a complex point.
pub fn eval(id: FactorId, y: &[Complex64]) -> Complex64 {
    poly(id).eval_c64(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(a: i64, b: i64) -> Poly {
        Poly::var(0).scale(&GInt::from_i64(a, 0)).add(&Poly::constant(GInt::from_i64(b, 0)))
    }

    #[test]
    fn factorize_products_of_linears() {
        // 6 (y - 1)^2 (2y - 1) y
        let p = lin(1, -1).pow(2).mul(&lin(2, -1)).mul(&Poly::var(0)).scale(&GInt::from_i64(6, 0));
        let (c, f) = factorize(&p);
        let mut back = Poly::constant(c);
        for (id, e) in &f {
            back = back.mul(&power(*id, *e));
        }
        assert_eq!(back, p);
        assert_eq!(f.iter().map(|(_, e)| *e).sum::<u32>(), 4);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn gaussian_roots_and_conjugates() {
        // y^2 + 1 = (y - i)(y + i)
        let p = Poly::var(0).pow(2).add(&Poly::one());
        let (_, f) = factorize(&p);
        assert_eq!(f.len(), 2);
        let (_, c0) = conj(f[0].0);
        assert_eq!(c0, f[1].0);
        // y^2 - 2 is irreducible over Q(i)
        let q = Poly::var(0).pow(2).sub(&Poly::constant(GInt::from_i64(2, 0)));
        let (_, g) = factorize(&q);
        assert_eq!(g, vec![(g[0].0, 1)]);
    }

    #[test]
    fn normalization_is_unit_invariant() {
        let p = lin(2, -3);
        for u in [GInt::from_i64(1, 0), GInt::from_i64(0, 1), GInt::from_i64(-1, 0), GInt::from_i64(0, -1)] {
            let (_, n) = normalize(&p.scale(&u).scale(&GInt::from_i64(5, 0)));
            assert_eq!(n, lin(2, -3));
        }
    }
}
