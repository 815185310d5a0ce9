//! Near-identity coordinate changes acting on vector fields.
//!
//! State vectors are ordered `(y_1..y_l, x_1..x_l)`; a shift `phi` of length
//! `2l` describes the map `z = z' + phi(z', t)`.

use crate::series::{compose, Series};
use rayon::prelude::*;

/// `d phi_a / d z_b`.
pub fn jacobian(phi: &[Series]) -> Vec<Vec<Series>> {
    let dim = phi.len() / 2;
    phi.iter()
        .map(|f| (0..2 * dim).map(|b| if b < dim { f.dy(b) } else { f.dx(b - dim) }).collect())
        .collect()
}

/// Solve `(I + J) w = u` for `J` without grade-zero part.
pub fn solve_identity_plus(jac: &[Vec<Series>], u: &[Series], nmax: u32) -> Vec<Series> {
    let mut w: Vec<Series> = u.iter().map(|s| s.truncate(nmax)).collect();
    if jac.iter().flatten().all(|s| s.is_zero()) {
        return w;
    }
    for _ in 0..nmax {
        let next: Vec<Series> = (0..u.len())
            .into_par_iter()
            .map(|a| {
                let mut parts = vec![u[a].truncate(nmax)];
                for (b, wb) in w.iter().enumerate() {
                    if !jac[a][b].is_zero() && !wb.is_zero() {
                        parts.push(jac[a][b].mul(wb, nmax).neg());
                    }
                }
                let refs: Vec<&Series> = parts.iter().collect();
                Series::sum_all(u[a].dim(), &refs)
            })
            .collect();
        if next == w {
            break;
        }
        w = next;
    }
    w
}

/// Compose every component with `z -> z + phi`.
pub fn compose_vec(fs: &[Series], phi: &[Series], nmax: u32) -> Vec<Series> {
    let dim = phi.len() / 2;
    let (dy, dx) = phi.split_at(dim);
    fs.par_iter().map(|f| compose(f, dy, dx, nmax)).collect()
}

/// The field `v` written in coordinates `z'` with `z = z' + phi(z', t)`:
/// `(I + D phi)^{-1} (v o (id + phi) - phi_t)`.
pub fn push_field(v: &[Series], phi: &[Series], nmax: u32) -> Vec<Series> {
    let mut u = compose_vec(v, phi, nmax);
    for (ua, pa) in u.iter_mut().zip(phi.iter()) {
        *ua = ua.sub(&pa.dt().truncate(nmax));
    }
    solve_identity_plus(&jacobian(phi), &u, nmax)
}

/// Shift `delta` of the inverse of `z' = z + xi(z, t)`, so that
/// `z = z' + delta(z', t)` up to grading `nmax`.
pub fn invert_near_identity(xi: &[Series], nmax: u32) -> Vec<Series> {
    let mut delta: Vec<Series> = xi.iter().map(|s| s.truncate(nmax).neg()).collect();
    if delta.iter().all(|s| s.is_zero()) {
        return delta;
    }
    for _ in 0..nmax {
        let next: Vec<Series> = compose_vec(xi, &delta, nmax).into_iter().map(|s| s.neg()).collect();
        if next == delta {
            break;
        }
        delta = next;
    }
    delta
}

/// Truncate every component.
pub fn truncate_vec(v: &[Series], nmax: u32) -> Vec<Series> {
    v.iter().map(|s| s.truncate(nmax)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{parse_series, Names};

    fn s(src: &str) -> Series {
        parse_series(src, &Names::default_for(1)).unwrap()
    }

    #[test]
    fn inverse_of_zero_shift_is_zero() {
        let z = Series::zero(1);
        let d = invert_near_identity(&[z.clone(), z.clone()], 4);
        assert!(d.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn inverse_round_trip() {
        let xi = vec![s("eps*cos(x - t)/(y - 1) + mu*sin(x)"), s("eps*sin(x)/y + mu*eps*cos(2*x)")];
        let n = 4;
        let delta = invert_near_identity(&xi, n);
        // z' + delta(z') + xi(z' + delta(z')) = z'
        let back = compose_vec(&xi, &delta, n);
        for (d, b) in delta.iter().zip(back.iter()) {
            assert!(d.add(b).is_zero());
        }
    }

    #[test]
    fn x_independent_shift_inverts_to_negative_at_first_order() {
        let xi = vec![s("eps*cos(t)"), Series::zero(1)];
        let delta = invert_near_identity(&xi, 3);
        assert_eq!(delta[0], s("-eps*cos(t)"));
    }

    #[test]
    fn push_of_translation_in_time() {
        // y = y' + eps*sin(t): y' dot = y dot - eps*cos(t)
        let v = vec![s("mu*y"), s("y")];
        let phi = vec![s("eps*sin(t)"), Series::zero(1)];
        let w = push_field(&v, &phi, 3);
        assert_eq!(w[0], s("mu*y + mu*eps*sin(t) - eps*cos(t)"));
        assert_eq!(w[1], s("y + eps*sin(t)"));
    }
}
