mod common;

use common::*;
use dissform::bounds::{check_conditions_at, nonres_constant, stability_constants, NonresDomain, StabilityMode};
use dissform::{build_normal_form, BoundsError, RatFn};
use proptest::prelude::*;

/// Direct enumeration of `|k y0 + m|` over `0 < |k| + |m| <= order`.
fn brute_force(y0: f64, order: i64) -> f64 {
    let mut best = f64::INFINITY;
    for k in -order..=order {
        for m in -order..=order {
            if (k, m) != (0, 0) && k.abs() + m.abs() <= order {
                best = best.min((k as f64 * y0 + m as f64).abs());
            }
        }
    }
    best
}

fn nonres(y0: f64, r0: f64, k: u32, d: NonresDomain) -> f64 {
    match nonres_constant(&[RatFn::var(0)], &[y0], r0, k, d) {
        Ok(v) => v,
        Err(BoundsError::ResonantDomain { .. }) => 0.0,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn golden_mean_nonresonance_constant() {
    let y0 = (5f64.sqrt() + 1.0) / 2.0;
    let a = nonres(y0, 0.1, 20, NonresDomain::Point);
    assert_eq!(a, brute_force(y0, 20));
    assert!((a - 0.09).abs() <= 0.005, "a = {a}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn point_constant_matches_enumeration(y0 in 0.1f64..3.0, k in 1u32..15) {
        let ours = nonres(y0, 0.1, k, NonresDomain::Point);
        let oracle = brute_force(y0, k as i64);
        prop_assert!(ours == oracle || (oracle <= 1e-12 && ours == 0.0));
    }

    #[test]
    fn nonresonance_shrinks_with_order_and_radius(y0 in 1.1f64..2.5, r0 in 0.001f64..0.05, dr in 0.0f64..0.05, k in 1u32..8) {
        let base = nonres(y0, r0, k, NonresDomain::Disc);
        prop_assert!(nonres(y0, r0, k + 1, NonresDomain::Disc) <= base + 1e-12);
        prop_assert!(nonres(y0, r0 + dr, k, NonresDomain::Disc) <= base + 1e-12);
    }
}

#[test]
fn stability_report_identities() {
    let p = problem("e19");
    let d = p.domain().unwrap();
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    let r = stability_constants(d, &nf, StabilityMode::FixK(20)).unwrap();
    let rel = |a: f64, b: f64| ((a - b) / b).abs() < 1e-12;
    assert!(rel(r.t0, r.c_t * (r.modes as f64 * r.tau0).exp()));
    assert!(rel(r.rho0, 2.0 * r.c_p * r.lambda0 + r.r2 * r.lambda0));
    assert!(rel(r.c_t * r.c_y, r.r2));
    assert!(rel(r.r1, r.c_p * r.lambda0));
    assert!(rel(r.tau0, 2.0 * 2e-4f64.ln().abs() / 20.0));
}

#[test]
fn mismatched_cutoff_is_rejected() {
    let p = problem("e19");
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    assert!(stability_constants(p.domain().unwrap(), &nf, StabilityMode::FixTau(2.0)).is_err());
}

#[test]
fn e19_condition_values() {
    let p = problem("e19");
    let d = p.domain().unwrap();
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    let rep = check_conditions_at(d, &nf, d.eps0, d.mu0).unwrap();
    let cap = |name: &str| rep.get(name).unwrap().eps_cap.unwrap();
    assert!((cap("33ter") - 1.108e-4).abs() < 1e-6);
    assert!((cap("C6") - 7.79e-4).abs() < 1e-5);
    assert!((rep.get("C4").unwrap().mu_cap.unwrap() - 1.119e-4).abs() < 1e-6);
    assert!(rep.get("C5").unwrap().pass);
}

#[test]
fn zero_perturbation_passes_everything() {
    let p = problem("e19");
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    assert!(check_conditions_at(p.domain().unwrap(), &nf, 0.0, 0.0).unwrap().all_pass);
}

#[test]
fn shrinking_parameters_keeps_passing_conditions() {
    let p = problem("e19");
    let d = p.domain().unwrap();
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    let grid = [1e-6, 3e-5, 1e-4, 3e-4, 1e-3];
    for &e in &grid {
        for &m in &grid {
            let big = check_conditions_at(d, &nf, e, m).unwrap();
            let small = check_conditions_at(d, &nf, e / 3.0, m / 3.0).unwrap();
            for (b, s) in big.conditions.iter().zip(&small.conditions) {
                assert!(!b.pass || s.pass, "{} at eps {e}, mu {m}", b.name);
            }
        }
    }
}
