mod common;

use common::*;
use dissform::series::{parse_series, HomologicalError, Names};
use dissform::transform::{compose_vec, DriftConvention};
use dissform::{build_normal_form, build_normal_form_with, RatFn, Series, TransformError, VectorFieldSpec};

// Reference forms of these do not solve their own homological equations; the
// residual tests below cover them instead.
const E19_DIFFERENT: [&str; 1] = ["alpha02"];
const OSC_DIFFERENT: [&str; 4] = ["beta02", "beta11", "alpha11", "normal form X'"];

fn assert_items(items: Vec<Item>, skip: &[&str]) {
    for it in items.iter().filter(|it| !skip.contains(&it.name)) {
        assert!(it.matches(), "{} differs", it.name);
    }
}

#[test]
fn e19_order_two_closed_forms() {
    let p = problem("e19");
    assert_items(e19_items(&build_normal_form(&p.spec, 2, 20).unwrap()), &E19_DIFFERENT);
}

#[test]
fn oscillating_order_two_closed_forms() {
    let p = problem("oscillating");
    assert_items(oscillating_items(&build_normal_form(&p.spec, 2, 20).unwrap()), &OSC_DIFFERENT);
}

fn residual_vanishes(name: &str, n: u32, k: u32) {
    let p = problem(name);
    let nf = build_normal_form(&p.spec, n, k).unwrap();
    let low = nf.field[0].truncate(n).low_modes(k);
    assert!(low.is_zero(), "{name} N={n}: {} low terms left in Y'", low.len());
    assert!(nf.field[1].truncate(n).low_modes(k).oscillating().is_zero());
}

#[test]
fn action_equation_is_normalized_up_to_order_three() {
    for name in ["e19", "oscillating"] {
        for n in 1..=3 {
            residual_vanishes(name, n, 20);
        }
    }
}

#[test]
fn small_cutoff_leaves_only_high_modes() {
    residual_vanishes("e19", 3, 2);
    let nf = build_normal_form(&problem("e19").spec, 3, 2).unwrap();
    assert!(!nf.g_high[0].is_zero());
    assert!(nf.g_high[0].iter().all(|(k, _)| k.mode().order() > 2));
}

#[test]
fn drift_is_action_only() {
    for name in ["e19", "oscillating"] {
        let nf = build_normal_form(&problem(name).spec, 3, 20).unwrap();
        for s in nf.eta_series().iter().chain(nf.drift_in_original().iter()) {
            assert!(s.iter().all(|(k, _)| k.mode().is_zero()));
        }
    }
}

#[test]
fn both_drift_conventions_normalize() {
    let p = problem("e19");
    for conv in [DriftConvention::OriginalAction, DriftConvention::NormalAction] {
        let nf = build_normal_form_with(&p.spec, 2, 20, conv).unwrap();
        assert!(nf.field[0].truncate(2).low_modes(20).is_zero());
        assert_eq!(nf.eta(0, 1)[0], RatFn::var(0));
    }
}

#[test]
fn conservative_change_inverts() {
    let n = 3;
    let nf = build_normal_form(&problem("e19").spec, n, 20).unwrap();
    let back = compose_vec(&nf.gamma, &nf.xi_c, n);
    for (a, b) in nf.xi_c.iter().zip(&back) {
        assert!(a.add(b).truncate(n).is_zero());
    }
}

#[test]
fn action_map_inverts() {
    let n = 3;
    let nf = build_normal_form(&problem("oscillating").spec, n, 20).unwrap();
    let shift: Vec<Series> = nf.phi_y.iter().chain(nf.phi_x.iter()).cloned().collect();
    let t_at = compose_vec(&nf.t_map, &shift, n);
    assert!(nf.phi_y[0].add(&t_at[0]).truncate(n).is_zero());
}

#[test]
fn maps_are_near_identity_in_their_parameter() {
    let nf = build_normal_form(&problem("e19").spec, 3, 20).unwrap();
    for s in nf.phi_y.iter().chain(&nf.phi_x).chain(&nf.t_map) {
        assert!(s.min_grade().is_none_or(|g| g >= 1));
    }
    for s in &nf.xi_c {
        assert!(s.iter().all(|(k, _)| k.j >= 1 && k.p == 0));
    }
    for v in nf.dissipative.alpha.values().chain(nf.dissipative.beta.values()) {
        assert!(v.iter().all(|s| s.iter().all(|(k, _)| k.p >= 1)));
    }
}

#[test]
fn unperturbed_system_gives_identity() {
    let zero = Series::zero(1);
    let spec = VectorFieldSpec::new(vec![RatFn::var(0)], zero.clone(), vec![zero.clone()], vec![zero]).unwrap();
    let nf = build_normal_form(&spec, 3, 10).unwrap();
    assert!(nf.phi_y[0].is_zero() && nf.phi_x[0].is_zero() && nf.t_map[0].is_zero());
    assert_eq!(nf.omega_d[0], Series::from_ratfn(1, RatFn::var(0)));
}

#[test]
fn constant_frequency_hits_exact_resonance() {
    let n = Names::default_for(1);
    let spec = VectorFieldSpec::new(
        vec![RatFn::from_int(1)],
        parse_series("cos(x - t)", &n).unwrap(),
        vec![Series::zero(1)],
        vec![Series::zero(1)],
    )
    .unwrap();
    match build_normal_form(&spec, 1, 5) {
        Err(TransformError::Homological(HomologicalError::ExactResonance { .. })) => {}
        other => panic!("expected a resonance, got {:?}", other.map(|nf| nf.order)),
    }
}
