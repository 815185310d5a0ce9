mod common;

use common::*;
use dissform::dynamics::*;
use dissform::{build_normal_form, DynamicsError};

fn golden() -> f64 {
    (5f64.sqrt() + 1.0) / 2.0
}

#[test]
fn error_decreases_with_order() {
    let p = problem("e19");
    let nfs: Vec<_> = [1, 3].iter().map(|&n| build_normal_form(&p.spec, n, 20).unwrap()).collect();
    let s0 = State::new(0.0, vec![golden()], vec![0.0]);
    let c = error_curves(&p.spec, &nfs, &s0, 1e-3, 1e-3, 1e-2, 500.0, 100).unwrap();
    assert_eq!(c.err.len(), c.trajectory.samples.len());
    assert!(c.strictly_ordered());
    assert!(c.err.last().unwrap()[1] < 1e-9);
}

#[test]
fn transforms_round_trip() {
    let p = problem("e19");
    let nf = build_normal_form(&p.spec, 3, 20).unwrap();
    let s = State::new(0.7, vec![1.55], vec![2.0]);
    let n = forward_transform(&nf, &s, 1e-3, 1e-3).unwrap();
    let back = back_transform(&nf, &n, 1e-3, 1e-3).unwrap();
    assert!((back.y[0] - s.y[0]).abs() < 1e-14 && (back.x[0] - s.x[0]).abs() < 1e-14);
    let a = AnalyticSolution::through(&nf, &s, 1e-3, 1e-3).unwrap();
    assert!(err(&a.original(0.7), &s) < 1e-14);
}

#[test]
fn integrable_limit_keeps_the_action() {
    let p = problem("e19");
    let sys = NumericSystem::new(&p.spec, &[], 0.0, 0.0).unwrap();
    let tr = rk4(&sys, &State::new(0.0, vec![golden()], vec![0.0]), 1e-2, 1e4, 100).unwrap();
    assert!(drift_measure(&tr) < 1e-10);
    assert!((tr.last().x[0] - golden() * 1e4).abs() < 1e-8);
}

#[test]
fn pole_stops_the_integration() {
    let p = problem("e19");
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    let sys = NumericSystem::new(&p.spec, &nf.drift_in_original(), 1e-3, 1e-3).unwrap();
    let r = rk4(&sys, &State::new(0.0, vec![1.0], vec![0.0]), 1e-2, 1.0, 1);
    assert!(matches!(r, Err(DynamicsError::PoleEncountered { .. })));
}

#[test]
fn oscillating_energy_has_period_and_no_trend() {
    let p = problem("oscillating");
    let nf = build_normal_form(&p.spec, 2, 20).unwrap();
    let eta = nf.drift_in_original();
    let sys = NumericSystem::new(&p.spec, &eta, 1e-3, 1e-3).unwrap();
    let tr = rk4(&sys, &State::new(0.0, vec![golden()], vec![0.0]), 1e-2, 2000.0, 1).unwrap();
    let model = EnergyModel::new(&p.spec, p.h0.as_ref().unwrap(), &eta, 1e-3, 1e-3).unwrap();
    let e = energy_track(&model, &tr);
    let period = e.extended_period.unwrap();
    assert!((period - 3.86).abs() / 3.86 < 0.02, "period {period}");
    assert!(e.slope.abs() < 1e-8);
    assert!(e.rate_rel_err.unwrap() < 1e-3);
}

#[test]
fn energy_needs_a_matching_integrable_part() {
    let p = problem("oscillating");
    let bad = upper("Y^3");
    assert!(matches!(EnergyModel::new(&p.spec, &bad, &[], 0.0, 0.0), Err(DynamicsError::EnergyMismatch(0))));
}
