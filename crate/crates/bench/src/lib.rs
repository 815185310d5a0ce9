//! Fixtures shared by the benchmarks.

use dissform::series::{parse_series, Names};
use dissform::{RatFn, State, VectorFieldSpec};

/// Damped pendulum forced by two harmonics, `omega(y) = y`.
pub fn damped_two_harmonic() -> VectorFieldSpec {
    let n = Names::default_for(1);
    let s = |src: &str| parse_series(src, &n).expect("fixture literal parses");
    VectorFieldSpec::new(
        vec![RatFn::var(0)],
        s("-cos(x - t) - cos(x)"),
        vec![s("-sin(x - t) - sin(x)")],
        vec![s("-y")],
    )
    .expect("fixture is consistent")
    .with_positive_drift(true)
}

pub fn golden_start() -> State {
    State::new(0.0, vec![(5f64.sqrt() + 1.0) / 2.0], vec![0.0])
}
