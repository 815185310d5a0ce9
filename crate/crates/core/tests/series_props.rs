use dissform::bounds::tail_bound;
use dissform::series::{parse_series, print_series, weighted_norm, Divisors, Names};
use dissform::{RatFn, Series};
use proptest::prelude::*;

const NMAX: u32 = 6;
const CENTER: [f64; 1] = [3.0];

/// One real term `eps^j mu^p (a + b y) / q(y) * cos|sin(k x + m t)`.
fn term() -> impl Strategy<Value = String> {
    let dens = prop_oneof![Just("1"), Just("y"), Just("(y - 1)"), Just("(y + 2)"), Just("y^2")];
    (0u8..2, 0u8..2, -3i32..=3, -3i32..=3, dens, -5i32..=5, -3i32..=3, any::<bool>()).prop_map(
        |(j, p, k, m, den, a, b, cosine)| {
            let f = if cosine { "cos" } else { "sin" };
            format!("eps^{j}*mu^{p}*({a} + {b}*y)/{den}*{f}({k}*x + {m}*t)")
        },
    )
}

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(term(), 1..5)
        .prop_map(|ts| parse_series(&ts.join(" + "), &Names::default_for(1)).expect("generated literal parses"))
}

fn norm(f: &Series, r: f64, s: f64) -> f64 {
    weighted_norm(f, &CENTER, r, s, 0.5, 0.5).unwrap()
}

fn close_le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + 1e-9) + 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_a_commutative_group(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn multiplication_axioms(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.mul(&g, NMAX), g.mul(&f, NMAX));
        prop_assert_eq!(f.mul(&g, NMAX).mul(&h, NMAX), f.mul(&g.mul(&h, NMAX), NMAX));
        prop_assert_eq!(f.mul(&g.add(&h), NMAX), f.mul(&g, NMAX).add(&f.mul(&h, NMAX)));
    }

    #[test]
    fn derivatives_and_average_are_linear(f in series(), g in series()) {
        let s = f.add(&g);
        prop_assert_eq!(s.dx(0), f.dx(0).add(&g.dx(0)));
        prop_assert_eq!(s.dy(0), f.dy(0).add(&g.dy(0)));
        prop_assert_eq!(s.dt(), f.dt().add(&g.dt()));
        prop_assert_eq!(s.average(), f.average().add(&g.average()));
        prop_assert!(f.oscillating().average().is_zero());
        prop_assert_eq!(f.average().add(&f.oscillating()), f);
    }

    #[test]
    fn mode_projections_split_exactly(f in series(), k in 0u32..6) {
        prop_assert_eq!(f.low_modes(k).add(&f.high_modes(k)), f.clone());
        prop_assert!(f.low_modes(k).iter().all(|(key, _)| key.mode().order() <= k));
    }

    #[test]
    fn operations_preserve_reality(f in series(), g in series()) {
        prop_assert!(f.is_real() && g.is_real());
        prop_assert!(f.add(&g).is_real());
        prop_assert!(f.mul(&g, NMAX).is_real());
        prop_assert!(f.dx(0).is_real() && f.dy(0).is_real() && f.dt().is_real());
        let mut div = Divisors::new(vec![RatFn::var(0)]);
        prop_assert!(div.solve(&f.oscillating()).unwrap().is_real());
    }

    #[test]
    fn homological_solution_has_zero_residual(f in series()) {
        let mut div = Divisors::new(vec![RatFn::var(0)]);
        let rhs = f.oscillating();
        let psi = div.solve(&rhs).unwrap();
        prop_assert!(div.apply(&psi).sub(&rhs).is_zero());
    }

    #[test]
    fn literal_round_trip(f in series()) {
        let n = Names::default_for(1);
        prop_assert_eq!(parse_series(&print_series(&f, &n), &n).unwrap(), f);
    }

    #[test]
    fn norm_is_subadditive_and_submultiplicative(f in series(), g in series()) {
        let (r, s) = (0.4, 0.2);
        prop_assert!(close_le(norm(&f.add(&g), r, s), norm(&f, r, s) + norm(&g, r, s)));
        prop_assert!(close_le(norm(&f.mul(&g, NMAX), r, s), norm(&f, r, s) * norm(&g, r, s)));
    }

    #[test]
    fn norm_is_monotone(f in series(), r in 0.05f64..0.6, dr in 0.0f64..0.3, s in 0.0f64..0.5, ds in 0.0f64..0.5) {
        prop_assert!(close_le(norm(&f, r, s), norm(&f, r + dr, s)));
        prop_assert!(close_le(norm(&f, r, s), norm(&f, r, s + ds)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fourier_tail_is_bounded(f in series(), k in 0u32..5, s0 in 0.05f64..0.5, frac in 0.02f64..0.98) {
        let sigma = s0 * frac;
        let tail = norm(&f.high_modes(k), 0.4, s0);
        let bound = tail_bound(&f, &CENTER, 0.4, s0, sigma, k, 0.5, 0.5).unwrap();
        prop_assert!(close_le(tail, bound), "tail {tail} bound {bound}");
    }
}
