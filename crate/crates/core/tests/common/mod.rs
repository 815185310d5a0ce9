#![allow(dead_code)]

use dissform::series::{parse_ratfn, parse_series, Names};
use dissform::{NormalFormResult, Problem, Series};
use std::path::PathBuf;

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(format!("{name}.problem"))
}

pub fn problem(name: &str) -> Problem {
    Problem::load(&problem_path(name)).unwrap()
}

/// Series in the normalized variables `Y`, `X`.
pub fn upper(src: &str) -> Series {
    parse_series(src, &Names::upper(1)).unwrap()
}

/// `src` placed at grading `(j, p)`.
pub fn graded(src: &str, j: u8, p: u8) -> Series {
    upper(src).shift_grade(j, p)
}

pub fn action_only(src: &str, j: u8, p: u8) -> Series {
    Series::from_ratfn(1, parse_ratfn(src, &Names::upper(1)).unwrap()).shift_grade(j, p)
}

/// A computed object next to its closed form.
pub struct Item {
    pub name: &'static str,
    pub ours: Series,
    pub expected: Series,
}

impl Item {
    pub fn matches(&self) -> bool {
        self.ours == self.expected
    }
}

fn eta_item(name: &'static str, nf: &NormalFormResult, j: u8, p: u8, expected: &str) -> Item {
    Item {
        name,
        ours: Series::from_ratfn(1, nf.eta(j, p)[0].clone()).shift_grade(j, p),
        expected: action_only(expected, j, p),
    }
}

/// Low-grading part of `Y'` and the oscillating part of `X'`.
fn nf_residual(nf: &NormalFormResult) -> Series {
    nf.field[0].truncate(nf.order).add(&nf.field[1].truncate(nf.order).oscillating())
}

/// Order two objects of the damped two-harmonic example.
pub fn e19_items(nf: &NormalFormResult) -> Vec<Item> {
    assert_eq!(nf.order, 2);
    let eta_y = nf.drift_in_original()[0].clone();
    vec![
        Item { name: "psi10", ours: nf.psi(1).clone(), expected: graded("sin(X - t)/(Y - 1) + sin(X)/Y", 1, 0) },
        Item {
            name: "psi20",
            ours: nf.psi(2).clone(),
            expected: graded(
                "-sin(2*X - t)/(2*(Y - 1)*Y*(2*Y - 1)) - sin(2*X - 2*t)/(8*(Y - 1)^3) - sin(t)/(2*(Y - 1)*Y) - sin(2*X)/(8*Y^3)",
                2,
                0,
            ),
        },
        Item {
            name: "Omega20",
            ours: Series::from_ratfn(1, nf.omega_correction(2, 0)[0].clone()).shift_grade(2, 0),
            expected: action_only("(-2*Y^3 + 3*Y^2 - 3*Y + 1)/(2*(Y - 1)^3*Y^3)", 2, 0),
        },
        eta_item("eta01", nf, 0, 1, "Y"),
        eta_item("eta11", nf, 1, 1, "(2*Y - 1)/(2*(Y - 1)*Y)"),
        eta_item("eta02", nf, 0, 2, "0"),
        Item { name: "alpha01", ours: nf.alpha(0, 1)[0].clone(), expected: graded("cos(X - t)/(1 - Y) - cos(X)/Y", 0, 1) },
        Item { name: "beta01", ours: nf.beta(0, 1)[0].clone(), expected: graded("0", 0, 1) },
        Item {
            name: "alpha11",
            ours: nf.alpha(1, 1)[0].clone(),
            expected: graded(
                "cos(2*X - t)/(2*Y*(2*Y^2 - 3*Y + 1)) + cos(2*X - 2*t)/(8*(Y - 1)^3) \
                 + (-2*Y^3 + 3*Y^2 + 3*Y - 2)*cos(t)/(2*(Y - 1)^2*Y^2) + cos(2*X)/(8*Y^3)",
                1,
                1,
            ),
        },
        Item {
            name: "beta11",
            ours: nf.beta(1, 1)[0].clone(),
            expected: graded(
                "sin(2*X - t)/(2*(1 - Y)*Y) - sin(2*X - 2*t)/(4*(Y - 1)^2) - (1 - 2*Y)*sin(t)/(2*(Y - 1)*Y) - sin(2*X)/(4*Y^2)",
                1,
                1,
            ),
        },
        Item {
            name: "alpha02",
            ours: nf.alpha(0, 2)[0].clone(),
            expected: graded(
                "sin(2*X - t)/(2*(Y - 1)*Y) + sin(2*X - 2*t)/(4*(Y - 1)^2) + (2*Y - 1)*sin(t)/(2*(Y - 1)*Y) + sin(2*X)/(4*Y^2)",
                0,
                2,
            ),
        },
        Item { name: "beta02", ours: nf.beta(0, 2)[0].clone(), expected: graded("0", 0, 2) },
        Item {
            name: "normal form X'",
            ours: nf.omega_d[0].clone(),
            expected: upper("Y + eps^2*(1 - 3*Y + 3*Y^2 - 2*Y^3)/(2*(Y - 1)^3*Y^3) + mu^2*(1 - 2*Y)/(2*(Y - 1)*Y)"),
        },
        Item { name: "normal form Y'", ours: nf_residual(nf), expected: Series::zero(1) },
        Item {
            name: "eta(y)",
            ours: eta_y,
            expected: parse_series("y - eps*(1 - 2*y)/(2*(y - 1)*y)", &Names::default_for(1)).unwrap(),
        },
    ]
}

/// Order two objects of the oscillating-energy example.
pub fn oscillating_items(nf: &NormalFormResult) -> Vec<Item> {
    assert_eq!(nf.order, 2);
    vec![
        Item { name: "psi10", ours: nf.psi(1).clone(), expected: graded("sin(X - t)/(Y - 1) + sin(X)/Y", 1, 0) },
        Item {
            name: "psi20",
            ours: nf.psi(2).clone(),
            expected: graded(
                "-sin(2*X - t)/(2*(Y - 1)*Y*(2*Y - 1)) - sin(2*X - 2*t)/(8*(Y - 1)^3) - sin(t)/(2*(Y - 1)*Y) - sin(2*X)/(8*Y^3)",
                2,
                0,
            ),
        },
        Item { name: "beta01", ours: nf.beta(0, 1)[0].clone(), expected: graded("cos(X)", 0, 1) },
        Item { name: "alpha01", ours: nf.alpha(0, 1)[0].clone(), expected: graded("sin(X)/Y", 0, 1) },
        Item { name: "beta02", ours: nf.beta(0, 2)[0].clone(), expected: graded("-cos(2*X)/(2*Y)", 0, 2) },
        Item {
            name: "beta11",
            ours: nf.beta(1, 1)[0].clone(),
            expected: graded(
                "Y*cos(2*X - t)/(2*(Y - 1)^2*(2*Y - 1)) + (Y - 2)*cos(t)/(2*(Y - 1)^2) - cos(2*X)/(4*Y^2)",
                1,
                1,
            ),
        },
        Item { name: "alpha02", ours: nf.alpha(0, 2)[0].clone(), expected: graded("-sin(2*X)/(4*Y^2)", 0, 2) },
        Item {
            name: "alpha11",
            ours: nf.alpha(1, 1)[0].clone(),
            expected: graded(
                "-sin(2*X - t)/(2*(Y - 1)*(2*Y - 1)^2) + (Y - 3)*sin(t)/(2*(Y - 1)^2) - sin(2*X)/(8*Y^3)",
                1,
                1,
            ),
        },
        Item {
            name: "normal form X'",
            ours: nf.omega_d[0].clone(),
            expected: upper("Y + eps^2*(1 - 3*Y + 3*Y^2 - 2*Y^3)/(2*(Y - 1)^3*Y) + eps*mu/(2*Y^2)"),
        },
        Item { name: "normal form Y'", ours: nf_residual(nf), expected: Series::zero(1) },
        eta_item("eta", nf, 0, 1, "0"),
    ]
}
