//! Problem files.
//!
//! A problem is a TOML document with four tables. Series-valued fields are
//! strings in the literal grammar of [`crate::series`].
//!
//! ```toml
//! [problem]
//! name = "example"
//! dim = 1
//! drift = "negative"          # sign of mu * eta in the action equation
//!
//! [field]
//! omega = ["y"]
//! h10 = "-cos(x - t) - cos(x)"
//! f01 = ["0"]
//! g01 = ["y*sin(x)"]
//! h0 = "y^2/2"                # optional, needed for energy tracking
//!
//! [domain]                    # optional, needed by check and estimate
//! # DomainParams fields
//!
//! [run]
//! order = 2
//! modes = 20                  # or tau0
//! eps = 1e-3
//! mu = 1e-3
//! y0 = [1.618033988749895]
//! x0 = [0.0]
//! dt = 0.01
//! t_end = 31415.926535897932
//! ```

use crate::arith::RatFn;
use crate::bounds::{modes_for_tau, DomainParams};
use crate::dynamics::DEFAULT_STRIDE;
use crate::series::{parse_ratfn, parse_series, print_series, LiteralError, Names, Series};
use crate::transform::{DriftConvention, SpecError, VectorFieldSpec};
use serde::{Deserialize, Serialize};
use std::ops::Range;
use std::path::Path;
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {field}: {source}")]
    Literal { field: String, line: usize, column: usize, source: LiteralError },
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Sign of `mu * eta` in the action equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriftSign {
    Positive,
    #[default]
    Negative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    name: String,
    dim: usize,
    #[serde(default)]
    drift: DriftSign,
    #[serde(default)]
    convention: DriftConvention,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "S: Deserialize<'de>"))]
struct FieldText<S> {
    omega: Vec<S>,
    h10: S,
    f01: Vec<S>,
    g01: Vec<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h0: Option<S>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "S: Deserialize<'de>"))]
struct Document<S> {
    problem: Header,
    field: FieldText<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<DomainParams>,
    #[serde(default)]
    run: RunParams,
}

/// Settings of a run; command line flags override them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunParams {
    pub order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau0: Option<f64>,
    /// Orders compared by `compare`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<u32>,
    pub eps: f64,
    pub mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            order: 2,
            modes: None,
            tau0: None,
            orders: Vec::new(),
            eps: 0.0,
            mu: 0.0,
            y0: None,
            x0: None,
            dt: 1e-2,
            t_end: 0.0,
            stride: DEFAULT_STRIDE,
        }
    }
}

/// A parsed problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub name: String,
    pub spec: VectorFieldSpec,
    pub convention: DriftConvention,
    /// Integrable energy with `d h0 / d y = omega`.
    pub h0: Option<Series>,
    pub domain: Option<DomainParams>,
    pub run: RunParams,
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
    (line, column)
}

fn literal_error(src: &str, field: &str, span: Range<usize>, e: LiteralError) -> ProblemError {
    // Offsets inside the literal are only exact for strings without escapes.
    let inner = match &e {
        LiteralError::BadChar(_, at) => span.start + 1 + at,
        _ => span.start,
    };
    let (line, column) = line_col(src, inner.min(span.end));
    ProblemError::Literal { field: field.to_string(), line, column, source: e }
}

impl Problem {
    pub fn parse(src: &str) -> Result<Problem, ProblemError> {
        let doc: Document<Spanned<String>> = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            ProblemError::Syntax { line, column, message: e.message().trim().to_string() }
        })?;
        let dim = doc.problem.dim;
        if dim == 0 || dim > crate::arith::MAX_VARS {
            return Err(SpecError::Dimension(dim).into());
        }
        let names = Names::default_for(dim);
        let series = |field: &str, s: &Spanned<String>| {
            parse_series(s.get_ref(), &names).map_err(|e| literal_error(src, field, s.span(), e))
        };
        let list = |field: &str, v: &[Spanned<String>]| -> Result<Vec<Series>, ProblemError> {
            v.iter().enumerate().map(|(i, s)| series(&format!("{field}[{i}]"), s)).collect()
        };
        let omega: Vec<RatFn> = doc
            .field
            .omega
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_ratfn(s.get_ref(), &names).map_err(|e| literal_error(src, &format!("omega[{i}]"), s.span(), e))
            })
            .collect::<Result<_, _>>()?;
        let h10 = series("h10", &doc.field.h10)?;
        let f01 = list("f01", &doc.field.f01)?;
        let g01 = list("g01", &doc.field.g01)?;
        let h0 = doc.field.h0.as_ref().map(|s| series("h0", s)).transpose()?;
        if omega.len() != dim {
            return Err(SpecError::Components("omega", omega.len(), dim).into());
        }
        let spec = VectorFieldSpec::new(omega, h10, f01, g01)?.with_positive_drift(doc.problem.drift == DriftSign::Positive);
        let p = Problem {
            name: doc.problem.name,
            spec,
            convention: doc.problem.convention,
            h0,
            domain: doc.domain,
            run: doc.run,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Problem, ProblemError> {
        let src = std::fs::read_to_string(path).map_err(|e| ProblemError::Io { path: path.display().to_string(), source: e })?;
        Problem::parse(&src)
    }

    fn validate(&self) -> Result<(), ProblemError> {
        let dim = self.spec.dim();
        let bad = |m: String| Err(ProblemError::Invalid(m));
        for (name, v) in [("run.y0", &self.run.y0), ("run.x0", &self.run.x0)] {
            if let Some(v) = v {
                if v.len() != dim {
                    return bad(format!("{name} has {} components, expected {dim}", v.len()));
                }
            }
        }
        if let Some(d) = &self.domain {
            if d.y0.len() != dim || d.x0.len() != dim {
                return bad(format!("domain.y0 and domain.x0 need {dim} components"));
            }
        }
        if !(self.run.dt > 0.0 && self.run.dt.is_finite()) {
            return bad(format!("run.dt must be positive, got {}", self.run.dt));
        }
        if !(self.run.t_end >= 0.0 && self.run.t_end.is_finite()) {
            return bad(format!("run.t_end must be non-negative, got {}", self.run.t_end));
        }
        if self.run.modes.is_some() && self.run.tau0.is_some() {
            return bad("run.modes and run.tau0 are exclusive".into());
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn names(&self) -> Names {
        Names::default_for(self.dim())
    }

    /// Fourier cut-off for `order`: `run.modes`, or derived from `run.tau0` and the domain caps.
    pub fn modes_for(&self, order: u32) -> Result<u32, ProblemError> {
        match (self.run.modes, self.run.tau0) {
            (Some(k), _) => Ok(k),
            (None, Some(t)) => {
                let d = self.domain.as_ref().ok_or_else(|| ProblemError::Invalid("run.tau0 needs a [domain] table".into()))?;
                Ok(modes_for_tau(order, t, d.lambda0()))
            }
            (None, None) => Err(ProblemError::Invalid("set run.modes or run.tau0".into())),
        }
    }

    /// Initial original state: `run.y0`/`run.x0`, falling back to the domain centre.
    pub fn start(&self) -> Result<(Vec<f64>, Vec<f64>), ProblemError> {
        let d = self.domain.as_ref();
        let y0 = self.run.y0.clone().or_else(|| d.map(|d| d.y0.clone()));
        let x0 = self.run.x0.clone().or_else(|| d.map(|d| d.x0.clone()));
        match (y0, x0) {
            (Some(y), Some(x)) => Ok((y, x)),
            _ => Err(ProblemError::Invalid("initial state needs run.y0 and run.x0".into())),
        }
    }

    pub fn domain(&self) -> Result<&DomainParams, ProblemError> {
        self.domain.as_ref().ok_or_else(|| ProblemError::Invalid("this command needs a [domain] table".into()))
    }

    /// Canonical text: series in exponential form, every run setting explicit.
    pub fn to_canonical(&self) -> String {
        let names = self.names();
        let p = |s: &Series| print_series(s, &names);
        let dim = self.dim();
        let doc = Document {
            problem: Header {
                name: self.name.clone(),
                dim,
                drift: if self.spec.drift_sign() > 0 { DriftSign::Positive } else { DriftSign::Negative },
                convention: self.convention,
            },
            field: FieldText {
                omega: self.spec.omega().iter().map(|w| p(&Series::from_ratfn(dim, w.clone()))).collect(),
                h10: p(self.spec.h10()),
                f01: self.spec.f01().iter().map(p).collect(),
                g01: self.spec.g01().iter().map(p).collect(),
                h0: self.h0.as_ref().map(p),
            },
            domain: self.domain.clone(),
            run: self.run.clone(),
        };
        toml::to_string(&doc).expect("problem documents always serialize")
    }
}
