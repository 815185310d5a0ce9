use crate::{Command, Common, CompareArgs};
use dissform::bounds::{check_conditions_at, make_tables_with, sig4, StabilityMode};
use dissform::dynamics::{drift_measure, energy_track, error_curves, rk4, EnergyModel, NumericSystem, State};
use dissform::series::{print_series_real, HomologicalError, NormError};
use dissform::{
    build_normal_form_with, BoundsError, DynamicsError, NormalFormResult, Problem, ProblemError, TransformError,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Problem(ProblemError),
    Transform(TransformError),
    Bounds(BoundsError),
    Dynamics(DynamicsError),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Problem(e) => write!(f, "{e}"),
            CliError::Transform(e) => write!(f, "{e}"),
            CliError::Bounds(e) => write!(f, "{e}"),
            CliError::Dynamics(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

fn transform_is_resonance(e: &TransformError) -> bool {
    matches!(e, TransformError::Homological(HomologicalError::ExactResonance { .. }))
}

impl CliError {
    /// 3 for resonances and poles, 4 for problem file errors, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Problem(_) | CliError::Usage(_) => 4,
            CliError::Transform(e) if transform_is_resonance(e) => 3,
            CliError::Bounds(BoundsError::ResonantDomain { .. }) => 3,
            CliError::Bounds(BoundsError::Norm(NormError::PoleInsideDomain { .. })) => 3,
            CliError::Bounds(BoundsError::Transform(e)) if transform_is_resonance(e) => 3,
            CliError::Dynamics(DynamicsError::PoleEncountered { .. }) => 3,
            _ => 1,
        }
    }
}

macro_rules! from_err {
    ($t:ty, $v:ident) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::$v(e)
            }
        }
    };
}
from_err!(ProblemError, Problem);
from_err!(TransformError, Transform);
from_err!(BoundsError, Bounds);
from_err!(DynamicsError, Dynamics);

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: &Command, out: &Path, dump: bool) -> Result<u8> {
    let common = match cmd {
        Command::Normalize(c) | Command::Check(c) | Command::Estimate(c) => c,
        Command::Compare(c) => &c.common,
    };
    let problem = Problem::load(&common.problem)?;
    if dump {
        print!("{}", problem.to_canonical());
        return Ok(0);
    }
    match cmd {
        Command::Normalize(c) => normalize(&problem, c, out),
        Command::Check(c) => check(&problem, c, out),
        Command::Estimate(c) => estimate(&problem, c, out),
        Command::Compare(c) => compare(&problem, c, out),
    }
}

fn write(out: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(out.to_path_buf(), e))?;
    let path = out.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::Io(path.clone(), e))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn order(p: &Problem, c: &Common) -> u32 {
    c.order.unwrap_or(p.run.order)
}

fn modes(p: &Problem, c: &Common, n: u32) -> Result<u32> {
    if let Some(k) = c.modes {
        return Ok(k);
    }
    if let Some(t) = c.tau {
        return Ok(dissform::bounds::modes_for_tau(n, t, p.domain()?.lambda0()));
    }
    Ok(p.modes_for(n)?)
}

fn build(p: &Problem, c: &Common, n: u32) -> Result<NormalFormResult> {
    Ok(build_normal_form_with(&p.spec, n, modes(p, c, n)?, p.convention)?)
}

fn normalize(p: &Problem, c: &Common, out: &Path) -> Result<u8> {
    let n = order(p, c);
    let nf = build(p, c, n)?;
    let upper = dissform::Names::upper(p.dim());
    let lower = p.names();
    println!("order {n}, modes {}", nf.modes);
    for (v, s) in nf.omega_d.iter().enumerate() {
        println!("Omega_d[{v}] = {}", print_series_real(s, &upper));
    }
    for (v, s) in nf.drift_in_original().iter().enumerate() {
        println!("eta[{v}] = {}", print_series_real(s, &lower));
    }
    for (k, (cons, diss)) in nf.term_counts() {
        println!("terms at order {k}: conservative {cons}, dissipative {diss}");
    }
    let stem = format!("{}.nf{n}", p.name);
    write(out, &format!("{stem}.json"), &json_text(&nf.to_json()))?;
    write(out, &format!("{stem}.txt"), &nf.to_text())?;
    Ok(0)
}

fn cap_text(c: Option<f64>) -> String {
    c.map_or("unbounded".into(), |v| format!("{v:e}"))
}

fn check(p: &Problem, c: &Common, out: &Path) -> Result<u8> {
    let d = p.domain()?;
    let n = order(p, c);
    let nf = build(p, c, n)?;
    let eps = c.eps.unwrap_or(d.eps0);
    let mu = c.mu.unwrap_or(d.mu0);
    let report = check_conditions_at(d, &nf, eps, mu)?;
    println!("conditions at order {n}, eps = {eps:e}, mu = {mu:e}");
    println!("{:<6} {:>12} {:>12} {:>12} {:>12}  pass", "name", "lhs", "threshold", "eps cap", "mu cap");
    for e in &report.conditions {
        println!(
            "{:<6} {:>12} {:>12} {:>12} {:>12}  {}",
            e.name,
            sig4(e.lhs),
            sig4(e.threshold),
            e.eps_cap.map_or("-".into(), sig4),
            e.mu_cap.map_or("-".into(), sig4),
            e.pass
        );
    }
    println!("eps <= {} ({})", cap_text(report.eps_cap), report.eps_binding.unwrap_or("none"));
    println!("mu <= {} ({})", cap_text(report.mu_cap), report.mu_binding.unwrap_or("none"));
    let json = serde_json::to_value(&report).expect("reports serialize");
    write(out, &format!("{}.conditions.json", p.name), &json_text(&json))?;
    if report.all_pass {
        return Ok(0);
    }
    let failing: Vec<&str> = report.failing().map(|e| e.name).collect();
    eprintln!("condition failure: {}", failing.join(", "));
    if report.eps_cap.is_some_and(|cap| eps > cap) {
        eprintln!("eps = {eps:e} exceeds the cap set by {}", report.eps_binding.unwrap_or("?"));
    }
    if report.mu_cap.is_some_and(|cap| mu.abs() > cap) {
        eprintln!("mu = {mu:e} exceeds the cap set by {}", report.mu_binding.unwrap_or("?"));
    }
    Ok(2)
}

fn estimate(p: &Problem, c: &Common, out: &Path) -> Result<u8> {
    let d = p.domain()?;
    let orders = c.orders.clone().map(|o| o.0).unwrap_or_else(|| vec![order(p, c)]);
    let mode = match (c.modes, c.tau, p.run.modes, p.run.tau0) {
        (Some(k), _, _, _) => StabilityMode::FixK(k),
        (_, Some(t), _, _) => StabilityMode::FixTau(t),
        (_, _, Some(k), _) => StabilityMode::FixK(k),
        (_, _, _, Some(t)) => StabilityMode::FixTau(t),
        _ => return Err(CliError::Usage("set --modes or --tau".into())),
    };
    let table = make_tables_with(&p.spec, d, &orders, mode, p.convention)?;
    let csv = table.to_csv();
    print!("{csv}");
    write(out, &format!("{}.stability.csv", p.name), &csv)?;
    let json = serde_json::to_value(&table).expect("tables serialize");
    write(out, &format!("{}.stability.json", p.name), &json_text(&json))?;
    Ok(0)
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

fn compare(p: &Problem, a: &CompareArgs, out: &Path) -> Result<u8> {
    let c = &a.common;
    let orders = c.orders.clone().map(|o| o.0).unwrap_or_else(|| if p.run.orders.is_empty() { vec![order(p, c)] } else { p.run.orders.clone() });
    let eps = c.eps.unwrap_or(p.run.eps);
    let mu = c.mu.unwrap_or(p.run.mu);
    let t_end = a.t_end.unwrap_or(p.run.t_end);
    let (y0, x0) = p.start()?;
    let s0 = State::new(0.0, y0, x0);
    let nfs = orders.par_iter().map(|&n| build(p, c, n)).collect::<Result<Vec<_>>>()?;
    let curves = error_curves(&p.spec, &nfs, &s0, eps, mu, p.run.dt, t_end, p.run.stride)?;
    let eta = nfs.iter().max_by_key(|nf| nf.order).map(|nf| nf.drift_in_original()).unwrap_or_default();
    let energy = if a.energy {
        let h0 = p.h0.as_ref().ok_or_else(|| CliError::Usage("--energy needs field.h0 in the problem".into()))?;
        let model = EnergyModel::new(&p.spec, h0, &eta, eps, mu)?;
        Some(energy_track(&model, &curves.trajectory))
    } else {
        None
    };

    let names = p.names();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["t".to_string()];
    head.extend(names.angles.iter().cloned());
    head.extend(names.actions.iter().cloned());
    head.extend(orders.iter().map(|n| format!("err_N{n}")));
    if energy.is_some() {
        head.push("H".into());
    }
    w.write_record(&head).expect("in-memory csv");
    for (i, s) in curves.trajectory.samples.iter().enumerate() {
        if s.t <= s0.t {
            continue;
        }
        let mut row = vec![format!("{:e}", s.t)];
        row.extend(s.x.iter().chain(&s.y).chain(&curves.err[i]).map(|v| format!("{v:e}")));
        if let Some(e) = &energy {
            row.push(format!("{:e}", e.energy[i]));
        }
        w.write_record(&row).expect("in-memory csv");
    }
    let csv = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8");
    write(out, &format!("{}.compare.csv", p.name), &csv)?;

    let last = curves.err.last().cloned().unwrap_or_default();
    let mut summary = json!({
        "problem": p.name,
        "orders": orders,
        "eps": eps,
        "mu": mu,
        "dt": p.run.dt,
        "t_end": t_end,
        "stride": p.run.stride,
        "samples": curves.trajectory.samples.len(),
        "final_err": last,
        "strictly_ordered": curves.strictly_ordered(),
    });
    println!("orders {orders:?}: strictly ordered = {}", curves.strictly_ordered());
    for (n, e) in orders.iter().zip(&last) {
        println!("err_N{n}(t = {t_end:e}) = {e:e}");
    }
    if let Some(e) = &energy {
        summary["energy"] = json!({
            "mean": e.mean,
            "period": opt(e.period),
            "extended_period": opt(e.extended_period),
            "slope": e.slope,
            "slope_stderr": e.slope_stderr,
            "rate_rel_err": opt(e.rate_rel_err),
        });
        println!("energy mean {:e}, period {}, slope {:e}", e.mean, cap_text(e.extended_period), e.slope);
    }
    if let Some(t) = a.drift {
        let sys = NumericSystem::new(&p.spec, &eta, eps, mu)?;
        let traj = rk4(&sys, &s0, p.run.dt, t, p.run.stride)?;
        let drift = drift_measure(&traj);
        summary["drift"] = json!({ "t_end": t, "drift": drift });
        println!("drift over [0, {t:e}] = {drift:e}");
    }
    write(out, &format!("{}.compare.json", p.name), &json_text(&summary))?;
    Ok(0)
}
