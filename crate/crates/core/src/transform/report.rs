//! JSON and text renderings of a [`NormalFormResult`].

use super::NormalFormResult;
use crate::series::{print_series, print_series_real, Names, Series};
use serde_json::{json, Value};
use std::fmt::Write as _;

fn series_json(s: &Series, names: &Names) -> Value {
    let refs: Vec<&str> = names.actions.iter().map(|a| a.as_str()).collect();
    let terms: Vec<Value> = s
        .iter()
        .map(|(k, c)| {
            json!({
                "eps": k.j,
                "mu": k.p,
                "k": k.mode().k[..names.dim()].to_vec(),
                "m": k.mode().m,
                "coeff": c.fmt_with(&refs),
            })
        })
        .collect();
    json!({ "text": print_series(s, names), "real": print_series_real(s, names), "terms": terms })
}

fn list_json(v: &[Series], names: &Names) -> Value {
    Value::Array(v.iter().map(|s| series_json(s, names)).collect())
}

impl NormalFormResult {
    /// Structured document with exact coefficients.
    ///
    /// Conservative generating functions use the mixed variables `(Y~, x, t)`
    /// and are printed with lower-case names; the drift uses the action it is
    /// a function of.
    pub fn to_json(&self) -> Value {
        let lower = Names::default_for(self.dim);
        let upper = Names::upper(self.dim);
        let graded = |m: &std::collections::BTreeMap<(u8, u8), Vec<Series>>| -> Value {
            Value::Array(
                m.iter().map(|((j, p), v)| json!({ "eps": j, "mu": p, "components": list_json(v, &upper) })).collect(),
            )
        };
        let drift_names = match self.convention {
            super::DriftConvention::OriginalAction => &lower,
            super::DriftConvention::NormalAction => &upper,
        };
        let psi: Vec<Value> =
            self.conservative.psi.iter().enumerate().map(|(i, s)| json!({ "eps": i + 1, "series": series_json(s, &lower) })).collect();
        let omega: Vec<String> = self.omega.iter().map(|w| w.fmt_with(&refs(&lower))).collect();
        let counts: Vec<Value> = self
            .term_counts()
            .iter()
            .map(|(n, (c, d))| json!({ "order": n, "conservative": c, "dissipative": d }))
            .collect();
        json!({
            "order": self.order,
            "modes": self.modes,
            "convention": self.convention,
            "dim": self.dim,
            "omega": omega,
            "frequency": list_json(&self.omega_d, &upper),
            "drift": list_json(&self.eta_series(), drift_names),
            "drift_original": list_json(&self.drift_in_original(), &lower),
            "conservative": { "psi": psi },
            "dissipative": { "alpha": graded(&self.dissipative.alpha), "beta": graded(&self.dissipative.beta) },
            "inverse": { "y": list_json(&self.phi_y, &upper), "x": list_json(&self.phi_x, &upper) },
            "action_map": list_json(&self.t_map, &lower),
            "remainders": {
                "f_next": list_json(&self.f_next, &upper),
                "g_next": list_json(&self.g_next, &upper),
                "f_high": list_json(&self.f_high, &upper),
                "g_high": list_json(&self.g_high, &upper),
            },
            "term_counts": counts,
        })
    }

    /// Plain text report in real trigonometric form.
    pub fn to_text(&self) -> String {
        let lower = Names::default_for(self.dim);
        let upper = Names::upper(self.dim);
        let mut out = String::new();
        let _ = writeln!(out, "normal form of order {} with modes up to {}", self.order, self.modes);
        let _ = writeln!(out);
        let _ = writeln!(out, "frequency Omega_d:");
        for (v, s) in self.omega_d.iter().enumerate() {
            let _ = writeln!(out, "  [{v}] {}", print_series_real(s, &upper));
        }
        let _ = writeln!(out, "drift eta:");
        for (v, s) in self.drift_in_original().iter().enumerate() {
            let _ = writeln!(out, "  [{v}] {}", print_series_real(s, &lower));
        }
        let _ = writeln!(out, "generating functions:");
        for (i, s) in self.conservative.psi.iter().enumerate() {
            let _ = writeln!(out, "  psi_{}0 = {}", i + 1, print_series_real(s, &lower));
        }
        let _ = writeln!(out, "dissipative maps:");
        for ((j, p), v) in &self.dissipative.alpha {
            for (c, s) in v.iter().enumerate() {
                let _ = writeln!(out, "  alpha_{j}{p}[{c}] = {}", print_series_real(s, &upper));
            }
        }
        for ((j, p), v) in &self.dissipative.beta {
            for (c, s) in v.iter().enumerate() {
                let _ = writeln!(out, "  beta_{j}{p}[{c}] = {}", print_series_real(s, &upper));
            }
        }
        let _ = writeln!(out, "term counts (conservative, dissipative):");
        for (n, (c, d)) in self.term_counts() {
            let _ = writeln!(out, "  order {n}: {c}, {d}");
        }
        out
    }
}

fn refs(n: &Names) -> Vec<&str> {
    n.actions.iter().map(|a| a.as_str()).collect()
}

#[cfg(test)]
mod tests {
    use crate::series::{parse_series, Names};
    use crate::transform::{build_normal_form, VectorFieldSpec};
    use crate::RatFn;

    #[test]
    fn identity_report_at_order_zero() {
        let n = Names::default_for(1);
        let spec = VectorFieldSpec::new(
            vec![RatFn::var(0)],
            parse_series("-cos(x - t) - cos(x)", &n).unwrap(),
            vec![parse_series("0", &n).unwrap()],
            vec![parse_series("-y", &n).unwrap()],
        )
        .unwrap();
        let nf = build_normal_form(&spec, 0, 20).unwrap();
        let j = nf.to_json();
        assert_eq!(j["frequency"][0]["text"], "(Y)");
        assert_eq!(j["conservative"]["psi"].as_array().unwrap().len(), 0);
        assert!(nf.to_text().contains("[0] Y"));
    }
}
