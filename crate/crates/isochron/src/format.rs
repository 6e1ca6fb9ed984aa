//! JSON forms of the domain objects.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) so artifacts
//! round-trip bit-exactly and repeated runs are byte-identical. Non-finite
//! floats become `null`. Exact values are strings ("3/4").

use isochron_core::expansion::{OddTermNote, PeriodExpansion};
use isochron_core::potential::{CenterCase, SideBehavior};
use isochron_core::quadrature::{DivergenceFit, PeriodRow, PeriodTable};
use isochron_core::rational::{exact_sqrt, format_q, q, to_f64};
use isochron_core::scalar::PeriodScalar;
use isochron_core::verdict::{Evidence, IsochronyVerdict, VerdictReport};
use isochron_core::{OrbitRun, PiecewiseSystem, Potential, Q};
use serde_json::{json, Map, Number, Value};

/// Text of a float with 17 significant digits.
pub fn float_text(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // arbitrary_precision keeps the literal digits
    Value::Number(float_text(x).parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn exact(value: &Q) -> Value {
    Value::String(format_q(value))
}

/// ω as an exact string: "2" when ω² is a rational square, "sqrt(3/2)" otherwise.
pub fn omega_text(omega_sq: &Q) -> String {
    match exact_sqrt(omega_sq) {
        Some(w) => format_q(&w),
        None => format!("sqrt({})", format_q(omega_sq)),
    }
}

/// A rational scalar is a plain string. Otherwise the value is
/// rational + Σ_d coeff_d·(π/√2)·√d, written as
/// `{"rational": .., "pi_over_sqrt2": {"d": coeff_d}, "value": float}`;
/// a single π-term with no rational part also carries the equivalent
/// `pi_over_sqrt2_coeff`/`omega` pair with value = coeff·π/(√2·omega).
pub fn scalar(s: &PeriodScalar) -> Value {
    if s.is_rational() {
        return exact(s.rational());
    }
    let parts: Map<String, Value> = s.pi_parts().iter().map(|(d, c)| (d.to_string(), exact(c))).collect();
    let mut out = Map::new();
    out.insert("rational".into(), exact(s.rational()));
    out.insert("pi_over_sqrt2".into(), Value::Object(parts));
    if s.pi_parts().len() == 1 && *s.rational() == q(0) {
        let (d, c) = s.pi_parts().iter().next().expect("one part");
        // c·(π/√2)·√d = (c·d)·π/(√2·√d)
        let d_q = q(*d as i64);
        out.insert("pi_over_sqrt2_coeff".into(), exact(&(c * &d_q)));
        out.insert("omega".into(), Value::String(omega_text(&d_q)));
    }
    out.insert("value".into(), float(s.to_f64()));
    Value::Object(out)
}

pub fn potential(v: &Potential) -> Value {
    let coeffs: Map<String, Value> = v.coeffs().iter().map(|(k, c)| (k.to_string(), exact(c))).collect();
    json!({"coeffs": coeffs, "domain_bound": float(v.domain_bound())})
}

pub fn system(sys: &PiecewiseSystem) -> Value {
    json!({
        "topology": sys.topology.label(),
        "v_minus": potential(&sys.v_minus),
        "v_plus": potential(&sys.v_plus),
        "h_max": sys.h_max.as_ref().map(exact).unwrap_or(Value::Null),
    })
}

pub fn behavior(b: &SideBehavior) -> Value {
    let mut out = json!({"kind": b.label()});
    let map = out.as_object_mut().expect("object");
    match b {
        SideBehavior::NondegenerateCenter { omega_sq } => {
            map.insert("omega_sq".into(), exact(omega_sq));
        }
        SideBehavior::DegenerateCenter { r } | SideBehavior::Cusp { r } => {
            map.insert("r".into(), json!(r));
        }
        SideBehavior::Tangency { slope } => {
            map.insert("slope".into(), exact(slope));
        }
        SideBehavior::Invalid { reason } => {
            map.insert("reason".into(), json!(reason));
        }
    }
    if let Some(k) = b.flatness() {
        map.insert("flatness".into(), json!(k));
    }
    out
}

pub fn center_case(sys: &PiecewiseSystem, case: &CenterCase) -> Value {
    let mut out = json!({"case": case.label(), "topology": sys.topology.label()});
    let map = out.as_object_mut().expect("object");
    match case {
        CenterCase::Vertical { left, right, mirrored, .. } => {
            map.insert("left".into(), behavior(left));
            map.insert("right".into(), behavior(right));
            map.insert("mirrored".into(), json!(mirrored));
            map.insert("fold_fold".into(), json!(case.is_fold_fold()));
        }
        CenterCase::TheoremA { omega_sq, slope } => {
            map.insert("omega_sq".into(), exact(omega_sq));
            map.insert("lower_slope".into(), exact(slope));
        }
        CenterCase::HorizontalCenters { minus, plus } => {
            map.insert("minus".into(), behavior(minus));
            map.insert("plus".into(), behavior(plus));
        }
        CenterCase::NotMonodromic { reason } => {
            map.insert("reason".into(), json!(reason));
        }
    }
    out
}

fn note(n: &OddTermNote) -> Value {
    json!({"index": n.index, "full": scalar(&n.full), "fold_side_only": scalar(&n.fold_side_only)})
}

/// Why a zero test on period constants is exact; embedded in reports.
pub const EXACTNESS_NOTE: &str = "constants are kept as q + sum_d q_d*(pi/sqrt(2))*sqrt(d) with rational q, q_d and squarefree d; \
since pi is transcendental and square roots of distinct squarefree integers are linearly independent over Q, \
such a number is zero iff every q vanishes, so zero tests are exact";

pub fn expansion(exp: &PeriodExpansion) -> Value {
    json!({
        "param": exp.param.label(),
        "variable": exp.param.var(),
        "order": exp.order(),
        "leading": scalar(&exp.leading()),
        "constants": exp.constants().iter().map(scalar).collect::<Vec<_>>(),
        "exact": true,
        "notes": exp.notes.iter().map(note).collect::<Vec<_>>(),
    })
}

pub fn divergence(fit: &DivergenceFit) -> Value {
    json!({
        "rho_values": fit.rho_values.iter().map(|x| float(*x)).collect::<Vec<_>>(),
        "times": fit.times.iter().map(|x| float(*x)).collect::<Vec<_>>(),
        "fitted_exponent": float(fit.fitted_exponent),
        "predicted_exponent": float(fit.predicted_exponent),
        "r": fit.r,
        "i": fit.i,
    })
}

pub fn evidence(e: &Evidence) -> Value {
    match e {
        Evidence::FirstNonzeroConstant { index, value, param } => json!({
            "kind": e.kind(),
            "index": index,
            "value": scalar(value),
            "param": param.label(),
        }),
        Evidence::DivergentPeriodAtOrigin { case, side, predicted_exponent, fitted_exponent, fit } => json!({
            "kind": e.kind(),
            "case": case.label(),
            "side": side.label(),
            "predicted_exponent": exact(predicted_exponent),
            "fitted_exponent": float(*fitted_exponent),
            "fit": divergence(fit),
        }),
        Evidence::PeriodVanishesAtOrigin { t1, param } => json!({
            "kind": e.kind(),
            "leading": "0",
            "t1": scalar(t1),
            "param": param.label(),
        }),
    }
}

pub fn verdict(report: &VerdictReport) -> Value {
    let mut out = json!({"verdict": report.verdict.label()});
    let map = out.as_object_mut().expect("object");
    match &report.verdict {
        IsochronyVerdict::NotIsochronous { evidence: e } => {
            map.insert("evidence".into(), evidence(e));
        }
        IsochronyVerdict::IsochronousLinearCase { omega_minus_sq, omega_plus_sq } => {
            map.insert("omega_minus".into(), json!(omega_text(omega_minus_sq)));
            map.insert("omega_plus".into(), json!(omega_text(omega_plus_sq)));
        }
        IsochronyVerdict::UndeterminedUpToOrder { order, reason } => {
            map.insert("undetermined_order".into(), json!(order));
            map.insert("reason".into(), json!(reason));
        }
        IsochronyVerdict::NotMonodromic { reason } => {
            map.insert("reason".into(), json!(reason));
        }
    }
    map.insert("case".into(), json!(report.case.label()));
    map.insert("order".into(), json!(report.order));
    map.insert("notes".into(), Value::Array(report.notes.iter().map(note).collect()));
    map.insert("exactness".into(), json!(EXACTNESS_NOTE));
    out
}

pub fn row(r: &PeriodRow) -> Value {
    json!({
        "h": float(r.h),
        "T_total": float(r.t_total),
        "T_minus": float(r.t_minus),
        "T_plus": float(r.t_plus),
        "cross_1": float(r.cross_1),
        "cross_2": float(r.cross_2),
        "non_closed": r.non_closed,
        "displacement": float(r.displacement),
    })
}

pub fn table(t: &PeriodTable) -> Value {
    json!({
        "case": t.case,
        "tolerances": {"quadrature_abs": float(t.quadrature_abs_tol), "turning_point_rel": float(t.turning_point_rel_tol)},
        "rows": t.rows.iter().map(row).collect::<Vec<_>>(),
    })
}

pub fn orbit(run: &OrbitRun) -> Value {
    json!({
        "start": [float(run.start[0]), float(run.start[1])],
        "return_time": float(run.return_time),
        "return_point": [float(run.return_point[0]), float(run.return_point[1])],
        "displacement": float(run.displacement),
        "closed": run.closed,
        "max_energy_drift": float(run.max_energy_drift),
        "samples": run.states.len(),
        "events": run.events.iter().map(|e| json!({
            "t": float(e.t),
            "position": [float(e.state[0]), float(e.state[1])],
            "side_from": e.from.label(),
            "side_to": e.to.label(),
            "residual": float(e.residual),
        })).collect::<Vec<_>>(),
    })
}

/// Inverse of [`scalar`]: the float value of a serialized scalar.
pub fn scalar_value(v: &Value) -> Option<f64> {
    match v {
        Value::String(s) => isochron_core::rational::parse_q(s).map(|r| to_f64(&r)),
        Value::Object(m) => m.get("value").and_then(Value::as_f64),
        _ => None,
    }
}
