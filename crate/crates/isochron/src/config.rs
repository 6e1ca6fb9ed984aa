//! Analysis configuration: parsing, validation and the canonical form that
//! is hashed into every artifact.

use std::path::PathBuf;

use isochron_core::potential::{Potential, DEFAULT_DOMAIN_BOUND};
use isochron_core::quadrature::{effective_h_max, QUADRATURE_ABS_TOL};
use isochron_core::rational::{format_q, parse_q, to_f64};
use isochron_core::{PiecewiseSystem, Side, SimulateOptions, Topology, Q, DEFAULT_ORDER};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::format::float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub quadrature_abs: f64,
    pub ode_rel: f64,
    pub ode_abs: f64,
    pub event: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let ode = SimulateOptions::default();
        Tolerances { quadrature_abs: QUADRATURE_ABS_TOL, ode_rel: ode.rel_tol, ode_abs: ode.abs_tol, event: ode.event_tol }
    }
}

/// Which potential and side the divergence probe examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeTarget {
    pub plus: bool,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimulateStart {
    Point([f64; 2]),
    /// The crossing of the orbit at this energy.
    Energy(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSpec {
    pub start: SimulateStart,
    pub trajectory_path: Option<PathBuf>,
    pub max_steps: usize,
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub system: PiecewiseSystem,
    pub order: usize,
    pub energies: EnergySpec,
    pub rho_grid: Vec<f64>,
    pub tolerances: Tolerances,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub simulate: SimulateSpec,
    pub probe: Option<ProbeTarget>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config { field: field.to_string(), message: message.into() }
}

fn object<'a>(value: &'a Value, field: &str) -> Result<&'a Map<String, Value>, CliError> {
    value.as_object().ok_or_else(|| invalid(field, "expected an object"))
}

fn required<'a>(map: &'a Map<String, Value>, key: &str, field: &str) -> Result<&'a Value, CliError> {
    map.get(key).ok_or_else(|| invalid(&format!("{field}.{key}"), "missing required field"))
}

fn number(value: &Value, field: &str) -> Result<f64, CliError> {
    let x = match value {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_q(s).map(|r| to_f64(&r)),
        _ => None,
    };
    x.filter(|x| x.is_finite()).ok_or_else(|| invalid(field, "expected a finite number"))
}

fn positive(value: &Value, field: &str) -> Result<f64, CliError> {
    let x = number(value, field)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(field, "must be positive"))
    }
}

fn count(value: &Value, field: &str) -> Result<usize, CliError> {
    value.as_u64().map(|n| n as usize).ok_or_else(|| invalid(field, "expected a non-negative integer"))
}

/// Exact rational from a string ("3/4", "0.25", "1e-3") or a JSON number,
/// read from its literal text so no binary rounding occurs.
fn rational(value: &Value, field: &str) -> Result<Q, CliError> {
    let text = match value {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return Err(invalid(field, "expected a rational as a string such as \"3/4\"")),
    };
    parse_q(&text).ok_or_else(|| invalid(field, format!("cannot parse {text:?} as an exact rational")))
}

fn potential(value: &Value, field: &str) -> Result<Potential, CliError> {
    let map = object(value, field)?;
    let coeffs_field = format!("{field}.coeffs");
    let coeffs = object(required(map, "coeffs", field)?, &coeffs_field)?;
    let mut terms = Vec::new();
    for (key, c) in coeffs {
        let power: u32 = key.trim().parse().map_err(|_| invalid(&format!("{coeffs_field}.{key}"), "power must be a non-negative integer"))?;
        terms.push((power, rational(c, &format!("{coeffs_field}.{key}"))?));
    }
    let bound = match map.get("domain_bound") {
        Some(b) => positive(b, &format!("{field}.domain_bound"))?,
        None => DEFAULT_DOMAIN_BOUND,
    };
    Potential::with_bound(terms, bound).map_err(|e| invalid(field, e.to_string()))
}

fn system(value: &Value) -> Result<PiecewiseSystem, CliError> {
    let map = object(value, "system")?;
    let topology_text = required(map, "topology", "system")?
        .as_str()
        .ok_or_else(|| invalid("system.topology", "expected a string"))?;
    let topology = Topology::from_label(topology_text)
        .ok_or_else(|| invalid("system.topology", "expected \"vertical\", \"horizontal\" or \"horizontal_mixed\""))?;
    let v_minus = potential(required(map, "v_minus", "system")?, "system.v_minus")?;
    let v_plus = potential(required(map, "v_plus", "system")?, "system.v_plus")?;
    let mut sys = PiecewiseSystem::new(topology, v_minus, v_plus);
    if let Some(h) = map.get("h_max") {
        let h = rational(h, "system.h_max")?;
        if to_f64(&h) <= 0.0 {
            return Err(invalid("system.h_max", "must be positive"));
        }
        sys = sys.with_h_max(h);
    }
    Ok(sys)
}

fn energies(value: Option<&Value>, sys: &PiecewiseSystem) -> Result<EnergySpec, CliError> {
    let empty = Map::new();
    let map = match value {
        Some(v) => object(v, "energies")?,
        None => &empty,
    };
    let min = match map.get("min") {
        Some(v) => positive(v, "energies.min")?,
        None => 1e-4,
    };
    let max = match map.get("max") {
        Some(v) => positive(v, "energies.max")?,
        // the default range stays strictly inside the period annulus
        None => effective_h_max(sys).map(|h| h * (1.0 - 1e-9)).unwrap_or(0.5).min(0.5),
    };
    let count = match map.get("count") {
        Some(v) => count(v, "energies.count")?,
        None => 20,
    };
    let log = match map.get("scale").map(|s| s.as_str()) {
        None | Some(Some("log")) => true,
        Some(Some("linear")) => false,
        Some(_) => return Err(invalid("energies.scale", "expected \"log\" or \"linear\"")),
    };
    if count < 2 {
        return Err(invalid("energies.count", "must be at least 2"));
    }
    if max <= min {
        return Err(invalid("energies.max", "must exceed energies.min"));
    }
    Ok(EnergySpec { min, max, count, log })
}

fn rho_grid(value: Option<&Value>) -> Result<Vec<f64>, CliError> {
    let grid = match value {
        None => isochron_core::quadrature::rho_grid(1e-1, 1e-3, 9).map_err(|e| invalid("rho_grid", e.to_string()))?,
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| positive(v, &format!("rho_grid[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        Some(Value::Object(map)) => {
            let max = positive(required(map, "max", "rho_grid")?, "rho_grid.max")?;
            let min = positive(required(map, "min", "rho_grid")?, "rho_grid.min")?;
            let n = count(required(map, "count", "rho_grid")?, "rho_grid.count")?;
            isochron_core::quadrature::rho_grid(max, min, n).map_err(|e| invalid("rho_grid", e.to_string()))?
        }
        Some(_) => return Err(invalid("rho_grid", "expected an array of values or {max, min, count}")),
    };
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("rho_grid", "need at least two strictly decreasing values"));
    }
    Ok(grid)
}

fn tolerances(value: Option<&Value>) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    let Some(value) = value else { return Ok(tol) };
    let map = object(value, "tolerances")?;
    for (key, slot) in [
        ("quadrature_abs", &mut tol.quadrature_abs),
        ("ode_rel", &mut tol.ode_rel),
        ("ode_abs", &mut tol.ode_abs),
        ("event", &mut tol.event),
    ] {
        if let Some(v) = map.get(key) {
            *slot = positive(v, &format!("tolerances.{key}"))?;
        }
    }
    Ok(tol)
}

fn simulate(value: Option<&Value>, energies: &EnergySpec) -> Result<SimulateSpec, CliError> {
    let mut spec = SimulateSpec {
        start: SimulateStart::Energy(energies.min),
        trajectory_path: None,
        max_steps: SimulateOptions::default().max_steps,
    };
    let Some(value) = value else { return Ok(spec) };
    let map = object(value, "simulate")?;
    match (map.get("start"), map.get("energy")) {
        (Some(_), Some(_)) => return Err(invalid("simulate", "give either start or energy, not both")),
        (Some(Value::Array(p)), None) if p.len() == 2 => {
            spec.start = SimulateStart::Point([number(&p[0], "simulate.start[0]")?, number(&p[1], "simulate.start[1]")?]);
        }
        (Some(_), None) => return Err(invalid("simulate.start", "expected [x, y]")),
        (None, Some(h)) => spec.start = SimulateStart::Energy(positive(h, "simulate.energy")?),
        (None, None) => {}
    }
    if let Some(p) = map.get("trajectory_path") {
        let p = p.as_str().ok_or_else(|| invalid("simulate.trajectory_path", "expected a path string"))?;
        spec.trajectory_path = Some(PathBuf::from(p));
    }
    if let Some(n) = map.get("max_steps") {
        spec.max_steps = count(n, "simulate.max_steps")?;
        if spec.max_steps == 0 {
            return Err(invalid("simulate.max_steps", "must be positive"));
        }
    }
    Ok(spec)
}

fn probe(value: Option<&Value>) -> Result<Option<ProbeTarget>, CliError> {
    let Some(value) = value else { return Ok(None) };
    let map = object(value, "diverge")?;
    let plus = match required(map, "potential", "diverge")?.as_str() {
        Some("v_minus") => false,
        Some("v_plus") => true,
        _ => return Err(invalid("diverge.potential", "expected \"v_minus\" or \"v_plus\"")),
    };
    let side = match map.get("side").map(|s| s.as_str()) {
        None | Some(Some("left")) => Side::Left,
        Some(Some("right")) => Side::Right,
        Some(_) => return Err(invalid("diverge.side", "expected \"left\" or \"right\"")),
    };
    Ok(Some(ProbeTarget { plus, side }))
}

impl AnalysisConfig {
    pub fn from_json_text(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| invalid("$", format!("invalid JSON: {e}")))?;
        Self::from_value(&value, overrides)
    }

    pub fn from_value(value: &Value, overrides: &Overrides) -> Result<Self, CliError> {
        let map = object(value, "$")?;
        let system = system(required(map, "system", "$").map_err(|_| invalid("system", "missing required field"))?)?;
        let mut order = match map.get("order") {
            Some(v) => count(v, "order")?,
            None => DEFAULT_ORDER,
        };
        if let Some(o) = overrides.order {
            order = o;
        }
        if order == 0 {
            return Err(invalid("order", "must be at least 1"));
        }
        let energies = energies(map.get("energies"), &system)?;
        let rho_grid = rho_grid(map.get("rho_grid"))?;
        let tolerances = tolerances(map.get("tolerances"))?;
        let (mut format, mut out) = (None, None);
        if let Some(output) = map.get("output") {
            let output = object(output, "output")?;
            if let Some(f) = output.get("format") {
                format = Some(
                    f.as_str()
                        .and_then(OutputFormat::parse)
                        .ok_or_else(|| invalid("output.format", "expected \"csv\" or \"json\""))?,
                );
            }
            if let Some(p) = output.get("path") {
                out = Some(PathBuf::from(p.as_str().ok_or_else(|| invalid("output.path", "expected a path string"))?));
            }
        }
        if overrides.format.is_some() {
            format = overrides.format;
        }
        if overrides.out.is_some() {
            out = overrides.out.clone();
        }
        let simulate = simulate(map.get("simulate"), &energies)?;
        let probe = probe(map.get("diverge"))?;
        Ok(AnalysisConfig { system, order, energies, rho_grid, tolerances, format, out, simulate, probe })
    }

    pub fn simulate_options(&self) -> SimulateOptions {
        SimulateOptions {
            rel_tol: self.tolerances.ode_rel,
            abs_tol: self.tolerances.ode_abs,
            event_tol: self.tolerances.event,
            max_steps: self.simulate.max_steps,
            ..SimulateOptions::default()
        }
    }

    /// Effective configuration with every default filled in and a fixed key
    /// order; its hash identifies the analysis.
    pub fn canonical(&self) -> Value {
        let potential = |v: &Potential| {
            let coeffs: Map<String, Value> = v.coeffs().iter().map(|(k, c)| (k.to_string(), Value::String(format_q(c)))).collect();
            json!({"coeffs": coeffs, "domain_bound": float(v.domain_bound())})
        };
        let sys = &self.system;
        let start = match &self.simulate.start {
            SimulateStart::Point([x, y]) => json!({"start": [float(*x), float(*y)]}),
            SimulateStart::Energy(h) => json!({"energy": float(*h)}),
        };
        json!({
            "system": {
                "topology": sys.topology.label(),
                "v_minus": potential(&sys.v_minus),
                "v_plus": potential(&sys.v_plus),
                "h_max": sys.h_max.as_ref().map(|h| Value::String(format_q(h))).unwrap_or(Value::Null),
            },
            "order": self.order,
            "energies": {
                "min": float(self.energies.min),
                "max": float(self.energies.max),
                "count": self.energies.count,
                "scale": if self.energies.log { "log" } else { "linear" },
            },
            "rho_grid": self.rho_grid.iter().map(|r| float(*r)).collect::<Vec<_>>(),
            "tolerances": {
                "quadrature_abs": float(self.tolerances.quadrature_abs),
                "ode_rel": float(self.tolerances.ode_rel),
                "ode_abs": float(self.tolerances.ode_abs),
                "event": float(self.tolerances.event),
            },
            "simulate": start,
            "diverge": self.probe.map(|p| json!({
                "potential": if p.plus { "v_plus" } else { "v_minus" },
                "side": p.side.label(),
            })).unwrap_or(Value::Null),
        })
    }
}
