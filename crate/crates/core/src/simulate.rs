//! Direct simulation of the piecewise flow.
//!
//! Dormand–Prince 5(4) with its free fourth-order interpolant. Switching
//! events are found on the interpolant (sign scan at several points per
//! step, then bisection) and polished with Newton iterations that take fresh
//! Runge–Kutta steps from the start of the step, so the event state has the
//! accuracy of an ordinary step rather than of the interpolant.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::potential::{classify_system, CenterCase, FloatPoly, PiecewiseSystem, Topology};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Target |switching function| at located events.
    pub event_tol: f64,
    /// Crossings closer than this count as a closed orbit.
    pub closure_tol: f64,
    pub max_step: f64,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions { rel_tol: 1e-10, abs_tol: 1e-12, max_steps: 1_000_000, event_tol: 1e-13, closure_tol: 1e-7, max_step: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimulateError {
    EventNotBracketed { t: f64 },
    MaxStepsExceeded { steps: usize },
    EscapedDomain { x: f64, y: f64 },
    /// Both fields push toward (or along) the switching line.
    Sliding { x: f64, y: f64 },
    NotMonodromic(String),
    BadOptions(&'static str),
}

impl fmt::Display for SimulateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimulateError::EventNotBracketed { t } => write!(f, "switching event near t = {t} could not be bracketed"),
            SimulateError::MaxStepsExceeded { steps } => write!(f, "no return after {steps} steps"),
            SimulateError::EscapedDomain { x, y } => write!(f, "orbit left the polynomial domain at ({x}, {y})"),
            SimulateError::Sliding { x, y } => write!(f, "sliding motion on the switching line at ({x}, {y})"),
            SimulateError::NotMonodromic(reason) => write!(f, "origin is not monodromic: {reason}"),
            SimulateError::BadOptions(why) => write!(f, "bad options: {why}"),
        }
    }
}

/// Half-plane of the state: `Minus` where the switching function is negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Minus,
    Plus,
}

impl Region {
    fn sign(self) -> f64 {
        match self {
            Region::Minus => -1.0,
            Region::Plus => 1.0,
        }
    }

    fn other(self) -> Region {
        match self {
            Region::Minus => Region::Plus,
            Region::Plus => Region::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::Minus => "minus",
            Region::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEvent {
    pub t: f64,
    pub state: [f64; 2],
    pub from: Region,
    pub to: Region,
    /// Switching function at the accepted event state.
    pub residual: f64,
}

/// A sampled state and the half-plane whose field produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub t: f64,
    pub state: [f64; 2],
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRun {
    pub start: [f64; 2],
    /// Accepted step endpoints, events included.
    pub states: Vec<OrbitSample>,
    pub events: Vec<SwitchEvent>,
    pub return_time: f64,
    pub return_point: [f64; 2],
    /// Return crossing minus start crossing, along the switching line.
    pub displacement: f64,
    pub closed: bool,
    /// Largest |H − H_segment_start| over all smooth segments.
    pub max_energy_drift: f64,
}

/// Float form of the system: fields, switching function and energies.
#[derive(Debug, Clone)]
pub struct FlowModel {
    topology: Topology,
    minus: FloatPoly,
    plus: FloatPoly,
    minus_bound: f64,
    plus_bound: f64,
}

impl FlowModel {
    pub fn new(sys: &PiecewiseSystem) -> Self {
        FlowModel {
            topology: sys.topology,
            minus: sys.v_minus.float_form(),
            plus: sys.v_plus.float_form(),
            minus_bound: sys.v_minus.domain_bound(),
            plus_bound: sys.v_plus.domain_bound(),
        }
    }

    pub fn switching(&self, s: [f64; 2]) -> f64 {
        match self.topology {
            Topology::VerticalSwitch => s[0],
            _ => s[1],
        }
    }

    /// Coordinate along the switching line.
    pub fn along(&self, s: [f64; 2]) -> f64 {
        match self.topology {
            Topology::VerticalSwitch => s[1],
            _ => s[0],
        }
    }

    pub fn field(&self, region: Region, s: [f64; 2]) -> [f64; 2] {
        let [x, y] = s;
        match (self.topology, region) {
            (Topology::HorizontalMixed, Region::Minus) => [self.minus.derivative(y), -x],
            (_, Region::Minus) => [y, -self.minus.derivative(x)],
            (_, Region::Plus) => [y, -self.plus.derivative(x)],
        }
    }

    pub fn energy(&self, region: Region, s: [f64; 2]) -> f64 {
        let [x, y] = s;
        match (self.topology, region) {
            (Topology::HorizontalMixed, Region::Minus) => 0.5 * x * x + self.minus.value(y),
            (_, Region::Minus) => 0.5 * y * y + self.minus.value(x),
            (_, Region::Plus) => 0.5 * y * y + self.plus.value(x),
        }
    }

    fn normal_rate(&self, region: Region, s: [f64; 2]) -> f64 {
        let f = self.field(region, s);
        match self.topology {
            Topology::VerticalSwitch => f[0],
            _ => f[1],
        }
    }

    fn in_domain(&self, region: Region, s: [f64; 2]) -> bool {
        let [x, y] = s;
        match (self.topology, region) {
            (Topology::HorizontalMixed, Region::Minus) => y.abs() <= self.minus_bound && x.abs() <= self.plus_bound,
            (_, Region::Minus) => x.abs() <= self.minus_bound,
            (_, Region::Plus) => x.abs() <= self.plus_bound,
        }
    }

    /// Region entered from a point on the line, or `None` when the two
    /// fields disagree (sliding) or are tangent.
    fn entry_region(&self, s: [f64; 2]) -> Option<Region> {
        let a = self.normal_rate(Region::Minus, s);
        let b = self.normal_rate(Region::Plus, s);
        if a > 0.0 && b > 0.0 {
            Some(Region::Plus)
        } else if a < 0.0 && b < 0.0 {
            Some(Region::Minus)
        } else {
            None
        }
    }
}

// Dormand–Prince 5(4) tableau; the field is autonomous so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

struct Step {
    y_new: [f64; 2],
    k: [[f64; 2]; 7],
    error: f64,
}

fn axpy(y: [f64; 2], h: f64, terms: &[([f64; 2], f64)]) -> [f64; 2] {
    let mut out = y;
    for (k, a) in terms {
        out[0] += h * a * k[0];
        out[1] += h * a * k[1];
    }
    out
}

fn dp_step(f: &impl Fn([f64; 2]) -> [f64; 2], y: [f64; 2], k1: [f64; 2], h: f64, opts: &SimulateOptions) -> Step {
    let mut k = [[0.0; 2]; 7];
    k[0] = k1;
    for stage in 1..7 {
        let terms: Vec<([f64; 2], f64)> = (0..stage).map(|j| (k[j], A[stage][j])).collect();
        k[stage] = f(axpy(y, h, &terms));
    }
    let y_new = axpy(y, h, &(0..6).map(|j| (k[j], A[6][j])).collect::<Vec<_>>());
    let mut sum = 0.0;
    for i in 0..2 {
        let err: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h;
        let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
        sum += (err / scale) * (err / scale);
    }
    Step { y_new, k, error: libm::sqrt(sum / 2.0) }
}

/// Interpolant over an accepted step.
struct Dense {
    r: [[f64; 2]; 5],
}

impl Dense {
    fn new(y: [f64; 2], step: &Step, h: f64) -> Self {
        let mut r = [[0.0; 2]; 5];
        for i in 0..2 {
            let diff = step.y_new[i] - y[i];
            let bspl = h * step.k[0][i] - diff;
            r[0][i] = y[i];
            r[1][i] = diff;
            r[2][i] = bspl;
            r[3][i] = diff - h * step.k[6][i] - bspl;
            r[4][i] = h * (0..7).map(|j| D[j] * step.k[j][i]).sum::<f64>();
        }
        Dense { r }
    }

    fn at(&self, theta: f64) -> [f64; 2] {
        let t1 = 1.0 - theta;
        let r = &self.r;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = r[0][i] + theta * (r[1][i] + t1 * (r[2][i] + theta * (r[3][i] + t1 * r[4][i])));
        }
        out
    }
}

const EVENT_SAMPLES: usize = 8;

/// Bisection for the sign change of `g` on [t0, t1] until |g| ≤ `tol` or
/// the bracket can no longer shrink.
pub fn locate_switch_event(g: impl Fn(f64) -> f64, t0: f64, t1: f64, tol: f64) -> Result<f64, SimulateError> {
    let (mut lo, mut hi) = (t0, t1);
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if (g_lo > 0.0) == (g_hi > 0.0) || !g_lo.is_finite() || !g_hi.is_finite() {
        return Err(SimulateError::EventNotBracketed { t: t0 });
    }
    let lo_positive = g_lo > 0.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid.abs() <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        if (g_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[allow(clippy::too_many_arguments)]
/// Locates the first crossing of the switching line inside an accepted step
/// from `y` (region `region`) of size `h`. Returns (θ, state).
fn locate_in_step(
    model: &FlowModel,
    region: Region,
    f: &impl Fn([f64; 2]) -> [f64; 2],
    y: [f64; 2],
    k1: [f64; 2],
    h: f64,
    dense: &Dense,
    opts: &SimulateOptions,
    t0: f64,
) -> Result<Option<(f64, [f64; 2])>, SimulateError> {
    let sign = region.sign();
    let outside = |s: [f64; 2]| model.switching(s) * sign < 0.0;
    let mut lo = 0.0;
    let mut hi = None;
    for j in 1..=EVENT_SAMPLES {
        let theta = j as f64 / EVENT_SAMPLES as f64;
        let s = if j == EVENT_SAMPLES { dense.at(1.0) } else { dense.at(theta) };
        if outside(s) {
            hi = Some(theta);
            break;
        }
        lo = theta;
    }
    let Some(hi) = hi else { return Ok(None) };
    // inside is positive; the step start may sit exactly on the line after
    // the previous event and still counts as inside
    let inside = |theta: f64| if theta == 0.0 { f64::MIN_POSITIVE } else { model.switching(dense.at(theta)) * sign };
    let mut theta = locate_switch_event(inside, lo, hi, opts.event_tol)?;
    // Newton polish on direct steps of size θh
    let mut state = dp_step(f, y, k1, theta * h, opts).y_new;
    for _ in 0..4 {
        let g = model.switching(state);
        if g.abs() <= opts.event_tol {
            break;
        }
        let rate = model.normal_rate(region, state);
        if rate == 0.0 {
            break;
        }
        let next = theta - g / (rate * h);
        if !(next > 0.0 && next <= 1.5) {
            break;
        }
        theta = next;
        state = dp_step(f, y, k1, theta * h, opts).y_new;
    }
    if !(theta.is_finite()) || model.switching(state).abs() > 1e3 * opts.event_tol.max(opts.abs_tol) {
        return Err(SimulateError::EventNotBracketed { t: t0 + theta * h });
    }
    Ok(Some((theta, state)))
}

#[allow(clippy::too_many_arguments)]
/// Integrates within `region` from `start` until the switching line is hit.
/// Returns the event; appends accepted states to `states`.
pub fn run_to_switch(
    model: &FlowModel,
    region: Region,
    t_start: f64,
    start: [f64; 2],
    opts: &SimulateOptions,
    states: &mut Vec<OrbitSample>,
    steps_left: &mut usize,
    drift: &mut f64,
) -> Result<SwitchEvent, SimulateError> {
    let f = |s: [f64; 2]| model.field(region, s);
    let h_ref = model.energy(region, start);
    let mut t = t_start;
    let mut y = start;
    let mut k1 = f(y);
    let norm_y = libm::hypot(y[0], y[1]);
    let norm_f = libm::hypot(k1[0], k1[1]);
    let mut h = if norm_y > 1e-5 && norm_f > 1e-5 { 0.01 * norm_y / norm_f } else { 1e-6 };
    h = h.min(opts.max_step);
    loop {
        if *steps_left == 0 {
            return Err(SimulateError::MaxStepsExceeded { steps: opts.max_steps });
        }
        *steps_left -= 1;
        let step = dp_step(&f, y, k1, h, opts);
        if !step.error.is_finite() {
            h *= 0.2;
            continue;
        }
        let factor = if step.error == 0.0 { 5.0 } else { (0.9 * libm::pow(step.error, -0.2)).clamp(0.2, 5.0) };
        if step.error > 1.0 {
            h *= factor.min(1.0);
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(SimulateError::EventNotBracketed { t });
            }
            continue;
        }
        let dense = Dense::new(y, &step, h);
        if let Some((theta, state)) = locate_in_step(model, region, &f, y, k1, h, &dense, opts, t)? {
            let t_event = t + theta * h;
            *drift = drift.max((model.energy(region, state) - h_ref).abs());
            let event = SwitchEvent { t: t_event, state, from: region, to: region.other(), residual: model.switching(state) };
            states.push(OrbitSample { t: t_event, state, region });
            return Ok(event);
        }
        t += h;
        y = step.y_new;
        k1 = step.k[6];
        if !model.in_domain(region, y) {
            return Err(SimulateError::EscapedDomain { x: y[0], y: y[1] });
        }
        *drift = drift.max((model.energy(region, y) - h_ref).abs());
        states.push(OrbitSample { t, state: y, region });
        h = (h * factor).min(opts.max_step);
    }
}

/// Follows the orbit from `start` on the switching line through two switching
/// events; the second is the first return to the starting half-line.
pub fn integrate_return(sys: &PiecewiseSystem, start: [f64; 2], opts: &SimulateOptions) -> Result<OrbitRun, SimulateError> {
    if !(opts.rel_tol > 0.0 && opts.abs_tol > 0.0 && opts.max_steps > 0 && opts.max_step > 0.0) {
        return Err(SimulateError::BadOptions("tolerances, step limits must be positive"));
    }
    if let CenterCase::NotMonodromic { reason } = classify_system(sys) {
        return Err(SimulateError::NotMonodromic(reason));
    }
    let model = FlowModel::new(sys);
    let mut region = if model.switching(start) == 0.0 {
        model.entry_region(start).ok_or(SimulateError::Sliding { x: start[0], y: start[1] })?
    } else if model.switching(start) > 0.0 {
        Region::Plus
    } else {
        Region::Minus
    };
    let mut states = alloc::vec![OrbitSample { t: 0.0, state: start, region }];
    let mut events = Vec::new();
    let mut steps_left = opts.max_steps;
    let mut drift: f64 = 0.0;
    let mut t = 0.0;
    let mut y = start;
    while events.len() < 2 {
        let event = run_to_switch(&model, region, t, y, opts, &mut states, &mut steps_left, &mut drift)?;
        t = event.t;
        y = event.state;
        // project onto the line and check transversality
        match model.topology {
            Topology::VerticalSwitch => y[0] = 0.0,
            _ => y[1] = 0.0,
        }
        let next = region.other();
        if model.normal_rate(next, y) * next.sign() <= 0.0 {
            return Err(SimulateError::Sliding { x: y[0], y: y[1] });
        }
        events.push(event);
        region = next;
    }
    let last = events[1];
    let displacement = model.along(last.state) - model.along(start);
    Ok(OrbitRun {
        start,
        states,
        events,
        return_time: last.t,
        return_point: last.state,
        displacement,
        closed: displacement.abs() <= opts.closure_tol,
        max_energy_drift: drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;
    use core::f64::consts::{PI, SQRT_2};

    fn p(terms: &[(u32, i64)]) -> Potential {
        Potential::from_i64(terms).unwrap()
    }

    #[test]
    fn event_bisection() {
        let t = locate_switch_event(|t| 1.0 - t, 0.5, 1.5, 1e-13).unwrap();
        assert!((t - 1.0).abs() < 1e-13);
        let t = locate_switch_event(libm::sin, 3.0, 3.3, 1e-13).unwrap();
        assert!((t - PI).abs() < 1e-13);
        assert!(matches!(
            locate_switch_event(|t| (t - 1.0) * (t - 1.0), 0.5, 1.5, 1e-13),
            Err(SimulateError::EventNotBracketed { .. })
        ));
    }

    #[test]
    fn fold_fold_return() {
        let sys = PiecewiseSystem::vertical(p(&[(1, -1)]), p(&[(1, 1)]));
        let run = integrate_return(&sys, [0.0, 0.5], &SimulateOptions::default()).unwrap();
        assert!((run.return_time - 2.0).abs() < 1e-9, "{}", run.return_time);
        assert!(run.closed);
    }

    #[test]
    fn harmonic_return() {
        let sys = PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)]));
        let run = integrate_return(&sys, [0.0, 0.5], &SimulateOptions::default()).unwrap();
        assert!((run.return_time - PI * SQRT_2).abs() < 1e-8, "{}", run.return_time);
        assert!(run.closed);
        assert_eq!(run.events.len(), 2);
        assert!(run.events.iter().all(|e| e.residual.abs() <= 1e-12));
        assert!(run.max_energy_drift < 1e-9);
    }

    #[test]
    fn mixed_return_matches_closed_form() {
        let sys = PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1)]));
        let run = integrate_return(&sys, [0.1, 0.0], &SimulateOptions::default()).unwrap();
        assert!((run.return_time - (PI / SQRT_2 + 0.2)).abs() < 1e-8);
        assert!((run.events[0].state[0] + 0.1).abs() < 1e-9);
    }

    #[test]
    fn odd_mixed_orbit_does_not_close() {
        let sys = PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1), (3, 1)]));
        let run = integrate_return(&sys, [0.1, 0.0], &SimulateOptions::default()).unwrap();
        assert!(!run.closed);
        assert!((run.displacement + 0.009_167_308_680_401_61).abs() < 1e-8, "{}", run.displacement);
    }

    #[test]
    fn rejects_sliding_start() {
        // the origin itself is an equilibrium, neither field crosses
        let sys = PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)]));
        assert!(matches!(integrate_return(&sys, [0.0, 0.0], &SimulateOptions::default()), Err(SimulateError::Sliding { .. })));
    }
}
