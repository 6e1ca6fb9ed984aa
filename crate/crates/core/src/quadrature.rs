//! Numerical period function.
//!
//! The transit time across one half-plane is 2∫ dx/√(2(h − V(x))) from the
//! turning point x_t to the switching line. Writing h − V(x) = (x_t − x)·W(x)
//! and substituting x = x_t ∓ v² turns the inverse-square-root endpoint
//! singularity into the smooth integrand √2/√|W(x)|, with W evaluated as a
//! cancellation-free divided difference. Degenerate and cusp sides use the
//! scaling x = ρs, h = ρ^K, which keeps the integrand regular as h → 0.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::numeric::{bracketed_root, fit_line, integrate_adaptive};
use crate::potential::{classify_side, classify_system, CenterCase, FloatPoly, PiecewiseSystem, Potential, Side, SideBehavior, Topology};
use crate::rational::to_f64;

/// Absolute tolerance of each side integral.
pub const QUADRATURE_ABS_TOL: f64 = 1e-12;
/// Relative tolerance of turning points.
pub const TURNING_POINT_REL_TOL: f64 = 1e-14;
/// Below this |V′(x_t)| the generic route refuses the turning point.
pub const SIMPLE_TURNING_SLOPE: f64 = 1e-10;
const MAX_INTERVALS: usize = 400;
const BARRIER_SCAN_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub enum QuadratureError {
    NoTurningPoint { side: Side, h: f64 },
    InvalidSide { side: Side, reason: String },
    NonSimpleTurningPoint { x_t: f64, slope: f64 },
    NotDegenerate,
    NotMonodromic(String),
    BadEnergy(f64),
    BadGrid(&'static str),
    Inaccurate { error: f64 },
}

impl fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadratureError::NoTurningPoint { side, h } => {
                write!(f, "no turning point on the {} side at energy {h} (outside the period annulus)", side.label())
            }
            QuadratureError::InvalidSide { side, reason } => write!(f, "{} side invalid: {reason}", side.label()),
            QuadratureError::NonSimpleTurningPoint { x_t, slope } => {
                write!(f, "turning point {x_t} is not simple (V'(x_t) = {slope}); use the divergence probe")
            }
            QuadratureError::NotDegenerate => write!(f, "divergence probe needs a degenerate center or cusp side"),
            QuadratureError::NotMonodromic(reason) => write!(f, "origin is not monodromic: {reason}"),
            QuadratureError::BadEnergy(h) => write!(f, "energy {h} must be positive and finite"),
            QuadratureError::BadGrid(why) => write!(f, "bad grid: {why}"),
            QuadratureError::Inaccurate { error } => write!(f, "quadrature did not converge (error estimate {error})"),
        }
    }
}

/// One monotone branch of a potential, in float form.
#[derive(Debug, Clone)]
struct Branch {
    poly: FloatPoly,
    side: Side,
    /// |x| of the first critical point away from the origin (or the domain bound).
    limit: f64,
    /// V at that point: energies at or above it have no turning point.
    barrier: f64,
    leading_order: u32,
    leading_coeff: f64,
}

impl Branch {
    fn new(v: &Potential, side: Side) -> Result<Self, QuadratureError> {
        let behavior = classify_side(v, side);
        if let SideBehavior::Invalid { reason } = behavior {
            return Err(QuadratureError::InvalidSide { side, reason });
        }
        let (k, c) = v.leading();
        Ok(Self::from_poly(v.float_form(), side, v.domain_bound(), k, to_f64(c)))
    }

    fn from_poly(poly: FloatPoly, side: Side, bound: f64, leading_order: u32, leading_coeff: f64) -> Self {
        let sigma = side.sign();
        // V must increase away from the origin along the branch.
        let rising = |r: f64| sigma * poly.derivative(sigma * r) > 0.0;
        let mut limit = bound;
        let mut previous = 0.0;
        for j in 1..=BARRIER_SCAN_POINTS {
            let t = j as f64 / BARRIER_SCAN_POINTS as f64;
            let r = bound * t * t;
            if !rising(r) {
                limit = bracketed_root(
                    |s| if rising(s) { -1.0 } else { 1.0 },
                    previous,
                    r,
                    1e-15,
                );
                break;
            }
            previous = r;
        }
        let barrier = poly.value(sigma * limit);
        Branch { poly, side, limit, barrier, leading_order, leading_coeff }
    }

    fn value_at(&self, r: f64) -> f64 {
        self.poly.value(self.side.sign() * r)
    }

    /// |x_t| with V(σ|x_t|) = h.
    fn turning_point(&self, h: f64) -> Result<f64, QuadratureError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(QuadratureError::BadEnergy(h));
        }
        if h >= self.barrier {
            return Err(QuadratureError::NoTurningPoint { side: self.side, h });
        }
        let guess = libm::pow(h / self.leading_coeff.abs(), 1.0 / self.leading_order as f64);
        let mut lo = 0.0;
        let mut hi = guess.min(self.limit);
        if !(hi > 0.0) {
            hi = self.limit;
        }
        while self.value_at(hi) < h {
            lo = hi;
            if hi >= self.limit {
                return Err(QuadratureError::NoTurningPoint { side: self.side, h });
            }
            hi = (2.0 * hi).min(self.limit);
        }
        Ok(bracketed_root(|r| self.value_at(r) - h, lo, hi, TURNING_POINT_REL_TOL))
    }

    /// 2∫ dx/√(2(h − V)) across the branch, via x = x_t ∓ v².
    fn transit(&self, h: f64, check_simple: bool, abs_tol: f64) -> Result<f64, QuadratureError> {
        let r_t = self.turning_point(h)?;
        let sigma = self.side.sign();
        let x_t = sigma * r_t;
        let slope = self.poly.derivative(x_t);
        if check_simple && slope.abs() < SIMPLE_TURNING_SLOPE {
            return Err(QuadratureError::NonSimpleTurningPoint { x_t, slope });
        }
        let poly = &self.poly;
        let integrand = |v: f64| {
            let x = x_t - sigma * v * v;
            core::f64::consts::SQRT_2 / libm::sqrt(poly.divided_difference(x, x_t).abs())
        };
        let result = integrate_adaptive(integrand, 0.0, libm::sqrt(r_t), abs_tol / 2.0, MAX_INTERVALS);
        if !(result.error <= abs_tol) || !result.value.is_finite() {
            return Err(QuadratureError::Inaccurate { error: result.error });
        }
        Ok(2.0 * result.value)
    }
}

/// Energy above which a turning point no longer exists on this side (the
/// potential at its first critical point, or at the domain bound).
pub fn barrier_energy(v: &Potential, side: Side) -> Result<f64, QuadratureError> {
    Ok(Branch::new(v, side)?.barrier)
}

/// The root of V(x) = h nearest the origin on `side`.
pub fn turning_point(v: &Potential, h: f64, side: Side) -> Result<f64, QuadratureError> {
    let branch = Branch::new(v, side)?;
    Ok(side.sign() * branch.turning_point(h)?)
}

/// Full transit time across the half-plane on `side` at energy h.
///
/// Degenerate centers and cusps go through the ρ-scaled integrand.
pub fn branch_time_numeric(v: &Potential, h: f64, side: Side) -> Result<f64, QuadratureError> {
    branch_time_numeric_with(v, h, side, QUADRATURE_ABS_TOL)
}

/// [`branch_time_numeric`] with an explicit absolute tolerance.
pub fn branch_time_numeric_with(v: &Potential, h: f64, side: Side, abs_tol: f64) -> Result<f64, QuadratureError> {
    match classify_side(v, side) {
        SideBehavior::DegenerateCenter { .. } | SideBehavior::Cusp { .. } => {
            let k = v.leading().0;
            let rho = libm::pow(h, 1.0 / k as f64);
            scaled_transit(v, side, rho, abs_tol)
        }
        _ => Branch::new(v, side)?.transit(h, true, abs_tol),
    }
}

/// Transit at h = ρ^K for K the flatness of the side:
/// T = ρ^{1−K/2}·transit(Ṽ, 1) with Ṽ(s) = V(ρs)/ρ^K.
fn scaled_transit(v: &Potential, side: Side, rho: f64, abs_tol: f64) -> Result<f64, QuadratureError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(QuadratureError::BadEnergy(rho));
    }
    let branch = Branch::new(v, side)?;
    let k = branch.leading_order;
    let mut coeffs = alloc::vec![0.0; v.degree() as usize + 1];
    for (j, c) in v.coeffs() {
        coeffs[*j as usize] = to_f64(c) * libm::pow(rho, (*j - k) as f64);
    }
    let scaled = Branch {
        poly: FloatPoly::from_coeffs(coeffs),
        side,
        limit: branch.limit / rho,
        barrier: branch.barrier / libm::pow(rho, k as f64),
        leading_order: k,
        leading_coeff: branch.leading_coeff,
    };
    Ok(libm::pow(rho, 1.0 - k as f64 / 2.0) * scaled.transit(1.0, false, abs_tol)?)
}

/// One row of a period table.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodRow {
    pub h: f64,
    pub t_total: f64,
    pub t_minus: f64,
    pub t_plus: f64,
    pub cross_1: f64,
    pub cross_2: f64,
    pub non_closed: bool,
    pub displacement: f64,
}

/// Returns whose crossing displacement exceeds this are flagged as not closed.
pub const CLOSURE_THRESHOLD: f64 = 1e-7;

/// Period (or first-return time) at energy h.
///
/// Vertical switching line: both sides at common energy h, crossings
/// (0, ±√(2h)). Horizontal topologies: h is the energy of the upper arc and
/// the orbit starts at (x_r(h), 0), the right turning point of V⁺; the
/// return time is measured back to the positive x-axis.
pub fn period_numeric(sys: &PiecewiseSystem, h: f64) -> Result<PeriodRow, QuadratureError> {
    period_numeric_with(sys, h, QUADRATURE_ABS_TOL)
}

/// [`period_numeric`] with an explicit absolute tolerance per side integral.
pub fn period_numeric_with(sys: &PiecewiseSystem, h: f64, abs_tol: f64) -> Result<PeriodRow, QuadratureError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(QuadratureError::BadEnergy(h));
    }
    if let CenterCase::NotMonodromic { reason } = classify_system(sys) {
        return Err(QuadratureError::NotMonodromic(reason));
    }
    match sys.topology {
        Topology::VerticalSwitch => {
            let t_minus = branch_time_numeric_with(&sys.v_minus, h, Side::Left, abs_tol)?;
            let t_plus = branch_time_numeric_with(&sys.v_plus, h, Side::Right, abs_tol)?;
            let y0 = libm::sqrt(2.0 * h);
            Ok(PeriodRow { h, t_total: t_minus + t_plus, t_minus, t_plus, cross_1: y0, cross_2: -y0, non_closed: false, displacement: 0.0 })
        }
        Topology::HorizontalMixed => {
            let a = turning_point(&sys.v_plus, h, Side::Right)?;
            let t_minus = branch_time_numeric_with(&sys.v_minus, 0.5 * a * a, Side::Left, abs_tol)?;
            let upper_h = sys.v_plus.float_form().value(-a);
            let t_plus = center_arc_time(&sys.v_plus, upper_h, abs_tol)?;
            let b = turning_point(&sys.v_plus, upper_h, Side::Right)?;
            let displacement = b - a;
            Ok(PeriodRow {
                h,
                t_total: t_minus + t_plus,
                t_minus,
                t_plus,
                cross_1: a,
                cross_2: -a,
                non_closed: displacement.abs() > CLOSURE_THRESHOLD,
                displacement,
            })
        }
        Topology::HorizontalPotentials => {
            let a = turning_point(&sys.v_plus, h, Side::Right)?;
            let lower_h = sys.v_minus.float_form().value(a);
            let t_minus = center_arc_time(&sys.v_minus, lower_h, abs_tol)?;
            let c = turning_point(&sys.v_minus, lower_h, Side::Left)?;
            let upper_h = sys.v_plus.float_form().value(c);
            let t_plus = center_arc_time(&sys.v_plus, upper_h, abs_tol)?;
            let b = turning_point(&sys.v_plus, upper_h, Side::Right)?;
            let displacement = b - a;
            Ok(PeriodRow {
                h,
                t_total: t_minus + t_plus,
                t_minus,
                t_plus,
                cross_1: a,
                cross_2: c,
                non_closed: displacement.abs() > CLOSURE_THRESHOLD,
                displacement,
            })
        }
    }
}

/// Time along the arc of a center potential between its two turning points
/// at energy h (half of the smooth period).
fn center_arc_time(v: &Potential, h: f64, abs_tol: f64) -> Result<f64, QuadratureError> {
    Ok(0.5 * (branch_time_numeric_with(v, h, Side::Left, abs_tol)? + branch_time_numeric_with(v, h, Side::Right, abs_tol)?))
}

/// Signed change of the crossing coordinate after one full turn, from the
/// level-set geometry alone. Zero means the orbit closes.
pub fn return_displacement(sys: &PiecewiseSystem, start_crossing: f64) -> Result<f64, QuadratureError> {
    if let CenterCase::NotMonodromic { reason } = classify_system(sys) {
        return Err(QuadratureError::NotMonodromic(reason));
    }
    if !(start_crossing > 0.0 && start_crossing.is_finite()) {
        return Err(QuadratureError::BadEnergy(start_crossing));
    }
    match sys.topology {
        // H is continuous across x = 0, crossings (0, ±√(2h)) always match
        Topology::VerticalSwitch => Ok(0.0),
        Topology::HorizontalMixed => {
            let upper_h = sys.v_plus.float_form().value(-start_crossing);
            Ok(turning_point(&sys.v_plus, upper_h, Side::Right)? - start_crossing)
        }
        Topology::HorizontalPotentials => {
            let lower_h = sys.v_minus.float_form().value(start_crossing);
            let c = turning_point(&sys.v_minus, lower_h, Side::Left)?;
            let upper_h = sys.v_plus.float_form().value(c);
            Ok(turning_point(&sys.v_plus, upper_h, Side::Right)? - start_crossing)
        }
    }
}

/// Crossing coordinate used by the expansion of `sys` at energy h: y₀ = √(2h)
/// for the vertical line, x_r(h) for the horizontal ones.
pub fn crossing_of_energy(sys: &PiecewiseSystem, h: f64) -> Result<f64, QuadratureError> {
    match sys.topology {
        Topology::VerticalSwitch => Ok(libm::sqrt(2.0 * h)),
        _ => turning_point(&sys.v_plus, h, Side::Right),
    }
}

/// 0.9 × the smallest energy at which a turning point stops existing on any
/// side the orbit visits.
pub fn default_h_max(sys: &PiecewiseSystem) -> Result<f64, QuadratureError> {
    let barrier = match sys.topology {
        Topology::VerticalSwitch => {
            barrier_energy(&sys.v_minus, Side::Left)?.min(barrier_energy(&sys.v_plus, Side::Right)?)
        }
        Topology::HorizontalMixed => {
            let upper = barrier_energy(&sys.v_plus, Side::Left)?.min(barrier_energy(&sys.v_plus, Side::Right)?);
            // the lower arc at crossing a has energy a²/2
            let lower = barrier_energy(&sys.v_minus, Side::Left)?;
            let right = Branch::new(&sys.v_plus, Side::Right)?;
            let a_max = libm::sqrt(2.0 * lower).min(right.limit);
            upper.min(right.value_at(a_max))
        }
        Topology::HorizontalPotentials => [
            barrier_energy(&sys.v_plus, Side::Left)?,
            barrier_energy(&sys.v_plus, Side::Right)?,
            barrier_energy(&sys.v_minus, Side::Left)?,
            barrier_energy(&sys.v_minus, Side::Right)?,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min),
    };
    Ok(0.9 * barrier)
}

/// The configured h_max if any, else [`default_h_max`].
pub fn effective_h_max(sys: &PiecewiseSystem) -> Result<f64, QuadratureError> {
    match &sys.h_max {
        Some(h) => Ok(to_f64(h)),
        None => default_h_max(sys),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodTable {
    pub rows: Vec<PeriodRow>,
    pub case: String,
    pub quadrature_abs_tol: f64,
    pub turning_point_rel_tol: f64,
}

/// `count` energies in [min, max], log- or linearly spaced, increasing.
pub fn energy_grid(min: f64, max: f64, count: usize, log: bool) -> Result<Vec<f64>, QuadratureError> {
    if !(min > 0.0 && max > min && count >= 2) {
        return Err(QuadratureError::BadGrid("need 0 < min < max and count >= 2"));
    }
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            // endpoints exactly as given
            if i == 0 {
                min
            } else if i == count - 1 {
                max
            } else if log {
                libm::exp(libm::log(min) + t * (libm::log(max) - libm::log(min)))
            } else {
                min + t * (max - min)
            }
        })
        .collect())
}

/// Energies must increase strictly and lie in (0, h_max).
pub fn validate_energies(sys: &PiecewiseSystem, energies: &[f64]) -> Result<(), QuadratureError> {
    let h_max = effective_h_max(sys)?;
    if energies.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(QuadratureError::BadGrid("energies must be strictly increasing"));
    }
    if energies.iter().any(|&h| !(h > 0.0 && h < h_max)) {
        return Err(QuadratureError::BadGrid("energies must lie in (0, h_max)"));
    }
    Ok(())
}

pub fn period_table(sys: &PiecewiseSystem, energies: &[f64], abs_tol: f64) -> Result<PeriodTable, QuadratureError> {
    validate_energies(sys, energies)?;
    let rows = energies.iter().map(|&h| period_numeric_with(sys, h, abs_tol)).collect::<Result<Vec<_>, _>>()?;
    Ok(assemble_table(sys, rows, abs_tol))
}

pub fn assemble_table(sys: &PiecewiseSystem, rows: Vec<PeriodRow>, abs_tol: f64) -> PeriodTable {
    PeriodTable {
        rows,
        case: String::from(classify_system(sys).label()),
        quadrature_abs_tol: abs_tol,
        turning_point_rel_tol: TURNING_POINT_REL_TOL,
    }
}

/// Log–log fit of the side transit time against the scale ρ, h = ρ^K.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceFit {
    pub rho_values: Vec<f64>,
    pub times: Vec<f64>,
    pub fitted_exponent: f64,
    /// −(2(r−1)+i)/2.
    pub predicted_exponent: f64,
    pub r: u32,
    /// 0 for a degenerate center, 1 for a cusp.
    pub i: u32,
}

impl DivergenceFit {
    pub fn relative_mismatch(&self) -> f64 {
        ((self.fitted_exponent - self.predicted_exponent) / self.predicted_exponent).abs()
    }
}

/// `count` log-spaced values from `max` down to `min`.
pub fn rho_grid(max: f64, min: f64, count: usize) -> Result<Vec<f64>, QuadratureError> {
    let mut grid = energy_grid(min, max, count, true)?;
    grid.reverse();
    Ok(grid)
}

pub fn divergence_probe(v: &Potential, side: Side, rho_grid: &[f64]) -> Result<DivergenceFit, QuadratureError> {
    let (r, i) = match classify_side(v, side) {
        SideBehavior::DegenerateCenter { r } => (r, 0),
        SideBehavior::Cusp { r } => (r, 1),
        _ => return Err(QuadratureError::NotDegenerate),
    };
    if rho_grid.len() < 2 {
        return Err(QuadratureError::BadGrid("need at least two rho values"));
    }
    if rho_grid.windows(2).any(|w| !(w[1] < w[0])) || rho_grid.iter().any(|&p| !(p > 0.0)) {
        return Err(QuadratureError::BadGrid("rho values must be positive and strictly decreasing"));
    }
    let times = rho_grid.iter().map(|&rho| scaled_transit(v, side, rho, QUADRATURE_ABS_TOL)).collect::<Result<Vec<_>, _>>()?;
    let log_rho: Vec<f64> = rho_grid.iter().map(|&p| libm::log(p)).collect();
    let log_t: Vec<f64> = times.iter().map(|&t| libm::log(t)).collect();
    let (slope, _) = fit_line(&log_rho, &log_t);
    Ok(DivergenceFit {
        rho_values: rho_grid.to_vec(),
        times,
        fitted_exponent: slope,
        predicted_exponent: -((2 * (r - 1) + i) as f64) / 2.0,
        r,
        i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{PI, SQRT_2};

    fn p(terms: &[(u32, i64)]) -> Potential {
        Potential::from_i64(terms).unwrap()
    }

    #[test]
    fn turning_point_examples() {
        assert!((turning_point(&p(&[(2, 1)]), 1.0, Side::Right).unwrap() - 1.0).abs() < 1e-14);
        assert!((turning_point(&p(&[(2, 1), (3, 1)]), 2.0, Side::Right).unwrap() - 1.0).abs() < 1e-14);
        assert!((turning_point(&p(&[(4, 1)]), 1.0, Side::Left).unwrap() + 1.0).abs() < 1e-14);
        // x² + x³ has a hump of height 4/27 on the left
        assert!(matches!(
            turning_point(&p(&[(2, 1), (3, 1)]), 0.2, Side::Left),
            Err(QuadratureError::NoTurningPoint { .. })
        ));
        assert!(matches!(turning_point(&p(&[(1, 1)]), 0.1, Side::Left), Err(QuadratureError::InvalidSide { .. })));
        assert!((barrier_energy(&p(&[(2, 1), (3, 1)]), Side::Left).unwrap() - 4.0 / 27.0).abs() < 1e-13);
    }

    #[test]
    fn transit_examples() {
        let t = branch_time_numeric(&p(&[(2, 1)]), 0.3, Side::Right).unwrap();
        assert!((t - PI / SQRT_2).abs() < 1e-12);
        // closed form √2·h^{−1/4}·∫₀¹ ds/√(1−s⁴), frozen at 20 digits
        let t = branch_time_numeric(&p(&[(4, 1)]), 0.01, Side::Left).unwrap();
        assert!((t - 5.863_098_932_314_025).abs() < 1e-11, "{t}");
        let t = branch_time_numeric(&p(&[(1, -1)]), 0.5, Side::Left).unwrap();
        assert!((t - 2.0).abs() < 1e-12);
    }

    #[test]
    fn generic_route_rejects_flat_contact() {
        let branch = Branch::new(&p(&[(4, 1)]), Side::Right).unwrap();
        assert!(matches!(branch.transit(1e-44, true, QUADRATURE_ABS_TOL), Err(QuadratureError::NonSimpleTurningPoint { .. })));
    }

    #[test]
    fn period_examples() {
        let harmonic = PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)]));
        let row = period_numeric(&harmonic, 0.2).unwrap();
        assert!((row.t_total - PI * SQRT_2).abs() < 1e-11);
        assert_eq!(row.t_total, row.t_minus + row.t_plus);
        let two_freq = PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 2)]));
        let row = period_numeric(&two_freq, 1.0).unwrap();
        assert!((row.t_total - 3.792_237_796).abs() < 1e-9, "{}", row.t_total);
        let mixed = PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1)]));
        let row = period_numeric(&mixed, 0.01).unwrap();
        assert!((row.cross_1 - 0.1).abs() < 1e-15);
        assert!((row.t_total - (PI / SQRT_2 + 0.2)).abs() < 1e-11);
        assert!(!row.non_closed);
    }

    #[test]
    fn displacement_examples() {
        let vertical = PiecewiseSystem::vertical(p(&[(2, 1), (3, 3)]), p(&[(1, 2)]));
        assert_eq!(return_displacement(&vertical, 0.3).unwrap(), 0.0);
        let even = PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1)]));
        assert!(return_displacement(&even, 0.1).unwrap().abs() < 1e-15);
        let odd = PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1), (3, 1)]));
        let d = return_displacement(&odd, 0.1).unwrap();
        // b² + b³ = 0.009, b = 0.0908326913195984 (mpmath)
        assert!((d + 0.009_167_308_680_401_61).abs() < 1e-13, "{d}");
        let row = period_numeric(&odd, 0.011).unwrap();
        assert!(row.non_closed);
    }

    #[test]
    fn divergence_examples() {
        let grid = [0.1, 0.05, 0.025, 0.0125];
        let fit = divergence_probe(&p(&[(4, 1)]), Side::Left, &grid).unwrap();
        assert!((fit.fitted_exponent + 1.0).abs() < 1e-9);
        let fit = divergence_probe(&p(&[(3, -1)]), Side::Left, &grid).unwrap();
        assert!((fit.fitted_exponent + 0.5).abs() < 1e-9);
        assert_eq!(fit.predicted_exponent, -0.5);
        let fit = divergence_probe(&p(&[(6, 1)]), Side::Left, &grid).unwrap();
        assert!((fit.fitted_exponent + 2.0).abs() < 1e-9);
        assert_eq!(divergence_probe(&p(&[(2, 1)]), Side::Left, &grid), Err(QuadratureError::NotDegenerate));
        assert!(matches!(divergence_probe(&p(&[(4, 1)]), Side::Left, &[0.1, 0.2]), Err(QuadratureError::BadGrid(_))));
    }

    #[test]
    fn grids() {
        let g = energy_grid(1e-4, 0.5, 20, true).unwrap();
        assert_eq!(g.len(), 20);
        assert!(g[0] == 1e-4 && g[19] == 0.5);
        assert!(energy_grid(0.0, 1.0, 5, false).is_err());
        let harmonic = PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)]));
        assert!(period_table(&harmonic, &[0.2, 0.1], QUADRATURE_ABS_TOL).is_err());
    }
}
