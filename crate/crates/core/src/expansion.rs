//! Period constants by direct expansion of the time integrals.
//!
//! Everything here is exact. A nondegenerate center side is handled through
//! the normalizing variable z with V(x(z)) = ω²z²; a fold side through the
//! series inverse X(u) of V. Time integrals then reduce to Beta/Wallis
//! moments, which are rational (or rational times π).
//!
//! Branch series are written in the crossing coordinate s = √(2h) (the
//! speed at the switching point), where half-integer powers of the energy
//! become odd powers of s and every coefficient is a [`PeriodScalar`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::potential::{classify_side, classify_system, oriented_pair, CaseId, CenterCase, PiecewiseSystem, Potential, Side, SideBehavior};
use crate::rational::{even_double_factorial, exact_sqrt, factorial, odd_double_factorial, q, to_f64, Q};
use crate::scalar::{PeriodScalar, PeriodSeries};
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    NotACenter,
    NotMonotoneBranch { side: Side, reason: String },
    UnsupportedCase(&'static str),
    NotMonodromic(String),
    Series(SeriesError),
}

impl From<SeriesError> for ExpansionError {
    fn from(e: SeriesError) -> Self {
        ExpansionError::Series(e)
    }
}

impl fmt::Display for ExpansionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionError::NotACenter => write!(f, "potential does not have a nondegenerate center at the origin"),
            ExpansionError::NotMonotoneBranch { side, reason } => {
                write!(f, "no monotone {} branch: {reason}", side.label())
            }
            ExpansionError::UnsupportedCase(case) => {
                write!(f, "case {case} has no finite period expansion at the origin (the period diverges)")
            }
            ExpansionError::NotMonodromic(reason) => write!(f, "origin is not monodromic: {reason}"),
            ExpansionError::Series(e) => write!(f, "series error: {e}"),
        }
    }
}

/// The coordinate a period expansion is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    /// Energy h.
    ByEnergy,
    /// x-coordinate of the crossing with y = 0.
    ByXCrossing,
    /// y-coordinate y₀ of the crossing with x = 0, h = y₀²/2.
    ByYCrossing,
}

impl Param {
    pub fn label(self) -> &'static str {
        match self {
            Param::ByEnergy => "energy",
            Param::ByXCrossing => "x-crossing",
            Param::ByYCrossing => "y-crossing",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "energy" => Some(Param::ByEnergy),
            "x-crossing" => Some(Param::ByXCrossing),
            "y-crossing" => Some(Param::ByYCrossing),
            _ => None,
        }
    }

    pub fn var(self) -> &'static str {
        match self {
            Param::ByEnergy => "h",
            Param::ByXCrossing => "x",
            Param::ByYCrossing => "y0",
        }
    }
}

/// An odd-order constant where the full expansion differs from the value
/// obtained by keeping only the fold side's contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddTermNote {
    pub index: usize,
    pub full: PeriodScalar,
    pub fold_side_only: PeriodScalar,
}

/// T = T₀ + Σ Tᵢ tⁱ in the coordinate `param`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodExpansion {
    pub param: Param,
    pub series: PeriodSeries,
    pub notes: Vec<OddTermNote>,
}

impl PeriodExpansion {
    pub fn new(param: Param, series: PeriodSeries) -> Self {
        PeriodExpansion { param, series: series.with_var(param.var()), notes: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn leading(&self) -> PeriodScalar {
        self.series.coeff(0)
    }

    /// Tᵢ for i ≥ 1.
    pub fn constant(&self, i: usize) -> PeriodScalar {
        self.series.coeff(i)
    }

    pub fn constants(&self) -> Vec<PeriodScalar> {
        (1..=self.order()).map(|i| self.constant(i)).collect()
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.series.pi_parts().is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.series.eval_f64(t)
    }
}

/// ω = √(c₂) for a nondegenerate center.
#[derive(Debug, Clone, PartialEq)]
pub struct Omega {
    pub omega_sq: Q,
    /// ω itself when c₂ is the square of a rational.
    pub exact: Option<Q>,
    pub value: f64,
    /// Bound on |value − ω|.
    pub error_bound: f64,
}

pub fn omega_of(v: &Potential) -> Result<Omega, ExpansionError> {
    let omega_sq = match classify_side(v, Side::Right) {
        SideBehavior::NondegenerateCenter { omega_sq } => omega_sq,
        _ => return Err(ExpansionError::NotACenter),
    };
    let exact = exact_sqrt(&omega_sq);
    let value = match &exact {
        Some(w) => to_f64(w),
        None => libm::sqrt(to_f64(&omega_sq)),
    };
    // rounding of c₂ to double plus one correctly rounded sqrt
    let error_bound = if exact.is_some() { value * f64::EPSILON } else { 2.0 * value * f64::EPSILON };
    Ok(Omega { omega_sq, exact, value, error_bound })
}

fn center_omega_sq(v: &Potential) -> Result<Q, ExpansionError> {
    omega_of(v).map(|w| w.omega_sq)
}

/// z(x) = x·(V(x)/(ω²x²))^{1/2} to order `order`.
pub fn z_map(v: &Potential, order: usize) -> Result<TruncatedSeries, ExpansionError> {
    let omega_sq = center_omega_sq(v)?;
    // V(x)/(ω²x²) − 1 = Σ_{k≥3} (c_k/ω²) x^{k−2}
    let mut u = TruncatedSeries::zero("x", order.saturating_sub(1));
    for (k, c) in v.coeffs() {
        if *k >= 3 {
            u.set_coeff((*k - 2) as usize, c / &omega_sq);
        }
    }
    let root = TruncatedSeries::sqrt_one_plus(&u)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Q::zero());
    coeffs.extend(root.coeffs().iter().cloned());
    Ok(TruncatedSeries::new("x", coeffs, order))
}

/// x(z) = z + Σ_{i≥2} bᵢ zⁱ with V(x(z)) = ω²z², to order `order`.
pub fn z_substitution(v: &Potential, order: usize) -> Result<TruncatedSeries, ExpansionError> {
    Ok(z_map(v, order)?.reversion()?.with_var("z"))
}

/// Γ(i+3/2)/(√π·Γ(i+1)) = (2i+1)!/(2·4ⁱ·(i!)²), exactly.
pub fn gamma_ratio(i: usize) -> Q {
    let fi = factorial(i);
    factorial(2 * i + 1) / (q(2) * num_traits::pow(q(4), i) * &fi * &fi)
}

/// The normalized half-period constants: 1 + Σ T̃₂ᵢ hⁱ with
/// T̃₂ᵢ = 2·Γ(i+3/2)/(√π ω²ⁱ Γ(i+1))·b₂ᵢ₊₁ (coefficient i of the result).
pub fn center_half_period_constants(v: &Potential, order: usize) -> Result<TruncatedSeries, ExpansionError> {
    let omega_sq = center_omega_sq(v)?;
    let x_of_z = z_substitution(v, 2 * order + 1)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Q::one());
    for i in 1..=order {
        let b = x_of_z.coeff(2 * i + 1);
        coeffs.push(q(2) * gamma_ratio(i) * b / num_traits::pow(omega_sq.clone(), i));
    }
    Ok(TruncatedSeries::new("h", coeffs, order))
}

/// T̃(h) = π/(√2ω)·(1 + Σ T̃₂ᵢ hⁱ): time spent by the symmetric-in-z arc of a
/// smooth center on one side of y = 0.
pub fn center_half_period_series(v: &Potential, order: usize) -> Result<PeriodExpansion, ExpansionError> {
    let omega_sq = center_omega_sq(v)?;
    let unit = PeriodScalar::pi_over_sqrt2_omega(&omega_sq).ok_or(ExpansionError::NotACenter)?;
    let normalized = center_half_period_constants(v, order)?;
    Ok(PeriodExpansion::new(Param::ByEnergy, PeriodSeries::scaled_by(&unit, &normalized)))
}

/// One-way time from the switching point to the turning point along the
/// branch of V on `side`, as a series in s = √(2h) (`ByYCrossing`).
///
/// Even powers of s carry the π/(√2ω) block of a center side, odd powers
/// are rational. The full transit on that side is twice this.
pub fn branch_time_series(v: &Potential, side: Side, order: usize) -> Result<PeriodExpansion, ExpansionError> {
    let series = match classify_side(v, side) {
        SideBehavior::NondegenerateCenter { omega_sq } => center_branch(v, side, &omega_sq, order)?,
        SideBehavior::Tangency { slope } => fold_branch(v, &slope, order)?,
        SideBehavior::Invalid { reason } => return Err(ExpansionError::NotMonotoneBranch { side, reason }),
        other => {
            return Err(ExpansionError::NotMonotoneBranch {
                side,
                reason: format!("{} side: the time diverges as h -> 0", other.label()),
            })
        }
    };
    Ok(PeriodExpansion::new(Param::ByYCrossing, series))
}

fn center_branch(v: &Potential, side: Side, omega_sq: &Q, order: usize) -> Result<PeriodSeries, ExpansionError> {
    let x_of_z = z_substitution(v, order + 1)?;
    let sigma = match side {
        Side::Right => q(1),
        Side::Left => q(-1),
    };
    let mut pi_block = TruncatedSeries::zero("y0", order);
    let mut rational = TruncatedSeries::zero("y0", order);
    for m in 0..=order {
        let b = x_of_z.coeff(m + 1);
        if b.is_zero() {
            continue;
        }
        let k = m / 2;
        if m % 2 == 0 {
            // ∫ sin^{2k} over [0, π/2] = (π/2)(2k−1)!!/(2k)!!
            let wallis = odd_double_factorial(k as isize - 1) / (q(2) * even_double_factorial(k));
            let c = q(m as i64 + 1) * b * wallis
                / (num_traits::pow(omega_sq.clone(), k) * num_traits::pow(q(2), k));
            pi_block.set_coeff(m, c);
        } else {
            let wallis = even_double_factorial(k) / odd_double_factorial(k as isize);
            let c = &sigma * q(m as i64 + 1) * b * wallis
                / (num_traits::pow(omega_sq.clone(), k + 1) * num_traits::pow(q(2), k + 1));
            rational.set_coeff(m, c);
        }
    }
    let unit = PeriodScalar::pi_over_sqrt2_omega(omega_sq).ok_or(ExpansionError::NotACenter)?;
    Ok(PeriodSeries::scaled_by(&unit, &pi_block).add(&PeriodSeries::from_rational(rational)))
}

fn fold_branch(v: &Potential, slope: &Q, order: usize) -> Result<PeriodSeries, ExpansionError> {
    // X(u) inverts V on the branch; t = sign(c₁)·Σ d_k·k!/(2k+1)!!·s^{2k+1}
    // with X′(u) = Σ d_k uᵏ (Beta moments ∫₀ʰ uᵏ/√(2(h−u)) du).
    let x_of_u = v.as_series("u", order + 1).reversion()?;
    let dx = x_of_u.derivative();
    let sign = if slope.is_positive() { q(1) } else { q(-1) };
    let mut out = TruncatedSeries::zero("y0", order);
    let mut k = 0;
    while 2 * k < order {
        let c = &sign * dx.coeff(k) * factorial(k) / odd_double_factorial(k as isize);
        out.set_coeff(2 * k + 1, c);
        k += 1;
    }
    Ok(PeriodSeries::from_rational(out))
}

/// Transit time across one half-plane of the vertical switching line
/// (down to the turning point and back), in s = y₀.
pub fn side_transit_series(v: &Potential, side: Side, order: usize) -> Result<PeriodExpansion, ExpansionError> {
    let t = branch_time_series(v, side, order)?;
    Ok(PeriodExpansion::new(Param::ByYCrossing, t.series.scale(&q(2))))
}

/// Period T̄ of the symmetric fold-fold system built from a fold side and its
/// mirror image (twice the one-side transit); T̄₀ = 0, T̄₁ = 4/|V′(0)|.
pub fn fold_fold_period(v: &Potential, side: Side, order: usize) -> Result<PeriodExpansion, ExpansionError> {
    match classify_side(v, side) {
        SideBehavior::Tangency { .. } => {}
        _ => {
            return Err(ExpansionError::NotMonotoneBranch { side, reason: String::from("side is not an invisible fold") })
        }
    }
    let t = branch_time_series(v, side, order)?;
    Ok(PeriodExpansion::new(Param::ByYCrossing, t.series.scale(&q(4))))
}

/// The assembled expansion of the full period for the finite-period
/// configurations (cases i, iv, v, Theorem A, horizontal centers).
pub fn coupled_expansion(sys: &PiecewiseSystem, order: usize) -> Result<PeriodExpansion, ExpansionError> {
    let case = classify_system(sys);
    match &case {
        CenterCase::NotMonodromic { reason } => Err(ExpansionError::NotMonodromic(reason.clone())),
        CenterCase::Vertical { case: id, .. } if id.is_divergent() => Err(ExpansionError::UnsupportedCase(id.label())),
        CenterCase::Vertical { case: id, .. } => {
            let (left, right) = oriented_pair(sys, &case);
            let inner_order = if *id == CaseId::I { 2 * order } else { order };
            let t_left = side_transit_series(&left, Side::Left, inner_order)?;
            let t_right = side_transit_series(&right, Side::Right, inner_order)?;
            let total = t_left.series.add(&t_right.series);
            match id {
                CaseId::I => Ok(case_one(total, order)),
                CaseId::V => {
                    // after normalization the center is on the left
                    let mut exp = PeriodExpansion::new(Param::ByYCrossing, total);
                    exp.notes = odd_term_notes(&exp, &t_right.series);
                    Ok(exp)
                }
                _ => Ok(PeriodExpansion::new(Param::ByYCrossing, total)),
            }
        }
        CenterCase::TheoremA { omega_sq, .. } => {
            // Start at (x, 0), x > 0: the lower arc is the left branch of V⁻
            // in y with x as its crossing speed and lands at (−x, 0); the
            // upper arc then runs at energy V⁺(−x).
            let lower = side_transit_series(&sys.v_minus, Side::Left, order)?.series.with_var("x");
            let upper_energy = sys.v_plus.mirrored().as_series("x", order);
            let upper = upper_arc(omega_sq, &sys.v_plus, &upper_energy, order)?;
            let mut exp = PeriodExpansion::new(Param::ByXCrossing, lower.add(&upper));
            exp.notes = odd_term_notes(&exp, &lower);
            Ok(exp)
        }
        CenterCase::HorizontalCenters { minus, plus } => {
            let (SideBehavior::NondegenerateCenter { omega_sq: wm }, SideBehavior::NondegenerateCenter { omega_sq: wp }) =
                (minus, plus)
            else {
                return Err(ExpansionError::UnsupportedCase("horizontal_centers (degenerate)"));
            };
            // Start at (x, 0), x > 0: lower arc at energy V⁻(x) ends at the
            // point with z⁻ = −z⁻(x); the upper arc runs at V⁺ of that point.
            let lower_energy = sys.v_minus.as_series("x", order);
            let lower = upper_arc(wm, &sys.v_minus, &lower_energy, order)?;
            let z = z_map(&sys.v_minus, order)?;
            let x_of_z = z.reversion()?;
            let landing = x_of_z.compose(&z.neg())?;
            let upper_energy = sys.v_plus.as_series("x", order).compose(&landing)?;
            let upper = upper_arc(wp, &sys.v_plus, &upper_energy, order)?;
            Ok(PeriodExpansion::new(Param::ByXCrossing, lower.add(&upper)))
        }
    }
}

/// T̃(E(x)) for the half-period of center V at energy E(x).
fn upper_arc(omega_sq: &Q, v: &Potential, energy: &TruncatedSeries, order: usize) -> Result<PeriodSeries, ExpansionError> {
    let unit = PeriodScalar::pi_over_sqrt2_omega(omega_sq).ok_or(ExpansionError::NotACenter)?;
    let normalized = center_half_period_constants(v, order)?;
    let composed = normalized.compose(energy)?.with_var("x");
    Ok(PeriodSeries::scaled_by(&unit, &composed))
}

fn case_one(total: PeriodSeries, order: usize) -> PeriodExpansion {
    let odd_vanish = (0..=total.order()).filter(|m| m % 2 == 1).all(|m| total.coeff(m).is_zero());
    if odd_vanish {
        // y₀^{2k} = 2ᵏ hᵏ
        let in_h = total
            .map_components::<()>(|s| {
                let coeffs = (0..=order).map(|k| s.coeff(2 * k) * num_traits::pow(q(2), k)).collect();
                Ok(TruncatedSeries::new("h", coeffs, order))
            })
            .unwrap_or_else(|_| unreachable!());
        PeriodExpansion::new(Param::ByEnergy, in_h)
    } else {
        PeriodExpansion::new(Param::ByYCrossing, total.truncate(order))
    }
}

fn odd_term_notes(exp: &PeriodExpansion, fold_side: &PeriodSeries) -> Vec<OddTermNote> {
    (1..=exp.order())
        .filter(|i| i % 2 == 1)
        .filter_map(|i| {
            let full = exp.constant(i);
            let fold_side_only = fold_side.coeff(i);
            (full != fold_side_only).then_some(OddTermNote { index: i, full, fold_side_only })
        })
        .collect()
}

/// Result of scanning T₁..T_N for the first exactly nonzero constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstNonzero {
    At { index: usize, value: PeriodScalar },
    AllZeroUpToN(usize),
}

/// Smallest i ≥ 1 with Tᵢ ≠ 0. The test is exact: a scalar
/// q + Σ q_d (π/√2)√d vanishes iff all q's do, since π is transcendental and
/// the √d are independent over Q.
pub fn first_nonzero_constant(exp: &PeriodExpansion) -> FirstNonzero {
    (1..=exp.order())
        .map(|i| (i, exp.constant(i)))
        .find(|(_, c)| !c.is_zero())
        .map(|(index, value)| FirstNonzero::At { index, value })
        .unwrap_or(FirstNonzero::AllZeroUpToN(exp.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn p(terms: &[(u32, i64)]) -> Potential {
        Potential::from_i64(terms).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_of(&p(&[(2, 1)])).unwrap().exact, Some(q(1)));
        let w = omega_of(&p(&[(2, 2), (3, 1)])).unwrap();
        assert_eq!(w.exact, None);
        assert!((w.value - core::f64::consts::SQRT_2).abs() <= w.error_bound);
        assert_eq!(omega_of(&p(&[(2, 4)])).unwrap().exact, Some(q(2)));
        assert_eq!(omega_of(&p(&[(1, 1)])), Err(ExpansionError::NotACenter));
        assert_eq!(omega_of(&p(&[(4, 1)])), Err(ExpansionError::NotACenter));
    }

    #[test]
    fn z_substitution_examples() {
        let x = z_substitution(&p(&[(2, 1)]), 6).unwrap();
        assert!(x.is_identity());
        let x = z_substitution(&p(&[(2, 1), (3, 1)]), 7).unwrap();
        let expected = [q_frac(-1, 2), q_frac(5, 8), q(-1), q_frac(231, 128), q_frac(-7, 2), q_frac(7293, 1024)];
        for (i, b) in expected.iter().enumerate() {
            assert_eq!(&x.coeff(i + 2), b, "b_{}", i + 2);
        }
        let x = z_substitution(&p(&[(2, 1), (4, 1)]), 7).unwrap();
        let expected = [q(0), q_frac(-1, 2), q(0), q_frac(7, 8), q(0), q_frac(-33, 16)];
        for (i, b) in expected.iter().enumerate() {
            assert_eq!(&x.coeff(i + 2), b, "b_{}", i + 2);
        }
    }

    #[test]
    fn defining_identity_with_nonunit_omega() {
        let v = p(&[(2, 3), (3, -2), (5, 7)]);
        let x = z_substitution(&v, 8).unwrap();
        let composed = v.as_series("z", 9).compose(&x.truncate(8)).unwrap();
        // V(x(z)) = 3z² + O(z^10): the order-8 truncation of x only affects z^10 and up
        for k in 0..=9 {
            let expected = if k == 2 { q(3) } else { q(0) };
            assert_eq!(composed.coeff(k), expected, "k = {k}");
        }
    }

    #[test]
    fn gamma_ratio_closed_form() {
        assert_eq!(gamma_ratio(0), q_frac(1, 2));
        assert_eq!(gamma_ratio(1), q_frac(3, 4));
        assert_eq!(gamma_ratio(2), q_frac(15, 16));
    }

    #[test]
    fn half_period_examples() {
        let harmonic = center_half_period_series(&p(&[(2, 1)]), 6).unwrap();
        assert_eq!(harmonic.leading(), PeriodScalar::pi_term(q(1), 1));
        assert!(harmonic.constants().iter().all(PeriodScalar::is_zero));
        let t = center_half_period_constants(&p(&[(2, 1), (3, 1)]), 4).unwrap();
        assert_eq!(t.coeff(1), q_frac(15, 16));
        let t = center_half_period_constants(&p(&[(2, 1), (4, 1)]), 4).unwrap();
        assert_eq!(t.coeff(1), q_frac(-3, 4));
    }

    #[test]
    fn branch_examples() {
        // V = x on the right: t = s, transit 2s
        let t = side_transit_series(&p(&[(1, 1)]), Side::Right, 5).unwrap();
        assert_eq!(t.constant(1), PeriodScalar::from_q(q(2)));
        assert!((2..=5).all(|i| t.constant(i).is_zero()));
        assert!(t.leading().is_zero());
        // V = −y on the left: fold-fold constant 4
        let fold = fold_fold_period(&p(&[(1, -1)]), Side::Left, 5).unwrap();
        assert_eq!(fold.constant(1), PeriodScalar::from_q(q(4)));
        // x² + x³ right branch: s-coefficient b₂ = −1/2, i.e. −(√2/2)·√h
        let t = branch_time_series(&p(&[(2, 1), (3, 1)]), Side::Right, 4).unwrap();
        assert_eq!(t.constant(1), PeriodScalar::from_q(q_frac(-1, 2)));
        let t = branch_time_series(&p(&[(2, 1), (3, 1)]), Side::Left, 4).unwrap();
        assert_eq!(t.constant(1), PeriodScalar::from_q(q_frac(1, 2)));
        assert!(matches!(
            branch_time_series(&p(&[(4, 1)]), Side::Left, 4),
            Err(ExpansionError::NotMonotoneBranch { .. })
        ));
    }

    #[test]
    fn coupled_examples() {
        let theorem_a = coupled_expansion(&PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1)])), 8).unwrap();
        assert_eq!(theorem_a.param, Param::ByXCrossing);
        assert_eq!(theorem_a.leading(), PeriodScalar::pi_term(q(1), 1));
        assert_eq!(theorem_a.constant(1), PeriodScalar::from_q(q(2)));
        assert!((2..=8).all(|i| theorem_a.constant(i).is_zero()));
        assert_eq!(first_nonzero_constant(&theorem_a), FirstNonzero::At { index: 1, value: PeriodScalar::from_q(q(2)) });

        let fold_fold = coupled_expansion(&PiecewiseSystem::vertical(p(&[(1, -1)]), p(&[(1, 1)])), 8).unwrap();
        assert!(fold_fold.leading().is_zero());
        assert_eq!(fold_fold.constant(1), PeriodScalar::from_q(q(4)));
        assert!((2..=8).all(|i| fold_fold.constant(i).is_zero()));

        let linear = coupled_expansion(&PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)])), 6).unwrap();
        assert_eq!(linear.param, Param::ByEnergy);
        assert_eq!(linear.leading(), PeriodScalar::pi_term(q(2), 1));
        assert_eq!(first_nonzero_constant(&linear), FirstNonzero::AllZeroUpToN(6));

        let case_v = coupled_expansion(&PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(1, 1)])), 6).unwrap();
        assert_eq!(first_nonzero_constant(&case_v), FirstNonzero::At { index: 1, value: PeriodScalar::from_q(q(2)) });
        assert!(case_v.notes.is_empty());

        assert_eq!(
            coupled_expansion(&PiecewiseSystem::vertical(p(&[(4, 1)]), p(&[(2, 1)])), 6),
            Err(ExpansionError::UnsupportedCase("ii"))
        );
    }

    #[test]
    fn asymmetric_case_v_reports_center_odd_terms() {
        let exp = coupled_expansion(&PiecewiseSystem::vertical(p(&[(2, 1), (3, 1)]), p(&[(1, 1)])), 5).unwrap();
        // T₁ = 2/(V⁺)′(0) − 2b₂/ω² = 2 + 1
        assert_eq!(exp.constant(1), PeriodScalar::from_q(q(3)));
        assert_eq!(exp.notes[0].index, 1);
        assert_eq!(exp.notes[0].fold_side_only, PeriodScalar::from_q(q(2)));
    }

    #[test]
    fn mirrored_case_v_matches() {
        let a = coupled_expansion(&PiecewiseSystem::vertical(p(&[(2, 1), (3, 1)]), p(&[(1, 1)])), 6).unwrap();
        let b = coupled_expansion(&PiecewiseSystem::vertical(p(&[(1, -1)]), p(&[(2, 1), (3, -1)])), 6).unwrap();
        assert_eq!(a.series, b.series);
    }
}
