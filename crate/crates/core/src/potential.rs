//! Polynomial potentials and the classification of the origin.
//!
//! A side of a piecewise system is described by a polynomial potential
//! V(x) = Σ_{k≥1} c_k xᵏ. What the flow looks like at the origin on a given
//! half-line is decided by the first nonzero coefficient and its sign, so
//! classification is exact rational sign testing.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Q};
use crate::series::TruncatedSeries;

pub const DEFAULT_DOMAIN_BOUND: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialError {
    ConstantTerm,
    AllZero,
    BadDomainBound,
    OutOfDomain { x: f64, bound: f64 },
}

impl fmt::Display for PotentialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialError::ConstantTerm => write!(f, "potential must vanish at the origin (no degree-0 term)"),
            PotentialError::AllZero => write!(f, "potential has no nonzero coefficient"),
            PotentialError::BadDomainBound => write!(f, "domain bound must be positive and finite"),
            PotentialError::OutOfDomain { x, bound } => write!(f, "x = {x} outside the trusted domain |x| <= {bound}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// −1 on the left, +1 on the right.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// V(x) = Σ c_k xᵏ with exact rational coefficients and V(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    coeffs: BTreeMap<u32, Q>,
    domain_bound: f64,
}

impl Potential {
    pub fn new(coeffs: impl IntoIterator<Item = (u32, Q)>) -> Result<Self, PotentialError> {
        Self::with_bound(coeffs, DEFAULT_DOMAIN_BOUND)
    }

    pub fn with_bound(coeffs: impl IntoIterator<Item = (u32, Q)>, domain_bound: f64) -> Result<Self, PotentialError> {
        if !(domain_bound.is_finite() && domain_bound > 0.0) {
            return Err(PotentialError::BadDomainBound);
        }
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if c.is_zero() {
                continue;
            }
            if k == 0 {
                return Err(PotentialError::ConstantTerm);
            }
            *map.entry(k).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c: &mut Q| !c.is_zero());
        if map.is_empty() {
            return Err(PotentialError::AllZero);
        }
        Ok(Potential { coeffs: map, domain_bound })
    }

    /// Convenience constructor from integer coefficients `(degree, value)`.
    pub fn from_i64(terms: &[(u32, i64)]) -> Result<Self, PotentialError> {
        Self::new(terms.iter().map(|&(k, c)| (k, crate::rational::q(c))))
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> Q {
        self.coeffs.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn domain_bound(&self) -> f64 {
        self.domain_bound
    }

    pub fn degree(&self) -> u32 {
        *self.coeffs.keys().next_back().unwrap_or(&0)
    }

    /// Lowest degree with a nonzero coefficient, and that coefficient.
    pub fn leading(&self) -> (u32, &Q) {
        let (k, c) = self.coeffs.iter().next().expect("potential has a nonzero coefficient");
        (*k, c)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    /// V = c·x² with c > 0.
    pub fn is_exact_quadratic(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&2).is_some_and(|c| c.is_positive())
    }

    /// V(−x).
    pub fn mirrored(&self) -> Self {
        Potential {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, if k % 2 == 1 { -c } else { c.clone() })).collect(),
            domain_bound: self.domain_bound,
        }
    }

    /// λ·V for λ > 0.
    pub fn scaled(&self, factor: &Q) -> Self {
        Potential {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * factor)).collect(),
            domain_bound: self.domain_bound,
        }
    }

    /// V(ρ·s)/ρ^shift as a potential in s (float coefficients rounded to Q
    /// are not needed: ρ is rational here).
    pub fn rescaled(&self, rho: &Q, shift: u32) -> Self {
        let norm = num_traits::pow(rho.clone(), shift as usize);
        Potential {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, c * num_traits::pow(rho.clone(), *k as usize) / &norm))
                .collect(),
            domain_bound: self.domain_bound / to_f64(rho),
        }
    }

    /// The coefficient series c₀..c_order.
    pub fn as_series(&self, var: &str, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(var, order);
        for (k, c) in &self.coeffs {
            s.set_coeff(*k as usize, c.clone());
        }
        s
    }

    /// derivative_order-th derivative at a rational point, exactly.
    pub fn eval_exact(&self, x: &Q, derivative_order: u32) -> Q {
        let mut acc = Q::zero();
        for (k, c) in &self.coeffs {
            if *k < derivative_order {
                continue;
            }
            let mut falling = Q::one();
            for j in 0..derivative_order {
                falling *= Q::from_integer((k - j).into());
            }
            acc += c * falling * num_traits::pow(x.clone(), (k - derivative_order) as usize);
        }
        acc
    }

    /// derivative_order-th derivative at x, checked against the domain bound.
    pub fn eval(&self, x: f64, derivative_order: u32) -> Result<f64, PotentialError> {
        if !(x.abs() <= self.domain_bound) {
            return Err(PotentialError::OutOfDomain { x, bound: self.domain_bound });
        }
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().rev() {
            if *k < derivative_order {
                continue;
            }
            let mut falling = 1.0;
            for j in 0..derivative_order {
                falling *= (k - j) as f64;
            }
            acc += to_f64(c) * falling * libm::pow(x, (k - derivative_order) as f64);
        }
        Ok(acc)
    }

    /// Dense float form for the hot loops of quadrature and integration.
    pub fn float_form(&self) -> FloatPoly {
        let mut c = alloc::vec![0.0; self.degree() as usize + 1];
        for (k, v) in &self.coeffs {
            c[*k as usize] = to_f64(v);
        }
        FloatPoly { c }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*x^{k}")?;
        }
        Ok(())
    }
}

/// Float coefficients c₀..c_n of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPoly {
    c: alloc::vec::Vec<f64>,
}

impl FloatPoly {
    pub fn from_coeffs(c: alloc::vec::Vec<f64>) -> Self {
        FloatPoly { c }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
    }

    /// (V(b) − V(a))/(b − a) without cancellation: Σ c_k Σ_j b^j a^{k−1−j}.
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.c.iter().enumerate().skip(1) {
            if *c == 0.0 {
                continue;
            }
            // h_{k-1}(a, b) via the recurrence h_m = b·h_{m−1} + a^m
            let mut h = 1.0;
            let mut a_pow = 1.0;
            for _ in 1..k {
                a_pow *= a;
                h = b * h + a_pow;
            }
            acc += c * h;
        }
        acc
    }
}

/// How the flow of ẋ = y, ẏ = −V′(x) looks at the origin on one half-line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideBehavior {
    /// c₁ = 0, c₂ > 0; ω² = c₂.
    NondegenerateCenter { omega_sq: Q },
    /// First nonzero coefficient c_{2r} > 0 with r > 1.
    DegenerateCenter { r: u32 },
    /// First nonzero coefficient c_{2r+1}, r ≥ 1, with the sign that makes V
    /// positive on this side.
    Cusp { r: u32 },
    /// c₁ ≠ 0 with the sign that makes V positive on this side (invisible fold).
    Tangency { slope: Q },
    Invalid { reason: String },
}

impl SideBehavior {
    /// Order of the first nonzero derivative at the origin (1 for a fold,
    /// 2 for a nondegenerate center, 2r or 2r+1 otherwise).
    pub fn flatness(&self) -> Option<u32> {
        match self {
            SideBehavior::Tangency { .. } => Some(1),
            SideBehavior::NondegenerateCenter { .. } => Some(2),
            SideBehavior::DegenerateCenter { r } => Some(2 * r),
            SideBehavior::Cusp { r } => Some(2 * r + 1),
            SideBehavior::Invalid { .. } => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        !matches!(self, SideBehavior::Invalid { .. })
    }

    pub fn is_center_type(&self) -> bool {
        matches!(self, SideBehavior::NondegenerateCenter { .. } | SideBehavior::DegenerateCenter { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            SideBehavior::NondegenerateCenter { .. } => "nondegenerate_center",
            SideBehavior::DegenerateCenter { .. } => "degenerate_center",
            SideBehavior::Cusp { .. } => "cusp",
            SideBehavior::Tangency { .. } => "tangency",
            SideBehavior::Invalid { .. } => "invalid",
        }
    }
}

/// Classifies the origin of V on one side by the first nonzero coefficient.
pub fn classify_side(v: &Potential, side: Side) -> SideBehavior {
    let (k, c) = v.leading();
    let positive = c.is_positive();
    // V is positive on the side iff c·(side sign)^k > 0.
    let positive_on_side = match side {
        Side::Right => positive,
        Side::Left => positive == (k % 2 == 0),
    };
    if !positive_on_side {
        return SideBehavior::Invalid {
            reason: format!(
                "leading term ({c})*x^{k} is negative on the {} half-line; orbits escape through the switching line",
                side.label()
            ),
        };
    }
    match k {
        1 => SideBehavior::Tangency { slope: c.clone() },
        2 => SideBehavior::NondegenerateCenter { omega_sq: c.clone() },
        k if k % 2 == 0 => SideBehavior::DegenerateCenter { r: k / 2 },
        k => SideBehavior::Cusp { r: (k - 1) / 2 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Switching line x = 0, potentials V⁻ (x < 0) and V⁺ (x ≥ 0).
    VerticalSwitch,
    /// Switching line y = 0, potentials V⁺ (y ≥ 0) and V⁻ (y < 0).
    HorizontalPotentials,
    /// Switching line y = 0; V⁺(x) above, the field ((V⁻)′(y), −x) below.
    HorizontalMixed,
}

impl Topology {
    pub fn label(self) -> &'static str {
        match self {
            Topology::VerticalSwitch => "vertical",
            Topology::HorizontalPotentials => "horizontal",
            Topology::HorizontalMixed => "horizontal_mixed",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "vertical" => Some(Topology::VerticalSwitch),
            "horizontal" => Some(Topology::HorizontalPotentials),
            "horizontal_mixed" | "mixed" => Some(Topology::HorizontalMixed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSystem {
    pub topology: Topology,
    pub v_minus: Potential,
    pub v_plus: Potential,
    /// Upper end of the analyzed energy range; `None` means "derive it".
    pub h_max: Option<Q>,
    minus_behavior: SideBehavior,
    plus_behavior: SideBehavior,
}

impl PiecewiseSystem {
    pub fn new(topology: Topology, v_minus: Potential, v_plus: Potential) -> Self {
        let (minus_behavior, plus_behavior) = match topology {
            Topology::VerticalSwitch | Topology::HorizontalMixed => {
                (classify_side(&v_minus, Side::Left), classify_side(&v_plus, Side::Right))
            }
            Topology::HorizontalPotentials => {
                (classify_side(&v_minus, Side::Right), classify_side(&v_plus, Side::Right))
            }
        };
        PiecewiseSystem { topology, v_minus, v_plus, h_max: None, minus_behavior, plus_behavior }
    }

    pub fn vertical(v_minus: Potential, v_plus: Potential) -> Self {
        Self::new(Topology::VerticalSwitch, v_minus, v_plus)
    }

    pub fn mixed(v_minus: Potential, v_plus: Potential) -> Self {
        Self::new(Topology::HorizontalMixed, v_minus, v_plus)
    }

    pub fn horizontal(v_minus: Potential, v_plus: Potential) -> Self {
        Self::new(Topology::HorizontalPotentials, v_minus, v_plus)
    }

    pub fn with_h_max(mut self, h_max: Q) -> Self {
        self.h_max = Some(h_max);
        self
    }

    /// Cached classification of V⁻ on its side.
    pub fn minus_behavior(&self) -> &SideBehavior {
        &self.minus_behavior
    }

    pub fn plus_behavior(&self) -> &SideBehavior {
        &self.plus_behavior
    }

    /// The pair with sides exchanged: (V⁺(−x), V⁻(−x)).
    pub fn mirrored(&self) -> Self {
        let mut out = Self::new(self.topology, self.v_plus.mirrored(), self.v_minus.mirrored());
        out.h_max = self.h_max.clone();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl CaseId {
    pub fn label(self) -> &'static str {
        match self {
            CaseId::I => "i",
            CaseId::II => "ii",
            CaseId::III => "iii",
            CaseId::IV => "iv",
            CaseId::V => "v",
            CaseId::VI => "vi",
            CaseId::VII => "vii",
            CaseId::VIII => "viii",
        }
    }

    /// Cases whose period blows up at the origin.
    pub fn is_divergent(self) -> bool {
        matches!(self, CaseId::II | CaseId::III | CaseId::VI | CaseId::VII | CaseId::VIII)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterCase {
    /// x = 0 switching line. `left` is the flatter side after normalization;
    /// `mirrored` records that the pair was swapped to achieve that.
    Vertical { case: CaseId, left: SideBehavior, right: SideBehavior, mirrored: bool },
    /// Nondegenerate center above y = 0, invisible fold below.
    TheoremA { omega_sq: Q, slope: Q },
    /// y = 0 switching line with a center-type potential on each side.
    HorizontalCenters { minus: SideBehavior, plus: SideBehavior },
    NotMonodromic { reason: String },
}

impl CenterCase {
    pub fn label(&self) -> &'static str {
        match self {
            CenterCase::Vertical { case, .. } => case.label(),
            CenterCase::TheoremA { .. } => "theorem_a",
            CenterCase::HorizontalCenters { .. } => "horizontal_centers",
            CenterCase::NotMonodromic { .. } => "not_monodromic",
        }
    }

    pub fn case_id(&self) -> Option<CaseId> {
        match self {
            CenterCase::Vertical { case, .. } => Some(*case),
            _ => None,
        }
    }

    /// Case (iv) viewed as two facing invisible folds.
    pub fn is_fold_fold(&self) -> bool {
        self.case_id() == Some(CaseId::IV)
    }

    pub fn is_mirrored(&self) -> bool {
        matches!(self, CenterCase::Vertical { mirrored: true, .. })
    }
}

fn vertical_case(left: &SideBehavior, right: &SideBehavior) -> Option<CaseId> {
    use SideBehavior::*;
    let case = match (left, right) {
        (NondegenerateCenter { .. }, NondegenerateCenter { .. }) => CaseId::I,
        (DegenerateCenter { .. }, NondegenerateCenter { .. } | DegenerateCenter { .. })
        | (NondegenerateCenter { .. }, DegenerateCenter { .. }) => CaseId::II,
        (Cusp { .. }, Cusp { .. }) => CaseId::III,
        (Tangency { .. }, Tangency { .. }) => CaseId::IV,
        (NondegenerateCenter { .. }, Tangency { .. }) | (Tangency { .. }, NondegenerateCenter { .. }) => CaseId::V,
        (DegenerateCenter { .. }, Tangency { .. }) | (Tangency { .. }, DegenerateCenter { .. }) => CaseId::VI,
        (Cusp { .. }, NondegenerateCenter { .. } | DegenerateCenter { .. })
        | (NondegenerateCenter { .. } | DegenerateCenter { .. }, Cusp { .. }) => CaseId::VII,
        (Cusp { .. }, Tangency { .. }) | (Tangency { .. }, Cusp { .. }) => CaseId::VIII,
        _ => return None,
    };
    Some(case)
}

/// Classifies the origin of a piecewise system.
///
/// For the vertical switching line, asymmetric cases are normalized so the
/// left side is at least as flat as the right one; ties are not mirrored.
pub fn classify_system(sys: &PiecewiseSystem) -> CenterCase {
    match sys.topology {
        Topology::VerticalSwitch => {
            let left = sys.minus_behavior().clone();
            let right = sys.plus_behavior().clone();
            if let SideBehavior::Invalid { reason } = &left {
                return CenterCase::NotMonodromic { reason: format!("V- on x < 0: {reason}") };
            }
            if let SideBehavior::Invalid { reason } = &right {
                return CenterCase::NotMonodromic { reason: format!("V+ on x > 0: {reason}") };
            }
            let case = vertical_case(&left, &right).expect("valid sides always match a case");
            let symmetric = matches!(case, CaseId::I | CaseId::IV);
            if !symmetric && left.flatness() < right.flatness() {
                // Mirroring maps V+ on the right to V+(−x) on the left with
                // the same behavior variant, so the behaviors just swap.
                CenterCase::Vertical { case, left: right, right: left, mirrored: true }
            } else {
                CenterCase::Vertical { case, left, right, mirrored: false }
            }
        }
        Topology::HorizontalMixed => {
            let (k, c) = sys.v_plus.leading();
            if k != 2 || !c.is_positive() {
                return CenterCase::NotMonodromic {
                    reason: String::from("upper potential needs (V+)'(0) = 0 and (V+)''(0) > 0"),
                };
            }
            if !sys.v_minus.coeff(1).is_negative() {
                return CenterCase::NotMonodromic {
                    reason: String::from("lower potential needs (V-)'(0) < 0"),
                };
            }
            CenterCase::TheoremA { omega_sq: c.clone(), slope: sys.v_minus.coeff(1) }
        }
        Topology::HorizontalPotentials => {
            for (name, v) in [("V-", &sys.v_minus), ("V+", &sys.v_plus)] {
                let (k, c) = v.leading();
                if k % 2 == 1 || !c.is_positive() {
                    return CenterCase::NotMonodromic {
                        reason: format!("{name} must have a center at the origin (even leading order, positive coefficient)"),
                    };
                }
            }
            CenterCase::HorizontalCenters {
                minus: classify_side(&sys.v_minus, Side::Right),
                plus: classify_side(&sys.v_plus, Side::Right),
            }
        }
    }
}

/// The (left, right) potentials of a vertical system after the flatness
/// normalization recorded in `case`.
pub fn oriented_pair(sys: &PiecewiseSystem, case: &CenterCase) -> (Potential, Potential) {
    if case.is_mirrored() {
        (sys.v_plus.mirrored(), sys.v_minus.mirrored())
    } else {
        (sys.v_minus.clone(), sys.v_plus.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn p(terms: &[(u32, i64)]) -> Potential {
        Potential::from_i64(terms).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[(2, 1)]).eval(2.0, 0).unwrap(), 4.0);
        assert_eq!(p(&[(2, 1), (3, 1)]).eval(1.0, 0).unwrap(), 2.0);
        assert_eq!(p(&[(4, 1)]).eval(0.0, 4).unwrap(), 24.0);
        assert_eq!(p(&[(4, 1)]).eval_exact(&q(0), 4), q(24));
        assert_eq!(p(&[(2, 1), (3, 1)]).eval_exact(&q_frac(1, 2), 1), q_frac(7, 4));
        assert!(matches!(p(&[(2, 1)]).eval(11.0, 0), Err(PotentialError::OutOfDomain { .. })));
    }

    #[test]
    fn invariants_enforced() {
        assert_eq!(Potential::from_i64(&[(0, 1), (2, 1)]), Err(PotentialError::ConstantTerm));
        assert_eq!(Potential::from_i64(&[(2, 0)]), Err(PotentialError::AllZero));
        assert_eq!(Potential::from_i64(&[]), Err(PotentialError::AllZero));
        assert_eq!(Potential::with_bound([(2, q(1))], -1.0), Err(PotentialError::BadDomainBound));
        // zero constant term is allowed and dropped
        assert_eq!(Potential::from_i64(&[(0, 0), (2, 1)]).unwrap(), p(&[(2, 1)]));
    }

    #[test]
    fn classify_side_examples() {
        assert_eq!(classify_side(&p(&[(2, 1)]), Side::Left), SideBehavior::NondegenerateCenter { omega_sq: q(1) });
        assert_eq!(classify_side(&p(&[(3, -1)]), Side::Left), SideBehavior::Cusp { r: 1 });
        assert_eq!(classify_side(&p(&[(1, 1)]), Side::Right), SideBehavior::Tangency { slope: q(1) });
        assert_eq!(classify_side(&p(&[(4, 1)]), Side::Right), SideBehavior::DegenerateCenter { r: 2 });
        assert_eq!(classify_side(&p(&[(5, 1)]), Side::Right), SideBehavior::Cusp { r: 2 });
        assert!(matches!(classify_side(&p(&[(1, 1)]), Side::Left), SideBehavior::Invalid { .. }));
        assert!(matches!(classify_side(&p(&[(1, -1)]), Side::Right), SideBehavior::Invalid { .. }));
        assert!(matches!(classify_side(&p(&[(2, -1)]), Side::Right), SideBehavior::Invalid { .. }));
        assert!(matches!(classify_side(&p(&[(3, 1)]), Side::Left), SideBehavior::Invalid { .. }));
    }

    #[test]
    fn classify_system_examples() {
        let case = classify_system(&PiecewiseSystem::vertical(p(&[(1, -1)]), p(&[(1, 1)])));
        assert_eq!(case.case_id(), Some(CaseId::IV));
        assert!(case.is_fold_fold());
        let case = classify_system(&PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(1, 1)])));
        assert_eq!(case.case_id(), Some(CaseId::V));
        assert!(!case.is_mirrored());
        let case = classify_system(&PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)])));
        assert_eq!(case.case_id(), Some(CaseId::I));
    }

    #[test]
    fn full_case_table() {
        let cases = [
            (p(&[(4, 1)]), p(&[(2, 1)]), CaseId::II, false),
            (p(&[(2, 1)]), p(&[(6, 1)]), CaseId::II, true),
            (p(&[(4, 1)]), p(&[(4, 3)]), CaseId::II, false),
            (p(&[(3, -1)]), p(&[(3, 2)]), CaseId::III, false),
            (p(&[(3, -1)]), p(&[(5, 2)]), CaseId::III, true),
            (p(&[(1, -1)]), p(&[(2, 1)]), CaseId::V, true),
            (p(&[(4, 1)]), p(&[(1, 1)]), CaseId::VI, false),
            (p(&[(1, -2)]), p(&[(6, 1)]), CaseId::VI, true),
            (p(&[(3, -1)]), p(&[(2, 1)]), CaseId::VII, false),
            (p(&[(4, 1)]), p(&[(3, 1)]), CaseId::VII, false),
            (p(&[(2, 1)]), p(&[(5, 1)]), CaseId::VII, true),
            (p(&[(5, -1)]), p(&[(1, 1)]), CaseId::VIII, false),
            (p(&[(1, -1)]), p(&[(3, 1)]), CaseId::VIII, true),
        ];
        for (vm, vp, expected, mirrored) in cases {
            let case = classify_system(&PiecewiseSystem::vertical(vm.clone(), vp.clone()));
            assert_eq!(case.case_id(), Some(expected), "{vm} | {vp}");
            assert_eq!(case.is_mirrored(), mirrored, "{vm} | {vp}");
            if let CenterCase::Vertical { left, right, .. } = &case {
                assert!(left.flatness() >= right.flatness());
            }
        }
    }

    #[test]
    fn non_monodromic_pairs() {
        let case = classify_system(&PiecewiseSystem::vertical(p(&[(1, 1)]), p(&[(1, 1)])));
        assert!(matches!(case, CenterCase::NotMonodromic { .. }));
        let case = classify_system(&PiecewiseSystem::mixed(p(&[(1, 1)]), p(&[(2, 1)])));
        assert!(matches!(case, CenterCase::NotMonodromic { .. }));
        let case = classify_system(&PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1), (3, 5)])));
        assert_eq!(case, CenterCase::TheoremA { omega_sq: q(1), slope: q(-1) });
        let case = classify_system(&PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(4, 1)])));
        assert!(matches!(case, CenterCase::NotMonodromic { .. }));
        let case = classify_system(&PiecewiseSystem::horizontal(p(&[(2, 1)]), p(&[(3, 1)])));
        assert!(matches!(case, CenterCase::NotMonodromic { .. }));
        let case = classify_system(&PiecewiseSystem::horizontal(p(&[(2, 1)]), p(&[(2, 2), (3, 1)])));
        assert_eq!(case.label(), "horizontal_centers");
    }

    #[test]
    fn divided_difference_matches_direct_quotient() {
        let f = p(&[(2, 1), (3, -2), (5, 3)]).float_form();
        let (a, b) = (0.3, 0.7);
        let direct = (f.value(b) - f.value(a)) / (b - a);
        assert!((f.divided_difference(a, b) - direct).abs() < 1e-14);
        assert!((f.divided_difference(0.5, 0.5) - f.derivative(0.5)).abs() < 1e-14);
    }
}
