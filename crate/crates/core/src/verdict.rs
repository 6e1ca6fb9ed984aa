//! Non-isochronicity certificates.
//!
//! Dispatch on the center type: divergent cases are certified by the
//! log–log slope of the flatter side's transit time, finite-period cases by
//! the first exactly nonzero period constant.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::expansion::{coupled_expansion, first_nonzero_constant, FirstNonzero, OddTermNote, Param};
use crate::potential::{classify_side, classify_system, oriented_pair, CaseId, CenterCase, PiecewiseSystem, Potential, Side, SideBehavior};
use crate::quadrature::{divergence_probe, rho_grid, DivergenceFit};
use crate::rational::{q_frac, Q};
use crate::scalar::PeriodScalar;

/// Largest accepted |fitted − predicted| / |predicted| for divergence evidence.
pub const DIVERGENCE_REL_TOL: f64 = 0.05;
/// ρ range of the probe behind divergence evidence.
pub const PROBE_RHO_MAX: f64 = 1e-1;
pub const PROBE_RHO_MIN: f64 = 1e-3;
pub const PROBE_POINTS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    FirstNonzeroConstant { index: usize, value: PeriodScalar, param: Param },
    DivergentPeriodAtOrigin { case: CaseId, side: Side, predicted_exponent: Q, fitted_exponent: f64, fit: DivergenceFit },
    /// T₀ = 0 and T₁ > 0: the period tends to zero at the origin.
    PeriodVanishesAtOrigin { t1: PeriodScalar, param: Param },
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::FirstNonzeroConstant { .. } => "first_nonzero_constant",
            Evidence::DivergentPeriodAtOrigin { .. } => "divergent_period_at_origin",
            Evidence::PeriodVanishesAtOrigin { .. } => "period_vanishes_at_origin",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IsochronyVerdict {
    NotIsochronous { evidence: Evidence },
    /// Both potentials exactly quadratic; ω² per side.
    IsochronousLinearCase { omega_minus_sq: Q, omega_plus_sq: Q },
    UndeterminedUpToOrder { order: usize, reason: String },
    NotMonodromic { reason: String },
}

impl IsochronyVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            IsochronyVerdict::NotIsochronous { .. } => "not_isochronous",
            IsochronyVerdict::IsochronousLinearCase { .. } => "isochronous_linear_case",
            IsochronyVerdict::UndeterminedUpToOrder { .. } => "undetermined_up_to_order",
            IsochronyVerdict::NotMonodromic { .. } => "not_monodromic",
        }
    }

    pub fn is_not_isochronous(&self) -> bool {
        matches!(self, IsochronyVerdict::NotIsochronous { .. })
    }
}

/// The verdict together with the classification and any discrepancy notes
/// from the expansion it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub case: CenterCase,
    pub order: usize,
    pub verdict: IsochronyVerdict,
    pub notes: Vec<OddTermNote>,
}

pub fn verdict(sys: &PiecewiseSystem, order: usize) -> IsochronyVerdict {
    verdict_report(sys, order).verdict
}

pub fn verdict_report(sys: &PiecewiseSystem, order: usize) -> VerdictReport {
    let case = classify_system(sys);
    let mut notes = Vec::new();
    let verdict = match &case {
        CenterCase::NotMonodromic { reason } => IsochronyVerdict::NotMonodromic { reason: reason.clone() },
        CenterCase::Vertical { case: id, .. } if id.is_divergent() => divergent(sys, *id),
        CenterCase::Vertical { case: CaseId::IV, .. } => match coupled_expansion(sys, order) {
            Ok(exp) => {
                let t1 = exp.constant(1);
                if exp.leading().is_zero() && t1.signum() > 0 {
                    IsochronyVerdict::NotIsochronous {
                        evidence: Evidence::PeriodVanishesAtOrigin { t1, param: exp.param },
                    }
                } else {
                    undetermined(order, "fold-fold expansion without the vanishing-period signature")
                }
            }
            Err(e) => undetermined(order, &format!("{e}")),
        },
        _ => match coupled_expansion(sys, order) {
            Ok(exp) => {
                notes = exp.notes.clone();
                match first_nonzero_constant(&exp) {
                    FirstNonzero::At { index, value } => IsochronyVerdict::NotIsochronous {
                        evidence: Evidence::FirstNonzeroConstant { index, value, param: exp.param },
                    },
                    FirstNonzero::AllZeroUpToN(n) => linear_or_undetermined(sys, n),
                }
            }
            Err(e) => undetermined(order, &format!("{e}")),
        },
    };
    VerdictReport { case, order, verdict, notes }
}

fn undetermined(order: usize, reason: &str) -> IsochronyVerdict {
    IsochronyVerdict::UndeterminedUpToOrder { order, reason: String::from(reason) }
}

fn linear_or_undetermined(sys: &PiecewiseSystem, order: usize) -> IsochronyVerdict {
    match (classify_side(&sys.v_minus, Side::Left), classify_side(&sys.v_plus, Side::Right)) {
        (SideBehavior::NondegenerateCenter { omega_sq: m }, SideBehavior::NondegenerateCenter { omega_sq: p })
            if sys.v_minus.is_exact_quadratic() && sys.v_plus.is_exact_quadratic() =>
        {
            IsochronyVerdict::IsochronousLinearCase { omega_minus_sq: m, omega_plus_sq: p }
        }
        _ => undetermined(order, "all computed constants vanish but the potentials are not both quadratic"),
    }
}

/// The flatter side of a divergent vertical case (in normalized
/// orientation), whose transit time dominates as h → 0.
pub fn probe_target(sys: &PiecewiseSystem) -> Option<(Potential, Side)> {
    let case = classify_system(sys);
    match case.case_id() {
        Some(id) if id.is_divergent() => {
            let (left, right) = oriented_pair(sys, &case);
            let flat_left = classify_side(&left, Side::Left).flatness().unwrap_or(0);
            let flat_right = classify_side(&right, Side::Right).flatness().unwrap_or(0);
            Some(if flat_left >= flat_right { (left, Side::Left) } else { (right, Side::Right) })
        }
        _ => None,
    }
}

fn divergent(sys: &PiecewiseSystem, id: CaseId) -> IsochronyVerdict {
    let Some((v, side)) = probe_target(sys) else {
        return undetermined(0, "no degenerate side to probe");
    };
    let grid = match rho_grid(PROBE_RHO_MAX, PROBE_RHO_MIN, PROBE_POINTS) {
        Ok(g) => g,
        Err(e) => return undetermined(0, &format!("{e}")),
    };
    match divergence_probe(&v, side, &grid) {
        Ok(fit) if fit.fitted_exponent < 0.0 && fit.relative_mismatch() <= DIVERGENCE_REL_TOL => {
            let predicted = q_frac(-(2 * (fit.r as i64 - 1) + fit.i as i64), 2);
            IsochronyVerdict::NotIsochronous {
                evidence: Evidence::DivergentPeriodAtOrigin {
                    case: id,
                    side,
                    predicted_exponent: predicted,
                    fitted_exponent: fit.fitted_exponent,
                    fit,
                },
            }
        }
        Ok(fit) => undetermined(
            0,
            &format!("fitted exponent {} does not match predicted {}", fit.fitted_exponent, fit.predicted_exponent),
        ),
        Err(e) => undetermined(0, &format!("{e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(terms: &[(u32, i64)]) -> Potential {
        Potential::from_i64(terms).unwrap()
    }

    #[test]
    fn divergent_case_ii() {
        let sys = PiecewiseSystem::vertical(p(&[(4, 1)]), p(&[(2, 1)]));
        match verdict(&sys, 12) {
            IsochronyVerdict::NotIsochronous { evidence: Evidence::DivergentPeriodAtOrigin { predicted_exponent, fitted_exponent, case, .. } } => {
                assert_eq!(case, CaseId::II);
                assert_eq!(predicted_exponent, q(-1));
                assert!((fitted_exponent + 1.0).abs() < 0.05);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn theorem_a_first_constant() {
        let sys = PiecewiseSystem::mixed(p(&[(1, -1)]), p(&[(2, 1)]));
        match verdict(&sys, 12) {
            IsochronyVerdict::NotIsochronous { evidence: Evidence::FirstNonzeroConstant { index, value, param } } => {
                assert_eq!(index, 1);
                assert_eq!(value, PeriodScalar::from_q(q(2)));
                assert_eq!(param, Param::ByXCrossing);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn harmonic_is_linear_case() {
        let sys = PiecewiseSystem::vertical(p(&[(2, 1)]), p(&[(2, 1)]));
        assert_eq!(verdict(&sys, 12), IsochronyVerdict::IsochronousLinearCase { omega_minus_sq: q(1), omega_plus_sq: q(1) });
    }

    #[test]
    fn fold_fold_vanishes() {
        let sys = PiecewiseSystem::vertical(p(&[(1, -1)]), p(&[(1, 1)]));
        match verdict(&sys, 12) {
            IsochronyVerdict::NotIsochronous { evidence: Evidence::PeriodVanishesAtOrigin { t1, .. } } => {
                assert_eq!(t1, PeriodScalar::from_q(q(4)))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_monodromic() {
        let sys = PiecewiseSystem::vertical(p(&[(1, 1)]), p(&[(2, 1)]));
        assert!(matches!(verdict(&sys, 12), IsochronyVerdict::NotMonodromic { .. }));
    }
}
