//! Randomized properties of the exact series engine, the expansions and the
//! quadrature.

use isochron_core::expansion::{center_half_period_series, gamma_ratio, side_transit_series, z_substitution};
use isochron_core::potential::{classify_system, CenterCase};
use isochron_core::quadrature::branch_time_numeric;
use isochron_core::rational::{q, q_frac, to_f64};
use isochron_core::{PiecewiseSystem, Potential, Side, TruncatedSeries, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| q_frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// t·c₁ + Σ_{k≥2} c_k t^k with c₁ ≠ 0, order 7.
fn invertible_series() -> impl Strategy<Value = TruncatedSeries> {
    (nonzero_rational(), proptest::collection::vec(rational(), 6)).prop_map(|(c1, rest)| {
        let mut coeffs = vec![Q::zero(), c1];
        coeffs.extend(rest);
        TruncatedSeries::new("t", coeffs, 7)
    })
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(rational(), 7).prop_map(|c| TruncatedSeries::new("t", c, 6))
}

/// c₂ x² + c₃ x³ + c₄ x⁴ with c₂ ∈ [1, 3] and small perturbations, so the
/// energies used below stay well inside the period annulus on both sides.
fn center_potential() -> impl Strategy<Value = Potential> {
    (1i64..=3, -4i64..=4, -4i64..=4).prop_map(|(c2, c3, c4)| {
        Potential::new([(2, q(c2)), (3, q_frac(c3, 8)), (4, q_frac(c4, 8))]).unwrap()
    })
}

fn even_potential() -> impl Strategy<Value = Potential> {
    (1i64..=4, -5i64..=5, -5i64..=5).prop_map(|(c2, c4, c6)| {
        Potential::new([(2, q(c2)), (4, q_frac(c4, 3)), (6, q_frac(c6, 7))]).unwrap()
    })
}

fn any_side_potential() -> impl Strategy<Value = Potential> {
    // one random leading term of order 1..=6 plus a random cubic tail
    (1u32..=6, nonzero_rational(), rational(), rational()).prop_map(|(k, c, a, b)| {
        Potential::new([(k, c), (k + 1, a), (k + 2, b)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn compose_with_reversion_is_identity(s in invertible_series()) {
        let r = s.reversion().unwrap();
        prop_assert!(s.compose(&r).unwrap().is_identity());
        prop_assert!(r.compose(&s).unwrap().is_identity());
    }

    #[test]
    fn product_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn square_root_squares_back(mut s in series()) {
        s.set_coeff(0, Q::zero());
        let root = TruncatedSeries::sqrt_one_plus(&s).unwrap();
        let one_plus = s.add(&TruncatedSeries::one("t", 6));
        prop_assert_eq!(root.mul(&root), one_plus.clone());
        let inv = TruncatedSeries::powhalf_reciprocal(&s).unwrap();
        prop_assert_eq!(inv.mul(&inv).mul(&one_plus), TruncatedSeries::one("t", 6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn even_potentials_have_odd_z_maps(v in even_potential()) {
        let x = z_substitution(&v, 9).unwrap();
        for i in 1..=4 {
            prop_assert!(x.coeff(2 * i).is_zero(), "b_{} = {}", 2 * i, x.coeff(2 * i));
        }
    }

    #[test]
    fn energy_scaling_law(v in center_potential(), lambda_num in 1i64..=20, h_exp in -4i32..=-2) {
        let lambda = q_frac(lambda_num, 4);
        let scaled = v.scaled(&lambda);
        let h = 10f64.powi(h_exp);
        let l = to_f64(&lambda);
        for side in [Side::Left, Side::Right] {
            let base = branch_time_numeric(&v, h, side).unwrap();
            let other = branch_time_numeric(&scaled, l * h, side).unwrap();
            let rel = (other - base / l.sqrt()).abs() / base;
            prop_assert!(rel < 1e-9, "side {:?}: rel {}", side, rel);
        }
    }

    #[test]
    fn mirror_law(v in center_potential(), h_exp in -4i32..=-2) {
        let h = 10f64.powi(h_exp);
        let right = branch_time_numeric(&v, h, Side::Right).unwrap();
        let left_of_mirror = branch_time_numeric(&v.mirrored(), h, Side::Left).unwrap();
        prop_assert!((right - left_of_mirror).abs() / right < 1e-12);
    }

    #[test]
    fn full_period_branch_sum_has_no_odd_powers(v in center_potential()) {
        let order = 8;
        let left = side_transit_series(&v, Side::Left, order).unwrap().series;
        let right = side_transit_series(&v, Side::Right, order).unwrap().series;
        let total = left.add(&right);
        for m in (1..=order).step_by(2) {
            prop_assert!(total.coeff(m).is_zero(), "y0^{} = {}", m, total.coeff(m));
        }
        // even part: 2·T̃(h) with h = y₀²/2
        let half = center_half_period_series(&v, order / 2).unwrap().series;
        for k in 0..=order / 2 {
            let expected = half.coeff(k).scale(&(q(2) / num_traits::pow(q(2), k)));
            prop_assert_eq!(total.coeff(2 * k), expected);
        }
    }

    #[test]
    fn classification_is_mirror_symmetric(a in any_side_potential(), b in any_side_potential()) {
        let sys = PiecewiseSystem::vertical(a, b);
        let direct = classify_system(&sys);
        let mirrored = classify_system(&sys.mirrored());
        prop_assert_eq!(direct.label(), mirrored.label());
        if let (CenterCase::Vertical { left, right, .. }, CenterCase::Vertical { left: l2, right: r2, .. }) = (&direct, &mirrored) {
            prop_assert_eq!(left.flatness(), l2.flatness());
            prop_assert_eq!(right.flatness(), r2.flatness());
        }
    }
}

#[test]
fn gamma_ratio_matches_high_precision_values() {
    // Γ(i+3/2)/(√π Γ(i+1)), i = 0..=12, evaluated with mpmath at 50 digits
    let frozen = [
        0.5,
        0.75,
        0.9375,
        1.09375,
        1.23046875,
        1.353515625,
        1.46630859375,
        1.571044921875,
        1.6692352294921875,
        1.7619705200195312,
        1.8500690460205078,
        1.9341630935668945,
        2.014753222465515,
    ];
    for (i, expected) in frozen.iter().enumerate() {
        let got = to_f64(&gamma_ratio(i));
        assert!((got - expected).abs() < 1e-15 * expected, "i = {i}: {got} vs {expected}");
    }
    assert!(gamma_ratio(0) * q(2) == Q::one());
}
