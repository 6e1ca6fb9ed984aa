//! Exact period scalars.
//!
//! Period constants mix rational numbers (tangential sides, half-integer
//! energy powers) with rational multiples of π/(√2ω), where ω² is a
//! rational. Writing 1/ω = k·√d with d squarefree, every such number lives in
//! the Q-span of `1` and `(π/√2)·√d` for squarefree d. Those basis elements
//! are linearly independent over Q (π is transcendental and square roots of
//! distinct squarefree integers are independent), so a scalar is zero iff
//! every component is zero. That makes the zero test exact.

use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::{One, Zero};

use crate::rational::{inverse_sqrt_split, to_f64, Q};
use crate::series::TruncatedSeries;

/// `rational + Σ_d pi[d]·(π/√2)·√d`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeriodScalar {
    rational: Q,
    pi: BTreeMap<u64, Q>,
}

impl PeriodScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_q(value: Q) -> Self {
        PeriodScalar { rational: value, pi: BTreeMap::new() }
    }

    /// `coef·(π/√2)·√d`.
    pub fn pi_term(coef: Q, d: u64) -> Self {
        let mut pi = BTreeMap::new();
        if !coef.is_zero() {
            pi.insert(d, coef);
        }
        PeriodScalar { rational: Q::zero(), pi }
    }

    /// π/(√2ω) for ω = √omega_sq; `None` unless omega_sq > 0.
    pub fn pi_over_sqrt2_omega(omega_sq: &Q) -> Option<Self> {
        let (coef, d) = inverse_sqrt_split(omega_sq)?;
        Some(Self::pi_term(coef, d))
    }

    pub fn rational(&self) -> &Q {
        &self.rational
    }

    /// Coefficients of (π/√2)·√d keyed by d.
    pub fn pi_parts(&self) -> &BTreeMap<u64, Q> {
        &self.pi
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.pi.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (d, c) in &other.pi {
            let entry = out.pi.entry(*d).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                out.pi.remove(d);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, factor: &Q) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        PeriodScalar {
            rational: &self.rational * factor,
            pi: self.pi.iter().map(|(d, c)| (*d, c * factor)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let unit = core::f64::consts::PI / core::f64::consts::SQRT_2;
        self.pi.iter().fold(to_f64(&self.rational), |acc, (d, c)| {
            acc + to_f64(c) * unit * libm::sqrt(*d as f64)
        })
    }

    /// Sign when it can be decided from the float value with a wide margin,
    /// exactly when the scalar is rational.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return if self.rational > Q::zero() { 1 } else { -1 };
        }
        if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for PeriodScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.rational.is_zero() || self.pi.is_empty() {
            write!(f, "{}", self.rational)?;
            wrote = true;
        }
        for (d, c) in &self.pi {
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            if *d == 1 {
                write!(f, "({})*pi/sqrt(2)", c)?;
            } else {
                write!(f, "({})*pi*sqrt({}/2)", c, d)?;
            }
        }
        Ok(())
    }
}

/// Power series whose coefficients are [`PeriodScalar`]s, stored as one
/// rational series per basis element so compositions stay in Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSeries {
    rational: TruncatedSeries,
    pi: BTreeMap<u64, TruncatedSeries>,
}

impl PeriodSeries {
    pub fn zero(var: &str, order: usize) -> Self {
        PeriodSeries { rational: TruncatedSeries::zero(var, order), pi: BTreeMap::new() }
    }

    pub fn from_rational(series: TruncatedSeries) -> Self {
        PeriodSeries { rational: series, pi: BTreeMap::new() }
    }

    /// `unit · series` for a scalar `unit`; each basis component of the unit
    /// scales the same rational series.
    pub fn scaled_by(unit: &PeriodScalar, series: &TruncatedSeries) -> Self {
        let mut out = Self::from_rational(series.scale(unit.rational()));
        for (d, c) in unit.pi_parts() {
            out.pi.insert(*d, series.scale(c));
        }
        out.prune();
        out
    }

    pub fn order(&self) -> usize {
        self.rational.order()
    }

    pub fn var(&self) -> &str {
        self.rational.var()
    }

    pub fn rational_part(&self) -> &TruncatedSeries {
        &self.rational
    }

    pub fn pi_parts(&self) -> &BTreeMap<u64, TruncatedSeries> {
        &self.pi
    }

    pub fn coeff(&self, k: usize) -> PeriodScalar {
        let mut out = PeriodScalar::from_q(self.rational.coeff(k));
        for (d, s) in &self.pi {
            out = out.add(&PeriodScalar::pi_term(s.coeff(k), *d));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = PeriodSeries { rational: self.rational.add(&other.rational), pi: BTreeMap::new() };
        for d in self.pi.keys().chain(other.pi.keys()) {
            if out.pi.contains_key(d) {
                continue;
            }
            let zero = TruncatedSeries::zero(self.var(), n);
            let a = self.pi.get(d).unwrap_or(&zero);
            let b = other.pi.get(d).unwrap_or(&zero);
            out.pi.insert(*d, a.add(b));
        }
        out.prune();
        out
    }

    pub fn scale(&self, factor: &Q) -> Self {
        let mut out = PeriodSeries {
            rational: self.rational.scale(factor),
            pi: self.pi.iter().map(|(d, s)| (*d, s.scale(factor))).collect(),
        };
        out.prune();
        out
    }

    /// Applies the same rational map to every component (used for
    /// compositions and variable rescalings).
    pub fn map_components<E>(
        &self,
        mut f: impl FnMut(&TruncatedSeries) -> Result<TruncatedSeries, E>,
    ) -> Result<Self, E> {
        let mut out = PeriodSeries { rational: f(&self.rational)?, pi: BTreeMap::new() };
        for (d, s) in &self.pi {
            out.pi.insert(*d, f(s)?);
        }
        out.prune();
        Ok(out)
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map_components::<()>(|s| Ok(s.truncate(order))).unwrap_or_else(|_| unreachable!())
    }

    pub fn with_var(&self, var: &str) -> Self {
        self.map_components::<()>(|s| Ok(s.clone().with_var(var))).unwrap_or_else(|_| unreachable!())
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let unit = core::f64::consts::PI / core::f64::consts::SQRT_2;
        self.pi.iter().fold(self.rational.eval_f64(t), |acc, (d, s)| {
            acc + unit * libm::sqrt(*d as f64) * s.eval_f64(t)
        })
    }

    fn prune(&mut self) {
        self.pi.retain(|_, s| !s.is_zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    #[test]
    fn pi_over_sqrt2_omega_normalizes() {
        let harmonic = PeriodScalar::pi_over_sqrt2_omega(&q(1)).unwrap();
        assert_eq!(harmonic, PeriodScalar::pi_term(q(1), 1));
        // ω² = 2: π/(2) = (1/2)·(π/√2)·√2
        let s = PeriodScalar::pi_over_sqrt2_omega(&q(2)).unwrap();
        assert_eq!(s, PeriodScalar::pi_term(q_frac(1, 2), 2));
        assert!((s.to_f64() - core::f64::consts::PI / 2.0).abs() < 1e-15);
        // ω² = 8 and ω² = 2 share the same irrational direction.
        let t = PeriodScalar::pi_over_sqrt2_omega(&q(8)).unwrap();
        assert_eq!(t.pi_parts().keys().collect::<alloc::vec::Vec<_>>(), [&2]);
        assert!(PeriodScalar::pi_over_sqrt2_omega(&q(0)).is_none());
    }

    #[test]
    fn exact_zero_test() {
        let a = PeriodScalar::pi_over_sqrt2_omega(&q(2)).unwrap();
        let b = PeriodScalar::pi_over_sqrt2_omega(&q(8)).unwrap();
        // π/2 − 2·π/4 = 0
        assert!(a.sub(&b.scale(&q(2))).is_zero());
        let mixed = a.add(&PeriodScalar::from_q(q(1)));
        assert!(!mixed.is_zero());
        assert!(!mixed.is_rational());
        assert_eq!(mixed.signum(), 1);
    }

    #[test]
    fn series_of_scalars() {
        let unit = PeriodScalar::pi_over_sqrt2_omega(&q(1)).unwrap();
        let r = TruncatedSeries::from_i64("h", &[1, 2], 2);
        let s = PeriodSeries::scaled_by(&unit, &r).add(&PeriodSeries::from_rational(TruncatedSeries::from_i64("h", &[0, 0, 5], 2)));
        assert_eq!(s.coeff(1), PeriodScalar::pi_term(q(2), 1));
        assert_eq!(s.coeff(2), PeriodScalar::from_q(q(5)));
        let expected = core::f64::consts::PI / core::f64::consts::SQRT_2 * (1.0 + 2.0 * 0.1) + 5.0 * 0.01;
        assert!((s.eval_f64(0.1) - expected).abs() < 1e-14);
    }
}
