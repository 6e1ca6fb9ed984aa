//! Exact truncated power series over the rationals.
//!
//! A [`TruncatedSeries`] of order N stores c₀..c_N and stands for
//! Σ cₖ tᵏ + O(t^{N+1}). Binary operations on series of different order
//! truncate to the smaller order; the order of the result records it.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::rational::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// The inner series of a composition (or the argument of a binomial
    /// power) has a nonzero constant term.
    NonzeroConstantInner,
    /// Reversion needs c₀ = 0 and c₁ ≠ 0.
    NotInvertible,
    /// Reciprocal of a series with zero constant term.
    ZeroConstant,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonzeroConstantInner => write!(f, "inner series has a nonzero constant term"),
            SeriesError::NotInvertible => write!(f, "series is not invertible (needs c0 = 0, c1 != 0)"),
            SeriesError::ZeroConstant => write!(f, "reciprocal of a series with zero constant term"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Q>,
    var: String,
}

impl TruncatedSeries {
    /// Builds a series of the given order; missing coefficients are zero and
    /// surplus ones are dropped.
    pub fn new(var: &str, mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        TruncatedSeries { coeffs, var: String::from(var) }
    }

    pub fn from_i64(var: &str, coeffs: &[i64], order: usize) -> Self {
        Self::new(var, coeffs.iter().map(|&c| q(c)).collect(), order)
    }

    pub fn zero(var: &str, order: usize) -> Self {
        Self::new(var, Vec::new(), order)
    }

    pub fn one(var: &str, order: usize) -> Self {
        Self::constant(var, Q::one(), order)
    }

    pub fn constant(var: &str, c: Q, order: usize) -> Self {
        Self::new(var, vec![c], order)
    }

    /// The identity series `t`.
    pub fn identity(var: &str, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if order >= 1 {
            s.coeffs[1] = Q::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = String::from(var);
        self
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// cₖ, or zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set_coeff(&mut self, k: usize, value: Q) {
        if k < self.coeffs.len() {
            self.coeffs[k] = value;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(&self.var, self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when the series equals `t` up to its order.
    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| if k == 1 { c.is_one() } else { c.is_zero() })
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Self::new(&self.var, coeffs, n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Self::new(&self.var, coeffs, n)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, factor: &Q) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * factor).collect();
        Self::new(&self.var, coeffs, self.order())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Q::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(&self.var, out, n)
    }

    /// Multiplies by tᵏ, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![Q::zero(); k.min(n + 1)];
        out.extend(self.coeffs.iter().take((n + 1).saturating_sub(k)).cloned());
        Self::new(&self.var, out, n)
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let coeffs = (1..=n).map(|k| &self.coeffs[k] * q(k as i64)).collect();
        Self::new(&self.var, coeffs, n)
    }

    /// Multiplicative inverse; needs c₀ ≠ 0.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstant);
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Q::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(&self.var, out, n))
    }

    /// `self ∘ inner`, truncated at the common order.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantInner);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: c0 + g(c1 + g(c2 + ...)).
        let mut acc = Self::constant(&inner.var, self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse g with f∘g = t, by Newton iteration with
    /// precision doubling.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n == 0 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let mut g = Self::new(&self.var, vec![Q::zero(), self.coeffs[1].recip()], 1);
        let mut m = 1;
        while m < n {
            m = (2 * m).min(n);
            let f = self.truncate(m);
            let g_m = g.truncate(m);
            let residual = f.compose(&g_m)?.sub(&Self::identity(&self.var, m));
            let slope = f.derivative().compose(&g_m)?;
            let step = residual.mul(&slope.reciprocal()?);
            g = g_m.sub(&step);
        }
        Ok(g.truncate(n))
    }

    /// (1+u)^α by the generalized binomial series; u must have c₀ = 0.
    pub fn binomial_power(u: &Self, alpha: &Q) -> Result<Self, SeriesError> {
        if !u.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantInner);
        }
        let n = u.order();
        let mut binom = Vec::with_capacity(n + 1);
        let mut c = Q::one();
        for k in 0..=n {
            binom.push(c.clone());
            c = c * (alpha - q(k as i64)) / q(k as i64 + 1);
        }
        Self::new(&u.var, binom, n).compose(u)
    }

    /// (1+u)^(−1/2).
    pub fn powhalf_reciprocal(u: &Self) -> Result<Self, SeriesError> {
        Self::binomial_power(u, &Q::new((-1).into(), 2.into()))
    }

    /// (1+u)^(1/2).
    pub fn sqrt_one_plus(u: &Self) -> Result<Self, SeriesError> {
        Self::binomial_power(u, &Q::new(1.into(), 2.into()))
    }

    /// Float evaluation by Horner.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + crate::rational::to_f64(c))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*{}", c, self.var)?,
                _ => write!(f, "({})*{}^{}", c, self.var, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{factorial, q_frac};

    fn s(coeffs: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64("t", coeffs, order)
    }

    #[test]
    fn product_examples() {
        assert_eq!(s(&[1, 1], 2).mul(&s(&[1, -1], 2)), s(&[1, 0, -1], 2));
        let x = s(&[3, -2, 5, 7], 3);
        assert_eq!(TruncatedSeries::one("t", 3).mul(&x), x);
        assert_eq!(s(&[1, 1, 1], 2).mul(&s(&[1, 1], 2)), s(&[1, 2, 2], 2));
    }

    #[test]
    fn product_matches_term_by_term_convolution() {
        let a = s(&[1, 1, 1], 2);
        let b = s(&[1, 1], 2);
        let mut expected = [0i64; 3];
        for i in 0..3i64 {
            for j in 0..3i64 {
                let ai = [1, 1, 1][i as usize];
                let bj = [1, 1, 0][j as usize];
                if i + j <= 2 {
                    expected[(i + j) as usize] += ai * bj;
                }
            }
        }
        assert_eq!(a.mul(&b), s(&expected, 2));
    }

    #[test]
    fn mixed_order_truncates_to_smaller() {
        let a = s(&[1, 2, 3, 4, 5], 4);
        let b = s(&[1, 1], 2);
        let c = a.mul(&b);
        assert_eq!(c.order(), 2);
        assert_eq!(c, s(&[1, 3, 5], 2));
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn compose_examples() {
        assert_eq!(s(&[1, 1], 1).compose(&s(&[0, 2], 1)).unwrap(), s(&[1, 2], 1));
        let f = s(&[2, -1, 3, 4], 3);
        assert_eq!(f.compose(&TruncatedSeries::identity("t", 3)).unwrap(), f);
        let outer = s(&[0, 1, 1], 4);
        let inner = s(&[0, 1, -1, 2, -5], 4);
        assert!(outer.compose(&inner).unwrap().is_identity());
        assert_eq!(f.compose(&s(&[1, 1], 3)), Err(SeriesError::NonzeroConstantInner));
    }

    #[test]
    fn reversion_examples() {
        let id = TruncatedSeries::identity("t", 6);
        assert_eq!(id.reversion().unwrap(), id);
        assert_eq!(s(&[0, 1, 1], 4).reversion().unwrap(), s(&[0, 1, -1, 2, -5], 4));
        assert_eq!(s(&[0, 1, 0, 1], 5).reversion().unwrap(), s(&[0, 1, 0, -1, 0, 3], 5));
        assert_eq!(s(&[1, 1], 3).reversion(), Err(SeriesError::NotInvertible));
        assert_eq!(s(&[0, 0, 1], 3).reversion(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn reversion_catalan_order_twelve() {
        // t + t² reverts to Σ (−1)^(k−1) C_{k−1} t^k with Catalan numbers C.
        let g = s(&[0, 1, 1], 12).reversion().unwrap();
        let catalan = [1i64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786];
        for k in 1..=12 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(g.coeff(k), q(sign * catalan[k - 1]), "k = {k}");
        }
    }

    #[test]
    fn powhalf_examples() {
        let one = TruncatedSeries::one("t", 3);
        assert_eq!(TruncatedSeries::powhalf_reciprocal(&TruncatedSeries::zero("t", 3)).unwrap(), one);
        let r = TruncatedSeries::powhalf_reciprocal(&TruncatedSeries::identity("t", 3)).unwrap();
        assert_eq!(r.coeffs(), &[q(1), q_frac(-1, 2), q_frac(3, 8), q_frac(-5, 16)]);
        assert_eq!(TruncatedSeries::powhalf_reciprocal(&one), Err(SeriesError::NonzeroConstantInner));
    }

    #[test]
    fn powhalf_matches_generalized_binomial_coefficients() {
        // C(−1/2, k) = (−1)^k (2k)! / (4^k (k!)²)
        let r = TruncatedSeries::powhalf_reciprocal(&TruncatedSeries::identity("t", 10)).unwrap();
        for k in 0..=10usize {
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            let kf = factorial(k);
            let expected = sign * factorial(2 * k) / (num_traits::pow(q(4), k) * &kf * &kf);
            assert_eq!(r.coeff(k), expected, "k = {k}");
        }
    }

    #[test]
    fn reciprocal_and_shift() {
        let a = s(&[1, -1], 4);
        assert_eq!(a.reciprocal().unwrap(), s(&[1, 1, 1, 1, 1], 4));
        assert_eq!(s(&[0, 1], 3).reciprocal(), Err(SeriesError::ZeroConstant));
        assert_eq!(s(&[1, 2, 3], 3).shift_up(2), s(&[0, 0, 1, 2], 3));
    }

    #[test]
    fn display_is_readable() {
        let text = alloc::format!("{}", s(&[0, 1, -1], 2));
        assert_eq!(text, "(1)*t + (-1)*t^2 + O(t^3)");
    }
}
