//! Exact rational helpers shared by the series and potential code.

use alloc::string::String;
use alloc::string::ToString;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"0.25"` or `"-1e-3"`.
///
/// Decimals are converted exactly (`"0.1"` is 1/10, not the nearest double).
pub fn parse_q(text: &str) -> Option<Q> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Some(Q::from_integer(n));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i64::from_str(&s[i + 1..]).ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::from(int_part);
    digits.push_str(frac_part);
    let mut value = Q::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exponent - frac_part.len() as i64;
    let ten = q(10);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// `"p/q"` or `"p"` when the denominator is one.
pub fn format_q(value: &Q) -> String {
    value.to_string()
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite double.
pub fn from_f64(value: f64) -> Option<Q> {
    Q::from_float(value)
}

/// n! as a rational.
pub fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

/// Odd double factorial (2k+1)!! = 1·3·5···(2k+1); (−1)!! = 1.
pub fn odd_double_factorial(k: isize) -> Q {
    let mut acc = Q::one();
    let mut j = 1i64;
    while j <= 2 * k as i64 + 1 {
        acc *= q(j);
        j += 2;
    }
    acc
}

/// Even double factorial (2k)!! = 2ᵏ·k!.
pub fn even_double_factorial(k: usize) -> Q {
    num_traits::pow(q(2), k) * factorial(k)
}

/// Writes a positive integer as k²·d with d squarefree.
///
/// Trial division runs up to 10⁶; any cofactor left over is below 10¹⁸
/// whenever the input is, so it is a prime, a prime square or a product of
/// two distinct primes and the perfect-square test classifies it exactly.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut square_root_part = BigUint::one();
    let mut free = BigUint::one();
    let mut p = 2u64;
    while p <= 1_000_000 {
        let pp = BigUint::from(p);
        if &pp * &pp > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            count += 1;
        }
        if count > 0 {
            square_root_part *= num_traits::pow(pp.clone(), (count / 2) as usize);
            if count % 2 == 1 {
                free *= &pp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square_root_part *= r;
        } else {
            free *= rest;
        }
    }
    (square_root_part, free)
}

/// 1/√w = (k/p)·√d for a positive rational w = p/q, with pq = k²d and d squarefree.
pub fn inverse_sqrt_split(w: &Q) -> Option<(Q, u64)> {
    if !w.is_positive() {
        return None;
    }
    let p = w.numer().magnitude().clone();
    let qd = w.denom().magnitude().clone();
    let (k, d) = squarefree_split(&(&p * &qd));
    let d = d.to_u64()?;
    let coef = Q::new(BigInt::from(k), BigInt::from(p));
    Some((coef, d))
}

/// Exact square root when `w` is the square of a rational.
pub fn exact_sqrt(w: &Q) -> Option<Q> {
    if w.is_negative() {
        return None;
    }
    let (n, d) = (w.numer().magnitude(), w.denom().magnitude());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == *n && &rd * &rd == *d {
        Some(Q::new(BigInt::from(rn), BigInt::from(rd)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/4"), Some(q_frac(3, 4)));
        assert_eq!(parse_q("-1/2"), Some(q_frac(-1, 2)));
        assert_eq!(parse_q("0.1"), Some(q_frac(1, 10)));
        assert_eq!(parse_q("1e-3"), Some(q_frac(1, 1000)));
        assert_eq!(parse_q("-2.5E1"), Some(q(-25)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
        assert_eq!(parse_q(""), None);
    }

    #[test]
    fn squarefree_parts() {
        let (k, d) = squarefree_split(&BigUint::from(72u32));
        assert_eq!((k, d), (BigUint::from(6u32), BigUint::from(2u32)));
        let (k, d) = squarefree_split(&BigUint::from(1u32));
        assert_eq!((k, d), (BigUint::one(), BigUint::one()));
        // large prime square cofactor
        let p = BigUint::from(1_000_003u64);
        let (k, d) = squarefree_split(&(&p * &p * BigUint::from(3u32)));
        assert_eq!((k, d), (p, BigUint::from(3u32)));
    }

    #[test]
    fn inverse_sqrt_of_rationals() {
        // 1/sqrt(2) = (1/2)·sqrt(2)
        assert_eq!(inverse_sqrt_split(&q(2)), Some((q_frac(1, 2), 2)));
        // 1/sqrt(4) = 1/2
        assert_eq!(inverse_sqrt_split(&q(4)), Some((q_frac(1, 2), 1)));
        // 1/sqrt(1/3) = sqrt(3)
        assert_eq!(inverse_sqrt_split(&q_frac(1, 3)), Some((q(1), 3)));
        assert_eq!(inverse_sqrt_split(&q(-1)), None);
    }

    #[test]
    fn double_factorials() {
        assert_eq!(odd_double_factorial(-1), q(1));
        assert_eq!(odd_double_factorial(2), q(15));
        assert_eq!(even_double_factorial(3), q(48));
        assert_eq!(exact_sqrt(&q_frac(9, 4)), Some(q_frac(3, 2)));
        assert_eq!(exact_sqrt(&q(2)), None);
    }
}
