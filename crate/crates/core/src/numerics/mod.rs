//! Arbitrary precision building blocks: working precision, special functions,
//! exact and floating determinants, endpoint-weighted quadrature and 1-D solvers.

mod calculus;
mod linalg;
mod quadrature;
mod special;
mod value;

pub use calculus::{brent_root, central_derivative};
pub use linalg::{bareiss_det, log_det, LogDet};
pub use quadrature::{gauss_jacobi, integrate_endpoint, GaussJacobiRule};
pub use value::{ExactValue, Method, Value};
pub use special::{
    bernoulli, incomplete_beta, incomplete_beta_rational, log_abs_gamma, log_barnes_g,
    log_gamma, zeta_prime_minus_one,
};

use rug::float::Constant;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

/// Arbitrary precision real number.
pub type Real = Float;

/// Working precision expressed in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    digits: u32,
}

/// Extra bits carried on top of the requested digits.
const GUARD_BITS: u32 = 32;

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 64;

    pub fn digits(digits: u32) -> Self {
        Precision { digits: digits.max(8) }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa size in bits, guard bits included.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Recover the precision a number was created with.
    pub fn of(x: &Real) -> Self {
        let d = (x.prec().saturating_sub(GUARD_BITS)) as f64 / std::f64::consts::LOG2_10;
        Precision { digits: (d.floor() as u32).max(8) }
    }

    pub fn real<T>(&self, v: T) -> Real
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Float::with_val(self.bits(), v)
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Real {
        Float::with_val(self.bits(), num) / den
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// 10^(-digits/2): default tolerance for roots and convergence checks.
    pub fn tolerance(&self) -> Real {
        self.pow10(-(self.digits as i32) / 2)
    }

    /// 2^(1-bits) relative to one.
    pub fn epsilon(&self) -> Real {
        let mut e = Float::with_val(self.bits(), 1);
        e >>= self.bits() - 1;
        e
    }

    pub fn pow10(&self, e: i32) -> Real {
        let ten = Float::with_val(self.bits(), 10);
        rug::ops::Pow::pow(ten, e)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(Self::DEFAULT_DIGITS)
    }
}

/// A sign together with log|value|, used where magnitudes over- or underflow f64.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub log_abs: Real,
}

impl SignedLog {
    pub fn value(&self) -> Real {
        let v = self.log_abs.clone().exp();
        if self.sign < 0 {
            -v
        } else if self.sign == 0 {
            Float::with_val(self.log_abs.prec(), 0)
        } else {
            v
        }
    }
}

/// Natural log of a positive rational at the given precision.
pub fn ln_rational(r: &Rational, prec: Precision) -> Real {
    assert!(r.cmp0() == std::cmp::Ordering::Greater, "log of non-positive rational");
    // numerator and denominator can be far outside the f64 range, so take logs separately
    let n = Float::with_val(prec.bits() + 64, r.numer()).ln();
    let d = Float::with_val(prec.bits() + 64, r.denom()).ln();
    Float::with_val(prec.bits(), n - d)
}

pub fn rational_to_real(r: &Rational, prec: Precision) -> Real {
    Float::with_val(prec.bits(), r)
}

/// Parse "p/q", an integer or a decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: Integer = p.trim().parse().ok()?;
        let q: Integer = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::from((p, q)));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let mut n: Integer = digits.parse().ok()?;
        if neg {
            n = -n;
        }
        let d = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        return Some(Rational::from((n, d)));
    }
    let n: Integer = s.parse().ok()?;
    Some(Rational::from(n))
}

/// Rising factorial x (x+1) ... (x+k-1).
pub fn rising_rational(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut t = x.clone();
    for _ in 0..k {
        acc *= &t;
        t += 1;
    }
    acc
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bits_cover_digits() {
        let p = Precision::digits(64);
        assert!(p.bits() >= 213 + 32);
        let x = p.from_f64(1.5);
        assert_eq!(Precision::of(&x).decimal_digits(), 64);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("0.75").unwrap(), Rational::from((3, 4)));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::from((-3, 2)));
        assert_eq!(parse_rational("3").unwrap(), Rational::from(3));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn ln_of_huge_rational() {
        let p = Precision::default();
        let big = Integer::from(Integer::u_pow_u(3, 5000));
        let r = Rational::from((Integer::from(1), big));
        let got = ln_rational(&r, p);
        let want = -(p.real(3).ln() * 5000u32);
        assert!((got - want).abs() < p.pow10(-55));
    }

    #[test]
    fn rising_factorial() {
        assert_eq!(rising_rational(&Rational::from(3), 4), Rational::from(360));
        assert_eq!(rising_rational(&Rational::from((1, 2)), 2), Rational::from((3, 4)));
    }
}
