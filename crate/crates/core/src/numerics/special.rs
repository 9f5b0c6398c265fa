use std::cmp::Ordering;
use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{binomial, Precision, Real};
use crate::error::{Error, Result};

static BERNOULLI_EVEN: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli number B_n (B_1 = -1/2).
pub fn bernoulli(n: u32) -> Rational {
    match n {
        0 => return Rational::from(1),
        1 => return Rational::from((-1, 2)),
        _ if n % 2 == 1 => return Rational::new(),
        _ => {}
    }
    let k = (n / 2) as usize;
    let mut table = BERNOULLI_EVEN.lock().unwrap_or_else(|e| e.into_inner());
    if table.len() <= k {
        *table = even_bernoulli_table((2 * k).max(64));
    }
    table[k].clone()
}

// B_0, B_2, ..., B_{2K} from the integer tangent numbers.
fn even_bernoulli_table(kmax: usize) -> Vec<Rational> {
    let mut t = vec![Integer::new(); kmax + 1];
    if kmax >= 1 {
        t[1] = Integer::from(1);
    }
    for k in 2..=kmax {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=kmax {
        for j in k..=kmax {
            let a = Integer::from(&t[j - 1] * (j - k) as u32);
            let b = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = a + b;
        }
    }
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(Rational::from(1));
    for (k, tk) in t.iter().enumerate().skip(1) {
        let four_k = Integer::from(Integer::u_pow_u(4, k as u32));
        let den = Integer::from(&four_k * Integer::from(&four_k - 1u32));
        let mut num = Integer::from(tk * (2 * k) as u32);
        if k % 2 == 0 {
            num = -num;
        }
        out.push(Rational::from((num, den)));
    }
    out
}

/// log Gamma(x) for x > 0.
pub fn log_gamma(x: &Real) -> Result<Real> {
    if !(x.is_finite() && x.cmp0() == Some(Ordering::Greater)) {
        return Err(Error::domain(format!("log_gamma needs x > 0, got {}", x.to_f64())));
    }
    Ok(x.clone().ln_gamma())
}

/// log|Gamma(x)| and the sign of Gamma(x); poles are rejected.
pub fn log_abs_gamma(x: &Real) -> Result<(Real, i8)> {
    if x.cmp0() != Some(Ordering::Greater) && x.is_integer() {
        return Err(Error::domain(format!("Gamma has a pole at {}", x.to_f64())));
    }
    let (v, ord) = x.clone().ln_abs_gamma();
    Ok((v, if ord == Ordering::Less { -1 } else { 1 }))
}

fn asymptotic_shift(prec: Precision) -> u32 {
    (prec.decimal_digits() / 2).max(20)
}

/// zeta'(-1) = 1/12 - log A, with log A from Euler-Maclaurin on sum k log k.
pub fn zeta_prime_minus_one(prec: Precision) -> Real {
    let bits = prec.bits() + 32;
    let n = asymptotic_shift(prec) + 10;
    let mut prod = Integer::from(1);
    for k in 2..=n {
        prod *= Integer::from(Integer::u_pow_u(k, k));
    }
    let s = Float::with_val(bits, &prod).ln();
    let nf = Float::with_val(bits, n);
    let ln_n = nf.clone().ln();
    let n2 = Float::with_val(bits, &nf * &nf);
    let poly = Float::with_val(bits, &n2 / 2u32) + Float::with_val(bits, &nf / 2u32)
        + Rational::from((1, 12));
    let mut log_a = s - poly * ln_n + Float::with_val(bits, &n2 / 4u32);
    let eps = Float::with_val(bits, 1) >> bits;
    let mut npow = n2.clone();
    let mut last = None::<Float>;
    for j in 2u32.. {
        let c = bernoulli(2 * j) / (Integer::from(2 * j) * (2 * j - 1) * (2 * j - 2));
        let term = Float::with_val(bits, &c) / &npow;
        let mag = Float::with_val(bits, term.abs_ref());
        if let Some(prev) = &last {
            if &mag > prev {
                break;
            }
        }
        log_a += &term;
        if mag < eps {
            break;
        }
        last = Some(mag);
        npow *= &n2;
    }
    let out = Float::with_val(bits, Rational::from((1, 12))) - log_a;
    Float::with_val(prec.bits(), out)
}

/// log G(x) for the Barnes G-function, x > 0.
pub fn log_barnes_g(x: &Real) -> Result<Real> {
    if !(x.is_finite() && x.cmp0() == Some(Ordering::Greater)) {
        return Err(Error::domain(format!("log_barnes_g needs x > 0, got {}", x.to_f64())));
    }
    let prec = Precision::of(x);
    let bits = x.prec() + 32;
    let target = asymptotic_shift(prec) as f64;
    let z0 = x.to_f64() - 1.0;
    let shift = if z0 < target { (target - z0).ceil() as u32 } else { 0 };
    let mut correction = Float::with_val(bits, 0);
    let xx = Float::with_val(bits, x);
    for j in 0..shift {
        correction += Float::with_val(bits, &xx + j).ln_gamma();
    }
    let z = Float::with_val(bits, &xx - 1u32) + shift;
    let ln_z = z.clone().ln();
    let z2 = Float::with_val(bits, &z * &z);
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let mut acc = Float::with_val(bits, &z2 / 2u32) * &ln_z;
    acc -= Float::with_val(bits, &z2 * 3u32) / 4u32;
    acc += Float::with_val(bits, &z / 2u32) * two_pi.ln();
    acc -= Float::with_val(bits, &ln_z / 12u32);
    acc += zeta_prime_minus_one(Precision::digits(prec.decimal_digits() + 10));
    let eps = Float::with_val(bits, 1) >> bits;
    let mut zpow = z2.clone();
    let mut last = None::<Float>;
    for k in 1u32.. {
        let c = bernoulli(2 * k + 2) / (Integer::from(4 * k) * (k + 1));
        let term = Float::with_val(bits, &c) / &zpow;
        let mag = Float::with_val(bits, term.abs_ref());
        if let Some(prev) = &last {
            if &mag > prev {
                break;
            }
        }
        acc += &term;
        if mag < eps {
            break;
        }
        last = Some(mag);
        zpow *= &z2;
    }
    Ok(Float::with_val(x.prec(), acc - correction))
}

/// Exact incomplete beta integral of s^(p-1) (1-s)^(q-1) over [0, x] for positive integers p, q.
pub fn incomplete_beta_rational(x: &Rational, p: u32, q: u32) -> Result<Rational> {
    if p == 0 || q == 0 {
        return Err(Error::domain("incomplete beta needs p, q >= 1"));
    }
    let mut xp = x.clone().pow(p);
    let mut acc = Rational::new();
    for k in 0..q {
        let mut term = Rational::from((binomial(q - 1, k), Integer::from(p + k)));
        term *= &xp;
        if k % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
        xp *= x;
    }
    Ok(acc)
}

/// Incomplete beta integral B_x(p, q) for real p, q > 0 and 0 <= x <= 1.
pub fn incomplete_beta(x: &Real, p: &Real, q: &Real) -> Result<Real> {
    let bits = x.prec().max(p.prec()).max(q.prec());
    if x.cmp0() == Some(Ordering::Less) || *x > 1 {
        return Err(Error::domain("incomplete beta needs 0 <= x <= 1"));
    }
    if p.cmp0() != Some(Ordering::Greater) || q.cmp0() != Some(Ordering::Greater) {
        return Err(Error::domain("incomplete beta needs p, q > 0"));
    }
    if x.is_zero() {
        return Ok(Float::with_val(bits, 0));
    }
    if *x > 0.5 {
        let complete = (Float::with_val(bits, p.ln_gamma_ref()) + Float::with_val(bits, q.ln_gamma_ref())
            - Float::with_val(bits, Float::with_val(bits, p + q).ln_gamma()))
        .exp();
        let y = Float::with_val(bits, 1u32 - x);
        return Ok(complete - incomplete_beta(&y, q, p)?);
    }
    let eps = Float::with_val(bits, 1) >> bits;
    let mut coeff = Float::with_val(bits, 1);
    let mut sum = Float::with_val(bits, 1) / p;
    let one_minus_q = Float::with_val(bits, 1u32 - q);
    for n in 0u32..100_000 {
        coeff *= Float::with_val(bits, &one_minus_q + n) * x;
        coeff /= n + 1;
        if coeff.is_zero() {
            break;
        }
        let term = Float::with_val(bits, &coeff / Float::with_val(bits, p + (n + 1)));
        sum += &term;
        if Float::with_val(bits, term.abs_ref()) < Float::with_val(bits, sum.abs_ref()) * &eps {
            break;
        }
    }
    let xp = Float::with_val(bits, x).pow(p);
    Ok(sum * xp)
}
