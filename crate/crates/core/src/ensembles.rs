//! Jacobi, Meixner, truncated unitary and circular unitary ensembles: partition
//! functions, distribution of the largest eigenvalue and characteristic moments.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{hyp_coeff_rational, partitions_in_box, schur_at_ones, Partition};
use crate::error::{Error, Result};
use crate::numerics::{
    bareiss_det, binomial, factorial, incomplete_beta, incomplete_beta_rational, log_abs_gamma,
    log_barnes_g, log_det, log_gamma, ExactValue, Method, Precision, Real, SignedLog, Value,
};

/// Parameters of the Jacobi ensemble with weight x^lambda1 (1-x)^lambda2 on [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JueParams {
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl JueParams {
    pub fn new(n: usize, lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(lambda1 > -1.0 && lambda2 > -1.0) || !lambda1.is_finite() || !lambda2.is_finite() {
            return Err(Error::domain(format!("JUE needs lambda1, lambda2 > -1, got {lambda1}, {lambda2}")));
        }
        Ok(JueParams { n, lambda1, lambda2 })
    }

    pub fn integer(n: usize, lambda1: u32, lambda2: u32) -> Self {
        JueParams { n, lambda1: lambda1 as f64, lambda2: lambda2 as f64 }
    }

    fn integer_exponents(&self) -> Option<(u32, u32)> {
        let is_int = |v: f64| v >= 0.0 && v.fract() == 0.0 && v < u32::MAX as f64;
        (is_int(self.lambda1) && is_int(self.lambda2)).then(|| (self.lambda1 as u32, self.lambda2 as u32))
    }
}

/// Z_n = prod_{j<n} (j+1)! Gamma(l1+1+j) Gamma(l2+1+j) / Gamma(l1+l2+1+n+j).
pub fn jue_log_partition(p: &JueParams, prec: Precision) -> Result<Real> {
    let l1 = prec.from_f64(p.lambda1);
    let l2 = prec.from_f64(p.lambda2);
    let mut acc = prec.real(0);
    for j in 0..p.n as u32 {
        acc += log_gamma(&prec.real(j + 2))?;
        acc += log_gamma(&Float::with_val(prec.bits(), &l1 + (j + 1)))?;
        acc += log_gamma(&Float::with_val(prec.bits(), &l2 + (j + 1)))?;
        let s = Float::with_val(prec.bits(), &l1 + &l2) + (p.n as u32 + j + 1);
        acc -= log_gamma(&s)?;
    }
    Ok(acc)
}

/// The same partition function written with Barnes G-functions.
pub fn jue_log_partition_barnes(p: &JueParams, prec: Precision) -> Result<Real> {
    let n = p.n as u32;
    let l1 = prec.from_f64(p.lambda1);
    let l2 = prec.from_f64(p.lambda2);
    let g = |x: Real| log_barnes_g(&x);
    let b = prec.bits();
    let s = Float::with_val(b, &l1 + &l2);
    Ok(g(prec.real(n + 2))?
        + g(Float::with_val(b, &l1 + (n + 1)))?
        - g(Float::with_val(b, &l1 + 1u32))?
        + g(Float::with_val(b, &l2 + (n + 1)))?
        - g(Float::with_val(b, &l2 + 1u32))?
        + g(Float::with_val(b, &s + (n + 1)))?
        - g(Float::with_val(b, &s + (2 * n + 1)))?)
}

/// Exact Z_n for integer exponents.
pub fn jue_partition_exact(n: usize, lambda1: u32, lambda2: u32) -> Rational {
    let mut acc = Rational::from(1);
    for j in 0..n as u32 {
        let num = factorial(j + 1) * factorial(lambda1 + j) * factorial(lambda2 + j);
        acc *= Rational::from((num, factorial(lambda1 + lambda2 + n as u32 + j)));
    }
    acc
}

fn beta_moment_matrix(p: (u32, u32), n: usize, x: &Rational) -> Result<Vec<Vec<Rational>>> {
    let (l1, l2) = p;
    (0..n)
        .map(|j| (0..n).map(|k| incomplete_beta_rational(x, l1 + (j + k) as u32 + 1, l2 + 1)).collect())
        .collect()
}

/// Exact P(x_max <= x) for integer exponents and rational x.
pub fn jue_cdf_max_exact(n: usize, lambda1: u32, lambda2: u32, x: &Rational) -> Result<Rational> {
    if *x < 0 || *x > 1 {
        return Err(Error::domain("JUE threshold must lie in [0, 1]"));
    }
    if n == 0 || *x == 1 {
        return Ok(Rational::from(1));
    }
    if *x == 0 {
        return Ok(Rational::new());
    }
    let num = bareiss_det(&beta_moment_matrix((lambda1, lambda2), n, x)?);
    let den = bareiss_det(&beta_moment_matrix((lambda1, lambda2), n, &Rational::from(1))?);
    Ok(num / den)
}

fn jue_cdf_max_float(p: &JueParams, x: &Real, prec: Precision) -> Result<Real> {
    let b = prec.bits();
    let l1 = prec.from_f64(p.lambda1);
    let q = prec.from_f64(p.lambda2 + 1.0);
    let one = prec.real(1);
    let entries = |xx: &Real| -> Result<Vec<Vec<Real>>> {
        (0..p.n)
            .map(|j| {
                (0..p.n)
                    .map(|k| incomplete_beta(xx, &Float::with_val(b, &l1 + (j + k + 1) as u32), &q))
                    .collect()
            })
            .collect()
    };
    let num = log_det(&entries(&Float::with_val(b, x))?);
    let den = log_det(&entries(&one)?);
    if num.sign <= 0 || den.sign <= 0 {
        return Err(Error::accuracy("moment determinant lost its sign", "nan"));
    }
    Ok((num.log_abs - den.log_abs).exp())
}

/// P(x_max <= x) for the n-point Jacobi ensemble, as a ratio of incomplete beta
/// Hankel determinants. Exact when the exponents are integers and x is rational;
/// otherwise computed at two precisions and rejected if they disagree.
pub fn jue_cdf_max(p: &JueParams, x: &Value, prec: Precision) -> Result<ExactValue> {
    if let (Some((l1, l2)), Value::Exact(xr)) = (p.integer_exponents(), x) {
        return Ok(ExactValue::exact(jue_cdf_max_exact(p.n, l1, l2, xr)?, Method::JueDeterminant));
    }
    let xr = x.to_real(prec);
    if xr < 0 || xr > 1 {
        return Err(Error::domain("JUE threshold must lie in [0, 1]"));
    }
    if p.n == 0 || xr == 1 {
        return Ok(ExactValue::approx(prec.real(1), Method::JueDeterminant));
    }
    let lo = jue_cdf_max_float(p, &xr, prec)?;
    let hi_prec = Precision::digits(prec.decimal_digits() + prec.decimal_digits() / 2 + 16);
    let hi = jue_cdf_max_float(p, &x.to_real(hi_prec), hi_prec)?;
    let rel = Float::with_val(hi.prec(), &hi - &lo).abs() / Float::with_val(hi.prec(), hi.abs_ref());
    if rel > prec.tolerance() {
        return Err(Error::accuracy(
            format!("determinant cancellation at {} digits", prec.decimal_digits()),
            hi.to_f64(),
        ));
    }
    Ok(ExactValue::approx(Float::with_val(prec.bits(), hi), Method::JueDeterminant))
}

/// P(h_max <= ell + m - 1) in the Meixner ensemble with weight
/// binom(h + n - m, h) q2^h on m particles, which equals P(G_{n,m} <= ell).
/// The full moments are truncated once the tail of every entry is below
/// `tail_tol` times that entry, scaled down by 10^m for the determinant.
pub fn meixner_cdf_max(n: usize, m: usize, ell: u32, q2: &Rational, tail_tol: f64) -> Result<ExactValue> {
    if n < m {
        return meixner_cdf_max(m, n, ell, q2, tail_tol);
    }
    if *q2 <= 0 || *q2 >= 1 {
        return Err(Error::domain("q^2 must lie in (0, 1)"));
    }
    if m == 0 {
        return Ok(ExactValue::exact(Rational::from(1), Method::MeixnerDeterminant));
    }
    let a = (n - m) as u32;
    let kmax = 2 * (m as u32 - 1);
    let eps = tail_tol / 10f64.powi(m as i32);
    let qf = q2.to_f64();
    // smallest H past which the term ratio stays below rho and the tail bound is met
    let mut log_term = 0.0f64;
    let mut log_sum = f64::NEG_INFINITY;
    let mut h_stop = None;
    for h in 0u32..1_000_000 {
        let hf = h as f64;
        let lt = if h == 0 { 0.0 } else { kmax as f64 * hf.ln() } + log_term;
        log_sum = if log_sum.is_finite() { log_sum.max(lt) + (1.0 + (-(log_sum - lt).abs()).exp()).ln() } else { lt };
        log_term += ((hf + 1.0 + a as f64) / (hf + 1.0)).ln() + qf.ln();
        if h > 0 {
            let rho = ((hf + 1.0) / hf).powi(kmax as i32) * (hf + 1.0 + a as f64) / (hf + 1.0) * qf;
            if rho < 1.0 {
                let next = kmax as f64 * (hf + 1.0).ln() + log_term;
                let tail = next - (1.0 - rho).ln();
                if tail - log_sum < eps.ln() && h >= ell + m as u32 {
                    h_stop = Some(h);
                    break;
                }
            }
        }
    }
    let h_stop = h_stop.ok_or_else(|| Error::accuracy("Meixner moment tail does not converge", "nan"))?;
    if h_stop > 200_000 {
        return Err(Error::accuracy(format!("Meixner tail needs {h_stop} terms"), "nan"));
    }
    let cut = ell + m as u32 - 1;
    let mut trunc = vec![Rational::new(); kmax as usize + 1];
    let mut full = vec![Rational::new(); kmax as usize + 1];
    let mut qpow = Rational::from(1);
    for h in 0..=h_stop {
        let w = Rational::from(binomial(h + a, h)) * &qpow;
        let mut hp = Integer::from(1);
        for k in 0..=kmax as usize {
            let t = Rational::from(&w * &hp);
            if h <= cut {
                trunc[k] += &t;
            }
            full[k] += t;
            hp *= h;
        }
        qpow *= q2;
    }
    let hankel = |mom: &[Rational]| -> Vec<Vec<Rational>> {
        (0..m).map(|j| (0..m).map(|k| mom[j + k].clone()).collect()).collect()
    };
    let ratio = bareiss_det(&hankel(&trunc)) / bareiss_det(&hankel(&full));
    let prec = Precision::digits(((-tail_tol.log10()).ceil() as u32 + 20).max(40));
    Ok(ExactValue::approx(prec.real(&ratio), Method::MeixnerDeterminant))
}

/// Exact normalization of the truncated unitary eigenvalue density:
/// N! prod_{k<N} k! Gamma(M-N) / Gamma(M-N+k+1), for M > N.
pub fn tue_partition_exact(big_n: u32, big_m: u32) -> Result<Rational> {
    if big_m <= big_n {
        return Err(Error::domain("truncation needs M > N"));
    }
    let d = big_m - big_n;
    let mut acc = Rational::from(factorial(big_n));
    for k in 0..big_n {
        acc *= Rational::from((factorial(k) * factorial(d - 1), factorial(d + k)));
    }
    Ok(acc)
}

pub fn tue_log_partition(big_n: u32, big_m: u32, prec: Precision) -> Result<Real> {
    if big_m <= big_n {
        return Err(Error::domain("truncation needs M > N"));
    }
    let d = big_m - big_n;
    let lg = |v: u32| log_gamma(&prec.real(v));
    let mut acc = lg(big_n + 1)?;
    for k in 0..big_n {
        acc += lg(k + 1)? + lg(d)? - lg(d + k + 1)?;
    }
    Ok(acc)
}

/// N! Gamma(M-N)^N G(N+1) G(M-N+1) / G(M+1).
pub fn tue_log_partition_barnes(big_n: u32, big_m: u32, prec: Precision) -> Result<Real> {
    if big_m <= big_n {
        return Err(Error::domain("truncation needs M > N"));
    }
    let d = big_m - big_n;
    let g = |v: u32| log_barnes_g(&prec.real(v));
    Ok(log_gamma(&prec.real(big_n + 1))? + log_gamma(&prec.real(d))? * big_n + g(big_n + 1)? + g(d + 1)?
        - g(big_m + 1)?)
}

fn check_box(ell: u32, n: u32, m: u32) -> Result<()> {
    if m > n {
        return Err(Error::domain(format!("need n >= m, got n={n}, m={m}")));
    }
    if m > 12 || ell > 12 {
        return Err(Error::Capacity(format!("partition box {m}x{ell} exceeds the 12x12 cap")));
    }
    Ok(())
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::new(), |acc, c| acc * x + c)
}

/// E |det(T - q)|^(2m) for T the ell x ell truncation of a Haar unitary of size
/// ell + n - m, as an exact rational in q^2.
pub fn tue_char_moment(ell: u32, n: u32, m: u32, q2: &Rational) -> Result<ExactValue> {
    check_box(ell, n, m)?;
    let mut coeffs = vec![Rational::new(); (m * ell) as usize + 1];
    for lam in partitions_in_box(m as usize, ell) {
        let s = schur_at_ones(&lam, m as usize);
        let mut t = Rational::from(Integer::from(&s * &s));
        for j in 1..=m {
            let lj = lam.part(j as usize - 1);
            t *= Rational::from((factorial(lj + n - j), factorial(lj + m - j)));
        }
        coeffs[lam.size() as usize] += t;
    }
    let mut pre = Rational::from(1);
    for j in 1..=m {
        pre *= Rational::from((factorial(ell + j - 1), factorial(ell + n - m + j - 1)));
    }
    Ok(ExactValue::exact(pre * horner(&coeffs, q2), Method::TueMoment))
}

/// Sum over lambda in the m x ell box of s_lambda(1_n) s_lambda(1_m) q^(2|lambda|),
/// the unitary average that the Schur route reduces to.
pub fn cue_average(ell: u32, n: u32, m: u32, q2: &Rational) -> Result<ExactValue> {
    check_box(ell, n, m)?;
    let mut coeffs = vec![Rational::new(); (m * ell) as usize + 1];
    for lam in partitions_in_box(m as usize, ell) {
        let t = schur_at_ones(&lam, n as usize) * schur_at_ones(&lam, m as usize);
        coeffs[lam.size() as usize] += Rational::from(t);
    }
    Ok(ExactValue::exact(horner(&coeffs, q2), Method::CueSchur))
}

/// c_{ell,n,m} = prod_{j=1}^m (ell+n-m+j-1)! (j-1)! / ((n-m+j-1)! (ell+j-1)!).
pub fn lpp_tue_constant(ell: u32, n: u32, m: u32) -> Result<Rational> {
    if m > n {
        return Err(Error::domain("need n >= m"));
    }
    let mut acc = Rational::from(1);
    for j in 1..=m {
        acc *= Rational::from((
            factorial(ell + n - m + j - 1) * factorial(j - 1),
            factorial(n - m + j - 1) * factorial(ell + j - 1),
        ));
    }
    Ok(acc)
}

/// log c_{ell,n,m} through G(l+1) G(m+1) G(l+n+1) G(n-m+1) / (G(l+m+1) G(l+n-m+1) G(n+1)).
pub fn lpp_tue_constant_log_barnes(ell: u32, n: u32, m: u32, prec: Precision) -> Result<Real> {
    if m > n {
        return Err(Error::domain("need n >= m"));
    }
    let g = |v: u32| log_barnes_g(&prec.real(v));
    Ok(g(ell + 1)? + g(m + 1)? + g(ell + n + 1)? + g(n - m + 1)?
        - g(ell + m + 1)?
        - g(ell + n - m + 1)?
        - g(n + 1)?)
}

/// log S_N(alpha, beta) for the Selberg integral, alpha, beta > -1.
pub fn log_selberg(big_n: u32, alpha: &Real, beta: &Real) -> Result<Real> {
    let b = alpha.prec().max(beta.prec());
    if *alpha <= -1 || *beta <= -1 {
        return Err(Error::domain("Selberg integral needs alpha, beta > -1"));
    }
    let mut acc = Float::with_val(b, 0);
    let ab = Float::with_val(b, alpha + beta);
    for j in 0..big_n {
        acc += log_gamma(&Float::with_val(b, alpha + (j + 1)))?;
        acc += log_gamma(&Float::with_val(b, beta + (j + 1)))?;
        acc += log_gamma(&Float::with_val(b, j + 2))?;
        acc -= log_gamma(&Float::with_val(b, &ab + (big_n + j + 1)))?;
    }
    Ok(acc)
}

/// log|M_N(alpha, beta)| with its sign, for the Morris integral, alpha + beta > -1.
/// Gamma factors at negative non-integer arguments contribute their sign.
pub fn log_morris(big_n: u32, alpha: &Real, beta: &Real) -> Result<SignedLog> {
    let b = alpha.prec().max(beta.prec());
    let ab = Float::with_val(b, alpha + beta);
    if ab <= -1 {
        return Err(Error::domain("Morris integral needs alpha + beta > -1"));
    }
    let two_pi = Float::with_val(b, rug::float::Constant::Pi) * 2u32;
    let mut acc = two_pi.ln() * big_n;
    let mut sign = 1i8;
    for j in 0..big_n {
        let (v, s) = log_abs_gamma(&Float::with_val(b, &ab + (j + 1)))?;
        acc += v;
        sign *= s;
        acc += log_gamma(&Float::with_val(b, j + 2))?;
        let (v, s) = log_abs_gamma(&Float::with_val(b, alpha + (j + 1)))?;
        acc -= v;
        sign *= s;
        let (v, s) = log_abs_gamma(&Float::with_val(b, beta + (j + 1)))?;
        acc -= v;
        sign *= s;
    }
    Ok(SignedLog { sign, log_abs: acc })
}

/// Andreief constant check helper: n! det of the complete beta moment matrix.
pub fn jue_partition_by_moments(n: usize, lambda1: u32, lambda2: u32) -> Result<Rational> {
    let det = bareiss_det(&beta_moment_matrix((lambda1, lambda2), n, &Rational::from(1))?);
    Ok(det * factorial(n as u32))
}

/// Outcome of one family of identity checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    /// Largest |log lhs - log rhs|, or 0 for exact checks that held.
    pub max_deviation: f64,
    pub exact: bool,
    pub passed: bool,
}

/// Non-integer rational with denominator in 2..=7 in (lo, lo + width).
fn generic_rational<R: Rng>(rng: &mut R, lo: i64, width: i64) -> Rational {
    loop {
        let den = rng.gen_range(2..=7i64);
        let num = rng.gen_range(1..width * den);
        if num % den != 0 {
            return Rational::from((lo * den + num, den));
        }
    }
}

fn signed_ratio_gap(num: [&SignedLog; 2], den: [&SignedLog; 2]) -> Option<Real> {
    // num[0]/den[0] == num[1]/den[1] compared through logs and signs
    if num[0].sign * den[1].sign != num[1].sign * den[0].sign {
        return None;
    }
    let l = Float::with_val(num[0].log_abs.prec(), &num[0].log_abs - &den[0].log_abs);
    let r = Float::with_val(num[0].log_abs.prec(), &num[1].log_abs - &den[1].log_abs);
    Some((l - r).abs())
}

fn selberg_signed(n: u32, a: &Real, b: &Real) -> Result<SignedLog> {
    Ok(SignedLog { sign: 1, log_abs: log_selberg(n, a, b)? })
}

/// S_m(e2-m, e1+N)/S_m(e2-m, e1) against M_m(e1+e2+N, -e2)/M_m(e1+e2, -e2), as |log gap|.
pub fn morris_selberg_gap(m: u32, big_n: u32, eta1: &Rational, eta2: &Rational, prec: Precision) -> Result<Real> {
    let r = |q: Rational| crate::numerics::rational_to_real(&q, prec);
    let a = r(eta2.clone() - m);
    let s_top = selberg_signed(m, &a, &r(eta1.clone() + big_n))?;
    let s_bot = selberg_signed(m, &a, &r(eta1.clone()))?;
    let e12 = eta1.clone() + eta2;
    let m_top = log_morris(m, &r(e12.clone() + big_n), &r(-eta2.clone()))?;
    let m_bot = log_morris(m, &r(e12), &r(-eta2.clone()))?;
    signed_ratio_gap([&s_top, &m_top], [&s_bot, &m_bot]).ok_or_else(|| Error::accuracy("signs disagree", "nan"))
}

/// S_m(e2-m, e1)/S_m(e2-m, e1+N) against M_N(e1+m, e2)/M_N(e1, e2), as |log gap|.
pub fn t_one_gap(m: u32, big_n: u32, eta1: &Rational, eta2: &Rational, prec: Precision) -> Result<Real> {
    let r = |q: Rational| crate::numerics::rational_to_real(&q, prec);
    let a = r(eta2.clone() - m);
    let s_top = selberg_signed(m, &a, &r(eta1.clone()))?;
    let s_bot = selberg_signed(m, &a, &r(eta1.clone() + big_n))?;
    let m_top = log_morris(big_n, &r(eta1.clone() + m), &r(eta2.clone()))?;
    let m_bot = log_morris(big_n, &r(eta1.clone()), &r(eta2.clone()))?;
    signed_ratio_gap([&s_top, &m_top], [&s_bot, &m_bot]).ok_or_else(|| Error::accuracy("signs disagree", "nan"))
}

/// Summand of the Jacobi-side Schur sum: lambda in the m x N box,
/// (-t)^|l| s_l'(1_N) s_l(1_m) [e2]_l / [-e1-N]_l.
pub fn jacobi_side_summand(lambda: &Partition, m: u32, big_n: u32, eta1: &Rational, eta2: &Rational, t: &Rational) -> Rational {
    let sgn_t = Rational::from(-t.clone()).pow(lambda.size() as u32);
    let s = Rational::from(schur_at_ones(&lambda.transpose(), big_n as usize) * schur_at_ones(lambda, m as usize));
    let den = hyp_coeff_rational(&(-eta1.clone() - big_n), lambda);
    sgn_t * s * hyp_coeff_rational(eta2, lambda) / den
}

/// Summand of the circular-side Schur sum before transposition: mu in the N x m box,
/// (-t)^|mu| s_mu'(1_m) s_mu(1_N) [-e2]_mu / [e1+N]_mu.
pub fn circular_side_summand(mu: &Partition, m: u32, big_n: u32, eta1: &Rational, eta2: &Rational, t: &Rational) -> Rational {
    let sgn_t = Rational::from(-t.clone()).pow(mu.size() as u32);
    let s = Rational::from(schur_at_ones(&mu.transpose(), m as usize) * schur_at_ones(mu, big_n as usize));
    let den = hyp_coeff_rational(&(eta1.clone() + big_n), mu);
    sgn_t * s * hyp_coeff_rational(&-eta2.clone(), mu) / den
}

/// Term-by-term equality of the two Schur sums under mu = lambda', exact in Rational.
/// Returns the number of terms compared, or the first offending partition.
pub fn dual_summands_agree(m: u32, big_n: u32, eta1: &Rational, eta2: &Rational, t: &Rational) -> std::result::Result<usize, Partition> {
    let mut count = 0;
    let mut total_jacobi = Rational::new();
    let mut total_circular = Rational::new();
    for lambda in partitions_in_box(m as usize, big_n) {
        let mu = lambda.transpose();
        let a = jacobi_side_summand(&lambda, m, big_n, eta1, eta2, t);
        let b = circular_side_summand(&mu, m, big_n, eta1, eta2, t);
        if a != b {
            return Err(lambda);
        }
        total_jacobi += a;
        count += 1;
    }
    for mu in partitions_in_box(big_n as usize, m) {
        total_circular += circular_side_summand(&mu, m, big_n, eta1, eta2, t);
    }
    if total_jacobi != total_circular {
        return Err(Partition::empty());
    }
    Ok(count)
}

/// Runs the three Schur-average identity families on random pole-free rational
/// parameters: Morris-Selberg and the t = 1 relation for m, N <= `max_size`, and the
/// transposed summands for boxes up to `max_box`.
pub fn verify_schur_identities(max_size: u32, max_box: u32, seed: u64, prec: Precision) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-10;
    let mut out = Vec::new();
    for (name, gap_fn) in [
        ("morris_selberg", morris_selberg_gap as fn(u32, u32, &Rational, &Rational, Precision) -> Result<Real>),
        ("t_one", t_one_gap),
    ] {
        let mut worst = 0f64;
        let mut cases = 0;
        let mut ok = true;
        for m in 1..=max_size {
            for big_n in 1..=max_size {
                let eta1 = generic_rational(&mut rng, -1, 4);
                let eta2 = generic_rational(&mut rng, m as i64 - 1, 4);
                match gap_fn(m, big_n, &eta1, &eta2, prec) {
                    Ok(g) => worst = worst.max(g.to_f64()),
                    Err(_) => ok = false,
                }
                cases += 1;
            }
        }
        out.push(IdentityCheck { name: name.into(), cases, max_deviation: worst, exact: false, passed: ok && worst < tol });
    }
    let mut cases = 0;
    let mut ok = true;
    for m in 1..=max_box {
        for big_n in 1..=max_box {
            let eta1 = generic_rational(&mut rng, -1, 4);
            let eta2 = generic_rational(&mut rng, m as i64 - 1, 4);
            let t = generic_rational(&mut rng, -2, 4);
            ok &= dual_summands_agree(m, big_n, &eta1, &eta2, &t).is_ok();
            cases += 1;
        }
    }
    out.push(IdentityCheck {
        name: "transposed_summands".into(),
        cases,
        max_deviation: if ok { 0.0 } else { f64::INFINITY },
        exact: true,
        passed: ok,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ln_rational;

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn jue_partition_three_ways() {
        let p = Precision::default();
        for (n, l1, l2) in [(1usize, 0u32, 0u32), (3, 2, 5), (6, 0, 4), (8, 7, 1)] {
            let exact = jue_partition_exact(n, l1, l2);
            let par = JueParams::integer(n, l1, l2);
            let a = jue_log_partition(&par, p).unwrap();
            let b = jue_log_partition_barnes(&par, p).unwrap();
            let e = ln_rational(&exact, p);
            assert!(close(&a, &e, 1e-50) && close(&b, &e, 1e-50), "n={n}");
            assert_eq!(jue_partition_by_moments(n, l1, l2).unwrap(), exact);
        }
    }

    #[test]
    fn jue_partition_noninteger_barnes() {
        let p = Precision::default();
        let par = JueParams::new(5, 0.5, 2.25).unwrap();
        let a = jue_log_partition(&par, p).unwrap();
        let b = jue_log_partition_barnes(&par, p).unwrap();
        assert!(close(&a, &b, 1e-50));
    }

    #[test]
    fn jue_one_particle_is_regularized_beta() {
        // n = 1, exponents (0, 0): uniform on [0, 1]
        let x = Rational::from((2, 7));
        assert_eq!(jue_cdf_max_exact(1, 0, 0, &x).unwrap(), x);
        // n = 1, lambda1 = 1: density 2x, cdf x^2
        assert_eq!(jue_cdf_max_exact(1, 1, 0, &x).unwrap(), Rational::from(&x * &x));
    }

    #[test]
    fn jue_float_route_matches_exact() {
        let p = Precision::default();
        let x = Rational::from((1, 2));
        let exact = jue_cdf_max_exact(4, 2, 3, &x).unwrap();
        let par = JueParams::new(4, 2.0, 3.0).unwrap();
        let fl = jue_cdf_max_float(&par, &p.real(&x), p).unwrap();
        assert!(close(&fl, &p.real(&exact), 1e-45));
        // non-integer exponents go through the float route with the precision check
        let par = JueParams::new(3, 0.5, 1.5).unwrap();
        let v = jue_cdf_max(&par, &Value::Exact(x), p).unwrap();
        assert!(!v.certified_exact);
        let y = v.value.to_f64();
        assert!(y > 0.0 && y < 1.0);
    }

    #[test]
    fn jue_cdf_is_monotone_in_x() {
        let mut last = Rational::new();
        for k in 1..10 {
            let v = jue_cdf_max_exact(3, 1, 2, &Rational::from((k, 10))).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(last < 1);
    }

    #[test]
    fn tue_partition_small_values() {
        assert_eq!(tue_partition_exact(1, 2).unwrap(), Rational::from(1));
        assert_eq!(tue_partition_exact(1, 3).unwrap(), Rational::from((1, 2)));
        let p = Precision::default();
        for (n, m) in [(2u32, 3u32), (4, 9), (7, 8)] {
            let e = ln_rational(&tue_partition_exact(n, m).unwrap(), p);
            assert!(close(&tue_log_partition(n, m, p).unwrap(), &e, 1e-50));
            assert!(close(&tue_log_partition_barnes(n, m, p).unwrap(), &e, 1e-50));
        }
    }

    #[test]
    fn tue_moment_smallest_case() {
        // E|e^{i theta} - q|^2 = 1 + q^2
        let q2 = Rational::from((1, 3));
        let v = tue_char_moment(1, 1, 1, &q2).unwrap();
        assert_eq!(v.value, Value::Exact(Rational::from((4, 3))));
    }

    #[test]
    fn tue_moment_single_truncated_entry() {
        // ell = 1, n - m = 1, m = 1: T is one entry of a 2x2 Haar unitary, |T|^2 ~ U(0,1),
        // E|T - q|^2 = E|T|^2 + q^2 = 1/2 + q^2
        let q2 = Rational::from((1, 5));
        let v = tue_char_moment(1, 2, 1, &q2).unwrap();
        assert_eq!(v.value, Value::Exact(Rational::from((7, 10))));
    }

    #[test]
    fn lpp_constant_barnes_form() {
        let p = Precision::default();
        assert_eq!(lpp_tue_constant(1, 1, 1).unwrap(), Rational::from(1));
        for (l, n, m) in [(2u32, 3u32, 2u32), (5, 5, 5), (4, 9, 3), (0, 3, 1)] {
            let e = ln_rational(&lpp_tue_constant(l, n, m).unwrap(), p);
            assert!(close(&lpp_tue_constant_log_barnes(l, n, m, p).unwrap(), &e, 1e-50));
        }
    }

    #[test]
    fn selberg_one_point() {
        // S_1(a, b) = B(a+1, b+1)
        let p = Precision::default();
        let a = p.from_ratio(1, 3);
        let b = p.from_ratio(5, 2);
        let got = log_selberg(1, &a, &b).unwrap();
        let want = Float::with_val(p.bits(), &a + 1u32).ln_gamma() + Float::with_val(p.bits(), &b + 1u32).ln_gamma()
            - Float::with_val(p.bits(), Float::with_val(p.bits(), &a + &b) + 2u32).ln_gamma();
        assert!(close(&got, &want, 1e-50));
    }

    #[test]
    fn morris_tracks_negative_gamma_sign() {
        // beta = -3/2: Gamma(-1/2) < 0 enters once in the denominator
        let p = Precision::default();
        let m = log_morris(1, &p.from_ratio(5, 2), &p.from_ratio(-3, 2)).unwrap();
        assert_eq!(m.sign, -1);
        let want = (p.pi() * 2u32).ln() + p.real(2).ln_gamma() - p.from_ratio(7, 2).ln_gamma()
            - Float::with_val(p.bits(), p.from_ratio(-1, 2).ln_abs_gamma().0);
        assert!(close(&m.log_abs, &want, 1e-50));
    }

    #[test]
    fn morris_selberg_at_a_fixed_point() {
        let p = Precision::digits(30);
        let g = morris_selberg_gap(3, 4, &Rational::from((1, 3)), &Rational::from((5, 2)), p).unwrap();
        assert!(g < 1e-25);
        let g = t_one_gap(3, 4, &Rational::from((1, 3)), &Rational::from((5, 2)), p).unwrap();
        assert!(g < 1e-25);
    }

    #[test]
    fn t_one_gap_detects_a_wrong_size() {
        // the relation fails if the Selberg side uses N + 1 in place of N
        let p = Precision::digits(30);
        let (e1, e2) = (Rational::from((1, 3)), Rational::from((5, 2)));
        let good = t_one_gap(2, 3, &e1, &e2, p).unwrap();
        let r = |q: Rational| crate::numerics::rational_to_real(&q, p);
        let a = r(e2.clone() - 2u32);
        let lhs = log_selberg(2, &a, &r(e1.clone())).unwrap() - log_selberg(2, &a, &r(e1.clone() + 4u32)).unwrap();
        let rhs = log_morris(3, &r(e1.clone() + 2u32), &r(e2.clone())).unwrap().log_abs
            - log_morris(3, &r(e1.clone()), &r(e2.clone())).unwrap().log_abs;
        assert!(good < 1e-25 && (lhs - rhs).abs() > 1e-3);
    }

    #[test]
    fn transposed_summands_in_small_boxes() {
        let (e1, e2, t) = (Rational::from((2, 7)), Rational::from((9, 5)), Rational::from((-3, 4)));
        assert_eq!(dual_summands_agree(2, 3, &e1, &e2, &t), Ok(10));
        assert_eq!(dual_summands_agree(4, 4, &e1, &Rational::from((23, 7)), &t), Ok(70));
    }

    #[test]
    fn identity_suite_passes() {
        let report = verify_schur_identities(6, 4, 7, Precision::digits(30)).unwrap();
        assert_eq!(report.len(), 3);
        for c in &report {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(report[0].cases, 36);
        assert_eq!(report[2].cases, 16);
    }
}
