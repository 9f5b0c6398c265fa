//! Coefficients of log L_n = C1 n^2 + C2 n + C3 log n + C4 for Hankel determinants
//! whose equilibrium measure has one soft and one hard edge, or two hard edges,
//! and their specialisation to the Jacobi weight restricted to [0, d].

use rug::float::Constant;
use rug::Float;

use super::bits_of;
use crate::equilibrium::{constrained_density, ConstrainedMeasure, MeasureKind};
use crate::error::{Error, Result};
use crate::numerics::{central_derivative, integrate_endpoint, log_barnes_g, zeta_prime_minus_one, Precision, Real};

#[derive(Clone, Debug)]
pub struct HankelCoeffs {
    pub c1: Real,
    pub c2: Real,
    pub c3: Real,
    pub c4: Real,
}

impl HankelCoeffs {
    pub fn sub(&self, o: &HankelCoeffs) -> HankelCoeffs {
        HankelCoeffs {
            c1: self.c1.clone() - &o.c1,
            c2: self.c2.clone() - &o.c2,
            c3: self.c3.clone() - &o.c3,
            c4: self.c4.clone() - &o.c4,
        }
    }
}

type Func<'a> = &'a dyn Fn(&Real) -> Real;

/// Data for the one-soft, one-hard edge theorem: density psi(x) sqrt((x-a)/(b-x)).
pub struct SoftHardInput<'a> {
    pub v: Func<'a>,
    pub w: Func<'a>,
    pub w_prime: Func<'a>,
    pub psi: Func<'a>,
    pub a: Real,
    pub b: Real,
    /// Closed form of x -> PV int W'(y) sqrt((b-y)(y-a)) / (x-y) dy, when known.
    pub inner_pv: Option<Func<'a>>,
}

fn tolerance(p: Precision) -> Real {
    p.pow10(-((p.decimal_digits() / 2 + 2) as i32))
}

/// PV int_a^b g(y) sqrt((b-y)(y-a)) / (x-y) dy for a < x < b, by subtracting g(x)
/// and adding back PV int sqrt((b-y)(y-a))/(x-y) dy = pi (x - (a+b)/2).
pub fn principal_value(g: Func<'_>, a: &Real, b: &Real, x: &Real, tol: &Real) -> Result<Real> {
    if x <= a || x >= b {
        return Err(Error::domain("principal value point must be inside (a, b)"));
    }
    let bits = bits_of(&[a, b, x]);
    let gx = g(x);
    // nodes that land on x would cancel catastrophically; use -g'(x) there
    let mut near = Float::with_val(bits, b - a);
    near >>= bits / 3;
    let mut slope = None;
    let regular = integrate_endpoint(
        |y| {
            let h = Float::with_val(bits, x - y);
            if Float::with_val(bits, h.abs_ref()) < near {
                if slope.is_none() {
                    slope = Some(-central_derivative(|z| Ok(g(z)), x)?);
                }
                return Ok(slope.clone().unwrap());
            }
            Ok((g(y) - &gx) / h)
        },
        a,
        b,
        0.5,
        0.5,
        tol,
    )?;
    let mid = Float::with_val(bits, a + b) / 2u32;
    let pi = Float::with_val(bits, Constant::Pi);
    Ok(regular + gx * pi * (Float::with_val(bits, x - &mid)))
}

pub fn hankel_coeffs_soft_hard(inp: &SoftHardInput<'_>) -> Result<HankelCoeffs> {
    let (a, b) = (&inp.a, &inp.b);
    if a >= b {
        return Err(Error::domain("need a < b"));
    }
    let bits = bits_of(&[a, b]);
    let prec = Precision::of(a);
    let tol = tolerance(prec);
    let f = |v: &Real| Float::with_val(bits, v);
    let pi = Float::with_val(bits, Constant::Pi);
    let ba = f(b) - a;
    let i1 = integrate_endpoint(
        |x| {
            let lin = (f(b) - x) * 4u32 / &ba;
            let dens = 2u32 / (f(&ba) * &pi) + (inp.psi)(x);
            Ok(((inp.v)(x) - lin) * dens)
        },
        a,
        b,
        0.5,
        -0.5,
        &tol,
    )?;
    let c1 = (f(&ba) / 4u32).ln() - Float::with_val(bits, 3) / 2u32 - i1 / 2u32;
    let i2 = integrate_endpoint(|x| Ok((inp.w)(x) * (inp.psi)(x)), a, b, 0.5, -0.5, &tol)?;
    let c2 = (f(&pi) * 2u32).ln() + i2;
    let i4 = integrate_endpoint(
        |x| {
            let pv = match inp.inner_pv {
                Some(cf) => cf(x),
                None => principal_value(inp.w_prime, a, b, x, &tol)?,
            };
            Ok((inp.w)(x) * pv)
        },
        a,
        b,
        -0.5,
        -0.5,
        &tol,
    )?;
    let half = f(&ba) / 2u32 * &pi;
    let c4 = zeta_prime_minus_one(prec) * 2u32
        - (f(&half) * (inp.psi)(b)).ln() / 8u32
        - (f(&half) * (inp.psi)(a)).ln() / 24u32
        + i4 / (f(&pi).square() * 4u32);
    Ok(HankelCoeffs { c1, c2, c3: Float::with_val(bits, -1) / 6u32, c4 })
}

/// Two hard edges, W = 0, extra weight (x - a)^alpha; density psi(x)/sqrt((b-x)(x-a)).
pub fn hankel_coeffs_two_hard(v: Func<'_>, psi: Func<'_>, a: &Real, b: &Real, alpha: &Real) -> Result<HankelCoeffs> {
    if a >= b {
        return Err(Error::domain("need a < b"));
    }
    if *alpha <= -1 {
        return Err(Error::domain("alpha must exceed -1"));
    }
    let bits = bits_of(&[a, b, alpha]);
    let prec = Precision::of(a);
    let tol = tolerance(prec);
    let f = |x: &Real| Float::with_val(bits, x);
    let pi = Float::with_val(bits, Constant::Pi);
    let ln2 = Float::with_val(bits, Constant::Log2);
    let ba = f(b) - a;
    let i1 = integrate_endpoint(|x| Ok(v(x) * (1u32 / f(&pi) + psi(x))), a, b, -0.5, -0.5, &tol)?;
    let c1 = (f(&ba) / 4u32).ln() - i1 / 2u32;
    let iv = integrate_endpoint(|x| Ok(v(x)), a, b, -0.5, -0.5, &tol)?;
    let log2pi = (f(&pi) * 2u32).ln();
    let c2 = f(alpha) * (f(&ba) / 2u32).ln() + &log2pi - f(alpha) * &ln2 - f(alpha) / (f(&pi) * 2u32) * iv
        + f(alpha) / 2u32 * v(a);
    let a2 = f(alpha).square();
    let c3 = f(&a2) / 2u32 - Float::with_val(bits, 1) / 4u32;
    let c4 = zeta_prime_minus_one(prec) * 3u32 + f(&ln2) / 12u32
        - (f(&pi) * psi(b)).ln() / 8u32
        - (1u32 - f(&a2) * 4u32) / 8u32 * (f(&pi) * psi(a)).ln()
        + f(alpha) / 2u32 * &log2pi
        - f(&a2) / 2u32 * &ln2
        - log_barnes_g(&(f(alpha) + 1u32))?;
    Ok(HankelCoeffs { c1, c2, c3, c4 })
}

fn pushed(alpha: &Real, beta: &Real, d: &Real, want: MeasureKind) -> Result<ConstrainedMeasure> {
    let mu = constrained_density(alpha, beta, d)?;
    if mu.kind != want {
        return Err(Error::regime("the wall at d does not push the equilibrium measure"));
    }
    Ok(mu)
}

/// Hankel coefficients, by quadrature, for the weight x^alpha (1-x)^(beta n) on [0, d]
/// with d below the soft edge: two hard edges at 0 and d.
pub fn constrained_hankel_square(alpha: &Real, beta: &Real, d: &Real) -> Result<HankelCoeffs> {
    let bits = bits_of(&[alpha, beta, d]);
    let zero = Float::with_val(bits, 0);
    let mu = pushed(&zero, beta, d, MeasureKind::PushedHard)?;
    let v = |x: &Real| -(Float::with_val(bits, beta) * Float::with_val(bits, 1u32 - x).ln());
    let psi = |x: &Real| mu.psi(x);
    hankel_coeffs_two_hard(&v, &psi, &zero, d, alpha)
}

/// Hankel coefficients, by quadrature, for x^(alpha n + t) (1-x)^(beta n) on [0, d]
/// with d below the soft edge: soft edge at the root m, hard edge at d.
/// `closed_pv` uses the closed form of the inner principal value for W = t log x.
pub fn constrained_hankel_rect(alpha: &Real, beta: &Real, t: &Real, d: &Real, closed_pv: bool) -> Result<HankelCoeffs> {
    if *alpha <= 0 {
        return Err(Error::domain("alpha must be positive"));
    }
    let bits = bits_of(&[alpha, beta, t, d]);
    let mu = pushed(alpha, beta, d, MeasureKind::PushedSoft)?;
    let m = mu.left.clone();
    let f = |x: &Real| Float::with_val(bits, x);
    let v = |x: &Real| -(f(alpha) * f(x).ln()) - f(beta) * (1u32 - f(x)).ln();
    let w = |x: &Real| f(t) * f(x).ln();
    let wp = |x: &Real| f(t) / x;
    let psi = |x: &Real| mu.psi(x);
    let sab = (f(&m) * d).sqrt();
    let pi = Float::with_val(bits, Constant::Pi);
    let pv = |x: &Real| f(&pi) * t * (1u32 - f(&sab) / x);
    let inp = SoftHardInput {
        v: &v,
        w: &w,
        w_prime: &wp,
        psi: &psi,
        a: m.clone(),
        b: d.clone(),
        inner_pv: if closed_pv { Some(&pv) } else { None },
    };
    hankel_coeffs_soft_hard(&inp)
}

/// Closed forms of the square-lattice constrained coefficients (two hard edges).
pub fn constrained_coeffs_square(alpha: &Real, beta: &Real, d: &Real) -> Result<HankelCoeffs> {
    let bits = bits_of(&[alpha, beta, d]);
    let mu = pushed(&Float::with_val(bits, 0), beta, d, MeasureKind::PushedHard)?;
    let f = |x: &Real| Float::with_val(bits, x);
    let pi = Float::with_val(bits, Constant::Pi);
    let ln2 = Float::with_val(bits, Constant::Log2);
    let prec = Precision::of(&f(d));
    let sd = (1u32 - f(d)).sqrt();
    let l_half = (2u32 / (f(&sd) + 1u32)).ln();
    let l_ratio = (f(&sd).square() * 4u32 / d * (1u32 - f(&sd)) / (f(&sd) + 1u32)).ln();
    // int V (1/pi + psi) / sqrt(x (d-x)) and int log(1-x) / sqrt(x (d-x))
    let i13 = f(beta) * ((f(beta) + 4u32) * &l_half + f(beta) / 2u32 * &l_ratio);
    let i11 = -(f(&pi) * 2u32 * &l_half);
    let c1 = (f(d) / 4u32).ln() - i13 / 2u32;
    let log2pi = (f(&pi) * 2u32).ln();
    let c2 = f(alpha) * (f(d) / 2u32).ln() + &log2pi - f(alpha) * &ln2 + f(alpha) * beta / (f(&pi) * 2u32) * i11;
    let a2 = f(alpha).square();
    let c3 = f(&a2) / 2u32 - Float::with_val(bits, 1) / 4u32;
    let psi_d = mu.psi(d);
    let psi_0 = mu.psi(&Float::with_val(bits, 0));
    let c4 = zeta_prime_minus_one(prec) * 3u32 + f(&ln2) / 12u32
        - (f(&pi) * psi_d).ln() / 8u32
        - (1u32 - f(&a2) * 4u32) / 8u32 * (f(&pi) * psi_0).ln()
        + f(alpha) / 2u32 * &log2pi
        - f(&a2) / 2u32 * &ln2
        - log_barnes_g(&(f(alpha) + 1u32))?;
    Ok(HankelCoeffs { c1, c2, c3, c4 })
}

/// Closed forms of the rectangular constrained coefficients (soft edge at m, hard edge at d).
pub fn constrained_coeffs_rect(alpha: &Real, beta: &Real, t: &Real, d: &Real) -> Result<HankelCoeffs> {
    let bits = bits_of(&[alpha, beta, t, d]);
    let mu = pushed(alpha, beta, d, MeasureKind::PushedSoft)?;
    let m = mu.left.clone();
    let f = |x: &Real| Float::with_val(bits, x);
    let pi = Float::with_val(bits, Constant::Pi);
    let prec = Precision::of(&f(d));
    let (sm, sd) = (f(&m).sqrt(), f(d).sqrt());
    let (sm1, sd1) = ((1u32 - f(&m)).sqrt(), (1u32 - f(d)).sqrt());
    let cross = f(&sm) * &sd1 + f(&sd) * &sm1;
    let l_plus = ((f(&sm) + &sd) / 2u32).ln();
    let l_minus = ((f(&sm1) + &sd1) / 2u32).ln();
    let s = f(alpha) + beta + 2u32;
    let c1 = ((f(d) - &m) / 4u32).ln() - f(alpha) * beta * (f(&cross) / 2u32).ln()
        - f(alpha).square() / 4u32 * (f(&m) * d).ln()
        - f(beta).square() / 4u32 * ((1u32 - f(&m)) * (1u32 - f(d))).ln()
        + s * (f(alpha) * &l_plus + f(beta) * &l_minus);
    let c2 = (f(&pi) * 2u32).ln()
        + f(t) * (f(alpha) * &sd / &sm + f(beta) * &sd1 / &sm1) * &l_plus
        + f(t) * alpha * (1u32 / (f(&sm) * 2u32) + 1u32 / (f(&sd) * 2u32)).ln()
        - f(t) * beta * (f(&cross) / (f(&sm1) + &sd1)).ln();
    let half = (f(d) - &m) / 2u32 * &pi;
    let c4 = zeta_prime_minus_one(prec) * 2u32
        - (f(&half) * mu.psi(d)).ln() / 8u32
        - (f(&half) * mu.psi(&m)).ln() / 24u32
        + f(t).square() * ((f(&sm) + &sd) / (f(&m) * d).sqrt().sqrt() / 2u32).ln();
    Ok(HankelCoeffs { c1, c2, c3: Float::with_val(bits, -1) / 6u32, c4 })
}

/// Coefficients of log(Z_n(alpha, beta n)/n!) for fixed alpha.
pub fn partition_coeffs_square(alpha: &Real, beta: &Real) -> Result<HankelCoeffs> {
    if *alpha <= -1 || *beta <= 0 {
        return Err(Error::domain("need alpha > -1 and beta > 0"));
    }
    let bits = bits_of(&[alpha, beta]);
    let f = |x: &Real| Float::with_val(bits, x);
    let pi = Float::with_val(bits, Constant::Pi);
    let prec = Precision::of(&f(beta));
    let b1 = f(beta) + 1u32;
    let b2 = f(beta) + 2u32;
    let c1 = f(&b1).square() * f(&b1).ln() - f(beta).square() / 2u32 * f(beta).ln() - f(&b2).square() / 2u32 * f(&b2).ln();
    let log2pi = (f(&pi) * 2u32).ln();
    let c2 = f(&log2pi) + f(alpha) * (f(&b1) * f(&b1).ln() - f(&b2) * f(&b2).ln());
    let a2 = f(alpha).square();
    let c3 = (f(&a2) * 3u32 - 1u32) / 6u32;
    let x = f(beta) * 2u32 + 3u32;
    let arccoth = ((f(&x) + 1u32) / (f(&x) - 1u32)).ln() / 2u32;
    let c4 = zeta_prime_minus_one(prec) * 2u32 - f(&a2) * arccoth + f(alpha) / 2u32 * &log2pi
        + (f(beta) * &b2 / f(&b1).square()).ln() / 12u32
        - log_barnes_g(&(f(alpha) + 1u32))?;
    Ok(HankelCoeffs { c1, c2, c3, c4 })
}

/// Coefficients of log(Z_n(alpha n + t, beta n)/n!) for alpha > 0.
pub fn partition_coeffs_rect(alpha: &Real, beta: &Real, t: &Real) -> Result<HankelCoeffs> {
    if *alpha <= 0 || *beta <= 0 {
        return Err(Error::domain("need alpha > 0 and beta > 0"));
    }
    let bits = bits_of(&[alpha, beta, t]);
    let f = |x: &Real| Float::with_val(bits, x);
    let pi = Float::with_val(bits, Constant::Pi);
    let prec = Precision::of(&f(beta));
    let xl = |x: Real| Float::with_val(bits, x.ln_ref()) * &x;
    let x2l = |x: Real| Float::with_val(bits, x.square_ref()) * x.ln() / 2u32;
    let a1 = f(alpha) + 1u32;
    let b1 = f(beta) + 1u32;
    let ab1 = f(alpha) + beta + 1u32;
    let ab2 = f(&ab1) + 1u32;
    let c1 = x2l(f(&a1)) + x2l(f(&b1)) + x2l(f(&ab1)) - x2l(f(alpha)) - x2l(f(beta)) - x2l(f(&ab2));
    let c2 = (f(&pi) * 2u32).ln()
        + f(t)
            * (xl(f(&a1)) + xl(f(&ab1)) - (f(beta) + 2u32) * f(&ab2).ln() - f(alpha) * (f(alpha) * &ab2).ln());
    let c4 = zeta_prime_minus_one(prec)
        + (f(alpha) * beta * &ab2 / (f(&a1) * &b1 * &ab1)).ln() / 12u32
        + f(t).square() / 2u32 * (f(&a1) * &ab1 / (f(alpha) * &ab2)).ln();
    Ok(HankelCoeffs { c1, c2, c3: Float::with_val(bits, -1) / 12u32, c4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{lower_tail_rect, lower_tail_square};
    use crate::ensembles::jue_log_partition_barnes;
    use crate::ensembles::JueParams;
    use crate::numerics::log_gamma;

    fn p() -> Precision {
        Precision::digits(30)
    }

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        (a.clone() - b).abs() < tol
    }

    fn assert_coeffs(a: &HankelCoeffs, b: &HankelCoeffs, tol: f64) {
        for (x, y) in [(&a.c1, &b.c1), (&a.c2, &b.c2), (&a.c3, &b.c3), (&a.c4, &b.c4)] {
            assert!(close(x, y, tol), "{} vs {}", x.to_f64(), y.to_f64());
        }
    }

    #[test]
    fn pv_of_constant_and_log() {
        let (a, b) = (p().from_ratio(1, 4), p().real(1));
        let x = p().from_ratio(1, 2);
        let tol = p().pow10(-20);
        let one = |_: &Real| p().real(1);
        let want = p().pi() * (x.clone() - p().from_ratio(5, 8));
        assert!(close(&principal_value(&one, &a, &b, &x, &tol).unwrap(), &want, 1e-18));
        let inv = |y: &Real| Float::with_val(y.prec(), 1u32 / y);
        let want = p().pi() * (1u32 - Float::with_val(p().bits(), 0.5) / &x);
        assert!(close(&principal_value(&inv, &a, &b, &x, &tol).unwrap(), &want, 1e-18));
    }

    #[test]
    fn soft_hard_c3_is_fixed() {
        let c = constrained_hankel_rect(&p().real(1), &p().real(1), &p().real(0), &p().from_ratio(1, 2), true).unwrap();
        assert_eq!(c.c3, Float::with_val(p().bits(), -1) / 6u32);
        let c = constrained_hankel_square(&p().real(0), &p().real(2), &p().from_ratio(3, 5)).unwrap();
        assert_eq!(c.c3, Float::with_val(p().bits(), -1) / 4u32);
    }

    #[test]
    fn square_quadrature_matches_closed_forms() {
        for (a, b, d) in [(0, 2, (3, 5)), (1, 1, (1, 2)), (2, 3, (1, 3))] {
            let (al, be, dd) = (p().real(a), p().real(b), p().from_ratio(d.0, d.1));
            let q = constrained_hankel_square(&al, &be, &dd).unwrap();
            let c = constrained_coeffs_square(&al, &be, &dd).unwrap();
            assert_coeffs(&q, &c, 1e-14);
        }
    }

    #[test]
    fn rect_quadrature_matches_closed_forms() {
        let (al, be, t, d) = (p().real(1), p().real(1), p().from_ratio(1, 2), p().from_ratio(1, 2));
        let c = constrained_coeffs_rect(&al, &be, &t, &d).unwrap();
        let q = constrained_hankel_rect(&al, &be, &t, &d, true).unwrap();
        assert_coeffs(&q, &c, 1e-12);
        let g = constrained_hankel_rect(&al, &be, &t, &d, false).unwrap();
        assert_coeffs(&g, &c, 1e-10);
    }

    #[test]
    fn square_reconstruction_gives_lower_tail() {
        // q^2 = 0.4, delta = 2, n = 0 and q^2 = 1/2, delta = 1, n = 1
        for (q2, delta, n) in [((2, 5), 2, 0), ((1, 2), 1, 1)] {
            let d = 1u32 - p().from_ratio(q2.0, q2.1);
            let (al, be) = (p().real(n), p().real(delta));
            let diff = constrained_hankel_square(&al, &be, &d).unwrap().sub(&partition_coeffs_square(&al, &be).unwrap());
            let lt = lower_tail_square(&(1u32 - d.clone()).sqrt(), &be, &al).unwrap();
            assert!(close(&diff.c1, &lt.c2, 1e-12));
            assert!(close(&diff.c2, &lt.c1, 1e-12));
            assert!(close(&diff.c3, &lt.clog, 1e-25));
            assert!(close(&diff.c4, &lt.c0, 1e-12));
        }
    }

    #[test]
    fn rect_reconstruction_gives_lower_tail() {
        let (gamma, delta, t) = (p().real(2), p().real(1), p().from_ratio(1, 2));
        let d = p().from_ratio(1, 2);
        let al = gamma.clone() - 1u32;
        let diff = constrained_hankel_rect(&al, &delta, &t, &d, true)
            .unwrap()
            .sub(&partition_coeffs_rect(&al, &delta, &t).unwrap());
        let lt = lower_tail_rect(&(1u32 - d.clone()).sqrt(), &gamma, &delta, &t).unwrap();
        assert!(close(&diff.c1, &lt.c2, 1e-12));
        assert!(close(&diff.c2, &lt.c1, 1e-12));
        assert!(close(&diff.c3, &lt.clog, 1e-25));
        assert!(close(&diff.c4, &lt.c0, 1e-12));
    }

    // the partition expansions against log Z_n/n! from the Selberg product at large n
    #[test]
    fn partition_expansions_track_selberg() {
        let check = |c: &HankelCoeffs, l1: f64, l2: f64, ns: [usize; 3]| {
            let r: Vec<f64> = ns
                .iter()
                .map(|&n| {
                    let nn = p().real(n as u32);
                    let jp = JueParams::new(n, l1 * n as f64 + l2, n as f64).unwrap();
                    let exact = jue_log_partition_barnes(&jp, p()).unwrap() - log_gamma(&(nn.clone() + 1u32)).unwrap();
                    let e = c.c1.clone() * &nn * &nn + c.c2.clone() * &nn + c.c3.clone() * nn.clone().ln() + &c.c4;
                    (exact - e).to_f64().abs()
                })
                .collect();
            assert!(r[0] > r[1] && r[1] > r[2] && r[2] < 2e-2, "{r:?}");
        };
        check(&partition_coeffs_square(&p().real(2), &p().real(1)).unwrap(), 0.0, 2.0, [20, 40, 80]);
        check(&partition_coeffs_rect(&p().real(1), &p().real(1), &p().from_ratio(1, 2)).unwrap(), 1.0, 0.5, [20, 40, 80]);
    }
}
