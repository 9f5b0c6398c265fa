use rug::float::Constant;
use rug::Float;

use super::{bits_of, check_q, Expansion, Regime, cmp_boundary};
use crate::error::{Error, Result};
use crate::lpp::omega;
use crate::numerics::{central_derivative, Real};

/// sqrt(a) taken with the sign of sqrt(gamma (gamma+delta)) - sqrt(delta+1), and sqrt(b).
/// The signed root continues Phi analytically through gamma = 1.
fn signed_root_edges(gamma: &Real, delta: &Real) -> (Real, Real) {
    let bits = bits_of(&[gamma, delta]);
    let f = |v: &Real| Float::with_val(bits, v);
    let s = (f(gamma) * (f(gamma) + delta)).sqrt();
    let t = (f(delta) + 1u32).sqrt();
    let den = f(gamma) + delta + 1u32;
    ((f(&s) - &t) / &den, (s + t) / den)
}

fn phi_signed(gamma: &Real, delta: &Real, x: &Real) -> Result<Real> {
    let bits = bits_of(&[gamma, delta, x]);
    let f = |v: &Real| Float::with_val(bits, v);
    let (sa, sb) = signed_root_edges(gamma, delta);
    let a = f(&sa).square();
    let b = f(&sb).square();
    if *x < b || *x >= 1 {
        return Err(Error::domain(format!("Phi needs b <= x < 1 (b = {}, x = {})", b.to_f64(), x.to_f64())));
    }
    let s = ((f(x) - &b) * (f(x) - &a)).sqrt();
    let t1 = -((f(x) * 2u32 - &a - &b + f(&s) * 2u32) / (f(&b) - &a)).ln();
    let t2 = (f(gamma) - 1u32) * ((f(&sa) * &sb + x - &s) / ((f(&sa) + &sb) * f(x).sqrt())).ln();
    let oa = 1u32 - f(&a);
    let ob = 1u32 - f(&b);
    let ox = 1u32 - f(x);
    let t3 = f(delta)
        * (((f(&oa) * &ob).sqrt() + &ox + &s) / ((f(&oa).sqrt() + f(&ob).sqrt()) * f(&ox).sqrt())).ln();
    Ok(t1 + t2 + t3)
}

/// Phi_{gamma,delta}(x) for b <= x < 1.
pub fn phi_value(gamma: &Real, delta: &Real, x: &Real) -> Result<Real> {
    if *gamma < 1 || *delta <= 0 {
        return Err(Error::domain("Phi needs gamma >= 1 and delta > 0"));
    }
    phi_signed(gamma, delta, x)
}

/// Phi together with its x-derivative and total gamma-derivative.
#[derive(Clone, Debug)]
pub struct RateFunctionPoint {
    pub x: Real,
    pub value: Real,
    /// None when the difference stencil would leave [b, 1).
    pub derivative_x: Option<Real>,
    pub derivative_gamma_total: Option<Real>,
}

pub fn phi(gamma: &Real, delta: &Real, x: &Real) -> Result<RateFunctionPoint> {
    let value = phi_value(gamma, delta, x)?;
    let derivative_x = central_derivative(|y| phi_signed(gamma, delta, y), x).ok();
    let derivative_gamma_total = central_derivative(|g| phi_signed(g, delta, x), gamma).ok();
    Ok(RateFunctionPoint { x: x.clone(), value, derivative_x, derivative_gamma_total })
}

/// Coefficients of log P(G_{gamma N + n, N} >= delta N).
#[derive(Clone, Debug)]
pub struct UpperTail {
    /// (0, U1, -1, U3) with U3 as stated for the upper-tail theorem.
    pub expansion: Expansion,
    /// U3 + 2 dPhi/ddelta: the constant that matches thresholds G >= delta N
    /// when delta N is the integer passed to the exact computation.
    pub c0_at_least: Real,
    pub phi: Real,
    pub dphi_dx: Real,
    pub dphi_dgamma: Real,
    pub dphi_ddelta: Real,
    /// (1 - q^2 - a)(1 - q^2 - b); positive throughout the upper regime.
    pub edge_product: Real,
}

pub fn upper_tail(q: &Real, gamma: &Real, delta: &Real, nshift: &Real) -> Result<UpperTail> {
    check_q(q)?;
    if *gamma < 1 {
        return Err(Error::domain("gamma must be at least 1"));
    }
    let bits = bits_of(&[q, gamma, delta, nshift]);
    let f = |v: &Real| Float::with_val(bits, v);
    let om = omega(gamma, q);
    if cmp_boundary(delta, &om) != std::cmp::Ordering::Greater {
        return Err(Error::regime(format!(
            "delta = {} is not above omega(gamma,q) = {}: not an upper-tail deviation",
            delta.to_f64(),
            om.to_f64()
        )));
    }
    let x = 1u32 - f(q).square();
    let (sa, sb) = signed_root_edges(gamma, delta);
    let a = f(&sa).square();
    let b = f(&sb).square();
    let edge_product = (f(&x) - &a) * (f(&x) - &b);
    if edge_product <= 0 {
        return Err(Error::regime("(1-q^2-a)(1-q^2-b) is not positive"));
    }
    let pt = phi(gamma, delta, &x)?;
    let dphi_dx = pt.derivative_x.ok_or_else(|| Error::accuracy("Phi' stencil left the domain", f64::NAN))?;
    let dphi_dgamma =
        pt.derivative_gamma_total.ok_or_else(|| Error::accuracy("dPhi/dgamma stencil left the domain", f64::NAN))?;
    let dphi_ddelta = central_derivative(|d| phi_signed(gamma, d, &x), delta)?;
    let pi = Float::with_val(bits, Constant::Pi);
    let u3 = ((f(&b) - &a) / (pi * 8u32) / &edge_product / (f(&dphi_dx) * 2u32)).ln()
        - f(&dphi_dgamma) * nshift * 2u32;
    let c0_at_least = f(&u3) + f(&dphi_ddelta) * 2u32;
    Ok(UpperTail {
        expansion: Expansion {
            c2: Float::with_val(bits, 0),
            c1: f(&pt.value) * -2i32,
            clog: Float::with_val(bits, -1),
            c0: u3,
            regime: Regime::Upper,
            remainder_note: "o(1)",
        },
        c0_at_least,
        phi: pt.value,
        dphi_dx,
        dphi_dgamma,
        dphi_ddelta,
        edge_product,
    })
}

/// Closed form of the integral from 1 to x of (x - y) / (sqrt(y^2 - 1)(y + B)), for x >= 1 and B > 1.
pub fn johansson_i(x: &Real, b: &Real) -> Result<Real> {
    if *x < 1 || *b <= 1 {
        return Err(Error::domain("need x >= 1 and B > 1"));
    }
    let bits = bits_of(&[x, b]);
    let f = |v: &Real| Float::with_val(bits, v);
    let rb = (f(b).square() - 1u32).sqrt();
    let rx = (f(x).square() - 1u32).sqrt();
    let first = (f(b) + x) / &rb * ((f(b) * x + 1u32 + f(&rb) * &rx) / (f(b) + x)).ln();
    let second = ((f(x) - &rx) / (f(x) + &rx)).ln() / 2u32;
    Ok(first + second)
}

/// Upper-tail rate J(t) in the variational-free form, valid for t >= (1 + q sqrt(gamma))^2 / (1 - q^2).
pub fn johansson_j(t: &Real, gamma: &Real, q: &Real) -> Result<Real> {
    check_q(q)?;
    if *gamma < 1 {
        return Err(Error::domain("gamma must be at least 1"));
    }
    let bits = bits_of(&[t, gamma, q]);
    let f = |v: &Real| Float::with_val(bits, v);
    let sg = f(gamma).sqrt();
    let q2 = f(q).square();
    let one_q2 = 1u32 - f(&q2);
    let qs = f(q) * &sg;
    let lo = (1u32 - f(&qs)).square() / &one_q2;
    let hi = (f(&qs) + 1u32).square() / &one_q2;
    let x = (f(t) - &lo) * 2u32 / (f(&hi) - &lo) - 1u32;
    if x < 1 {
        return Err(Error::domain("t lies below the upper edge"));
    }
    let bb = (f(gamma) + &q2) / (f(&qs) * 2u32);
    let dd = (f(&q2) * gamma + 1u32) / (f(&qs) * 2u32);
    let ib = johansson_i(&x, &bb)?;
    let id = johansson_i(&x, &dd)?;
    Ok((f(&hi) - &lo) / (f(&qs) * 8u32) * ((f(gamma) - &q2) * ib + (1u32 - f(&q2) * gamma) * id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::edges;
    use crate::numerics::{integrate_endpoint, Precision};
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::digits(40)
    }

    #[test]
    fn phi_vanishes_at_edge() {
        for (g, d) in [(1, 1), (1, 6), (2, 1), (3, 2), (7, 5)] {
            let (g, d) = (p().real(g), p().real(d));
            let b = edges(&g, &d).unwrap().b;
            assert!(phi_value(&g, &d, &b).unwrap().abs() < p().pow10(-35));
        }
    }

    #[test]
    fn phi_rejects_inside_support() {
        let b = edges(&p().real(1), &p().real(6)).unwrap().b;
        let x = b - p().pow10(-3);
        assert!(matches!(phi_value(&p().real(1), &p().real(6), &x), Err(Error::Domain(_))));
    }

    // hand-differentiated Phi'(x)
    fn phi_prime_analytic(g: &Real, d: &Real, x: &Real) -> Real {
        let e = edges(g, d).unwrap();
        let (a, b) = (e.a, e.b);
        let s = ((x.clone() - &b) * (x.clone() - &a)).sqrt();
        let ds = (x.clone() * 2u32 - &a - &b) / (s.clone() * 2u32);
        let t1 = -(1u32 / s.clone());
        let t2 = (g.clone() - 1u32)
            * ((1u32 - ds.clone()) / ((a.clone() * &b).sqrt() + x - &s) - 1u32 / (x.clone() * 2u32));
        let r = ((1u32 - a.clone()) * (1u32 - b.clone())).sqrt();
        let t3 = d.clone() * ((ds - 1u32) / (r + 1u32 - x + &s) + 1u32 / ((1u32 - x.clone()) * 2u32));
        t1 + t2 + t3
    }

    #[test]
    fn derivative_matches_hand_derivative() {
        for (g, d, x) in [(1.0, 6.0, 0.5), (2.0, 3.0, 0.9), (1.5, 4.0, 0.7)] {
            let (g, d, x) = (p().from_f64(g), p().from_f64(d), p().from_f64(x));
            let pt = phi(&g, &d, &x).unwrap();
            let want = phi_prime_analytic(&g, &d, &x);
            assert!((pt.derivative_x.unwrap() - want).abs() < p().pow10(-18));
        }
    }

    #[test]
    fn gamma_derivative_smooth_through_one() {
        // one-sided difference quotients from gamma = 1 agree with the central one
        let (d, x) = (p().real(6), p().from_ratio(1, 2));
        let c = phi(&p().real(1), &d, &x).unwrap().derivative_gamma_total.unwrap();
        let h = p().pow10(-8);
        let up = (phi_value(&(p().real(1) + &h), &d, &x).unwrap() - phi_value(&p().real(1), &d, &x).unwrap()) / &h;
        assert!((c - up).abs() < p().pow10(-6));
    }

    #[test]
    fn upper_reference_values() {
        let q = p().from_ratio(1, 2).sqrt();
        let u = upper_tail(&q, &p().real(1), &p().real(6), &p().real(0)).unwrap();
        let chk = |x: &Real, want: &str| {
            let w = Float::with_val(x.prec(), Float::parse(want).unwrap());
            assert!((x.clone() - w).abs() < p().pow10(-18), "{x} vs {want}");
        };
        chk(&u.expansion.c1, "-0.2305118303101755043");
        chk(&u.expansion.c0, "-2.3179820493138407614");
        chk(&u.dphi_ddelta, "0.14237564316780439677");
        assert_eq!(u.expansion.clog, -1);
        assert!(u.edge_product > 0);
    }

    #[test]
    fn upper_regime_checks() {
        let q = p().from_ratio(1, 3);
        // omega(1, 1/3) = 1
        assert!(matches!(upper_tail(&q, &p().real(1), &p().real(1), &p().real(0)), Err(Error::Regime(_))));
        let u = upper_tail(&q, &p().real(1), &(p().real(1) + p().pow10(-3)), &p().real(0)).unwrap();
        assert!(u.expansion.c1.abs() < 1e-2);
    }

    #[test]
    fn johansson_i_by_quadrature() {
        // substitute y = cosh u: integral of (x - cosh u)/(cosh u + B) du on [0, acosh x]
        for (x, b) in [(2.0, 3.0), (1.3, 1.1), (5.0, 2.5)] {
            let (x, b) = (p().from_f64(x), p().from_f64(b));
            let top = x.clone().acosh();
            let q = integrate_endpoint(
                |u| Ok((x.clone() - u.clone().cosh()) / (u.clone().cosh() + &b)),
                &p().real(0),
                &top,
                0.0,
                0.0,
                &p().pow10(-25),
            )
            .unwrap();
            assert!((q - johansson_i(&x, &b).unwrap()).abs() < p().pow10(-20));
        }
    }

    #[test]
    fn johansson_j_vanishes_at_edge() {
        let (g, q) = (p().from_f64(1.5), p().from_f64(0.5));
        let top = (q.clone() * g.clone().sqrt() + 1u32).square() / (1u32 - q.clone().square());
        assert!(johansson_j(&top, &g, &q).unwrap().abs() < p().pow10(-30));
    }

    #[test]
    fn johansson_matches_phi_at_reference_point() {
        let (g, q, t) = (p().from_f64(1.5), p().from_f64(0.5), p().real(6));
        let j = johansson_j(&t, &g, &q).unwrap();
        let x = Float::with_val(p().bits(), 1u32 - q.clone().square());
        let ph = phi_value(&g, &(t - 1u32), &x).unwrap();
        assert!(((j - &ph) / ph).abs() < p().pow10(-25));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn johansson_equals_phi(g in 1.0f64..4.0, q in 0.1f64..0.9, extra in 0.05f64..6.0) {
            let (g, q) = (p().from_f64(g), p().from_f64(q));
            let om = omega(&g, &q);
            let t = om + p().from_f64(extra) + 1u32;
            let j = johansson_j(&t, &g, &q).unwrap();
            let x = Float::with_val(p().bits(), 1u32 - q.clone().square());
            let ph = phi_value(&g, &(t - 1u32), &x).unwrap();
            prop_assert!(((j - &ph) / ph).abs() < 1e-25);
        }

        #[test]
        fn phi_increasing(g in 1.0f64..4.0, d in 0.2f64..6.0, frac in 0.0f64..0.95) {
            let (g, d) = (p().from_f64(g), p().from_f64(d));
            let b = edges(&g, &d).unwrap().b;
            let x = b.clone() + (1u32 - b.clone()) * frac;
            let x2 = x.clone() + p().pow10(-3);
            prop_assume!(x2 < 1);
            prop_assert!(phi_value(&g, &d, &x2).unwrap() > phi_value(&g, &d, &x).unwrap());
        }
    }
}
