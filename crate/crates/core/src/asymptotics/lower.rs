use rug::Float;

use std::cmp::Ordering;

use super::{bits_of, check_q, cmp_boundary, Expansion, Regime};
use crate::equilibrium::{edges, solve_mfrak};
use crate::error::{Error, Result};
use crate::lpp::omega;
use crate::numerics::{zeta_prime_minus_one, Precision, Real};

fn check_square(q: &Real, delta: &Real, closed: bool) -> Result<u32> {
    check_q(q)?;
    if *delta <= 0 {
        return Err(Error::domain("delta must be positive"));
    }
    let bits = bits_of(&[q, delta]);
    let om = omega(&Float::with_val(bits, 1), q);
    let ord = cmp_boundary(delta, &om);
    if ord == Ordering::Greater || (!closed && ord == Ordering::Equal) {
        return Err(Error::regime(format!(
            "delta = {} is not below omega(1,q) = {}: not a lower-tail deviation",
            delta.to_f64(),
            om.to_f64()
        )));
    }
    Ok(bits)
}

fn square_l1(q: &Real, delta: &Real, bits: u32) -> Real {
    let f = |v: &Real| Float::with_val(bits, v);
    let d = f(delta);
    let d1 = f(&d) + 1u32;
    let d2 = f(&d) + 2u32;
    let dd = f(&d).square();
    ((1u32 - f(q)) / 2u32).ln() + f(&d1).square() * ((f(q) + 1u32) / 2u32).ln() - f(&dd) / 2u32 * f(q).ln()
        - f(&d1).square() * f(&d1).ln()
        + f(&dd) / 2u32 * f(&d).ln()
        + f(&d2).square() / 2u32 * d2.ln()
}

/// Leading coefficient of the square lower tail, defined on 0 < delta <= omega(1,q).
/// It vanishes at delta = omega.
pub fn lower_tail_square_rate(q: &Real, delta: &Real) -> Result<Real> {
    let bits = check_square(q, delta, true)?;
    Ok(square_l1(q, delta, bits))
}

/// log P(G_{N+n, N} <= delta N) for the almost-square lattice.
pub fn lower_tail_square(q: &Real, delta: &Real, nshift: &Real) -> Result<Expansion> {
    let bits = check_square(q, delta, false)?.max(nshift.prec());
    let f = |v: &Real| Float::with_val(bits, v);
    let prec = Precision::of(&f(q));
    let d = f(delta);
    let d1 = f(&d) + 1u32;
    let d2 = f(&d) + 2u32;
    let c1 = {
        let t = ((1u32 - f(q).square()) / 4u32).ln() - f(&d) * (2u32 / (f(q) + 1u32)).ln() - f(&d1) * f(&d1).ln()
            + f(&d2) * f(&d2).ln();
        t * nshift
    };
    let dq = f(&d) * q;
    let c0 = {
        let z = zeta_prime_minus_one(prec);
        let t1 = (f(&d1).square() * 2u32 / (f(&d) * &d2)).ln() / 12u32;
        let left = f(q) * 2u32 + &dq - &d;
        let right = f(&d2) - &dq;
        let t2 = (f(&left) * &right / (f(q) * 4u32)).ln() / 8u32;
        let t3 = (f(&right) * &d2 / (f(&d1) * 4u32)).ln() * f(nshift).square() / 2u32;
        z + t1 - t2 + t3
    };
    Ok(Expansion {
        c2: square_l1(q, delta, bits),
        c1,
        clog: Float::with_val(bits, -1) / 12u32,
        c0,
        regime: Regime::LowerSquare,
        remainder_note: "O(log N / N)",
    })
}

/// log P(G_{gamma N + n, N} <= delta N) for gamma > 1.
pub fn lower_tail_rect(q: &Real, gamma: &Real, delta: &Real, nshift: &Real) -> Result<Expansion> {
    check_q(q)?;
    if *gamma <= 1 {
        return Err(Error::domain("the rectangular expansion needs gamma > 1"));
    }
    if *delta <= 0 {
        return Err(Error::domain("delta must be positive"));
    }
    let bits = bits_of(&[q, gamma, delta, nshift]);
    let f = |v: &Real| Float::with_val(bits, v);
    let om = omega(gamma, q);
    if cmp_boundary(delta, &om) != Ordering::Less {
        return Err(Error::regime(format!(
            "delta = {} is not below omega(gamma,q) = {}",
            delta.to_f64(),
            om.to_f64()
        )));
    }
    let prec = Precision::of(&f(q));
    let m = f(&solve_mfrak(gamma, delta, q)?);
    let g = f(gamma);
    let d = f(delta);
    let g1 = f(&g) - 1u32;
    let s = f(&g) + &d + 1u32;
    let gd = f(&g) + &d;
    let d1 = f(&d) + 1u32;
    let q2 = f(q).square();
    let one_q2 = 1u32 - f(&q2);
    let s1 = f(&one_q2).sqrt();
    let sm = f(&m).sqrt();
    let om_m = 1u32 - f(&m);
    let som = f(&om_m).sqrt();
    let cross = (f(&m) * &q2).sqrt() + (f(&one_q2) * &om_m).sqrt();
    let ln = |v: Real| v.ln();

    let c2 = ln((f(&one_q2) - &m) / 4u32)
        + f(&s) * (f(&g1) * ln((f(&sm) + &s1) / 2u32) + f(&d) * ln((f(&som) + q) / 2u32))
        - f(&g1) * &d * ln(f(&cross) / 2u32)
        - f(&g).square() / 2u32 * ln(f(&g))
        - f(&d1).square() / 2u32 * ln(f(&d1))
        - f(&gd).square() / 2u32 * ln(f(&gd))
        + f(&g1).square() / 4u32 * ln(f(&g1).square() / (f(&m) * &one_q2))
        + f(&d).square() / 4u32 * ln(f(&d).square() / (f(&om_m) * &q2))
        + f(&s).square() / 2u32 * ln(f(&s));

    let c1 = (f(&s) * ln((f(&sm) + &s1) / 2u32)
        + f(&g1) * ln((f(&sm) + &s1) / (f(&sm) * &s1 * 2u32))
        - f(&d) * ln(f(&cross) / (f(&som) + q))
        - f(&g) * ln(f(&g))
        - f(&gd) * ln(f(&gd))
        + (f(&d) + 2u32) * ln(f(&s))
        + f(&g1) * ln(f(&g1) * &s))
        * nshift;

    let c0 = {
        let z = zeta_prime_minus_one(prec);
        let t1 = ln((f(&one_q2) - &m) / 4u32) / 6u32;
        let t2 = ln(f(&g1) / (f(&sm) * &s1) - f(&d) / (f(&som) * q)) / 8u32;
        let m32 = f(&m) * &sm;
        let om32 = f(&om_m) * &som;
        let t3 = ln(f(&g1) * &s1 / m32 - f(&d) * q / om32) / 24u32;
        let t4 = ln(f(&g1) * &d * &s / (f(&g) * &d1 * &gd)) / 12u32;
        let t5 = ln((f(&sm) + &s1).square() / (f(&s1) * 4u32) * &g1 / &sm * &s / (f(&g) * &gd)) * f(nshift).square()
            / 2u32;
        z - t1 - t2 - t3 - t4 + t5
    };
    Ok(Expansion {
        c2,
        c1,
        clog: Float::with_val(bits, -1) / 12u32,
        c0,
        regime: Regime::LowerRect,
        remainder_note: "O(log N / N)",
    })
}

/// Dispatch on gamma: the square formulas at gamma = 1, the rectangular ones above.
pub fn lower_tail(q: &Real, gamma: &Real, delta: &Real, nshift: &Real) -> Result<Expansion> {
    if *gamma == 1 {
        lower_tail_square(q, delta, nshift)
    } else {
        lower_tail_rect(q, gamma, delta, nshift)
    }
}

/// The two-point energy S(x, y) of the constrained Jacobi gas with slopes
/// (alpha, beta); the leading lower-tail coefficient is S(a, b) - S(m, d).
pub fn rate_s(alpha: &Real, beta: &Real, x: &Real, y: &Real) -> Real {
    let bits = bits_of(&[alpha, beta, x, y]);
    let f = |v: &Real| Float::with_val(bits, v);
    let ox = 1u32 - f(x);
    let oy = 1u32 - f(y);
    let cross = (f(x) * &oy).sqrt() + (f(y) * &ox).sqrt();
    let mix = f(alpha) * ((f(x).sqrt() + f(y).sqrt()) / 2u32).ln()
        + f(beta) * ((f(&ox).sqrt() + f(&oy).sqrt()) / 2u32).ln();
    -((f(y) - x) / 4u32).ln() + f(alpha) * beta * (cross / 2u32).ln() + f(alpha).square() / 4u32 * (f(x) * y).ln()
        + f(beta).square() / 4u32 * (f(&ox) * &oy).ln()
        - (f(alpha) + beta + 2u32) * mix
}

/// S(a, b) - S(m, d) with (a, b) the Wachter edges and m the pushed soft edge.
pub fn rect_rate_from_s(q: &Real, gamma: &Real, delta: &Real) -> Result<Real> {
    let bits = bits_of(&[q, gamma, delta]);
    let f = |v: &Real| Float::with_val(bits, v);
    let e = edges(gamma, delta)?;
    let m = solve_mfrak(gamma, delta, q)?;
    let d = 1u32 - f(q).square();
    let alpha = f(gamma) - 1u32;
    Ok(rate_s(&alpha, delta, &e.a, &e.b) - rate_s(&alpha, delta, &m, &d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::digits(50)
    }

    fn close(a: &Real, want: &str, tol: i32) {
        let w = Float::with_val(a.prec(), Float::parse(want).unwrap());
        let diff = Float::with_val(a.prec(), a - &w).abs();
        assert!(diff < p().pow10(tol), "got {a}, want {want}");
    }

    #[test]
    fn square_reference_values() {
        // high-precision evaluation of the displayed formulas at q^2 = 1/2, delta = 1
        let q = p().from_ratio(1, 2).sqrt();
        let e = lower_tail_square(&q, &p().real(1), &p().real(0)).unwrap();
        close(&e.c2, "-0.2100297212342620439", -18);
        close(&e.c0, "-0.071760439212761250014796435203676607568", -35);
        assert!(e.c1.is_zero());
        assert_eq!(e.clog, Float::with_val(e.clog.prec(), -1) / 12u32);
    }

    #[test]
    fn square_rate_vanishes_at_boundary() {
        // q = 1/3 gives omega(1, q) = 1
        let q = p().from_ratio(1, 3);
        let l1 = lower_tail_square_rate(&q, &p().real(1)).unwrap();
        assert!(l1.abs() < p().pow10(-40));
        assert!(matches!(lower_tail_square(&q, &p().real(1), &p().real(0)), Err(Error::Regime(_))));
    }

    #[test]
    fn rect_reference_values() {
        let q = p().from_ratio(1, 2).sqrt();
        let e = lower_tail_rect(&q, &p().real(2), &p().real(1), &p().real(0)).unwrap();
        close(&e.c2, "-0.596591114837674512216067177834310763554593674940368401806418", -18);
        close(&e.c0, "-0.0914782767645498496464148811270560599589837584007987007821657", -35);
    }

    #[test]
    fn rect_leading_term_is_difference_of_s() {
        let q = p().from_ratio(1, 2).sqrt();
        for (g, d) in [(2, 1), (3, 2), (5, 1)] {
            let e = lower_tail_rect(&q, &p().real(g), &p().real(d), &p().real(0)).unwrap();
            let s = rect_rate_from_s(&q, &p().real(g), &p().real(d)).unwrap();
            assert!((e.c2 - s).abs() < p().pow10(-20));
        }
    }

    #[test]
    fn rect_tends_to_square_as_gamma_to_one() {
        let q = p().from_ratio(1, 2).sqrt();
        let n = p().from_ratio(1, 2);
        let sq = lower_tail_square(&q, &p().real(1), &n).unwrap();
        let mut prev = None;
        for k in [2, 3, 4] {
            let g = p().real(1) + p().pow10(-k);
            let r = lower_tail_rect(&q, &g, &p().real(1), &n).unwrap();
            let dev = [&r.c2 - sq.c2.clone(), &r.c1 - sq.c1.clone(), &r.c0 - sq.c0.clone()]
                .into_iter()
                .map(|x| Float::with_val(p().bits(), x).abs().to_f64())
                .fold(0.0, f64::max);
            assert!(dev < 10.0 * 10f64.powi(-k), "h=1e-{k}: {dev}");
            if let Some(pd) = prev {
                assert!(dev < pd);
            }
            prev = Some(dev);
        }
    }

    #[test]
    fn dispatch_and_domain() {
        let q = p().from_ratio(1, 2);
        assert_eq!(lower_tail(&q, &p().real(1), &p().from_ratio(1, 2), &p().real(0)).unwrap().regime, Regime::LowerSquare);
        assert!(matches!(lower_tail_square(&p().real(1), &p().real(1), &p().real(0)), Err(Error::Domain(_))));
        assert!(matches!(lower_tail_rect(&q, &p().real(1), &p().real(1), &p().real(0)), Err(Error::Domain(_))));
        assert!(matches!(lower_tail_rect(&q, &p().real(2), &p().real(5), &p().real(0)), Err(Error::Regime(_))));
    }
}
