use rug::Float;

use super::lower::lower_tail;
use super::upper::upper_tail;
use super::{bits_of, cmp_boundary, Expansion, Regime};
use crate::error::{Error, Result};
use crate::lpp::omega;
use crate::numerics::Real;

/// log P(x_max <= d) when d is inside the support (pushed) and log P(x_max > d)
/// when it is outside (pulled), for n points with exponents (lambda1, beta n).
fn jue_ldp(gamma: &Real, shift: &Real, beta: &Real, d: &Real) -> Result<Expansion> {
    if *d <= 0 || *d >= 1 {
        return Err(Error::domain("d must lie in (0,1)"));
    }
    if *beta <= 0 {
        return Err(Error::domain("beta must be positive"));
    }
    let bits = bits_of(&[gamma, shift, beta, d]);
    let q = (1u32 - Float::with_val(bits, d)).sqrt();
    let om = omega(gamma, &q);
    let mut e = match cmp_boundary(beta, &om) {
        std::cmp::Ordering::Less => {
            let mut e = lower_tail(&q, gamma, beta, shift)?;
            e.regime = Regime::JuePushed;
            e
        }
        std::cmp::Ordering::Greater => {
            let mut e = upper_tail(&q, gamma, beta, shift)?.expansion;
            e.regime = Regime::JuePulled;
            e
        }
        std::cmp::Ordering::Equal => return Err(Error::regime("d is the soft edge of the equilibrium measure")),
    };
    e.remainder_note = "o(1)";
    Ok(e)
}

/// Exponents (alpha, beta n) with alpha fixed: hard edge at 0, soft edge at the top.
pub fn jue_ldp_hard_soft(alpha: &Real, beta: &Real, d: &Real) -> Result<Expansion> {
    jue_ldp(&Float::with_val(alpha.prec(), 1), alpha, beta, d)
}

/// Exponents (alpha n + t, beta n) with alpha > 0: soft edges on both sides.
pub fn jue_ldp_soft_soft(alpha: &Real, t: &Real, beta: &Real, d: &Real) -> Result<Expansion> {
    if *alpha <= 0 {
        return Err(Error::domain("alpha must be positive"));
    }
    jue_ldp(&(Float::with_val(alpha.prec(), alpha) + 1u32), t, beta, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::jue_cdf_max_exact;
    use crate::numerics::{ln_rational, Precision};
    use rug::Rational;

    fn p() -> Precision {
        Precision::digits(30)
    }

    #[test]
    fn pushed_and_pulled_sides() {
        let (a, b) = (p().real(1), p().real(1));
        assert_eq!(jue_ldp_hard_soft(&a, &b, &p().from_ratio(1, 2)).unwrap().regime, Regime::JuePushed);
        assert_eq!(jue_ldp_hard_soft(&a, &b, &p().from_ratio(99, 100)).unwrap().regime, Regime::JuePulled);
        assert!(jue_ldp_soft_soft(&p().real(0), &a, &b, &p().from_ratio(1, 2)).is_err());
    }

    #[test]
    fn pushed_hard_soft_matches_exact_determinant() {
        // n points, exponents (1, n), P(x_max <= 1/2)
        let e = jue_ldp_hard_soft(&p().real(1), &p().real(1), &p().from_ratio(1, 2)).unwrap();
        let x = Rational::from((1, 2));
        let r: Vec<f64> = [8u32, 16, 32]
            .iter()
            .map(|&n| {
                let exact = ln_rational(&jue_cdf_max_exact(n as usize, 1, n, &x).unwrap(), p());
                (exact - e.evaluate(&p().real(n))).to_f64()
            })
            .collect();
        assert!(r.windows(2).all(|w| w[1].abs() < w[0].abs()) && r[2].abs() < 1e-2, "{r:?}");
    }

    #[test]
    fn pushed_soft_soft_matches_exact_determinant() {
        // exponents (n, n), P(x_max <= 3/4)
        let e = jue_ldp_soft_soft(&p().real(1), &p().real(0), &p().real(1), &p().from_ratio(3, 4)).unwrap();
        let x = Rational::from((3, 4));
        let r: Vec<f64> = [8u32, 16, 32]
            .iter()
            .map(|&n| {
                let exact = ln_rational(&jue_cdf_max_exact(n as usize, n, n, &x).unwrap(), p());
                (exact - e.evaluate(&p().real(n))).to_f64()
            })
            .collect();
        assert!(r.windows(2).all(|w| w[1].abs() < w[0].abs()) && r[2].abs() < 1e-2, "{r:?}");
    }
}
