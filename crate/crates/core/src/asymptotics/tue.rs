use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::lower::{lower_tail_rect, lower_tail_square};
use super::{bits_of, Expansion, Regime};
use crate::error::{Error, Result};
use crate::numerics::{log_barnes_g, zeta_prime_minus_one, Precision, Real};

/// Position of |z| relative to the critical circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuePhase {
    /// Small |z|: the moment is governed by the normalisation alone.
    Post,
    /// Large |z|: the lower-tail LPP coefficients enter.
    Pre,
}

/// Expansion of log E|det(T - z)|^{2cN} plus the pieces it was assembled from.
#[derive(Clone, Debug)]
pub struct TueExpansion {
    pub phase: TuePhase,
    /// Critical value of |z| (weak) or |z|/sqrt(1+rho) (strong).
    pub critical: Real,
    /// log of the displayed prefactor G.
    pub log_prefactor: Real,
    /// c0 as displayed in the source theorem.
    pub expansion: Expansion,
    /// c0 rederived from the LPP duality with the Barnes-G expansion of the
    /// normalising constant; differs from the displayed one at strong non-unitarity.
    pub c0_duality: Real,
}

pub fn weak_critical_radius(c: &Real) -> Real {
    1u32 / (Float::with_val(c.prec(), c * 2u32) + 1u32)
}

pub fn strong_critical_radius(c: &Real, rho: &Real) -> Real {
    let bits = bits_of(&[c, rho]);
    let f = |v: &Real| Float::with_val(bits, v);
    let num = ((f(rho) + c + 1u32) * (f(c) + 1u32)).sqrt() - ((f(rho) + c) * c).sqrt();
    num / (f(rho) + f(c) * 2u32 + 1u32)
}

fn phase_of(r: &Real, critical: &Real) -> Result<TuePhase> {
    if *r <= 0 || *r >= 1 {
        return Err(Error::domain("the scaled |z| must lie in (0,1)"));
    }
    match r.partial_cmp(critical) {
        Some(std::cmp::Ordering::Less) => Ok(TuePhase::Post),
        Some(std::cmp::Ordering::Greater) => Ok(TuePhase::Pre),
        _ => Err(Error::regime("|z| lies on the critical circle")),
    }
}

/// Weak non-unitarity: M - N = s fixed.
pub fn tue_weak_expansion(c: &Real, z_abs: &Real, s: u32) -> Result<TueExpansion> {
    if *c <= 0 {
        return Err(Error::domain("c must be positive"));
    }
    let bits = bits_of(&[c, z_abs]);
    let f = |v: &Real| Float::with_val(bits, v);
    let prec = Precision::of(&f(c));
    let critical = weak_critical_radius(c);
    let phase = phase_of(z_abs, &critical)?;
    let s_r = Float::with_val(bits, s);
    let s2h = f(&s_r).square() / 2u32;
    let c1 = f(c) + 1u32;
    let log_z = (1u32 - f(z_abs).square()).ln();
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let log_g_post = f(&s2h) * (f(c) / &c1).ln() + f(&s_r) / 2u32 * two_pi.ln()
        - log_barnes_g(&(f(&s_r) + 1u32))?;
    let h0_post = -(f(c).square() * &log_z);
    let h1_post = f(&s_r) * (-(f(c) * &log_z) + f(c) * f(c).ln() - f(&c1) * f(&c1).ln());
    let (c2, c1_coef, clog, log_g, c0, regime) = match phase {
        TuePhase::Post => {
            let c0 = f(&log_g_post);
            (h0_post, h1_post, f(&s2h), log_g_post, c0, Regime::TuePostWeak)
        }
        TuePhase::Pre => {
            let lt = lower_tail_square(z_abs, &(1u32 / f(c)), &s_r)?;
            let cc = f(c) * 2u32 + 1u32;
            let corr = -((f(&cc) - 1u32 / f(z_abs)) * (f(&cc) - z_abs) / (f(c).square() * 4u32)).ln() / 8u32
                + f(&s2h) * ((f(&cc) - z_abs) * &cc / (f(c) * &c1 * 4u32)).ln()
                + (f(&c1).square() * 2u32 / (f(c) * &cc)).ln() / 12u32;
            let log_g = log_g_post + corr;
            let c0 = zeta_prime_minus_one(prec) + &log_g;
            (
                h0_post + f(c).square() * &lt.c2,
                h1_post + f(c) * &lt.c1,
                f(&s2h) - Float::with_val(bits, 1) / 12u32,
                log_g,
                c0,
                Regime::TuePreWeak,
            )
        }
    };
    Ok(TueExpansion {
        phase,
        critical,
        log_prefactor: log_g,
        c0_duality: c0.clone(),
        expansion: Expansion {
            c2,
            c1: c1_coef,
            clog,
            c0,
            regime,
            remainder_note: "O(1/N)",
        },
    })
}

/// Strong non-unitarity: M = (rho + 1) N + t, moments of sqrt(1+rho) T - z.
pub fn tue_strong_expansion(c: &Real, rho: &Real, z_abs: &Real, t: &Real) -> Result<TueExpansion> {
    if *c <= 0 || *rho <= 0 {
        return Err(Error::domain("c and rho must be positive"));
    }
    let bits = bits_of(&[c, rho, z_abs, t]);
    let f = |v: &Real| Float::with_val(bits, v);
    let prec = Precision::of(&f(c));
    let r1 = f(rho) + 1u32;
    let q = f(z_abs) / f(&r1).sqrt();
    let critical = strong_critical_radius(c, rho);
    let phase = phase_of(&q, &critical)?;
    let xlx = |v: Real| Float::with_val(bits, v.ln_ref()) * &v;
    let x2lx = |v: Real| Float::with_val(bits, v.square_ref()) * v.ln();
    let rc = f(rho) + c;
    let rc1 = f(&rc) + 1u32;
    let c1 = f(c) + 1u32;
    let u = (1u32 - f(&q).square()).ln();
    let tt = (f(t).square() * 6u32 - 1u32) / 12u32;
    let big = (f(&r1) * &rc / (f(rho) * &rc1)).ln();
    let rr = (f(rho) / &r1).ln();
    let log_g_post = (f(c) / &c1).ln() / 12u32 - f(&tt) * &rr + f(&tt) * &big;
    let h0_post = -(f(c) * &rc * &u)
        + f(c) * f(&r1).ln()
        + (x2lx(f(&c1)) - x2lx(f(c)) + x2lx(f(&r1)) - x2lx(f(rho)) - x2lx(f(&rc1)) + x2lx(f(&rc))) / 2u32;
    let h1_post = -(f(t) * (f(c) * &u + xlx(f(rho)) - xlx(f(&r1)) - xlx(f(&rc)) + xlx(f(&rc1))));
    let z = zeta_prime_minus_one(prec);
    // the (rho/(rho+1)) factor of the displayed prefactor is absent from the
    // Barnes expansion of the duality constant
    let duality_shift = f(&tt) * &rr;
    let (c2, c1_coef, clog, log_g, c0, c0_duality, regime) = match phase {
        TuePhase::Post => {
            let c0 = f(&log_g_post) - &z;
            let c0d = f(&c0) + &duality_shift;
            (h0_post, h1_post, Float::with_val(bits, 1) / 12u32, log_g_post, c0, c0d, Regime::TuePostStrong)
        }
        TuePhase::Pre => {
            let gamma = f(rho) / c + 1u32;
            let lt = lower_tail_rect(&q, &gamma, &(1u32 / f(c)), t)?;
            let log_g = -(f(c).ln() / 12u32) + &log_g_post + &lt.c0;
            let c0 = f(&log_g);
            let c0d = f(&c0) + &duality_shift - &z;
            (
                h0_post + f(c).square() * &lt.c2,
                h1_post + f(c) * &lt.c1,
                Float::with_val(bits, 0),
                log_g,
                c0,
                c0d,
                Regime::TuePreStrong,
            )
        }
    };
    Ok(TueExpansion {
        phase,
        critical,
        log_prefactor: log_g,
        c0_duality,
        expansion: Expansion { c2, c1: c1_coef, clog, c0, regime, remainder_note: "O(1/N)" },
    })
}
