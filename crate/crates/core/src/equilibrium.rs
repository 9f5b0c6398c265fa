//! Equilibrium measures of the Jacobi log-gas: the unconstrained Wachter law and
//! the densities obtained when the eigenvalues are pushed below a wall at d.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{brent_root, integrate_endpoint, Precision, Real};

/// Support [a, b] of the unconstrained density for slopes (gamma, delta).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeData {
    pub a: Real,
    pub b: Real,
}

/// a, b = ((sqrt(gamma (gamma + delta)) -/+ sqrt(delta + 1)) / (gamma + delta + 1))^2.
pub fn edges(gamma: &Real, delta: &Real) -> Result<EdgeData> {
    if *gamma < 1 || *delta <= 0 {
        return Err(Error::domain("edges need gamma >= 1 and delta > 0"));
    }
    let bits = gamma.prec().max(delta.prec());
    let gd = Float::with_val(bits, gamma + delta);
    let s = Float::with_val(bits, gamma * &gd).sqrt();
    let t = Float::with_val(bits, delta + 1u32).sqrt();
    let den = Float::with_val(bits, &gd + 1u32);
    let a = (Float::with_val(bits, &s - &t) / &den).square();
    let b = (Float::with_val(bits, &s + &t) / &den).square();
    Ok(EdgeData { a, b })
}

fn mfrak_equation(gamma: &Real, delta: &Real, q: &Real, m: &Real) -> Real {
    let bits = m.prec();
    let d = Float::with_val(bits, 1u32 - Float::with_val(bits, q * q));
    let t1 = Float::with_val(bits, gamma - 1u32) * (Float::with_val(bits, d.sqrt_ref()) / Float::with_val(bits, m.sqrt_ref()) - 1u32);
    let om = Float::with_val(bits, 1u32 - m).sqrt();
    let t2 = Float::with_val(bits, delta * (Float::with_val(bits, q / &om) - 1u32));
    t1 + t2 - 2u32
}

/// Soft edge of the pushed density: the root in (0, a) of
/// 2 = (gamma - 1)(sqrt(1-q^2)/sqrt(m) - 1) + delta (q / sqrt(1-m) - 1).
pub fn solve_mfrak(gamma: &Real, delta: &Real, q: &Real) -> Result<Real> {
    if *gamma <= 1 {
        return Err(Error::domain("the soft pushed edge needs gamma > 1"));
    }
    let e = edges(gamma, delta)?;
    let d = Float::with_val(q.prec(), 1u32 - Float::with_val(q.prec(), q * q));
    if d >= e.b {
        return Err(Error::regime("1 - q^2 >= b: the wall does not push the density"));
    }
    let prec = Precision::of(gamma);
    let lo = Float::with_val(e.a.prec(), &e.a * prec.pow10(-30));
    brent_root(|m| Ok(mfrak_equation(gamma, delta, q, m)), &lo, &e.a, &prec.pow10(5 - prec.decimal_digits() as i32))
}

/// The same soft edge from the explicit solution of the quartic.
pub fn closed_form_mfrak(gamma: &Real, delta: &Real, q: &Real) -> Result<Real> {
    if *gamma <= 1 {
        return Err(Error::domain("the soft pushed edge needs gamma > 1"));
    }
    let bits = gamma.prec().max(delta.prec()).max(q.prec()) + 64;
    let f = |v: &Real| Float::with_val(bits, v);
    let s = f(gamma) + f(delta) + 1u32;
    let sq = (1u32 - f(q).square()).sqrt();
    let bb = (f(gamma) - 1u32) * sq / &s;
    let cc = f(delta) * f(q) / &s;
    let b2 = f(&bb).square();
    let c2 = f(&cc).square();
    let qq = -(1u32 - f(&b2) - &c2).square() / 9u32;
    let one_c2 = 1u32 - f(&c2);
    let rr = (f(&b2).square() * &b2 - f(&b2).square() * 3u32 * &one_c2
        + f(&b2) * 3u32 * (1u32 + f(&c2) * 16u32 + f(&c2).square())
        - f(&one_c2).square() * &one_c2)
        / 27u32;
    let disc = f(&qq).square() * &qq + f(&rr).square();
    let cubic_sum = if disc >= 0 {
        let sd = f(&disc).sqrt();
        (f(&rr) + &sd).cbrt() + (f(&rr) - &sd).cbrt()
    } else {
        // two conjugate cube roots: 2 Re of the principal one
        let modulus = f(&(-f(&qq).square() * &qq)).sqrt();
        let arg = f(&(-f(&disc))).sqrt().atan2(&rr);
        modulus.cbrt() * (arg / 3u32).cos() * 2u32
    };
    let x0 = -(f(&c2) * 2u32 - &b2 - 2u32) / 3u32 + cubic_sum;
    let sx = f(&x0).sqrt();
    let inner = f(&b2) - f(&c2) * 2u32 + 2u32 - &x0 - f(&bb) * (f(&c2) + 1u32) * 2u32 / &sx;
    if inner < 0 {
        return Err(Error::regime("quartic has no real soft-edge root for these parameters"));
    }
    let m = (f(&bb) + &sx - inner.sqrt()).square() / 4u32;
    Ok(Float::with_val(gamma.prec(), m))
}

/// Which form the constrained density takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Wall above b: the Wachter law on [a, b].
    Wachter,
    /// alpha = 0, wall inside the support: hard edges at 0 and d.
    PushedHard,
    /// alpha > 0, wall inside the support: soft edge at m, hard edge at d.
    PushedSoft,
}

/// Equilibrium density of the Jacobi gas with V = -alpha log x - beta log(1-x),
/// constrained to [0, d].
#[derive(Clone, Debug)]
pub struct ConstrainedMeasure {
    pub kind: MeasureKind,
    pub alpha: Real,
    pub beta: Real,
    pub d: Real,
    /// Support endpoints.
    pub left: Real,
    pub right: Real,
    /// Exponents of (x - left) and (right - x) in the density.
    pub edge_exponents: (f64, f64),
}

pub fn constrained_density(alpha: &Real, beta: &Real, d: &Real) -> Result<ConstrainedMeasure> {
    if *alpha < 0 || *beta <= 0 || *d <= 0 || *d >= 1 {
        return Err(Error::domain("need alpha >= 0, beta > 0, 0 < d < 1"));
    }
    let bits = alpha.prec().max(beta.prec()).max(d.prec());
    let gamma = Float::with_val(bits, alpha + 1u32);
    let e = edges(&gamma, beta)?;
    let mk = |kind, left: Real, right: Real, ex| ConstrainedMeasure {
        kind,
        alpha: alpha.clone(),
        beta: beta.clone(),
        d: d.clone(),
        left,
        right,
        edge_exponents: ex,
    };
    if *d >= e.b {
        let ex = if alpha.is_zero() { (-0.5, 0.5) } else { (0.5, 0.5) };
        return Ok(mk(MeasureKind::Wachter, e.a, e.b, ex));
    }
    if alpha.is_zero() {
        return Ok(mk(MeasureKind::PushedHard, Float::with_val(bits, 0), d.clone(), (-0.5, -0.5)));
    }
    let q = Float::with_val(bits, 1u32 - d).sqrt();
    let m = solve_mfrak(&gamma, beta, &q)?;
    Ok(mk(MeasureKind::PushedSoft, m, d.clone(), (0.5, -0.5)))
}

impl ConstrainedMeasure {
    /// The density divided by its edge factors (x - left)^e1 (right - x)^e2.
    pub fn regular_part(&self, x: &Real) -> Real {
        let bits = x.prec();
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        let one_minus = Float::with_val(bits, 1u32 - x);
        match self.kind {
            MeasureKind::Wachter => {
                let c = Float::with_val(bits, &self.alpha + &self.beta) + 2u32;
                if self.alpha.is_zero() {
                    c / (pi * 2u32) / one_minus
                } else {
                    c / (pi * 2u32) / (Float::with_val(bits, x * &one_minus))
                }
            }
            _ => self.psi(x),
        }
    }

    /// psi in the pushed densities; for the Wachter law, the density over its square root.
    pub fn psi(&self, x: &Real) -> Real {
        let bits = x.prec();
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        let one_minus = Float::with_val(bits, 1u32 - x);
        let sd1 = Float::with_val(bits, 1u32 - &self.d).sqrt();
        match self.kind {
            MeasureKind::PushedHard => {
                let t = Float::with_val(bits, &self.beta * &sd1) / (one_minus * 2u32);
                (Float::with_val(bits, &self.beta / 2u32) + 1u32 - t) / pi
            }
            MeasureKind::PushedSoft => {
                let m = &self.left;
                let sd = Float::with_val(bits, self.d.sqrt_ref());
                let t1 = Float::with_val(bits, &self.alpha * &sd) / (Float::with_val(bits, x * m.clone().sqrt()));
                let t2 = Float::with_val(bits, &self.beta * &sd1)
                    / (one_minus * Float::with_val(bits, 1u32 - m).sqrt());
                (t1 - t2) / (pi * 2u32)
            }
            MeasureKind::Wachter => {
                let c = Float::with_val(bits, &self.alpha + &self.beta) + 2u32;
                let s = Float::with_val(bits, Float::with_val(bits, &self.right - x) * Float::with_val(bits, x - &self.left));
                c / (pi * 2u32) * s.sqrt() / Float::with_val(bits, x * &one_minus)
            }
        }
    }

    pub fn density(&self, x: &Real) -> Real {
        let bits = x.prec();
        if *x <= self.left || *x >= self.right {
            return Float::with_val(bits, 0);
        }
        let l = Float::with_val(bits, x - &self.left).pow(self.edge_exponents.0);
        let r = Float::with_val(bits, &self.right - x).pow(self.edge_exponents.1);
        self.regular_part(x) * l * r
    }

    /// Total mass by Gauss-Jacobi quadrature with the edge exponents as weight.
    pub fn mass(&self, tol: &Real) -> Result<Real> {
        integrate_endpoint(
            |x| Ok(self.regular_part(x)),
            &self.left,
            &self.right,
            self.edge_exponents.0,
            self.edge_exponents.1,
            tol,
        )
    }
}
