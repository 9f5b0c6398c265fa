//! Closed forms of the integrals that turn the Hankel coefficients into the
//! lower-tail coefficients, each paired with a direct quadrature of its left side.

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::bits_of;
use super::hankel::principal_value;
use crate::equilibrium::{constrained_density, ConstrainedMeasure, MeasureKind};
use crate::error::{Error, Result};
use crate::numerics::{integrate_endpoint, Precision, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaIdentity {
    /// int_a^b t log(x)/x sqrt((x-a)/(b-x)) dx; params [a, b, t]
    LogOverX,
    /// int_a^b t log(x)/(1-x) sqrt((x-a)/(b-x)) dx; params [a, b, t]
    LogOverOneMinusX,
    /// PV int_a^b (t/y) sqrt((b-y)(y-a))/(x-y) dy; params [a, b, t, x]
    LogDerivativePrincipalValue,
    /// int W/sqrt((b-x)(x-a)) PV int W' sqrt((b-y)(y-a))/(x-y) dy dx, W = t log; params [a, b, t]
    LogDoubleIntegral,
    /// int_0^d log(1-x)/sqrt(x(d-x)) dx; params [d]
    ChebyshevLogOneMinusX,
    /// int_0^d log(1-x)/((1-x) sqrt(x(d-x))) dx; params [d]
    ChebyshevLogOverOneMinusX,
    /// int_0^d V (1/pi + psi)/sqrt(x(d-x)) dx for V = -beta log(1-x), psi of the pushed
    /// hard-hard density; params [beta, d]
    HardHardPotential,
    /// int_m^d (V - 4(d-x)/(d-m)) (2/((d-m)pi) + psi) sqrt((x-m)/(d-x)) dx for
    /// V = -alpha log x - beta log(1-x), psi of the pushed soft-hard density; params [alpha, beta, d]
    SoftHardPotential,
}

impl LemmaIdentity {
    pub const ALL: [LemmaIdentity; 8] = [
        LemmaIdentity::LogOverX,
        LemmaIdentity::LogOverOneMinusX,
        LemmaIdentity::LogDerivativePrincipalValue,
        LemmaIdentity::LogDoubleIntegral,
        LemmaIdentity::ChebyshevLogOneMinusX,
        LemmaIdentity::ChebyshevLogOverOneMinusX,
        LemmaIdentity::HardHardPotential,
        LemmaIdentity::SoftHardPotential,
    ];

    pub fn arity(self) -> usize {
        match self {
            LemmaIdentity::LogOverX | LemmaIdentity::LogOverOneMinusX | LemmaIdentity::LogDoubleIntegral => 3,
            LemmaIdentity::LogDerivativePrincipalValue => 4,
            LemmaIdentity::ChebyshevLogOneMinusX | LemmaIdentity::ChebyshevLogOverOneMinusX => 1,
            LemmaIdentity::HardHardPotential => 2,
            LemmaIdentity::SoftHardPotential => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LemmaIdentity::LogOverX => "log_over_x",
            LemmaIdentity::LogOverOneMinusX => "log_over_one_minus_x",
            LemmaIdentity::LogDerivativePrincipalValue => "log_derivative_principal_value",
            LemmaIdentity::LogDoubleIntegral => "log_double_integral",
            LemmaIdentity::ChebyshevLogOneMinusX => "chebyshev_log_one_minus_x",
            LemmaIdentity::ChebyshevLogOverOneMinusX => "chebyshev_log_over_one_minus_x",
            LemmaIdentity::HardHardPotential => "hard_hard_potential",
            LemmaIdentity::SoftHardPotential => "soft_hard_potential",
        }
    }

    /// Three admissible parameter points.
    pub fn grid(self) -> [Vec<(i64, i64)>; 3] {
        match self {
            LemmaIdentity::LogOverOneMinusX => [
                vec![(1, 4), (3, 4), (1, 1)],
                vec![(1, 10), (1, 2), (-3, 2)],
                vec![(2, 5), (9, 10), (7, 3)],
            ],
            LemmaIdentity::LogOverX | LemmaIdentity::LogDoubleIntegral => [
                vec![(1, 4), (1, 1), (1, 1)],
                vec![(1, 10), (1, 2), (-3, 2)],
                vec![(2, 5), (9, 10), (7, 3)],
            ],
            LemmaIdentity::LogDerivativePrincipalValue => [
                vec![(1, 4), (1, 1), (1, 1), (1, 2)],
                vec![(1, 10), (1, 2), (-3, 2), (1, 5)],
                vec![(2, 5), (9, 10), (7, 3), (17, 20)],
            ],
            LemmaIdentity::ChebyshevLogOneMinusX | LemmaIdentity::ChebyshevLogOverOneMinusX => {
                [vec![(3, 4)], vec![(1, 5)], vec![(19, 20)]]
            }
            LemmaIdentity::HardHardPotential => [vec![(2, 1), (3, 4)], vec![(1, 1), (1, 2)], vec![(5, 2), (3, 5)]],
            LemmaIdentity::SoftHardPotential => [
                vec![(1, 1), (1, 1), (1, 2)],
                vec![(2, 1), (1, 2), (3, 5)],
                vec![(1, 2), (3, 1), (1, 4)],
            ],
        }
    }
}

fn check(which: LemmaIdentity, params: &[Real]) -> Result<()> {
    if params.len() != which.arity() {
        return Err(Error::domain(format!("{} takes {} parameters", which.name(), which.arity())));
    }
    match which {
        LemmaIdentity::LogOverX | LemmaIdentity::LogDoubleIntegral | LemmaIdentity::LogDerivativePrincipalValue => {
            if params[0] <= 0 || params[1] <= params[0] {
                return Err(Error::domain("need b > a > 0"));
            }
        }
        LemmaIdentity::LogOverOneMinusX => {
            if params[0] <= 0 || params[1] <= params[0] || params[1] >= 1 {
                return Err(Error::domain("need 0 < a < b < 1"));
            }
        }
        _ => {
            let d = &params[params.len() - 1];
            if *d <= 0 || *d >= 1 {
                return Err(Error::domain("need 0 < d < 1"));
            }
        }
    }
    if which == LemmaIdentity::LogDerivativePrincipalValue && (params[3] <= params[0] || params[3] >= params[1]) {
        return Err(Error::domain("the principal value point must lie in (a, b)"));
    }
    Ok(())
}

/// Right-hand side of the identity.
pub fn lemma_closed_form(which: LemmaIdentity, params: &[Real]) -> Result<Real> {
    check(which, params)?;
    let refs: Vec<&Real> = params.iter().collect();
    let bits = bits_of(&refs);
    let f = |v: &Real| Float::with_val(bits, v);
    let pi = Float::with_val(bits, Constant::Pi);
    let cheb_ratio = |d: &Real| {
        let s = (1u32 - f(d)).sqrt();
        (f(&s).square() * 4u32 / d * (1u32 - f(&s)) / (f(&s) + 1u32)).ln()
    };
    let cheb_half = |d: &Real| (2u32 / ((1u32 - f(d)).sqrt() + 1u32)).ln();
    Ok(match which {
        LemmaIdentity::LogOverX => {
            let (sa, sb, t) = (f(&params[0]).sqrt(), f(&params[1]).sqrt(), &params[2]);
            let s = f(&sa) + &sb;
            let inner = (f(&s) / 2u32).ln() + f(&sa) / &sb * (f(&s) / (f(&sa) * &sb * 2u32)).ln();
            f(&pi) * 2u32 * t * inner
        }
        LemmaIdentity::LogOverOneMinusX => {
            let (a, b, t) = (&params[0], &params[1], &params[2]);
            let (sa, sb) = (f(a).sqrt(), f(b).sqrt());
            let (sa1, sb1) = ((1u32 - f(a)).sqrt(), (1u32 - f(b)).sqrt());
            let cross = f(&sa) * &sb1 + f(&sb) * &sa1;
            let inner = (2u32 / (f(&sa) + &sb)).ln() + f(&sa1) / &sb1 * (cross / (f(&sa1) + &sb1)).ln();
            f(&pi) * 2u32 * t * inner
        }
        LemmaIdentity::LogDerivativePrincipalValue => {
            let sab = (f(&params[0]) * &params[1]).sqrt();
            f(&pi) * &params[2] * (1u32 - sab / &params[3])
        }
        LemmaIdentity::LogDoubleIntegral => {
            let (a, b, t) = (&params[0], &params[1], &params[2]);
            let num = f(a).sqrt() + f(b).sqrt();
            let den = (f(a) * b).sqrt().sqrt() * 2u32;
            (f(&pi) * 2u32 * t).square() * (num / den).ln()
        }
        LemmaIdentity::ChebyshevLogOneMinusX => -(f(&pi) * 2u32 * cheb_half(&params[0])),
        LemmaIdentity::ChebyshevLogOverOneMinusX => {
            f(&pi) / (1u32 - f(&params[0])).sqrt() * cheb_ratio(&params[0])
        }
        LemmaIdentity::HardHardPotential => {
            let (beta, d) = (&params[0], &params[1]);
            f(beta) * ((f(beta) + 4u32) * cheb_half(d) + f(beta) / 2u32 * cheb_ratio(d))
        }
        LemmaIdentity::SoftHardPotential => {
            let (alpha, beta, d) = (&params[0], &params[1], &params[2]);
            let m = soft_edge(alpha, beta, d)?;
            let (sm, sd) = (f(&m).sqrt(), f(d).sqrt());
            let (sm1, sd1) = ((1u32 - f(&m)).sqrt(), (1u32 - f(d)).sqrt());
            let cross = (f(&sm) * &sd1 + f(&sd) * &sm1) / 2u32;
            let s = f(alpha) + beta + 2u32;
            f(alpha).square() / 2u32 * (f(&m) * d).ln() - 3u32
                + f(alpha) * beta * 2u32 * cross.ln()
                + f(beta).square() / 2u32 * ((1u32 - f(&m)) * (1u32 - f(d))).ln()
                - s * 2u32
                    * (f(alpha) * ((f(&sm) + &sd) / 2u32).ln() + f(beta) * ((f(&sm1) + &sd1) / 2u32).ln())
        }
    })
}

fn soft_edge(alpha: &Real, beta: &Real, d: &Real) -> Result<Real> {
    let mu = constrained_density(alpha, beta, d)?;
    if mu.kind != MeasureKind::PushedSoft {
        return Err(Error::regime("d does not push the soft-edge density"));
    }
    Ok(mu.left)
}

/// Left-hand side of the identity by Gauss-Jacobi quadrature.
pub fn lemma_quadrature(which: LemmaIdentity, params: &[Real], tol: &Real) -> Result<Real> {
    check(which, params)?;
    let refs: Vec<&Real> = params.iter().collect();
    let bits = bits_of(&refs);
    let f = |v: &Real| Float::with_val(bits, v);
    let zero = Float::with_val(bits, 0);
    let log1m = |x: &Real| (1u32 - f(x)).ln();
    match which {
        LemmaIdentity::LogOverX => {
            let t = &params[2];
            integrate_endpoint(|x| Ok(f(t) * f(x).ln() / x), &params[0], &params[1], 0.5, -0.5, tol)
        }
        LemmaIdentity::LogOverOneMinusX => {
            let t = &params[2];
            integrate_endpoint(|x| Ok(f(t) * f(x).ln() / (1u32 - f(x))), &params[0], &params[1], 0.5, -0.5, tol)
        }
        LemmaIdentity::LogDerivativePrincipalValue => {
            let t = f(&params[2]);
            let g = |y: &Real| f(&t) / y;
            principal_value(&g, &params[0], &params[1], &params[3], tol)
        }
        LemmaIdentity::LogDoubleIntegral => {
            let (a, b, t) = (&params[0], &params[1], f(&params[2]));
            let g = |y: &Real| f(&t) / y;
            integrate_endpoint(|x| Ok(f(&t) * f(x).ln() * principal_value(&g, a, b, x, tol)?), a, b, -0.5, -0.5, tol)
        }
        LemmaIdentity::ChebyshevLogOneMinusX => integrate_endpoint(|x| Ok(log1m(x)), &zero, &params[0], -0.5, -0.5, tol),
        LemmaIdentity::ChebyshevLogOverOneMinusX => {
            integrate_endpoint(|x| Ok(log1m(x) / (1u32 - f(x))), &zero, &params[0], -0.5, -0.5, tol)
        }
        LemmaIdentity::HardHardPotential => {
            let (beta, d) = (&params[0], &params[1]);
            // the identity is algebraic in psi, so it is checked up to and including d = b
            let mu = ConstrainedMeasure {
                kind: MeasureKind::PushedHard,
                alpha: f(&zero),
                beta: f(beta),
                d: f(d),
                left: f(&zero),
                right: f(d),
                edge_exponents: (-0.5, -0.5),
            };
            let pi = Float::with_val(bits, Constant::Pi);
            integrate_endpoint(
                |x| Ok(-(f(beta) * log1m(x)) * (1u32 / f(&pi) + mu.psi(x))),
                &zero,
                d,
                -0.5,
                -0.5,
                tol,
            )
        }
        LemmaIdentity::SoftHardPotential => {
            let (alpha, beta, d) = (&params[0], &params[1], &params[2]);
            let mu = constrained_density(alpha, beta, d)?;
            if mu.kind != MeasureKind::PushedSoft {
                return Err(Error::regime("d does not push the soft-edge density"));
            }
            let m = mu.left.clone();
            let pi = Float::with_val(bits, Constant::Pi);
            let dm = f(d) - &m;
            integrate_endpoint(
                |x| {
                    let v = -(f(alpha) * f(x).ln()) - f(beta) * log1m(x);
                    let lin = (f(d) - x) * 4u32 / &dm;
                    Ok((v - lin) * (2u32 / (f(&dm) * &pi) + mu.psi(x)))
                },
                &m,
                d,
                0.5,
                -0.5,
                tol,
            )
        }
    }
}

/// Parameters of a grid point as reals.
pub fn grid_params(which: LemmaIdentity, k: usize, prec: Precision) -> Vec<Real> {
    which.grid()[k].iter().map(|&(n, d)| prec.from_ratio(n, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::digits(30)
    }

    #[test]
    fn every_identity_on_its_grid() {
        let tol = p().pow10(-20);
        for which in LemmaIdentity::ALL {
            for k in 0..3 {
                let params = grid_params(which, k, p());
                let cf = lemma_closed_form(which, &params).unwrap();
                let qd = lemma_quadrature(which, &params, &tol).unwrap_or_else(|e| panic!("{} #{k}: {e:?}", which.name()));
                let scale = if cf.clone().abs() > 1 { cf.clone().abs() } else { p().real(1) };
                assert!((cf.clone() - &qd).abs() / scale < 1e-12, "{} #{k}: {} vs {}", which.name(), cf.to_f64(), qd.to_f64());
            }
        }
    }

    #[test]
    fn known_values() {
        let d = vec![p().from_ratio(3, 4)];
        let v = lemma_closed_form(LemmaIdentity::ChebyshevLogOneMinusX, &d).unwrap();
        let want = -(p().pi() * 2u32) * p().from_ratio(4, 3).ln();
        assert!((v - want).abs() < p().pow10(-28));
        let abt = vec![p().from_ratio(1, 4), p().real(1), p().real(1)];
        let v = lemma_closed_form(LemmaIdentity::LogDoubleIntegral, &abt).unwrap().to_f64();
        assert!((v - 2.325).abs() < 5e-4, "{v}");
    }

    #[test]
    fn narrow_support() {
        let (a, b) = (p().from_ratio(1, 2) - p().pow10(-4) / 2u32, p().from_ratio(1, 2) + p().pow10(-4) / 2u32);
        let params = vec![a, b, p().real(1)];
        let cf = lemma_closed_form(LemmaIdentity::LogOverX, &params).unwrap();
        let qd = lemma_quadrature(LemmaIdentity::LogOverX, &params, &p().pow10(-20)).unwrap();
        assert!((cf - qd).abs() < 1e-6);
    }

    #[test]
    fn parameter_checks() {
        assert!(lemma_closed_form(LemmaIdentity::LogOverX, &[p().real(1), p().real(1), p().real(1)]).is_err());
        assert!(lemma_closed_form(LemmaIdentity::ChebyshevLogOneMinusX, &[]).is_err());
        assert!(lemma_quadrature(LemmaIdentity::LogDerivativePrincipalValue, &[p().from_ratio(1, 4), p().real(1), p().real(1), p().real(2)], &p().pow10(-10)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn log_over_x_random(a in 0.05f64..0.6, w in 0.05f64..0.35, t in -3.0f64..3.0) {
            let pr = Precision::digits(24);
            let params = vec![pr.from_f64(a), pr.from_f64(a + w), pr.from_f64(t)];
            for which in [LemmaIdentity::LogOverX, LemmaIdentity::LogOverOneMinusX] {
                let cf = lemma_closed_form(which, &params).unwrap();
                let qd = lemma_quadrature(which, &params, &pr.pow10(-16)).unwrap();
                prop_assert!((cf - qd).abs() < 1e-12);
            }
        }
    }
}
