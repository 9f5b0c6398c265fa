use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::Float;

use super::{Precision, Real};
use crate::error::{Error, Result};

/// Gauss rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussJacobiRule {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

type RuleKey = (usize, u64, u64, u32);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<GaussJacobiRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussJacobiRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

// P_n and P_{n-1} by the three-term recurrence
fn jacobi_pair(n: usize, alpha: &Real, beta: &Real, t: &Real) -> (Real, Real) {
    let bits = t.prec();
    let ab = Float::with_val(bits, alpha + beta);
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = Float::with_val(bits, alpha + 1u32)
        + Float::with_val(bits, &ab + 2u32) * Float::with_val(bits, t - 1u32) / 2u32;
    if n == 0 {
        return (p0, Float::with_val(bits, 0));
    }
    let a2b2 = Float::with_val(bits, alpha * alpha) - Float::with_val(bits, beta * beta);
    for k in 2..=n {
        let k2ab = Float::with_val(bits, &ab + (2 * k) as u32);
        let c0 = Float::with_val(bits, &k2ab - 2u32);
        let lhs = Float::with_val(bits, &ab + k as u32) * &c0 * (2 * k) as u32;
        let c1 = Float::with_val(bits, &k2ab - 1u32)
            * (Float::with_val(bits, &k2ab * &c0) * t + &a2b2);
        let c2 = Float::with_val(bits, alpha + (k - 1) as u32)
            * Float::with_val(bits, beta + (k - 1) as u32)
            * &k2ab
            * 2u32;
        let p2 = (c1 * &p1 - c2 * &p0) / lhs;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn jacobi_derivative(n: usize, alpha: &Real, beta: &Real, t: &Real, pn: &Real, pn1: &Real) -> Real {
    let bits = t.prec();
    let n2ab = Float::with_val(bits, alpha + beta) + (2 * n) as u32;
    let num = (Float::with_val(bits, alpha - beta) - Float::with_val(bits, &n2ab * t)) * pn * n as u32
        + Float::with_val(bits, alpha + n as u32) * Float::with_val(bits, beta + n as u32) * pn1 * 2u32;
    let den = n2ab * (Float::with_val(bits, 1) - Float::with_val(bits, t * t));
    num / den
}

/// Nodes by Newton iteration on the Jacobi recurrence from asymptotic starting
/// angles, weights by the Christoffel formula. Exponents must lie in [-1/2, 1/2].
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64, prec: Precision) -> Result<Arc<GaussJacobiRule>> {
    if n == 0 {
        return Err(Error::domain("quadrature needs at least one node"));
    }
    if !(-0.5..=0.5).contains(&alpha) || !(-0.5..=0.5).contains(&beta) {
        return Err(Error::domain("Jacobi exponents must lie in [-1/2, 1/2]"));
    }
    let key = (n, alpha.to_bits(), beta.to_bits(), prec.bits());
    if let Some(rule) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(rule.clone());
    }
    let bits = prec.bits() + 16;
    let a = Float::with_val(bits, alpha);
    let b = Float::with_val(bits, beta);
    let eps = Float::with_val(bits, 1) >> (bits - 8);
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let denom = n as f64 + (alpha + beta + 1.0) / 2.0;
    let mut nodes = Vec::with_capacity(n);
    let mut derivs = Vec::with_capacity(n);
    for k in 1..=n {
        let theta = Float::with_val(bits, k as f64 + alpha / 2.0 - 0.25) * &pi / denom;
        let mut t = theta.cos();
        let mut converged = false;
        for _ in 0..100 {
            let (pn, pn1) = jacobi_pair(n, &a, &b, &t);
            let d = jacobi_derivative(n, &a, &b, &t, &pn, &pn1);
            let step = pn / &d;
            t -= &step;
            if step.abs() < eps {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::accuracy("Gauss-Jacobi node did not converge", t.to_f64()));
        }
        let (pn, pn1) = jacobi_pair(n, &a, &b, &t);
        derivs.push(jacobi_derivative(n, &a, &b, &t, &pn, &pn1));
        nodes.push(t);
    }
    for w in nodes.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::accuracy("Gauss-Jacobi nodes collided", w[0].to_f64()));
        }
    }
    let lg = |x: Real| x.ln_gamma();
    let log_c = Float::with_val(bits, alpha + beta + 1.0) * Float::with_val(bits, 2).ln()
        + lg(Float::with_val(bits, n as f64 + alpha + 1.0))
        + lg(Float::with_val(bits, n as f64 + beta + 1.0))
        - lg(Float::with_val(bits, n as f64 + alpha + beta + 1.0))
        - lg(Float::with_val(bits, n as f64 + 1.0));
    let c = log_c.exp();
    let weights = nodes
        .iter()
        .zip(&derivs)
        .map(|(t, d)| {
            let w = Float::with_val(bits, &c)
                / ((Float::with_val(bits, 1) - Float::with_val(bits, t * t)) * Float::with_val(bits, d * d));
            Float::with_val(prec.bits(), w)
        })
        .collect();
    let nodes = nodes.into_iter().map(|t| Float::with_val(prec.bits(), t)).collect();
    let rule = Arc::new(GaussJacobiRule { alpha, beta, nodes, weights });
    cache().lock().unwrap_or_else(|e| e.into_inner()).insert(key, rule.clone());
    Ok(rule)
}

impl GaussJacobiRule {
    /// Integral over [a, b] of (x-a)^beta (b-x)^alpha f(x).
    pub fn integrate<F>(&self, a: &Real, b: &Real, mut f: F) -> Result<Real>
    where
        F: FnMut(&Real) -> Result<Real>,
    {
        let bits = a.prec().max(b.prec());
        let mid = Float::with_val(bits, a + b) / 2u32;
        let half = Float::with_val(bits, b - a) / 2u32;
        let mut acc = Float::with_val(bits, 0);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let x = Float::with_val(bits, &half * t) + &mid;
            acc += f(&x)? * w;
        }
        let scale = half.pow(Float::with_val(bits, self.alpha + self.beta + 1.0));
        Ok(acc * scale)
    }
}

/// Integral over [a, b] of (x-a)^ea (b-x)^eb f(x) for f analytic on [a, b].
/// Doubles the node count until two successive rules agree to `tol`.
pub fn integrate_endpoint<F>(mut f: F, a: &Real, b: &Real, ea: f64, eb: f64, tol: &Real) -> Result<Real>
where
    F: FnMut(&Real) -> Result<Real>,
{
    if a >= b {
        return Err(Error::domain("integration interval must have a < b"));
    }
    let prec = Precision::of(a);
    let mut n = 16;
    let mut prev = gauss_jacobi(n, eb, ea, prec)?.integrate(a, b, &mut f)?;
    while n < 2048 {
        n *= 2;
        let cur = gauss_jacobi(n, eb, ea, prec)?.integrate(a, b, &mut f)?;
        let diff = Float::with_val(cur.prec(), &cur - &prev).abs();
        let scale = if Float::with_val(cur.prec(), cur.abs_ref()) > 1 { Float::with_val(cur.prec(), cur.abs_ref()) } else { Float::with_val(cur.prec(), 1) };
        if diff <= Float::with_val(cur.prec(), tol * &scale) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::accuracy("quadrature did not converge with 2048 nodes", prev.to_f64()))
}
