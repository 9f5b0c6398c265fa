use std::time::Instant;

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{RunConfig, Table};
use crate::asymptotics::{grid_params, lemma_closed_form, lemma_quadrature, LemmaIdentity};
use crate::ensembles::{jue_cdf_max_exact, lpp_tue_constant, tue_char_moment, verify_schur_identities};
use crate::equilibrium::{closed_form_mfrak, constrained_density, edges, solve_mfrak};
use crate::error::Result;
use crate::lpp::{prob_leq_schur, LppParams};
use crate::numerics::Precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The identity or property being checked.
    pub anchor: String,
    pub status: CheckStatus,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

impl VerificationReport {
    fn new(checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().all(|c| c.status == CheckStatus::Pass);
        VerificationReport { checks, passed }
    }

    pub fn to_table(&self, cfg: &RunConfig) -> Table<CheckRecord> {
        let mut meta = cfg.meta();
        meta.extra.insert("passed".into(), self.passed.into());
        Table { meta, rows: self.checks.clone() }
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Deliberate defects for checking that the campaign notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Scale the LPP-to-TUE constant by 1 + 2^-52.
    PerturbTueConstant,
}

fn record(name: &str, anchor: &str, cases: usize, dev: f64, tol: f64, start: Instant) -> CheckRecord {
    let ok = dev.is_finite() && dev <= tol;
    CheckRecord {
        name: name.to_string(),
        anchor: anchor.to_string(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        cases,
        max_deviation: dev,
        tolerance: tol,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn abs_diff(a: &Rational, b: &Rational) -> f64 {
    Rational::from(a - b).abs().to_f64()
}

/// Grid points (q^2, n, m, ell) with m <= n <= 5, ell <= 5, q^2 in {1/4, 1/2, 3/4}.
pub fn duality_grid() -> Vec<(Rational, u32, u32, u32)> {
    let mut g = Vec::new();
    for q in [(1, 4), (1, 2), (3, 4)] {
        for n in 1..=5u32 {
            for m in 1..=n {
                for ell in 0..=5u32 {
                    g.push((Rational::from(q), n, m, ell));
                }
            }
        }
    }
    g
}

fn duality_checks(fault: Option<Fault>) -> Result<Vec<CheckRecord>> {
    let start = Instant::now();
    let grid = duality_grid();
    let devs = grid
        .par_iter()
        .map(|(q2, n, m, ell)| {
            let schur = prob_leq_schur(&LppParams::exact(q2.clone(), *n, *m, *ell)?, Precision::default())?;
            let schur = schur.value.as_exact().expect("exact input").clone();
            let jue = jue_cdf_max_exact(*m as usize, n - m, *ell, &Rational::from(1 - q2.clone()))?;
            let mut c = lpp_tue_constant(*ell, *n, *m)?;
            if fault == Some(Fault::PerturbTueConstant) {
                c *= Rational::from(1) + Rational::from((1, rug::Integer::from(1) << 52));
            }
            let moment = tue_char_moment(*ell, *n, *m, q2)?.value.as_exact().expect("exact").clone();
            let tue = c * rug::ops::Pow::pow(Rational::from(1 - q2.clone()), n * m) * moment;
            Ok((abs_diff(&schur, &jue), abs_diff(&schur, &tue)))
        })
        .collect::<Result<Vec<_>>>()?;
    let jue = devs.iter().map(|d| d.0).fold(0.0, f64::max);
    let tue = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    // exact rationals: any nonzero difference fails
    let exact_dev = |d: f64, any: bool| if any { d.max(f64::MIN_POSITIVE) } else { 0.0 };
    let jue_any = devs.iter().any(|d| d.0 != 0.0);
    let tue_any = devs.iter().any(|d| d.1 != 0.0);
    Ok(vec![
        record(
            "duality_schur_jue",
            "P(G_{n,m} <= ell) = P(largest Jacobi eigenvalue <= 1 - q^2), exact",
            grid.len(),
            exact_dev(jue, jue_any),
            0.0,
            start,
        ),
        record(
            "duality_schur_tue",
            "P(G_{n,m} <= ell) = c_{ell,n,m} (1-q^2)^{nm} E|det(T - q)|^{2m}, exact",
            grid.len(),
            exact_dev(tue, tue_any),
            0.0,
            start,
        ),
    ])
}

fn schur_identity_checks(seed: u64, prec: Precision) -> Result<Vec<CheckRecord>> {
    let start = Instant::now();
    let anchors = |name: &str| match name {
        "morris_selberg" => "Morris integral over the circle equals the Selberg integral after the Cayley map",
        "t_one" => "generalized hypergeometric sum at t = 1 in closed form",
        _ => "Jacobi-side and circular-side summands agree under partition transposition",
    };
    Ok(verify_schur_identities(6, 4, seed, prec)?
        .into_iter()
        .map(|c| {
            let tol = if c.exact { 0.0 } else { 1e-10 };
            let mut r = record(&c.name, anchors(&c.name), c.cases, c.max_deviation, tol, start);
            if !c.passed {
                r.status = CheckStatus::Fail;
            }
            r
        })
        .collect())
}

fn lemma_checks(prec: Precision) -> Result<Vec<CheckRecord>> {
    let tol = prec.pow10(-(prec.decimal_digits() as i32) / 2);
    LemmaIdentity::ALL
        .par_iter()
        .map(|&which| {
            let start = Instant::now();
            let mut dev = 0.0f64;
            for k in 0..3 {
                let params = grid_params(which, k, prec);
                let cf = lemma_closed_form(which, &params)?;
                let qd = lemma_quadrature(which, &params, &tol)?;
                let scale = Float::with_val(prec.bits(), cf.abs_ref()).max(&prec.real(1));
                dev = dev.max((Float::with_val(prec.bits(), &cf - &qd) / scale).abs().to_f64());
            }
            Ok(record(
                &format!("lemma_{}", which.name()),
                "closed form reproduced by quadrature on three parameter points",
                3,
                dev,
                1e-10,
                start,
            ))
        })
        .collect()
}

/// Soft pushed edge by root solve and by the explicit quartic solution on a
/// 5 x 5 x 5 grid of (gamma, delta, wall) with the wall inside (a, b).
fn mfrak_check(prec: Precision) -> Result<CheckRecord> {
    let start = Instant::now();
    let mut pts = Vec::new();
    for g in [(5, 4), (3, 2), (2, 1), (3, 1), (5, 1)] {
        for d in [(1, 2), (1, 1), (3, 2), (2, 1), (4, 1)] {
            for k in 1..=5 {
                pts.push((g, d, k));
            }
        }
    }
    let devs = pts
        .par_iter()
        .map(|&(g, d, k)| {
            let gamma = prec.from_ratio(g.0, g.1);
            let delta = prec.from_ratio(d.0, d.1);
            let e = edges(&gamma, &delta)?;
            let wall = Float::with_val(prec.bits(), &e.b - &e.a) * k / 6u32 + &e.a;
            let q = Float::with_val(prec.bits(), 1u32 - wall).sqrt();
            let a = solve_mfrak(&gamma, &delta, &q)?;
            let b = closed_form_mfrak(&gamma, &delta, &q)?;
            Ok((a - b).abs().to_f64())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(record(
        "mfrak_dual_route",
        "soft edge of the pushed density: bracketed root equals the closed-form quartic root",
        pts.len(),
        devs.into_iter().fold(0.0, f64::max),
        1e-12,
        start,
    ))
}

fn normalization_check(prec: Precision) -> Result<CheckRecord> {
    let start = Instant::now();
    let tol = prec.pow10(-12);
    let mut pts = Vec::new();
    for alpha in [0, 1, 4] {
        for beta in [1, 2] {
            for d in [3, 6, 9] {
                pts.push((alpha, beta, d));
            }
        }
    }
    let devs = pts
        .par_iter()
        .map(|&(alpha, beta, d)| {
            let mu = constrained_density(&prec.real(alpha), &prec.real(beta), &prec.from_ratio(d, 10))?;
            Ok((mu.mass(&tol)? - 1u32).abs().to_f64())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(record(
        "density_normalization",
        "Wachter and constrained equilibrium densities have unit mass",
        pts.len(),
        devs.into_iter().fold(0.0, f64::max),
        1e-10,
        start,
    ))
}

/// Runs every verification suite. Failures are report entries, not errors;
/// an `Err` means a suite could not be evaluated at all.
pub fn cmd_verify(cfg: &RunConfig, fault: Option<Fault>) -> Result<VerificationReport> {
    cfg.validate()?;
    let prec = cfg.precision();
    let mut checks = duality_checks(fault)?;
    checks.extend(schur_identity_checks(cfg.params.seed, prec)?);
    checks.extend(lemma_checks(prec)?);
    checks.push(mfrak_check(prec)?);
    checks.push(normalization_check(prec)?);
    Ok(VerificationReport::new(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Command, OutputFormat, Params};

    #[test]
    fn duality_grid_size() {
        assert_eq!(duality_grid().len(), 3 * 15 * 6);
    }

    #[test]
    fn fault_is_caught_by_the_targeted_check_only() {
        let clean = duality_checks(None).unwrap();
        assert!(clean.iter().all(|c| c.status == CheckStatus::Pass));
        let bad = duality_checks(Some(Fault::PerturbTueConstant)).unwrap();
        assert_eq!(bad[0].status, CheckStatus::Pass);
        assert_eq!(bad[1].status, CheckStatus::Fail);
        assert!(!VerificationReport::new(bad).passed);
    }

    #[test]
    fn mfrak_and_mass_pass() {
        let p = Precision::digits(30);
        assert_eq!(mfrak_check(p).unwrap().status, CheckStatus::Pass);
        assert_eq!(normalization_check(p).unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn report_round_trips() {
        let cfg = RunConfig::new(Command::Verify, Params { seed: 5, ..Params::default() });
        let report = VerificationReport::new(duality_checks(None).unwrap());
        let s = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, report);
        let t = report.to_table(&cfg).to_string(OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&t).unwrap();
        assert_eq!(v["meta"]["passed"], true);
        assert_eq!(v["rows"][0]["status"], "pass");
    }
}
