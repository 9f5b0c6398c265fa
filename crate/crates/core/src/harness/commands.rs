use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{fmt_real, RunConfig, Table};
use crate::asymptotics::{lower_tail, upper_tail, Expansion};
use crate::ensembles::{jue_cdf_max, jue_cdf_max_exact, lpp_tue_constant, tue_char_moment, JueParams};
use crate::error::{Error, Result};
use crate::lpp::{lpp_prob_leq, monte_carlo, omega, sigma, LppParams, McConfig, Route};
use crate::numerics::{ln_rational, ExactValue, Method, Precision, Real, Value};

/// Digits used for the exact side of convergence tables.
pub fn autoscaled_digits(big_n: u32, floor: u32) -> u32 {
    floor.max(64).max(8 * big_n)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactRow {
    pub route: String,
    pub method: Method,
    /// p/q when the route is exact, otherwise a decimal.
    pub value: String,
    pub decimal: String,
    pub exact: bool,
}

fn exact_row(route: &str, v: ExactValue, digits: u32) -> ExactRow {
    let decimal = fmt_real(&v.value.to_real(Precision::digits(digits)), digits);
    ExactRow { route: route.to_string(), method: v.method, value: v.value.to_string(), decimal, exact: v.certified_exact }
}

/// P(G_{n,m} <= ell) by each requested route.
pub fn cmd_exact(cfg: &RunConfig) -> Result<Table<ExactRow>> {
    cfg.validate()?;
    let prec = cfg.precision();
    let p = &cfg.params;
    let lp = LppParams::new(cfg.q2()?, p.n.unwrap(), p.m.unwrap(), p.ell.unwrap())?;
    let mut rows = Vec::new();
    for name in cfg.route_names()? {
        let v = match name {
            "schur" => lpp_prob_leq(&lp, Route::Schur, prec)?,
            "jue" => lpp_prob_leq(&lp, Route::Jue, prec)?,
            "meixner" => lpp_prob_leq(&lp, Route::Meixner { tail_digits: cfg.precision_digits }, prec)?,
            _ => tue_route(&lp)?,
        };
        rows.push(exact_row(name, v, cfg.precision_digits));
    }
    Ok(Table { meta: cfg.meta(), rows })
}

/// c_{ell,n,m} (1-q^2)^(nm) E|det(T - q)|^(2m).
fn tue_route(lp: &LppParams) -> Result<ExactValue> {
    let q2 = lp.q2.as_exact().ok_or_else(|| Error::domain("the TUE route needs q^2 as p/q"))?;
    let moment = tue_char_moment(lp.ell, lp.n, lp.m, q2)?;
    let c = lpp_tue_constant(lp.ell, lp.n, lp.m)?;
    let w = rug::ops::Pow::pow(Rational::from(1 - q2.clone()), lp.n * lp.m);
    let m = moment.value.as_exact().expect("moment is exact").clone();
    Ok(ExactValue::exact(c * w * m, Method::TueMoment))
}

/// log P(G_{n,m} <= ell) through the m-point Jacobi determinant, plus a
/// warning when a float q^2 gives a value that moves under extra precision.
fn jue_log_cdf(q2: &Value, n: u32, m: u32, ell: u32, digits: u32) -> Result<(Real, Real, String)> {
    let prec = Precision::digits(digits);
    match q2 {
        Value::Exact(q2) => {
            let p = jue_cdf_max_exact(m as usize, n - m, ell, &Rational::from(1 - q2.clone()))?;
            let tail = Rational::from(1 - &p);
            Ok((ln_rational(&p, prec), ln_rational(&tail, prec), String::new()))
        }
        Value::Approx(q2) => {
            let eval = |d: u32| -> Result<(Real, Real)> {
                let pr = Precision::digits(d);
                let x = Value::Approx(Float::with_val(pr.bits(), 1u32 - Float::with_val(pr.bits(), q2)));
                let p = jue_cdf_max(&JueParams::integer(m as usize, n - m, ell), &x, pr)?.value.to_real(pr);
                let tail = Float::with_val(pr.bits(), 1u32 - &p);
                Ok((p.ln(), tail.ln()))
            };
            let (a, ta) = eval(digits)?;
            let (b, tb) = eval(digits + digits / 4)?;
            let tol = prec.pow10(-(digits as i32) / 2);
            let moved = (Float::with_val(prec.bits(), &a - &b)).abs() > tol
                || (Float::with_val(prec.bits(), &ta - &tb)).abs() > tol;
            let warning = if moved || !ta.is_finite() { "precision insufficient".to_string() } else { String::new() };
            Ok((a, ta, warning))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub n_big: u32,
    pub n: u32,
    pub m: u32,
    pub ell: u32,
    pub delta_effective: f64,
    pub precision_digits: u32,
    pub exact_log_p: String,
    pub asymptotic: String,
    pub residual: f64,
    pub normalized_residual: f64,
    pub warning: String,
}

fn residual(exact: &Real, approx: &Real) -> Real {
    Float::with_val(exact.prec().max(approx.prec()), exact - approx)
}

fn ratio_to_log(r: f64, big_n: u32) -> f64 {
    r * big_n as f64 / (big_n as f64).ln()
}

/// Exact log P(G <= floor(delta N)) against the lower-tail expansion, one row per N.
pub fn cmd_converge(cfg: &RunConfig) -> Result<Table<ConvergeRow>> {
    cfg.validate()?;
    let exp = lower_tail(&cfg.q()?, &cfg.gamma()?, &cfg.delta()?, &cfg.nshift())?;
    let q2 = cfg.q2()?;
    let rows = cfg
        .params
        .n_list
        .par_iter()
        .map(|&nn| {
            let (n, m) = cfg.grid_size(nn)?;
            let ell = cfg.threshold(nn)?;
            let digits = autoscaled_digits(nn, cfg.precision_digits);
            let (exact, _, warning) = jue_log_cdf(&q2, n, m, ell, digits)?;
            let asym = exp.evaluate(&Precision::digits(digits).real(nn));
            let r = residual(&exact, &asym).to_f64();
            Ok(ConvergeRow {
                n_big: nn,
                n,
                m,
                ell,
                delta_effective: ell as f64 / nn as f64,
                precision_digits: digits,
                exact_log_p: fmt_real(&exact, cfg.precision_digits),
                asymptotic: fmt_real(&asym, cfg.precision_digits),
                residual: r,
                normalized_residual: ratio_to_log(r, nn),
                warning,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = cfg.meta();
    insert_expansion(&mut meta.extra, &exp);
    Ok(Table { meta, rows })
}

fn insert_expansion(extra: &mut serde_json::Map<String, serde_json::Value>, exp: &Expansion) {
    let [c2, c1, clog, c0] = exp.coefficients_f64();
    extra.insert("regime".into(), serde_json::to_value(exp.regime).unwrap());
    extra.insert("remainder".into(), exp.remainder_note.into());
    for (k, v) in [("c2", c2), ("c1", c1), ("clog", clog), ("c0", c0)] {
        extra.insert(k.into(), v.into());
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UptailRow {
    pub n_big: u32,
    pub n: u32,
    pub m: u32,
    pub ell: u32,
    pub delta_effective: f64,
    pub precision_digits: u32,
    pub exact_log_p: String,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    /// U3 shifted by 2 dPhi/ddelta, the constant that matches the inclusive event G >= ell.
    pub u3_at_least: f64,
    pub asymptotic: String,
    pub residual: f64,
    pub residual_at_least: f64,
    pub warning: String,
}

/// Exact log P(G >= floor(delta N)) against U1 N - log N + U3, one row per N.
pub fn cmd_uptail(cfg: &RunConfig) -> Result<Table<UptailRow>> {
    cfg.validate()?;
    let ut = upper_tail(&cfg.q()?, &cfg.gamma()?, &cfg.delta()?, &cfg.nshift())?;
    let q2 = cfg.q2()?;
    let [_, u1, u2, u3] = ut.expansion.coefficients_f64();
    let rows = cfg
        .params
        .n_list
        .par_iter()
        .map(|&nn| {
            let (n, m) = cfg.grid_size(nn)?;
            let ell = cfg.threshold(nn)?;
            if ell == 0 {
                return Err(Error::domain(format!("delta N rounds to 0 at N = {nn}")));
            }
            let digits = autoscaled_digits(nn, cfg.precision_digits);
            let (_, exact, warning) = jue_log_cdf(&q2, n, m, ell - 1, digits)?;
            let prec = Precision::digits(digits);
            let asym = ut.expansion.evaluate(&prec.real(nn));
            let shift = Float::with_val(prec.bits(), &ut.c0_at_least - &ut.expansion.c0);
            let asym_geq = Float::with_val(prec.bits(), &asym + &shift);
            Ok(UptailRow {
                n_big: nn,
                n,
                m,
                ell,
                delta_effective: ell as f64 / nn as f64,
                precision_digits: digits,
                exact_log_p: fmt_real(&exact, cfg.precision_digits),
                u1,
                u2,
                u3,
                u3_at_least: ut.c0_at_least.to_f64(),
                asymptotic: fmt_real(&asym, cfg.precision_digits),
                residual: residual(&exact, &asym).to_f64(),
                residual_at_least: residual(&exact, &asym_geq).to_f64(),
                warning,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = cfg.meta();
    meta.extra.insert("phi".into(), ut.phi.to_f64().into());
    meta.extra.insert("edge_product".into(), ut.edge_product.to_f64().into());
    Ok(Table { meta, rows })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymptoteRow {
    pub n_big: u32,
    pub regime: String,
    pub c2: String,
    pub c1: String,
    pub clog: String,
    pub c0: String,
    pub value: String,
    pub remainder: String,
}

/// The lower- or upper-tail expansion, whichever side of omega delta is on,
/// evaluated at each N of the list.
pub fn cmd_asymptote(cfg: &RunConfig) -> Result<Table<AsymptoteRow>> {
    cfg.validate()?;
    let (q, gamma, delta) = (cfg.q()?, cfg.gamma()?, cfg.delta()?);
    let om = omega(&gamma, &q);
    let exp = if delta < om {
        lower_tail(&q, &gamma, &delta, &cfg.nshift())?
    } else {
        upper_tail(&q, &gamma, &delta, &cfg.nshift())?.expansion
    };
    let d = cfg.precision_digits;
    let regime = serde_json::to_value(exp.regime)?.as_str().unwrap_or_default().to_string();
    let rows = cfg
        .params
        .n_list
        .iter()
        .map(|&nn| AsymptoteRow {
            n_big: nn,
            regime: regime.clone(),
            c2: fmt_real(&exp.c2, d),
            c1: fmt_real(&exp.c1, d),
            clog: fmt_real(&exp.clog, d),
            c0: fmt_real(&exp.c0, d),
            value: fmt_real(&exp.evaluate(&cfg.precision().real(nn)), d),
            remainder: exp.remainder_note.to_string(),
        })
        .collect();
    let mut meta = cfg.meta();
    meta.extra.insert("omega".into(), om.to_f64().into());
    Ok(Table { meta, rows })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistogramRow {
    pub left: f64,
    pub right: f64,
    pub count: u64,
    pub density: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleRow {
    pub g: u64,
    pub count: u64,
}

pub enum SimulationOutput {
    Histogram(Table<HistogramRow>),
    Samples(Table<SampleRow>),
}

impl SimulationOutput {
    pub fn emit(&self, cfg: &RunConfig) -> Result<()> {
        match self {
            SimulationOutput::Histogram(t) => t.emit(cfg),
            SimulationOutput::Samples(t) => t.emit(cfg),
        }
    }

    pub fn meta(&self) -> &super::Meta {
        match self {
            SimulationOutput::Histogram(t) => &t.meta,
            SimulationOutput::Samples(t) => &t.meta,
        }
    }
}

/// Monte Carlo last passage times; the scaled fluctuation histogram, or counts
/// of each value of G with `raw`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulationOutput> {
    cfg.validate()?;
    let (n, m) = cfg.simulation_sides()?;
    let q2 = cfg.q2()?.to_f64();
    let mc = McConfig {
        q2,
        n: n as usize,
        m: m as usize,
        trials: cfg.params.trials.unwrap(),
        seed: cfg.params.seed,
        scale: m as f64,
        bins: if cfg.params.raw { 0 } else { cfg.params.bins.max(1) },
    };
    let s = monte_carlo(&mc)?;
    let prec = Precision::digits(20);
    let g = prec.from_f64(n as f64 / m as f64);
    let q = prec.from_f64(q2).sqrt();
    let mut meta = cfg.meta();
    for (k, v) in [
        ("n", n as f64),
        ("m", m as f64),
        ("trials", mc.trials as f64),
        ("mean_scaled", s.mean_scaled),
        ("std_scaled", s.std_scaled),
        ("omega", omega(&g, &q).to_f64()),
        ("sigma", sigma(&g, &q).to_f64()),
        ("min", s.min as f64),
        ("max", s.max as f64),
    ] {
        meta.extra.insert(k.into(), v.into());
    }
    if cfg.params.raw {
        let rows = s
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(g, &count)| SampleRow { g: g as u64, count })
            .collect();
        return Ok(SimulationOutput::Samples(Table { meta, rows }));
    }
    let rows = s
        .histogram
        .iter()
        .map(|&(left, right, count)| HistogramRow {
            left,
            right,
            count,
            density: count as f64 / (mc.trials as f64 * (right - left)),
        })
        .collect();
    Ok(SimulationOutput::Histogram(Table { meta, rows }))
}
