//! Geometric last passage percolation on the n x m grid: sampling, the
//! dynamic program, three exact routes to P(G <= ell), and Monte Carlo tails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{partitions_in_box, schur_at_ones};
use crate::ensembles::{jue_cdf_max, meixner_cdf_max, JueParams};
use crate::error::{Error, Result};
use crate::numerics::{ExactValue, Method, Precision, Real, Value};

/// Largest box the Schur route will enumerate.
pub const SCHUR_CAP: u32 = 12;

/// Grid shape, threshold and weight parameter. Stored with n >= m; the law of
/// G is symmetric in the two sides.
#[derive(Clone, Debug)]
pub struct LppParams {
    pub q2: Value,
    pub n: u32,
    pub m: u32,
    pub ell: u32,
}

impl LppParams {
    pub fn new(q2: Value, n: u32, m: u32, ell: u32) -> Result<Self> {
        let q = q2.to_f64();
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("q^2 must lie in (0, 1), got {q2}")));
        }
        if n == 0 || m == 0 {
            return Err(Error::domain("grid sides must be positive"));
        }
        let (n, m) = if n >= m { (n, m) } else { (m, n) };
        Ok(LppParams { q2, n, m, ell })
    }

    pub fn exact(q2: Rational, n: u32, m: u32, ell: u32) -> Result<Self> {
        Self::new(Value::Exact(q2), n, m, ell)
    }

    // exact binary expansion when q2 was given as a float
    fn q2_rational(&self) -> Rational {
        match &self.q2 {
            Value::Exact(r) => r.clone(),
            Value::Approx(x) => x.to_rational().expect("finite q2"),
        }
    }
}

/// Route selector for `lpp_prob_leq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Schur,
    Jue,
    Meixner { tail_digits: u32 },
}

/// Weights of one sample, row-major with n rows and m columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGrid {
    pub n: usize,
    pub m: usize,
    pub data: Vec<u64>,
}

impl WeightGrid {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::domain("weight grid must be a non-empty rectangle"));
        }
        Ok(WeightGrid { n, m, data: rows.into_iter().flatten().collect() })
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.m + j]
    }
}

/// Geometric variate with P(k) = (1 - q2) q2^k, by inversion.
#[inline]
pub fn sample_geometric<R: Rng + ?Sized>(rng: &mut R, ln_q2: f64) -> u64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    (u.ln() / ln_q2).floor() as u64
}

/// Inversion sampler that compares u against a table of q2^k instead of taking
/// a logarithm; same variates as `sample_geometric` up to rounding at the
/// thresholds. Falls back to the logarithm when the mean is large.
#[derive(Clone, Debug)]
pub struct GeometricSampler {
    ln_q2: f64,
    powers: Vec<f64>,
}

impl GeometricSampler {
    pub fn new(q2: f64) -> Self {
        let mut powers = Vec::new();
        if q2 <= 0.9 {
            let mut p = q2;
            while p >= f64::EPSILON / 2.0 {
                powers.push(p);
                p *= q2;
            }
        }
        GeometricSampler { ln_q2: q2.ln(), powers }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.powers.is_empty() {
            return sample_geometric(rng, self.ln_q2);
        }
        let u: f64 = 1.0 - rng.gen::<f64>();
        // u >= 2^-53 > last entry, so the scan stops inside the table
        self.powers.iter().take_while(|&&p| u <= p).count() as u64
    }
}

pub fn sample_weights(q2: f64, n: usize, m: usize, seed: u64) -> Result<WeightGrid> {
    if !(q2 > 0.0 && q2 < 1.0) {
        return Err(Error::domain("q^2 must lie in (0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lq = q2.ln();
    Ok(WeightGrid { n, m, data: (0..n * m).map(|_| sample_geometric(&mut rng, lq)).collect() })
}

/// Passage time with a maximizing path from (1,1) to (n,m), 1-based cells.
/// Ties go to the predecessor below, i.e. the path prefers the vertical step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LastPassage {
    pub time: u64,
    pub path: Vec<(usize, usize)>,
}

pub fn last_passage(grid: &WeightGrid) -> LastPassage {
    let (n, m) = (grid.n, grid.m);
    let mut g = vec![0u64; n * m];
    for i in 0..n {
        for j in 0..m {
            let left = if i > 0 { g[(i - 1) * m + j] } else { 0 };
            let below = if j > 0 { g[i * m + j - 1] } else { 0 };
            g[i * m + j] = grid.get(i, j) + left.max(below);
        }
    }
    let mut path = vec![(n, m)];
    let (mut i, mut j) = (n - 1, m - 1);
    while i > 0 || j > 0 {
        if i == 0 || (j > 0 && g[i * m + j - 1] >= g[(i - 1) * m + j]) {
            j -= 1;
        } else {
            i -= 1;
        }
        path.push((i + 1, j + 1));
    }
    path.reverse();
    LastPassage { time: g[n * m - 1], path }
}

/// Passage time only, one row of storage.
pub fn last_passage_time(grid: &WeightGrid) -> u64 {
    let mut row = vec![0u64; grid.m];
    for i in 0..grid.n {
        let mut below = 0u64;
        for (j, cell) in row.iter_mut().enumerate() {
            below = grid.get(i, j) + below.max(*cell);
            *cell = below;
        }
    }
    row[grid.m - 1]
}

fn simulate_time<R: Rng>(rng: &mut R, geo: &GeometricSampler, row: &mut [u64], n: usize) -> u64 {
    row.iter_mut().for_each(|c| *c = 0);
    for _ in 0..n {
        let mut below = 0u64;
        for cell in row.iter_mut() {
            below = geo.sample(rng) + below.max(*cell);
            *cell = below;
        }
    }
    row[row.len() - 1]
}

/// (1 - q^2)^(nm) sum_{lambda in m x ell box} s_lambda(1_n) s_lambda(1_m) q^(2|lambda|).
pub fn prob_leq_schur(p: &LppParams, prec: Precision) -> Result<ExactValue> {
    if p.m > SCHUR_CAP || p.ell > SCHUR_CAP {
        return Err(Error::Capacity(format!("Schur route is capped at a {SCHUR_CAP}x{SCHUR_CAP} box")));
    }
    let mut coeffs = vec![rug::Integer::new(); (p.m * p.ell) as usize + 1];
    for lam in partitions_in_box(p.m as usize, p.ell) {
        coeffs[lam.size() as usize] += schur_at_ones(&lam, p.n as usize) * schur_at_ones(&lam, p.m as usize);
    }
    match &p.q2 {
        Value::Exact(q2) => {
            let sum = coeffs.iter().rev().fold(Rational::new(), |acc, c| acc * q2 + c);
            let w = Rational::from(1 - q2.clone());
            let pre = rug::ops::Pow::pow(w, p.n * p.m);
            Ok(ExactValue::exact(pre * sum, Method::SchurSum))
        }
        Value::Approx(x) => {
            let q2 = Float::with_val(prec.bits(), x);
            let sum = coeffs.iter().rev().fold(prec.real(0), |acc, c| acc * &q2 + c);
            let w = Float::with_val(prec.bits(), 1u32 - &q2);
            let pre = rug::ops::Pow::pow(w, p.n * p.m);
            Ok(ExactValue::approx(pre * sum, Method::SchurSum))
        }
    }
}

/// P(x_max <= 1 - q^2) for the m-point Jacobi ensemble with exponents (n - m, ell).
pub fn prob_leq_jue(p: &LppParams, prec: Precision) -> Result<ExactValue> {
    let jp = JueParams::integer(p.m as usize, p.n - p.m, p.ell);
    let x = match &p.q2 {
        Value::Exact(q2) => Value::Exact(Rational::from(1 - q2.clone())),
        Value::Approx(q2) => Value::Approx(Float::with_val(prec.bits(), 1u32 - q2)),
    };
    jue_cdf_max(&jp, &x, prec)
}

pub fn prob_leq_meixner(p: &LppParams, tail_tol: f64) -> Result<ExactValue> {
    meixner_cdf_max(p.n as usize, p.m as usize, p.ell, &p.q2_rational(), tail_tol)
}

pub fn lpp_prob_leq(p: &LppParams, route: Route, prec: Precision) -> Result<ExactValue> {
    match route {
        Route::Schur => prob_leq_schur(p, prec),
        Route::Jue => prob_leq_jue(p, prec),
        Route::Meixner { tail_digits } => prob_leq_meixner(p, 10f64.powi(-(tail_digits as i32))),
    }
}

/// Law of large numbers constant: G_{gamma N, N} / N -> omega(gamma, q).
pub fn omega(gamma: &Real, q: &Real) -> Real {
    let b = gamma.prec().max(q.prec());
    let s = Float::with_val(b, gamma.sqrt_ref());
    let num = (Float::with_val(b, q * &s) + 1u32).square();
    let den = Float::with_val(b, 1u32 - Float::with_val(b, q * q));
    num / den - 1u32
}

/// Fluctuation scale: (G - omega N) / (sigma N^(1/3)) tends to Tracy-Widom GUE.
pub fn sigma(gamma: &Real, q: &Real) -> Real {
    let b = gamma.prec().max(q.prec());
    let sg = Float::with_val(b, gamma.sqrt_ref());
    let third = Float::with_val(b, 1) / 3u32;
    let two_thirds = Float::with_val(b, &third * 2u32);
    let a = rug::ops::Pow::pow(Float::with_val(b, q), third.clone());
    let g = rug::ops::Pow::pow(Float::with_val(b, gamma), Float::with_val(b, -&third) / 2u32);
    let c = rug::ops::Pow::pow(Float::with_val(b, &sg + q), two_thirds.clone());
    let d = rug::ops::Pow::pow(Float::with_val(b, q * &sg) + 1u32, two_thirds);
    a * g * c * d / (1u32 - Float::with_val(b, q * q))
}

/// Settings for a Monte Carlo run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McConfig {
    pub q2: f64,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    /// Divisor used for the reported mean of G / scale.
    pub scale: f64,
    pub bins: usize,
}

/// Summary of a Monte Carlo run; trial i uses stream i of a ChaCha8 generator
/// seeded with `seed`, so the output does not depend on the thread count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McSummary {
    pub config: McConfig,
    pub mean_scaled: f64,
    pub std_scaled: f64,
    pub min: u64,
    pub max: u64,
    /// counts[k] = number of trials with G = k, up to `max`.
    pub counts: Vec<u64>,
    /// (left edge, right edge, count) of the scaled fluctuation (G - omega N)/(sigma N^(1/3)).
    pub histogram: Vec<(f64, f64, u64)>,
}

impl McSummary {
    pub fn empirical_cdf(&self, ell: u64) -> f64 {
        let below: u64 = self.counts.iter().take(ell as usize + 1).sum();
        below as f64 / self.config.trials as f64
    }

    pub fn freq_geq(&self, ell: u64) -> f64 {
        1.0 - if ell == 0 { 0.0 } else { self.empirical_cdf(ell - 1) }
    }
}

pub fn monte_carlo(cfg: &McConfig) -> Result<McSummary> {
    if !(cfg.q2 > 0.0 && cfg.q2 < 1.0) || cfg.n == 0 || cfg.m == 0 || cfg.trials == 0 {
        return Err(Error::domain("Monte Carlo needs 0 < q2 < 1, positive sides and trials"));
    }
    let geo = GeometricSampler::new(cfg.q2);
    let times: Vec<u64> = (0..cfg.trials as u64)
        .into_par_iter()
        .map_init(
            || vec![0u64; cfg.m],
            |row, t| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(t);
                simulate_time(&mut rng, &geo, row, cfg.n)
            },
        )
        .collect();
    let min = *times.iter().min().unwrap();
    let max = *times.iter().max().unwrap();
    let mut counts = vec![0u64; max as usize + 1];
    for &t in &times {
        counts[t as usize] += 1;
    }
    let k = cfg.trials as f64;
    let mean = times.iter().map(|&t| t as f64 / cfg.scale).sum::<f64>() / k;
    let var = times.iter().map(|&t| (t as f64 / cfg.scale - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    let histogram = fluctuation_histogram(cfg, &times);
    Ok(McSummary { config: cfg.clone(), mean_scaled: mean, std_scaled: var.sqrt(), min, max, counts, histogram })
}

fn fluctuation_histogram(cfg: &McConfig, times: &[u64]) -> Vec<(f64, f64, u64)> {
    if cfg.bins == 0 {
        return Vec::new();
    }
    let nn = cfg.m as f64;
    let gamma = cfg.n as f64 / nn;
    let p = Precision::digits(20);
    let q = p.from_f64(cfg.q2).sqrt();
    let g = p.from_f64(gamma);
    let w = omega(&g, &q).to_f64();
    let s = sigma(&g, &q).to_f64();
    let z: Vec<f64> = times.iter().map(|&t| (t as f64 - w * nn) / (s * nn.cbrt())).collect();
    let lo = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1e-9;
    let width = (hi - lo) / cfg.bins as f64;
    let mut h = vec![0u64; cfg.bins];
    for v in z {
        let b = (((v - lo) / width) as usize).min(cfg.bins - 1);
        h[b] += 1;
    }
    h.into_iter().enumerate().map(|(i, c)| (lo + i as f64 * width, lo + (i + 1) as f64 * width, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(rows: &[&[u64]]) -> WeightGrid {
        WeightGrid::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    // all up-right paths, enumerated directly
    fn brute_force(g: &WeightGrid) -> u64 {
        fn rec(g: &WeightGrid, i: usize, j: usize) -> u64 {
            let here = g.get(i, j);
            let mut best = 0;
            if i + 1 < g.n {
                best = best.max(rec(g, i + 1, j));
            }
            if j + 1 < g.m {
                best = best.max(rec(g, i, j + 1));
            }
            here + best
        }
        rec(g, 0, 0)
    }

    #[test]
    fn two_by_two_example() {
        let g = grid(&[&[1, 2], &[3, 4]]);
        let lp = last_passage(&g);
        assert_eq!(lp.time, 8);
        assert_eq!(lp.path, vec![(1, 1), (2, 1), (2, 2)]);
        assert_eq!(last_passage_time(&g), 8);
    }

    #[test]
    fn tie_prefers_vertical_step() {
        // at (2,2) both predecessors tie; the vertical one is (2,1)
        let g = grid(&[&[1, 1], &[1, 1]]);
        assert_eq!(last_passage(&g).path, vec![(1, 1), (2, 1), (2, 2)]);
    }

    #[test]
    fn single_cell_probability() {
        // G_{1,1} <= ell has probability 1 - q^(2(ell+1))
        let q2 = Rational::from((1, 3));
        for ell in 0..4 {
            let p = LppParams::exact(q2.clone(), 1, 1, ell).unwrap();
            let want: Rational = 1 - Rational::from(rug::ops::Pow::pow(q2.clone(), ell + 1u32));
            for r in [Route::Schur, Route::Jue] {
                assert_eq!(lpp_prob_leq(&p, r, Precision::default()).unwrap().value, Value::Exact(want.clone()));
            }
        }
    }

    #[test]
    fn two_cells_in_a_row() {
        // G_{2,1} is a sum of two geometrics: P(G <= ell) = 1 - q^(2(ell+1)) (1 + (ell+1)(1-q^2))
        let q2 = Rational::from((2, 5));
        for ell in 0..5u32 {
            let p = LppParams::exact(q2.clone(), 2, 1, ell).unwrap();
            let tail: Rational = Rational::from(rug::ops::Pow::pow(q2.clone(), ell + 1))
                * (1 + Rational::from(ell + 1) * Rational::from(1 - q2.clone()));
            let want: Rational = 1 - tail;
            for r in [Route::Schur, Route::Jue] {
                assert_eq!(lpp_prob_leq(&p, r, Precision::default()).unwrap().value, Value::Exact(want.clone()));
            }
        }
    }

    #[test]
    fn meixner_agrees_with_schur() {
        let q2 = Rational::from((1, 2));
        let p = LppParams::exact(q2, 3, 2, 3).unwrap();
        let s = prob_leq_schur(&p, Precision::default()).unwrap().value.to_f64();
        let mx = prob_leq_meixner(&p, 1e-20).unwrap().value.to_f64();
        assert!((s - mx).abs() < 1e-14);
    }

    #[test]
    fn float_q2_uses_float_arithmetic() {
        let p = LppParams::new(Value::Approx(Precision::default().from_f64(0.5)), 3, 3, 2).unwrap();
        let s = prob_leq_schur(&p, Precision::default()).unwrap();
        assert!(!s.certified_exact);
        let e = prob_leq_schur(&LppParams::exact(Rational::from((1, 2)), 3, 3, 2).unwrap(), Precision::default()).unwrap();
        assert!((s.value.to_f64() - e.value.to_f64()).abs() < 1e-15);
    }

    #[test]
    fn schur_cap_is_enforced() {
        let p = LppParams::exact(Rational::from((1, 2)), 20, 13, 3).unwrap();
        assert!(matches!(prob_leq_schur(&p, Precision::default()), Err(Error::Capacity(_))));
    }

    #[test]
    fn omega_and_sigma_values() {
        let p = Precision::default();
        let q = p.from_ratio(1, 2).sqrt();
        // omega(1, q) = 2q/(1-q)
        let w = omega(&p.real(1), &q);
        let want = Float::with_val(p.bits(), &q * 2u32) / Float::with_val(p.bits(), 1u32 - &q);
        assert!((w - want).abs() < p.pow10(-55));
        // sigma(1, q) = q^(1/3) (1+q)^(4/3) / (1-q^2)
        let s = sigma(&p.real(1), &q);
        let third = p.from_ratio(1, 3);
        let want = rug::ops::Pow::pow(q.clone(), third.clone())
            * rug::ops::Pow::pow(Float::with_val(p.bits(), &q + 1u32), third * 4u32)
            * 2u32;
        assert!((s - want).abs() < p.pow10(-55));
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let cfg = McConfig { q2: 0.5, n: 6, m: 4, trials: 500, seed: 11, scale: 4.0, bins: 10 };
        let a = monte_carlo(&cfg).unwrap();
        let b = monte_carlo(&cfg).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.counts.iter().sum::<u64>(), 500);
        assert_eq!(a.histogram.iter().map(|h| h.2).sum::<u64>(), 500);
    }

    #[test]
    fn geometric_sampler_mean() {
        // mean q2/(1-q2) = 1 at q2 = 1/2
        let g = sample_weights(0.5, 200, 200, 3).unwrap();
        let mean = g.data.iter().sum::<u64>() as f64 / g.data.len() as f64;
        assert!((mean - 1.0).abs() < 0.02);
    }

    #[test]
    fn table_sampler_matches_inversion() {
        for q2 in [0.1, 0.5, 0.75, 0.95] {
            let geo = GeometricSampler::new(q2);
            let mut a = ChaCha8Rng::seed_from_u64(11);
            let mut b = ChaCha8Rng::seed_from_u64(11);
            let same = (0..20_000).filter(|_| geo.sample(&mut a) == sample_geometric(&mut b, q2.ln())).count();
            assert!(same >= 19_990, "q2={q2}: {same}");
        }
    }

    proptest! {
        #[test]
        fn dp_matches_brute_force(n in 1usize..5, m in 1usize..5, seed in any::<u64>()) {
            let g = sample_weights(0.6, n, m, seed).unwrap();
            let lp = last_passage(&g);
            prop_assert_eq!(lp.time, brute_force(&g));
            prop_assert_eq!(lp.time, last_passage_time(&g));
            let on_path: u64 = lp.path.iter().map(|&(i, j)| g.get(i - 1, j - 1)).sum();
            prop_assert_eq!(on_path, lp.time);
            prop_assert_eq!(lp.path.len(), n + m - 1);
        }

        #[test]
        fn passage_time_is_monotone(n in 1usize..6, m in 1usize..6, seed in any::<u64>(), bump in 1u64..5) {
            let g = sample_weights(0.5, n, m, seed).unwrap();
            let mut h = g.clone();
            h.data[(seed as usize) % (n * m)] += bump;
            prop_assert!(last_passage_time(&h) >= last_passage_time(&g));
        }

        #[test]
        fn routes_agree_and_cdf_increases(n in 1u32..5, m in 1u32..5, ell in 0u32..5, k in 1i64..4) {
            let q2 = Rational::from((k, 4));
            let p = LppParams::exact(q2.clone(), n, m, ell).unwrap();
            let s = prob_leq_schur(&p, Precision::default()).unwrap().value;
            let j = prob_leq_jue(&p, Precision::default()).unwrap().value;
            prop_assert_eq!(&s, &j);
            let next = prob_leq_schur(&LppParams::exact(q2, n, m, ell + 1).unwrap(), Precision::default()).unwrap().value;
            prop_assert!(next.as_exact().unwrap() > s.as_exact().unwrap());
            prop_assert!(*next.as_exact().unwrap() < 1);
        }
    }
}
