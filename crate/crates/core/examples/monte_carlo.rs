//! Seeded Monte Carlo of G_{N,N}: the law of large numbers and the exact CDF at
//! a small size.

use ldplpp::lpp::{monte_carlo, omega, prob_leq_schur, LppParams, McConfig};
use ldplpp::numerics::Precision;
use rug::Rational;

fn main() -> ldplpp::Result<()> {
    let prec = Precision::digits(20);
    let w = omega(&prec.real(1), &prec.from_ratio(1, 2).sqrt()).to_f64();
    let cfg = McConfig { q2: 0.5, n: 100, m: 100, trials: 2000, seed: 42, scale: 100.0, bins: 10 };
    let s = monte_carlo(&cfg)?;
    println!("mean G/N = {:.4} (omega = {w:.4}), std {:.4}", s.mean_scaled, s.std_scaled);
    for (lo, hi, c) in &s.histogram {
        println!("[{lo:>7.3}, {hi:>7.3})  {}", "#".repeat((*c / 10) as usize));
    }

    let small = McConfig { q2: 0.5, n: 3, m: 3, trials: 100_000, seed: 1, scale: 3.0, bins: 0 };
    let s = monte_carlo(&small)?;
    let exact = prob_leq_schur(&LppParams::exact(Rational::from((1, 2)), 3, 3, 3)?, prec)?;
    println!("P(G_3,3 <= 3): empirical {:.5}, exact {} = {:.5}", s.empirical_cdf(3), exact.value, exact.value.to_f64());
    Ok(())
}
