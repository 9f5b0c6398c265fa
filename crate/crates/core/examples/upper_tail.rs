//! Upper-tail coefficients at (q^2, gamma, delta) = (1/2, 1, 6) and the exact
//! log P(G_{N,N} >= 6N) they approximate.

use ldplpp::asymptotics::upper_tail;
use ldplpp::ensembles::jue_cdf_max_exact;
use ldplpp::numerics::{ln_rational, Precision};
use rug::Rational;

fn main() -> ldplpp::Result<()> {
    let prec = Precision::digits(40);
    let q = prec.from_ratio(1, 2).sqrt();
    let ut = upper_tail(&q, &prec.real(1), &prec.real(6), &prec.real(0))?;
    let [_, u1, u2, u3] = ut.expansion.coefficients_f64();
    println!("U1 = {u1:.12}  U2 = {u2}  U3 = {u3:.12}  (inclusive threshold: {:.12})", ut.c0_at_least.to_f64());
    for big_n in [4u32, 8, 16, 32] {
        let below = jue_cdf_max_exact(big_n as usize, 0, 6 * big_n - 1, &Rational::from((1, 2)))?;
        let exact = ln_rational(&Rational::from(1 - below), Precision::digits(64.max(8 * big_n)));
        let asym = ut.expansion.evaluate(&prec.real(big_n)).to_f64();
        println!("N = {big_n:>3}  exact {:>12.6}  asymptotic {asym:>12.6}  residual {:>9.5}", exact.to_f64(), exact.to_f64() - asym);
    }
    Ok(())
}
