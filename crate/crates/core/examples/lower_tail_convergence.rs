//! Exact log P(G_{N,N} <= N) against the four-term lower-tail expansion.

use ldplpp::asymptotics::lower_tail;
use ldplpp::ensembles::jue_cdf_max_exact;
use ldplpp::numerics::{ln_rational, Precision};
use rug::{Float, Rational};

fn main() -> ldplpp::Result<()> {
    let prec = Precision::digits(40);
    let q = prec.from_ratio(1, 2).sqrt();
    let exp = lower_tail(&q, &prec.real(1), &prec.real(1), &prec.real(0))?;
    let [c2, c1, clog, c0] = exp.coefficients_f64();
    println!("expansion: {c2:.12} N^2 + {c1:.12} N + {clog:.6} log N + {c0:.12}");
    println!("{:>4} {:>22} {:>22} {:>12}", "N", "exact", "asymptotic", "residual");
    for big_n in [4u32, 8, 16, 24, 32] {
        let p = jue_cdf_max_exact(big_n as usize, 0, big_n, &Rational::from((1, 2)))?;
        let digits = Precision::digits(64.max(8 * big_n));
        let exact = ln_rational(&p, digits);
        let asym = exp.evaluate(&digits.real(big_n));
        let r = Float::with_val(digits.bits(), &exact - &asym);
        println!("{big_n:>4} {:>22.15} {:>22.15} {:>12.3e}", exact.to_f64(), asym.to_f64(), r.to_f64());
    }
    Ok(())
}
