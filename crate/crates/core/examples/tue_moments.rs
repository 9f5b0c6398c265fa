//! Moments of the characteristic polynomial of a truncated unitary matrix:
//! exact values against the weak non-unitarity expansion.

use ldplpp::asymptotics::tue_weak_expansion;
use ldplpp::ensembles::tue_char_moment;
use ldplpp::numerics::{ln_rational, Precision};
use rug::Rational;

fn main() -> ldplpp::Result<()> {
    // E|det(T - z)|^(2cN) for N x N truncations of (N+1) x (N+1) Haar unitaries, c = 1/2
    let p = Precision::digits(40);
    let z2 = Rational::from((9, 100));
    for (label, z2) in [("post", z2), ("pre", Rational::from((49, 100)))] {
        let z = p.real(&z2).sqrt();
        let exp = tue_weak_expansion(&p.from_ratio(1, 2), &z, 1)?;
        println!("{label}: phase {:?}, critical |z| = {:.4}", exp.phase, exp.critical.to_f64());
        for big_n in [4u32, 8, 12] {
            let m = big_n / 2;
            let exact = tue_char_moment(big_n, m + 1, m, &z2)?;
            let lhs = ln_rational(exact.value.as_exact().unwrap(), p);
            let rhs = exp.expansion.evaluate(&p.real(big_n));
            println!("  N = {big_n:>2}: exact {:>12.6}  expansion {:>12.6}", lhs.to_f64(), rhs.to_f64());
        }
    }
    Ok(())
}
