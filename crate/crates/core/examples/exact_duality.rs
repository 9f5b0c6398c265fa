//! P(G_{n,m} <= ell) for a 5 x 3 grid by the Schur sum, the Jacobi determinant
//! and the truncated-unitary moment, printed as exact rationals.

use ldplpp::ensembles::{lpp_tue_constant, tue_char_moment};
use ldplpp::lpp::{lpp_prob_leq, LppParams, Route};
use ldplpp::numerics::Precision;
use rug::Rational;

fn main() -> ldplpp::Result<()> {
    let (n, m, ell) = (5, 3, 4);
    let q2 = Rational::from((1, 2));
    let p = LppParams::exact(q2.clone(), n, m, ell)?;
    let prec = Precision::default();

    let schur = lpp_prob_leq(&p, Route::Schur, prec)?;
    let jue = lpp_prob_leq(&p, Route::Jue, prec)?;
    let moment = tue_char_moment(ell, n, m, &q2)?;
    let weight = rug::ops::Pow::pow(Rational::from(1 - q2.clone()), n * m);
    let tue = lpp_tue_constant(ell, n, m)? * weight * moment.value.as_exact().unwrap();

    println!("schur  {}", schur.value);
    println!("jue    {}", jue.value);
    println!("tue    {tue}");
    println!("meixner {}", lpp_prob_leq(&p, Route::Meixner { tail_digits: 30 }, prec)?.value);
    Ok(())
}
