//! Hankel-determinant coefficients of the constrained Jacobi weight, by
//! quadrature and in closed form, and the integral identities behind them.

use ldplpp::asymptotics::{
    constrained_coeffs_square, constrained_hankel_square, grid_params, lemma_closed_form, lemma_quadrature,
    LemmaIdentity,
};
use ldplpp::numerics::Precision;

fn main() -> ldplpp::Result<()> {
    let p = Precision::digits(30);
    let (alpha, beta, d) = (p.real(1), p.real(1), p.from_ratio(1, 2));
    let quad = constrained_hankel_square(&alpha, &beta, &d)?;
    let closed = constrained_coeffs_square(&alpha, &beta, &d)?;
    for (name, a, b) in [("C1", &quad.c1, &closed.c1), ("C2", &quad.c2, &closed.c2), ("C3", &quad.c3, &closed.c3), ("C4", &quad.c4, &closed.c4)] {
        println!("{name}: quadrature {:>20.15}  closed form {:>20.15}", a.to_f64(), b.to_f64());
    }

    let tol = p.pow10(-20);
    for which in LemmaIdentity::ALL {
        let params = grid_params(which, 0, p);
        let cf = lemma_closed_form(which, &params)?;
        let qd = lemma_quadrature(which, &params, &tol)?;
        println!("{:<36} {:>20.15}  |diff| {:.1e}", which.name(), cf.to_f64(), (cf.clone() - qd).abs().to_f64());
    }
    Ok(())
}
