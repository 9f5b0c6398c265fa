//! Wachter edges, the soft pushed edge by both routes, and the mass of the
//! constrained densities.

use ldplpp::equilibrium::{closed_form_mfrak, constrained_density, edges, solve_mfrak};
use ldplpp::numerics::Precision;

fn main() -> ldplpp::Result<()> {
    let p = Precision::digits(40);
    let (gamma, delta) = (p.real(2), p.real(1));
    let e = edges(&gamma, &delta)?;
    println!("support [a, b] = [{:.15}, {:.15}]", e.a.to_f64(), e.b.to_f64());

    let q = p.from_ratio(1, 2).sqrt();
    let root = solve_mfrak(&gamma, &delta, &q)?;
    let closed = closed_form_mfrak(&gamma, &delta, &q)?;
    println!("soft edge: root solve {}  closed form {}", root.to_string_radix(10, Some(30)), closed.to_string_radix(10, Some(30)));

    for (alpha, beta, d) in [(0, 1, 3), (1, 2, 6), (4, 1, 9)] {
        let mu = constrained_density(&p.real(alpha), &p.real(beta), &p.from_ratio(d, 10))?;
        let mass = mu.mass(&p.pow10(-20))?;
        println!("alpha={alpha} beta={beta} d=0.{d}: {:?} on [{:.6}, {:.6}], mass - 1 = {:.2e}", mu.kind, mu.left.to_f64(), mu.right.to_f64(), (mass - 1u32).to_f64());
    }
    Ok(())
}
