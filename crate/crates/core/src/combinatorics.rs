//! Integer partitions, Schur polynomials and generalized Pochhammer symbols.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bareiss_det, Real};

/// A partition stored as non-increasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Trailing zeros are dropped; parts must be non-increasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("parts {parts:?} are not non-increasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// Part i (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.part(0);
        Partition((1..=cols).map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32).collect())
    }

    pub fn fits_in_box(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions with at most `rows` parts, each at most `cols`, in reverse
/// lexicographic order (the full box first, the empty partition last).
pub fn partitions_in_box(rows: usize, cols: u32) -> Vec<Partition> {
    fn rec(rows: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rows == 0 {
            out.push(Partition::new(prefix.clone()).expect("generated parts are ordered"));
            return;
        }
        for p in (0..=max).rev() {
            prefix.push(p);
            rec(rows - 1, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(rows, cols, &mut Vec::with_capacity(rows), &mut out);
    out
}

/// binom(rows + cols, rows), the number of partitions in the box.
pub fn box_count(rows: usize, cols: u32) -> Integer {
    Integer::from(Integer::binomial_u(rows as u32 + cols, rows as u32))
}

/// s_lambda(1, ..., 1) with n ones, by the product over pairs i < j.
pub fn schur_at_ones(lambda: &Partition, n: usize) -> Integer {
    if lambda.len() > n {
        return Integer::new();
    }
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for i in 0..n {
        for j in i + 1..n {
            let d = (j - i) as i64;
            num *= lambda.part(i) as i64 - lambda.part(j) as i64 + d;
            den *= d;
        }
    }
    num.div_exact(&den)
}

/// s_lambda(x_1, ..., x_m) as a ratio of alternants; the x_i must be distinct.
pub fn schur_bialternant(lambda: &Partition, xs: &[Rational]) -> Result<Rational> {
    let m = xs.len();
    if lambda.len() > m {
        return Ok(Rational::new());
    }
    let mut vander = Rational::from(1);
    for i in 0..m {
        for j in i + 1..m {
            vander *= Rational::from(&xs[i] - &xs[j]);
        }
    }
    if vander == 0 {
        return Err(Error::domain("bialternant needs distinct variables"));
    }
    let mat: Vec<Vec<Rational>> = xs
        .iter()
        .map(|x| {
            (0..m)
                .map(|j| {
                    let e = lambda.part(j) + (m - 1 - j) as u32;
                    Rational::from(rug::ops::Pow::pow(x.clone(), e))
                })
                .collect()
        })
        .collect();
    Ok(bareiss_det(&mat) / vander)
}

/// [u]_lambda = prod_j prod_{k < lambda_j} (u - j + 1 + k), rows counted from 1.
pub fn hyp_coeff_rational(u: &Rational, lambda: &Partition) -> Rational {
    let mut acc = Rational::from(1);
    for (j, &p) in lambda.parts().iter().enumerate() {
        let mut t = Rational::from(u - j as u32);
        for _ in 0..p {
            acc *= &t;
            t += 1;
        }
    }
    acc
}

/// Floating point version of [u]_lambda.
pub fn hyp_coeff(u: &Real, lambda: &Partition) -> Real {
    let bits = u.prec();
    let mut acc = Float::with_val(bits, 1);
    for (j, &p) in lambda.parts().iter().enumerate() {
        let mut t = Float::with_val(bits, u - j as u32);
        for _ in 0..p {
            acc *= &t;
            t += 1u32;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;
    use proptest::prelude::*;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    // hook-content formula: prod over cells (n + content) / hook
    fn hook_content(lambda: &Partition, n: i64) -> Rational {
        let t = lambda.transpose();
        let mut acc = Rational::from(1);
        for (i, &row) in lambda.parts().iter().enumerate() {
            for j in 0..row as usize {
                let content = j as i64 - i as i64;
                let hook = (row as i64 - j as i64) + (t.part(j) as i64 - i as i64) - 1;
                acc *= Rational::from((n + content, hook));
            }
        }
        acc
    }

    // Lagrange extrapolation to t = 0 of s_lambda(1, 1+t, ..., 1+(n-1)t)
    fn schur_ones_by_interpolation(lambda: &Partition, n: usize) -> Rational {
        let deg = lambda.size() as i64;
        let ts: Vec<i64> = (1..=deg + 1).collect();
        let vals: Vec<Rational> = ts
            .iter()
            .map(|&t| {
                let xs: Vec<Rational> = (0..n as i64).map(|i| Rational::from(1 + i * t)).collect();
                schur_bialternant(lambda, &xs).unwrap()
            })
            .collect();
        let mut acc = Rational::new();
        for (i, vi) in vals.iter().enumerate() {
            let mut w = Rational::from(1);
            for (j, &tj) in ts.iter().enumerate() {
                if i != j {
                    w *= Rational::from((-tj, ts[i] - tj));
                }
            }
            acc += w * vi;
        }
        acc
    }

    #[test]
    fn box_enumeration_order_and_count() {
        let got: Vec<Vec<u32>> = partitions_in_box(2, 2).into_iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![2, 2], vec![2, 1], vec![2], vec![1, 1], vec![1], vec![]]);
        for (r, c) in [(3usize, 4u32), (5, 5), (1, 7), (0, 3)] {
            assert_eq!(Integer::from(partitions_in_box(r, c).len()), box_count(r, c));
        }
    }

    #[test]
    fn schur_at_ones_small_cases() {
        assert_eq!(schur_at_ones(&part(&[1]), 3), 3);
        assert_eq!(schur_at_ones(&part(&[2]), 3), 6);
        assert_eq!(schur_at_ones(&part(&[1, 1]), 3), 3);
        assert_eq!(schur_at_ones(&part(&[2, 1]), 3), 8);
        assert_eq!(schur_at_ones(&part(&[1, 1, 1, 1]), 3), 0);
        assert_eq!(schur_at_ones(&Partition::empty(), 5), 1);
    }

    #[test]
    fn schur_at_ones_agrees_with_interpolated_bialternant() {
        for n in 1..=4 {
            for lam in partitions_in_box(n, 3) {
                let want = schur_ones_by_interpolation(&lam, n);
                assert_eq!(Rational::from(schur_at_ones(&lam, n)), want, "lambda={lam} n={n}");
            }
        }
    }

    #[test]
    fn bialternant_matches_monomial_expansion() {
        // s_(2,1)(x,y,z) = x^2 y + x^2 z + y^2 x + y^2 z + z^2 x + z^2 y + 2xyz
        let xs = [Rational::from(2), Rational::from((1, 3)), Rational::from(-5)];
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let want = Rational::from(x * x) * y + Rational::from(x * x) * z + Rational::from(y * y) * x
            + Rational::from(y * y) * z + Rational::from(z * z) * x + Rational::from(z * z) * y
            + Rational::from(x * y) * z * 2u32;
        assert_eq!(schur_bialternant(&part(&[2, 1]), &xs).unwrap(), want);
    }

    #[test]
    fn dual_cauchy_identity() {
        // prod_{i,j} (1 + x_i y_j) = sum_lambda s_lambda(x) s_lambda'(y)
        let xs = [Rational::from((1, 2)), Rational::from((2, 3)), Rational::from(3)];
        let ys = [Rational::from((-1, 5)), Rational::from(4)];
        let mut lhs = Rational::from(1);
        for x in &xs {
            for y in &ys {
                lhs *= Rational::from(x * y) + 1u32;
            }
        }
        let mut rhs = Rational::new();
        for lam in partitions_in_box(xs.len(), ys.len() as u32) {
            rhs += schur_bialternant(&lam, &xs).unwrap() * schur_bialternant(&lam.transpose(), &ys).unwrap();
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn hyp_coeff_values() {
        // [u]_(2,1) = u (u+1) (u-1)
        let u = Rational::from((7, 3));
        let want = Rational::from(&u * Rational::from(&u + 1u32)) * Rational::from(&u - 1u32);
        assert_eq!(hyp_coeff_rational(&u, &part(&[2, 1])), want);
        let p = Precision::default();
        let got = hyp_coeff(&p.real(&u), &part(&[2, 1]));
        assert!((got - Float::with_val(p.bits(), &want)).abs() < p.pow10(-55));
    }

    proptest! {
        #[test]
        fn transpose_is_involution(parts in proptest::collection::vec(0u32..7, 0..6)) {
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            prop_assert_eq!(lam.transpose().transpose(), lam.clone());
            prop_assert_eq!(lam.transpose().size(), lam.size());
        }

        #[test]
        fn hook_content_agrees(parts in proptest::collection::vec(0u32..5, 0..5), n in 1i64..8) {
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            prop_assert_eq!(Rational::from(schur_at_ones(&lam, n as usize)), hook_content(&lam, n));
        }

        #[test]
        fn hyp_coeff_transposition(parts in proptest::collection::vec(0u32..5, 0..5), num in -40i64..40, den in 1i64..9) {
            // [-u]_lambda = (-1)^|lambda| [u]_lambda'
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            let u = Rational::from((num, den));
            let lhs = hyp_coeff_rational(&Rational::from(-&u), &lam);
            let mut rhs = hyp_coeff_rational(&u, &lam.transpose());
            if lam.size() % 2 == 1 { rhs = -rhs; }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
