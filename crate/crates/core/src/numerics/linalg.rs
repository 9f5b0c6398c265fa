use std::cmp::Ordering;

use rug::{Float, Integer, Rational};

use super::{Real, SignedLog};

/// Determinant as a sign and a log-magnitude.
pub type LogDet = SignedLog;

/// Exact determinant of a rational matrix: rows are cleared of denominators,
/// then fraction-free elimination runs on integers.
pub fn bareiss_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::from(1);
    }
    let mut scale = Integer::from(1);
    let mut a: Vec<Vec<Integer>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut l = Integer::from(1);
            for e in row {
                l.lcm_mut(e.denom());
            }
            scale *= &l;
            row.iter()
                .map(|e| Integer::from(e.numer() * Integer::from(&l / e.denom())))
                .collect()
        })
        .collect();
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Rational::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = Rational::from((a[n - 1][n - 1].clone(), scale));
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// LU with partial pivoting; returns the sign and log|det|.
pub fn log_det(m: &[Vec<Real>]) -> LogDet {
    let n = m.len();
    let bits = m.iter().flatten().map(|x| x.prec()).max().unwrap_or(64);
    let mut a: Vec<Vec<Real>> = m.to_vec();
    let mut sign: i8 = 1;
    let mut log_abs = Float::with_val(bits, 0);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].clone().abs().partial_cmp(&a[j][k].clone().abs()).unwrap_or(Ordering::Equal))
            .unwrap();
        if a[piv][k].is_zero() {
            return SignedLog { sign: 0, log_abs: Float::with_val(bits, rug::float::Special::NegInfinity) };
        }
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        let pivot = a[k][k].clone();
        if pivot.is_sign_negative() {
            sign = -sign;
        }
        log_abs += Float::with_val(bits, pivot.abs_ref()).ln();
        for i in k + 1..n {
            let f = Float::with_val(bits, &a[i][k] / &pivot);
            for j in k + 1..n {
                let t = Float::with_val(bits, &f * &a[k][j]);
                a[i][j] -= t;
            }
        }
    }
    SignedLog { sign, log_abs }
}
