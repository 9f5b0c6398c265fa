use rug::Float;

use super::{Precision, Real};
use crate::error::{Error, Result};

/// Brent's method on [lo, hi]; f(lo) and f(hi) must differ in sign.
pub fn brent_root<F>(mut f: F, lo: &Real, hi: &Real, tol: &Real) -> Result<Real>
where
    F: FnMut(&Real) -> Result<Real>,
{
    let bits = lo.prec().max(hi.prec());
    let mut a = Float::with_val(bits, lo);
    let mut b = Float::with_val(bits, hi);
    let mut fa = f(&a)?;
    let mut fb = f(&b)?;
    if fa.is_zero() {
        return Ok(a);
    }
    if fb.is_zero() {
        return Ok(b);
    }
    if (fa.is_sign_negative()) == (fb.is_sign_negative()) {
        return Err(Error::Bracket { f_lo: fa.to_string_radix(10, Some(12)), f_hi: fb.to_string_radix(10, Some(12)) });
    }
    let eps = Float::with_val(bits, 1) >> (bits - 2);
    let mut c = a.clone();
    let mut fc = fa.clone();
    let mut d = Float::with_val(bits, &b - &a);
    let mut e = d.clone();
    for _ in 0..(4 * bits as usize) {
        if (fb.is_sign_negative()) == (fc.is_sign_negative()) {
            c = a.clone();
            fc = fa.clone();
            d = Float::with_val(bits, &b - &a);
            e = d.clone();
        }
        if Float::with_val(bits, fc.abs_ref()) < Float::with_val(bits, fb.abs_ref()) {
            a = b.clone();
            b = c.clone();
            c = a.clone();
            fa = fb.clone();
            fb = fc.clone();
            fc = fa.clone();
        }
        let tol1 = Float::with_val(bits, b.abs_ref()) * &eps * 2u32 + Float::with_val(bits, tol / 2u32);
        let xm = Float::with_val(bits, &c - &b) / 2u32;
        if Float::with_val(bits, xm.abs_ref()) <= tol1 || fb.is_zero() {
            return Ok(b);
        }
        if Float::with_val(bits, e.abs_ref()) >= tol1
            && Float::with_val(bits, fa.abs_ref()) > Float::with_val(bits, fb.abs_ref())
        {
            let s = Float::with_val(bits, &fb / &fa);
            let (mut p, mut q);
            if a == c {
                p = Float::with_val(bits, &xm * 2u32) * &s;
                q = Float::with_val(bits, 1u32 - &s);
            } else {
                let qq = Float::with_val(bits, &fa / &fc);
                let r = Float::with_val(bits, &fb / &fc);
                p = s.clone()
                    * (Float::with_val(bits, &xm * 2u32) * &qq * Float::with_val(bits, &qq - &r)
                        - Float::with_val(bits, &b - &a) * Float::with_val(bits, &r - 1u32));
                q = Float::with_val(bits, &qq - 1u32) * Float::with_val(bits, &r - 1u32) * Float::with_val(bits, &s - 1u32);
            }
            if p.is_sign_positive() && !p.is_zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = Float::with_val(bits, &xm * 3u32) * &q - Float::with_val(bits, &tol1 * &q).abs();
            let min2 = Float::with_val(bits, &e * &q).abs();
            let lim = if min1 < min2 { min1 } else { min2 };
            if Float::with_val(bits, &p * 2u32) < lim {
                e = d.clone();
                d = Float::with_val(bits, &p / &q);
            } else {
                d = xm.clone();
                e = d.clone();
            }
        } else {
            d = xm.clone();
            e = d.clone();
        }
        a = b.clone();
        fa = fb.clone();
        if Float::with_val(bits, d.abs_ref()) > tol1 {
            b += &d;
        } else if xm.is_sign_negative() {
            b -= &tol1;
        } else {
            b += &tol1;
        }
        fb = f(&b)?;
    }
    Err(Error::accuracy("Brent iteration limit", b.to_f64()))
}

/// Central difference with one Richardson step, h = 10^(-digits/3) max(1, |x|).
pub fn central_derivative<F>(mut f: F, x: &Real) -> Result<Real>
where
    F: FnMut(&Real) -> Result<Real>,
{
    let prec = Precision::of(x);
    let bits = x.prec();
    let scale = if Float::with_val(bits, x.abs_ref()) > 1 { Float::with_val(bits, x.abs_ref()) } else { Float::with_val(bits, 1) };
    let h = prec.pow10(-(prec.decimal_digits() as i32) / 3) * scale;
    let mut diff = |h: &Real| -> Result<Real> {
        let up = f(&Float::with_val(bits, x + h))?;
        let down = f(&Float::with_val(bits, x - h))?;
        Ok((up - down) / Float::with_val(bits, h * 2u32))
    };
    let d1 = diff(&h)?;
    let d2 = diff(&Float::with_val(bits, &h / 2u32))?;
    Ok((d2 * 4u32 - d1) / 3u32)
}
