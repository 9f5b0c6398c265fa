//! Large-N expansions of log-probabilities and log-moments, the Hankel
//! determinant coefficients they are built from, and the integral identities
//! used to put those coefficients in closed form.

mod hankel;
mod jue;
mod lemmas;
mod lower;
mod tue;
mod upper;

pub use hankel::{
    constrained_coeffs_rect, constrained_coeffs_square, constrained_hankel_rect, constrained_hankel_square,
    hankel_coeffs_soft_hard, hankel_coeffs_two_hard, partition_coeffs_rect, partition_coeffs_square,
    principal_value, HankelCoeffs, SoftHardInput,
};
pub use jue::{jue_ldp_hard_soft, jue_ldp_soft_soft};
pub use lemmas::{grid_params, lemma_closed_form, lemma_quadrature, LemmaIdentity};
pub use lower::{
    lower_tail, lower_tail_rect, lower_tail_square, lower_tail_square_rate, rate_s, rect_rate_from_s,
};
pub use tue::{
    strong_critical_radius, tue_strong_expansion, tue_weak_expansion, weak_critical_radius, TueExpansion,
    TuePhase,
};
pub use upper::{johansson_i, johansson_j, phi, phi_value, upper_tail, RateFunctionPoint, UpperTail};

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Real;

/// Which theorem an expansion comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    LowerSquare,
    LowerRect,
    Upper,
    TuePostWeak,
    TuePreWeak,
    TuePostStrong,
    TuePreStrong,
    JuePulled,
    JuePushed,
}

/// c2 N^2 + c1 N + clog log N + c0, up to the stated remainder.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub c2: Real,
    pub c1: Real,
    pub clog: Real,
    pub c0: Real,
    pub regime: Regime,
    pub remainder_note: &'static str,
}

impl Expansion {
    pub fn evaluate(&self, n: &Real) -> Real {
        let bits = self.c0.prec();
        let n = Float::with_val(bits, n);
        let ln = Float::with_val(bits, n.ln_ref());
        Float::with_val(bits, &self.c2 * &n) * &n + Float::with_val(bits, &self.c1 * &n) + ln * &self.clog + &self.c0
    }

    pub fn coefficients_f64(&self) -> [f64; 4] {
        [self.c2.to_f64(), self.c1.to_f64(), self.clog.to_f64(), self.c0.to_f64()]
    }
}

fn bits_of(xs: &[&Real]) -> u32 {
    xs.iter().map(|x| x.prec()).max().unwrap_or(64)
}

fn check_q(q: &Real) -> Result<()> {
    if q.is_nan() || *q <= 0 || *q >= 1 {
        return Err(Error::domain(format!("q must lie in (0,1), got {}", q.to_f64())));
    }
    Ok(())
}

/// Compare delta with the regime boundary omega; a relative gap within the last
/// 16 bits counts as equality, since omega is only known to working precision.
fn cmp_boundary(delta: &Real, om: &Real) -> std::cmp::Ordering {
    let bits = delta.prec().max(om.prec());
    let gap = Float::with_val(bits, delta - om);
    let mut slack = Float::with_val(bits, om.abs_ref());
    slack >>= bits.saturating_sub(16);
    if Float::with_val(bits, gap.abs_ref()) <= slack {
        std::cmp::Ordering::Equal
    } else if gap.is_sign_positive() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}
