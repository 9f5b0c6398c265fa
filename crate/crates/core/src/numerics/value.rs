use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{ln_rational, Precision, Real};

/// A number that is either an exact rational or a floating approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(Real),
}

impl Value {
    pub fn to_real(&self, prec: Precision) -> Real {
        match self {
            Value::Exact(r) => Float::with_val(prec.bits(), r),
            Value::Approx(x) => Float::with_val(prec.bits().max(x.prec()), x),
        }
    }

    pub fn ln(&self, prec: Precision) -> Real {
        match self {
            Value::Exact(r) => ln_rational(r, prec),
            Value::Approx(x) => Float::with_val(prec.bits(), x).ln(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64(),
            Value::Approx(x) => x.to_f64(),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Approx(x) => write!(f, "{}", x.to_string_radix(10, Some(30))),
        }
    }
}

/// Which exact route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SchurSum,
    JueDeterminant,
    MeixnerDeterminant,
    TueMoment,
    CueSchur,
}

/// A probability or moment together with the route that produced it.
#[derive(Clone, Debug)]
pub struct ExactValue {
    pub value: Value,
    pub method: Method,
    pub certified_exact: bool,
}

impl ExactValue {
    pub fn exact(r: Rational, method: Method) -> Self {
        ExactValue { value: Value::Exact(r), method, certified_exact: true }
    }

    pub fn approx(x: Real, method: Method) -> Self {
        ExactValue { value: Value::Approx(x), method, certified_exact: false }
    }
}
