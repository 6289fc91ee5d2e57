//! Scaled-integer fixed-point values (`mantissa / 10^scale`) and the
//! numeric Newton-tableau divided difference built on them.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exact::Rational;
use crate::Result;

fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

/// Rounding division, half away from zero.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(!d.is_zero());
    let two = BigInt::from(2);
    let (n, neg) = if (n.is_negative()) ^ (d.is_negative()) {
        (-(n.clone()), true)
    } else {
        (n.clone(), false)
    };
    let d = d.abs();
    let q = (n.abs() * &two + &d) / (&d * &two);
    if neg {
        -q
    } else {
        q
    }
}

/// Fixed-point decimal: `mant / 10^scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mant: BigInt,
    scale: u32,
}

impl Fixed {
    pub fn new(mant: BigInt, scale: u32) -> Self {
        Fixed { mant, scale }
    }

    pub fn zero(scale: u32) -> Self {
        Fixed {
            mant: BigInt::zero(),
            scale,
        }
    }

    pub fn from_rational(r: &Rational, scale: u32) -> Self {
        Fixed {
            mant: round_div(&(r.numer() * pow10(scale)), r.denom()),
            scale,
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        let a = &self.mant * pow10(scale - self.scale);
        let b = &other.mant * pow10(scale - other.scale);
        (a, b, scale)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Fixed { mant: a + b, scale }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Fixed { mant: a - b, scale }
    }

    pub fn neg(&self) -> Self {
        Fixed {
            mant: -self.mant.clone(),
            scale: self.scale,
        }
    }

    pub fn abs(&self) -> Self {
        Fixed {
            mant: self.mant.abs(),
            scale: self.scale,
        }
    }

    /// Product, rounded back to the larger operand scale.
    pub fn mul(&self, other: &Self) -> Self {
        let scale = self.scale.max(other.scale);
        let drop = self.scale + other.scale - scale;
        Fixed {
            mant: round_div(&(&self.mant * &other.mant), &pow10(drop)),
            scale,
        }
    }

    /// Quotient at the larger operand scale.
    pub fn div(&self, other: &Self) -> Self {
        let scale = self.scale.max(other.scale);
        // value = m1 10^(s2 - s1) / m2, rendered at `scale`
        let num = &self.mant * pow10(scale + other.scale - self.scale);
        Fixed {
            mant: round_div(&num, &other.mant),
            scale,
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    /// True if |self| < 10^(-digits).
    pub fn abs_below_pow10(&self, digits: u32) -> bool {
        if digits > self.scale {
            return self.mant.is_zero();
        }
        self.mant.abs() < pow10(self.scale - digits)
    }
}

/// Newton-tableau divided difference over fixed-point data.
///
/// The working precision is whatever scale the inputs carry; callers are
/// expected to supply at least 20 guard digits beyond the precision they
/// want out.
pub fn divdiff_numeric(fvals: &[Fixed], nodes: &[Fixed]) -> Result<Fixed> {
    if fvals.is_empty() || fvals.len() != nodes.len() {
        return Err(Error::ArgRange(
            "need equally many function values and nodes, at least one".into(),
        ));
    }
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i].sub(&nodes[j]).is_zero() {
                return Err(Error::CoincidentNodes);
            }
        }
    }
    let mut col: Vec<Fixed> = fvals.to_vec();
    for level in 1..nodes.len() {
        for i in 0..(nodes.len() - level) {
            let num = col[i + 1].sub(&col[i]);
            let den = nodes[i + level].sub(&nodes[i]);
            col[i] = num.div(&den);
        }
        col.truncate(nodes.len() - level);
    }
    Ok(col[0].clone())
}
