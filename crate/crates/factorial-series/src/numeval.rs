//! Arbitrary-precision decimal rendering of exact values: digits of e^x
//! for rational x, and evaluation of `ExpLinear` values to d significant
//! digits with cancellation-aware guard digits.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exact::{ExpLinear, Rational};
use crate::Result;

const GUARD: u32 = 15;

/// Scientific normal form `sign * d.ddd... * 10^exponent`, last digit
/// rounded to nearest within one unit in the last place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalValue {
    sign: i8,
    digits: String,
    exponent: i64,
}

impl DecimalValue {
    pub fn zero() -> Self {
        DecimalValue {
            sign: 0,
            digits: "0".into(),
            exponent: 0,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn digits(&self) -> &str {
        &self.digits
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// `d.{digits}e{exp}`.
    pub fn sci_string(&self) -> String {
        if self.sign == 0 {
            return "0".into();
        }
        let neg = if self.sign < 0 { "-" } else { "" };
        let (head, rest) = self.digits.split_at(1);
        if rest.is_empty() {
            format!("{neg}{head}e{}", self.exponent)
        } else {
            format!("{neg}{head}.{rest}e{}", self.exponent)
        }
    }

    /// Positional notation without an exponent marker.
    pub fn plain_string(&self) -> String {
        if self.sign == 0 {
            return "0".into();
        }
        let neg = if self.sign < 0 { "-" } else { "" };
        let d = self.digits.as_bytes();
        let e = self.exponent;
        if e < 0 {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("{neg}0.{zeros}{}", self.digits)
        } else if (e as usize) + 1 >= d.len() {
            let zeros = "0".repeat(e as usize + 1 - d.len());
            format!("{neg}{}{zeros}", self.digits)
        } else {
            let (int, frac) = self.digits.split_at(e as usize + 1);
            format!("{neg}{int}.{frac}")
        }
    }
}

impl fmt::Display for DecimalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.abs() < 6 {
            write!(f, "{}", self.plain_string())
        } else {
            write!(f, "{}", self.sci_string())
        }
    }
}

fn pow10(n: u64) -> BigInt {
    BigInt::from(10u32).pow(n as u32)
}

/// Round a positive rational to `d` significant decimal digits.
pub fn decimal_from_rational(r: &Rational, d: u32) -> DecimalValue {
    if r.is_zero() {
        return DecimalValue::zero();
    }
    let sign = if r.is_negative() { -1 } else { 1 };
    let p = r.numer().abs();
    let q = r.denom().clone();
    // scale so the integer quotient carries at least d + 2 digits
    let p_len = p.to_string().len() as i64;
    let q_len = q.to_string().len() as i64;
    let s = (d as i64 + 2 + (q_len - p_len + 1).max(0)) as u64;
    let w = (&p * pow10(s)) / &q;
    let w_str = w.to_string();
    let exponent = (w_str.len() as i64 - 1) - s as i64;
    // round w to d significant digits, half away from zero
    let drop = w_str.len() as i64 - d as i64;
    let (digits, exponent) = if drop <= 0 {
        // exact short value; pad to d digits
        let mut t = w_str;
        t.push_str(&"0".repeat((-drop) as usize));
        (t, exponent)
    } else {
        let div = pow10(drop as u64);
        let rounded = (&w * BigInt::from(2) + &div) / (&div * BigInt::from(2));
        let t = rounded.to_string();
        if t.len() as u32 > d {
            // carry rippled all the way up, e.g. 999.95 -> 1000
            (t[..d as usize].to_string(), exponent + 1)
        } else {
            (t, exponent)
        }
    };
    DecimalValue {
        sign,
        digits,
        exponent,
    }
}

/// Rational approximation of e^x with relative error below 10^-digits.
pub fn exp_rational_approx(x: &Rational, digits: u32) -> Rational {
    let xf = x.to_f64().unwrap_or(0.0);
    // magnitude of e^x in decimal digits, used for the stop threshold
    let mag_log10 = xf * std::f64::consts::LOG10_E;
    let abs_threshold = mag_log10.floor() as i64 - (digits as i64 + 5);
    let abs_x = xf.abs();
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut n: u64 = 1;
    loop {
        term = term * x / Rational::from_integer(BigInt::from(n));
        sum += &term;
        if n as f64 > 2.0 * abs_x + 4.0 {
            let t = term.to_f64().unwrap_or(0.0).abs();
            if t == 0.0 || t.log10() < abs_threshold as f64 {
                break;
            }
        }
        n += 1;
        if n > 100_000 {
            break;
        }
    }
    sum
}

/// e^x to d significant digits, within one unit in the last place.
pub fn exp_digits(x: &Rational, d: u32) -> Result<DecimalValue> {
    if d == 0 {
        return Err(Error::ArgRange("need at least one digit".into()));
    }
    let xf = x.to_f64().unwrap_or(f64::INFINITY);
    if xf.abs() > 100.0 {
        return Err(Error::ArgRange("|x| must be at most 100".into()));
    }
    let approx = exp_rational_approx(x, d + GUARD);
    Ok(decimal_from_rational(&approx, d))
}

/// Approximate log10 |r| (good to a fraction of a digit).
fn log10_abs(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let digits_log = |n: &BigInt| -> f64 {
        let s = n.abs().to_string();
        let head_len = s.len().min(15);
        let head: f64 = s[..head_len].parse().unwrap_or(1.0);
        head.log10() + (s.len() - head_len) as f64
    };
    digits_log(r.numer()) - digits_log(r.denom())
}

/// Rational approximation of an `ExpLinear` value with absolute error well
/// below one unit in the d-th significant digit. Precision escalates until
/// cancellation between terms is fully absorbed.
pub fn explin_rational_approx(v: &ExpLinear, d: u32) -> Rational {
    if v.terms().is_empty() {
        return v.constant().clone();
    }
    // magnitudes of the summands, to size the working precision
    let mut max_log: f64 = log10_abs(v.constant());
    for (x, c) in v.terms() {
        let xf = x.to_f64().unwrap_or(0.0);
        max_log = max_log.max(log10_abs(c) + xf * std::f64::consts::LOG10_E);
    }
    let n_terms = (v.terms().len() + 1) as f64;
    let mut extra: u32 = 0;
    for _ in 0..32 {
        let prec = d + GUARD + extra;
        let mut acc = v.constant().clone();
        for (x, c) in v.terms() {
            acc += c * exp_rational_approx(x, prec);
        }
        let err_log = max_log + n_terms.log10() - prec as f64;
        let res_log = log10_abs(&acc);
        // require the error bound to sit below the target ulp
        if err_log < res_log - d as f64 - 2.0 {
            return acc;
        }
        let deficit = (err_log - (res_log - d as f64 - 2.0)).ceil();
        extra += if deficit.is_finite() && deficit > 0.0 {
            deficit as u32 + 5
        } else {
            prec
        };
    }
    // unreachably deep cancellation; last iterate is the best we have
    let prec = d + GUARD + extra;
    let mut acc = v.constant().clone();
    for (x, c) in v.terms() {
        acc += c * exp_rational_approx(x, prec);
    }
    acc
}

/// Evaluate an `ExpLinear` value to d significant digits.
pub fn render(v: &ExpLinear, d: u32) -> DecimalValue {
    if v.is_zero() {
        return DecimalValue::zero();
    }
    decimal_from_rational(&explin_rational_approx(v, d), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::make_rational;

    fn r(p: i64, q: i64) -> Rational {
        make_rational(p, q).unwrap()
    }

    #[test]
    fn e_to_21_digits() {
        let v = exp_digits(&r(1, 1), 21).unwrap();
        assert_eq!(v.sci_string(), "2.71828182845904523536e0");
    }

    #[test]
    fn exp_zero() {
        let v = exp_digits(&r(0, 1), 5).unwrap();
        assert_eq!(v.sci_string(), "1.0000e0");
        assert_eq!(v.plain_string(), "1.0000");
    }

    #[test]
    fn exp_reciprocal_identity() {
        // e^-1 * e^1 = 1 to the shared precision
        let a = exp_rational_approx(&r(-1, 1), 30);
        let b = exp_rational_approx(&r(1, 1), 30);
        let p = a * b - Rational::one();
        assert!(log10_abs(&p) < -25.0);
        let v = exp_digits(&r(-1, 1), 10).unwrap();
        assert_eq!(v.sci_string(), "3.678794412e-1");
    }

    #[test]
    fn exp_digits_guards() {
        assert!(exp_digits(&r(1, 1), 0).is_err());
        assert!(exp_digits(&r(101, 1), 5).is_err());
    }

    #[test]
    fn render_two_thirds_e() {
        // (2/3) * 2.718281828... = 1.8121878856...
        let v = ExpLinear::term(r(1, 1), r(2, 3));
        assert_eq!(render(&v, 7).to_string(), "1.812188");
    }

    #[test]
    fn render_cancellation_sk40() {
        // 1 - e/3 = -S_{4,0}-ish magnitude 0.0939...
        // 1 - e/3 = 0.0939060571..., two O(1) summands nearly cancel
        let v = ExpLinear::new(r(1, 1), vec![(r(1, 1), r(-1, 3))]);
        let d = render(&v, 7);
        assert_eq!(d.sci_string(), "9.390606e-2");
        assert_eq!(d.to_string(), "0.09390606");
    }

    #[test]
    fn render_exact_zero() {
        assert_eq!(render(&ExpLinear::zero(), 12).to_string(), "0");
    }

    #[test]
    fn render_idempotent_precision() {
        let v = ExpLinear::new(r(-1, 1), vec![(r(1, 1), r(3, 8))]);
        let a = render(&v, 12);
        let b = render(&v, 22);
        assert_eq!(a.digits()[..11], b.digits()[..11]);
        assert_eq!(a.exponent(), b.exponent());
    }

    #[test]
    fn decimal_carry_ripple() {
        // 0.99995 at 4 digits rounds up to 1.000
        let v = decimal_from_rational(&r(99995, 100000), 4);
        assert_eq!(v.sci_string(), "1.000e0");
    }

    #[test]
    fn plain_string_shapes() {
        assert_eq!(decimal_from_rational(&r(12345, 10), 4).plain_string(), "1235");
        assert_eq!(decimal_from_rational(&r(-3, 400), 3).plain_string(), "-0.00750");
        assert_eq!(decimal_from_rational(&r(120, 1), 2).plain_string(), "120");
    }
}
