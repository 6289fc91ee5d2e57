//! Exact scalar field: arbitrary-precision rationals, factorials and
//! binomials, and the `ExpLinear` value type `a + sum b_i * e^(x_i)`.

use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// The scalar field of the whole crate. `num_rational::BigRational` keeps
/// values reduced with a positive denominator, so structural equality is
/// semantic equality.
pub type Rational = num_rational::BigRational;

/// Canonical reduced fraction with positive denominator.
pub fn make_rational(p: i64, q: i64) -> Result<Rational> {
    if q == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn factorial_cache() -> &'static Mutex<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

/// n!, memoized up to the largest n seen so far.
pub fn factorial(n: u64) -> BigInt {
    let mut cache = factorial_cache().lock().unwrap();
    let n = n as usize;
    while cache.len() <= n {
        let next = cache.last().unwrap() * BigInt::from(cache.len());
        cache.push(next);
    }
    cache[n].clone()
}

/// Exact binomial coefficient; `k > n` yields 0.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// 1/n! as a rational.
pub fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// Exact value of the form `constant + sum coeff_i * e^(exponent_i)`.
///
/// Canonical form: exponents strictly increasing and nonzero, no zero
/// coefficients (an `e^0` contribution is folded into the constant).
/// Structural equality is therefore semantic equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpLinear {
    constant: Rational,
    terms: Vec<(Rational, Rational)>, // (exponent, coefficient)
}

impl ExpLinear {
    pub fn zero() -> Self {
        ExpLinear {
            constant: Rational::zero(),
            terms: Vec::new(),
        }
    }

    pub fn from_constant(c: Rational) -> Self {
        ExpLinear {
            constant: c,
            terms: Vec::new(),
        }
    }

    /// Build from a constant and arbitrary (exponent, coefficient) pairs;
    /// merges equal exponents, drops zero coefficients, sorts.
    pub fn new(constant: Rational, terms: Vec<(Rational, Rational)>) -> Self {
        let mut v = ExpLinear { constant, terms };
        v.canonicalize();
        v
    }

    /// Single term `coeff * e^(exponent)`.
    pub fn term(exponent: Rational, coeff: Rational) -> Self {
        ExpLinear::new(Rational::zero(), vec![(exponent, coeff)])
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(self.terms.len());
        for (x, c) in self.terms.drain(..) {
            if x.is_zero() {
                self.constant += c;
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += c,
                _ => merged.push((x, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        self.terms = merged;
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    /// Coefficient of `e^(x)`, zero if absent.
    pub fn coeff_of(&self, x: &Rational) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e == x)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        if alpha.is_zero() {
            return ExpLinear::zero();
        }
        ExpLinear {
            constant: &self.constant * alpha,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.clone(), c * alpha))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        explin_axpy(&Rational::one(), self, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        explin_axpy(&-Rational::one(), other, self)
    }

    /// Double-precision value (for loose numeric cross-checks only).
    pub fn to_f64(&self) -> f64 {
        let mut acc = self.constant.to_f64().unwrap_or(f64::NAN);
        for (x, c) in &self.terms {
            acc += c.to_f64().unwrap_or(f64::NAN) * x.to_f64().unwrap_or(f64::NAN).exp();
        }
        acc
    }
}

/// `alpha * v + w` in canonical form.
pub fn explin_axpy(alpha: &Rational, v: &ExpLinear, w: &ExpLinear) -> ExpLinear {
    let mut terms = w.terms.clone();
    for (x, c) in &v.terms {
        terms.push((x.clone(), c * alpha));
    }
    ExpLinear::new(&w.constant + &v.constant * alpha, terms)
}

/// "p/q" with "/1" omitted.
pub fn rational_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExpLinear {
    /// `a + (b1/c1)*e^(x1) + ...`, with `e^(1)` abbreviated `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.constant.is_zero() || self.terms.is_empty() {
            write!(f, "{}", rational_str(&self.constant))?;
            wrote = true;
        }
        for (x, c) in &self.terms {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if wrote {
                write!(f, " {} ", sign)?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            let base = if x.is_one() {
                "e".to_string()
            } else {
                format!("e^({})", rational_str(x))
            };
            if mag.is_one() {
                write!(f, "{base}")?;
            } else {
                write!(f, "({})*{base}", rational_str(&mag))?;
            }
            wrote = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        make_rational(p, q).unwrap()
    }

    #[test]
    fn make_rational_reduces() {
        let v = r(4, 6);
        assert_eq!(v.numer(), &BigInt::from(2));
        assert_eq!(v.denom(), &BigInt::from(3));
    }

    #[test]
    fn make_rational_normalizes_sign() {
        let v = r(3, -6);
        assert_eq!(v, r(-1, 2));
        assert_eq!(v.denom(), &BigInt::from(2));
    }

    #[test]
    fn make_rational_zero_canonical() {
        let v = r(0, 7);
        assert!(v.is_zero());
        assert_eq!(v.denom(), &BigInt::one());
    }

    #[test]
    fn make_rational_rejects_zero_denominator() {
        assert!(matches!(make_rational(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(9), BigInt::from(362880));
    }

    #[test]
    fn factorial_199_recurrence() {
        let f199 = factorial(199);
        assert_eq!(f199.to_string().len(), 373);
        assert_eq!(f199, BigInt::from(199) * factorial(198));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        // Pascal-rule oracle
        assert_eq!(binomial(99, 50), binomial(98, 49) + binomial(98, 50));
    }

    #[test]
    fn axpy_basic() {
        let e1 = ExpLinear::term(r(1, 1), r(1, 1));
        let neg1 = ExpLinear::from_constant(r(-1, 1));
        let v = explin_axpy(&r(1, 1), &e1, &neg1);
        assert_eq!(v.constant(), &r(-1, 1));
        assert_eq!(v.terms(), &[(r(1, 1), r(1, 1))]);
        assert_eq!(v.to_string(), "-1 + e");
    }

    #[test]
    fn axpy_cancellation() {
        let v = ExpLinear::new(r(2, 1), vec![(r(1, 3), r(5, 7))]);
        let z = explin_axpy(&r(-1, 1), &v, &v);
        assert!(z.is_zero());
    }

    #[test]
    fn axpy_exponent_merge() {
        let v = ExpLinear::term(r(1, 3), r(2, 1));
        let w = ExpLinear::term(r(1, 3), r(3, 1));
        let s = explin_axpy(&r(1, 2), &v, &w);
        assert_eq!(s.terms(), &[(r(1, 3), r(4, 1))]);
    }

    #[test]
    fn exponent_zero_folds_into_constant() {
        let v = ExpLinear::new(r(1, 1), vec![(r(0, 1), r(5, 1))]);
        assert_eq!(v, ExpLinear::from_constant(r(6, 1)));
    }

    #[test]
    fn display_forms() {
        let v = ExpLinear::new(r(1, 1), vec![(r(1, 1), r(-1, 3))]);
        assert_eq!(v.to_string(), "1 - (1/3)*e");
        let w = ExpLinear::term(r(1, 2), r(5, 24));
        assert_eq!(w.to_string(), "(5/24)*e^(1/2)");
        assert_eq!(ExpLinear::zero().to_string(), "0");
    }
}
