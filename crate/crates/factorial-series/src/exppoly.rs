//! Symbolic expressions `(P(z)*e^z + Q(z)) / z^m` with rational-coefficient
//! polynomials. The family is closed under differentiation and carries the
//! tail-shifted exponentials `z^(k-1) * exp_ell(z)` exactly.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::exact::{inv_factorial, ExpLinear, Rational};
use crate::Result;

/// Dense polynomial, `coeffs[i]` is the coefficient of `z^i`.
/// Leading coefficient nonzero; the zero polynomial is the empty list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn monomial(degree: usize, coeff: Rational) -> Self {
        if coeff.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = coeff;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn deriv(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        Poly::new(coeffs)
    }

    /// Multiply by z.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by z; requires a zero constant term.
    fn shift_down(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        debug_assert!(self.coeffs[0].is_zero());
        Poly::new(self.coeffs[1..].to_vec())
    }

    fn divisible_by_z(&self) -> bool {
        self.is_zero() || self.coeffs[0].is_zero()
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        if alpha.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Poly::new(coeffs)
    }
}

/// `(p(z)*e^z + q(z)) / z^m`, canonical: if both `p` and `q` are divisible
/// by z and `m > 0`, one factor of z is cancelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPoly {
    p: Poly,
    q: Poly,
    m: u32,
}

impl ExpPoly {
    pub fn new(p: Poly, q: Poly, m: u32) -> Self {
        let mut v = ExpPoly { p, q, m };
        v.canonicalize();
        v
    }

    /// The function e^z.
    pub fn exp() -> Self {
        ExpPoly {
            p: Poly::monomial(0, Rational::one()),
            q: Poly::zero(),
            m: 0,
        }
    }

    /// A pure polynomial (no exponential part).
    pub fn from_poly(q: Poly) -> Self {
        ExpPoly {
            p: Poly::zero(),
            q,
            m: 0,
        }
    }

    /// The monomial z^n.
    pub fn monomial(n: usize) -> Self {
        ExpPoly::from_poly(Poly::monomial(n, Rational::one()))
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn canonicalize(&mut self) {
        while self.m > 0 && self.p.divisible_by_z() && self.q.divisible_by_z() {
            self.p = self.p.shift_down();
            self.q = self.q.shift_down();
            self.m -= 1;
        }
    }

    /// `alpha*self + other`; the operands are brought to a common power of z.
    pub fn axpy(&self, alpha: &Rational, other: &Self) -> Self {
        let m = self.m.max(other.m);
        let mut sp = self.p.scale(alpha);
        let mut sq = self.q.scale(alpha);
        for _ in self.m..m {
            sp = sp.shift_up();
            sq = sq.shift_up();
        }
        let mut op = other.p.clone();
        let mut oq = other.q.clone();
        for _ in other.m..m {
            op = op.shift_up();
            oq = oq.shift_up();
        }
        ExpPoly::new(sp.add(&op), sq.add(&oq), m)
    }

    /// Derivative: `d/dz [(P e^z + Q)/z^m]
    ///   = ((z P' + z P - m P) e^z + (z Q' - m Q)) / z^(m+1)`.
    pub fn differentiate(&self) -> Self {
        let m = Rational::from_integer(self.m.into());
        let p = self
            .p
            .deriv()
            .shift_up()
            .add(&self.p.shift_up())
            .add(&self.p.scale(&-m.clone()));
        let q = self.q.deriv().shift_up().add(&self.q.scale(&-m));
        ExpPoly::new(p, q, self.m + 1)
    }

    pub fn nth_derivative(&self, n: u32) -> Self {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.differentiate();
        }
        f
    }

    /// Exact evaluation at a rational point: `P(x) e^x / x^m + Q(x) / x^m`.
    pub fn eval_at(&self, x: &Rational) -> Result<ExpLinear> {
        if x.is_zero() && self.m > 0 {
            return Err(Error::EvalAtZero);
        }
        let xm = pow_rational(x, self.m);
        let exp_coeff = self.p.eval(x) / &xm;
        let constant = self.q.eval(x) / &xm;
        Ok(ExpLinear::new(constant, vec![(x.clone(), exp_coeff)]))
    }

    /// Double-precision evaluation (for finite-difference checks).
    pub fn eval_f64(&self, x: f64) -> f64 {
        let horner = |p: &Poly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + rational_f64(c))
        };
        (horner(&self.p) * x.exp() + horner(&self.q)) / x.powi(self.m as i32)
    }
}

fn rational_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn pow_rational(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// The expression `z^(k-1) * exp_ell(z)` where
/// `exp_ell(z) = sum_{n>=0} z^n / (n+ell)!`, i.e.
/// `(z^(k-1) e^z - sum_{n=0}^{ell-1} z^(n+k-1)/n!) / z^ell`, canonicalized.
pub fn build_zk_expell(k: u32, ell: u32) -> Result<ExpPoly> {
    if k < 1 {
        return Err(Error::ArgRange("k must be >= 1".into()));
    }
    let p = Poly::monomial((k - 1) as usize, Rational::one());
    let mut q_coeffs = vec![Rational::zero(); (ell + k - 1) as usize];
    for n in 0..ell {
        q_coeffs[(n + k - 1) as usize] = -inv_factorial(n.into());
    }
    Ok(ExpPoly::new(p, Poly::new(q_coeffs), ell))
}

impl fmt::Display for ExpPoly {
    /// Debug rendering `( P(z)*exp(z) + Q(z) ) / z^m`, polynomials in
    /// ascending-degree sparse form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly_str = |p: &Poly| -> String {
            if p.is_zero() {
                return "0".to_string();
            }
            let mut parts = Vec::new();
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = crate::exact::rational_str(c);
                parts.push(match i {
                    0 => c,
                    1 => format!("{c}*z"),
                    _ => format!("{c}*z^{i}"),
                });
            }
            parts.join(" + ")
        };
        write!(f, "( ({})*exp(z) + ({}) )", poly_str(&self.p), poly_str(&self.q))?;
        if self.m > 0 {
            write!(f, " / z^{}", self.m)?;
        }
        Ok(())
    }
}
