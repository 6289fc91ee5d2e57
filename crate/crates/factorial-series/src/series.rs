//! Closed forms for all the factorial series: S_{k,j} (three independent
//! routes), S_{k,0}, a_k, f_{k,l}, S_k(x_1,...,x_k), and the generalized
//! G_{k,l} for pluggable power-series coefficients.

use num_traits::{One, ToPrimitive, Zero};

use crate::divdiff::{confluent_divdiff, divdiff_exact, NodeSet};
use crate::error::Error;
use crate::exact::{binomial, factorial, inv_factorial, rational_str, ExpLinear, Rational};
use crate::exppoly::build_zk_expell;
use crate::numeric::{divdiff_numeric, Fixed};
use crate::Result;

/// Coefficient provider for a power series `g(z) = sum g_n z^n` with its
/// radius of convergence.
pub struct SeriesCoeffs {
    name: String,
    radius: f64,
    coeff: Box<dyn Fn(u64) -> Rational + Send + Sync>,
}

impl SeriesCoeffs {
    pub fn new(
        name: impl Into<String>,
        radius: f64,
        coeff: impl Fn(u64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        SeriesCoeffs {
            name: name.into(),
            radius,
            coeff: Box::new(coeff),
        }
    }

    /// g = exp: g_n = 1/n!, infinite radius.
    pub fn exp() -> Self {
        SeriesCoeffs::new("exp", f64::INFINITY, |n| inv_factorial(n))
    }

    /// g = 1/(1-z): g_n = 1, radius 1.
    pub fn geometric() -> Self {
        SeriesCoeffs::new("geometric", 1.0, |_| Rational::one())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coeff(&self, n: u64) -> Rational {
        (self.coeff)(n)
    }
}

/// Which exponent to pair with `g_ell` inside the divided difference.
/// The identity is sometimes written with `z^(ell-1) g_ell(z)`, but the
/// k = 1 sanity case (and the derivation) require `z^(k-1) g_ell(z)`;
/// the latter is the default and the former stays selectable for audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivdiffExponent {
    /// z^(k-1) g_ell(z) — the working reading.
    NodeCount,
    /// z^(ell-1) g_ell(z) — the alternative reading.
    TailIndex,
}

fn check_kj(k: u32, j: u32) -> Result<()> {
    if k < 1 {
        return Err(Error::ArgRange("k must be >= 1".into()));
    }
    if j > k {
        return Err(Error::ArgRange(format!("j must satisfy 0 <= j <= k, got j={j}, k={k}")));
    }
    Ok(())
}

/// S_{k,j} via the confluent derivative route:
/// `(1/(k+j-1)!) (d/dz)^(k+j-1) z^(k-1) exp_{k-j}(z) | z=1`.
pub fn s_kj_theorem(k: u32, j: u32) -> Result<ExpLinear> {
    check_kj(k, j)?;
    let f = build_zk_expell(k, k - j)?;
    confluent_divdiff(&f, k, j, &Rational::one())
}

/// S_{k,j} for j >= 1 via the explicit binomial formula:
/// `e * sum_{i=0}^{j-1} C(j-1, i) / (k+j-i-1)!`.
pub fn s_kj_binomial(k: u32, j: u32) -> Result<ExpLinear> {
    check_kj(k, j)?;
    if j == 0 {
        return Err(Error::ArgRange("j = 0 has no binomial form; use s_k0".into()));
    }
    let mut coeff = Rational::zero();
    for i in 0..j {
        let b = binomial((j - 1).into(), i.into());
        coeff += Rational::new(b, factorial((k + j - i - 1).into()));
    }
    Ok(ExpLinear::term(Rational::one(), coeff))
}

/// S_{k,0} = (-1)^k (1 - e sum_{j=0}^{k-1} (-1)^j / j!).
pub fn s_k0(k: u32) -> Result<ExpLinear> {
    if k < 1 {
        return Err(Error::ArgRange("k must be >= 1".into()));
    }
    let mut partial = Rational::zero();
    for j in 0..k {
        let t = inv_factorial(j.into());
        if j % 2 == 0 {
            partial += t;
        } else {
            partial -= t;
        }
    }
    let sign = if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    Ok(ExpLinear::new(
        sign.clone(),
        vec![(Rational::one(), -sign * partial)],
    ))
}

/// a_k = e^{-1} S_k = sum_{i=0}^{k-1} C(k-1, i) / (2k-i-1)!.
pub fn a_k(k: u32) -> Result<Rational> {
    if k < 1 {
        return Err(Error::ArgRange("k must be >= 1".into()));
    }
    let mut acc = Rational::zero();
    for i in 0..k {
        let b = binomial((k - 1).into(), i.into());
        acc += Rational::new(b, factorial((2 * k - i - 1).into()));
    }
    Ok(acc)
}

/// f_{k,ell}(x_1,...,x_k) = [x_1,...,x_k; z^(k-1) exp_ell(z)].
pub fn f_kl(k: u32, ell: u32, nodes: &NodeSet) -> Result<ExpLinear> {
    if nodes.len() != k as usize {
        return Err(Error::ArgRange(format!(
            "expected {k} nodes, got {}",
            nodes.len()
        )));
    }
    let f = build_zk_expell(k, ell)?;
    divdiff_exact(&f, nodes)
}

/// S_k(x_1,...,x_k) = x_1...x_k * f_{k,k}(x_1,...,x_k).
pub fn s_k_of_x(k: u32, nodes: &NodeSet) -> Result<ExpLinear> {
    let f = f_kl(k, k, nodes)?;
    Ok(f.scale(&nodes.product()))
}

/// Numeric G_{k,ell}: divided difference of `z^(k-1) g_ell(z)` over the
/// given nodes, series summed to the working precision.
pub fn g_kl_numeric(
    coeffs: &SeriesCoeffs,
    k: u32,
    ell: u32,
    nodes: &[Rational],
    digits: u32,
) -> Result<Fixed> {
    g_kl_numeric_with_exponent(coeffs, k, ell, nodes, digits, DivdiffExponent::NodeCount)
}

pub fn g_kl_numeric_with_exponent(
    coeffs: &SeriesCoeffs,
    k: u32,
    ell: u32,
    nodes: &[Rational],
    digits: u32,
    exponent: DivdiffExponent,
) -> Result<Fixed> {
    if k < 1 || nodes.len() != k as usize {
        return Err(Error::ArgRange(format!(
            "need exactly k >= 1 nodes, got k={k} and {} nodes",
            nodes.len()
        )));
    }
    for x in nodes {
        let xf = x.to_f64().unwrap_or(f64::INFINITY);
        if xf.abs() >= coeffs.radius() {
            return Err(Error::RadiusViolation {
                node: rational_str(x),
                radius: coeffs.radius(),
            });
        }
    }
    let scale = digits + 25;
    let power = match exponent {
        DivdiffExponent::NodeCount => k - 1,
        DivdiffExponent::TailIndex => {
            if ell < 1 {
                return Err(Error::ArgRange(
                    "the z^(ell-1) reading needs ell >= 1".into(),
                ));
            }
            ell - 1
        }
    };
    let fvals: Vec<Fixed> = nodes
        .iter()
        .map(|x| {
            let tail = g_ell_series(coeffs, ell, x, digits)?;
            let mut xp = Rational::one();
            for _ in 0..power {
                xp *= x;
            }
            Ok(tail.mul(&Fixed::from_rational(&xp, scale)))
        })
        .collect::<Result<_>>()?;
    let node_fx: Vec<Fixed> = nodes.iter().map(|x| Fixed::from_rational(x, scale)).collect();
    divdiff_numeric(&fvals, &node_fx)
}

/// `g_ell(x) = sum_{n>=0} coeff(n+ell) x^n`, summed until the next term
/// falls below 10^-(digits+10), with a ratio-test guard against premature
/// stops and a hard iteration cap.
fn g_ell_series(coeffs: &SeriesCoeffs, ell: u32, x: &Rational, digits: u32) -> Result<Fixed> {
    let scale = digits + 25;
    let threshold = digits + 10;
    let xf = Fixed::from_rational(x, scale);
    let mut acc = Fixed::zero(scale);
    let mut xpow = Fixed::from_rational(&Rational::one(), scale);
    let mut prev_mag: Option<Fixed> = None;
    for n in 0..200_000u64 {
        let term = Fixed::from_rational(&coeffs.coeff(n + u64::from(ell)), scale).mul(&xpow);
        acc = acc.add(&term);
        let mag = term.abs();
        let small = mag.abs_below_pow10(threshold);
        let decreasing = prev_mag
            .as_ref()
            .map(|p| mag.cmp_value(p).is_le())
            .unwrap_or(false);
        if small && decreasing && n > 2 {
            return Ok(acc);
        }
        prev_mag = Some(mag);
        xpow = xpow.mul(&xf);
    }
    Err(Error::ResourceGuard(
        "series did not converge within 200000 terms".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::make_rational;

    fn r(p: i64, q: i64) -> Rational {
        make_rational(p, q).unwrap()
    }

    fn e_times(p: i64, q: i64) -> ExpLinear {
        ExpLinear::term(r(1, 1), r(p, q))
    }

    #[test]
    fn skj_theorem_table_entries() {
        // S_{1,1} = sum n/n! = e; the published table entry "1" is its
        // e-coefficient
        assert_eq!(s_kj_theorem(1, 1).unwrap(), e_times(1, 1));
        assert_eq!(s_kj_theorem(3, 3).unwrap(), e_times(31, 120));
        assert_eq!(s_kj_theorem(4, 3).unwrap(), e_times(43, 720));
        assert_eq!(
            s_kj_theorem(5, 0).unwrap(),
            ExpLinear::new(r(-1, 1), vec![(r(1, 1), r(3, 8))])
        );
    }

    #[test]
    fn skj_binomial_table_entries() {
        assert_eq!(s_kj_binomial(2, 2).unwrap(), e_times(2, 3));
        assert_eq!(s_kj_binomial(5, 1).unwrap(), e_times(1, 120));
        assert_eq!(s_kj_binomial(5, 5).unwrap(), e_times(787, 51840));
    }

    #[test]
    fn skj_range_checks() {
        assert!(s_kj_theorem(2, 3).is_err());
        assert!(s_kj_binomial(3, 0).is_err());
    }

    #[test]
    fn sk0_values() {
        assert_eq!(s_k0(2).unwrap(), ExpLinear::from_constant(r(1, 1)));
        assert_eq!(
            s_k0(3).unwrap(),
            ExpLinear::new(r(-1, 1), vec![(r(1, 1), r(1, 2))])
        );
        assert_eq!(
            s_k0(4).unwrap(),
            ExpLinear::new(r(1, 1), vec![(r(1, 1), r(-1, 3))])
        );
    }

    #[test]
    fn ak_values() {
        assert_eq!(a_k(1).unwrap(), r(1, 1));
        assert_eq!(a_k(4).unwrap(), r(179, 2520));
        assert_eq!(a_k(5).unwrap(), r(787, 51840));
    }

    #[test]
    fn f10_is_exponential() {
        let nodes = NodeSet::new(vec![r(2, 3)]).unwrap();
        assert_eq!(
            f_kl(1, 0, &nodes).unwrap(),
            ExpLinear::term(r(2, 3), r(1, 1))
        );
    }

    #[test]
    fn f11_at_one_is_e_minus_one() {
        let nodes = NodeSet::new(vec![r(1, 1)]).unwrap();
        assert_eq!(
            f_kl(1, 1, &nodes).unwrap(),
            ExpLinear::new(r(-1, 1), vec![(r(1, 1), r(1, 1))])
        );
    }

    #[test]
    fn sk_of_x_single_node_one() {
        let nodes = NodeSet::new(vec![r(1, 1)]).unwrap();
        assert_eq!(
            s_k_of_x(1, &nodes).unwrap(),
            ExpLinear::new(r(-1, 1), vec![(r(1, 1), r(1, 1))])
        );
    }

    #[test]
    fn g_geometric_product_formula() {
        let v = g_kl_numeric(&SeriesCoeffs::geometric(), 2, 0, &[r(1, 5), r(1, 2)], 20).unwrap();
        let expect = Fixed::from_rational(&r(5, 2), v.scale());
        assert!(v.sub(&expect).abs_below_pow10(18));
    }

    #[test]
    fn g_exp_single_node() {
        let v = g_kl_numeric(&SeriesCoeffs::exp(), 1, 0, &[r(3, 10)], 25).unwrap();
        // e^{0.3}
        let expect = (0.3f64).exp();
        assert!((v.to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn g_radius_guard() {
        let err = g_kl_numeric(&SeriesCoeffs::geometric(), 1, 0, &[r(3, 2)], 20);
        assert!(matches!(err, Err(Error::RadiusViolation { .. })));
    }
}
