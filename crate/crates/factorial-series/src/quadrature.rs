//! Simplex quadrature cross-check for the integral representation of
//! divided differences: nested Gauss-Legendre integration of f^(k-1) over
//! the ordered-simplex parametrization, for 2 to 4 nodes.

use crate::error::Error;
use crate::Result;

/// A function smooth enough to expose derivatives of any order.
pub trait SmoothFn {
    fn deriv(&self, order: u32, x: f64) -> f64;
}

/// e^z; every derivative is itself.
pub struct ExpFn;

impl SmoothFn for ExpFn {
    fn deriv(&self, _order: u32, x: f64) -> f64 {
        x.exp()
    }
}

/// z^n with falling-factorial derivatives.
pub struct Monomial(pub u32);

impl SmoothFn for Monomial {
    fn deriv(&self, order: u32, x: f64) -> f64 {
        if order > self.0 {
            return 0.0;
        }
        let mut c = 1.0;
        for i in 0..order {
            c *= (self.0 - i) as f64;
        }
        c * x.powi((self.0 - order) as i32)
    }
}

/// Gauss-Legendre nodes and weights on [0, 1].
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 1..=n {
        // initial guess on [-1, 1], then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push(((x + 1.0) / 2.0, w / 2.0));
    }
    rule
}

/// P_n(x) and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for m in 2..=n {
        let m = m as f64;
        let p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

const POINTS_PER_AXIS: usize = 32;

/// Approximates `[x_1,...,x_k; f]` via the simplex integral of f^(k-1):
///
/// ```text
/// int_0^1 int_0^{t_1} ... f^(k-1)(x_1 + (x_2-x_1)t_1 + ...) dt_{k-1}...dt_1
/// ```
///
/// Supported for 2 <= k <= 4 nodes (cost 32^(k-1) evaluations).
pub fn simplex_quadrature_check(f: &dyn SmoothFn, nodes: &[f64]) -> Result<f64> {
    let k = nodes.len();
    if !(2..=4).contains(&k) {
        return Err(Error::ArgRange(
            "simplex quadrature supports 2 to 4 nodes".into(),
        ));
    }
    let rule = gauss_legendre_unit(POINTS_PER_AXIS);
    let dims = k - 1;
    let order = (k - 1) as u32;
    // substitution t_i = u_i * t_{i-1} maps the ordered simplex to the unit
    // cube with Jacobian prod t_i over the inner axes
    let mut total = 0.0;
    let mut idx = vec![0usize; dims];
    loop {
        let mut t_prev = 1.0;
        let mut arg = nodes[0];
        let mut weight = 1.0;
        for d in 0..dims {
            let (u, w) = rule[idx[d]];
            let t = u * t_prev;
            arg += (nodes[d + 1] - nodes[d]) * t;
            weight *= w;
            if d + 1 < dims {
                weight *= t;
            }
            t_prev = t;
        }
        total += weight * f.deriv(order, arg);
        // odometer over the tensor grid
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < POINTS_PER_AXIS {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == dims {
                return Ok(total);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let rule = gauss_legendre_unit(32);
        let wsum: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((wsum - 1.0).abs() < 1e-14);
        // int_0^1 x^10 dx = 1/11
        let v: f64 = rule.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((v - 1.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn two_nodes_exponential() {
        // int_0^1 e^{1+t} dt = e^2 - e
        let v = simplex_quadrature_check(&ExpFn, &[1.0, 2.0]).unwrap();
        let expect = (2.0f64).exp() - 1.0f64.exp();
        assert!((v - expect).abs() < 1e-10);
    }

    #[test]
    fn three_nodes_cubic_matches_divided_difference() {
        let nodes = [0.5, 1.0, 1.5];
        let v = simplex_quadrature_check(&Monomial(3), &nodes).unwrap();
        // second divided difference of x^3 is x0 + x1 + x2
        let expect = nodes.iter().sum::<f64>();
        assert!((v - expect).abs() < 1e-10);
    }

    #[test]
    fn node_count_guard() {
        assert!(simplex_quadrature_check(&ExpFn, &[1.0]).is_err());
        assert!(simplex_quadrature_check(&ExpFn, &[1.0, 2.0, 3.0, 4.0, 5.0]).is_err());
    }
}
