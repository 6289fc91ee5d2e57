//! Divided differences: the exact recursion over `ExpPoly` on distinct
//! rational nodes, the confluent (all-nodes-equal) limit via the derivative
//! formula, and Popoviciu's monomial identity.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::exact::{explin_axpy, factorial, rational_str, ExpLinear, Rational};
use crate::exppoly::ExpPoly;
use crate::Result;

/// Ordered list of pairwise-distinct nonzero rational nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSet {
    nodes: Vec<Rational>,
}

impl NodeSet {
    pub fn new(nodes: Vec<Rational>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::ArgRange("node set must be nonempty".into()));
        }
        for (i, x) in nodes.iter().enumerate() {
            if x.is_zero() {
                return Err(Error::ZeroNode(rational_str(x)));
            }
            if nodes[..i].contains(x) {
                return Err(Error::DuplicateNode(rational_str(x)));
            }
        }
        Ok(NodeSet { nodes })
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn product(&self) -> Rational {
        self.nodes.iter().product()
    }
}

/// Exact divided difference `[x_1, ..., x_k; f]` by the textbook recursion,
/// realized as a Newton tableau over `ExpLinear` values.
pub fn divdiff_exact(f: &ExpPoly, nodes: &NodeSet) -> Result<ExpLinear> {
    let xs = nodes.nodes();
    let mut col: Vec<ExpLinear> = xs.iter().map(|x| f.eval_at(x)).collect::<Result<_>>()?;
    for level in 1..xs.len() {
        for i in 0..(xs.len() - level) {
            let diff = col[i + 1].sub(&col[i]);
            let gap = &xs[i + level] - &xs[i];
            col[i] = diff.scale(&gap.recip());
        }
        col.truncate(xs.len() - level);
    }
    Ok(col.swap_remove(0))
}

/// The confluent limit of a k-node divided difference with j coordinates
/// differentiated, all nodes at x:
/// `(1/(k+j-1)!) * (d/dz)^(k+j-1) f(z) | z=x`.
///
/// `f` must already be the full integrand, e.g. `z^(k-1) g_ell(z)`.
pub fn confluent_divdiff(f: &ExpPoly, k: u32, j: u32, x: &Rational) -> Result<ExpLinear> {
    if k < 1 {
        return Err(Error::ArgRange("k must be >= 1".into()));
    }
    if x.is_zero() {
        return Err(Error::ZeroNode("0".into()));
    }
    let order = k + j - 1;
    let deriv = f.nth_derivative(order);
    let v = deriv.eval_at(x)?;
    let scale = Rational::new(BigInt::one(), factorial(order.into()));
    Ok(explin_axpy(&scale, &v, &ExpLinear::zero()))
}

/// Complete homogeneous symmetric polynomial of degree r in the node
/// values; by Popoviciu's identity this equals the divided difference of
/// the monomial `z^(k-1+r)` over the k nodes.
pub fn popoviciu_h(nodes: &NodeSet, r: u32) -> Rational {
    let mut h = vec![Rational::zero(); (r + 1) as usize];
    h[0] = Rational::one();
    for x in nodes.nodes() {
        for d in 1..=(r as usize) {
            let add = x * &h[d - 1];
            h[d] += add;
        }
    }
    h.pop().unwrap()
}
