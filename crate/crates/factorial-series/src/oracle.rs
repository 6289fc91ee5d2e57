//! Independent brute-force evaluation of every series by direct truncated
//! summation, in exact rational arithmetic, with truncation diagnostics.
//!
//! Nothing here goes through divided differences; these sums are the
//! ground truth every closed form is checked against.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exact::{factorial, rational_str, Rational};
use crate::series::SeriesCoeffs;
use crate::Result;

const LOOP_GUARD: u64 = 1_000_000_000;

/// How the infinite sums are truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationMode {
    /// Each index runs over its natural start up to `depth` (the
    /// definition's nested-sum shape, literally; cost depth^k).
    PerIndex,
    /// Indices are capped by total degree `n_1 + ... + n_k <= depth`
    /// (polynomial cost, enables large k).
    TotalDegree,
}

#[derive(Clone, Copy, Debug)]
pub struct TruncationSpec {
    pub depth: u64,
    pub mode: TruncationMode,
}

impl TruncationSpec {
    pub fn per_index(depth: u64) -> Self {
        TruncationSpec {
            depth,
            mode: TruncationMode::PerIndex,
        }
    }

    pub fn total_degree(depth: u64) -> Self {
        TruncationSpec {
            depth,
            mode: TruncationMode::TotalDegree,
        }
    }
}

/// A truncated partial sum plus a heuristic bound on the first omitted
/// total-degree shell (magnitude x 2). The bound is diagnostic only;
/// comparisons always use explicit tolerances.
#[derive(Clone, Debug)]
pub struct OracleValue {
    pub partial: Rational,
    pub tail_bound: Rational,
}

fn guard_per_index(k: u32, depth: u64) -> Result<()> {
    let mut count: u64 = 1;
    for _ in 0..k {
        count = count.saturating_mul(depth);
        if count > LOOP_GUARD {
            return Err(Error::ResourceGuard(format!(
                "per-index enumeration would exceed {LOOP_GUARD} loop iterations"
            )));
        }
    }
    Ok(())
}

/// Truncated convolution of integer coefficient vectors.
fn conv_int(a: &[BigInt], b: &[BigInt], max_deg: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); max_deg + 1];
    for (i, ai) in a.iter().enumerate().take(max_deg + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(max_deg + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn conv_rat(a: &[Rational], b: &[Rational], max_deg: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); max_deg + 1];
    for (i, ai) in a.iter().enumerate().take(max_deg + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(max_deg + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Shell weights for S_{k,j}: coefficient of t^n in
/// `(sum_{m=1}^{cap} m t^m)^j (sum_{m=1}^{cap} t^m)^(k-j)` up to max_deg.
/// With cap >= max_deg this is the unbounded shell weight.
fn skj_shell_weights(k: u32, j: u32, cap: u64, max_deg: usize) -> Vec<BigInt> {
    let top = (max_deg as u64).min(cap) as usize;
    let mut weighted = vec![BigInt::zero(); top + 1];
    let mut plain = vec![BigInt::zero(); top + 1];
    for m in 1..=top {
        weighted[m] = BigInt::from(m);
        plain[m] = BigInt::one();
    }
    let mut acc = vec![BigInt::one()];
    for _ in 0..j {
        acc = conv_int(&acc, &weighted, max_deg);
    }
    for _ in 0..(k - j) {
        acc = conv_int(&acc, &plain, max_deg);
    }
    acc.resize(max_deg + 1, BigInt::zero());
    acc
}

/// Truncated partial sum of
/// `sum_{n_1>=1} ... sum_{n_k>=1} n_1...n_j / (n_1+...+n_k)!`.
pub fn oracle_skj(k: u32, j: u32, trunc: &TruncationSpec) -> Result<OracleValue> {
    if k < 1 || j > k {
        return Err(Error::ArgRange(format!("need 1 <= k and 0 <= j <= k, got k={k}, j={j}")));
    }
    let n = trunc.depth;
    let buckets: Vec<BigInt> = match trunc.mode {
        TruncationMode::PerIndex => {
            guard_per_index(k, n)?;
            // literal nested loops; bucket the integer weights by total sum
            let mut buckets = vec![0u128; (k as u64 * n + 1) as usize];
            let mut stack = vec![(0u32, 0u64, 1u128)];
            while let Some((idx, total, weight)) = stack.pop() {
                if idx == k {
                    buckets[total as usize] += weight;
                    continue;
                }
                for m in 1..=n {
                    let w = if idx < j { weight * m as u128 } else { weight };
                    stack.push((idx + 1, total + m, w));
                }
            }
            buckets.into_iter().map(BigInt::from).collect()
        }
        TruncationMode::TotalDegree => skj_shell_weights(k, j, n, n as usize),
    };
    let mut partial = Rational::zero();
    for (total, w) in buckets.iter().enumerate() {
        if !w.is_zero() {
            partial += Rational::new(w.clone(), factorial(total as u64));
        }
    }
    // first omitted total-degree shell
    let omitted = match trunc.mode {
        TruncationMode::PerIndex => n + k as u64,
        TruncationMode::TotalDegree => n + 1,
    } as usize;
    let w = skj_shell_weights(k, j, u64::MAX, omitted)
        .pop()
        .unwrap_or_else(BigInt::zero);
    let tail_bound = Rational::new(w * BigInt::from(2), factorial(omitted as u64));
    Ok(OracleValue { partial, tail_bound })
}

fn power_vector(x: &Rational, start: u64, top: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); top + 1];
    let mut p = Rational::one();
    for _ in 0..start {
        p *= x;
    }
    for slot in v.iter_mut().skip(start as usize) {
        *slot = p.clone();
        p *= x;
    }
    v
}

/// Shell coefficients of `prod_i (sum_{m>=start} x_i^m t^m)` up to max_deg,
/// with each index capped at `cap`.
fn node_shells(nodes: &[Rational], start: u64, cap: u64, max_deg: usize) -> Vec<Rational> {
    let top = (max_deg as u64).min(cap) as usize;
    let mut acc = vec![Rational::one()];
    for x in nodes {
        let v = power_vector(x, start, top);
        acc = conv_rat(&acc, &v, max_deg);
    }
    acc.resize(max_deg + 1, Rational::zero());
    acc
}

/// Truncated partial sum of
/// `sum_{n_i>=1} x_1^{n_1}...x_k^{n_k} / (n_1+...+n_k)!`.
pub fn oracle_sk_of_x(
    nodes: &[Rational],
    trunc: &TruncationSpec,
) -> Result<OracleValue> {
    let k = nodes.len() as u32;
    if k < 1 {
        return Err(Error::ArgRange("need at least one node".into()));
    }
    let n = trunc.depth;
    let buckets: Vec<Rational> = match trunc.mode {
        TruncationMode::PerIndex => {
            guard_per_index(k, n)?;
            let top = (k as u64 * n) as usize;
            let mut pow: Vec<Vec<Rational>> = Vec::new();
            for x in nodes {
                pow.push(power_vector(x, 0, n as usize));
            }
            let mut buckets = vec![Rational::zero(); top + 1];
            let mut stack = vec![(0usize, 0u64, Rational::one())];
            while let Some((idx, total, prod)) = stack.pop() {
                if idx == nodes.len() {
                    buckets[total as usize] += prod;
                    continue;
                }
                for m in 1..=n {
                    stack.push((idx + 1, total + m, &prod * &pow[idx][m as usize]));
                }
            }
            buckets
        }
        TruncationMode::TotalDegree => node_shells(nodes, 1, n, n as usize),
    };
    let mut partial = Rational::zero();
    for (total, c) in buckets.iter().enumerate() {
        if !c.is_zero() {
            partial += c / Rational::from_integer(factorial(total as u64).into());
        }
    }
    let omitted = match trunc.mode {
        TruncationMode::PerIndex => n + k as u64,
        TruncationMode::TotalDegree => n + 1,
    } as usize;
    let abs_nodes: Vec<Rational> = nodes.iter().map(|x| x.abs()).collect();
    let shell = node_shells(&abs_nodes, 1, u64::MAX, omitted)
        .pop()
        .unwrap_or_else(Rational::zero);
    let tail_bound =
        shell * Rational::new(BigInt::from(2), factorial(omitted as u64));
    Ok(OracleValue { partial, tail_bound })
}

/// Truncated partial sum of
/// `sum_{n_i>=0} g_{n_1+...+n_k+ell} x_1^{n_1}...x_k^{n_k}`.
pub fn oracle_gkl(
    coeffs: &SeriesCoeffs,
    ell: u32,
    nodes: &[Rational],
    trunc: &TruncationSpec,
) -> Result<OracleValue> {
    let k = nodes.len() as u32;
    if k < 1 {
        return Err(Error::ArgRange("need at least one node".into()));
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
    let n = trunc.depth;
    if trunc.mode == TruncationMode::PerIndex {
        guard_per_index(k, n + 1)?;
    }
    let (cap, max_deg) = match trunc.mode {
        TruncationMode::PerIndex => (n, (k as u64 * n) as usize),
        TruncationMode::TotalDegree => (n, n as usize),
    };
    let shells = node_shells(nodes, 0, cap, max_deg);
    let mut partial = Rational::zero();
    for (total, c) in shells.iter().enumerate() {
        if !c.is_zero() {
            partial += c * coeffs.coeff(total as u64 + u64::from(ell));
        }
    }
    let omitted = (n + 1) as usize;
    let abs_nodes: Vec<Rational> = nodes.iter().map(|x| x.abs()).collect();
    let shell = node_shells(&abs_nodes, 0, u64::MAX, omitted)
        .pop()
        .unwrap_or_else(Rational::zero);
    let tail_bound = shell
        * coeffs.coeff(omitted as u64 + u64::from(ell)).abs()
        * Rational::from_integer(BigInt::from(2));
    Ok(OracleValue { partial, tail_bound })
}
