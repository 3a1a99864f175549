//! Reference computations that do not go through `prstirling` or `bell`.
//!
//! Everything here is built from `kernel` primitives and raw moments
//! `E[Y^m]` only; none of it touches the sum-moment tables.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::kernel::{
    convert_basis, degenerate_falling_coeffs, factorial, shift_argument, stirling1_signed, Basis,
    DegenerateParameter, Polynomial,
};
use crate::moments::MomentOracle;
use crate::scalar::ExactScalar;

/// Coefficients of `(x)_k` in `(x + r)_{n,lambda}`, the degenerate r-Stirling
/// numbers `S2^{(r)}_lambda(n+r, k+r)`, padded to length `n + 1`.
pub fn degenerate_r_stirling_row(n: usize, lambda: &DegenerateParameter, r: usize) -> Vec<ExactScalar> {
    let shifted = shift_argument(&degenerate_falling_coeffs(n, lambda), r);
    padded(&convert_basis(&shifted, Basis::FallingFactorial), n + 1)
}

/// Coefficients of `(x)_k` in `(x + r)^n`, the classical r-Stirling numbers.
pub fn classical_r_stirling_row(n: usize, r: usize) -> Vec<ExactScalar> {
    let shifted = shift_argument(&Polynomial::unit(Basis::Monomial, n), r);
    padded(&convert_basis(&shifted, Basis::FallingFactorial), n + 1)
}

fn padded(p: &Polynomial, len: usize) -> Vec<ExactScalar> {
    (0..len).map(|k| p.coefficient(k)).collect()
}

/// Counts partitions of `{1..total}` into `blocks` non-empty blocks with
/// `1..=distinct` in pairwise different blocks, by walking every restricted
/// growth string.
pub fn count_partitions(total: usize, blocks: usize, distinct: usize) -> u64 {
    fn walk(labels: &mut Vec<usize>, used: usize, total: usize, blocks: usize, distinct: usize) -> u64 {
        if labels.len() == total {
            return u64::from(used == blocks);
        }
        let i = labels.len();
        let mut count = 0;
        for label in 0..=used {
            if label >= blocks {
                break;
            }
            // The first `distinct` elements each open a fresh block.
            if i < distinct && label != used {
                continue;
            }
            labels.push(label);
            count += walk(labels, used.max(label + 1), total, blocks, distinct);
            labels.pop();
        }
        count
    }
    if distinct > total {
        return 0;
    }
    walk(&mut Vec::with_capacity(total), 0, total, blocks, distinct)
}

/// Truncated ordinary power series in `t`.
#[derive(Debug, Clone)]
struct Series(Vec<ExactScalar>);

impl Series {
    fn one(len: usize) -> Self {
        let mut c = vec![ExactScalar::zero(); len];
        c[0] = ExactScalar::one();
        Self(c)
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.0.len();
        let mut out = vec![ExactScalar::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().take(len - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self(out)
    }
}

/// `S2^{(r,Y)}_lambda(n+r, k+r)` for `k = 0..=n`, read off as
/// `n!/k! [t^n] A(t)^k (1 + A(t))^r` where
/// `A(t) = E[e_lambda^Y(t)] - 1 = sum_{i>=1} E[(Y)_{i,lambda}] t^i / i!`.
///
/// Only raw moments of `Y` are used; the r-fold product stands in for the
/// sum `S_r` by independence.
pub fn generating_function_row(
    y: &MomentOracle,
    lambda: &DegenerateParameter,
    r: usize,
    n: usize,
) -> Result<Vec<ExactScalar>> {
    let len = n + 1;
    let mut a = vec![ExactScalar::zero(); len];
    for (i, slot) in a.iter_mut().enumerate().skip(1) {
        let mut falling_moment = ExactScalar::zero();
        for k in 0..=i {
            falling_moment += stirling1_signed(i, k) * lambda.pow(i - k) * y.moment(k)?;
        }
        *slot = falling_moment / factorial(i);
    }
    let a = Series(a);
    let mut one_plus_a = a.clone();
    one_plus_a.0[0] = ExactScalar::one();

    let mut shift = Series::one(len);
    for _ in 0..r {
        shift = shift.mul(&one_plus_a);
    }
    let mut power = shift; // A^k (1 + A)^r
    let n_fact = factorial(n);
    let mut row = Vec::with_capacity(len);
    for k in 0..=n {
        row.push(&power.0[n] * &n_fact / factorial(k));
        power = power.mul(&a);
    }
    Ok(row)
}
