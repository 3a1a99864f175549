//! Probabilistic degenerate Stirling and r-Stirling numbers of the second kind.
//!
//! `S2^{(r,Y)}_lambda(n+r, k+r)` is the coefficient of `t^n/n!` in
//! `(E[e_lambda^Y(t)] - 1)^k / k! * E[e_lambda^{S_r}(t)]`. Three closed forms
//! are provided:
//!
//! * [`StirlingContext::prob_r_stirling2`]: alternating sum over
//!   `E[(S_{j+r})_{n,lambda}]`. This is the production path and the only
//!   one that is memoized.
//! * [`StirlingContext::prob_r_stirling2_via_conv`]: binomial convolution of
//!   `S2^Y_lambda(l,k)` with the degenerate expansion of `E[S_r^m]`.
//! * [`StirlingContext::prob_r_stirling2_via_shift`]: finite binomial series
//!   in `S2^Y_lambda(n, m+k)`, truncated at `m = r`.
//!
//! Indices with `k > n` give zero.

use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::kernel::{binomial, factorial, stirling1_signed, DegenerateParameter};
use crate::moments::MomentOracle;
use crate::scalar::{format_rational, ExactScalar};

/// `S2^Y_lambda(n,k) = (1/k!) sum_j C(k,j) (-1)^(k-j) E[(S_j)_{n,lambda}]`.
pub fn prob_stirling2(
    y: &MomentOracle,
    lambda: &DegenerateParameter,
    n: usize,
    k: usize,
) -> Result<ExactScalar> {
    alternating_sum(y, lambda, 0, n, k)
}

fn alternating_sum(
    y: &MomentOracle,
    lambda: &DegenerateParameter,
    r: usize,
    n: usize,
    k: usize,
) -> Result<ExactScalar> {
    if k > n {
        return Ok(ExactScalar::zero());
    }
    let mut acc = ExactScalar::zero();
    for j in 0..=k {
        let term = binomial(k, j) * y.degenerate_factorial_moment(j + r, n, lambda)?;
        if (k - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / factorial(k))
}

/// The triple `(Y, lambda, r)` plus memoized rows.
#[derive(Debug)]
pub struct StirlingContext {
    oracle: Arc<MomentOracle>,
    lambda: DegenerateParameter,
    r: usize,
    rows: RwLock<Vec<Vec<ExactScalar>>>,
    base_rows: RwLock<Vec<Vec<ExactScalar>>>,
}

impl Clone for StirlingContext {
    fn clone(&self) -> Self {
        Self {
            oracle: Arc::clone(&self.oracle),
            lambda: self.lambda.clone(),
            r: self.r,
            rows: RwLock::new(self.rows.read().unwrap().clone()),
            base_rows: RwLock::new(self.base_rows.read().unwrap().clone()),
        }
    }
}

/// Contexts are equal when distribution, lambda and r agree; caches are ignored.
impl PartialEq for StirlingContext {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for StirlingContext {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct ContextKey {
    pub dist: String,
    pub lambda: String,
    pub r: usize,
}

impl StirlingContext {
    pub fn new(oracle: Arc<MomentOracle>, lambda: DegenerateParameter, r: usize) -> Self {
        Self {
            oracle,
            lambda,
            r,
            rows: RwLock::new(Vec::new()),
            base_rows: RwLock::new(Vec::new()),
        }
    }

    pub fn oracle(&self) -> &MomentOracle {
        &self.oracle
    }

    pub fn shared_oracle(&self) -> Arc<MomentOracle> {
        Arc::clone(&self.oracle)
    }

    pub fn lambda(&self) -> &DegenerateParameter {
        &self.lambda
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn key(&self) -> ContextKey {
        ContextKey {
            dist: self.oracle.distribution().to_string(),
            lambda: format_rational(self.lambda.value()),
            r: self.r,
        }
    }

    /// The same `(Y, lambda)` with `r = 0`.
    pub fn base(&self) -> Self {
        Self::new(Arc::clone(&self.oracle), self.lambda.clone(), 0)
    }

    /// `S2^{(r,Y)}_lambda(n+r, k+r)` by the alternating sum over
    /// `E[(S_{j+r})_{n,lambda}]`. Memoized by row.
    pub fn prob_r_stirling2(&self, n: usize, k: usize) -> Result<ExactScalar> {
        if k > n {
            return Ok(ExactScalar::zero());
        }
        Ok(self.row(n)?[k].clone())
    }

    /// Row `n`: `S2^{(r,Y)}_lambda(n+r, k+r)` for `k = 0..=n`.
    pub fn row(&self, n: usize) -> Result<Vec<ExactScalar>> {
        cached_row(&self.rows, n, |k| {
            alternating_sum(&self.oracle, &self.lambda, self.r, n, k)
        })
    }

    /// `S2^Y_lambda(n,k)` for this context's `(Y, lambda)`, memoized by row.
    pub fn prob_stirling2(&self, n: usize, k: usize) -> Result<ExactScalar> {
        if k > n {
            return Ok(ExactScalar::zero());
        }
        let row = cached_row(&self.base_rows, n, |k| {
            prob_stirling2(&self.oracle, &self.lambda, n, k)
        })?;
        Ok(row[k].clone())
    }

    /// `sum_{l=k}^{n} sum_{m=0}^{n-l} C(n,l) lambda^(n-m-l) S1(n-l,m)
    /// S2^Y_lambda(l,k) E[S_r^m]`.
    pub fn prob_r_stirling2_via_conv(&self, n: usize, k: usize) -> Result<ExactScalar> {
        if k > n {
            return Ok(ExactScalar::zero());
        }
        let mut acc = ExactScalar::zero();
        for l in k..=n {
            let base = self.prob_stirling2(l, k)?;
            if base.is_zero() {
                continue;
            }
            let mut inner = ExactScalar::zero();
            for m in 0..=n - l {
                let s1 = stirling1_signed(n - l, m);
                if s1.is_zero() {
                    continue;
                }
                inner += s1 * self.lambda.pow(n - m - l) * self.oracle.sum_moment(self.r, m)?;
            }
            acc += binomial(n, l) * base * inner;
        }
        Ok(acc)
    }

    /// `sum_{m=0}^{n-k} C(m+k,m) C(r,m) m! S2^Y_lambda(n, m+k)`; terms with
    /// `m > r` vanish.
    pub fn prob_r_stirling2_via_shift(&self, n: usize, k: usize) -> Result<ExactScalar> {
        if k > n {
            return Ok(ExactScalar::zero());
        }
        let mut acc = ExactScalar::zero();
        for m in 0..=(n - k).min(self.r) {
            acc += binomial(m + k, m)
                * binomial(self.r, m)
                * factorial(m)
                * self.prob_stirling2(n, m + k)?;
        }
        Ok(acc)
    }

    /// Rows `0..=n_max` of the production formula.
    pub fn table(&self, n_max: usize) -> Result<StirlingTable> {
        let entries = (0..=n_max).map(|n| self.row(n)).collect::<Result<Vec<_>>>()?;
        Ok(StirlingTable {
            context: self.key(),
            entries,
        })
    }
}

fn cached_row(
    cache: &RwLock<Vec<Vec<ExactScalar>>>,
    n: usize,
    entry: impl Fn(usize) -> Result<ExactScalar>,
) -> Result<Vec<ExactScalar>> {
    if let Some(row) = cache.read().unwrap().get(n) {
        if !row.is_empty() {
            return Ok(row.clone());
        }
    }
    let row = (0..=n).map(entry).collect::<Result<Vec<_>>>()?;
    let mut rows = cache.write().unwrap();
    if rows.len() <= n {
        rows.resize(n + 1, Vec::new());
    }
    rows[n] = row.clone();
    Ok(row)
}

/// Triangle `entries[n][k] = S2^{(r,Y)}_lambda(n+r, k+r)`, `0 <= k <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    pub context: ContextKey,
    pub entries: Vec<Vec<ExactScalar>>,
}

impl StirlingTable {
    pub fn get(&self, n: usize, k: usize) -> ExactScalar {
        self.entries
            .get(n)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn n_max(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }
}

/// Convenience for tests and the CLI: parse a distribution and build a context.
pub fn context(dist: &str, lambda: ExactScalar, r: usize) -> Result<StirlingContext> {
    Ok(StirlingContext::new(
        Arc::new(MomentOracle::parse(dist)?),
        DegenerateParameter::new(lambda),
        r,
    ))
}

/// `(E[Y])^n`, the diagonal value `S2^{(r,Y)}_lambda(n+r, n+r)`.
pub fn diagonal(y: &MomentOracle, n: usize) -> Result<ExactScalar> {
    let mean = y.moment(1)?;
    Ok((0..n).fold(ExactScalar::one(), |acc, _| acc * &mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn base_examples() {
        let third = DegenerateParameter::new(ratio(1, 3));
        let point = MomentOracle::parse("point(1)").unwrap();
        let bern = MomentOracle::parse("bernoulli(1/2)").unwrap();
        assert_eq!(prob_stirling2(&point, &third, 0, 0).unwrap(), int(1));
        assert_eq!(prob_stirling2(&point, &third, 2, 1).unwrap(), ratio(2, 3));
        assert_eq!(prob_stirling2(&bern, &third, 2, 1).unwrap(), ratio(1, 3));
        assert_eq!(prob_stirling2(&bern, &third, 2, 3).unwrap(), int(0));
    }

    #[test]
    fn r_examples() {
        let ctx = context("point(1)", ratio(1, 3), 1).unwrap();
        assert_eq!(ctx.prob_r_stirling2(2, 1).unwrap(), ratio(8, 3));
        assert_eq!(ctx.prob_r_stirling2_via_conv(2, 1).unwrap(), ratio(8, 3));
        assert_eq!(ctx.prob_r_stirling2_via_shift(2, 1).unwrap(), ratio(8, 3));
        for lambda in [int(0), ratio(1, 3), int(-2)] {
            let ctx = context("bernoulli(1/2)", lambda, 1).unwrap();
            assert_eq!(ctx.prob_r_stirling2(1, 0).unwrap(), ratio(1, 2));
        }
    }

    #[test]
    fn r_zero_matches_base() {
        let ctx = context("uniform{0,1,2}", ratio(-1, 2), 0).unwrap();
        for n in 0..=6 {
            for k in 0..=n {
                let base = prob_stirling2(ctx.oracle(), ctx.lambda(), n, k).unwrap();
                assert_eq!(ctx.prob_r_stirling2(n, k).unwrap(), base);
                assert_eq!(ctx.prob_r_stirling2_via_conv(n, k).unwrap(), base);
                assert_eq!(ctx.prob_r_stirling2_via_shift(n, k).unwrap(), base);
            }
        }
    }

    #[test]
    fn k_above_n_is_zero() {
        let ctx = context("poisson(1)", ratio(1, 3), 2).unwrap();
        assert_eq!(ctx.prob_r_stirling2(2, 3).unwrap(), int(0));
        assert_eq!(ctx.prob_r_stirling2_via_conv(2, 3).unwrap(), int(0));
        assert_eq!(ctx.prob_r_stirling2_via_shift(2, 5).unwrap(), int(0));
    }

    #[test]
    fn diagonal_is_power_of_mean() {
        for dist in ["point(1)", "bernoulli(1/2)", "uniform{0,1,2}", "poisson(1)", "geometric(1/3)"] {
            for r in 0..=3 {
                let ctx = context(dist, ratio(1, 3), r).unwrap();
                for n in 0..=6 {
                    assert_eq!(
                        ctx.prob_r_stirling2(n, n).unwrap(),
                        diagonal(ctx.oracle(), n).unwrap(),
                        "{dist} r={r} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn table_shape() {
        let ctx = context("point(1)", ratio(1, 3), 1).unwrap();
        let table = ctx.table(2).unwrap();
        assert_eq!(table.entries, vec![vec![int(1)], vec![int(1), int(1)], vec![ratio(2, 3), ratio(8, 3), int(1)]]);
        assert_eq!(table.get(1, 2), int(0));
        assert_eq!(table.n_max(), 2);
    }

    #[test]
    fn contexts_compare_by_key() {
        let a = context("bernoulli(2/4)", int(0), 1).unwrap();
        let b = context("bernoulli(1/2)", int(0), 1).unwrap();
        let _ = a.prob_r_stirling2(3, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, context("bernoulli(1/2)", int(0), 2).unwrap());
    }
}
