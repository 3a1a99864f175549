//! Exact moments of `Y` and of the iid sums `S_j = Y_1 + ... + Y_j`.

use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::kernel::{binomial, factorial, stirling1_signed, stirling2, DegenerateParameter};
use crate::scalar::{pow, ExactScalar};

/// `table[j][m] = E[S_j^m]` for `j <= j_max`, `m <= m_max`.
#[derive(Debug, Clone, Default)]
pub struct SumMomentTable {
    rows: Vec<Vec<ExactScalar>>,
}

impl SumMomentTable {
    pub fn get(&self, j: usize, m: usize) -> Option<&ExactScalar> {
        self.rows.get(j).and_then(|row| row.get(m))
    }

    pub fn rows(&self) -> &[Vec<ExactScalar>] {
        &self.rows
    }

    fn order(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Appends row `j+1` from row `j` by the independence convolution
    /// `E[S_{j+1}^m] = sum_i C(m,i) E[S_j^i] E[Y^(m-i)]`.
    fn push_row(&mut self, base: &[ExactScalar]) {
        let prev = self.rows.last().expect("row 0 present");
        let row = (0..base.len())
            .map(|m| {
                (0..=m)
                    .map(|i| binomial(m, i) * &prev[i] * &base[m - i])
                    .fold(ExactScalar::zero(), |acc, t| acc + t)
            })
            .collect();
        self.rows.push(row);
    }

    fn with_order(order: usize) -> Self {
        let mut row0 = vec![ExactScalar::zero(); order];
        if let Some(first) = row0.first_mut() {
            *first = ExactScalar::one();
        }
        Self { rows: vec![row0] }
    }
}

/// A random variable presented through its exact raw moments.
///
/// Moment and sum-moment caches sit behind read/write locks, so one oracle
/// can be shared by reference across threads.
#[derive(Debug)]
pub struct MomentOracle {
    dist: Distribution,
    moments: RwLock<Vec<ExactScalar>>,
    sums: RwLock<SumMomentTable>,
}

impl Clone for MomentOracle {
    fn clone(&self) -> Self {
        Self {
            dist: self.dist.clone(),
            moments: RwLock::new(self.moments.read().unwrap().clone()),
            sums: RwLock::new(self.sums.read().unwrap().clone()),
        }
    }
}

impl PartialEq for MomentOracle {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist
    }
}

impl Eq for MomentOracle {}

impl MomentOracle {
    pub fn new(dist: Distribution) -> Result<Self> {
        dist.validate()?;
        Ok(Self {
            dist,
            moments: RwLock::new(vec![ExactScalar::one()]),
            sums: RwLock::new(SumMomentTable::default()),
        })
    }

    pub fn parse(expr: &str) -> Result<Self> {
        Self::new(Distribution::parse(expr)?)
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    /// `E[Y^m]`.
    pub fn moment(&self, m: usize) -> Result<ExactScalar> {
        if let Some(v) = self.moments.read().unwrap().get(m) {
            return Ok(v.clone());
        }
        if let Some(available) = self.dist.max_order() {
            if m > available {
                return Err(Error::MomentUnavailable { order: m, available });
            }
        }
        let mut cache = self.moments.write().unwrap();
        while cache.len() <= m {
            let next = preset_moment(&self.dist, cache.len());
            cache.push(next);
        }
        Ok(cache[m].clone())
    }

    /// `E[S_j^m]` with `S_0 = 0`.
    pub fn sum_moment(&self, j: usize, m: usize) -> Result<ExactScalar> {
        if j == 0 {
            return Ok(if m == 0 { ExactScalar::one() } else { ExactScalar::zero() });
        }
        if let Some(v) = self.sums.read().unwrap().get(j, m) {
            return Ok(v.clone());
        }
        let order = self.sums.read().unwrap().order().max(m + 1);
        let base = (0..order).map(|i| self.moment(i)).collect::<Result<Vec<_>>>()?;
        let mut table = self.sums.write().unwrap();
        if table.order() > order {
            // Another reader widened the table meanwhile; retry against it.
            drop(table);
            return self.sum_moment(j, m);
        }
        if table.order() < order {
            *table = SumMomentTable::with_order(order);
        }
        while table.rows.len() <= j {
            table.push_row(&base);
        }
        Ok(table.rows[j][m].clone())
    }

    /// Snapshot of `E[S_j^m]` for `j <= j_max`, `m <= m_max`.
    pub fn sum_moment_table(&self, j_max: usize, m_max: usize) -> Result<SumMomentTable> {
        let rows = (0..=j_max)
            .map(|j| (0..=m_max).map(|m| self.sum_moment(j, m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SumMomentTable { rows })
    }

    /// `E[(S_j)_{n,lambda}] = sum_k S1(n,k) lambda^(n-k) E[S_j^k]`.
    pub fn degenerate_factorial_moment(
        &self,
        j: usize,
        n: usize,
        lambda: &DegenerateParameter,
    ) -> Result<ExactScalar> {
        (0..=n).try_fold(ExactScalar::zero(), |acc, k| {
            let s1 = stirling1_signed(n, k);
            if s1.is_zero() {
                return Ok(acc);
            }
            Ok(acc + s1 * lambda.pow(n - k) * self.sum_moment(j, k)?)
        })
    }
}

fn preset_moment(dist: &Distribution, m: usize) -> ExactScalar {
    if m == 0 {
        return ExactScalar::one();
    }
    match dist {
        Distribution::Point(c) => pow(c, m),
        Distribution::Bernoulli(p) => p.clone(),
        Distribution::Binomial { .. } | Distribution::UniformDiscrete(_) => dist
            .finite_support()
            .expect("finite preset")
            .iter()
            .fold(ExactScalar::zero(), |acc, (v, mass)| acc + pow(v, m) * mass),
        Distribution::UniformContinuous { low, high } => {
            let width = high - low;
            (pow(high, m + 1) - pow(low, m + 1)) / (width * ExactScalar::from_integer((m + 1).into()))
        }
        // Touchard: E[X^m] = sum_k S2(m,k) mu^k.
        Distribution::Poisson(mean) => (0..=m)
            .map(|k| stirling2(m, k) * pow(mean, k))
            .fold(ExactScalar::zero(), |acc, t| acc + t),
        // Factorial moments E[(X)_j] = j! (1-p)^(j-1) / p^j, converted through S2.
        Distribution::Geometric(p) => {
            let q = ExactScalar::one() - p;
            (1..=m)
                .map(|j| stirling2(m, j) * factorial(j) * pow(&q, j - 1) / pow(p, j))
                .fold(ExactScalar::zero(), |acc, t| acc + t)
        }
        Distribution::Moments(values) => values[m].clone(),
    }
}
