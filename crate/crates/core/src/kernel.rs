//! Classical combinatorial triangles and polynomial basis changes.

use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::{pow, ExactScalar};

/// Row-memoized integer triangle `T(n, k)`, `0 <= k <= n`.
///
/// Rows are appended under the write lock only once fully built, so readers
/// never observe a partial row.
struct Triangle {
    rows: RwLock<Vec<Vec<BigInt>>>,
    next_row: fn(&[BigInt], usize) -> Vec<BigInt>,
}

impl Triangle {
    fn new(next_row: fn(&[BigInt], usize) -> Vec<BigInt>) -> Self {
        Self {
            rows: RwLock::new(vec![vec![BigInt::one()]]),
            next_row,
        }
    }

    fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        {
            let rows = self.rows.read().unwrap();
            if let Some(row) = rows.get(n) {
                return row[k].clone();
            }
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() <= n {
            let prev = rows.len() - 1;
            let row = (self.next_row)(&rows[prev], prev);
            rows.push(row);
        }
        rows[n][k].clone()
    }
}

// S1(n+1, k) = S1(n, k-1) - n S1(n, k)
fn stirling1_next(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    let n_big = BigInt::from(n);
    (0..=n + 1)
        .map(|k| {
            let left = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
            let right = prev.get(k).map(|v| &n_big * v).unwrap_or_default();
            left - right
        })
        .collect()
}

// S2(n+1, k) = k S2(n, k) + S2(n, k-1)
fn stirling2_next(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    (0..=n + 1)
        .map(|k| {
            let left = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
            let right = prev.get(k).map(|v| BigInt::from(k) * v).unwrap_or_default();
            left + right
        })
        .collect()
}

static STIRLING1: LazyLock<Triangle> = LazyLock::new(|| Triangle::new(stirling1_next));
static STIRLING2: LazyLock<Triangle> = LazyLock::new(|| Triangle::new(stirling2_next));

pub fn factorial(n: usize) -> ExactScalar {
    let value = (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    ExactScalar::from_integer(value)
}

pub fn binomial(n: usize, k: usize) -> ExactScalar {
    ExactScalar::from_integer(binomial_int(n, k))
}

pub(crate) fn binomial_int(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Signed Stirling numbers of the first kind: `(x)_n = sum_k S1(n,k) x^k`.
pub fn stirling1_signed(n: usize, k: usize) -> ExactScalar {
    ExactScalar::from_integer(STIRLING1.get(n, k))
}

/// Stirling numbers of the second kind: `x^n = sum_k S2(n,k) (x)_k`.
pub fn stirling2(n: usize, k: usize) -> ExactScalar {
    ExactScalar::from_integer(STIRLING2.get(n, k))
}

/// The deformation parameter of the degenerate falling factorial
/// `(x)_{n,lambda} = x (x - lambda) ... (x - (n-1) lambda)`.
///
/// Zero is admitted and gives `(x)_{n,0} = x^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegenerateParameter(pub ExactScalar);

impl DegenerateParameter {
    pub fn new(lambda: ExactScalar) -> Self {
        Self(lambda)
    }

    pub fn value(&self) -> &ExactScalar {
        &self.0
    }

    /// `lambda^e` with `0^0 = 1`.
    pub fn pow(&self, e: usize) -> ExactScalar {
        pow(&self.0, e)
    }
}

impl From<ExactScalar> for DegenerateParameter {
    fn from(v: ExactScalar) -> Self {
        Self(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Basis {
    Monomial,
    FallingFactorial,
}

/// Dense polynomial; `coefficients[k]` multiplies `x^k` or `(x)_k`
/// depending on `basis`. Always canonical: no trailing zeros, and the zero
/// polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    basis: Basis,
    coefficients: Vec<ExactScalar>,
}

impl Polynomial {
    pub fn new(basis: Basis, mut coefficients: Vec<ExactScalar>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { basis, coefficients }
    }

    pub fn zero(basis: Basis) -> Self {
        Self::new(basis, Vec::new())
    }

    /// `x^k` or `(x)_k`, depending on basis.
    pub fn unit(basis: Basis, k: usize) -> Self {
        let mut coefficients = vec![ExactScalar::zero(); k + 1];
        coefficients[k] = ExactScalar::one();
        Self::new(basis, coefficients)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficients(&self) -> &[ExactScalar] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<ExactScalar> {
        self.coefficients
    }

    /// Coefficient `k`, zero past the degree.
    pub fn coefficient(&self, k: usize) -> ExactScalar {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        Self::new(
            self.basis,
            self.coefficients.iter().map(|c| c * factor).collect(),
        )
    }

    /// Sum of two polynomials in the same basis.
    ///
    /// # Panics
    /// When the bases differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis, "adding polynomials in different bases");
        let len = self.coefficients.len().max(other.coefficients.len());
        let coefficients = (0..len)
            .map(|k| self.coefficient(k) + other.coefficient(k))
            .collect();
        Self::new(self.basis, coefficients)
    }

    /// Evaluates the polynomial at `x`. Horner in the monomial basis; the
    /// falling-factorial basis uses the nested form
    /// `c0 + x (c1 + (x-1) (c2 + ...))`.
    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            let factor = match self.basis {
                Basis::Monomial => x.clone(),
                Basis::FallingFactorial => x - ExactScalar::from_integer(BigInt::from(k)),
            };
            acc = acc * factor + c;
        }
        acc
    }
}

/// Monomial coefficients of `(x)_{n,lambda}`: coefficient of `x^k` is
/// `S1(n,k) lambda^(n-k)`.
pub fn degenerate_falling_coeffs(n: usize, lambda: &DegenerateParameter) -> Polynomial {
    let coefficients = (0..=n)
        .map(|k| stirling1_signed(n, k) * lambda.pow(n - k))
        .collect();
    Polynomial::new(Basis::Monomial, coefficients)
}

pub fn convert_basis(p: &Polynomial, target: Basis) -> Polynomial {
    if p.basis == target {
        return p.clone();
    }
    let triangle: fn(usize, usize) -> ExactScalar = match target {
        Basis::FallingFactorial => stirling2,
        Basis::Monomial => stirling1_signed,
    };
    let len = p.coefficients.len();
    let coefficients = (0..len)
        .map(|k| {
            (k..len)
                .map(|j| &p.coefficients[j] * triangle(j, k))
                .fold(ExactScalar::zero(), |acc, t| acc + t)
        })
        .collect();
    Polynomial::new(target, coefficients)
}

/// Monomial coefficients of `p(x + r)`.
///
/// # Panics
/// When `p` is not in the monomial basis.
pub fn shift_argument(p: &Polynomial, r: usize) -> Polynomial {
    assert_eq!(p.basis, Basis::Monomial, "shift_argument expects monomial basis");
    let shift = ExactScalar::from_integer(BigInt::from(r));
    let len = p.coefficients.len();
    let coefficients = (0..len)
        .map(|i| {
            (i..len)
                .map(|j| &p.coefficients[j] * binomial(j, i) * pow(&shift, j - i))
                .fold(ExactScalar::zero(), |acc, t| acc + t)
        })
        .collect();
    Polynomial::new(Basis::Monomial, coefficients)
}
