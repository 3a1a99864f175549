//! Probabilistic degenerate r-Bell polynomials
//! `Bel^{(r,Y)}_{n,lambda}(x) = sum_k S2^{(r,Y)}_lambda(n+r, k+r) x^k`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::binomial;
use crate::prstirling::{ContextKey, StirlingContext};
use crate::scalar::{to_f64, ExactScalar};

/// Default hard cap on Dobinski series terms.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellPolynomial {
    pub context: ContextKey,
    pub n: usize,
    /// `coefficients[k]` multiplies `x^k`; always length `n + 1`.
    pub coefficients: Vec<ExactScalar>,
}

impl BellPolynomial {
    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        self.coefficients
            .iter()
            .rev()
            .fold(ExactScalar::zero(), |acc, c| acc * x + c)
    }
}

pub fn bell_coeffs(ctx: &StirlingContext, n: usize) -> Result<BellPolynomial> {
    Ok(BellPolynomial {
        context: ctx.key(),
        n,
        coefficients: ctx.row(n)?,
    })
}

pub fn bell_eval(ctx: &StirlingContext, n: usize, x: &ExactScalar) -> Result<ExactScalar> {
    Ok(bell_coeffs(ctx, n)?.eval(x))
}

/// `Bel^Y_{n,lambda}(x) = sum_k S2^Y_lambda(n,k) x^k`, the `r = 0` polynomial.
pub fn base_bell_eval(ctx: &StirlingContext, n: usize, x: &ExactScalar) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for k in (0..=n).rev() {
        acc = acc * x + ctx.prob_stirling2(n, k)?;
    }
    Ok(acc)
}

/// `sum_m C(n,m) E[(S_r)_{m,lambda}] Bel^Y_{n-m,lambda}(x)`.
pub fn bell_via_convolution(ctx: &StirlingContext, n: usize, x: &ExactScalar) -> Result<ExactScalar> {
    let y = ctx.oracle();
    let mut acc = ExactScalar::zero();
    for m in 0..=n {
        let shift = y.degenerate_factorial_moment(ctx.r(), m, ctx.lambda())?;
        if shift.is_zero() {
            continue;
        }
        acc += binomial(n, m) * shift * base_bell_eval(ctx, n - m, x)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DobinskiOptions {
    pub tolerance: f64,
    pub max_terms: usize,
}

impl DobinskiOptions {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DobinskiResult {
    pub value: f64,
    pub terms_used: usize,
    /// `|e^{-x} x^K E[(S_{K+r})_{n,lambda}] / K!|` for the final index `K`.
    pub last_term: f64,
    pub tolerance: f64,
}

/// Neumaier compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Truncated `e^{-x} sum_k x^k E[(S_{k+r})_{n,lambda}] / k!`.
///
/// Stops at the first `K > n + r + ceil(x)` whose last `n + 3` terms all fall
/// below `tolerance / 8 * min(1, |partial sum|)` (unweighted by `e^{-x}`).
/// `E[(S_k)_{n,lambda}]` is a polynomial of degree at most `n` in `k`, so it
/// has at most `n` integer zeros; a window of `n + 3` cannot consist of
/// vanishing moments alone. Each exact moment is converted to `f64` as its
/// term is formed.
pub fn bell_dobinski(
    ctx: &StirlingContext,
    n: usize,
    x: f64,
    options: DobinskiOptions,
) -> Result<DobinskiResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Dobinski evaluation needs finite x >= 0, got {x}")));
    }
    if !(options.tolerance > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            options.tolerance
        )));
    }
    let y = ctx.oracle();
    let lambda = ctx.lambda();
    let damping = (-x).exp();
    let min_index = n + ctx.r() + x.ceil() as usize;
    let window = n + 3;

    let mut sum = CompensatedSum::default();
    let mut weight = 1.0_f64; // x^k / k!
    let mut quiet_run = 0;
    let mut last = 0.0_f64;
    for k in 0..options.max_terms {
        if k > 0 {
            weight *= x / k as f64;
        }
        let moment = to_f64(&y.degenerate_factorial_moment(k + ctx.r(), n, lambda)?);
        let term = if weight == 0.0 { 0.0 } else { weight * moment };
        sum.add(term);
        last = term.abs();

        let scale = sum.value().abs().clamp(f64::MIN_POSITIVE, 1.0);
        if last < options.tolerance / 8.0 * scale {
            quiet_run += 1;
        } else {
            quiet_run = 0;
        }
        if k > min_index && quiet_run >= window {
            return Ok(DobinskiResult {
                value: damping * sum.value(),
                terms_used: k + 1,
                last_term: damping * last,
                tolerance: options.tolerance,
            });
        }
    }
    Err(Error::NonConvergence {
        cap: options.max_terms,
        last_term: damping * last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prstirling::context;
    use crate::scalar::{int, ratio};

    #[test]
    fn coefficient_examples() {
        let ctx = context("point(1)", int(0), 1).unwrap();
        assert_eq!(bell_coeffs(&ctx, 0).unwrap().coefficients, vec![int(1)]);
        assert_eq!(bell_coeffs(&ctx, 1).unwrap().coefficients, vec![int(1), int(1)]);
        assert_eq!(bell_eval(&ctx, 1, &int(1)).unwrap(), int(2));
        let ctx = context("point(1)", ratio(1, 3), 1).unwrap();
        assert_eq!(
            bell_coeffs(&ctx, 2).unwrap().coefficients,
            vec![ratio(2, 3), ratio(8, 3), int(1)]
        );
    }

    #[test]
    fn constant_term_is_shift_moment() {
        let ctx = context("bernoulli(1/2)", ratio(1, 3), 2).unwrap();
        for n in 0..6 {
            assert_eq!(
                bell_eval(&ctx, n, &int(0)).unwrap(),
                ctx.oracle().degenerate_factorial_moment(2, n, ctx.lambda()).unwrap()
            );
        }
        let ctx = context("poisson(1)", ratio(1, 3), 0).unwrap();
        assert_eq!(bell_eval(&ctx, 3, &int(0)).unwrap(), int(0));
    }

    #[test]
    fn classical_bell_number() {
        let ctx = context("point(1)", int(0), 0).unwrap();
        assert_eq!(bell_eval(&ctx, 4, &int(1)).unwrap(), int(15));
    }

    #[test]
    fn convolution_examples() {
        let ctx = context("bernoulli(1/2)", ratio(1, 3), 1).unwrap();
        assert_eq!(
            bell_via_convolution(&ctx, 3, &int(2)).unwrap(),
            bell_eval(&ctx, 3, &int(2)).unwrap()
        );
        assert_eq!(bell_via_convolution(&ctx, 0, &int(5)).unwrap(), int(1));
        let base = context("uniform{0,1,2}", ratio(-1, 2), 0).unwrap();
        assert_eq!(
            bell_via_convolution(&base, 4, &ratio(1, 2)).unwrap(),
            base_bell_eval(&base, 4, &ratio(1, 2)).unwrap()
        );
    }

    #[test]
    fn dobinski_n_zero_is_one() {
        let ctx = context("poisson(1)", ratio(1, 3), 2).unwrap();
        for x in [0.0, 0.5, 3.0] {
            let out = bell_dobinski(&ctx, 0, x, DobinskiOptions::new(1e-12)).unwrap();
            assert!((out.value - 1.0).abs() < 1e-12, "x={x} {out:?}");
        }
    }

    #[test]
    fn dobinski_bell_52() {
        let ctx = context("point(1)", int(0), 0).unwrap();
        let out = bell_dobinski(&ctx, 5, 1.0, DobinskiOptions::new(1e-9)).unwrap();
        assert!((out.value - 52.0).abs() <= 52.0 * 1e-9, "{out:?}");
    }

    #[test]
    fn dobinski_bernoulli_example() {
        let ctx = context("bernoulli(1/2)", ratio(1, 3), 1).unwrap();
        let exact = to_f64(&bell_eval(&ctx, 4, &int(2)).unwrap());
        let out = bell_dobinski(&ctx, 4, 2.0, DobinskiOptions::new(1e-9)).unwrap();
        assert!(((out.value - exact) / exact).abs() <= 1e-9, "{out:?} vs {exact}");
    }

    #[test]
    fn dobinski_survives_vanishing_moments() {
        // E[(S_k)_{4,2}] for Bernoulli(1/2) vanishes at consecutive k; a short
        // quiet window would stop early here.
        let ctx = context("bernoulli(1/2)", int(2), 0).unwrap();
        let exact = to_f64(&bell_eval(&ctx, 4, &int(2)).unwrap());
        assert_eq!(exact, -5.0);
        let out = bell_dobinski(&ctx, 4, 2.0, DobinskiOptions::new(1e-9)).unwrap();
        assert!(((out.value - exact) / exact).abs() <= 1e-9, "{out:?}");
    }

    #[test]
    fn dobinski_rejects_bad_input() {
        let ctx = context("point(1)", int(0), 0).unwrap();
        assert!(matches!(
            bell_dobinski(&ctx, 2, -1.0, DobinskiOptions::new(1e-9)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            bell_dobinski(&ctx, 2, 1.0, DobinskiOptions::new(0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dobinski_cap_reports_non_convergence() {
        let ctx = context("point(1)", int(0), 0).unwrap();
        let options = DobinskiOptions { tolerance: 1e-9, max_terms: 5 };
        assert!(matches!(
            bell_dobinski(&ctx, 3, 2.0, options),
            Err(Error::NonConvergence { cap: 5, .. })
        ));
    }
}
