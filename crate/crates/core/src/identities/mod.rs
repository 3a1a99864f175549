//! Executable identity checks.
//!
//! Each [`IdentityId`] names one checking procedure that computes two sides
//! of an identity through separate code paths and compares them exactly (or
//! within a recorded tolerance for the floating Dobinski series). The sides
//! used by each check:
//!
//! | id | left side | right side |
//! |----|-----------|------------|
//! | `T2_1_vs_T2_2` | alternating sum over `E[(S_{j+r})_{n,lambda}]` | convolution with `E[S_r^m]` |
//! | `T2_1_vs_T2_3` | alternating sum | binomial series in `S2^Y_lambda(n, m+k)` |
//! | `T2_4` | row in the `(x)_k` basis, converted to monomials | `sum_k S2^Y(n,k) (x+r)_k` expanded |
//! | `T2_5` | Bell coefficients | generating-function coefficients from raw moments ([`oracles`]) |
//! | `T2_6` | Horner evaluation of the Bell coefficients | convolution with `Bel^Y_{n-m}(x)` |
//! | `T2_7` | exact Bell value as `f64` | truncated Dobinski series |
//! | `T2_8` | `C(m+k,m) S2^{(r,Y)}(n+r, m+k+r)` | convolution of r-rows with `S2^Y` |
//! | `T2_9_corrected` | row in the `(x)_k` basis, as monomials | `sum_i (x+r)^i sum_j S1(j,i) S2^Y(n,j)` |
//! | `T2_9_paper_form` | same | `sum_i (x+r)^i sum_j S1(j,i) S2^Y(n,i)` (opt-in, known to fail) |
//! | `ReductionY1` | `Y = point(1)` row | `(x+r)_{n,lambda}` expanded with kernel only |
//! | `ClassicalLambda0` | `Y = point(1), lambda = 0` row | `(x+r)^n` expanded, plus partition enumeration |

pub mod oracles;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::bell::{bell_coeffs, bell_dobinski, bell_eval, bell_via_convolution, DobinskiOptions};
use crate::error::{Error, Result};
use crate::kernel::{
    binomial, convert_basis, shift_argument, stirling1_signed, Basis, DegenerateParameter,
    Polynomial,
};
use crate::moments::MomentOracle;
use crate::prstirling::StirlingContext;
use crate::scalar::{format_rational, int, ratio, to_f64, ExactScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    T2_1VsT2_2,
    T2_1VsT2_3,
    T2_4,
    T2_5,
    T2_6,
    T2_7,
    T2_8,
    T2_9Corrected,
    T2_9PaperForm,
    ReductionY1,
    ClassicalLambda0,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        Self::T2_1VsT2_2,
        Self::T2_1VsT2_3,
        Self::T2_4,
        Self::T2_5,
        Self::T2_6,
        Self::T2_7,
        Self::T2_8,
        Self::T2_9Corrected,
        Self::T2_9PaperForm,
        Self::ReductionY1,
        Self::ClassicalLambda0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::T2_1VsT2_2 => "T2_1_vs_T2_2",
            Self::T2_1VsT2_3 => "T2_1_vs_T2_3",
            Self::T2_4 => "T2_4",
            Self::T2_5 => "T2_5",
            Self::T2_6 => "T2_6",
            Self::T2_7 => "T2_7",
            Self::T2_8 => "T2_8",
            Self::T2_9Corrected => "T2_9_corrected",
            Self::T2_9PaperForm => "T2_9_paper_form",
            Self::ReductionY1 => "ReductionY1",
            Self::ClassicalLambda0 => "ClassicalLambda0",
        }
    }

    /// Opt-in checks are findings: their failures do not fail a run.
    pub fn is_opt_in(self) -> bool {
        matches!(self, Self::T2_9PaperForm)
    }

    /// Every identity that is not opt-in.
    pub fn default_suite() -> Vec<IdentityId> {
        Self::ALL.into_iter().filter(|id| !id.is_opt_in()).collect()
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Point {
    pub dist: String,
    pub lambda: String,
    pub r: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Side {
    Scalar(String),
    Vector(Vec<String>),
    Float(f64),
    Missing,
}

impl Side {
    fn scalar(v: &ExactScalar) -> Self {
        Self::Scalar(format_rational(v))
    }

    fn vector(v: &[ExactScalar]) -> Self {
        Self::Vector(v.iter().map(format_rational).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub point: Point,
    pub passed: bool,
    pub lhs: Side,
    pub rhs: Side,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// First differing coefficient index for vector sides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch_at: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    fn new(identity: IdentityId, point: Point) -> Self {
        Self {
            identity,
            point,
            passed: false,
            lhs: Side::Missing,
            rhs: Side::Missing,
            tolerance: None,
            mismatch_at: None,
            note: None,
        }
    }

    fn scalars(mut self, lhs: &ExactScalar, rhs: &ExactScalar) -> Self {
        self.passed = lhs == rhs;
        self.lhs = Side::scalar(lhs);
        self.rhs = Side::scalar(rhs);
        self
    }

    fn vectors(mut self, lhs: &[ExactScalar], rhs: &[ExactScalar]) -> Self {
        let len = lhs.len().max(rhs.len());
        let at = |v: &[ExactScalar], i: usize| v.get(i).cloned().unwrap_or_default();
        self.mismatch_at = (0..len).find(|&i| at(lhs, i) != at(rhs, i));
        self.passed = self.mismatch_at.is_none();
        self.lhs = Side::vector(lhs);
        self.rhs = Side::vector(rhs);
        self
    }

    fn failed(mut self, err: &Error) -> Self {
        self.passed = false;
        self.note = Some(err.to_string());
        self
    }
}

/// Parameter ranges for a suite run. Every identity sweeps `n = 0..=n_max`
/// over each `(dist, lambda, r)` combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dists: Vec<String>,
    pub lambdas: Vec<ExactScalar>,
    pub rs: Vec<usize>,
    pub n_max: usize,
    /// Exact evaluation points for the Bell checks.
    pub xs: Vec<ExactScalar>,
    /// Nonnegative evaluation points for the Dobinski check.
    pub dobinski_xs: Vec<ExactScalar>,
    pub tolerance: f64,
    pub max_terms: usize,
}

impl Grid {
    /// `n <= 10`, `r <= 3`, five lambdas and four presets.
    pub fn desk() -> Self {
        Self {
            dists: ["point(1)", "bernoulli(1/2)", "uniform{0,1,2}", "poisson(1)"]
                .map(String::from)
                .to_vec(),
            lambdas: vec![ratio(-1, 2), int(0), ratio(1, 3), int(1), int(2)],
            rs: vec![0, 1, 2, 3],
            n_max: 10,
            xs: vec![int(-1), int(0), ratio(1, 2), int(1), int(2)],
            dobinski_xs: vec![ratio(1, 2), int(1), int(2), int(4)],
            tolerance: 1e-9,
            max_terms: crate::bell::DEFAULT_MAX_TERMS,
        }
    }

    pub fn empty() -> Self {
        Self {
            dists: Vec::new(),
            lambdas: Vec::new(),
            rs: Vec::new(),
            n_max: 0,
            xs: Vec::new(),
            dobinski_xs: Vec::new(),
            tolerance: 1e-9,
            max_terms: crate::bell::DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentitySummary {
    pub identity: IdentityId,
    pub opt_in: bool,
    pub passed: usize,
    pub failed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub summary: Vec<IdentitySummary>,
}

impl SuiteOutcome {
    /// True when every non-opt-in report passed.
    pub fn required_passed(&self) -> bool {
        self.reports
            .iter()
            .all(|r| r.passed || r.identity.is_opt_in())
    }
}

/// One unit of work; the task list order is the report order.
#[derive(Debug, Clone)]
enum Task {
    Row { id: IdentityId, ctx: usize, n: usize },
    Eval { id: IdentityId, ctx: usize, n: usize, x: ExactScalar },
    Recurrence { ctx: usize, n: usize, m: usize, k: usize },
    Reduction { id: IdentityId, ctx: usize, n: usize },
}

struct Workspace {
    contexts: Vec<StirlingContext>,
    grid: Grid,
}

fn point(ctx: &StirlingContext, n: usize) -> Point {
    let key = ctx.key();
    Point {
        dist: key.dist,
        lambda: key.lambda,
        r: key.r,
        n,
        m: None,
        k: None,
        x: None,
    }
}

fn build_contexts(grid: &Grid) -> Result<Vec<StirlingContext>> {
    let mut contexts = Vec::new();
    for dist in &grid.dists {
        let oracle = Arc::new(MomentOracle::parse(dist)?);
        for lambda in &grid.lambdas {
            for &r in &grid.rs {
                contexts.push(StirlingContext::new(
                    Arc::clone(&oracle),
                    DegenerateParameter::new(lambda.clone()),
                    r,
                ));
            }
        }
    }
    Ok(contexts)
}

/// Contexts for the reduction checks: `Y = point(1)` over the grid's lambdas
/// (or `lambda = 0` only, for the classical check) and r values. Built only
/// when the grid has at least one distribution.
fn reduction_contexts(grid: &Grid, classical: bool) -> Vec<StirlingContext> {
    if grid.dists.is_empty() {
        return Vec::new();
    }
    let oracle = Arc::new(MomentOracle::parse("point(1)").expect("valid preset"));
    let lambdas = if classical {
        vec![ExactScalar::zero()]
    } else {
        grid.lambdas.clone()
    };
    let mut out = Vec::new();
    for lambda in lambdas {
        for &r in &grid.rs {
            out.push(StirlingContext::new(
                Arc::clone(&oracle),
                DegenerateParameter::new(lambda.clone()),
                r,
            ));
        }
    }
    out
}

/// Runs the selected identities over the grid, returning reports ordered by
/// identity (in [`IdentityId::ALL`] order) and then by grid point.
pub fn run_suite(grid: &Grid, identities: &[IdentityId], execution: Execution) -> Result<SuiteOutcome> {
    let mut selected: Vec<IdentityId> = identities.to_vec();
    selected.sort();
    selected.dedup();

    let mut contexts = build_contexts(grid)?;
    let main_count = contexts.len();
    let reduction_start = contexts.len();
    contexts.extend(reduction_contexts(grid, false));
    let classical_start = contexts.len();
    contexts.extend(reduction_contexts(grid, true));
    let classical_end = contexts.len();

    let mut tasks = Vec::new();
    for &id in &selected {
        match id {
            IdentityId::T2_1VsT2_2
            | IdentityId::T2_1VsT2_3
            | IdentityId::T2_4
            | IdentityId::T2_5
            | IdentityId::T2_9Corrected
            | IdentityId::T2_9PaperForm => {
                for ctx in 0..main_count {
                    for n in 0..=grid.n_max {
                        tasks.push(Task::Row { id, ctx, n });
                    }
                }
            }
            IdentityId::T2_6 | IdentityId::T2_7 => {
                let xs = if id == IdentityId::T2_6 { &grid.xs } else { &grid.dobinski_xs };
                for ctx in 0..main_count {
                    for n in 0..=grid.n_max {
                        for x in xs {
                            tasks.push(Task::Eval { id, ctx, n, x: x.clone() });
                        }
                    }
                }
            }
            IdentityId::T2_8 => {
                for ctx in 0..main_count {
                    for n in 0..=grid.n_max {
                        for m in 0..=n {
                            for k in 0..=n - m {
                                tasks.push(Task::Recurrence { ctx, n, m, k });
                            }
                        }
                    }
                }
            }
            IdentityId::ReductionY1 | IdentityId::ClassicalLambda0 => {
                let range = if id == IdentityId::ReductionY1 {
                    reduction_start..classical_start
                } else {
                    classical_start..classical_end
                };
                for ctx in range {
                    for n in 0..=grid.n_max {
                        tasks.push(Task::Reduction { id, ctx, n });
                    }
                }
            }
        }
    }

    let workspace = Workspace {
        contexts,
        grid: grid.clone(),
    };
    let reports = execute(&workspace, &tasks, execution);

    let summary = selected
        .iter()
        .map(|&id| {
            let (passed, total) = reports
                .iter()
                .filter(|r| r.identity == id)
                .fold((0, 0), |(p, t), r| (p + usize::from(r.passed), t + 1));
            IdentitySummary {
                identity: id,
                opt_in: id.is_opt_in(),
                passed,
                failed: total - passed,
                total,
            }
        })
        .collect();
    Ok(SuiteOutcome { reports, summary })
}

#[cfg(feature = "parallel")]
fn execute(ws: &Workspace, tasks: &[Task], execution: Execution) -> Vec<VerificationReport> {
    use rayon::prelude::*;
    match execution {
        Execution::Parallel => tasks.par_iter().map(|t| run_task(ws, t)).collect(),
        Execution::Sequential => tasks.iter().map(|t| run_task(ws, t)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn execute(ws: &Workspace, tasks: &[Task], _execution: Execution) -> Vec<VerificationReport> {
    tasks.iter().map(|t| run_task(ws, t)).collect()
}

fn run_task(ws: &Workspace, task: &Task) -> VerificationReport {
    match task {
        Task::Row { id, ctx, n } => {
            let ctx = &ws.contexts[*ctx];
            let report = VerificationReport::new(*id, point(ctx, *n));
            let outcome = match id {
                IdentityId::T2_1VsT2_2 => check_formula_pair(ctx, *n, StirlingContext::prob_r_stirling2_via_conv),
                IdentityId::T2_1VsT2_3 => check_formula_pair(ctx, *n, StirlingContext::prob_r_stirling2_via_shift),
                IdentityId::T2_4 => falling_factorial_identity(ctx, *n),
                IdentityId::T2_5 => bell_coefficient_identity(ctx, *n),
                IdentityId::T2_9Corrected => log_expansion_identity(ctx, *n, LogForm::Corrected),
                IdentityId::T2_9PaperForm => log_expansion_identity(ctx, *n, LogForm::Printed),
                _ => unreachable!("row task for {id}"),
            };
            match outcome {
                Ok((lhs, rhs)) => report.vectors(&lhs, &rhs),
                Err(e) => report.failed(&e),
            }
        }
        Task::Eval { id, ctx, n, x } => {
            let ctx = &ws.contexts[*ctx];
            let mut p = point(ctx, *n);
            p.x = Some(format_rational(x));
            let report = VerificationReport::new(*id, p);
            if *id == IdentityId::T2_6 {
                let outcome = bell_eval(ctx, *n, x).and_then(|l| Ok((l, bell_via_convolution(ctx, *n, x)?)));
                match outcome {
                    Ok((lhs, rhs)) => report.scalars(&lhs, &rhs),
                    Err(e) => report.failed(&e),
                }
            } else {
                dobinski_check(ctx, *n, x, &ws.grid, report)
            }
        }
        Task::Recurrence { ctx, n, m, k } => {
            let ctx = &ws.contexts[*ctx];
            let mut p = point(ctx, *n);
            p.m = Some(*m);
            p.k = Some(*k);
            let report = VerificationReport::new(IdentityId::T2_8, p);
            match recurrence_sides(ctx, *n, *m, *k) {
                Ok((lhs, rhs)) => report.scalars(&lhs, &rhs),
                Err(e) => report.failed(&e),
            }
        }
        Task::Reduction { id, ctx, n } => {
            let ctx = &ws.contexts[*ctx];
            let report = VerificationReport::new(*id, point(ctx, *n));
            if *id == IdentityId::ReductionY1 {
                match ctx.row(*n) {
                    Ok(lhs) => {
                        let rhs = oracles::degenerate_r_stirling_row(*n, ctx.lambda(), ctx.r());
                        report.vectors(&lhs, &rhs)
                    }
                    Err(e) => report.failed(&e),
                }
            } else {
                classical_check(ctx, *n, report)
            }
        }
    }
}

type Sides = (Vec<ExactScalar>, Vec<ExactScalar>);

fn check_formula_pair(
    ctx: &StirlingContext,
    n: usize,
    other: fn(&StirlingContext, usize, usize) -> Result<ExactScalar>,
) -> Result<Sides> {
    let lhs = ctx.row(n)?;
    let rhs = (0..=n).map(|k| other(ctx, n, k)).collect::<Result<Vec<_>>>()?;
    Ok((lhs, rhs))
}

/// Row `n` read as falling-factorial coefficients, expanded to monomials.
fn row_as_monomials(ctx: &StirlingContext, n: usize) -> Result<Polynomial> {
    let row = Polynomial::new(Basis::FallingFactorial, ctx.row(n)?);
    Ok(convert_basis(&row, Basis::Monomial))
}

fn coefficient_vector(p: &Polynomial, n: usize) -> Vec<ExactScalar> {
    (0..=n).map(|k| p.coefficient(k)).collect()
}

/// Both sides of `sum_k S2^{(r,Y)}(n+r,k+r) (x)_k = sum_k S2^Y(n,k) (x+r)_k`
/// as monomial coefficient vectors of length `n + 1`.
pub fn falling_factorial_identity(ctx: &StirlingContext, n: usize) -> Result<Sides> {
    let lhs = row_as_monomials(ctx, n)?;
    let mut rhs = Polynomial::zero(Basis::Monomial);
    for k in 0..=n {
        let weight = ctx.prob_stirling2(n, k)?;
        if weight.is_zero() {
            continue;
        }
        let falling = convert_basis(&Polynomial::unit(Basis::FallingFactorial, k), Basis::Monomial);
        rhs = rhs.add(&shift_argument(&falling, ctx.r()).scale(&weight));
    }
    Ok((coefficient_vector(&lhs, n), coefficient_vector(&rhs, n)))
}

pub fn verify_falling_expansion(ctx: &StirlingContext, n: usize) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::T2_4, point(ctx, n));
    match falling_factorial_identity(ctx, n) {
        Ok((lhs, rhs)) => report.vectors(&lhs, &rhs),
        Err(e) => report.failed(&e),
    }
}

fn bell_coefficient_identity(ctx: &StirlingContext, n: usize) -> Result<Sides> {
    let lhs = bell_coeffs(ctx, n)?.coefficients;
    let rhs = oracles::generating_function_row(ctx.oracle(), ctx.lambda(), ctx.r(), n)?;
    Ok((lhs, rhs))
}

/// Both sides of `C(m+k,m) S2^{(r,Y)}(n+r, m+k+r)
/// = sum_{l=m}^{n-k} C(n,l) S2^{(r,Y)}(l+r, m+r) S2^Y(n-l, k)`.
pub fn recurrence_sides(ctx: &StirlingContext, n: usize, m: usize, k: usize) -> Result<(ExactScalar, ExactScalar)> {
    if n < m + k {
        return Err(Error::Domain(format!("need n >= m + k, got n={n}, m={m}, k={k}")));
    }
    let lhs = binomial(m + k, m) * ctx.prob_r_stirling2(n, m + k)?;
    let mut rhs = ExactScalar::zero();
    for l in m..=n - k {
        rhs += binomial(n, l) * ctx.prob_r_stirling2(l, m)? * ctx.prob_stirling2(n - l, k)?;
    }
    Ok((lhs, rhs))
}

pub fn verify_recurrence(ctx: &StirlingContext, n: usize, m: usize, k: usize) -> Result<VerificationReport> {
    let (lhs, rhs) = recurrence_sides(ctx, n, m, k)?;
    let mut p = point(ctx, n);
    p.m = Some(m);
    p.k = Some(k);
    Ok(VerificationReport::new(IdentityId::T2_8, p).scalars(&lhs, &rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogForm {
    /// Inner factor `S2^Y(n, j)`, as the derivation produces it.
    Corrected,
    /// Inner factor `S2^Y(n, i)`, the commonly printed variant.
    Printed,
}

/// Both sides of `sum_k S2^{(r,Y)}(n+r,k+r) (x)_k = sum_i (x+r)^i c_i` as
/// monomial coefficient vectors, with `c_i` per `form`.
pub fn log_expansion_identity(ctx: &StirlingContext, n: usize, form: LogForm) -> Result<Sides> {
    let lhs = row_as_monomials(ctx, n)?;
    let mut rhs = Polynomial::zero(Basis::Monomial);
    for i in 0..=n {
        let mut weight = ExactScalar::zero();
        for j in i..=n {
            let inner = match form {
                LogForm::Corrected => ctx.prob_stirling2(n, j)?,
                LogForm::Printed => ctx.prob_stirling2(n, i)?,
            };
            weight += stirling1_signed(j, i) * inner;
        }
        if weight.is_zero() {
            continue;
        }
        let power = shift_argument(&Polynomial::unit(Basis::Monomial, i), ctx.r());
        rhs = rhs.add(&power.scale(&weight));
    }
    Ok((coefficient_vector(&lhs, n), coefficient_vector(&rhs, n)))
}

pub fn verify_log_expansion(ctx: &StirlingContext, n: usize, form: LogForm) -> VerificationReport {
    let id = match form {
        LogForm::Corrected => IdentityId::T2_9Corrected,
        LogForm::Printed => IdentityId::T2_9PaperForm,
    };
    let report = VerificationReport::new(id, point(ctx, n));
    match log_expansion_identity(ctx, n, form) {
        Ok((lhs, rhs)) => report.vectors(&lhs, &rhs),
        Err(e) => report.failed(&e),
    }
}

fn dobinski_check(
    ctx: &StirlingContext,
    n: usize,
    x: &ExactScalar,
    grid: &Grid,
    mut report: VerificationReport,
) -> VerificationReport {
    report.tolerance = Some(grid.tolerance);
    let exact = match bell_eval(ctx, n, x) {
        Ok(v) => to_f64(&v),
        Err(e) => return report.failed(&e),
    };
    let options = DobinskiOptions {
        tolerance: grid.tolerance,
        max_terms: grid.max_terms,
    };
    match bell_dobinski(ctx, n, to_f64(x), options) {
        Ok(out) => {
            let err = if exact == 0.0 {
                out.value.abs()
            } else {
                ((out.value - exact) / exact).abs()
            };
            report.passed = err <= grid.tolerance;
            report.lhs = Side::Float(exact);
            report.rhs = Side::Float(out.value);
            report.note = Some(format!("terms={} relative_error={err:e}", out.terms_used));
            report
        }
        Err(e) => {
            report.lhs = Side::Float(exact);
            report.failed(&e)
        }
    }
}

/// Largest `n + r` for which partitions are enumerated outright.
const ENUMERATION_LIMIT: usize = 9;

fn classical_check(ctx: &StirlingContext, n: usize, report: VerificationReport) -> VerificationReport {
    let lhs = match ctx.row(n) {
        Ok(v) => v,
        Err(e) => return report.failed(&e),
    };
    let r = ctx.r();
    let expansion = oracles::classical_r_stirling_row(n, r);
    if n + r > ENUMERATION_LIMIT {
        let mut report = report.vectors(&lhs, &expansion);
        report.note = Some("oracle: (x+r)^n expansion".into());
        return report;
    }
    let counts: Vec<ExactScalar> = (0..=n)
        .map(|k| int(oracles::count_partitions(n + r, k + r, r) as i64))
        .collect();
    let mut report = report.vectors(&lhs, &counts);
    if expansion != counts {
        report.passed = false;
        report.note = Some("oracle disagreement: partition enumeration vs (x+r)^n expansion".into());
    } else {
        report.note = Some("oracle: partition enumeration, (x+r)^n expansion agrees".into());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prstirling::context;

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!(matches!("T2_10".parse::<IdentityId>(), Err(Error::UnknownIdentity(_))));
        assert!(!IdentityId::default_suite().contains(&IdentityId::T2_9PaperForm));
        assert_eq!(IdentityId::default_suite().len(), 10);
    }

    #[test]
    fn empty_grid_gives_nothing() {
        let out = run_suite(&Grid::empty(), &IdentityId::ALL, Execution::Sequential).unwrap();
        assert!(out.reports.is_empty());
        assert!(out.summary.iter().all(|s| s.total == 0));
        assert!(out.required_passed());
    }

    #[test]
    fn falling_expansion_examples() {
        let ctx = context("bernoulli(1/2)", ratio(1, 3), 2).unwrap();
        assert!(verify_falling_expansion(&ctx, 5).passed);
        let report = verify_falling_expansion(&ctx, 0);
        assert!(report.passed);
        assert_eq!(report.lhs, Side::Vector(vec!["1".into()]));
        let ctx = context("poisson(1)", int(2), 0).unwrap();
        assert!(verify_falling_expansion(&ctx, 4).passed);
    }

    #[test]
    fn recurrence_examples() {
        let ctx = context("uniform{0,1,2}", int(1), 1).unwrap();
        assert!(verify_recurrence(&ctx, 6, 2, 2).unwrap().passed);
        assert!(verify_recurrence(&ctx, 5, 0, 0).unwrap().passed);
        assert!(verify_recurrence(&ctx, 5, 3, 0).unwrap().passed);
        assert!(matches!(verify_recurrence(&ctx, 3, 2, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn printed_log_form_counterexample() {
        let ctx = context("bernoulli(1/2)", ratio(1, 3), 0).unwrap();
        let printed = verify_log_expansion(&ctx, 2, LogForm::Printed);
        assert!(!printed.passed);
        assert_eq!(printed.mismatch_at, Some(1));
        assert!(verify_log_expansion(&ctx, 2, LogForm::Corrected).passed);
        for form in [LogForm::Corrected, LogForm::Printed] {
            assert!(verify_log_expansion(&ctx, 0, form).passed);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let grid = Grid {
            dists: vec!["bernoulli(1/2)".into()],
            lambdas: vec![ratio(1, 3)],
            rs: vec![1],
            n_max: 3,
            ..Grid::desk()
        };
        let a = run_suite(&grid, &IdentityId::ALL, Execution::Parallel).unwrap();
        let b = run_suite(&grid, &IdentityId::ALL, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert!(a.required_passed());
        let printed = a.summary.iter().find(|s| s.identity == IdentityId::T2_9PaperForm).unwrap();
        assert!(printed.failed > 0);
    }

    #[test]
    fn failures_are_data() {
        // Custom moments run out beyond order 2; checks report instead of erroring.
        let grid = Grid {
            dists: vec!["moments[1,1,2]".into()],
            lambdas: vec![int(0)],
            rs: vec![0],
            n_max: 3,
            ..Grid::desk()
        };
        let out = run_suite(&grid, &[IdentityId::T2_1VsT2_2], Execution::Sequential).unwrap();
        assert_eq!(out.reports.len(), 4);
        assert!(out.reports[..3].iter().all(|r| r.passed));
        assert!(!out.reports[3].passed);
        assert!(out.reports[3].note.as_deref().unwrap().contains("unavailable"));
    }
}
