//! Command-line surface for `prstirling`.

pub mod output;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prstirling::bell::{bell_coeffs, bell_dobinski, DobinskiOptions, DEFAULT_MAX_TERMS};
use prstirling::identities::{run_suite, Execution, Grid, IdentityId};
use prstirling::scalar::{format_rational, parse_rational};
use prstirling::{DegenerateParameter, Distribution, ExactScalar, MomentOracle, StirlingContext};

use output::{emit, strings, triangle_csv, OutputRecord};

/// Overrides the Dobinski term cap.
pub const MAX_TERMS_ENV: &str = "PRSTIRLING_MAX_TERMS";

#[derive(Debug, Parser)]
#[command(name = "prstirling", version, about = "Probabilistic degenerate r-Stirling numbers and r-Bell polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate S2^{(r,Y)}_lambda(n+r, k+r) for n = 0..=n_max.
    Table(TableArgs),
    /// Coefficients and values of the r-Bell polynomial.
    Bell(BellArgs),
    /// Run the identity suite.
    Verify(VerifyArgs),
    /// Raw moments of Y or of the sum S_j.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ContextArgs {
    /// Distribution expression, e.g. "bernoulli(1/2)".
    #[arg(long, value_parser = parse_dist)]
    pub dist: Distribution,
    /// Degeneracy parameter as an integer or fraction.
    #[arg(long, default_value = "0", value_parser = parse_exact, allow_hyphen_values = true)]
    pub lambda: ExactScalar,
    #[arg(long, default_value_t = 0)]
    pub r: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n_max: usize,
    #[command(flatten)]
    pub context: ContextArgs,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BellArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub context: ContextArgs,
    /// Exact evaluation point.
    #[arg(long, value_parser = parse_exact, allow_hyphen_values = true)]
    pub x: Option<ExactScalar>,
    /// Also evaluate the truncated Dobinski series at --x-float.
    #[arg(long, requires = "x_float")]
    pub dobinski: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub x_float: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Summary,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// `all` (every non-opt-in identity) or a comma-separated list of ids.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Summary)]
    pub report: ReportFormat,
    /// Run grid points on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[arg(long, value_parser = parse_dist)]
    pub dist: Distribution,
    #[arg(long)]
    pub upto: usize,
    /// Report E[S_j^m] instead of E[Y^m].
    #[arg(long)]
    pub sum: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_dist(s: &str) -> Result<Distribution, String> {
    Distribution::parse(s).map_err(|e| e.to_string())
}

fn parse_exact(s: &str) -> Result<ExactScalar, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn context_json(args: &ContextArgs) -> Value {
    json!({
        "dist": args.dist.to_string(),
        "lambda": format_rational(&args.lambda),
        "r": args.r,
    })
}

fn formal_note(dist: &Distribution) -> Option<Value> {
    dist.is_formal().then(|| {
        json!({
            "formal": true,
            "note": "custom moment sequence: not checked to be the moments of a random variable with a moment generating function; results are formal",
        })
    })
}

fn build_context(args: &ContextArgs) -> anyhow::Result<StirlingContext> {
    let oracle = MomentOracle::new(args.dist.clone())?;
    Ok(StirlingContext::new(
        Arc::new(oracle),
        DegenerateParameter::new(args.lambda.clone()),
        args.r,
    ))
}

/// The rendered output of a command plus the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub record: OutputRecord,
    pub text: String,
    pub exit_code: i32,
}

pub fn cmd_table(args: &TableArgs) -> anyhow::Result<Rendered> {
    let ctx = build_context(&args.context)?;
    let table = ctx.table(args.n_max)?;
    let rows: Vec<Vec<String>> = table.entries.iter().map(|r| strings(r)).collect();
    let mut record = OutputRecord::new("table", context_json(&args.context), json!({ "rows": rows }));
    record.diagnostics = formal_note(&args.context.dist);
    let text = match args.format {
        TableFormat::Json => record.to_json(),
        TableFormat::Csv => {
            let comments = vec![
                format!("schema_version={} command=table", output::SCHEMA_VERSION),
                format!(
                    "lambda={} r={} dist={}",
                    format_rational(&args.context.lambda),
                    args.context.r,
                    args.context.dist
                ),
            ];
            triangle_csv(&comments, &table.entries)
        }
    };
    Ok(Rendered { record, text, exit_code: 0 })
}

fn max_terms() -> anyhow::Result<usize> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_TERMS_ENV} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

pub fn cmd_bell(args: &BellArgs) -> anyhow::Result<Rendered> {
    let ctx = build_context(&args.context)?;
    let poly = bell_coeffs(&ctx, args.n)?;
    let mut payload = json!({
        "n": args.n,
        "coefficients": strings(&poly.coefficients),
    });
    if let Some(x) = &args.x {
        payload["x"] = json!(format_rational(x));
        payload["value"] = json!(format_rational(&poly.eval(x)));
    }
    let mut diagnostics = formal_note(&args.context.dist);
    if args.dobinski {
        let x = args.x_float.expect("clap enforces --x-float");
        if x < 0.0 {
            bail!("--dobinski needs a nonnegative --x-float, got {x}");
        }
        let options = DobinskiOptions {
            tolerance: args.tol,
            max_terms: max_terms()?,
        };
        let result = bell_dobinski(&ctx, args.n, x, options)?;
        payload["dobinski"] = json!({ "x": x, "value": result.value, "tolerance": result.tolerance });
        let entry = json!({
            "terms_used": result.terms_used,
            "last_term": result.last_term,
            "tolerance": result.tolerance,
            "max_terms": options.max_terms,
        });
        let diag = diagnostics.get_or_insert_with(|| json!({}));
        diag["dobinski"] = entry;
    }
    let mut record = OutputRecord::new("bell", context_json(&args.context), payload);
    record.diagnostics = diagnostics;
    let text = record.to_json();
    Ok(Rendered { record, text, exit_code: 0 })
}

pub fn parse_suite(list: &str) -> anyhow::Result<Vec<IdentityId>> {
    if list.trim() == "all" {
        return Ok(IdentityId::default_suite());
    }
    list.split(',')
        .map(|s| s.trim().parse::<IdentityId>().map_err(Into::into))
        .collect()
}

pub fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<Rendered> {
    let ids = parse_suite(&args.suite)?;
    let grid = Grid::desk().with_n_max(args.max_n);
    let execution = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let outcome = run_suite(&grid, &ids, execution)?;
    let exit_code = if outcome.required_passed() { 0 } else { 1 };

    let context = json!({
        "dist": grid.dists,
        "lambda": strings(&grid.lambdas),
        "r": grid.rs,
    });
    let opt_in: Vec<&str> = ids.iter().filter(|id| id.is_opt_in()).map(|id| id.name()).collect();
    let payload = json!({
        "max_n": args.max_n,
        "summary": outcome.summary,
        "reports": outcome.reports,
    });
    let mut record = OutputRecord::new("verify", context, payload);
    if !opt_in.is_empty() {
        record.diagnostics = Some(json!({
            "opt_in": opt_in,
            "note": "opt-in identities are findings; their failures do not affect the exit status",
        }));
    }
    let text = match args.report {
        ReportFormat::Json => record.to_json(),
        ReportFormat::Summary => summary_text(&outcome.summary, args.max_n, exit_code),
    };
    Ok(Rendered { record, text, exit_code })
}

fn summary_text(summary: &[prstirling::identities::IdentitySummary], max_n: usize, exit_code: i32) -> String {
    let mut out = format!("identity suite, n <= {max_n}\n");
    for s in summary {
        let status = match (s.failed, s.opt_in) {
            (0, _) => "PASS",
            (_, true) => "FINDING",
            (_, false) => "FAIL",
        };
        out.push_str(&format!(
            "{status:<8} {:<18} {:>6}/{:<6} passed{}\n",
            s.identity.name(),
            s.passed,
            s.total,
            if s.opt_in { " (opt-in)" } else { "" }
        ));
    }
    out.push_str(&format!("exit status {exit_code}\n"));
    out
}

pub fn cmd_moments(args: &MomentsArgs) -> anyhow::Result<Rendered> {
    let oracle = MomentOracle::new(args.dist.clone())?;
    let values = (0..=args.upto)
        .map(|m| match args.sum {
            Some(j) => oracle.sum_moment(j, m),
            None => oracle.moment(m),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let context = json!({ "dist": args.dist.to_string() });
    let payload = json!({ "sum": args.sum, "moments": strings(&values) });
    let mut record = OutputRecord::new("moments", context, payload);
    record.diagnostics = formal_note(&args.dist);
    let text = record.to_json();
    Ok(Rendered { record, text, exit_code: 0 })
}

/// Runs a parsed invocation, writing its output. Returns the exit status.
pub fn run(cli: &Cli) -> anyhow::Result<i32> {
    let (rendered, out) = match &cli.command {
        Command::Table(a) => (cmd_table(a)?, a.out.as_deref()),
        Command::Bell(a) => (cmd_bell(a)?, a.out.as_deref()),
        Command::Verify(a) => (cmd_verify(a)?, a.out.as_deref()),
        Command::Moments(a) => (cmd_moments(a)?, a.out.as_deref()),
    };
    emit(&rendered.text, out)?;
    Ok(rendered.exit_code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("prstirling").chain(args.iter().copied())).unwrap()
    }

    fn rows(r: &Rendered) -> Value {
        r.record.payload["rows"].clone()
    }

    #[test]
    fn table_examples() {
        let Command::Table(a) = parse(&["table", "--n-max", "2", "--dist", "point(1)"]).command else {
            unreachable!()
        };
        assert_eq!(rows(&cmd_table(&a).unwrap()), json!([["1"], ["0", "1"], ["0", "1", "1"]]));

        let Command::Table(a) = parse(&["table", "--n-max", "0", "--r", "3", "--lambda", "-1/2", "--dist", "poisson(1)"]).command else {
            unreachable!()
        };
        assert_eq!(rows(&cmd_table(&a).unwrap()), json!([["1"]]));

        let Command::Table(a) =
            parse(&["table", "--n-max", "2", "--r", "1", "--lambda", "1/3", "--dist", "point(1)", "--format", "csv"]).command
        else {
            unreachable!()
        };
        let out = cmd_table(&a).unwrap();
        assert_eq!(rows(&out), json!([["1"], ["1", "1"], ["2/3", "8/3", "1"]]));
        assert_eq!(
            out.text,
            "# schema_version=1 command=table\n# lambda=1/3 r=1 dist=point(1)\n1\n1,1\n2/3,8/3,1\n"
        );
    }

    #[test]
    fn bell_examples() {
        let Command::Bell(a) = parse(&["bell", "--n", "0", "--dist", "bernoulli(1/2)"]).command else {
            unreachable!()
        };
        assert_eq!(cmd_bell(&a).unwrap().record.payload["coefficients"], json!(["1"]));

        let Command::Bell(a) = parse(&["bell", "--n", "4", "--dist", "point(1)", "--x", "1"]).command else {
            unreachable!()
        };
        assert_eq!(cmd_bell(&a).unwrap().record.payload["value"], json!("15"));

        let Command::Bell(a) = parse(&[
            "bell", "--n", "4", "--r", "1", "--lambda", "1/3", "--dist", "bernoulli(1/2)", "--x", "2",
            "--dobinski", "--x-float", "2", "--tol", "1e-9",
        ])
        .command
        else {
            unreachable!()
        };
        let out = cmd_bell(&a).unwrap();
        let exact = parse_rational(out.record.payload["value"].as_str().unwrap()).unwrap();
        let exact = prstirling::scalar::to_f64(&exact);
        let approx = out.record.payload["dobinski"]["value"].as_f64().unwrap();
        assert!(((approx - exact) / exact).abs() <= 1e-9);
        assert!(out.record.diagnostics.unwrap()["dobinski"]["terms_used"].as_u64().unwrap() > 0);
    }

    #[test]
    fn bell_dobinski_rejects_negative_x() {
        let Command::Bell(a) = parse(&["bell", "--n", "2", "--dist", "point(1)", "--dobinski", "--x-float", "-1"]).command else {
            unreachable!()
        };
        assert!(cmd_bell(&a).is_err());
        assert!(Cli::try_parse_from(["prstirling", "bell", "--n", "2", "--dist", "point(1)", "--dobinski"]).is_err());
    }

    #[test]
    fn moments_examples() {
        let Command::Moments(a) = parse(&["moments", "--dist", "poisson(1)", "--upto", "4"]).command else {
            unreachable!()
        };
        assert_eq!(cmd_moments(&a).unwrap().record.payload["moments"], json!(["1", "1", "2", "5", "15"]));
        let Command::Moments(a) = parse(&["moments", "--dist", "point(1)", "--sum", "3", "--upto", "2"]).command else {
            unreachable!()
        };
        assert_eq!(cmd_moments(&a).unwrap().record.payload["moments"], json!(["1", "3", "9"]));
        let Command::Moments(a) = parse(&["moments", "--dist", "moments[1,2]", "--upto", "0"]).command else {
            unreachable!()
        };
        let out = cmd_moments(&a).unwrap();
        assert_eq!(out.record.payload["moments"], json!(["1"]));
        assert_eq!(out.record.diagnostics.unwrap()["formal"], json!(true));
    }

    #[test]
    fn bad_distributions_are_rejected_at_parse() {
        assert!(Cli::try_parse_from(["prstirling", "moments", "--dist", "bernoulli(3/2)", "--upto", "2"]).is_err());
        assert!(Cli::try_parse_from(["prstirling", "moments", "--dist", "bernoulli(1/2", "--upto", "2"]).is_err());
    }

    #[test]
    fn verify_suite_parsing() {
        assert_eq!(parse_suite("all").unwrap(), IdentityId::default_suite());
        assert_eq!(
            parse_suite("T2_4,T2_9_paper_form").unwrap(),
            vec![IdentityId::T2_4, IdentityId::T2_9PaperForm]
        );
        assert!(parse_suite("T2_99").is_err());
    }

    #[test]
    fn verify_paper_form_is_a_finding() {
        let Command::Verify(a) = parse(&["verify", "--suite", "T2_9_paper_form", "--max-n", "3", "--report", "json"]).command
        else {
            unreachable!()
        };
        let out = cmd_verify(&a).unwrap();
        assert_eq!(out.exit_code, 0);
        let failed = out.record.payload["summary"][0]["failed"].as_u64().unwrap();
        assert!(failed > 0);
        assert!(out.record.diagnostics.is_some());
    }

    #[test]
    fn verify_trivial_grid() {
        let Command::Verify(a) = parse(&["verify", "--suite", "all", "--max-n", "0"]).command else {
            unreachable!()
        };
        let out = cmd_verify(&a).unwrap();
        assert_eq!(out.exit_code, 0);
        assert!(out.text.contains("PASS"));
        assert!(!out.text.contains("FAIL"));
    }
}
