//! `recur-bound`: certified D-finite partial sums and rounding-error case studies.
//!
//! Exit codes: 0 success (every bound holds), 2 a bound was violated,
//! 1 usage, input or precision errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use recur_bound::ball::Ball;
use recur_bound::casestudies::wave::wave_lambda_report;
use recur_bound::casestudies::{
    bernoulli_run, legendre_run, sine_samples, toy_fixed_run, toy_float_run,
    toy_float_tightness_run, wave_run, ErrorPolicy, SimulationReport,
};
use recur_bound::dfinite::{evaluate, to_recurrence, DfsumOptions, DiffOperator};
use recur_bound::exactnum::{
    complex_to_decimal, int, parse_complex, parse_rational, pow2, rat, to_decimal, BinFloat,
    FloatContext, Rational,
};

#[derive(Parser, Debug)]
#[command(name = "recur-bound", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified enclosure of a truncated D-finite series at a point.
    Eval(EvalArgs),
    /// Prints the recurrence b_0(n) u_n + ... + b_s(n) u_{n-s} = 0 of an operator.
    Rec {
        /// Operator file: {"order": r, "polys": [[c_0, c_1, ...], ...]}.
        #[arg(long)]
        op: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs a rounding-error case study and checks its bounds.
    Case(CaseArgs),
}

#[derive(Parser, Debug)]
struct EvalArgs {
    /// Operator file: {"order": r, "polys": [[c_0, c_1, ...], ...]}.
    #[arg(long)]
    op: PathBuf,
    /// Initial coefficients as balls "mid,rad" or "re,im,rad", separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    init: String,
    /// Evaluation point "re,im" or "re"; rationals ("1/3") or decimals ("0.5").
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Truncation order N: the sum runs over n < N.
    #[arg(long)]
    order: usize,
    /// Working precision t in bits (t >= 3).
    #[arg(long, default_value_t = 53)]
    prec: u32,
    /// Replace a computed coefficient by zero when its ball contains zero.
    #[arg(long)]
    force_zero_midpoints: bool,
    /// Record every local error in the report.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseName {
    ToyFixed,
    ToyFloat,
    ToyTight,
    Legendre,
    Bernoulli,
    Wave,
    WaveLambda,
}

#[derive(Parser, Debug)]
struct CaseArgs {
    #[arg(value_enum)]
    case: CaseName,
    /// Precision t in bits; for toy-fixed and toy-tight the unit is u = 2^-t.
    #[arg(long)]
    prec: Option<u32>,
    /// Number of steps (Bernoulli: number of terms K; wave: time levels).
    #[arg(long)]
    steps: Option<usize>,
    /// Error policy for injected errors: worst, random or adversarial.
    #[arg(long, default_value = "worst")]
    policy: String,
    /// Seed of the random policy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Courant parameter a in (0, 1] (wave, wave-lambda).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Number of grid intervals n (wave, wave-lambda).
    #[arg(long)]
    n: Option<usize>,
    /// Legendre argument x in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Legendre error bound per step, e.g. "2^-20" or "1/1048576".
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Initial value c0 (toy cases).
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Rows shown by the text format.
    #[arg(long, default_value_t = 20)]
    rows: usize,
}

/// Rational literal: "p/q", decimal, or "2^k".
fn parse_q(s: &str) -> Result<Rational> {
    if let Some(e) = s.trim().strip_prefix("2^") {
        let e: i64 = e
            .parse()
            .with_context(|| format!("bad exponent in {s:?}"))?;
        return Ok(pow2(e));
    }
    Ok(parse_rational(s)?)
}

fn context(prec: u32) -> Result<FloatContext> {
    if prec < 3 {
        bail!("precision must be at least 3 bits, got {prec}");
    }
    Ok(FloatContext::new(prec)?)
}

fn read_operator(path: &Path) -> Result<DiffOperator> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read operator file {}", path.display()))?;
    DiffOperator::from_json_str(&text)
        .with_context(|| format!("invalid operator file {}", path.display()))
}

fn parse_inits(s: &str, ctx: FloatContext) -> Result<Vec<Ball>> {
    s.split(';')
        .filter(|item| !item.trim().is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(',').collect();
            let (mid, rad) = match parts.as_slice() {
                [re, rad] => (parse_complex(re)?, parse_q(rad)?),
                [re, im, rad] => (parse_complex(&format!("{re},{im}"))?, parse_q(rad)?),
                _ => bail!("initial value {item:?} must be \"mid,rad\" or \"re,im,rad\""),
            };
            Ball::around(&mid, &rad, ctx).with_context(|| format!("initial value {item:?}"))
        })
        .collect()
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn print_json(v: &Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn run_eval(args: &EvalArgs) -> Result<ExitCode> {
    if args.order == 0 {
        bail!("--order must be at least 1");
    }
    let ctx = context(args.prec)?;
    let op = read_operator(&args.op)?;
    let inits = parse_inits(&args.init, ctx)?;
    let zeta = parse_complex(&args.point)?;
    let opts = DfsumOptions {
        force_zero_midpoints: args.force_zero_midpoints,
        trace: args.trace,
    };
    let res = evaluate(&op, &inits, &zeta, args.order, ctx, opts)?;
    let report = res.to_json();
    if args.format == Format::Text {
        let mid = res.enclosure.mid_exact();
        emit(&format!(
            "sum_{{n<{}}} u_n zeta^n in {} +/- {}\n",
            args.order,
            complex_to_decimal(&mid, 20),
            to_decimal(res.total_radius(), 6)
        ))?;
    }
    print_json(&report)?;
    Ok(ExitCode::SUCCESS)
}

fn run_rec(op: &Path, format: Format) -> Result<ExitCode> {
    let rec = to_recurrence(&read_operator(op)?);
    match format {
        Format::Json => print_json(&rec.to_json())?,
        Format::Text => {
            let lines: String = rec
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, b)| format!("b_{k}(n) = {b}\n"))
                .collect();
            emit(&lines)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_case(args: &CaseArgs) -> Result<SimulationReport> {
    let policy = ErrorPolicy::parse(&args.policy, args.seed)?;
    let c0 = args.c0.as_deref().map(parse_q).transpose()?;
    let one = int(1);
    let rep = match args.case {
        CaseName::ToyFixed => {
            let u = pow2(-i64::from(args.prec.unwrap_or(30)));
            toy_fixed_run(&c0.unwrap_or(one), &u, args.steps.unwrap_or(100), policy)?
        }
        CaseName::ToyFloat => {
            let ctx = context(args.prec.unwrap_or(24))?;
            let c0: BinFloat = ctx.round(&c0.unwrap_or(one));
            toy_float_run(&c0, ctx, args.steps.unwrap_or(1000))?
        }
        CaseName::ToyTight => {
            let u = pow2(-i64::from(args.prec.unwrap_or(24)));
            toy_float_tightness_run(&c0.unwrap_or(one), &u, args.steps.unwrap_or(50))?
        }
        CaseName::Legendre => {
            let x = args
                .x
                .as_deref()
                .map(parse_q)
                .transpose()?
                .unwrap_or(rat(1, 2));
            let eps = args
                .eps
                .as_deref()
                .map(parse_q)
                .transpose()?
                .unwrap_or(pow2(-20));
            legendre_run(&x, &eps, args.steps.unwrap_or(1000), policy)?
        }
        CaseName::Bernoulli => {
            let ctx = context(args.prec.unwrap_or(53))?;
            bernoulli_run(ctx, args.steps.unwrap_or(100))?
        }
        CaseName::Wave => {
            let ctx = context(args.prec.unwrap_or(53))?;
            let n = args.n.unwrap_or(32);
            if n < 2 {
                bail!("--n must be at least 2");
            }
            let a = args.a.as_deref().map(parse_q).transpose()?.unwrap_or(one);
            let init: Vec<Rational> = sine_samples(n, ctx)
                .iter()
                .map(BinFloat::to_rational)
                .collect();
            wave_run(n, &a, &init, ctx, args.steps.unwrap_or(512))?
        }
        CaseName::WaveLambda => {
            let a = args
                .a
                .as_deref()
                .map(parse_q)
                .transpose()?
                .unwrap_or(rat(1, 2));
            wave_lambda_report(args.n.unwrap_or(4), &a, args.steps.unwrap_or(64))?
        }
    };
    Ok(rep)
}

/// 0 if every bound and check holds, 2 otherwise.
fn case_status(rep: &SimulationReport) -> u8 {
    if rep.passed() {
        0
    } else {
        2
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Rec { op, format } => run_rec(op, *format),
        Command::Case(args) => {
            let rep = run_case(args)?;
            match args.format {
                Format::Json => print_json(&rep.to_json())?,
                Format::Text => emit(&rep.to_text(args.rows))?,
            }
            let code = case_status(&rep);
            if code == 2 {
                eprintln!("bound violated in case {}", rep.case);
            }
            Ok(ExitCode::from(code))
        }
    }
}

/// A closed downstream pipe (`| head`) is not an error of the tool.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>()
        .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
