//! Command line front end: evaluate family members, sweep identity
//! grids, emit tables.
//!
//! Exit codes are a stable contract: 0 success or all checks passed,
//! 1 at least one identity check failed, 2 usage or config error.

mod parse;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Deserialize;

use parse::{
    digits_for_bits, parse_character, parse_complex, parse_int_list, parse_q, parse_rational,
    parse_rational_list, parse_weight_pairs,
};
use qeuler::{
    choose_truncation, classical_euler_poly, complex_from_rationals, l_multiple,
    power_sum_factored, run_grid, DirichletCharacter, EulerEvaluator, EulerParams, GridSpec,
    IdentityId, IdentityReport, LQuery, Mode, Mutation, QContext, Scalar, SeriesTruncation,
    DEFAULT_PRECISION,
};

#[derive(Parser)]
#[command(
    name = "qeuler",
    version,
    about = "Twisted q-Euler polynomials, alternating power sums, their \
             l-series, and machine checks of the identities relating them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

// Built once at startup; clap's derive cannot box a subcommand payload.
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at explicit parameters.
    Compute(ComputeArgs),
    /// Check identities over a parameter grid (default, config or flags).
    Verify(VerifyArgs),
    /// Emit a value table over an (n, x) grid as CSV or JSON.
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(subcommand)]
    subject: ComputeSubject,
}

#[derive(Subcommand)]
enum ComputeSubject {
    /// Polynomial values E_n(x) for n over a range.
    Euler(EulerArgs),
    /// Alternating power sum S_{n,i}(w) for n over a range.
    PowerSum(PowerSumArgs),
    /// Classical (q -> 1) polynomial values; q plays no role.
    Classical(ClassicalArgs),
    /// The l-series at one complex point s (numeric mode).
    L(LArgs),
}

#[derive(Args)]
struct CommonParams {
    /// q literal: "a/b" exact, "0.25" or "0.25@512" numeric.
    #[arg(long)]
    q: String,
    /// Character literal: principal:d, quadratic:p, or d:v0,v1,...
    #[arg(long)]
    chi: String,
    /// Weight parameter of the family.
    #[arg(long)]
    h: i64,
    /// Order (number of factors), at least 1.
    #[arg(long)]
    r: u32,
    /// Override the mode implied by the q literal.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Working precision in bits for numeric mode.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args)]
struct EulerArgs {
    #[command(flatten)]
    common: CommonParams,
    /// Degree or degree range, e.g. 3 or 0..4.
    #[arg(long)]
    n: String,
    /// Argument of the polynomial (rational).
    #[arg(long)]
    x: String,
}

#[derive(Args)]
struct PowerSumArgs {
    #[command(flatten)]
    common: CommonParams,
    /// Degree or degree range.
    #[arg(long)]
    n: String,
    /// Bracket exponent, 0 <= i <= n.
    #[arg(long)]
    i: u32,
    /// Summation span per index.
    #[arg(long)]
    w: u32,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Character literal.
    #[arg(long)]
    chi: String,
    /// Order (number of factors), at least 1.
    #[arg(long)]
    r: u32,
    /// Degree or degree range.
    #[arg(long)]
    n: String,
    /// Argument of the polynomial (rational).
    #[arg(long)]
    x: String,
}

#[derive(Args)]
struct LArgs {
    #[command(flatten)]
    common: CommonParams,
    /// Evaluation point, e.g. 2, 5/2 or 3+1i.
    #[arg(long)]
    s: String,
    /// Series argument, must be positive.
    #[arg(long)]
    x: String,
    /// Fixed per-index truncation instead of automatic selection.
    #[arg(long)]
    limit: Option<u32>,
    /// Acceptable truncation tail (default 1e-20).
    #[arg(long)]
    tail: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Grid config file (TOML); inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit the full report list as JSON instead of pass counts.
    #[arg(long)]
    json: bool,
    /// Corrupt one factor of every left side: lhs, weight or character.
    #[arg(long)]
    mutate: Option<String>,
    /// Identities to check, comma-separated.
    #[arg(long)]
    identities: Option<String>,
    /// q literals, comma-separated.
    #[arg(long)]
    q: Option<String>,
    /// Character literals, comma-separated.
    #[arg(long)]
    chi: Option<String>,
    /// h values or ranges, e.g. -1..3.
    #[arg(long)]
    h: Option<String>,
    /// r values or ranges.
    #[arg(long)]
    r: Option<String>,
    /// n values or ranges.
    #[arg(long)]
    n: Option<String>,
    /// m values or ranges (reflection pairing).
    #[arg(long)]
    m: Option<String>,
    /// x values: rationals, or integer ranges.
    #[arg(long)]
    x: Option<String>,
    /// y values: rationals, or integer ranges.
    #[arg(long)]
    y: Option<String>,
    /// Weight pairs w1:w2, comma-separated.
    #[arg(long)]
    w: Option<String>,
    /// s values for the series identity, comma-separated.
    #[arg(long)]
    s: Option<String>,
    /// Force exact or numeric mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Working precision in bits for numeric mode.
    #[arg(long)]
    precision: Option<u32>,
    /// Comparison tolerance for numeric mode.
    #[arg(long)]
    tolerance: Option<String>,
    /// Fixed per-index series truncation.
    #[arg(long)]
    limit: Option<u32>,
    /// Series truncation tail target.
    #[arg(long)]
    tail: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableSubject {
    Euler,
    /// Rows sweep (n, i); i is reported in the x column.
    PowerSum,
    Classical,
}

#[derive(Args)]
struct TableArgs {
    subject: TableSubject,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// q literal (unused for classical).
    #[arg(long)]
    q: Option<String>,
    /// Character literal.
    #[arg(long)]
    chi: String,
    /// Weight parameter (unused for classical).
    #[arg(long)]
    h: Option<i64>,
    /// Order (number of factors), at least 1.
    #[arg(long)]
    r: u32,
    /// Degree values or ranges.
    #[arg(long)]
    n: String,
    /// Arguments: rationals or integer ranges (for power-sum: i values).
    #[arg(long)]
    x: String,
    /// Summation span per index (power-sum only).
    #[arg(long)]
    w: Option<u32>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    precision: Option<u32>,
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// One command's printable outcome: what ran, with which parameters,
/// and the labeled values it produced.
struct OutputRecord {
    command: String,
    parameters: BTreeMap<String, String>,
    values: Vec<(String, String)>,
}

impl OutputRecord {
    /// A `#` header echoing the effective parameters, then one labeled
    /// value per line.
    fn print_text(&self) {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{}={}", k, v))
            .collect();
        println!("# {} {}", self.command, params.join(" "));
        for (label, value) in &self.values {
            println!("{} = {}", label, value);
        }
    }
}

fn flag_err(flag: &str) -> impl Fn(qeuler::Error) -> String + '_ {
    move |e| format!("invalid --{}: {}", flag, e)
}

/// Context from a q literal plus optional mode/precision overrides.
fn build_context(
    q_literal: &str,
    mode: Option<ModeArg>,
    precision: Option<u32>,
    tolerance: Option<&BigRational>,
) -> Result<QContext, String> {
    let (q, implied, lit_prec) = parse_q(q_literal).map_err(|e| format!("invalid --q: {}", e))?;
    let mode = match mode {
        Some(ModeArg::Exact) => Mode::Exact,
        Some(ModeArg::Numeric) => Mode::Numeric,
        None => implied,
    };
    let prec = precision.or(lit_prec).unwrap_or(DEFAULT_PRECISION);
    match mode {
        Mode::Exact => QContext::exact(q),
        Mode::Numeric => {
            let tol = tolerance.cloned().unwrap_or_else(qeuler::default_tolerance);
            QContext::numeric(q, prec, tol)
        }
    }
    .map_err(flag_err("q"))
}

fn render_value(v: &Scalar, ctx: &QContext) -> String {
    v.render(digits_for_bits(ctx.precision()))
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Numeric => "numeric",
    }
}

/// Dying quietly when the reader goes away (`qeuler table ... | head`)
/// beats a broken-pipe panic from println.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Table(args) => cmd_table(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

fn cmd_compute(args: ComputeArgs) -> Result<ExitCode, String> {
    let record = match args.subject {
        ComputeSubject::Euler(a) => compute_euler(a)?,
        ComputeSubject::PowerSum(a) => compute_power_sum(a)?,
        ComputeSubject::Classical(a) => compute_classical(a)?,
        ComputeSubject::L(a) => compute_l(a)?,
    };
    record.print_text();
    Ok(ExitCode::SUCCESS)
}

fn common_parameters(ctx: &QContext, chi: &DirichletCharacter, params: EulerParams) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    map.insert("q".into(), ctx.root().to_string());
    map.insert("mode".into(), mode_name(ctx.mode()).into());
    if ctx.mode() == Mode::Numeric {
        map.insert("precision".into(), ctx.precision().to_string());
    }
    map.insert("chi".into(), chi.describe());
    map.insert("h".into(), params.h.to_string());
    map.insert("r".into(), params.r.to_string());
    map
}

fn compute_euler(a: EulerArgs) -> Result<OutputRecord, String> {
    let ctx = build_context(&a.common.q, a.common.mode, a.common.precision, None)?;
    let chi = parse_character(&a.common.chi).map_err(|e| format!("invalid --chi: {}", e))?;
    let params = EulerParams::new(a.common.h, a.common.r).map_err(flag_err("r"))?;
    let ns: Vec<u32> = parse_int_list(&a.n, "n").map_err(|e| format!("invalid --n: {}", e))?;
    let x = parse_rational(&a.x).map_err(|e| format!("invalid --x: {}", e))?;

    let mut evaluator = EulerEvaluator::new(&ctx, &chi, params).map_err(|e| e.to_string())?;
    let mut values = Vec::new();
    for &n in &ns {
        let v = evaluator.eval(n, &x).map_err(|e| e.to_string())?;
        values.push((format!("euler(n={})", n), render_value(&v, &ctx)));
    }
    let mut parameters = common_parameters(&ctx, &chi, params);
    parameters.insert("x".into(), x.to_string());
    Ok(OutputRecord { command: "compute".into(), parameters, values })
}

fn compute_power_sum(a: PowerSumArgs) -> Result<OutputRecord, String> {
    let ctx = build_context(&a.common.q, a.common.mode, a.common.precision, None)?;
    let chi = parse_character(&a.common.chi).map_err(|e| format!("invalid --chi: {}", e))?;
    let params = EulerParams::new(a.common.h, a.common.r).map_err(flag_err("r"))?;
    let ns: Vec<u32> = parse_int_list(&a.n, "n").map_err(|e| format!("invalid --n: {}", e))?;

    let mut values = Vec::new();
    for &n in &ns {
        let v = power_sum_factored(n, a.i, a.w, &chi, params, &ctx).map_err(|e| e.to_string())?;
        values.push((format!("power-sum(n={})", n), render_value(&v, &ctx)));
    }
    let mut parameters = common_parameters(&ctx, &chi, params);
    parameters.insert("i".into(), a.i.to_string());
    parameters.insert("w".into(), a.w.to_string());
    Ok(OutputRecord { command: "compute".into(), parameters, values })
}

fn compute_classical(a: ClassicalArgs) -> Result<OutputRecord, String> {
    let chi = parse_character(&a.chi).map_err(|e| format!("invalid --chi: {}", e))?;
    let ns: Vec<u32> = parse_int_list(&a.n, "n").map_err(|e| format!("invalid --n: {}", e))?;
    let x = parse_rational(&a.x).map_err(|e| format!("invalid --x: {}", e))?;
    // The limit polynomial does not depend on q; any exact context does.
    let ctx = QContext::exact(BigRational::new(1.into(), 2.into())).unwrap();

    let mut values = Vec::new();
    for &n in &ns {
        let v = classical_euler_poly(n, &x, &chi, a.r, &ctx).map_err(|e| e.to_string())?;
        values.push((format!("classical(n={})", n), render_value(&v, &ctx)));
    }
    let mut parameters = BTreeMap::new();
    parameters.insert("mode".into(), "exact".into());
    parameters.insert("chi".into(), chi.describe());
    parameters.insert("r".into(), a.r.to_string());
    parameters.insert("x".into(), x.to_string());
    Ok(OutputRecord { command: "compute".into(), parameters, values })
}

fn compute_l(a: LArgs) -> Result<OutputRecord, String> {
    let tail_target = match &a.tail {
        Some(t) => parse_rational(t).map_err(|e| format!("invalid --tail: {}", e))?,
        None => BigRational::new(1.into(), num_bigint::BigInt::from(10u8).pow(20)),
    };
    // The series only evaluates numerically; the tail tolerance is the
    // context tolerance so a fixed --limit is checked against it.
    let mode = a.common.mode.or(Some(ModeArg::Numeric));
    let ctx = build_context(&a.common.q, mode, a.common.precision, Some(&tail_target))?;
    let chi = parse_character(&a.common.chi).map_err(|e| format!("invalid --chi: {}", e))?;
    let params = EulerParams::new(a.common.h, a.common.r).map_err(flag_err("r"))?;
    let (s_re, s_im) = parse_complex(&a.s).map_err(|e| format!("invalid --s: {}", e))?;
    let x = parse_rational(&a.x).map_err(|e| format!("invalid --x: {}", e))?;
    let s = complex_from_rationals(&s_re, &s_im, ctx.precision());

    let trunc = match a.limit {
        Some(m) => SeriesTruncation { per_index_limit: m },
        None => choose_truncation(&x, &s, params, &ctx, &tail_target).map_err(|e| e.to_string())?,
    };
    let query = LQuery { s, x: x.clone(), chi: chi.clone(), params, trunc };
    let out = l_multiple(&query, &ctx).map_err(|e| e.to_string())?;

    let mut parameters = common_parameters(&ctx, &chi, params);
    parameters.insert("s".into(), qeuler::render_s(&s_re, &s_im));
    parameters.insert("x".into(), x.to_string());
    parameters.insert("per_index_limit".into(), trunc.per_index_limit.to_string());
    let values = vec![
        (
            format!("l(s={}, x={})", qeuler::render_s(&s_re, &s_im), x),
            render_value(&out.value, &ctx),
        ),
        ("tail_bound".into(), out.tail_bound.to_decimal_string(6)),
    ];
    Ok(OutputRecord { command: "compute".into(), parameters, values })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// TOML grid schema: list-valued keys mirroring the sweep dimensions;
/// integer keys also accept "lo..hi" strings.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridConfig {
    identities: Option<Vec<String>>,
    mode: Option<String>,
    q: Option<Vec<String>>,
    chi: Option<Vec<String>>,
    h: Option<IntsSpec>,
    r: Option<IntsSpec>,
    n: Option<IntsSpec>,
    m: Option<IntsSpec>,
    x: Option<RatsSpec>,
    y: Option<RatsSpec>,
    w: Option<Vec<(u32, u32)>>,
    s: Option<Vec<String>>,
    precision: Option<u32>,
    tolerance: Option<String>,
    per_index_limit: Option<u32>,
    tail_target: Option<String>,
    mutation: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntsSpec {
    Range(String),
    List(Vec<i64>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatsSpec {
    Range(String),
    List(Vec<RatItem>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatItem {
    Int(i64),
    Str(String),
}

fn ints_from_spec<T>(spec: &IntsSpec, what: &str) -> Result<Vec<T>, String>
where
    T: std::str::FromStr + PartialOrd + Copy + TryFrom<i64>,
    std::ops::RangeInclusive<T>: Iterator<Item = T>,
{
    match spec {
        IntsSpec::Range(s) => parse_int_list(s, what),
        IntsSpec::List(vs) => vs
            .iter()
            .map(|&v| T::try_from(v).map_err(|_| format!("{} value {} out of range", what, v)))
            .collect(),
    }
}

fn rats_from_spec(spec: &RatsSpec, what: &str) -> Result<Vec<BigRational>, String> {
    match spec {
        RatsSpec::Range(s) => parse_rational_list(s, what),
        RatsSpec::List(items) => items
            .iter()
            .map(|item| match item {
                RatItem::Int(v) => Ok(BigRational::from_integer((*v).into())),
                RatItem::Str(s) => parse_rational(s),
            })
            .collect(),
    }
}

fn parse_identity_list(s: &str) -> Result<Vec<IdentityId>, String> {
    s.split(',')
        .map(|item| {
            IdentityId::parse(item.trim()).ok_or_else(|| {
                format!(
                    "unknown identity '{}'; expected one of {}",
                    item,
                    IdentityId::ALL.map(|i| i.as_str()).join(", ")
                )
            })
        })
        .collect()
}

fn parse_mutation_arg(s: &str) -> Result<Mutation, String> {
    Mutation::parse(s)
        .ok_or_else(|| format!("unknown mutation '{}'; expected lhs, weight or character", s))
}

/// The built-in sweep: every exact identity over a small grid that
/// finishes in seconds.
fn default_grid() -> (GridSpec, Vec<String>) {
    let mut spec = GridSpec::empty(Mode::Exact);
    spec.identities = vec![
        IdentityId::Umbral,
        IdentityId::Addition,
        IdentityId::DistributionSymmetry,
        IdentityId::PowerSumSymmetry,
        IdentityId::Reflection,
    ];
    let q_literals = vec!["1/2".to_string(), "2/3".to_string()];
    spec.qs = vec![
        BigRational::new(1.into(), 2.into()),
        BigRational::new(2.into(), 3.into()),
    ];
    spec.characters = vec![
        DirichletCharacter::principal(1).unwrap(),
        DirichletCharacter::quadratic(3).unwrap(),
    ];
    spec.hs = vec![0, 2];
    spec.rs = vec![1, 2];
    spec.ns = (0..=3).collect();
    spec.ms = (0..=2).collect();
    spec.xs = vec![BigRational::from_integer(0.into()), BigRational::from_integer(1.into())];
    spec.ys = spec.xs.clone();
    spec.w_pairs = vec![(1, 3), (3, 1), (3, 3)];
    (spec, q_literals)
}

fn apply_config(spec: &mut GridSpec, q_literals: &mut Vec<String>, text: &str) -> Result<(), String> {
    let cfg: GridConfig =
        toml::from_str(text).map_err(|e| format!("config parse error: {}", e))?;
    if let Some(ids) = &cfg.identities {
        spec.identities = parse_identity_list(&ids.join(","))?;
    }
    if let Some(qs) = &cfg.q {
        set_qs(spec, q_literals, qs)?;
    }
    if let Some(chis) = &cfg.chi {
        spec.characters = chis
            .iter()
            .map(|c| parse_character(c))
            .collect::<Result<_, _>>()?;
    }
    if let Some(v) = &cfg.h {
        spec.hs = ints_from_spec(v, "h")?;
    }
    if let Some(v) = &cfg.r {
        spec.rs = ints_from_spec(v, "r")?;
    }
    if let Some(v) = &cfg.n {
        spec.ns = ints_from_spec(v, "n")?;
    }
    if let Some(v) = &cfg.m {
        spec.ms = ints_from_spec(v, "m")?;
    }
    if let Some(v) = &cfg.x {
        spec.xs = rats_from_spec(v, "x")?;
    }
    if let Some(v) = &cfg.y {
        spec.ys = rats_from_spec(v, "y")?;
    }
    if let Some(w) = &cfg.w {
        spec.w_pairs = w.clone();
    }
    if let Some(ss) = &cfg.s {
        spec.ss = ss
            .iter()
            .map(|item| parse_complex(item))
            .collect::<Result<_, _>>()?;
    }
    if let Some(mode) = &cfg.mode {
        spec.mode = match mode.as_str() {
            "exact" => Mode::Exact,
            "numeric" => Mode::Numeric,
            other => return Err(format!("unknown mode '{}'", other)),
        };
    }
    if let Some(p) = cfg.precision {
        spec.precision = p;
    }
    if let Some(t) = &cfg.tolerance {
        spec.tolerance = Some(parse_rational(t)?);
    }
    if let Some(m) = cfg.per_index_limit {
        spec.per_index_limit = Some(m);
    }
    if let Some(t) = &cfg.tail_target {
        spec.tail_target = Some(parse_rational(t)?);
    }
    if let Some(m) = &cfg.mutation {
        spec.mutation = Some(parse_mutation_arg(m)?);
    }
    Ok(())
}

/// Replaces the grid's q list; literals decide the mode unless an
/// explicit mode was or will be set.
fn set_qs(spec: &mut GridSpec, q_literals: &mut Vec<String>, literals: &[String]) -> Result<(), String> {
    let mut qs = Vec::new();
    let mut any_numeric = false;
    let mut max_prec = None::<u32>;
    for lit in literals {
        let (q, mode, prec) = parse_q(lit).map_err(|e| format!("invalid q: {}", e))?;
        any_numeric |= mode == Mode::Numeric;
        if let Some(p) = prec {
            max_prec = Some(max_prec.map_or(p, |m| m.max(p)));
        }
        qs.push(q);
    }
    spec.qs = qs;
    *q_literals = literals.to_vec();
    if any_numeric {
        spec.mode = Mode::Numeric;
    }
    if let Some(p) = max_prec {
        spec.precision = p;
    }
    Ok(())
}

fn apply_flags(spec: &mut GridSpec, q_literals: &mut Vec<String>, args: &VerifyArgs) -> Result<(), String> {
    if let Some(ids) = &args.identities {
        spec.identities = parse_identity_list(ids)?;
    }
    if let Some(qs) = &args.q {
        let literals: Vec<String> = qs.split(',').map(|s| s.trim().to_string()).collect();
        set_qs(spec, q_literals, &literals)?;
    }
    if let Some(chis) = &args.chi {
        spec.characters = chis
            .split(',')
            .map(parse_character)
            .collect::<Result<_, _>>()
            .map_err(|e| format!("invalid --chi: {}", e))?;
    }
    if let Some(v) = &args.h {
        spec.hs = parse_int_list(v, "h").map_err(|e| format!("invalid --h: {}", e))?;
    }
    if let Some(v) = &args.r {
        spec.rs = parse_int_list(v, "r").map_err(|e| format!("invalid --r: {}", e))?;
    }
    if let Some(v) = &args.n {
        spec.ns = parse_int_list(v, "n").map_err(|e| format!("invalid --n: {}", e))?;
    }
    if let Some(v) = &args.m {
        spec.ms = parse_int_list(v, "m").map_err(|e| format!("invalid --m: {}", e))?;
    }
    if let Some(v) = &args.x {
        spec.xs = parse_rational_list(v, "x").map_err(|e| format!("invalid --x: {}", e))?;
    }
    if let Some(v) = &args.y {
        spec.ys = parse_rational_list(v, "y").map_err(|e| format!("invalid --y: {}", e))?;
    }
    if let Some(v) = &args.w {
        spec.w_pairs = parse_weight_pairs(v).map_err(|e| format!("invalid --w: {}", e))?;
    }
    if let Some(v) = &args.s {
        spec.ss = v
            .split(',')
            .map(parse_complex)
            .collect::<Result<_, _>>()
            .map_err(|e| format!("invalid --s: {}", e))?;
    }
    if let Some(mode) = args.mode {
        spec.mode = match mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Numeric => Mode::Numeric,
        };
    }
    if let Some(p) = args.precision {
        spec.precision = p;
    }
    if let Some(t) = &args.tolerance {
        spec.tolerance = Some(parse_rational(t).map_err(|e| format!("invalid --tolerance: {}", e))?);
    }
    if let Some(m) = args.limit {
        spec.per_index_limit = Some(m);
    }
    if let Some(t) = &args.tail {
        spec.tail_target = Some(parse_rational(t).map_err(|e| format!("invalid --tail: {}", e))?);
    }
    if let Some(m) = &args.mutate {
        spec.mutation = Some(parse_mutation_arg(m)?);
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let (mut spec, mut q_literals) = default_grid();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {}", path.display(), e))?;
        apply_config(&mut spec, &mut q_literals, &text)?;
    }
    apply_flags(&mut spec, &mut q_literals, &args)?;

    let reports = run_grid(&spec);

    let mut parameters = BTreeMap::new();
    parameters.insert("mode".into(), mode_name(spec.mode).into());
    if spec.mode == Mode::Numeric {
        parameters.insert("precision".into(), spec.precision.to_string());
    }
    parameters.insert("q".into(), q_literals.join(","));
    parameters.insert(
        "identities".into(),
        spec.identities.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(","),
    );
    parameters.insert("points".into(), reports.len().to_string());
    if let Some(m) = spec.mutation {
        parameters.insert("mutation".into(), m.as_str().into());
    }

    let failed = reports.iter().filter(|r| !r.passed).count();
    if args.json {
        let digits = digits_for_bits(spec.precision);
        print_verify_json(&parameters, &reports, digits);
    } else {
        print_verify_text(&reports, failed);
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_verify_text(reports: &[IdentityReport], failed: usize) {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for rep in reports {
        let entry = counts.entry(rep.identity_id.as_str()).or_insert((0, 0));
        entry.1 += 1;
        if rep.passed {
            entry.0 += 1;
        }
    }
    for (id, (pass, total)) in &counts {
        println!("{}: {}/{} passed", id, pass, total);
    }
    if failed == 0 {
        println!("all passed");
    } else {
        for rep in reports.iter().filter(|r| !r.passed).take(10) {
            let detail = rep.error.clone().unwrap_or_else(|| "sides differ".into());
            println!("FAIL {} {:?}: {}", rep.identity_id.as_str(), rep.params, detail);
        }
        println!("{} failed", failed);
    }
}

fn print_verify_json(
    parameters: &BTreeMap<String, String>,
    reports: &[IdentityReport],
    digits: usize,
) {
    let render = |v: &Option<Scalar>| match v {
        Some(s) => serde_json::Value::String(s.render(digits)),
        None => serde_json::Value::Null,
    };
    let reports_json: Vec<serde_json::Value> = reports
        .iter()
        .map(|rep| {
            serde_json::json!({
                "identity_id": rep.identity_id.as_str(),
                "params": &rep.params,
                "lhs": render(&rep.lhs),
                "rhs": render(&rep.rhs),
                "passed": rep.passed,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "command": "verify",
        "parameters": parameters,
        "reports": reports_json,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("JSON rendering"));
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

fn cmd_table(args: TableArgs) -> Result<ExitCode, String> {
    let chi = parse_character(&args.chi).map_err(|e| format!("invalid --chi: {}", e))?;
    let ns: Vec<u32> = parse_int_list(&args.n, "n").map_err(|e| format!("invalid --n: {}", e))?;

    let (parameters, rows) = match args.subject {
        TableSubject::Euler => {
            let q = args.q.as_deref().ok_or("missing --q")?;
            let ctx = build_context(q, args.mode, args.precision, None)?;
            let h = args.h.ok_or("missing --h")?;
            let params = EulerParams::new(h, args.r).map_err(flag_err("r"))?;
            let xs = parse_rational_list(&args.x, "x").map_err(|e| format!("invalid --x: {}", e))?;
            let mut evaluator = EulerEvaluator::new(&ctx, &chi, params).map_err(|e| e.to_string())?;
            let mut rows = Vec::new();
            for &n in &ns {
                for x in &xs {
                    let v = evaluator.eval(n, x).map_err(|e| e.to_string())?;
                    rows.push((n.to_string(), x.to_string(), render_value(&v, &ctx)));
                }
            }
            (common_parameters(&ctx, &chi, params), rows)
        }
        TableSubject::PowerSum => {
            let q = args.q.as_deref().ok_or("missing --q")?;
            let ctx = build_context(q, args.mode, args.precision, None)?;
            let h = args.h.ok_or("missing --h")?;
            let w = args.w.ok_or("missing --w")?;
            let params = EulerParams::new(h, args.r).map_err(flag_err("r"))?;
            let is: Vec<u32> =
                parse_int_list(&args.x, "i").map_err(|e| format!("invalid --x: {}", e))?;
            let mut rows = Vec::new();
            for &n in &ns {
                for &i in &is {
                    if i > n {
                        continue;
                    }
                    let v = power_sum_factored(n, i, w, &chi, params, &ctx)
                        .map_err(|e| e.to_string())?;
                    rows.push((n.to_string(), i.to_string(), render_value(&v, &ctx)));
                }
            }
            let mut parameters = common_parameters(&ctx, &chi, params);
            parameters.insert("w".into(), w.to_string());
            (parameters, rows)
        }
        TableSubject::Classical => {
            let ctx = QContext::exact(BigRational::new(1.into(), 2.into())).unwrap();
            let xs = parse_rational_list(&args.x, "x").map_err(|e| format!("invalid --x: {}", e))?;
            let mut rows = Vec::new();
            for &n in &ns {
                for x in &xs {
                    let v = classical_euler_poly(n, x, &chi, args.r, &ctx)
                        .map_err(|e| e.to_string())?;
                    rows.push((n.to_string(), x.to_string(), render_value(&v, &ctx)));
                }
            }
            let mut parameters = BTreeMap::new();
            parameters.insert("mode".into(), "exact".into());
            parameters.insert("chi".into(), chi.describe());
            parameters.insert("r".into(), args.r.to_string());
            (parameters, rows)
        }
    };

    match args.format {
        TableFormat::Csv => {
            println!("n,x,value");
            for (n, x, value) in &rows {
                println!("{},{},{}", n, x, value);
            }
        }
        TableFormat::Json => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|(n, x, value)| {
                    serde_json::json!({ "n": n, "x": x, "value": value })
                })
                .collect();
            let doc = serde_json::json!({
                "command": "table",
                "parameters": parameters,
                "rows": rows_json,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("JSON rendering"));
        }
    }
    Ok(ExitCode::SUCCESS)
}
