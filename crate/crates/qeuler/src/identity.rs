//! Machine verification of the finite identities the polynomial family
//! satisfies: the two-weight distribution symmetry (double character
//! sum against shifted polynomials), its power-sum form, the index
//! reflection pairing, and the umbral/addition expansions, plus the
//! l-series symmetry delegated to [`crate::lseries`].
//!
//! In exact mode a passing report is a proved rational identity
//! (residual numerator zero); in numeric mode equality is judged by the
//! context tolerance. Each check can perturb its left side by a single
//! factor, which is how the suite demonstrates the checkers are not
//! vacuous.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::euler::{
    alternating_weight_convolution, power_sum_factored, EulerEvaluator, EulerParams,
};
use crate::lseries;
use crate::scalar::{Mode, QContext, Scalar, DEFAULT_PRECISION};

/// Which identity a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// E_n(x) expanded umbrally in the numbers E_i(0).
    Umbral,
    /// Two-argument addition expansion of E_n(x+y).
    Addition,
    /// Double-sum two-weight symmetry of the polynomial family.
    DistributionSymmetry,
    /// The same symmetry expressed through alternating power sums.
    PowerSumSymmetry,
    /// Binomial pairing exchanging (m, x) with (n, -x).
    Reflection,
    /// Two-weight symmetry of the multiple l-series (numeric).
    SeriesSymmetry,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::Umbral,
        IdentityId::Addition,
        IdentityId::DistributionSymmetry,
        IdentityId::PowerSumSymmetry,
        IdentityId::Reflection,
        IdentityId::SeriesSymmetry,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Umbral => "umbral",
            IdentityId::Addition => "addition",
            IdentityId::DistributionSymmetry => "distribution-symmetry",
            IdentityId::PowerSumSymmetry => "power-sum-symmetry",
            IdentityId::Reflection => "reflection",
            IdentityId::SeriesSymmetry => "series-symmetry",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        IdentityId::ALL.iter().copied().find(|id| id.as_str() == s)
    }
}

/// Single-factor perturbation applied to the left side of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Multiply the finished left side by (1 + q).
    ScaleLhs,
    /// Shift the exponent weight h by one on the left side only.
    WeightShift,
    /// Negate the character at residue 2 on the left side only
    /// (requires modulus >= 3; for modulus 1 the sign change cancels).
    CharacterFlip,
}

impl Mutation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mutation::ScaleLhs => "scale-lhs",
            Mutation::WeightShift => "weight-shift",
            Mutation::CharacterFlip => "character-flip",
        }
    }

    pub fn parse(s: &str) -> Option<Mutation> {
        match s {
            "scale-lhs" | "lhs" => Some(Mutation::ScaleLhs),
            "weight-shift" | "weight" => Some(Mutation::WeightShift),
            "character-flip" | "character" => Some(Mutation::CharacterFlip),
            _ => None,
        }
    }
}

/// Outcome of one identity check at one parameter point.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<Scalar>,
    pub rhs: Option<Scalar>,
    pub residual: Option<Scalar>,
    pub passed: bool,
    pub error: Option<String>,
}

impl IdentityReport {
    pub(crate) fn from_sides(
        identity_id: IdentityId,
        params: BTreeMap<String, String>,
        ctx: &QContext,
        lhs: Scalar,
        rhs: Scalar,
    ) -> Result<Self> {
        let residual = lhs.sub(&rhs);
        let passed = ctx.eq_scalars(&lhs, &rhs)?;
        Ok(IdentityReport {
            identity_id,
            params,
            lhs: Some(lhs),
            rhs: Some(rhs),
            residual: Some(residual),
            passed,
            error: None,
        })
    }

    pub(crate) fn failed(
        identity_id: IdentityId,
        params: BTreeMap<String, String>,
        err: &Error,
    ) -> Self {
        IdentityReport {
            identity_id,
            params,
            lhs: None,
            rhs: None,
            residual: None,
            passed: false,
            error: Some(err.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Shared side builders
// ---------------------------------------------------------------------------

/// Evaluators keyed by (base power, h, left-side character flag) so a
/// sweep over grid points reuses polynomial and factor caches.
pub(crate) type EvalPool = HashMap<(u32, i64, bool), EulerEvaluator>;

fn pooled_eval<'p>(
    pool: &'p mut EvalPool,
    ctx: &QContext,
    chi: &DirichletCharacter,
    params: EulerParams,
    wa: u32,
    flipped: bool,
) -> Result<&'p mut EulerEvaluator> {
    match pool.entry((wa, params.h, flipped)) {
        Entry::Occupied(o) => Ok(o.into_mut()),
        Entry::Vacant(v) => Ok(v.insert(EulerEvaluator::new(&ctx.power_base(wa), chi, params)?)),
    }
}

pub(crate) fn require_odd(w: u32) -> Result<()> {
    if w == 0 || w.is_multiple_of(2) {
        return Err(Error::OddnessViolation(w));
    }
    Ok(())
}

/// Effective (character, params, flipped-flag) for the left side under a
/// mutation; `ScaleLhs` is applied after the side is built instead.
pub(crate) fn mutated_inputs(
    chi: &DirichletCharacter,
    params: EulerParams,
    mutation: Option<Mutation>,
) -> Result<(DirichletCharacter, EulerParams, bool)> {
    match mutation {
        None | Some(Mutation::ScaleLhs) => Ok((chi.clone(), params, false)),
        Some(Mutation::WeightShift) => {
            Ok((chi.clone(), EulerParams { h: params.h + 1, r: params.r }, false))
        }
        Some(Mutation::CharacterFlip) => {
            if chi.modulus() < 3 {
                return Err(Error::InvalidParameter(
                    "character flip requires modulus at least 3".into(),
                ));
            }
            Ok((chi.flip_value_unchecked(2), params, true))
        }
    }
}

pub(crate) fn scale_if_requested(lhs: Scalar, ctx: &QContext, mutation: Option<Mutation>) -> Scalar {
    if matches!(mutation, Some(Mutation::ScaleLhs)) {
        lhs.mul(&ctx.q_number_int(2))
    } else {
        lhs
    }
}

/// sum_{i=0}^{n} C(n,i) q^(xi) E_i(y) [x]^(n-i), the expansion side of
/// the umbral (y = 0) and addition identities.
fn expansion_side(
    n: u32,
    x: &BigRational,
    y: &BigRational,
    ev: &mut EulerEvaluator,
    ctx: &QContext,
) -> Result<Scalar> {
    let qx = ctx.q_pow_rational(x)?;
    let bracket_x = ctx.q_number(x)?;
    let mut qx_pow = ctx.one();
    let mut sum = ctx.zero();
    for i in 0..=n {
        let coef = ctx.embed_int(&binomial(BigInt::from(n), BigInt::from(i)));
        let term = coef
            .mul(&qx_pow)
            .mul(&ev.eval(i, y)?)
            .mul(&bracket_x.powi((n - i) as i64));
        sum = sum.add(&term);
        qx_pow = qx_pow.mul(&qx);
    }
    Ok(sum)
}

/// One orientation of the distribution symmetry: sum over the first
/// weight's residue cube, polynomials at the second weight's base.
///
///   [2]_{q^wb}^r [wa]_q^n sum_{j vec in [0, wa d)^r} (-1)^|j|
///     (prod chi(j_l)) q^(wb sum (h-l+1) j_l)
///     E_{n, q^wa}(wb x + (wb/wa) |j|)
fn distribution_side(
    n: u32,
    x: &BigRational,
    wa: u32,
    wb: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    flipped: bool,
) -> Result<Scalar> {
    let ctx_b = ctx.power_base(wb);
    let len = wa * chi.modulus();
    let weights = alternating_weight_convolution(chi, &ctx_b, params.h, params.r, len)?;
    let prefactor = ctx_b
        .q_number_int(2)
        .powi(params.r as i64)
        .mul(&ctx.q_number_int(wa as i64).powi(n as i64));
    let ev = pooled_eval(pool, ctx, chi, params, wa, flipped)?;
    let wb_rat = BigRational::from_integer(BigInt::from(wb));
    let mut sum = ctx.zero();
    for (j, a) in weights.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let arg = &wb_rat * x + BigRational::new(BigInt::from(wb as u64 * j as u64), BigInt::from(wa));
        sum = sum.add(&a.mul(&ev.eval(n, &arg)?));
    }
    Ok(prefactor.mul(&sum))
}

/// One orientation of the power-sum symmetry:
///
///   [2]_{q^wb}^r sum_i C(n,i) [wa]_q^(n-i) [wb]_q^i
///     E_{n-i, q^wa}(wb x) S_{n,i,q^wb}(wa d)
fn power_sum_side(
    n: u32,
    x: &BigRational,
    wa: u32,
    wb: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    flipped: bool,
) -> Result<Scalar> {
    let ctx_b = ctx.power_base(wb);
    let bracket_a = ctx.q_number_int(wa as i64);
    let bracket_b = ctx.q_number_int(wb as i64);
    let prefactor = ctx_b.q_number_int(2).powi(params.r as i64);
    let w_len = wa * chi.modulus();
    let wbx = BigRational::from_integer(BigInt::from(wb)) * x;
    let ev = pooled_eval(pool, ctx, chi, params, wa, flipped)?;
    let mut sum = ctx.zero();
    for i in 0..=n {
        let coef = ctx.embed_int(&binomial(BigInt::from(n), BigInt::from(i)));
        let term = coef
            .mul(&bracket_a.powi((n - i) as i64))
            .mul(&bracket_b.powi(i as i64))
            .mul(&ev.eval(n - i, &wbx)?)
            .mul(&power_sum_factored(n, i, w_len, chi, params, &ctx_b)?);
        sum = sum.add(&term);
    }
    Ok(prefactor.mul(&sum))
}

/// sum_{k=0}^{m} C(m,k) q^(kx) E_{n+k}(y) [x]^(m-k): both sides of the
/// reflection pairing are this form at exchanged arguments.
fn reflection_form(
    m: u32,
    n: u32,
    x: &BigRational,
    y: &BigRational,
    ev: &mut EulerEvaluator,
    ctx: &QContext,
) -> Result<Scalar> {
    let qx = ctx.q_pow_rational(x)?;
    let bracket_x = ctx.q_number(x)?;
    let mut qx_pow = ctx.one();
    let mut sum = ctx.zero();
    for k in 0..=m {
        let coef = ctx.embed_int(&binomial(BigInt::from(m), BigInt::from(k)));
        let term = coef
            .mul(&qx_pow)
            .mul(&ev.eval(n + k, y)?)
            .mul(&bracket_x.powi((m - k) as i64));
        sum = sum.add(&term);
        qx_pow = qx_pow.mul(&qx);
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// Point computations (pool-sharing cores of the public checks)
// ---------------------------------------------------------------------------

fn umbral_sides(
    n: u32,
    x: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    mutation: Option<Mutation>,
) -> Result<(Scalar, Scalar)> {
    let (chi_l, params_l, flip) = mutated_inputs(chi, params, mutation)?;
    let lhs = pooled_eval(pool, ctx, &chi_l, params_l, 1, flip)?.eval(n, x)?;
    let lhs = scale_if_requested(lhs, ctx, mutation);
    let zero = BigRational::from_integer(BigInt::from(0));
    let ev = pooled_eval(pool, ctx, chi, params, 1, false)?;
    let rhs = expansion_side(n, x, &zero, ev, ctx)?;
    Ok((lhs, rhs))
}

fn addition_sides(
    n: u32,
    x: &BigRational,
    y: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    mutation: Option<Mutation>,
) -> Result<(Scalar, Scalar)> {
    let (chi_l, params_l, flip) = mutated_inputs(chi, params, mutation)?;
    let lhs = pooled_eval(pool, ctx, &chi_l, params_l, 1, flip)?.eval(n, &(x + y))?;
    let lhs = scale_if_requested(lhs, ctx, mutation);
    let ev = pooled_eval(pool, ctx, chi, params, 1, false)?;
    let rhs = expansion_side(n, x, y, ev, ctx)?;
    Ok((lhs, rhs))
}

fn distribution_sides(
    n: u32,
    x: &BigRational,
    w1: u32,
    w2: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    mutation: Option<Mutation>,
) -> Result<(Scalar, Scalar)> {
    require_odd(w1)?;
    require_odd(w2)?;
    let (chi_l, params_l, flip) = mutated_inputs(chi, params, mutation)?;
    let lhs = distribution_side(n, x, w1, w2, &chi_l, params_l, ctx, pool, flip)?;
    let lhs = scale_if_requested(lhs, ctx, mutation);
    let rhs = distribution_side(n, x, w2, w1, chi, params, ctx, pool, false)?;
    Ok((lhs, rhs))
}

fn power_sum_sides(
    n: u32,
    x: &BigRational,
    w1: u32,
    w2: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    mutation: Option<Mutation>,
) -> Result<(Scalar, Scalar)> {
    require_odd(w1)?;
    require_odd(w2)?;
    let (chi_l, params_l, flip) = mutated_inputs(chi, params, mutation)?;
    let lhs = power_sum_side(n, x, w1, w2, &chi_l, params_l, ctx, pool, flip)?;
    let lhs = scale_if_requested(lhs, ctx, mutation);
    let rhs = power_sum_side(n, x, w2, w1, chi, params, ctx, pool, false)?;
    Ok((lhs, rhs))
}

fn reflection_sides(
    m: u32,
    n: u32,
    x: &BigRational,
    y: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    pool: &mut EvalPool,
    mutation: Option<Mutation>,
) -> Result<(Scalar, Scalar)> {
    let (chi_l, params_l, flip) = mutated_inputs(chi, params, mutation)?;
    let lhs = {
        let ev = pooled_eval(pool, ctx, &chi_l, params_l, 1, flip)?;
        reflection_form(m, n, x, y, ev, ctx)?
    };
    let lhs = scale_if_requested(lhs, ctx, mutation);
    let ev = pooled_eval(pool, ctx, chi, params, 1, false)?;
    let rhs = reflection_form(n, m, &(-x), &(x + y), ev, ctx)?;
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Public checks
// ---------------------------------------------------------------------------

pub(crate) fn base_param_map(
    ctx: &QContext,
    chi: &DirichletCharacter,
    params: EulerParams,
    mutation: Option<Mutation>,
    extra: &[(&str, String)],
) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    map.insert("q".to_string(), ctx.root().to_string());
    map.insert(
        "mode".to_string(),
        match ctx.mode() {
            Mode::Exact => "exact".to_string(),
            Mode::Numeric => "numeric".to_string(),
        },
    );
    map.insert("chi".to_string(), chi.describe());
    map.insert("h".to_string(), params.h.to_string());
    map.insert("r".to_string(), params.r.to_string());
    if let Some(m) = mutation {
        map.insert("mutation".to_string(), m.as_str().to_string());
    }
    for (k, v) in extra {
        map.insert((*k).to_string(), v.clone());
    }
    map
}

pub fn check_umbral(
    n: u32,
    x: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    mutation: Option<Mutation>,
) -> Result<IdentityReport> {
    let map = base_param_map(ctx, chi, params, mutation, &[
        ("n", n.to_string()),
        ("x", x.to_string()),
    ]);
    let mut pool = EvalPool::new();
    let (lhs, rhs) = umbral_sides(n, x, chi, params, ctx, &mut pool, mutation)?;
    IdentityReport::from_sides(IdentityId::Umbral, map, ctx, lhs, rhs)
}

pub fn check_addition(
    n: u32,
    x: &BigRational,
    y: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    mutation: Option<Mutation>,
) -> Result<IdentityReport> {
    let map = base_param_map(ctx, chi, params, mutation, &[
        ("n", n.to_string()),
        ("x", x.to_string()),
        ("y", y.to_string()),
    ]);
    let mut pool = EvalPool::new();
    let (lhs, rhs) = addition_sides(n, x, y, chi, params, ctx, &mut pool, mutation)?;
    IdentityReport::from_sides(IdentityId::Addition, map, ctx, lhs, rhs)
}

pub fn check_distribution_symmetry(
    n: u32,
    x: &BigRational,
    w1: u32,
    w2: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    mutation: Option<Mutation>,
) -> Result<IdentityReport> {
    let map = base_param_map(ctx, chi, params, mutation, &[
        ("n", n.to_string()),
        ("x", x.to_string()),
        ("w1", w1.to_string()),
        ("w2", w2.to_string()),
    ]);
    let mut pool = EvalPool::new();
    let (lhs, rhs) = distribution_sides(n, x, w1, w2, chi, params, ctx, &mut pool, mutation)?;
    IdentityReport::from_sides(IdentityId::DistributionSymmetry, map, ctx, lhs, rhs)
}

pub fn check_power_sum_symmetry(
    n: u32,
    x: &BigRational,
    w1: u32,
    w2: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    mutation: Option<Mutation>,
) -> Result<IdentityReport> {
    let map = base_param_map(ctx, chi, params, mutation, &[
        ("n", n.to_string()),
        ("x", x.to_string()),
        ("w1", w1.to_string()),
        ("w2", w2.to_string()),
    ]);
    let mut pool = EvalPool::new();
    let (lhs, rhs) = power_sum_sides(n, x, w1, w2, chi, params, ctx, &mut pool, mutation)?;
    IdentityReport::from_sides(IdentityId::PowerSumSymmetry, map, ctx, lhs, rhs)
}

pub fn check_reflection(
    m: u32,
    n: u32,
    x: &BigRational,
    y: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    mutation: Option<Mutation>,
) -> Result<IdentityReport> {
    let map = base_param_map(ctx, chi, params, mutation, &[
        ("m", m.to_string()),
        ("n", n.to_string()),
        ("x", x.to_string()),
        ("y", y.to_string()),
    ]);
    let mut pool = EvalPool::new();
    let (lhs, rhs) = reflection_sides(m, n, x, y, chi, params, ctx, &mut pool, mutation)?;
    IdentityReport::from_sides(IdentityId::Reflection, map, ctx, lhs, rhs)
}

// ---------------------------------------------------------------------------
// Grid runner
// ---------------------------------------------------------------------------

/// Cartesian product of parameter ranges to sweep. Identities only read
/// the ranges they use (e.g. `ms` only matters for the reflection
/// pairing, `ss`/`w_pairs` for the series symmetry).
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub identities: Vec<IdentityId>,
    pub mode: Mode,
    pub precision: u32,
    /// Numeric-mode comparison tolerance; `None` takes the default.
    pub tolerance: Option<BigRational>,
    pub qs: Vec<BigRational>,
    pub characters: Vec<DirichletCharacter>,
    pub hs: Vec<i64>,
    pub rs: Vec<u32>,
    pub ns: Vec<u32>,
    pub ms: Vec<u32>,
    pub xs: Vec<BigRational>,
    pub ys: Vec<BigRational>,
    pub w_pairs: Vec<(u32, u32)>,
    /// s values for the series symmetry as (re, im) pairs.
    pub ss: Vec<(BigRational, BigRational)>,
    /// Fixed per-index series truncation; `None` selects automatically
    /// against `tail_target`.
    pub per_index_limit: Option<u32>,
    /// Target for the series truncation tail when auto-selecting.
    pub tail_target: Option<BigRational>,
    pub mutation: Option<Mutation>,
}

impl GridSpec {
    pub fn empty(mode: Mode) -> Self {
        GridSpec {
            identities: Vec::new(),
            mode,
            precision: DEFAULT_PRECISION,
            tolerance: None,
            qs: Vec::new(),
            characters: Vec::new(),
            hs: Vec::new(),
            rs: Vec::new(),
            ns: Vec::new(),
            ms: Vec::new(),
            xs: Vec::new(),
            ys: Vec::new(),
            w_pairs: Vec::new(),
            ss: Vec::new(),
            per_index_limit: None,
            tail_target: None,
            mutation: None,
        }
    }

    fn context_for(&self, q: &BigRational) -> Result<QContext> {
        match self.mode {
            Mode::Exact => QContext::exact(q.clone()),
            Mode::Numeric => {
                let tol = self
                    .tolerance
                    .clone()
                    .unwrap_or_else(crate::scalar::default_tolerance);
                QContext::numeric(q.clone(), self.precision, tol)
            }
        }
    }
}

/// Runs every applicable check over the grid's cartesian product.
/// Per-point errors become failed reports instead of aborting the
/// sweep; the output is sorted by (identity, parameter record) so
/// concurrent execution stays deterministic.
pub fn run_grid(spec: &GridSpec) -> Vec<IdentityReport> {
    let mut cells = Vec::new();
    for q in &spec.qs {
        for chi in &spec.characters {
            for &h in &spec.hs {
                for &r in &spec.rs {
                    cells.push((q.clone(), chi.clone(), EulerParams { h, r }));
                }
            }
        }
    }
    let mut reports: Vec<IdentityReport> = cells
        .par_iter()
        .flat_map_iter(|(q, chi, params)| run_cell(spec, q, chi, *params))
        .collect();
    reports.sort_by(|a, b| {
        (a.identity_id, &a.params).cmp(&(b.identity_id, &b.params))
    });
    reports
}

fn run_cell(
    spec: &GridSpec,
    q: &BigRational,
    chi: &DirichletCharacter,
    params: EulerParams,
) -> Vec<IdentityReport> {
    let mutation = spec.mutation;
    let mut out = Vec::new();
    let ctx = match spec.context_for(q) {
        Ok(ctx) => ctx,
        Err(e) => {
            for &id in &spec.identities {
                let mut map = BTreeMap::new();
                map.insert("q".to_string(), q.to_string());
                out.push(IdentityReport::failed(id, map, &e));
            }
            return out;
        }
    };
    let mut pool = EvalPool::new();
    for &id in &spec.identities {
        match id {
            IdentityId::Umbral => {
                for n in &spec.ns {
                    for x in &spec.xs {
                        let map = base_param_map(&ctx, chi, params, mutation, &[
                            ("n", n.to_string()),
                            ("x", x.to_string()),
                        ]);
                        let res = umbral_sides(*n, x, chi, params, &ctx, &mut pool, mutation)
                            .and_then(|(l, r)| {
                                IdentityReport::from_sides(id, map.clone(), &ctx, l, r)
                            });
                        out.push(res.unwrap_or_else(|e| IdentityReport::failed(id, map, &e)));
                    }
                }
            }
            IdentityId::Addition => {
                for n in &spec.ns {
                    for x in &spec.xs {
                        for y in &spec.ys {
                            let map = base_param_map(&ctx, chi, params, mutation, &[
                                ("n", n.to_string()),
                                ("x", x.to_string()),
                                ("y", y.to_string()),
                            ]);
                            let res = addition_sides(
                                *n, x, y, chi, params, &ctx, &mut pool, mutation,
                            )
                            .and_then(|(l, r)| {
                                IdentityReport::from_sides(id, map.clone(), &ctx, l, r)
                            });
                            out.push(res.unwrap_or_else(|e| IdentityReport::failed(id, map, &e)));
                        }
                    }
                }
            }
            IdentityId::DistributionSymmetry | IdentityId::PowerSumSymmetry => {
                for &(w1, w2) in &spec.w_pairs {
                    for n in &spec.ns {
                        for x in &spec.xs {
                            let map = base_param_map(&ctx, chi, params, mutation, &[
                                ("n", n.to_string()),
                                ("x", x.to_string()),
                                ("w1", w1.to_string()),
                                ("w2", w2.to_string()),
                            ]);
                            let res = if id == IdentityId::DistributionSymmetry {
                                distribution_sides(
                                    *n, x, w1, w2, chi, params, &ctx, &mut pool, mutation,
                                )
                            } else {
                                power_sum_sides(
                                    *n, x, w1, w2, chi, params, &ctx, &mut pool, mutation,
                                )
                            }
                            .and_then(|(l, r)| {
                                IdentityReport::from_sides(id, map.clone(), &ctx, l, r)
                            });
                            out.push(res.unwrap_or_else(|e| IdentityReport::failed(id, map, &e)));
                        }
                    }
                }
            }
            IdentityId::Reflection => {
                for m in &spec.ms {
                    for n in &spec.ns {
                        for x in &spec.xs {
                            for y in &spec.ys {
                                let map = base_param_map(&ctx, chi, params, mutation, &[
                                    ("m", m.to_string()),
                                    ("n", n.to_string()),
                                    ("x", x.to_string()),
                                    ("y", y.to_string()),
                                ]);
                                let res = reflection_sides(
                                    *m, *n, x, y, chi, params, &ctx, &mut pool, mutation,
                                )
                                .and_then(|(l, r)| {
                                    IdentityReport::from_sides(id, map.clone(), &ctx, l, r)
                                });
                                out.push(
                                    res.unwrap_or_else(|e| IdentityReport::failed(id, map, &e)),
                                );
                            }
                        }
                    }
                }
            }
            IdentityId::SeriesSymmetry => {
                for &(w1, w2) in &spec.w_pairs {
                    for (s_re, s_im) in &spec.ss {
                        for x in &spec.xs {
                            let s = lseries::complex_from_rationals(s_re, s_im, ctx.precision());
                            let map = base_param_map(&ctx, chi, params, mutation, &[
                                ("s", lseries::render_s(s_re, s_im)),
                                ("x", x.to_string()),
                                ("w1", w1.to_string()),
                                ("w2", w2.to_string()),
                            ]);
                            let res = lseries::series_symmetry_point(
                                &s,
                                x,
                                w1,
                                w2,
                                chi,
                                params,
                                &ctx,
                                spec.per_index_limit,
                                spec.tail_target.as_ref(),
                                mutation,
                            )
                            .and_then(|(l, r)| {
                                IdentityReport::from_sides(id, map.clone(), &ctx, l, r)
                            });
                            out.push(res.unwrap_or_else(|e| IdentityReport::failed(id, map, &e)));
                        }
                    }
                }
            }
        }
    }
    out
}
