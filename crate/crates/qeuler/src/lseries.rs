//! The multiple twisted q-l-series attached to the polynomial family,
//! and its two-weight symmetry identity.
//!
//!   l(s, x) = [2]_q^r sum over (m_1..m_r) in N^r of
//!             (-1)^|m| (prod chi(m_l)) q^(sum (h-l+1) m_l) / [x+|m|]_q^s
//!
//! The series converges absolutely for h >= r (every exponent weight
//! h-l+1 >= 1) and interpolates the polynomials at nonpositive integer
//! s. Evaluation truncates each index at a per-index limit and reports
//! a rigorous geometric bound on the dropped mass. No analytic
//! continuation is attempted: outside absolute convergence the
//! polynomial side is the definition of record.
//!
//! Supported domain: numeric mode, x > 0. The q-bracket [x+|m|]_q stays
//! positive there, so the complex power is the principal branch of a
//! positive real base and no branch ambiguity arises.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bigfloat::BigFloat;
use crate::character::DirichletCharacter;
use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::euler::{
    alternating_weight_convolution, geometric_tail_bound, signed_weight_vector,
    weighted_cube_sum, EulerParams, SeriesTruncation, TruncatedValue,
};
use crate::identity::{
    mutated_inputs, require_odd, scale_if_requested, IdentityId, IdentityReport, Mutation,
};
use crate::scalar::{Mode, QContext, Scalar};

/// One l-series evaluation request.
#[derive(Debug, Clone)]
pub struct LQuery {
    pub s: BigComplex,
    pub x: BigRational,
    pub chi: DirichletCharacter,
    pub params: EulerParams,
    pub trunc: SeriesTruncation,
}

fn validate_domain(x: &BigRational, params: EulerParams, ctx: &QContext) -> Result<()> {
    if ctx.mode() != Mode::Numeric {
        return Err(Error::ExactModeUnsupported("l-series evaluation".into()));
    }
    EulerParams::new(params.h, params.r)?;
    if params.h < params.r as i64 {
        return Err(Error::DivergentSeries { h: params.h, r: params.r });
    }
    if !x.is_positive() {
        return Err(Error::UnsupportedDomain(format!(
            "l-series argument x = {} is outside the supported half-line x > 0",
            x
        )));
    }
    Ok(())
}

/// sup over the truncated-away region of |[x+S]_q^(-s)|, which equals
/// bracket^(-Re s) for a positive real bracket. The bracket is bounded
/// between (1 -/+ |q|^x)/|1-q| uniformly in S >= 0.
fn summand_sup(ctx: &QContext, x: &BigRational, sigma: &BigFloat) -> BigFloat {
    let prec = ctx.precision();
    let wp = prec + 32;
    let one = BigFloat::from_i64(1, wp);
    let q_abs = ctx.q_pow(1).abs_float(prec).with_prec(wp);
    let one_minus_q_abs = ctx.one().sub(&ctx.q_pow(1)).abs_float(prec).with_prec(wp);
    if sigma.is_zero() {
        return BigFloat::from_i64(1, prec);
    }
    // |q|^x = exp(x ln |q|) for rational x > 0.
    let qx_abs = BigFloat::from_rational(x, wp).mul(&q_abs.ln()).exp();
    let bracket_bound = if sigma.is_negative() {
        one.add(&qx_abs).div(&one_minus_q_abs)
    } else {
        one.sub(&qx_abs).div(&one_minus_q_abs)
    };
    // bracket^(-sigma)
    bracket_bound.ln().mul(&sigma.neg()).exp().with_prec(prec)
}

/// Truncated evaluation of the multiple l-series with a rigorous tail
/// bound. Errors if the bound exceeds the context tolerance.
pub fn l_multiple(query: &LQuery, ctx: &QContext) -> Result<TruncatedValue> {
    validate_domain(&query.x, query.params, ctx)?;
    let m_limit = query.trunc.per_index_limit;
    if m_limit == 0 {
        return Err(Error::InvalidParameter("per_index_limit must be positive".into()));
    }
    let params = query.params;
    let prec = ctx.precision();
    let chi_scalars = query.chi.scalar_table(ctx)?;
    let weights: Vec<Vec<Scalar>> = (1..=params.r as i64)
        .map(|l| signed_weight_vector(&chi_scalars, ctx, params.h - l + 1, m_limit))
        .collect();
    // [x+S]^(-s) for every reachable total S.
    let s_max = (params.r * (m_limit - 1)) as usize;
    let neg_s = query.s.neg();
    let qx = ctx.q_pow_rational(&query.x)?;
    let q1 = ctx.q_pow(1);
    let inv_one_minus_q = ctx.one().div(&ctx.one().sub(&q1));
    let mut table = Vec::with_capacity(s_max + 1);
    let mut q_xs = qx;
    for _ in 0..=s_max {
        let bracket = ctx.one().sub(&q_xs).mul(&inv_one_minus_q);
        let base = bracket.as_complex().expect("numeric scalar").re.clone();
        if base.is_zero() || base.is_negative() {
            return Err(Error::UnsupportedDomain(
                "q-bracket base is not positive".into(),
            ));
        }
        table.push(Scalar::Complex(BigComplex::pow_of_positive_real(&base, &neg_s)));
        q_xs = q_xs.mul(&q1);
    }
    let cube = weighted_cube_sum(&weights, &table, ctx);
    let value = ctx.q_number_int(2).powi(params.r as i64).mul(&cube);
    let sup = summand_sup(ctx, &query.x, &query.s.re);
    let tail_bound = geometric_tail_bound(ctx, params.h, params.r, m_limit, &sup);
    let tol = BigFloat::from_rational(ctx.tolerance(), prec);
    if tail_bound.cmp_value(&tol) == std::cmp::Ordering::Greater {
        return Err(Error::TruncationTooCoarse {
            tail: tail_bound.to_decimal_string(6),
            tolerance: tol.to_decimal_string(6),
        });
    }
    Ok(TruncatedValue { value, tail_bound })
}

/// Smallest power-of-two per-index limit whose tail bound meets
/// `target` for arguments >= x (the bound is monotone in x).
pub fn choose_truncation(
    x: &BigRational,
    s: &BigComplex,
    params: EulerParams,
    ctx: &QContext,
    target: &BigRational,
) -> Result<SeriesTruncation> {
    validate_domain(x, params, ctx)?;
    let sup = summand_sup(ctx, x, &s.re);
    let tgt = BigFloat::from_rational(target, ctx.precision());
    let mut m = 4u32;
    let mut tail = geometric_tail_bound(ctx, params.h, params.r, m, &sup);
    while tail.cmp_value(&tgt) == std::cmp::Ordering::Greater {
        if m >= (1 << 16) {
            return Err(Error::TruncationTooCoarse {
                tail: tail.to_decimal_string(6),
                tolerance: tgt.to_decimal_string(6),
            });
        }
        m *= 2;
        tail = geometric_tail_bound(ctx, params.h, params.r, m, &sup);
    }
    Ok(SeriesTruncation { per_index_limit: m })
}

// ---------------------------------------------------------------------------
// Two-weight symmetry
// ---------------------------------------------------------------------------

/// One orientation of the series symmetry:
///
///   [2]_{q^wb}^r [wb]_q^s sum_{j vec in [0, wa d)^r} (-1)^|j|
///     (prod chi(j_l)) q^(wb sum (h-l+1) j_l)
///     l_{q^wa}(s, wb x + (wb/wa) |j|)
fn series_side(
    s: &BigComplex,
    x: &BigRational,
    wa: u32,
    wb: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    trunc: SeriesTruncation,
) -> Result<(Scalar, BigFloat)> {
    let ctx_a = ctx.power_base(wa);
    let ctx_b = ctx.power_base(wb);
    let len = wa * chi.modulus();
    let weights = alternating_weight_convolution(chi, &ctx_b, params.h, params.r, len)?;
    let wb_rat = BigRational::from_integer(BigInt::from(wb));
    let mut sum = ctx.zero();
    let mut max_tail = BigFloat::zero(ctx.precision());
    for (j, a) in weights.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let arg =
            &wb_rat * x + BigRational::new(BigInt::from(wb as u64 * j as u64), BigInt::from(wa));
        let query = LQuery { s: s.clone(), x: arg, chi: chi.clone(), params, trunc };
        let t = l_multiple(&query, &ctx_a)?;
        if t.tail_bound.cmp_value(&max_tail) == std::cmp::Ordering::Greater {
            max_tail = t.tail_bound;
        }
        sum = sum.add(&a.mul(&t.value));
    }
    let bracket_b = ctx
        .q_number_int(wb as i64)
        .as_complex()
        .expect("numeric scalar")
        .re
        .clone();
    let prefactor = ctx_b
        .q_number_int(2)
        .powi(params.r as i64)
        .mul(&Scalar::Complex(BigComplex::pow_of_positive_real(&bracket_b, s)));
    Ok((prefactor.mul(&sum), max_tail))
}

/// Both sides of the symmetry at one parameter point, mutation applied
/// to the left. Per-index truncation is taken from `per_index_limit`
/// or auto-chosen against `tail_target` (default 1e-20).
#[allow(clippy::too_many_arguments)]
pub(crate) fn series_symmetry_point(
    s: &BigComplex,
    x: &BigRational,
    w1: u32,
    w2: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    per_index_limit: Option<u32>,
    tail_target: Option<&BigRational>,
    mutation: Option<Mutation>,
) -> Result<(Scalar, Scalar)> {
    require_odd(w1)?;
    require_odd(w2)?;
    validate_domain(x, params, ctx)?;
    let trunc = match per_index_limit {
        Some(m) => SeriesTruncation { per_index_limit: m },
        None => {
            // Defaulting to the context tolerance keeps the chosen
            // truncation consistent with the bound enforced on each call.
            let target = tail_target.unwrap_or_else(|| ctx.tolerance());
            // The smallest l argument on a side is wb * x (j = 0); the
            // tail bound is worst there, so it covers every call.
            let mut m = 1u32;
            for (wa, wb) in [(w1, w2), (w2, w1)] {
                let arg = BigRational::from_integer(BigInt::from(wb)) * x;
                let t = choose_truncation(&arg, s, params, &ctx.power_base(wa), target)?;
                m = m.max(t.per_index_limit);
            }
            SeriesTruncation { per_index_limit: m }
        }
    };
    let (chi_l, params_l, _flip) = mutated_inputs(chi, params, mutation)?;
    let (lhs, _) = series_side(s, x, w1, w2, &chi_l, params_l, ctx, trunc)?;
    let lhs = scale_if_requested(lhs, ctx, mutation);
    let (rhs, _) = series_side(s, x, w2, w1, chi, params, ctx, trunc)?;
    Ok((lhs, rhs))
}

/// Renders an s value given as (re, im) rationals, e.g. "5/2", "3+1i".
pub fn render_s(re: &BigRational, im: &BigRational) -> String {
    if im.is_zero() {
        re.to_string()
    } else if im.is_negative() {
        format!("{}{}i", re, im)
    } else {
        format!("{}+{}i", re, im)
    }
}

pub fn complex_from_rationals(re: &BigRational, im: &BigRational, prec: u32) -> BigComplex {
    BigComplex::new(BigFloat::from_rational(re, prec), BigFloat::from_rational(im, prec))
}

/// Checks the series symmetry at one point and reports both sides.
#[allow(clippy::too_many_arguments)]
pub fn check_series_symmetry(
    s_re: &BigRational,
    s_im: &BigRational,
    x: &BigRational,
    w1: u32,
    w2: u32,
    chi: &DirichletCharacter,
    params: EulerParams,
    ctx: &QContext,
    per_index_limit: Option<u32>,
    tail_target: Option<&BigRational>,
    mutation: Option<Mutation>,
) -> Result<IdentityReport> {
    let mut map = crate::identity::base_param_map(ctx, chi, params, mutation, &[
        ("s", render_s(s_re, s_im)),
        ("x", x.to_string()),
        ("w1", w1.to_string()),
        ("w2", w2.to_string()),
    ]);
    if let Some(m) = per_index_limit {
        map.insert("per_index_limit".to_string(), m.to_string());
    }
    let s = complex_from_rationals(s_re, s_im, ctx.precision());
    let (lhs, rhs) = series_symmetry_point(
        &s, x, w1, w2, chi, params, ctx, per_index_limit, tail_target, mutation,
    )?;
    IdentityReport::from_sides(IdentityId::SeriesSymmetry, map, ctx, lhs, rhs)
}
