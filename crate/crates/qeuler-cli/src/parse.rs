//! Literal grammars shared by flags and config files.
//!
//! Rationals: `a/b`, integers, decimals, scientific (`1e-20`, `2.5e-3`).
//! q literals additionally choose the mode: a fraction or integer means
//! exact arithmetic, a decimal point, exponent or `@bits` suffix means
//! numeric (`0.25@512` evaluates at 512 bits).
//! Ranges: `lo..hi` inclusive, or comma lists, or both (`0..2,5`).
//! Complex: `re`, `re+imi`, `re-imi`, `imi` (`3+1i`, `5/2`, `-0.5i`).
//! Characters: `principal:d`, `quadratic:p`, or `d:v0,v1,...` with one
//! value per residue, each `-1`/`0`/`1` or a complex root of unity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use qeuler::{BigComplex, BigFloat, DirichletCharacter, Mode, Scalar};

/// Parsing precision for character value literals; `from_table` snaps
/// them to exact roots of unity afterwards.
const CHAR_LITERAL_PREC: u32 = 128;

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if s.contains('/') {
        return s
            .parse::<BigRational>()
            .map_err(|_| format!("invalid fraction '{}'", s));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| format!("invalid exponent in '{}'", s))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(format!("invalid number '{}'", s));
    }
    let digits = format!("{}{}", int_part, frac_part);
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(format!("invalid number '{}'", s));
    }
    let numer: BigInt = digits
        .parse()
        .map_err(|_| format!("invalid number '{}'", s))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    Ok(if scale >= 0 {
        BigRational::from_integer(numer * ten.pow(scale as u32))
    } else {
        BigRational::new(numer, ten.pow(scale.unsigned_abs()))
    })
}

/// A q literal: value, the mode it implies, and an explicit precision
/// if the `@bits` suffix was given.
pub fn parse_q(s: &str) -> Result<(BigRational, Mode, Option<u32>), String> {
    let s = s.trim();
    let (body, precision) = match s.find('@') {
        Some(pos) => {
            let bits: u32 = s[pos + 1..]
                .parse()
                .map_err(|_| format!("invalid precision suffix in '{}'", s))?;
            (&s[..pos], Some(bits))
        }
        None => (s, None),
    };
    let value = parse_rational(body)?;
    let numeric = precision.is_some() || body.contains(['.', 'e', 'E']);
    let mode = if numeric { Mode::Numeric } else { Mode::Exact };
    Ok((value, mode, precision))
}

/// `re`, `re+imi`, `re-imi` or `imi`; rational or decimal components.
pub fn parse_complex(s: &str) -> Result<(BigRational, BigRational), String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if !s.ends_with('i') {
        return Ok((parse_rational(&s)?, BigRational::zero()));
    }
    let body = &s[..s.len() - 1];
    // Split before the last sign that is not leading and not an
    // exponent sign; everything after it is the imaginary part.
    let split = body
        .char_indices()
        .rev()
        .find(|&(idx, c)| {
            (c == '+' || c == '-')
                && idx > 0
                && !matches!(body.as_bytes()[idx - 1], b'e' | b'E')
        })
        .map(|(idx, _)| idx);
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im = match im_str {
        "+" | "" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other)?,
    };
    let re = parse_rational(if re_str.is_empty() { "0" } else { re_str })?;
    Ok((re, im))
}

fn expand_range<T>(item: &str, what: &str) -> Result<Vec<T>, String>
where
    T: std::str::FromStr + PartialOrd + Copy,
    std::ops::RangeInclusive<T>: Iterator<Item = T>,
{
    let parse_one = |txt: &str| -> Result<T, String> {
        txt.trim()
            .parse::<T>()
            .map_err(|_| format!("invalid {} '{}'", what, txt))
    };
    match item.find("..") {
        Some(pos) => {
            let lo = parse_one(&item[..pos])?;
            let hi = parse_one(&item[pos + 2..])?;
            if lo > hi {
                return Err(format!("empty range '{}'", item));
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![parse_one(item)?]),
    }
}

/// Comma list of integers and/or inclusive `lo..hi` ranges.
pub fn parse_int_list<T>(s: &str, what: &str) -> Result<Vec<T>, String>
where
    T: std::str::FromStr + PartialOrd + Copy,
    std::ops::RangeInclusive<T>: Iterator<Item = T>,
{
    let mut out = Vec::new();
    for item in s.split(',') {
        out.extend(expand_range(item, what)?);
    }
    if out.is_empty() {
        return Err(format!("no {} values given", what));
    }
    Ok(out)
}

/// Comma list of rationals; integer items may use range syntax.
pub fn parse_rational_list(s: &str, what: &str) -> Result<Vec<BigRational>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        if item.contains("..") {
            out.extend(
                expand_range::<i64>(item, what)?
                    .into_iter()
                    .map(|v| BigRational::from_integer(BigInt::from(v))),
            );
        } else {
            out.push(parse_rational(item).map_err(|e| format!("{} in {}", e, what))?);
        }
    }
    Ok(out)
}

/// Weight pairs as `w1:w2`, comma-separated: `1:3,3:5`.
pub fn parse_weight_pairs(s: &str) -> Result<Vec<(u32, u32)>, String> {
    s.split(',')
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| format!("weight pair '{}' is not of the form w1:w2", item))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("invalid weight '{}'", t))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

pub fn parse_character(s: &str) -> Result<DirichletCharacter, String> {
    let s = s.trim();
    let (head, tail) = s
        .split_once(':')
        .ok_or_else(|| format!("character literal '{}' has no ':'", s))?;
    let err = |e: qeuler::Error| format!("invalid character '{}': {}", s, e);
    match head {
        "principal" => {
            let d: u32 = tail
                .parse()
                .map_err(|_| format!("invalid modulus '{}'", tail))?;
            DirichletCharacter::principal(d).map_err(err)
        }
        "quadratic" => {
            let p: u32 = tail
                .parse()
                .map_err(|_| format!("invalid modulus '{}'", tail))?;
            DirichletCharacter::quadratic(p).map_err(err)
        }
        _ => {
            let d: u32 = head
                .parse()
                .map_err(|_| format!("invalid modulus '{}'", head))?;
            let table = tail
                .split(',')
                .map(|v| {
                    let (re, im) = parse_complex(v)?;
                    Ok(if im.is_zero() {
                        Scalar::Rational(re)
                    } else {
                        Scalar::Complex(BigComplex::new(
                            BigFloat::from_rational(&re, CHAR_LITERAL_PREC),
                            BigFloat::from_rational(&im, CHAR_LITERAL_PREC),
                        ))
                    })
                })
                .collect::<Result<Vec<_>, String>>()?;
            DirichletCharacter::from_table(d, &table).map_err(err)
        }
    }
}

/// Decimal digit budget that exhausts a binary precision.
pub fn digits_for_bits(bits: u32) -> usize {
    (bits as usize) * 30103 / 100000 + 1
}
