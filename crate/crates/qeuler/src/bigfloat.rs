//! Arbitrary-precision binary floating point on top of `BigInt`.
//!
//! A value is `mantissa * 2^exponent` with the mantissa held to a fixed
//! number of significand bits. Arithmetic is faithfully rounded (error
//! below one ulp); every kernel in this crate runs with generous guard
//! bits on top of the context precision, so faithful rounding is more
//! than enough for the advertised tolerances.
//!
//! Besides field arithmetic the module provides the transcendentals the
//! kernels need: `sqrt`, `exp`, `ln`, `sin_cos`, and `pi`. `exp`/`ln` use
//! argument reduction against a cached ln 2; `sin_cos` reduces against a
//! cached pi computed by Machin's formula.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Guard bits used by the transcendental routines.
const GUARD: u32 = 64;

/// Arbitrary-precision binary float: `mantissa * 2^exponent`.
///
/// Invariant: either `mantissa == 0` (and `exponent == 0`), or
/// `2^(prec-1) <= |mantissa| < 2^prec`.
#[derive(Debug, Clone)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), exponent: 0, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(v), prec)
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        normalize(v, 0, prec)
    }

    /// Round `num/den` to `prec` bits.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.numer().is_zero() {
            return Self::zero(prec);
        }
        let nbits = r.numer().bits() as i64;
        let dbits = r.denom().bits() as i64;
        // Scale the numerator so the quotient carries prec + a few guard bits.
        let shift = (dbits - nbits + prec as i64 + 8).max(0) as u64;
        let scaled = r.numer() << shift;
        let (q, rem) = scaled.div_rem(r.denom());
        // Sticky bit so the final rounding sees a remainder.
        if !rem.is_zero() {
            let bump = if q.sign() == Sign::Minus { -1 } else { 1 };
            normalize((q << 1) + bump, -(shift as i64) - 1, prec)
        } else {
            normalize(q, -(shift as i64), prec)
        }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        let r = BigRational::from_float(v).expect("finite float required");
        Self::from_rational(&r, prec)
    }

    /// Exact power of two `2^k`.
    pub fn pow2(k: i64, prec: u32) -> Self {
        BigFloat { mantissa: BigInt::from(1u8) << (prec - 1) as usize, exponent: k - (prec as i64 - 1), prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    /// Position of the most significant bit: value is in
    /// `[2^(msb-1), 2^msb)`. Zero input returns i64::MIN.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exponent + self.mantissa.bits() as i64
        }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        normalize(self.mantissa.clone(), self.exponent, prec)
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -&self.mantissa, exponent: self.exponent, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), exponent: self.exponent, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return other.with_prec(prec);
        }
        if other.is_zero() {
            return self.with_prec(prec);
        }
        // Align to the smaller exponent, capping the shift so a negligible
        // operand only contributes a sticky bit.
        let (hi, lo) = if self.exponent >= other.exponent { (self, other) } else { (other, self) };
        let gap = hi.exponent - lo.exponent;
        let cap = prec as i64 + 8;
        if gap > cap + lo.mantissa.bits() as i64 {
            // |lo| is far below 1/2 ulp of hi: fold it into a sticky bit.
            let m = (&hi.mantissa << (cap as usize))
                + BigInt::from(if lo.is_negative() { -1 } else { 1 });
            return normalize(m, hi.exponent - cap, prec);
        }
        let shift = gap.min(cap);
        let rest = (gap - shift) as usize;
        let m = (&hi.mantissa << (shift as usize)) + (&lo.mantissa >> rest);
        normalize(m, hi.exponent - shift, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        normalize(&self.mantissa * &other.mantissa, self.exponent + other.exponent, prec)
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        assert!(!other.is_zero(), "bigfloat division by zero");
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = (other.mantissa.bits() as i64 - self.mantissa.bits() as i64 + prec as i64 + 8)
            .max(0) as u64;
        let scaled = &self.mantissa << shift as usize;
        let (mut q, rem) = scaled.div_rem(&other.mantissa);
        let mut e = self.exponent - other.exponent - shift as i64;
        if !rem.is_zero() {
            let bump = if q.sign() == Sign::Minus { -1 } else { 1 };
            q = (q << 1) + bump;
            e -= 1;
        }
        normalize(q, e, prec)
    }

    pub fn div_u64(&self, n: u64) -> Self {
        assert!(n != 0);
        if self.is_zero() {
            return self.clone();
        }
        let shift = self.prec as i64 + 8;
        let scaled = &self.mantissa << shift as usize;
        let (mut q, rem) = scaled.div_rem(&BigInt::from(n));
        let mut e = self.exponent - shift;
        if !rem.is_zero() {
            let bump = if q.sign() == Sign::Minus { -1 } else { 1 };
            q = (q << 1) + bump;
            e -= 1;
        }
        normalize(q, e, self.prec)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        normalize(&self.mantissa * n, self.exponent, self.prec)
    }

    /// Exact scaling by `2^k`.
    pub fn scale2(&self, k: i64) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            BigFloat { mantissa: self.mantissa.clone(), exponent: self.exponent + k, prec: self.prec }
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.mantissa.sign(), other.mantissa.sign()) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::NoSign) | (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes via the msb first.
        match self.msb().cmp(&other.msb()) {
            Ordering::Equal => {
                // Align and compare mantissas exactly.
                let d = self.exponent - other.exponent;
                if d >= 0 {
                    (&self.mantissa << d as usize).cmp(&other.mantissa)
                } else {
                    self.mantissa.cmp(&(&other.mantissa << (-d) as usize))
                }
            }
            o if self.is_negative() => o.reverse(),
            o => o,
        }
    }

    /// Floor square root, faithful to `prec` bits. Panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "bigfloat sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        let want = 2 * (prec as i64 + 4);
        let have = self.mantissa.bits() as i64;
        let mut shift = (want - have).max(0);
        if (self.exponent - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mantissa << shift as usize;
        let root = scaled.sqrt();
        normalize(root, (self.exponent - shift) / 2, prec)
    }

    /// exp(x). Argument reduction against ln 2, then Taylor.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let wp = prec + GUARD;
        if self.is_zero() {
            return Self::from_i64(1, prec);
        }
        let est = self.to_f64();
        assert!(est.abs() < 1e15, "exp argument out of supported range");
        let k = (est / std::f64::consts::LN_2).round() as i64;
        let x = self.with_prec(wp);
        let r = x.sub(&ln2(wp).mul_i64_checked(k));
        // Taylor sum of exp(r), |r| <= ln2/2 + eps.
        let mut sum = Self::from_i64(1, wp);
        let mut term = Self::from_i64(1, wp);
        let mut i = 1u64;
        loop {
            term = term.mul(&r).div_u64(i);
            if term.is_zero() || term.msb() < sum.msb() - (wp as i64 + 4) {
                break;
            }
            sum = sum.add(&term);
            i += 1;
        }
        sum.scale2(k).with_prec(prec)
    }

    /// Natural logarithm. Panics unless the value is strictly positive.
    pub fn ln(&self) -> Self {
        let prec = self.prec;
        let wp = prec + GUARD;
        assert!(!self.is_zero() && !self.is_negative(), "bigfloat ln of non-positive value");
        // x = m * 2^e with m in [1, 2); move m to [2/3, 4/3] to shrink t.
        let bits = self.mantissa.bits() as i64;
        let mut e = self.exponent + bits - 1;
        let mut m = BigFloat { mantissa: self.mantissa.clone(), exponent: -(bits - 1), prec: wp };
        let four_thirds = Self::from_rational(&BigRational::new(4.into(), 3.into()), wp);
        if m.cmp_value(&four_thirds) == Ordering::Greater {
            m = m.scale2(-1);
            e += 1;
        }
        // atanh series: ln m = 2 * (t + t^3/3 + t^5/5 + ...), t = (m-1)/(m+1).
        let one = Self::from_i64(1, wp);
        let t = m.sub(&one).div(&m.add(&one));
        let t2 = t.mul(&t);
        let mut u = t.clone();
        let mut sum = Self::zero(wp);
        let mut i = 0u64;
        loop {
            if u.is_zero() {
                break;
            }
            sum = sum.add(&u.div_u64(2 * i + 1));
            // Once u is below the working tail the remaining terms, damped
            // by a further t^2 <= 1/25 each, cannot move the sum.
            if u.msb() < sum.msb().max(0) - (wp as i64 + 4) {
                break;
            }
            u = u.mul(&t2);
            i += 1;
        }
        let ln_m = sum.scale2(1);
        ln_m.add(&ln2(wp).mul_i64_checked(e)).with_prec(prec)
    }

    /// Simultaneous sine and cosine with full 2*pi reduction.
    ///
    /// The argument magnitude must stay below ~2^40 so the float estimate
    /// used for the reduction is reliable; kernel callers stay far below.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        let wp = prec + GUARD;
        let est = self.to_f64();
        assert!(est.abs() < 1e12, "sin_cos argument out of supported range");
        let pi_wp = pi(wp);
        let half_pi = pi_wp.scale2(-1);
        // theta = x - 2*pi*n, then fold quadrants with k = round(theta / (pi/2)).
        let n = (est / (2.0 * std::f64::consts::PI)).round() as i64;
        let theta = self.with_prec(wp).sub(&pi_wp.scale2(1).mul_i64_checked(n));
        let k = (theta.to_f64() / (std::f64::consts::PI / 2.0)).round() as i64;
        let rho = theta.sub(&half_pi.mul_i64_checked(k));
        let (s, c) = taylor_sin_cos(&rho, wp);
        let out = match k.rem_euclid(4) {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        };
        (out.0.with_prec(prec), out.1.with_prec(prec))
    }

    /// (sin, cos) of `2*pi*t` for exact rational `t`; the mod-1 reduction
    /// happens in rational arithmetic so huge `t` costs no precision.
    pub fn sin_cos_2pi_frac(t: &BigRational, prec: u32) -> (Self, Self) {
        let wp = prec + GUARD;
        let frac = t - t.floor();
        // Center on [-1/2, 1/2] so the angle never exceeds pi.
        let half = BigRational::new(1.into(), 2.into());
        let centered = if frac > half { frac - BigRational::from_integer(1.into()) } else { frac };
        let angle = BigFloat::from_rational(&centered, wp).mul(&pi(wp)).scale2(1);
        let (s, c) = angle.sin_cos();
        (s.with_prec(prec), c.with_prec(prec))
    }

    fn mul_i64_checked(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero(self.prec);
        }
        self.mul_i64(n)
    }

    /// Lossy conversion for estimates and display decisions.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let (top, e) = if bits > 53 {
            let shift = (bits - 53) as usize;
            ((&self.mantissa >> shift).to_i64().unwrap(), self.exponent + shift as i64)
        } else {
            (self.mantissa.to_i64().unwrap(), self.exponent)
        };
        if e > 2000 {
            return if top > 0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2000 {
            return 0.0;
        }
        (top as f64) * (e as f64).exp2()
    }

    /// Exact rational equal to this float.
    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::from(1u8) << (-self.exponent) as usize)
        }
    }

    /// Scientific-notation rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let neg = self.is_negative();
        let mag = self.mantissa.abs();
        // Estimate the decimal exponent, then compute digits+2 and round once.
        let e10 = ((self.msb() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let t = digits as i64 + 1 - e10;
        let mut scaled: BigInt = mag;
        // scaled = |m| * 10^t * 2^exponent, floor-rounded.
        if t >= 0 {
            scaled *= BigInt::from(10u8).pow(t as u32);
        }
        if self.exponent >= 0 {
            scaled <<= self.exponent as usize;
        } else {
            scaled >>= (-self.exponent) as usize;
        }
        if t < 0 {
            scaled /= BigInt::from(10u8).pow((-t) as u32);
        }
        let mut s = scaled.to_string();
        // scaled = |v| * 10^t, so |v| = 0.s * 10^(len - t).
        let mut e = s.len() as i64 - t - 1;
        if s.len() > digits {
            let round_up = s.as_bytes()[digits] >= b'5';
            s.truncate(digits);
            if round_up {
                let mut b = s.into_bytes();
                let mut carry = true;
                for ch in b.iter_mut().rev() {
                    if *ch == b'9' {
                        *ch = b'0';
                    } else {
                        *ch += 1;
                        carry = false;
                        break;
                    }
                }
                if carry {
                    b.insert(0, b'1');
                    b.pop();
                    e += 1;
                }
                s = String::from_utf8(b).unwrap();
            }
        }
        let keep = s.trim_end_matches('0').len().max(1);
        s.truncate(keep);
        let mantissa_str =
            if s.len() == 1 { s.clone() } else { format!("{}.{}", &s[..1], &s[1..]) };
        let sign = if neg { "-" } else { "" };
        format!("{}{}e{}", sign, mantissa_str, e)
    }
}

/// Round `m * 2^e` to `prec` significand bits (round half to even).
fn normalize(m: BigInt, e: i64, prec: u32) -> BigFloat {
    if m.is_zero() {
        return BigFloat::zero(prec);
    }
    let bits = m.bits();
    if bits <= prec as u64 {
        return BigFloat { mantissa: m, exponent: e, prec };
    }
    let drop = (bits - prec as u64) as usize;
    let neg = m.sign() == Sign::Minus;
    let mag = m.abs();
    let mut q: BigInt = &mag >> drop;
    let rem: BigInt = &mag - (&q << drop);
    let half: BigInt = BigInt::from(1u8) << (drop - 1);
    match rem.cmp(&half) {
        Ordering::Greater => q += 1,
        Ordering::Equal => {
            if q.is_odd() {
                q += 1;
            }
        }
        Ordering::Less => {}
    }
    // The carry may push the mantissa to prec+1 bits.
    if q.bits() > prec as u64 {
        q >>= 1usize;
        return BigFloat { mantissa: if neg { -q } else { q }, exponent: e + drop as i64 + 1, prec };
    }
    BigFloat { mantissa: if neg { -q } else { q }, exponent: e + drop as i64, prec }
}

/// Taylor sine and cosine for |rho| <= pi/4 + eps.
fn taylor_sin_cos(rho: &BigFloat, wp: u32) -> (BigFloat, BigFloat) {
    let x2 = rho.mul(rho);
    // sin
    let mut term = rho.clone();
    let mut sin = rho.clone();
    let mut i = 1u64;
    while !term.is_zero() && term.msb() > sin.msb().max(0) - (wp as i64 + 4) {
        term = term.mul(&x2).div_u64((2 * i) * (2 * i + 1)).neg();
        sin = sin.add(&term);
        i += 1;
    }
    // cos
    let mut term = BigFloat::from_i64(1, wp);
    let mut cos = term.clone();
    let mut i = 1u64;
    while !term.is_zero() && term.msb() > cos.msb().max(0) - (wp as i64 + 4) {
        term = term.mul(&x2).div_u64((2 * i - 1) * (2 * i)).neg();
        cos = cos.add(&term);
        i += 1;
    }
    (sin, cos)
}

/// atan(1/n) * 2^wp as an integer, by the alternating power series.
fn atan_inv_scaled(n: u64, wp: u32) -> BigInt {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut power = (BigInt::from(1u8) << wp as usize) / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

fn constant_cache() -> &'static Mutex<HashMap<(u8, u32), BigFloat>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u32), BigFloat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// pi at `prec` bits (Machin: pi = 16 atan(1/5) - 4 atan(1/239)).
pub fn pi(prec: u32) -> BigFloat {
    if let Some(v) = constant_cache().lock().unwrap().get(&(0, prec)) {
        return v.clone();
    }
    let wp = prec + 32;
    let v = atan_inv_scaled(5, wp) * 16 - atan_inv_scaled(239, wp) * 4;
    let out = normalize(v, -(wp as i64), prec);
    constant_cache().lock().unwrap().insert((0, prec), out.clone());
    out
}

/// ln 2 at `prec` bits (2 atanh(1/3)).
pub fn ln2(prec: u32) -> BigFloat {
    if let Some(v) = constant_cache().lock().unwrap().get(&(1, prec)) {
        return v.clone();
    }
    let wp = prec + 32;
    // 2 * sum_{k>=0} (1/3)^(2k+1) / (2k+1), scaled by 2^wp.
    let mut power = (BigInt::from(1u8) << wp as usize) / BigInt::from(3u8);
    let nine = BigInt::from(9u8);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        power /= &nine;
        k += 1;
    }
    let out = normalize(sum << 1, -(wp as i64), prec);
    constant_cache().lock().unwrap().insert((1, prec), out.clone());
    out
}
