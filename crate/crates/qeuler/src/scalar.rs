//! Scalar tower and the q-context.
//!
//! Every kernel is generic over a [`Scalar`], which is either an exact
//! big rational or an arbitrary-precision complex float. The [`QContext`]
//! owns the deformation parameter q, the arithmetic mode, and the
//! comparison tolerance.
//!
//! Fractional powers of q are the delicate part. The context stores q as
//! `root^lattice`: `root` is the originally supplied q and `lattice`
//! grows when a kernel rebases to q^w (see [`QContext::power_base`]).
//! A power q_base^x with rational x is exact precisely when
//! `x * lattice` is an integer, which is what makes the symmetry
//! identities with shifted arguments x + (w2/w1)j checkable in exact
//! rational arithmetic end to end.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::BigFloat;
use crate::complex::BigComplex;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;
pub const MIN_PRECISION: u32 = 64;

/// Default comparison tolerance, 1e-30.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u8).pow(30))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
}

/// Exact big rational or arbitrary-precision complex float.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    Complex(BigComplex),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Complex(z) => z.is_zero(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.add(b)),
            _ => panic!("scalar variant mix in add"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.sub(b)),
            _ => panic!("scalar variant mix in sub"),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.mul(b)),
            _ => panic!("scalar variant mix in mul"),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.div(b)),
            _ => panic!("scalar variant mix in div"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Complex(a) => Scalar::Complex(a.neg()),
        }
    }

    /// Integer power by binary exponentiation; negative exponents invert.
    pub fn powi(&self, k: i64) -> Scalar {
        if k == 0 {
            return match self {
                Scalar::Rational(_) => Scalar::Rational(BigRational::one()),
                Scalar::Complex(z) => Scalar::Complex(BigComplex::one(z.re.precision())),
            };
        }
        if let Scalar::Rational(r) = self {
            assert!(k.unsigned_abs() <= i32::MAX as u64, "exponent too large");
            return Scalar::Rational(r.pow(k as i32));
        }
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        let mut acc: Option<Scalar> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match &acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        let acc = acc.unwrap();
        if k < 0 {
            match &acc {
                Scalar::Rational(_) => unreachable!(),
                Scalar::Complex(z) => {
                    Scalar::Complex(BigComplex::one(z.re.precision()).div(z))
                }
            }
        } else {
            acc
        }
    }

    /// Modulus as a big float (rationals are converted at the given precision).
    pub fn abs_float(&self, prec: u32) -> BigFloat {
        match self {
            Scalar::Rational(r) => BigFloat::from_rational(&r.abs(), prec),
            Scalar::Complex(z) => z.abs(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&BigComplex> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Complex(z) => Some(z),
        }
    }

    /// "num/den" (or plain integer) for rationals; decimal (with an
    /// imaginary part when nonzero) for complex values.
    pub fn render(&self, digits: usize) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Complex(z) => {
                if z.im.is_zero() {
                    z.re.to_decimal_string(digits)
                } else {
                    let im = z.im.to_decimal_string(digits);
                    let sep = if im.starts_with('-') { "" } else { "+" };
                    format!("{}{}{}i", z.re.to_decimal_string(digits), sep, im)
                }
            }
        }
    }
}

/// Mode-aware equality: exact structural equality for rationals,
/// `|a-b| <= tol * max(1,|a|,|b|)` for complex values.
pub fn scalar_eq(a: &Scalar, b: &Scalar, tol: &BigRational) -> Result<bool> {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => Ok(x == y),
        (Scalar::Complex(x), Scalar::Complex(y)) => {
            let prec = x.re.precision().max(y.re.precision());
            let diff = x.sub(y).abs();
            let one = BigFloat::from_i64(1, prec);
            let mut scale = x.abs();
            for c in [y.abs(), one] {
                if c.cmp_value(&scale) == std::cmp::Ordering::Greater {
                    scale = c;
                }
            }
            let bound = BigFloat::from_rational(tol, prec).mul(&scale);
            Ok(diff.cmp_value(&bound) != std::cmp::Ordering::Greater)
        }
        _ => Err(Error::MixedVariants("comparing rational with complex scalar".into())),
    }
}

/// The deformation parameter q with its arithmetic mode.
///
/// The working base is `root^lattice`; see the module docs for why the
/// lattice exists. All q-powers below are powers of the working base.
#[derive(Debug, Clone)]
pub struct QContext {
    root: BigRational,
    lattice: i64,
    mode: Mode,
    prec: u32,
    tol: BigRational,
}

impl QContext {
    pub fn exact(q: BigRational) -> Result<Self> {
        Self::validate_q(&q)?;
        Ok(QContext { root: q, lattice: 1, mode: Mode::Exact, prec: DEFAULT_PRECISION, tol: BigRational::zero() })
    }

    pub fn numeric(q: BigRational, prec: u32, tol: BigRational) -> Result<Self> {
        Self::validate_q(&q)?;
        if prec < MIN_PRECISION {
            return Err(Error::InvalidContext(format!(
                "precision {} below minimum {}",
                prec, MIN_PRECISION
            )));
        }
        if tol.is_negative() {
            return Err(Error::InvalidContext("negative tolerance".into()));
        }
        Ok(QContext { root: q, lattice: 1, mode: Mode::Numeric, prec, tol })
    }

    pub fn numeric_default(q: BigRational) -> Result<Self> {
        Self::numeric(q, DEFAULT_PRECISION, default_tolerance())
    }

    fn validate_q(q: &BigRational) -> Result<()> {
        if q.is_zero() {
            return Err(Error::InvalidContext("q = 0".into()));
        }
        if q.abs() >= BigRational::one() {
            return Err(Error::InvalidContext(format!("|q| >= 1 (q = {})", q)));
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn tolerance(&self) -> &BigRational {
        &self.tol
    }

    /// The originally supplied q (independent of any rebasing).
    pub fn root(&self) -> &BigRational {
        &self.root
    }

    pub fn lattice(&self) -> i64 {
        self.lattice
    }

    /// Context whose working base is (this base)^w.
    pub fn power_base(&self, w: u32) -> Self {
        assert!(w >= 1, "power_base requires w >= 1");
        let mut out = self.clone();
        out.lattice = self.lattice.checked_mul(w as i64).expect("lattice overflow");
        out
    }

    pub fn zero(&self) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::Rational(BigRational::zero()),
            Mode::Numeric => Scalar::Complex(BigComplex::zero(self.prec)),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::Rational(BigRational::one()),
            Mode::Numeric => Scalar::Complex(BigComplex::one(self.prec)),
        }
    }

    pub fn embed(&self, r: &BigRational) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::Rational(r.clone()),
            Mode::Numeric => Scalar::Complex(BigComplex::from_rational(r, self.prec)),
        }
    }

    pub fn embed_int(&self, v: &BigInt) -> Scalar {
        self.embed(&BigRational::from_integer(v.clone()))
    }

    /// Power of the working base with integer exponent: (root^lattice)^e.
    pub fn q_pow(&self, e: i64) -> Scalar {
        let k = self.lattice.checked_mul(e).expect("q exponent overflow");
        match self.mode {
            Mode::Exact => Scalar::Rational(rational_pow(&self.root, k)),
            Mode::Numeric => Scalar::Complex(BigComplex::from_real(self.float_root_pow(k))),
        }
    }

    /// Power of the working base with rational exponent. Exact whenever
    /// `x * lattice` is an integer; otherwise numeric mode requires a
    /// positive root (real principal branch).
    pub fn q_pow_rational(&self, x: &BigRational) -> Result<Scalar> {
        let expo = x * BigRational::from_integer(BigInt::from(self.lattice));
        if expo.denom().is_one() {
            let k = expo
                .numer()
                .to_i64()
                .ok_or_else(|| Error::InvalidParameter("q exponent overflow".into()))?;
            return Ok(match self.mode {
                Mode::Exact => Scalar::Rational(rational_pow(&self.root, k)),
                Mode::Numeric => Scalar::Complex(BigComplex::from_real(self.float_root_pow(k))),
            });
        }
        match self.mode {
            Mode::Exact => Err(Error::NonIntegerExponentInExactMode(format!(
                "q^({}) with exponent lattice {}",
                x, self.lattice
            ))),
            Mode::Numeric => {
                if !self.root.is_positive() {
                    return Err(Error::UnsupportedDomain(
                        "fractional power of a non-positive q".into(),
                    ));
                }
                let wp = self.prec + 32;
                let ln_root = BigFloat::from_rational(&self.root, wp).ln();
                let xf = BigFloat::from_rational(&expo, wp);
                Ok(Scalar::Complex(BigComplex::from_real(
                    xf.mul(&ln_root).exp().with_prec(self.prec),
                )))
            }
        }
    }

    /// root^k at context precision, exact sign handling for negative roots.
    fn float_root_pow(&self, k: i64) -> BigFloat {
        if k.unsigned_abs() <= 4096 {
            return BigFloat::from_rational(&rational_pow(&self.root, k), self.prec);
        }
        let wp = self.prec + 32;
        let mag = BigFloat::from_rational(&self.root.abs(), wp).ln();
        let v = mag.mul_i64(k).exp().with_prec(self.prec);
        if self.root.is_negative() && k % 2 != 0 {
            v.neg()
        } else {
            v
        }
    }

    /// The q-number [x]_q = (1 - q^x)/(1 - q) in the working base.
    pub fn q_number(&self, x: &BigRational) -> Result<Scalar> {
        let qx = self.q_pow_rational(x)?;
        Ok(self.one().sub(&qx).div(&self.one().sub(&self.q_pow(1))))
    }

    pub fn q_number_int(&self, x: i64) -> Scalar {
        let qx = self.q_pow(x);
        self.one().sub(&qx).div(&self.one().sub(&self.q_pow(1)))
    }

    /// scalar_eq under this context's tolerance.
    pub fn eq_scalars(&self, a: &Scalar, b: &Scalar) -> Result<bool> {
        scalar_eq(a, b, &self.tol)
    }
}

fn rational_pow(r: &BigRational, k: i64) -> BigRational {
    assert!(k.unsigned_abs() <= i32::MAX as u64, "exponent too large");
    if k == 0 {
        return BigRational::one();
    }
    r.pow(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn context_validation() {
        assert!(QContext::exact(rat(1, 2)).is_ok());
        assert!(QContext::exact(rat(-1, 2)).is_ok());
        assert!(matches!(QContext::exact(rat(0, 1)), Err(Error::InvalidContext(_))));
        assert!(matches!(QContext::exact(rat(1, 1)), Err(Error::InvalidContext(_))));
        assert!(matches!(QContext::exact(rat(3, 2)), Err(Error::InvalidContext(_))));
        assert!(matches!(
            QContext::numeric(rat(1, 2), 32, default_tolerance()),
            Err(Error::InvalidContext(_))
        ));
    }

    #[test]
    fn q_number_reference_values() {
        let ctx = QContext::exact(rat(1, 2)).unwrap();
        // [0]_q = 0, [2]_q = 3/2, [-1]_q = -2 at q = 1/2.
        assert_eq!(ctx.q_number_int(0).as_rational().unwrap(), &rat(0, 1));
        assert_eq!(ctx.q_number_int(2).as_rational().unwrap(), &rat(3, 2));
        assert_eq!(ctx.q_number_int(-1).as_rational().unwrap(), &rat(-2, 1));
    }

    #[test]
    fn q_addition_law_exact() {
        let ctx = QContext::exact(rat(2, 3)).unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let lhs = ctx.q_number_int(a + b);
                let rhs = ctx.q_number_int(a).add(&ctx.q_pow(a).mul(&ctx.q_number_int(b)));
                assert!(ctx.eq_scalars(&lhs, &rhs).unwrap(), "a={} b={}", a, b);
            }
        }
    }

    #[test]
    fn q_negation_law() {
        // [-x]_q = -q^(-x) [x]_q.
        let ctx = QContext::exact(rat(1, 3)).unwrap();
        for x in 1i64..=5 {
            let lhs = ctx.q_number_int(-x);
            let rhs = ctx.q_pow(-x).mul(&ctx.q_number_int(x)).neg();
            assert!(ctx.eq_scalars(&lhs, &rhs).unwrap());
        }
    }

    #[test]
    fn lattice_makes_fractional_powers_exact() {
        // Base q^3, exponent 5/3: (q^3)^(5/3) = q^5 exactly.
        let ctx = QContext::exact(rat(1, 2)).unwrap().power_base(3);
        let v = ctx.q_pow_rational(&rat(5, 3)).unwrap();
        assert_eq!(v.as_rational().unwrap(), &rat(1, 32));
        // Denominator 2 does not divide the lattice: refused in exact mode.
        assert!(matches!(
            ctx.q_pow_rational(&rat(1, 2)),
            Err(Error::NonIntegerExponentInExactMode(_))
        ));
    }

    #[test]
    fn exact_numeric_agreement() {
        let q = rat(3, 10);
        let exact = QContext::exact(q.clone()).unwrap();
        let numeric = QContext::numeric_default(q).unwrap();
        for x in 0i64..=6 {
            let e = exact.q_number_int(x);
            let nv = numeric.q_number_int(x);
            let embedded = numeric.embed(e.as_rational().unwrap());
            assert!(numeric.eq_scalars(&embedded, &nv).unwrap());
        }
        // Fractional exponent numerically vs exact rational on lattice.
        let n3 = numeric.power_base(3);
        let via_lattice = n3.q_pow_rational(&rat(2, 3)).unwrap();
        let direct = numeric.q_pow(2);
        assert!(numeric.eq_scalars(&via_lattice, &direct).unwrap());
    }

    #[test]
    fn mixed_variants_detected() {
        let e = QContext::exact(rat(1, 2)).unwrap();
        let n = QContext::numeric_default(rat(1, 2)).unwrap();
        let r = scalar_eq(&e.one(), &n.one(), &default_tolerance());
        assert!(matches!(r, Err(Error::MixedVariants(_))));
    }

    #[test]
    fn scalar_powers() {
        let ctx = QContext::numeric_default(rat(1, 2)).unwrap();
        let z = ctx.embed(&rat(3, 4));
        let p = z.powi(3);
        let expect = ctx.embed(&rat(27, 64));
        assert!(ctx.eq_scalars(&p, &expect).unwrap());
        let inv = z.powi(-2);
        let expect = ctx.embed(&rat(16, 9));
        assert!(ctx.eq_scalars(&inv, &expect).unwrap());
        assert!(ctx.eq_scalars(&z.powi(0), &ctx.one()).unwrap());
    }
}
