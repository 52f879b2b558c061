//! Complex numbers over [`BigFloat`].
//!
//! Just enough structure for the kernels: field arithmetic, modulus,
//! roots of unity from exact rational turns, and powers of a positive
//! real base with a complex exponent (the principal branch, which is the
//! only branch the series evaluators ever need).

use num_rational::BigRational;

use crate::bigfloat::BigFloat;

#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex { re: BigFloat::from_i64(1, prec), im: BigFloat::zero(prec) }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.precision();
        BigComplex { re, im: BigFloat::zero(prec) }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_real(BigFloat::from_rational(r, prec))
    }

    /// e^(2 pi i t) for exact rational t.
    pub fn root_of_unity(t: &BigRational, prec: u32) -> Self {
        let (s, c) = BigFloat::sin_cos_2pi_frac(t, prec);
        BigComplex { re: c, im: s }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        BigComplex { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BigComplex { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn mul_real(&self, other: &BigFloat) -> Self {
        BigComplex { re: self.re.mul(other), im: self.im.mul(other) }
    }

    pub fn div(&self, other: &Self) -> Self {
        let d = other.re.mul(&other.re).add(&other.im.mul(&other.im));
        BigComplex {
            re: self.re.mul(&other.re).add(&self.im.mul(&other.im)).div(&d),
            im: self.im.mul(&other.re).sub(&self.re.mul(&other.im)).div(&d),
        }
    }

    pub fn abs(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).sqrt()
    }

    /// base^self for a strictly positive real base (principal branch):
    /// exp(re * ln base) * (cos(im * ln base) + i sin(im * ln base)).
    pub fn pow_of_positive_real(base: &BigFloat, expo: &BigComplex) -> Self {
        let ln_b = base.ln();
        let mag = expo.re.mul(&ln_b).exp();
        if expo.im.is_zero() {
            return BigComplex { im: BigFloat::zero(mag.precision()), re: mag };
        }
        let (s, c) = expo.im.mul(&ln_b).sin_cos();
        BigComplex { re: mag.mul(&c), im: mag.mul(&s) }
    }

    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (self.re.to_decimal_string(digits), self.im.to_decimal_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: &BigFloat, bits: i64) -> bool {
        let diff = a.sub(b).abs();
        diff.is_zero() || diff.msb() < a.abs().msb().max(b.abs().msb()).max(0) - bits
    }

    #[test]
    fn field_identities() {
        let prec = 192;
        let z = BigComplex::new(BigFloat::from_f64(1.5, prec), BigFloat::from_f64(-2.25, prec));
        let w = BigComplex::new(BigFloat::from_f64(0.75, prec), BigFloat::from_f64(3.0, prec));
        let prod = z.mul(&w);
        let back = prod.div(&w);
        assert!(close(&back.re, &z.re, 180));
        assert!(close(&back.im, &z.im, 180));
        // |zw| = |z||w|
        assert!(close(&prod.abs(), &z.abs().mul(&w.abs()), 180));
    }

    #[test]
    fn unit_roots_cancel() {
        let prec = 192;
        // Product of all cube roots of unity offsets: 1 + w + w^2 = 0.
        let w1 = BigComplex::root_of_unity(&BigRational::new(1.into(), 3.into()), prec);
        let w2 = BigComplex::root_of_unity(&BigRational::new(2.into(), 3.into()), prec);
        let sum = BigComplex::one(prec).add(&w1).add(&w2);
        assert!(sum.abs().msb() < -180);
        // w1 * w2 = 1.
        let p = w1.mul(&w2);
        assert!(close(&p.re, &BigFloat::from_i64(1, prec), 180));
        assert!(p.im.abs().msb() < -180);
    }

    #[test]
    fn positive_real_powers() {
        let prec = 192;
        // 4^(1/2) = 2 via the complex path with zero imaginary part.
        let four = BigFloat::from_i64(4, prec);
        let half = BigComplex::from_rational(&BigRational::new(1.into(), 2.into()), prec);
        let r = BigComplex::pow_of_positive_real(&four, &half);
        assert!(close(&r.re, &BigFloat::from_i64(2, prec), 180));
        assert!(r.im.is_zero());
        // e^(i pi) = -1 via base e, exponent i pi... expressed as exp(ln e * i pi).
        let e = BigFloat::from_i64(1, prec).exp();
        let ipi = BigComplex::new(BigFloat::zero(prec), crate::bigfloat::pi(prec));
        let m1 = BigComplex::pow_of_positive_real(&e, &ipi);
        assert!(close(&m1.re, &BigFloat::from_i64(-1, prec), 180));
        assert!(m1.im.abs().msb() < -180);
    }
}
