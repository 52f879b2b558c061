//! Dirichlet characters of odd modulus d.
//!
//! Values are stored exactly: a character value is either zero (off the
//! units) or a root of unity e^(2 pi i t) recorded by its rational turn
//! t in [0,1). Multiplicativity checks therefore run in exact turn
//! arithmetic even for characters whose values are irrational, and the
//! rational case (all values in {-1,0,1}) is detected structurally.
//!
//! Periodicity: chi(m) for m >= d is values[m mod d], matching the
//! d-periodic extension the infinite sums rely on.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::scalar::{Mode, QContext, Scalar};

/// Zero or the root of unity e^(2 pi i t) with canonical turn t in [0,1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(BigRational),
}

impl CharValue {
    pub fn root(turn: BigRational) -> Self {
        CharValue::Root(reduce_turn(turn))
    }

    pub fn one() -> Self {
        CharValue::Root(BigRational::zero())
    }

    pub fn minus_one() -> Self {
        CharValue::Root(BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    /// True when the value lies in {-1, 0, 1}.
    pub fn is_rational(&self) -> bool {
        match self {
            CharValue::Zero => true,
            CharValue::Root(t) => t.is_zero() || *t == BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }

    pub fn mul(&self, other: &CharValue) -> CharValue {
        match (self, other) {
            (CharValue::Root(a), CharValue::Root(b)) => CharValue::root(a + b),
            _ => CharValue::Zero,
        }
    }

    /// Negation (half-turn rotation); zero stays zero.
    pub fn negate(&self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(t) => CharValue::root(t + BigRational::new(BigInt::one(), BigInt::from(2))),
        }
    }

    pub fn to_scalar(&self, ctx: &QContext) -> Result<Scalar> {
        match self {
            CharValue::Zero => Ok(ctx.zero()),
            CharValue::Root(t) => {
                if t.is_zero() {
                    Ok(ctx.one())
                } else if *t == BigRational::new(BigInt::one(), BigInt::from(2)) {
                    Ok(ctx.one().neg())
                } else {
                    match ctx.mode() {
                        Mode::Exact => Err(Error::ExactModeUnsupported(format!(
                            "character value e^(2 pi i {}) is irrational",
                            t
                        ))),
                        Mode::Numeric => Ok(Scalar::Complex(BigComplex::root_of_unity(
                            t,
                            ctx.precision(),
                        ))),
                    }
                }
            }
        }
    }
}

fn reduce_turn(t: BigRational) -> BigRational {
    &t - t.floor()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u32,
    values: Vec<CharValue>,
    is_principal: bool,
    is_rational: bool,
}

impl DirichletCharacter {
    /// The principal character mod d: 1 on units, 0 elsewhere; for d = 1
    /// identically 1 (including at 0).
    pub fn principal(d: u32) -> Result<Self> {
        check_modulus(d)?;
        let values = (0..d)
            .map(|a| if gcd_u32(a, d) == 1 { CharValue::one() } else { CharValue::Zero })
            .collect();
        Self::from_values(d, values)
    }

    /// The Legendre symbol character mod an odd prime p (Euler criterion).
    pub fn quadratic(p: u32) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let values = (0..p)
            .map(|a| {
                if a == 0 {
                    CharValue::Zero
                } else {
                    match pow_mod(a as u64, (p as u64 - 1) / 2, p as u64) {
                        1 => CharValue::one(),
                        _ => CharValue::minus_one(),
                    }
                }
            })
            .collect();
        Self::from_values(p, values)
    }

    /// Build from explicit values, validating every character invariant.
    pub fn from_values(d: u32, values: Vec<CharValue>) -> Result<Self> {
        check_modulus(d)?;
        if values.len() != d as usize {
            return Err(Error::InvalidCharacter(format!(
                "value table has {} entries for modulus {}",
                values.len(),
                d
            )));
        }
        for a in 0..d {
            let should_be_zero = gcd_u32(a, d) != 1;
            if values[a as usize].is_zero() != should_be_zero {
                return Err(Error::WrongZeroPattern(a));
            }
        }
        let units: Vec<u32> = (0..d).filter(|&a| gcd_u32(a, d) == 1).collect();
        for &a in &units {
            for &b in &units {
                let ab = ((a as u64 * b as u64) % d as u64) as usize;
                if values[ab] != values[a as usize].mul(&values[b as usize]) {
                    return Err(Error::NotMultiplicative { a, b });
                }
            }
        }
        let is_principal = units.iter().all(|&a| values[a as usize] == CharValue::one());
        let is_rational = values.iter().all(CharValue::is_rational);
        Ok(DirichletCharacter { modulus: d, values, is_principal, is_rational })
    }

    /// Build from scalar values, snapping each to the nearest root of
    /// unity of order dividing the unit-group exponent. A value farther
    /// than 1/128 from every admissible root is rejected.
    pub fn from_table(d: u32, table: &[Scalar]) -> Result<Self> {
        check_modulus(d)?;
        if table.len() != d as usize {
            return Err(Error::InvalidCharacter(format!(
                "value table has {} entries for modulus {}",
                table.len(),
                d
            )));
        }
        let lambda = unit_group_exponent(d);
        let values = table
            .iter()
            .enumerate()
            .map(|(a, v)| snap_to_root(v, lambda).ok_or(Error::NonUnitValue(a as u32)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(d, values)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    pub fn is_rational(&self) -> bool {
        self.is_rational
    }

    /// chi(m), periodically extended.
    pub fn value(&self, m: u64) -> &CharValue {
        &self.values[(m % self.modulus as u64) as usize]
    }

    pub fn values(&self) -> &[CharValue] {
        &self.values
    }

    pub fn scalar_value(&self, m: u64, ctx: &QContext) -> Result<Scalar> {
        self.value(m).to_scalar(ctx)
    }

    /// One period of values as context scalars.
    pub fn scalar_table(&self, ctx: &QContext) -> Result<Vec<Scalar>> {
        self.values.iter().map(|v| v.to_scalar(ctx)).collect()
    }

    /// Pointwise product (also a character mod the common modulus).
    pub fn product(&self, other: &DirichletCharacter) -> Result<DirichletCharacter> {
        if self.modulus != other.modulus {
            return Err(Error::InvalidCharacter("modulus mismatch in product".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.mul(b))
            .collect();
        Self::from_values(self.modulus, values)
    }

    /// Deliberately corrupt one unit value by a sign flip, skipping
    /// validation. Mutation-testing plumbing: the result is generally NOT
    /// a character.
    pub fn flip_value_unchecked(&self, residue: u32) -> DirichletCharacter {
        let mut values = self.values.clone();
        let idx = (residue % self.modulus) as usize;
        values[idx] = values[idx].negate();
        DirichletCharacter {
            modulus: self.modulus,
            values,
            is_principal: false,
            is_rational: self.is_rational,
        }
    }

    /// All phi(d) characters mod d, principal first, built from the
    /// cyclic decomposition of the unit group. Exact mode is accepted
    /// only when every character is rational (unit-group exponent <= 2).
    pub fn enumerate(d: u32, ctx: &QContext) -> Result<Vec<DirichletCharacter>> {
        check_modulus(d)?;
        let comps = cyclic_components(d);
        let exponent = comps.iter().fold(1u64, |acc, c| acc.lcm(&(c.order as u64)));
        if ctx.mode() == Mode::Exact && exponent > 2 {
            return Err(Error::ExactModeUnsupported(format!(
                "unit group mod {} has exponent {}; characters are irrational",
                d, exponent
            )));
        }
        // Dlog of each residue in every component.
        let mut logs: Vec<HashMap<u32, u32>> = Vec::new();
        for c in &comps {
            let mut table = HashMap::new();
            let mut p = 1u64;
            for k in 0..c.order {
                table.insert(p as u32, k);
                p = p * c.generator as u64 % c.modulus as u64;
            }
            logs.push(table);
        }
        let phi: u64 = comps.iter().map(|c| c.order as u64).product();
        let mut out = Vec::with_capacity(phi as usize);
        let mut index = vec![0u32; comps.len()];
        loop {
            let values = (0..d)
                .map(|a| {
                    if gcd_u32(a, d) != 1 {
                        return CharValue::Zero;
                    }
                    let mut turn = BigRational::zero();
                    for (ci, c) in comps.iter().enumerate() {
                        let res = a % c.modulus;
                        let k = logs[ci][&res];
                        turn += BigRational::new(
                            BigInt::from(index[ci] as u64 * k as u64),
                            BigInt::from(c.order),
                        );
                    }
                    CharValue::root(turn)
                })
                .collect();
            out.push(Self::from_values(d, values)?);
            // Odometer over character indices, last component fastest.
            let mut pos = comps.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                index[pos] += 1;
                if index[pos] < comps[pos].order {
                    break;
                }
                index[pos] = 0;
            }
        }
    }

    /// Short human-readable identifier used in reports.
    pub fn describe(&self) -> String {
        if self.is_principal {
            return format!("principal:{}", self.modulus);
        }
        if self.is_rational && is_prime(self.modulus) {
            if let Ok(quad) = Self::quadratic(self.modulus) {
                if quad == *self {
                    return format!("quadratic:{}", self.modulus);
                }
            }
        }
        let vals: Vec<String> = self
            .values
            .iter()
            .map(|v| match v {
                CharValue::Zero => "0".to_string(),
                CharValue::Root(t) if t.is_zero() => "1".to_string(),
                CharValue::Root(t) if *t == BigRational::new(BigInt::one(), 2.into()) => {
                    "-1".to_string()
                }
                CharValue::Root(t) => format!("e({})", t),
            })
            .collect();
        format!("{}:{}", self.modulus, vals.join(","))
    }
}

fn check_modulus(d: u32) -> Result<()> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(Error::EvenModulus(d));
    }
    Ok(())
}

fn snap_to_root(v: &Scalar, lambda: u32) -> Option<CharValue> {
    match v {
        Scalar::Rational(r) => {
            if r.is_zero() {
                Some(CharValue::Zero)
            } else if r.is_one() {
                Some(CharValue::one())
            } else if *r == -BigRational::one() {
                Some(CharValue::minus_one())
            } else {
                None
            }
        }
        Scalar::Complex(z) => {
            let prec = z.re.precision();
            // 1/128: far below the minimum gap between admissible roots,
            // generous enough for hand-typed decimal approximations.
            let snap = crate::bigfloat::BigFloat::from_rational(
                &BigRational::new(BigInt::one(), BigInt::from(128)),
                prec,
            );
            if z.abs().cmp_value(&snap) != std::cmp::Ordering::Greater {
                return Some(CharValue::Zero);
            }
            for k in 0..lambda {
                let t = BigRational::new(BigInt::from(k), BigInt::from(lambda));
                let root = BigComplex::root_of_unity(&t, prec);
                if z.sub(&root).abs().cmp_value(&snap) != std::cmp::Ordering::Greater {
                    return Some(CharValue::root(t));
                }
            }
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Unit-group structure of (Z/dZ)* for odd d.
// ---------------------------------------------------------------------------

struct CyclicComponent {
    modulus: u32,   // p^e
    order: u32,     // phi(p^e)
    generator: u32, // primitive root mod p^e
}

/// The unit group mod odd d as a product of cyclic groups, one per
/// prime-power factor (odd prime powers always have primitive roots).
fn cyclic_components(d: u32) -> Vec<CyclicComponent> {
    let mut comps = Vec::new();
    for (p, e) in factorize(d) {
        let pe = p.pow(e);
        let order = pe / p * (p - 1);
        let generator = primitive_root_prime_power(p, e);
        comps.push(CyclicComponent { modulus: pe, order, generator });
    }
    comps
}

fn unit_group_exponent(d: u32) -> u32 {
    cyclic_components(d).iter().fold(1u32, |acc, c| acc.lcm(&c.order))
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u32;
    while (f as u64) * (f as u64) <= n as u64 {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut f = 2u32;
    while (f as u64) * (f as u64) <= n as u64 {
        if n.is_multiple_of(f) {
            let mut e = 0;
            while n.is_multiple_of(f) {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Primitive root mod p^e for odd prime p: find one mod p by order
/// checks against the prime factors of p-1, then lift (g works mod p^e
/// unless g^(p-1) = 1 mod p^2, in which case g+p does).
fn primitive_root_prime_power(p: u32, e: u32) -> u32 {
    let phi_p = (p - 1) as u64;
    let factors = factorize(p - 1);
    let mut g = 2u32;
    loop {
        let ok = factors.iter().all(|&(f, _)| pow_mod(g as u64, phi_p / f as u64, p as u64) != 1);
        if ok {
            break;
        }
        g += 1;
    }
    if e == 1 {
        return g;
    }
    let p2 = (p as u64) * (p as u64);
    if pow_mod(g as u64, phi_p, p2) == 1 {
        g + p
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::default_tolerance;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn exact_ctx() -> QContext {
        QContext::exact(rat(1, 2)).unwrap()
    }

    fn numeric_ctx() -> QContext {
        QContext::numeric(rat(1, 2), 128, default_tolerance()).unwrap()
    }

    fn rational_table(chi: &DirichletCharacter) -> Vec<i64> {
        chi.values()
            .iter()
            .map(|v| match v {
                CharValue::Zero => 0,
                CharValue::Root(t) if t.is_zero() => 1,
                _ => -1,
            })
            .collect()
    }

    #[test]
    fn principal_tables() {
        assert_eq!(rational_table(&DirichletCharacter::principal(1).unwrap()), vec![1]);
        assert_eq!(rational_table(&DirichletCharacter::principal(3).unwrap()), vec![0, 1, 1]);
        let p9 = DirichletCharacter::principal(9).unwrap();
        let zeros: Vec<usize> =
            p9.values().iter().enumerate().filter(|(_, v)| v.is_zero()).map(|(i, _)| i).collect();
        assert_eq!(zeros, vec![0, 3, 6]);
        assert!(p9.is_principal());
        assert!(matches!(DirichletCharacter::principal(6), Err(Error::EvenModulus(6))));
    }

    #[test]
    fn legendre_tables() {
        assert_eq!(rational_table(&DirichletCharacter::quadratic(3).unwrap()), vec![0, 1, -1]);
        assert_eq!(
            rational_table(&DirichletCharacter::quadratic(5).unwrap()),
            vec![0, 1, -1, -1, 1]
        );
        assert_eq!(
            rational_table(&DirichletCharacter::quadratic(7).unwrap()),
            vec![0, 1, 1, -1, 1, -1, -1]
        );
        assert!(matches!(DirichletCharacter::quadratic(9), Err(Error::NotOddPrime(9))));
        assert!(matches!(DirichletCharacter::quadratic(2), Err(Error::NotOddPrime(2))));
        assert!(DirichletCharacter::quadratic(5).unwrap().is_rational());
    }

    #[test]
    fn from_table_validation() {
        let ctx = exact_ctx();
        let s = |v: i64| ctx.embed(&rat(v, 1));
        let ok = DirichletCharacter::from_table(3, &[s(0), s(1), s(-1)]).unwrap();
        assert_eq!(ok, DirichletCharacter::quadratic(3).unwrap());
        let principal = DirichletCharacter::from_table(3, &[s(0), s(1), s(1)]).unwrap();
        assert!(principal.is_principal());
        assert!(matches!(
            DirichletCharacter::from_table(3, &[s(0), s(1), s(2)]),
            Err(Error::NonUnitValue(2))
        ));
        assert!(matches!(
            DirichletCharacter::from_table(3, &[s(1), s(1), s(1)]),
            Err(Error::WrongZeroPattern(0))
        ));
        // 5:[0,1,1,-1,-1] breaks chi(2*2=4) = chi(2)^2.
        let bad = DirichletCharacter::from_table(5, &[s(0), s(1), s(1), s(-1), s(-1)]);
        assert!(matches!(bad, Err(Error::NotMultiplicative { .. })));
    }

    #[test]
    fn from_table_snaps_complex_values() {
        let ctx = numeric_ctx();
        // Character mod 9 of order 6: values typed as 3-digit decimals.
        let r = |t: (i64, i64)| {
            Scalar::Complex(BigComplex::root_of_unity(&rat(t.0, t.1), ctx.precision()))
        };
        let z = ctx.zero();
        // chi(2) = e(1/6) generates: 2^k mod 9 cycles 1,2,4,8,7,5.
        let table = [
            z.clone(),
            ctx.one(),
            r((1, 6)),
            z.clone(),
            r((2, 6)),
            r((5, 6)),
            z,
            r((4, 6)),
            r((3, 6)),
        ];
        let chi = DirichletCharacter::from_table(9, &table).unwrap();
        assert!(!chi.is_rational());
        assert_eq!(chi.value(2), &CharValue::root(rat(1, 6)));
        // Same table perturbed by ~1e-3 still snaps to the same character.
        let bump = ctx.embed(&rat(1, 1000));
        let perturbed: Vec<Scalar> = table.iter().map(|v| v.add(&bump)).collect();
        let chi2 = DirichletCharacter::from_table(9, &perturbed).unwrap();
        assert_eq!(chi, chi2);
    }

    #[test]
    fn exact_mode_gating() {
        let chi9 = DirichletCharacter::enumerate(9, &numeric_ctx()).unwrap();
        let nonreal = &chi9[1];
        assert!(nonreal.scalar_table(&exact_ctx()).is_err());
        assert!(nonreal.scalar_table(&numeric_ctx()).is_ok());
        assert!(matches!(
            DirichletCharacter::enumerate(9, &exact_ctx()),
            Err(Error::ExactModeUnsupported(_))
        ));
        // Exponent 2 groups stay available in exact mode.
        let chi3 = DirichletCharacter::enumerate(3, &exact_ctx()).unwrap();
        assert_eq!(chi3.len(), 2);
    }

    #[test]
    fn enumerate_structure() {
        let ctx = numeric_ctx();
        assert_eq!(DirichletCharacter::enumerate(1, &ctx).unwrap().len(), 1);
        let chi3 = DirichletCharacter::enumerate(3, &ctx).unwrap();
        assert_eq!(chi3.len(), 2);
        assert!(chi3[0].is_principal());
        assert_eq!(chi3[1], DirichletCharacter::quadratic(3).unwrap());
        let chi9 = DirichletCharacter::enumerate(9, &ctx).unwrap();
        assert_eq!(chi9.len(), 6);
        assert!(chi9[0].is_principal());
        // Pairwise distinct.
        for i in 0..chi9.len() {
            for j in i + 1..chi9.len() {
                assert_ne!(chi9[i], chi9[j]);
            }
        }
        // Closed under pointwise product.
        for a in &chi9 {
            for b in &chi9 {
                let p = a.product(b).unwrap();
                assert!(chi9.contains(&p));
            }
        }
        // CRT case: d = 45 has phi = 24.
        assert_eq!(DirichletCharacter::enumerate(45, &ctx).unwrap().len(), 24);
    }

    #[test]
    fn orthogonality() {
        let ctx = numeric_ctx();
        for chi in DirichletCharacter::enumerate(9, &ctx).unwrap() {
            let table = chi.scalar_table(&ctx).unwrap();
            let sum = table.iter().fold(ctx.zero(), |acc, v| acc.add(v));
            if chi.is_principal() {
                // Sum over units is phi(9) = 6.
                assert!(ctx.eq_scalars(&sum, &ctx.embed(&rat(6, 1))).unwrap());
            } else {
                assert!(ctx.eq_scalars(&sum, &ctx.zero()).unwrap());
            }
        }
    }

    #[test]
    fn periodic_extension_and_flip() {
        let chi = DirichletCharacter::quadratic(5).unwrap();
        for m in 0..25u64 {
            assert_eq!(chi.value(m), chi.value(m + 5));
        }
        let flipped = chi.flip_value_unchecked(2);
        assert_ne!(chi, flipped);
        assert_eq!(flipped.value(2), &CharValue::one());
        assert_eq!(flipped.value(3), chi.value(3));
    }

    #[test]
    fn describe_labels() {
        assert_eq!(DirichletCharacter::principal(3).unwrap().describe(), "principal:3");
        assert_eq!(DirichletCharacter::quadratic(5).unwrap().describe(), "quadratic:5");
        let ctx = numeric_ctx();
        let chi9 = DirichletCharacter::enumerate(9, &ctx).unwrap();
        assert!(chi9[1].describe().starts_with("9:"));
    }
}
