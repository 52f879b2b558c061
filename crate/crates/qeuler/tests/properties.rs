//! Randomized cross-checks: independent formulations of the same
//! quantity must agree, and the algebraic laws the kernel leans on must
//! hold for arbitrary admissible inputs, not just the frozen fixtures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use qeuler::{
    addition_expand, check_addition, check_distribution_symmetry, check_power_sum_symmetry,
    check_reflection, check_umbral, classical_euler_poly, euler_poly, power_sum_factored,
    power_sum_naive, CharValue, DirichletCharacter, EulerParams, QContext, Scalar,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nonzero rationals strictly inside the unit interval, both signs.
fn arb_q() -> impl Strategy<Value = BigRational> {
    (1i64..=11, 2i64..=13, any::<bool>()).prop_filter_map("need |q| < 1", |(n, d, neg)| {
        if n >= d {
            return None;
        }
        let q = rat(if neg { -n } else { n }, d);
        Some(q)
    })
}

/// Positive q only; the numeric-mode comparisons take real powers.
fn arb_q_pos() -> impl Strategy<Value = BigRational> {
    (1i64..=11, 2i64..=13).prop_filter_map("need 0 < q < 1", |(n, d)| {
        if n >= d {
            return None;
        }
        Some(rat(n, d))
    })
}

fn arb_character() -> impl Strategy<Value = DirichletCharacter> {
    prop_oneof![
        Just(DirichletCharacter::principal(1).unwrap()),
        Just(DirichletCharacter::principal(3).unwrap()),
        Just(DirichletCharacter::quadratic(3).unwrap()),
        Just(DirichletCharacter::quadratic(5).unwrap()),
        Just(DirichletCharacter::quadratic(7).unwrap()),
    ]
}

fn arb_params() -> impl Strategy<Value = EulerParams> {
    (-2i64..=3, 1u32..=3).prop_map(|(h, r)| EulerParams { h, r })
}

fn odd_weight() -> impl Strategy<Value = u32> {
    prop_oneof![Just(1u32), Just(3), Just(5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// [x+y] = [x] + q^x [y] for integer arguments.
    #[test]
    fn q_number_addition_law(q in arb_q(), x in -5i64..=5, y in -5i64..=5) {
        let ctx = QContext::exact(q).unwrap();
        let lhs = ctx.q_number_int(x + y);
        let rhs = ctx
            .q_number_int(x)
            .add(&ctx.q_pow(x).mul(&ctx.q_number_int(y)));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    /// q^(a+b) = q^a q^b on the exponent lattice.
    #[test]
    fn q_pow_is_a_homomorphism(q in arb_q(), w in 1u32..=5, a in -40i64..=40, b in -40i64..=40) {
        let ctx = QContext::exact(q).unwrap().power_base(w);
        let la = rat(a, w as i64);
        let lb = rat(b, w as i64);
        let lhs = ctx.q_pow_rational(&(la.clone() + lb.clone())).unwrap();
        let rhs = ctx
            .q_pow_rational(&la)
            .unwrap()
            .mul(&ctx.q_pow_rational(&lb).unwrap());
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    /// The factored power sum must agree with the literal cube exactly.
    #[test]
    fn power_sum_forms_agree(
        q in arb_q(),
        chi in arb_character(),
        params in arb_params(),
        w in 1u32..=6,
        n in 0u32..=4,
        pick in 0u32..=4,
    ) {
        let i = pick.min(n);
        let ctx = QContext::exact(q).unwrap();
        let a = power_sum_naive(n, i, w, &chi, params, &ctx).unwrap();
        let b = power_sum_factored(n, i, w, &chi, params, &ctx).unwrap();
        prop_assert!(a.sub(&b).is_zero());
    }

    /// The expansion of E_n(x + y) in powers of [x] matches a direct
    /// evaluation at the shifted argument.
    #[test]
    fn addition_matches_shifted_argument(
        q in arb_q(),
        chi in arb_character(),
        params in arb_params(),
        n in 0u32..=4,
        x in 0i64..=2,
        y in 0i64..=2,
    ) {
        let ctx = QContext::exact(q).unwrap();
        let direct = euler_poly(n, &int(x + y), &chi, params, &ctx).unwrap();
        let expanded = addition_expand(n, &int(x), &int(y), &chi, params, &ctx).unwrap();
        prop_assert!(direct.sub(&expanded).is_zero());
    }

    /// Umbral, addition and reflection checks pass at random points.
    #[test]
    fn single_weight_identities_hold(
        q in arb_q(),
        chi in arb_character(),
        params in arb_params(),
        m in 0u32..=3,
        n in 0u32..=3,
        x in 0i64..=2,
        y in 0i64..=2,
    ) {
        let ctx = QContext::exact(q).unwrap();
        let u = check_umbral(n, &int(x), &chi, params, &ctx, None).unwrap();
        prop_assert!(u.passed, "umbral failed: {:?}", u.params);
        let a = check_addition(n, &int(x), &int(y), &chi, params, &ctx, None).unwrap();
        prop_assert!(a.passed, "addition failed: {:?}", a.params);
        let f = check_reflection(m, n, &int(x), &int(y), &chi, params, &ctx, None).unwrap();
        prop_assert!(f.passed, "reflection failed: {:?}", f.params);
    }
}

proptest! {
    // The two-weight sweeps cost more per case; fewer cases suffice
    // because every case exercises a full double grid point.
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Both two-weight symmetries hold, with residual exactly zero, and
    /// swapping the weights swaps the sides.
    #[test]
    fn two_weight_symmetries_hold(
        q in arb_q(),
        chi in arb_character(),
        params in arb_params(),
        n in 0u32..=4,
        x in 0i64..=2,
        w1 in odd_weight(),
        w2 in odd_weight(),
    ) {
        let ctx = QContext::exact(q).unwrap();
        let d = check_distribution_symmetry(n, &int(x), w1, w2, &chi, params, &ctx, None).unwrap();
        prop_assert!(d.passed, "distribution symmetry failed: {:?}", d.params);
        prop_assert!(d.residual.as_ref().unwrap().is_zero());
        let p = check_power_sum_symmetry(n, &int(x), w1, w2, &chi, params, &ctx, None).unwrap();
        prop_assert!(p.passed, "power sum symmetry failed: {:?}", p.params);
        prop_assert!(p.residual.as_ref().unwrap().is_zero());

        let d_swapped =
            check_distribution_symmetry(n, &int(x), w2, w1, &chi, params, &ctx, None).unwrap();
        prop_assert!(d.lhs.as_ref().unwrap().sub(d_swapped.rhs.as_ref().unwrap()).is_zero());
        prop_assert!(d.rhs.as_ref().unwrap().sub(d_swapped.lhs.as_ref().unwrap()).is_zero());
    }

    /// Exact and numeric modes compute the same polynomial values.
    #[test]
    fn numeric_mode_tracks_exact_mode(
        q in arb_q_pos(),
        chi in arb_character(),
        params in arb_params(),
        n in 0u32..=4,
        x in 0i64..=2,
    ) {
        let exact_ctx = QContext::exact(q.clone()).unwrap();
        let numeric_ctx = QContext::numeric_default(q).unwrap();
        let exact = euler_poly(n, &int(x), &chi, params, &exact_ctx).unwrap();
        let numeric = euler_poly(n, &int(x), &chi, params, &numeric_ctx).unwrap();
        let diff = numeric.sub(&numeric_ctx.embed(exact.as_rational().unwrap()));
        let err = diff.abs_float(numeric_ctx.precision());
        // 256-bit arithmetic on these small grids leaves hundreds of
        // guard bits; 2^-180 is far below any honest rounding cloud.
        prop_assert!(err.is_zero() || err.msb() < -180, "|diff| msb = {}", err.msb());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// chi(ab) = chi(a) chi(b) for every enumerated character, in exact
    /// root-of-unity arithmetic.
    #[test]
    fn characters_are_multiplicative(
        d in prop_oneof![Just(9u32), Just(15), Just(21), Just(27)],
        which in any::<prop::sample::Index>(),
        a in 1u64..=200,
        b in 1u64..=200,
    ) {
        let ctx = QContext::numeric_default(rat(1, 2)).unwrap();
        let chars = DirichletCharacter::enumerate(d, &ctx).unwrap();
        let chi = which.get(&chars);
        let lhs = chi.value(a * b);
        let rhs = chi.value(a).mul(chi.value(b));
        prop_assert_eq!(lhs.clone(), rhs);
    }

    /// The classical limit polynomial is independent of q wiring: it
    /// only sees the character and the order.
    #[test]
    fn classical_poly_ignores_q(
        chi in arb_character(),
        r in 1u32..=3,
        n in 0u32..=5,
        x in 0i64..=3,
    ) {
        let c1 = QContext::exact(rat(1, 2)).unwrap();
        let c2 = QContext::exact(rat(-3, 7)).unwrap();
        let a = classical_euler_poly(n, &int(x), &chi, r, &c1).unwrap();
        let b = classical_euler_poly(n, &int(x), &chi, r, &c2).unwrap();
        prop_assert!(a.sub(&b).is_zero());
    }
}

fn euler_phi(d: u32) -> usize {
    (1..=d).filter(|a| num_integer::gcd(*a, d) == 1).count()
}

/// The enumerated character family is the full dual group: right size,
/// contains the principal character, and closed under products.
#[test]
fn character_family_is_a_group() {
    let ctx = QContext::numeric_default(rat(1, 2)).unwrap();
    for d in [1u32, 3, 5, 9, 15, 21] {
        let chars = DirichletCharacter::enumerate(d, &ctx).unwrap();
        assert_eq!(chars.len(), euler_phi(d), "wrong family size for d = {}", d);
        assert!(chars.iter().any(|c| c.is_principal()));
        for a in &chars {
            for b in &chars {
                let ab = a.product(b).unwrap();
                assert!(
                    chars.iter().any(|c| c.values() == ab.values()),
                    "product left the family for d = {}",
                    d
                );
            }
        }
    }
}

/// Quadratic characters really are the Legendre symbol: nonzero on
/// units, -1 exactly on the non-residues, and period p.
#[test]
fn quadratic_character_is_legendre() {
    for p in [3u32, 5, 7, 11] {
        let chi = DirichletCharacter::quadratic(p).unwrap();
        let squares: Vec<u64> = (1..p as u64).map(|a| a * a % p as u64).collect();
        for a in 0..(3 * p as u64) {
            let expected = if a % p as u64 == 0 {
                CharValue::Zero
            } else if squares.contains(&(a % p as u64)) {
                CharValue::one()
            } else {
                CharValue::minus_one()
            };
            assert_eq!(*chi.value(a), expected, "chi_{}({})", p, a);
        }
    }
}

/// Power sums with zero weight span: S over w = 1 collapses to the
/// j = 0 term, so only i = 0 survives and equals chi(0)-weighted 1.
#[test]
fn power_sum_weight_one_collapses() {
    let ctx = QContext::exact(rat(2, 5)).unwrap();
    let chi = DirichletCharacter::principal(1).unwrap();
    let params = EulerParams { h: 2, r: 3 };
    // Single tuple j = (0,..,0): [0]^i is 0^i, so i > 0 vanishes and
    // i = 0 gives 1.
    let s0 = power_sum_naive(3, 0, 1, &chi, params, &ctx).unwrap();
    assert!(s0.sub(&ctx.one()).is_zero());
    for i in 1..=3 {
        let si = power_sum_naive(3, i, 1, &chi, params, &ctx).unwrap();
        assert!(si.is_zero(), "i = {} should vanish", i);
    }
}

/// Scalar equality is relative: values agreeing to the tolerance pass,
/// values differing by more fail.
#[test]
fn numeric_equality_is_relative() {
    let tol = rat(1, 1_000_000);
    let ctx = QContext::numeric(rat(1, 3), 128, tol).unwrap();
    let one = ctx.one();
    let close = ctx.embed(&(BigRational::one() + rat(1, 10_000_000)));
    let far = ctx.embed(&(BigRational::one() + rat(1, 1_000)));
    assert!(ctx.eq_scalars(&one, &close).unwrap());
    assert!(!ctx.eq_scalars(&one, &far).unwrap());
    // Relative scaling: the same absolute gap passes at large magnitude.
    let big = ctx.embed(&int(10_000_000));
    let big_close = ctx.embed(&(int(10_000_000) + rat(1, 1_000)));
    assert!(ctx.eq_scalars(&big, &big_close).unwrap());
}

/// Exact-mode comparisons tolerate nothing.
#[test]
fn exact_equality_is_strict() {
    let ctx = QContext::exact(rat(1, 3)).unwrap();
    let a = ctx.one();
    let b = ctx.embed(&(BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(10).pow(40))));
    assert!(!ctx.eq_scalars(&a, &b).unwrap());
    assert!(ctx.eq_scalars(&a, &ctx.one()).unwrap());
}

/// An evaluation error must not poison unrelated arguments: after a
/// rejected off-lattice x the evaluator still answers on-lattice ones.
#[test]
fn evaluator_survives_rejected_arguments() {
    let ctx = QContext::exact(rat(1, 2)).unwrap();
    let chi = DirichletCharacter::quadratic(3).unwrap();
    let params = EulerParams { h: 1, r: 1 };
    let mut ev = qeuler::EulerEvaluator::new(&ctx, &chi, params).unwrap();
    assert!(ev.eval(2, &rat(1, 3)).is_err());
    let ok = ev.eval(2, &int(1)).unwrap();
    let fresh = euler_poly(2, &int(1), &chi, params, &ctx).unwrap();
    assert!(ok.sub(&fresh).is_zero());
}

/// Scalars render the way the reports promise: exact values as reduced
/// fractions that round-trip through parsing.
#[test]
fn exact_render_round_trips() {
    let ctx = QContext::exact(rat(2, 3)).unwrap();
    let chi = DirichletCharacter::quadratic(5).unwrap();
    let params = EulerParams { h: 3, r: 2 };
    for n in 0..=5u32 {
        let v = euler_poly(n, &int(2), &chi, params, &ctx).unwrap();
        let rendered = v.render(0);
        let parsed: BigRational = rendered.parse().unwrap();
        match v {
            Scalar::Rational(r) => assert_eq!(parsed, r),
            Scalar::Complex(_) => panic!("exact mode produced a float"),
        }
    }
}
