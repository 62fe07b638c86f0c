use super::*;
use proptest::prelude::*;

fn field(d: u64) -> Arc<CyclotomicField> {
    CyclotomicField::new(d).unwrap()
}

fn int(f: &Arc<CyclotomicField>, n: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_integer(f, n)
}

fn z(f: &Arc<CyclotomicField>, k: i64) -> CyclotomicNumber {
    CyclotomicNumber::zeta_pow(f, k)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
    assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
    assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
    assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
    assert_eq!(cyclotomic_polynomial(8), ints(&[1, 0, 0, 0, 1]));
    assert_eq!(cyclotomic_polynomial(9), ints(&[1, 0, 0, 1, 0, 0, 1]));
    assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    for d in 1..60 {
        assert_eq!(
            cyclotomic_polynomial(d).len() as u64 - 1,
            totient(d),
            "d={d}"
        );
    }
}

#[test]
fn prime_power_detection() {
    assert_eq!(prime_power(8), Some((2, 3)));
    assert_eq!(prime_power(9), Some((3, 2)));
    assert_eq!(prime_power(7), Some((7, 1)));
    assert_eq!(prime_power(12), None);
    assert_eq!(prime_power(1), None);
}

#[test]
fn zeta4_squared_is_minus_one() {
    let f = field(4);
    assert_eq!(&z(&f, 1) * &z(&f, 1), int(&f, -1));
}

#[test]
fn conj_zeta8_times_zeta8_is_one() {
    let f = field(8);
    let w = z(&f, 1);
    assert!((&w.conj() * &w).is_one());
    assert_eq!(w.conj(), z(&f, -1));
}

#[test]
fn norm_of_one_minus_i() {
    let f = field(4);
    let one = int(&f, 1);
    let x = &(&one - &z(&f, 1)) * &(&one - &z(&f, -1));
    assert_eq!(x, int(&f, 2));
    // oracle: |1 - i|^2 in floating point
    let c = (1.0f64 - 0.0, -1.0f64);
    assert!(((c.0 * c.0 + c.1 * c.1) - 2.0).abs() < 1e-12);
    assert!((approx_real(&x, 1) - 2.0).abs() < 1e-12);
}

#[test]
fn sign_of_zero_and_vanishing_trace() {
    let f = field(4);
    assert_eq!(certified_sign(&CyclotomicNumber::zero(&f), 1).unwrap(), 0);
    let t = &z(&f, 1) + &z(&f, -1);
    assert!(t.is_zero());
    assert_eq!(certified_sign(&t, 1).unwrap(), 0);
}

#[test]
fn two_plus_twice_cos_three_pi_over_four() {
    let f = field(8);
    let x = &(&int(&f, 2) + &z(&f, 1)) + &z(&f, -1);
    assert_eq!(certified_sign(&x, 3).unwrap(), 1);
    // at s = 3 the value is 2 - sqrt 2; check the 64-bit enclosure agrees
    let (lo, hi) = x.enclose(3, 64);
    let expect = 2.0 - 2f64.sqrt();
    assert!(lo.to_f64().unwrap() <= expect + 1e-15 && expect - 1e-15 <= hi.to_f64().unwrap());
    assert_eq!(certified_sign(&x, 1).unwrap(), 1);
    // 1 + ζ + ζ⁻¹ = 1 - √2 at s = 3
    let y = &(&int(&f, 1) + &z(&f, 1)) + &z(&f, -1);
    assert_eq!(certified_sign(&y, 3).unwrap(), -1);
    assert_eq!(certified_sign(&y, 1).unwrap(), 1);
}

#[test]
fn errors_are_explicit() {
    let f4 = field(4);
    let f8 = field(8);
    assert_eq!(
        z(&f4, 1).try_add(&z(&f8, 1)),
        Err(CycloError::FieldMismatch(4, 8))
    );
    assert_eq!(
        int(&f4, 1).try_div(&CyclotomicNumber::zero(&f4)),
        Err(CycloError::DivisionByZero)
    );
    assert_eq!(certified_sign(&z(&f4, 1), 1), Err(CycloError::NotReal));
    assert_eq!(
        certified_sign(&int(&f8, 1), 2),
        Err(CycloError::BadEmbedding { d: 8, s: 2 })
    );
    assert!(CyclotomicField::new(0).is_err());
}

#[test]
fn precision_cap_is_loud() {
    let f = field(8);
    let big = &(&z(&f, 1) + &z(&f, -1))
        - &CyclotomicNumber::from_rational(
            &f,
            &(BigRational::from_integer(BigInt::from(1))
                + BigRational::new(
                    BigInt::from(4142135623730950u64),
                    BigInt::from(10u64).pow(16),
                )
                + BigRational::new(
                    BigInt::from(4880168872420969u64),
                    BigInt::from(10u64).pow(32),
                )),
        );
    // √2 minus a 32-digit truncation of √2 is about 8e-33: invisible at 64 bits
    assert_eq!(
        certified_sign_with(&big, 1, Precision { max_bits: 64 }),
        Err(CycloError::PrecisionExhausted(64))
    );
    assert_eq!(certified_sign(&big, 1), Ok(1));
}

#[test]
fn inverse_roundtrip_small() {
    for d in [3u64, 4, 5, 8, 9, 12, 16] {
        let f = field(d);
        let x = &(&int(&f, 3) + &z(&f, 1)) - &z(&f, 2).scale_int(2);
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one(), "d={d}");
    }
}

fn arb_element(d: u64) -> impl Strategy<Value = CyclotomicNumber> {
    let n = totient(d) as usize;
    proptest::collection::vec((-20i64..20, 1i64..6), n).prop_map(move |cs| {
        let f = field(d);
        let q: Vec<BigRational> = cs
            .into_iter()
            .map(|(a, b)| BigRational::new(a.into(), b.into()))
            .collect();
        CyclotomicNumber::from_power_coefficients(&f, &q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conj_is_involutive_ring_hom(x in arb_element(16), y in arb_element(16)) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
    }

    #[test]
    fn inverse_is_inverse(x in arb_element(9)) {
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inverse().unwrap()).is_one());
    }

    #[test]
    fn sign_is_multiplicative(x in arb_element(8), y in arb_element(8), s in prop::sample::select(vec![1i64, 3, 5, 7])) {
        let a = &x + &x.conj();
        let b = &y + &y.conj();
        let sa = certified_sign(&a, s).unwrap();
        let sb = certified_sign(&b, s).unwrap();
        prop_assert_eq!(certified_sign(&(&a * &b), s).unwrap(), sa * sb);
        prop_assert_eq!(sa == 0, a.is_zero());
    }

    #[test]
    fn enclosures_nest(x in arb_element(12), k in 6u32..9) {
        let a = &x + &x.conj();
        let prec = 1u32 << k;
        let (lo1, hi1) = a.enclose(1, prec);
        let (lo2, hi2) = a.enclose(1, 2 * prec);
        prop_assert!(lo1 <= lo2 && hi2 <= hi1);
    }
}

#[test]
fn canonical_form_is_idempotent() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let d = [4u64, 8, 9, 16, 12][i % 5];
        let f = field(d);
        let len = rng.gen_range(1..(2 * d as usize));
        let raw: Vec<BigInt> = (0..len)
            .map(|_| BigInt::from(rng.gen_range(-9i64..10)))
            .collect();
        let den = BigInt::from(rng.gen_range(1i64..7));
        let once = CyclotomicNumber::from_parts(f.clone(), raw, den);
        let twice = CyclotomicNumber::from_parts(f.clone(), once.num.clone(), once.den.clone());
        assert_eq!(once, twice);
        assert_eq!(once.num.len(), totient(d) as usize);
    }
}
