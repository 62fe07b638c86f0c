use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::cyclo::matrix::CMatrix;
use crate::cyclo::{CyclotomicField, CyclotomicNumber};
use crate::seifert::{omega_signature, SeifertMatrix};

fn field(d: u64) -> Arc<CyclotomicField> {
    CyclotomicField::new(d).unwrap()
}

fn int(f: &Arc<CyclotomicField>, k: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_integer(f, k)
}

fn rat(a: i64) -> BigRational {
    BigRational::from_integer(a.into())
}

fn check_congruence(form: &HermitianForm) -> Diagonalization {
    let dg = diagonalize(form);
    let t = &dg.transform;
    let got = t.conj_transpose().mul(form.matrix()).mul(t);
    let n = form.size();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j && i < dg.diagonal.len() {
                dg.diagonal[i].clone()
            } else {
                CyclotomicNumber::zero(form.field())
            };
            assert_eq!(got.get(i, j), &want, "entry ({i},{j})");
        }
    }
    dg
}

#[test]
fn zero_form_is_radical() {
    let f = field(4);
    let form = HermitianForm::new(&f, CMatrix::zeros(&f, 2)).unwrap();
    let dg = check_congruence(&form);
    assert!(dg.diagonal.is_empty());
    assert_eq!(dg.radical, 2);
}

#[test]
fn one_elimination_step() {
    let f = field(4);
    let i = CyclotomicNumber::zeta_pow(&f, 1);
    let one = int(&f, 1);
    let form = HermitianForm::from_rows(
        &f,
        vec![vec![int(&f, 2), &one - &i], vec![&one + &i, int(&f, 2)]],
    )
    .unwrap();
    let dg = check_congruence(&form);
    assert_eq!(dg.diagonal, vec![int(&f, 2), int(&f, 1)]);
    // determinant 4 - |1+i|² = 2 equals the product of the pivots
    assert_eq!(&dg.diagonal[0] * &dg.diagonal[1], int(&f, 2));
}

#[test]
fn hyperbolic_plane_is_witt_trivial() {
    for d in [1, 2, 3, 4, 5, 8, 12] {
        let f = field(d);
        let h = HermitianForm::hyperbolic(&f);
        let dg = check_congruence(&h);
        assert_eq!(dg.diagonal.len(), 2);
        let w = witt_invariants(&h).unwrap();
        assert!(w.signatures.values().all(|&v| v == 0), "d = {d}");
        assert!(w.disc().unwrap().is_norm(), "d = {d}: {:?}", w.disc);
        assert!(w.is_trivial());
    }
}

#[test]
fn small_diagonal_classes() {
    let f = field(4);
    let w1 = witt_invariants(&HermitianForm::diagonal(&f, &[int(&f, 1)]).unwrap()).unwrap();
    assert_eq!(w1.signatures.get(&1), Some(&1));
    assert!(w1.disc().unwrap().is_norm());
    assert_eq!(w1.rank_mod_2, Some(1));

    let w3 = witt_invariants(&HermitianForm::diagonal(&f, &[int(&f, 3)]).unwrap()).unwrap();
    assert_eq!(
        w3.disc().unwrap(),
        &Disc::Gaussian(GaussianDisc {
            negative: false,
            primes: vec![3],
            two_odd: false
        })
    );
    assert_eq!(
        hilbert_symbol(&rat(3), &rat(-1), Place::Prime(3)).unwrap(),
        -1
    );
    // -1 is not a square mod 3
    assert!((0..3).all(|x| (x * x + 1) % 3 != 0));

    // 2 and 5 are norms from Q(i), 6 is not
    let w = witt_invariants(&HermitianForm::diagonal(&f, &[int(&f, 10)]).unwrap()).unwrap();
    assert!(w.disc().unwrap().is_norm());
    let w = witt_invariants(&HermitianForm::diagonal(&f, &[int(&f, 6)]).unwrap()).unwrap();
    assert!(!w.disc().unwrap().is_norm());
}

#[test]
fn rational_disc_is_squarefree() {
    let f = field(2);
    let form = HermitianForm::diagonal(&f, &[int(&f, 12), int(&f, -5)]).unwrap();
    // (-1)^1 · 12 · (-5) = 60 ~ 15
    assert_eq!(
        witt_invariants(&form).unwrap().disc().unwrap(),
        &Disc::Rational { value: 15.into() }
    );
}

#[test]
fn hilbert_examples() {
    assert_eq!(
        hilbert_symbol(&rat(-1), &rat(-1), Place::Prime(2)).unwrap(),
        -1
    );
    assert_eq!(
        hilbert_symbol(&rat(2), &rat(-1), Place::Prime(2)).unwrap(),
        1
    );
    // exhibited solution of z² = 2x² - y²
    assert_eq!(2 * 1 * 1 - 1 * 1, 1 * 1);
    assert_eq!(
        hilbert_symbol(&rat(-1), &rat(-1), Place::Infinity).unwrap(),
        -1
    );
    assert!(matches!(
        hilbert_symbol(&rat(0), &rat(1), Place::Infinity),
        Err(WittError::ZeroArgument)
    ));
    assert!(matches!(
        hilbert_symbol(&rat(3), &rat(1), Place::Prime(9)),
        Err(WittError::NotPrime(9))
    ));
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(
        hilbert_symbol(&half, &rat(-1), Place::Prime(2)).unwrap(),
        hilbert_symbol(&rat(2), &rat(-1), Place::Prime(2)).unwrap()
    );
}

/// `(a, b)_p = 1` iff `z² = a x² + b y²` has a primitive solution modulo a
/// high enough power of `p`.
fn brute_hilbert(a: i64, b: i64, p: i64) -> i8 {
    let m = if p == 2 { 32 } else { p * p };
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if x % p == 0 && y % p == 0 && z % p == 0 {
                    continue;
                }
                if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                    return 1;
                }
            }
        }
    }
    -1
}

#[test]
fn hilbert_matches_brute_force() {
    let vals = [-6, -5, -3, -2, -1, 1, 2, 3, 5, 6];
    for p in [2, 3, 5, 7] {
        for &a in &vals {
            for &b in &vals {
                let got = hilbert_symbol(&rat(a), &rat(b), Place::Prime(p as u64)).unwrap();
                assert_eq!(got, brute_hilbert(a, b, p), "({a},{b})_{p}");
            }
        }
    }
}

fn primes_of(n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[test]
fn lambda_one_at_trivial_character_vanishes() {
    let a = SeifertMatrix::trefoil();
    let form = lambda_block(&a, 1, 1, 0).unwrap();
    assert!(form.matrix().rows().iter().flatten().all(|x| x.is_zero()));
    assert!(witt_invariants(&form).unwrap().is_trivial());
}

#[test]
fn lambda_one_at_i_matches_omega_signature() {
    let a = SeifertMatrix::trefoil();
    let w = witt_invariants(&lambda_block(&a, 1, 4, 1).unwrap()).unwrap();
    assert_eq!(w.signature(), -2);
    assert_eq!(w.signature(), omega_signature(&a, 4, 1).unwrap().value);
}

/// Σ over `ξ^r = ζ_d^t` of `σ_A(ξ)`.
fn sigma_sum(a: &SeifertMatrix, r: u64, d: u64, t: i64) -> i64 {
    (0..r as i64)
        .map(|k| omega_signature(a, d * r, t + d as i64 * k).unwrap().value)
        .sum()
}

#[test]
fn lambda_three_at_one_for_trefoil() {
    // the trivial-character baseline is not Witt-trivial
    let a = SeifertMatrix::trefoil();
    let w = witt_invariants(&lambda_block(&a, 3, 1, 0).unwrap()).unwrap();
    assert_eq!(w.signature(), -4);
    assert_eq!(sigma_sum(&a, 3, 1, 0), -4);
    assert!(!w.is_trivial());
}

#[test]
fn lambda_blocks_are_hermitian_for_all_r() {
    let a = SeifertMatrix::twist(2);
    for r in 1..6 {
        let form = lambda_block(&a, r, 8, 3).unwrap();
        assert_eq!(form.size(), 2 * r);
    }
    assert!(matches!(
        lambda_block(&a, 0, 8, 3),
        Err(WittError::BadCable)
    ));
}

#[test]
fn sum_with_negative_is_trivial_beyond_gaussian_orders() {
    let f = field(12);
    let real = &CyclotomicNumber::zeta_pow(&f, 1) + &CyclotomicNumber::zeta_pow(&f, -1);
    let entries = vec![int(&f, 21), &int(&f, 2) + &real, int(&f, -9)];
    let neg: Vec<_> = entries.iter().map(|x| -x).collect();
    let x = HermitianForm::diagonal(&f, &entries).unwrap();
    let y = HermitianForm::diagonal(&f, &neg).unwrap();
    let w = witt_invariants(&x.orthogonal_sum(&y).unwrap()).unwrap();
    assert_eq!(w.rank, Some(6));
    assert!(w.is_trivial());
    // a rational square class reduces to 1
    let sq = witt_invariants(&HermitianForm::diagonal(&f, &[int(&f, 9)]).unwrap()).unwrap();
    assert_eq!(sq.disc, Some(Disc::Field { value: int(&f, 1) }));
}

fn seifert_strategy() -> impl Strategy<Value = SeifertMatrix> {
    prop_oneof![
        (-3i64..6).prop_map(SeifertMatrix::twist),
        (-3i64..4, -3i64..4, -3i64..4).prop_map(|(a, b, c)| {
            SeifertMatrix::new(vec![vec![a, b], vec![b - 1, c]]).unwrap()
        }),
        ((-2i64..4), (-2i64..4)).prop_map(|(m, n)| SeifertMatrix::twist(m).block_sum(&SeifertMatrix::twist(n).mirror())),
    ]
}

fn form_strategy() -> impl Strategy<Value = HermitianForm> {
    (prop::sample::select(vec![1u64, 2, 3, 4, 5, 8]), 1usize..4)
        .prop_flat_map(|(d, n)| {
            let deg = crate::cyclo::totient(d) as usize;
            (
                Just(d),
                Just(n),
                prop::collection::vec(-4i64..5, n),
                prop::collection::vec(prop::collection::vec(-2i64..3, deg), n * n),
            )
        })
        .prop_map(|(d, n, diag, off)| {
            let f = field(d);
            let deg = crate::cyclo::totient(d) as usize;
            let elem = |c: &Vec<i64>| {
                CyclotomicNumber::from_power_coefficients(
                    &f,
                    &c[..deg].iter().map(|&k| rat(k)).collect::<Vec<_>>(),
                )
            };
            let mut m = CMatrix::zeros(&f, n);
            for i in 0..n {
                m.set(i, i, int(&f, diag[i]));
                for j in i + 1..n {
                    let e = elem(&off[i * n + j]);
                    m.set(j, i, e.conj());
                    m.set(i, j, e);
                }
            }
            HermitianForm::new(&f, m).unwrap()
        })
}

const ORDERS: [u64; 10] = [2, 3, 4, 5, 6, 8, 9, 12, 16, 32];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn key_identity(a in seifert_strategy(), di in 0..ORDERS.len(), t in 0i64..64) {
        let d = ORDERS[di];
        let w = witt_invariants(&lambda_block(&a, 1, d, t).unwrap()).unwrap();
        for (s, v) in &w.signatures {
            prop_assert_eq!(*v, omega_signature(&a, d, t * s).unwrap().value);
        }
    }

    #[test]
    fn cabled_block_signature(a in seifert_strategy(), r in 2u64..4, di in 0..4usize, t in 0i64..16) {
        let d = ORDERS[di];
        let w = witt_invariants(&lambda_block(&a, r as usize, d, t).unwrap()).unwrap();
        prop_assert_eq!(w.signature(), sigma_sum(&a, r, d, t));
    }

    #[test]
    fn congruence_is_exact(form in form_strategy()) {
        let dg = check_congruence(&form);
        prop_assert_eq!(dg.diagonal.len() + dg.radical, form.size());
    }

    #[test]
    fn hyperbolic_summand_is_invisible(form in form_strategy()) {
        let h = HermitianForm::hyperbolic(form.field());
        let x = witt_invariants(&form).unwrap();
        let y = witt_invariants(&form.orthogonal_sum(&h).unwrap()).unwrap();
        prop_assert_eq!(&x.signatures, &y.signatures);
        prop_assert_eq!(x.rank_mod_2, y.rank_mod_2);
        if [1, 2, 4].contains(&form.order()) {
            prop_assert_eq!(x.disc, y.disc);
        }
    }

    #[test]
    fn add_and_negate(x in form_strategy(), y in form_strategy()) {
        prop_assume!(x.order() == y.order());
        let f = x.field().clone();
        let wx = witt_invariants(&x).unwrap();
        let wy = witt_invariants(&y).unwrap();
        let sum = witt_add(&wx, &wy).unwrap();
        for (s, v) in &sum.signatures {
            prop_assert_eq!(*v, wx.signatures[s] + wy.signatures[s]);
        }
        prop_assert!(witt_add(&wx, &witt_neg(&wx)).unwrap().is_trivial());
        prop_assert_eq!(witt_neg(&witt_neg(&wx)), wx.clone());
        // disc(x ⊕ y) = (-1)^{kx·ky} disc(x) disc(y), recomputed from diagonals
        if [1, 2, 4].contains(&f.order()) {
            let raw = |w: &WittClass| {
                let diag = w.diagonal.as_ref().unwrap();
                let k = diag.len();
                let mut p = int(&f, if (k * k.saturating_sub(1) / 2) % 2 == 1 { -1 } else { 1 });
                for e in diag {
                    p = &p * e;
                }
                (p, k)
            };
            let (px, kx) = raw(&wx);
            let (py, ky) = raw(&wy);
            let mut prod = &px * &py;
            if (kx * ky) % 2 == 1 {
                prod = -prod;
            }
            let expected = WittClass::from_diagonal(&f, vec![prod], Default::default()).unwrap();
            let direct = witt_invariants(&x.orthogonal_sum(&y).unwrap()).unwrap();
            prop_assert_eq!(direct.disc, expected.disc);
        }
    }

    #[test]
    fn hilbert_reciprocity(a in (-5000i64..5000).prop_filter("nonzero", |a| *a != 0)) {
        let mut places: Vec<Place> = primes_of(2 * a.unsigned_abs()).into_iter().map(Place::Prime).collect();
        places.push(Place::Infinity);
        let prod: i8 = places.iter().map(|&q| hilbert_symbol(&rat(a), &rat(-1), q).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_bilinear(a in 1i64..400, b in 1i64..400, sa in prop::bool::ANY, sb in prop::bool::ANY, q in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let a = if sa { -a } else { a };
        let b = if sb { -b } else { b };
        let m1 = rat(-1);
        let h = |x: i64| hilbert_symbol(&rat(x), &m1, Place::Prime(q)).unwrap();
        prop_assert_eq!(h(a * b), h(a) * h(b));
    }

    #[test]
    fn norms_have_trivial_symbol(x in -30i64..30, y in -30i64..30, q in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19])) {
        prop_assume!(x != 0 || y != 0);
        let n = BigInt::from(x * x + y * y);
        prop_assert_eq!(hilbert_symbol(&BigRational::from_integer(n), &rat(-1), Place::Prime(q)).unwrap(), 1);
    }
}
