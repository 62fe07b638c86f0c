use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;

fn float_sig2(a: &SeifertMatrix, theta: f64) -> i64 {
    let (c, s) = (theta.cos(), theta.sin());
    let entry = |i: usize, j: usize| {
        let (x, y) = (a.entry(i, j) as f64, a.entry(j, i) as f64);
        ((1.0 - c) * (x + y), -s * x + s * y)
    };
    let (m00, _) = entry(0, 0);
    let (m11, _) = entry(1, 1);
    let (re, im) = entry(0, 1);
    let det = m00 * m11 - (re * re + im * im);
    let tr = m00 + m11;
    if det > 0.0 {
        2 * tr.signum() as i64
    } else {
        0
    }
}

/// Floating-point σ_K(e^{iθ}) straight from the definition, cables via θ ↦ rθ.
fn float_sigma(k: &FormalKnot, theta: f64) -> i64 {
    k.atoms()
        .iter()
        .map(|a| a.sign as i64 * float_sig2(&a.base, a.cable as f64 * theta))
        .sum()
}

fn in_orbit(theta: f64, lo: f64, hi: f64) -> bool {
    let x = theta.rem_euclid(2.0 * PI);
    let folded = if x > PI { 2.0 * PI - x } else { x };
    let folded = if folded > PI / 2.0 {
        PI - folded
    } else {
        folded
    };
    folded > lo && folded < hi
}

fn jump_angles(k: &FormalKnot) -> Vec<f64> {
    signature_profile(k)
        .unwrap()
        .jumps()
        .iter()
        .map(|j| j.angle_f64())
        .collect()
}

fn f(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

#[test]
fn narrow_window_example_is_out_of_reach() {
    // no twist jump lies in (π/4, π/3), so nothing localizes around π/4
    let spec = BumpSpec::new(q(1, 3), q(1, 4)).unwrap();
    let err = make_bump(&spec, 8, 1, SearchBounds::default()).unwrap_err();
    assert!(
        matches!(err, ForgeError::Exhausted { n_max: 2048, .. }),
        "{err}"
    );
}

#[test]
fn bump_is_localized() {
    for (prev, d) in [(4, 16), (16, 64)] {
        let spec = BumpSpec::for_family(prev, d).unwrap();
        let k = make_bump(&spec, d, 1, SearchBounds::default()).unwrap();
        let target = 2.0 * PI / d as f64;
        assert!(float_sigma(&k, target) > 0);
        let (lo, hi) = (f(spec.theta1()) * PI / 3.0, f(spec.theta0()) * PI);
        let jumps = jump_angles(&k);
        let n = 40_000;
        for i in 0..n {
            let theta = 2.0 * PI * (i as f64 + 0.5) / n as f64;
            if jumps.iter().any(|j| (j - theta).abs() < 1e-9) || in_orbit(theta, lo, hi) {
                continue;
            }
            assert_eq!(float_sigma(&k, theta), 0, "d = {d}, θ = {theta}");
        }
        assert!(support_in_window(&k, &spec, Precision::default()).unwrap());
        assert!(integral_sigma(&k).unwrap().is_zero());
        assert_eq!(
            sigma_table(&k, d, &SigmaOptions::default()).unwrap()[0].value,
            0
        );
    }
}

#[test]
fn bump_integral_by_quadrature() {
    let spec = BumpSpec::for_family(4, 16).unwrap();
    let k = make_bump(&spec, 16, 1, SearchBounds::default()).unwrap();
    let n = 200_000;
    let h = 2.0 * PI / n as f64;
    let sum: f64 = (0..n)
        .map(|i| float_sigma(&k, h * (i as f64 + 0.5)) as f64 * h)
        .sum();
    assert!(sum.abs() < 1e-3, "{sum}");
}

#[test]
fn target_outside_window() {
    let spec = BumpSpec::for_family(4, 16).unwrap();
    assert!(matches!(
        make_bump(&spec, 16, 3, SearchBounds::default()),
        Err(ForgeError::TargetOutsideWindow { .. })
    ));
    assert!(BumpSpec::new(q(1, 2), q(1, 4)).is_err());
    assert!(BumpSpec::new(q(1, 5), q(1, 4)).is_err());
}

#[test]
fn tight_bounds_report_the_lattice() {
    let spec = BumpSpec::for_family(16, 64).unwrap();
    let err = make_bump(
        &spec,
        64,
        1,
        SearchBounds {
            n_max: 64,
            r_max: 64,
        },
    )
    .unwrap_err();
    match err {
        ForgeError::Exhausted { n_max, .. } => assert_eq!(n_max, 64),
        e => panic!("{e}"),
    }
}

#[test]
fn orders_follow_the_recipe() {
    assert_eq!(family_orders(2, 4, 4).unwrap(), vec![4, 16, 64, 256]);
    assert_eq!(family_orders(3, 3, 9).unwrap(), vec![9, 81, 729]);
    assert!(matches!(
        family_orders(2, 3, 2),
        Err(ForgeError::BadSeed(2))
    ));
    assert!(matches!(
        family_orders(2, 3, 12),
        Err(ForgeError::BadSeed(12))
    ));
    assert!(matches!(
        family_orders(4, 3, 16),
        Err(ForgeError::NotPrime(4))
    ));
    for w in family_orders(2, 6, 8).unwrap().windows(2) {
        assert!(w[1] > 3 * w[0]);
    }
}

#[test]
fn family_of_three_passes() {
    let fam = build_family(2, 3, 4).unwrap();
    assert_eq!(fam.orders(), vec![4, 16, 64]);
    let report = verify_family(&fam);
    assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    assert_eq!(report.table.len(), 3 * (4 + 16 + 64));
    for e in &fam.entries {
        assert_eq!(arf(&e.knot), 0);
    }
    // property (2) against the floating-point definition
    for (j, ej) in fam.entries.iter().enumerate() {
        for ei in &fam.entries[..j] {
            for s in 0..ei.d {
                let theta = 2.0 * PI * s as f64 / ei.d as f64;
                assert_eq!(float_sigma(&ej.knot, theta), 0);
            }
        }
        let theta = 2.0 * PI / ej.d as f64;
        assert!(float_sigma(&ej.knot, theta) > 0);
    }
}

#[test]
fn family_is_deterministic() {
    let a = build_family(2, 2, 4).unwrap();
    let b = build_family(2, 2, 4).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn odd_prime_family() {
    let fam = build_family(3, 2, 9).unwrap();
    let report = verify_family(&fam);
    assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn trefoil_replacement_fails() {
    let mut fam = build_family(2, 2, 4).unwrap();
    fam.entries[0].knot = FormalKnot::trefoil();
    let report = verify_family(&fam);
    assert!(!report.passed);
    let failed: Vec<Property> = report.failures().map(|c| c.property).collect();
    assert!(failed.contains(&Property::Integral));
    assert!(failed.contains(&Property::Positivity));
}

#[test]
fn out_of_order_family_fails() {
    let mut fam = build_family(2, 2, 4).unwrap();
    fam.entries.swap(0, 1);
    let report = verify_family(&fam);
    assert!(report.failures().any(|c| c.property == Property::Orders));
}

#[test]
fn empty_family_is_vacuous() {
    let report = verify_family(&KnotFamily::empty(2));
    assert!(report.passed);
    assert!(report.table.is_empty());
}

proptest! {
    #[test]
    fn window_chain_holds(a in 2u32..8, gap in 2u32..4) {
        let prev = 1u64 << a;
        let d = prev << gap;
        let spec = BumpSpec::for_family(prev, d).unwrap();
        let eps = spec.epsilon(spec.theta1()).unwrap();
        // ε < min(θ₀ - θ₁, θ₁/3)
        prop_assert!(eps < (spec.theta0() - spec.theta1()).min(spec.theta1() / q(3, 1)));
        let t = spec.theta1();
        prop_assert!(spec.theta1() / q(3, 1) < (t - &eps) / q(2, 1));
        prop_assert!(t + &eps < *spec.theta0());
    }
}
