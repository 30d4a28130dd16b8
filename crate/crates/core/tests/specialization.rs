use std::f64::consts::PI;

use num_complex::Complex64;
use polylog_hodge::specfun::{li, EvalConfig};
use polylog_hodge::specialization::{
    ext_class, specialize_pol, specialize_via_splitting, verify_corollary, RootOfUnityPoint, SpecializationError,
};
use proptest::prelude::*;

const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_pi_i_pow(n: u32) -> Complex64 {
    c(0.0, 2.0 * PI).powu(n)
}

#[test]
fn ext_class_examples() {
    for r in [-3.0, 0.25, 10.0] {
        let v = ext_class(1, two_pi_i_pow(1) * r).unwrap();
        assert!(v.representative().norm() < 1e-14);
        assert!(v.equivalent(&ext_class(1, c(0.0, 0.0)).unwrap(), 1e-14).unwrap());
    }
    let l2 = ext_class(1, c(-(2f64.ln()), 0.0)).unwrap();
    assert!((l2.representative() - c(-(2f64.ln()), 0.0)).norm() < 1e-16);
    // n = 2: the quotient line is real, so only Im v matters
    let v = ext_class(2, c(3.0, 0.7)).unwrap();
    assert!((v.representative() - c(0.0, 0.7)).norm() < 1e-16);
    assert!(v.equivalent(&ext_class(2, c(-100.0, 0.7)).unwrap(), 1e-13).unwrap());
    assert!(!v.equivalent(&ext_class(2, c(3.0, 0.8)).unwrap(), 1e-3).unwrap());
    assert_eq!(ext_class(0, c(1.0, 0.0)), Err(SpecializationError::InvalidTwist));
    assert!(matches!(v.distance(&l2), Err(SpecializationError::TwistMismatch(2, 1))));
}

#[test]
fn at_minus_one_first_class_is_log_two() {
    let cfg = EvalConfig::default();
    let p = RootOfUnityPoint::new(2, vec![1]).unwrap();
    let s = specialize_pol(&p, 0, &cfg).unwrap();
    let want = ext_class(1, c(-(2f64.ln()), 0.0)).unwrap();
    assert!(s[0].equivalent(&want, 1e-15).unwrap());
    assert!((s[0].representative() - want.value).norm() < 1e-15);
}

#[test]
fn at_i_second_class_is_minus_catalan() {
    let cfg = EvalConfig::default();
    let p = RootOfUnityPoint::new(4, vec![1]).unwrap();
    let s = specialize_pol(&p, 1, &cfg).unwrap();
    assert!((s[1].representative() - c(0.0, -CATALAN)).norm() < 1e-14);
    // the oracle: Im Li_2(i) = Σ (-1)^j/(2j+1)^2
    let series: f64 = (0..200_000)
        .map(|j| (-1f64).powi(j) / ((2 * j + 1) as f64).powi(2))
        .sum();
    assert!((series - CATALAN).abs() < 1e-10);
    let minus_li2 = ext_class(2, -li(2, c(0.0, 1.0), &cfg).unwrap()).unwrap();
    assert!(s[1].equivalent(&minus_li2, 1e-14).unwrap());
}

#[test]
fn at_minus_one_second_class() {
    // Li_2(-1) = -π²/12 is real and D_2(-1) = 0: both sides vanish in ℂ/(2πi)²ℝ
    let cfg = EvalConfig::default();
    let p = RootOfUnityPoint::new(2, vec![1]).unwrap();
    let s = specialize_pol(&p, 1, &cfg).unwrap();
    assert!(s[1].value.norm() < 1e-15);
    let target = ext_class(2, c(PI * PI / 12.0, 0.0)).unwrap();
    assert!(s[1].equivalent(&target, 1e-15).unwrap());
    assert!(!s[0]
        .equivalent(&ext_class(1, c(2f64.ln(), 0.0)).unwrap(), 1e-3)
        .unwrap());
}

#[test]
fn corollary_small_orders() {
    let cfg = EvalConfig::default();
    let r = verify_corollary(2, 6, 1e-12, &cfg).unwrap();
    assert!(r.pass && r.primitive_pass);
    assert_eq!(r.non_primitive_pass, None);
    assert_eq!(r.rows.len(), 7);
    let r = verify_corollary(6, 8, 1e-11, &cfg).unwrap();
    assert!(r.pass, "{:?}", r.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    assert_eq!(r.rows.len(), 5 * 9);
    assert_eq!(r.non_primitive_pass, Some(true));
    assert_eq!(r.rows.iter().filter(|r| r.primitive).count(), 2 * 9);
}

#[test]
fn corollary_negative_control() {
    let r = verify_corollary(3, 4, 0.0, &EvalConfig::default()).unwrap();
    assert!(!r.pass);
    assert!(r.max_class_residual < 1e-14);
    assert!(matches!(
        verify_corollary(1, 2, 1e-10, &EvalConfig::default()),
        Err(SpecializationError::InvalidOrder(1))
    ));
}

#[test]
fn points() {
    let p = RootOfUnityPoint::new(12, vec![15]).unwrap();
    assert_eq!(p.exponents(), &[3]);
    assert!(!p.is_primitive());
    assert_eq!(p.zeta(), vec![c(0.0, 1.0)]);
    assert!(RootOfUnityPoint::new(12, vec![5]).unwrap().is_primitive());
    assert!(RootOfUnityPoint::new(6, vec![2, 3]).unwrap().is_primitive());
    let trivial = RootOfUnityPoint::new(5, vec![0]).unwrap();
    assert!(trivial.is_trivial());
    let cfg = EvalConfig::default();
    assert_eq!(
        specialize_pol(&trivial, 2, &cfg),
        Err(SpecializationError::TrivialPoint)
    );
    let two = RootOfUnityPoint::new(4, vec![1, 2]).unwrap();
    assert!(matches!(
        specialize_pol(&two, 2, &cfg),
        Err(SpecializationError::DimensionMismatch { .. })
    ));
    assert_eq!(RootOfUnityPoint::nontrivial_roots(12).unwrap().len(), 11);
    for p in RootOfUnityPoint::nontrivial_roots(7).unwrap() {
        let z = p.zeta()[0];
        assert!((z.powu(7) - 1.0).norm() < 1e-14 && (z - 1.0).norm() > 0.5);
    }
}

#[test]
fn presentation_independence() {
    let cfg = EvalConfig::default();
    for (a, b) in [
        ((2, 1), (4, 2)),
        ((3, 1), (12, 4)),
        ((6, 5), (12, 10)),
        ((4, 3), (12, 9)),
    ] {
        let p = RootOfUnityPoint::new(a.0, vec![a.1]).unwrap();
        let q = RootOfUnityPoint::new(b.0, vec![b.1]).unwrap();
        assert_eq!(p.zeta(), q.zeta());
        assert_eq!(
            specialize_pol(&p, 6, &cfg).unwrap(),
            specialize_pol(&q, 6, &cfg).unwrap()
        );
    }
}

#[test]
fn splitting_regroups_alpha_into_the_same_classes() {
    let cfg = EvalConfig::default();
    for d in [2, 3, 5, 12] {
        for p in RootOfUnityPoint::nontrivial_roots(d).unwrap() {
            let direct = specialize_pol(&p, 8, &cfg).unwrap();
            let split = specialize_via_splitting(&p, 8, &cfg).unwrap();
            for (a, b) in direct.iter().zip(&split) {
                assert_eq!(a.n, b.n);
                assert!((a.value - b.value).norm() < 1e-14, "{p} n={}", a.n);
            }
        }
    }
}

#[test]
fn report_json_round_trip() {
    let r = verify_corollary(4, 3, 1e-12, &EvalConfig::default()).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    assert_eq!(
        serde_json::from_str::<polylog_hodge::specialization::CorollaryReport>(&s).unwrap(),
        r
    );
}

proptest! {
    #[test]
    fn quotient_is_an_equivalence(
        n in 1u32..10,
        re in -5.0f64..5.0,
        im in -5.0f64..5.0,
        shifts in proptest::collection::vec(-1e3f64..1e3, 1000),
    ) {
        let v = ext_class(n, c(re, im)).unwrap();
        let tol = 1e-9;
        prop_assert!(v.equivalent(&v, 0.0).unwrap());
        let line = c(0.0, 1.0).powu(n);
        for r in &shifts {
            let w = ext_class(n, v.value + line * *r).unwrap();
            prop_assert!(v.equivalent(&w, tol).unwrap());
            prop_assert!(w.equivalent(&v, tol).unwrap());
            prop_assert!((w.representative() - v.representative()).norm() < tol);
        }
        // transitivity through a shifted middle point
        let mid = ext_class(n, v.value + line * shifts[0]).unwrap();
        let end = ext_class(n, mid.value + line * shifts[1]).unwrap();
        prop_assert!(v.equivalent(&end, tol).unwrap());
        // moving off the line is detected
        let off = ext_class(n, v.value + line * c(0.0, 1e-3)).unwrap();
        prop_assert!(!v.equivalent(&off, 1e-6).unwrap());
    }

    #[test]
    fn scaled_line_shift_matches_the_two_pi_form(n in 1u32..8, r in -10.0f64..10.0) {
        let v = ext_class(n, c(0.3, -0.2)).unwrap();
        let w = ext_class(n, v.value + two_pi_i_pow(n) * r).unwrap();
        prop_assert!(v.distance(&w).unwrap() <= 1e-12 * two_pi_i_pow(n).norm() * r.abs().max(1.0));
    }
}
