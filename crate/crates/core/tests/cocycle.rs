use num_complex::Complex64;
use polylog_hodge::cocycle::{
    alpha_at, alpha_residual_at, eta_at, filtration_check, nabla_eta, nabla_numeric, nabla_xi, sample_points,
    verify_cocycle, xi_at, xi_bar_at, CocycleError, FormValue, Label, PointSample, SampleRegion, DEFAULT_FD_STEP,
};
use polylog_hodge::derham::{residue, FormIndex, ResidueForm};
use polylog_hodge::logsheaf::{omega_to_e, to_omega, BasisKind, LogVector, MultiIndex};
use polylog_hodge::specfun::{d_bwr, li, EvalConfig};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(t: &[Complex64]) -> PointSample {
    PointSample::new(t.to_vec()).unwrap()
}

fn hol(members: &[usize]) -> FormIndex {
    FormIndex::from_members(members)
}

fn none() -> FormIndex {
    FormIndex::empty()
}

fn k(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

#[test]
fn xi_values() {
    let x = xi_at(1, 3, &point(&[c(2.0, 0.0)])).unwrap();
    assert_eq!(x.get(&k(&[0]), hol(&[0]), none()), c(1.0, 0.0));
    assert_eq!(x.degrees(), vec![1]);
    let x = xi_at(2, 2, &point(&[c(2.0, 0.0), c(3.0, 0.0)])).unwrap();
    assert!((x.get(&k(&[0, 0]), hol(&[0, 1]), none()) - c(0.5, 0.0)).norm() < 1e-16);
    assert!(x.entries().all(|(_, h, a, _)| h == hol(&[0, 1]) && a.is_empty()));
}

#[test]
fn xi_is_omega_zero_in_the_e_basis() {
    let t = [c(0.3, 0.4), c(-1.5, 0.7)];
    let n = 3;
    let x = xi_at(2, n, &point(&t)).unwrap();
    let w0 = LogVector::basis(2, n, 2, BasisKind::Omega, MultiIndex::zero(2)).unwrap();
    let e = omega_to_e(&w0, &t).unwrap();
    let scale = 1.0 / ((t[0] - 1.0) * (t[1] - 1.0));
    for kk in MultiIndex::all_up_to(2, n) {
        let want = e.get(&kk) * scale;
        assert!((x.get(&kk, hol(&[0, 1]), none()) - want).norm() < 1e-15, "{kk}");
    }
}

#[test]
fn residue_of_xi_near_the_point_one() {
    // (t_1 - 1)(t_2 - 1) ξ in the ω-basis tends to ω^0(2), the residue
    let r = residue(&ResidueForm::geometric(2, 2)).unwrap().to_log_vector().unwrap();
    for eps in [1e-2, 1e-3] {
        let t = [c(1.0 + eps, eps), c(1.0 - eps, 0.5 * eps)];
        let x = xi_at(2, 2, &PointSample::with_margin(t.to_vec(), eps / 2.0).unwrap()).unwrap();
        let mut e = LogVector::zero(2, 2, 2, BasisKind::E);
        for (kk, h, _, v) in x.entries() {
            assert_eq!(h, hol(&[0, 1]));
            e.set(kk.clone(), v * (t[0] - 1.0) * (t[1] - 1.0)).unwrap();
        }
        let w = to_omega(&e, Some(&t)).unwrap();
        assert!((w.get(&MultiIndex::zero(2)) - r.get(&MultiIndex::zero(2))).norm() < 1e-12);
        assert!(w.iter().all(|(kk, v)| kk.total() == 0 || v.norm() < 1e-12));
    }
}

#[test]
fn eta_at_two() {
    // Re for the twist (1): the dt̄ coefficient picks up the sign of the twist
    let e = eta_at(1, 2, &point(&[c(2.0, 0.0)])).unwrap();
    assert!((e.get(&k(&[0]), hol(&[0]), none()) - c(0.5, 0.0)).norm() < 1e-16);
    assert!((e.get(&k(&[0]), none(), hol(&[0])) - c(-0.5, 0.0)).norm() < 1e-16);
}

#[test]
fn eta_minus_xi_is_half_the_conjugate_difference() {
    for t in [
        vec![c(0.3, -0.2)],
        vec![c(0.5, 0.5), c(2.0, -1.0)],
        vec![c(0.4, 0.1), c(-0.6, 0.3), c(1.7, 0.9)],
    ] {
        let g = t.len();
        let p = point(&t);
        let xi = xi_at(g, 3, &p).unwrap();
        let lhs = eta_at(g, 3, &p).unwrap().minus(&xi);
        let rhs = xi_bar_at(g, 3, &p).unwrap().minus(&xi).scale(c(0.5, 0.0));
        assert!(lhs.max_diff(&rhs) < 1e-15);
        // the conjugate of the product is the product of the conjugates
        assert!(xi.conj().max_diff(&xi_bar_at(g, 3, &p).unwrap()) < 1e-15);
    }
}

#[test]
fn alpha_on_the_unit_circle() {
    let cfg = EvalConfig::default();
    for theta in [0.3, 1.0, 2.5, -2.0] {
        let z = Complex64::from_polar(1.0, theta);
        let a = alpha_at(1, 5, &point(&[z]), &cfg).unwrap();
        for m in 0..=5u32 {
            let want = (c(0.0, 1.0).powu(m) * li(m + 1, z, &cfg).unwrap()).re;
            assert!((a.get(&k(&[m]), none(), none()) - c(want, 0.0)).norm() < 1e-14, "m={m}");
        }
    }
}

#[test]
fn alpha_in_two_variables_at_level_zero() {
    // α = α_1 ξ̄_2 - α_2 ξ_1 with α_μ = D_1(t_μ), ξ_1 = dt_1/(t_1 - 1),
    // ξ̄_2 = -dt̄_2/(t̄_2 - 1)
    let cfg = EvalConfig::default();
    let t = [c(0.4, 0.3), c(-0.7, 1.1)];
    let a = alpha_at(2, 0, &point(&t), &cfg).unwrap();
    let d1 = |z: Complex64| -(1.0 - z).norm().ln();
    let zero = k(&[0, 0]);
    let want_bar = -d1(t[0]) / (t[1].conj() - 1.0);
    let want_hol = -d1(t[1]) / (t[0] - 1.0);
    assert!((a.get(&zero, none(), hol(&[1])) - want_bar).norm() < 1e-15);
    assert!((a.get(&zero, hol(&[0]), none()) - want_hol).norm() < 1e-15);
    assert_eq!(a.entries().count(), 2);
}

#[test]
fn first_alpha_term_matches_one_variable() {
    // μ = 1 term of α for g = 2 is α_1 ⊗ ξ̄_2; dividing out ξ̄_2 leaves
    // the g = 1 coefficients D_{m+1}(t_1)
    let cfg = EvalConfig::default();
    let t = [c(0.35, -0.45), c(0.6, 0.9)];
    let n = 4;
    let a2 = alpha_at(2, n, &point(&t), &cfg).unwrap();
    let a1 = alpha_at(1, n, &point(&t[..1]), &cfg).unwrap();
    let xibar2 = -1.0 / (t[1].conj() - 1.0);
    for m in 0..=n {
        let got = a2.get(&k(&[m, 0]), none(), hol(&[1])) / xibar2;
        assert!((got - a1.get(&k(&[m]), none(), none())).norm() < 1e-14, "m={m}");
    }
}

fn e_basis_section(v: LogVector) -> impl Fn(&[Complex64]) -> Result<FormValue, CocycleError> {
    move |_| Ok(FormValue::from_section(&v))
}

#[test]
fn nabla_of_e_zero_is_the_connection_term() {
    let t = [c(0.7, 0.2), c(-1.3, 0.4)];
    let e0 = LogVector::basis(2, 2, 0, BasisKind::E, MultiIndex::zero(2)).unwrap();
    let d = nabla_numeric(e_basis_section(e0), &t, DEFAULT_FD_STEP).unwrap();
    let mut want = FormValue::zero(2, 2, 0);
    for (mu, &z) in t.iter().enumerate() {
        want.add(MultiIndex::unit(2, mu), hol(&[mu]), none(), 1.0 / (c(0.0, 2.0) * z));
        want.add(
            MultiIndex::unit(2, mu),
            none(),
            hol(&[mu]),
            -1.0 / (c(0.0, 2.0) * z.conj()),
        );
    }
    assert!(d.max_diff(&want) < 1e-15);
}

#[test]
fn horizontal_sections_have_zero_derivative() {
    // u^k on the principal branch, written in the e-basis at each point
    for (g, kk) in [(1, vec![0]), (1, vec![2]), (2, vec![1, 0]), (2, vec![0, 0])] {
        let n = 3;
        let kk = MultiIndex::new(kk);
        let section = move |s: &[Complex64]| -> Result<FormValue, CocycleError> {
            let branch: Vec<Complex64> = s.iter().map(|z| z.ln()).collect();
            let u = LogVector::basis(g, n, 0, BasisKind::U { branch }, kk.clone())?;
            let w = to_omega(&u, Some(s))?;
            Ok(FormValue::from_section(&omega_to_e(&w, s)?))
        };
        let t: Vec<Complex64> = [c(0.5, 0.6), c(-0.8, 0.3)][..g].to_vec();
        let d = nabla_numeric(&section, &t, DEFAULT_FD_STEP).unwrap();
        let scale = section(&t).unwrap().max_norm();
        assert!(d.max_norm() < 1e-7 * scale.max(1.0), "g={g}: {}", d.max_norm());
    }
}

#[test]
fn nabla_of_t_times_e_zero() {
    let z = c(0.6, -0.7);
    let h = 1e-4;
    let section = |s: &[Complex64]| -> Result<FormValue, CocycleError> {
        let mut f = FormValue::zero(1, 2, 0);
        f.add(k(&[0]), none(), none(), s[0]);
        Ok(f)
    };
    let d = nabla_numeric(section, &[z], h).unwrap();
    let mut want = FormValue::zero(1, 2, 0);
    want.add(k(&[0]), hol(&[0]), none(), c(1.0, 0.0));
    want.add(k(&[1]), hol(&[0]), none(), z / (c(0.0, 2.0) * z));
    want.add(k(&[1]), none(), hol(&[0]), -z / (c(0.0, 2.0) * z.conj()));
    assert!(d.max_diff(&want) < 1e-7);
}

#[test]
fn stencil_errors_are_reported() {
    let bad = |_: &[Complex64]| -> Result<FormValue, CocycleError> { Err(CocycleError::NoPoints) };
    assert!(matches!(
        nabla_numeric(bad, &[c(0.5, 0.5)], 1e-4),
        Err(CocycleError::StencilOffDomain { .. })
    ));
    assert!(nabla_numeric(bad, &[c(0.5, 0.5)], -1.0).is_err());
}

#[test]
fn analytic_derivatives_of_xi_match_finite_differences() {
    let t = [c(0.45, 0.3), c(1.8, -0.6)];
    let n = 3;
    let fd = nabla_numeric(|s| xi_at(2, n, &PointSample::new(s.to_vec())?), &t, 1e-4).unwrap();
    let exact = nabla_xi(2, n, &point(&t)).unwrap();
    assert!(exact.max_norm() < 1e-14);
    assert!(fd.max_diff(&exact) < 1e-7);
}

#[test]
fn cocycle_in_one_variable() {
    let cfg = EvalConfig::default();
    let pts = sample_points(1, 100, 11, SampleRegion::default_for(1)).unwrap();
    assert!(pts.iter().all(|p| {
        let z = p.coords()[0];
        z.norm() > 0.1 && z.norm() < 0.9
    }));
    let r = verify_cocycle(1, 4, &pts, 1e-6, DEFAULT_FD_STEP, &cfg).unwrap();
    assert!(r.pass, "max residual {}", r.max_residual);
    assert_eq!(r.points, 100);
}

#[test]
fn cocycle_in_two_variables() {
    let cfg = EvalConfig::default();
    let pts = sample_points(2, 50, 12, SampleRegion::default_for(2)).unwrap();
    let r = verify_cocycle(2, 3, &pts, 1e-5, DEFAULT_FD_STEP, &cfg).unwrap();
    assert!(r.pass, "max residual {}", r.max_residual);
    assert!(r.per_point.iter().all(|p| p.xi < 1e-13 && p.eta < 1e-13));
}

#[test]
fn cocycle_in_three_variables() {
    let cfg = EvalConfig::default();
    let pts = sample_points(3, 10, 13, SampleRegion::default_for(3)).unwrap();
    let r = verify_cocycle(3, 2, &pts, 1e-5, DEFAULT_FD_STEP, &cfg).unwrap();
    assert!(r.pass, "max residual {}", r.max_residual);
}

#[test]
fn opposite_conjugation_sign_breaks_the_cocycle() {
    // with Re taken as for an untwisted coefficient the D_1 component fails
    let cfg = EvalConfig::default();
    let p = point(&[c(0.4, 0.3)]);
    let xi = xi_at(1, 2, &p).unwrap();
    let mut naive_bar = FormValue::zero(1, 2, 1);
    for (kk, h, a, v) in xi.entries() {
        naive_bar.add(kk.clone(), a, h, v.conj());
    }
    let naive_eta = xi.plus(&naive_bar).scale(c(0.5, 0.0));
    let good = alpha_residual_at(1, 2, &p, DEFAULT_FD_STEP, &cfg).unwrap().max_norm();
    let bad = good.max(
        nabla_numeric(
            |s| alpha_at(1, 2, &PointSample::new(s.to_vec())?, &cfg),
            p.coords(),
            DEFAULT_FD_STEP,
        )
        .unwrap()
        .minus(&naive_eta.minus(&xi))
        .max_norm(),
    );
    assert!(good < 1e-7);
    assert!(bad > 0.1);
}

#[test]
fn residual_is_second_order_in_the_step() {
    let cfg = EvalConfig::default();
    let p = point(&[c(0.3, 0.55), c(-0.9, 0.4)]);
    let hs = [1e-3, 5e-4, 2.5e-4];
    let rs: Vec<f64> = hs
        .iter()
        .map(|h| alpha_residual_at(2, 2, &p, *h, &cfg).unwrap().max_norm())
        .collect();
    // least-squares slope of log r against log h
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((1.7..=2.3).contains(&slope), "slope {slope}, residuals {rs:?}");
}

#[test]
fn residual_below_the_top_level_ignores_truncation() {
    let cfg = EvalConfig::default();
    let p = point(&[c(0.25, -0.5), c(1.4, 0.8)]);
    for n in 1..4 {
        let low = alpha_residual_at(2, n, &p, DEFAULT_FD_STEP, &cfg).unwrap();
        let high = alpha_residual_at(2, n + 1, &p, DEFAULT_FD_STEP, &cfg).unwrap();
        assert!(low.below(n).max_diff(&high.below(n)) < 1e-14);
    }
}

#[test]
fn filtration_bookkeeping() {
    for g in 1..=4 {
        let xi = filtration_check(Label::Xi, g, 3);
        assert_eq!((xi.in_w0, xi.in_f0), (true, Some(true)));
        let eta = filtration_check(Label::Eta, g, 3);
        assert_eq!((eta.in_w0, eta.in_f0), (true, None));
        let alpha = filtration_check(Label::Alpha, g, 3);
        assert_eq!((alpha.in_w0, alpha.in_f0), (true, None));
        assert_eq!(alpha.terms.len(), 4 * g);
    }
    assert_eq!("alpha".parse::<Label>().unwrap(), Label::Alpha);
    assert!("beta".parse::<Label>().is_err());
}

#[test]
fn points_are_validated() {
    assert!(PointSample::new(vec![c(1.0, 0.0)]).is_err());
    assert!(PointSample::new(vec![c(0.0, 1e-5)]).is_err());
    assert!(PointSample::new(vec![]).is_err());
    assert!(xi_at(2, 1, &point(&[c(0.5, 0.0)])).is_err());
    let r = verify_cocycle(1, 1, &[], 1e-6, 1e-4, &EvalConfig::default());
    assert_eq!(r.unwrap_err(), CocycleError::NoPoints);
}

#[test]
fn sampling_is_reproducible() {
    let region = SampleRegion::default_for(2);
    let a = sample_points(2, 20, 5, region).unwrap();
    assert_eq!(a, sample_points(2, 20, 5, region).unwrap());
    assert_ne!(a, sample_points(2, 20, 6, region).unwrap());
    for p in &a {
        for z in p.coords() {
            assert!((z - 1.0).norm() >= region.margin);
            assert!(z.re < 1.0 || z.im.abs() >= region.margin);
        }
    }
}

#[test]
fn form_value_json_round_trip() {
    let f = eta_at(2, 2, &point(&[c(0.3, 0.1), c(-0.5, 0.9)])).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let back: FormValue = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eta_is_real(r1 in 0.2f64..3.0, a1 in -3.1f64..3.1, r2 in 0.2f64..3.0, a2 in -3.1f64..3.1, g in 1usize..3) {
        let t: Vec<Complex64> = [Complex64::from_polar(r1, a1), Complex64::from_polar(r2, a2)][..g].to_vec();
        prop_assume!(t.iter().all(|z| (z - 1.0).norm() > 0.05));
        let p = point(&t);
        let e = eta_at(g, 3, &p).unwrap();
        prop_assert!(e.conj().max_diff(&e) < 1e-15 * e.max_norm().max(1.0));
        let ne = nabla_eta(g, 3, &p).unwrap();
        prop_assert!(ne.max_norm() < 1e-13 * e.max_norm().max(1.0));
    }

    #[test]
    fn one_variable_alpha_is_real(r in 0.05f64..0.95, a in -3.1f64..3.1) {
        let cfg = EvalConfig::default();
        let z = Complex64::from_polar(r, a);
        let al = alpha_at(1, 4, &point(&[z]), &cfg).unwrap();
        for (kk, _, _, v) in al.entries() {
            prop_assert_eq!(v.im, 0.0);
            prop_assert_eq!(v.re, d_bwr(kk.components()[0] + 1, z, &cfg).unwrap());
        }
    }
}
