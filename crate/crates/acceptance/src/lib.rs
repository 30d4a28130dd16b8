//! Acceptance checks. Each returns whether it passed and a one-line
//! summary of what it measured.

use num_complex::Complex64;
use num_traits::{One, Zero};
use polylog_hodge::cocycle::{
    alpha_residual_at, nabla_numeric, sample_points, verify_cocycle, CocycleError, FormValue, PointSample,
    SampleRegion, DEFAULT_FD_STEP,
};
use polylog_hodge::derham::{
    build_slice, cohomologous, reduce_cocycle, residue, survey_slices, verify_dimension_formula, FormIndex,
    LogFormSymbolic, ResidueForm,
};
use polylog_hodge::exact::{q, Q};
use polylog_hodge::logsheaf::{nabla_u_symbolic, omega_to_e, to_omega, BasisKind, LogVector, MultiIndex};
use polylog_hodge::specfun::{cut_gap, fe_check, EvalConfig};
use polylog_hodge::specialization::verify_corollary;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub pass: bool,
    pub summary: String,
}

pub type Runner = fn() -> Result<Check, String>;

pub const CRITERIA: [(u32, &str, Runner); 8] = [
    (1, "dimension formula, g <= 4, N <= 6", dimension_formula),
    (2, "off-zero slices are exact, g <= 3, N <= 4", off_zero_exactness),
    (
        3,
        "inversion relation and single-valuedness of D_m",
        functional_equations,
    ),
    (4, "cocycle equations at sample points", cocycle),
    (5, "horizontality of u^k", horizontality),
    (6, "residue of xi is u^0", residue_of_xi),
    (7, "specialization at roots of unity", specialization),
    (8, "reduce_cocycle preserves the class", reduction),
];

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn dimension_formula() -> Result<Check, String> {
    let (mut tables, mut rows, mut bad) = (0, 0, Vec::new());
    for g in 1..=4 {
        for n in 0..=6 {
            let r = verify_dimension_formula(g, n).map_err(err)?;
            tables += 1;
            rows += r.rows.len();
            let top = r.rows.last().map(|row| row.m == g && row.computed_dim == 1);
            if !r.pass() || top != Some(true) {
                bad.push(format!("(g={g}, N={n})"));
            }
        }
    }
    Ok(Check {
        pass: bad.is_empty(),
        summary: format!("{tables} tables, {rows} degrees, mismatches: {bad:?}"),
    })
}

pub fn off_zero_exactness() -> Result<Check, String> {
    let (mut slices, mut bad) = (0, Vec::new());
    for g in 1..=3 {
        for n in 0..=4 {
            for s in survey_slices(g, n, 2).map_err(err)? {
                if s.a.total() == 0 {
                    continue;
                }
                slices += 1;
                if !s.is_complex || s.cohomology.iter().any(|d| *d != 0) {
                    bad.push(format!("(g={g}, N={n}, a={})", s.a));
                }
            }
        }
    }
    Ok(Check {
        pass: bad.is_empty(),
        summary: format!("{slices} slices with a != 0, nonzero cohomology in {:?}", bad),
    })
}

pub fn functional_equations() -> Result<Check, String> {
    let cfg = EvalConfig::default();
    let fe = fe_check(10, 500, 0, 1e-9, &cfg).map_err(err)?;
    let failing: Vec<u32> = fe.rows.iter().filter(|r| !r.pass).map(|r| r.m).collect();
    let worst = fe.rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let inversion = fe.rows.iter().map(|r| r.max_inversion_residual).fold(0.0, f64::max);
    let mut gap = 0.0f64;
    for m in 1..=10 {
        for x in [1.5, 2.0, 5.0] {
            gap = gap.max(cut_gap(m, x, 1e-5, &cfg).map_err(err)?.limit);
        }
    }
    let probe = gap < 1e-6;
    Ok(Check {
        pass: fe.pass && probe,
        summary: format!(
            "stated relation fails for m = {failing:?} (max residual {worst:.2e}); \
             sign-corrected relation max residual {inversion:.2e}; cut gap {gap:.2e} ({})",
            if probe { "ok" } else { "too large" }
        ),
    })
}

fn slope(hs: &[f64], rs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

pub fn cocycle() -> Result<Check, String> {
    let cfg = EvalConfig::default();
    let mut worst = [0.0f64; 3];
    let mut pass = true;
    for (g, n_max, count, tol) in [(1, 6, 100, 1e-6), (2, 4, 50, 1e-5), (3, 4, 50, 1e-5)] {
        let pts = sample_points(g, count, 100 + g as u64, SampleRegion::default_for(g)).map_err(err)?;
        for n in 0..=n_max {
            let r = verify_cocycle(g, n, &pts, tol, DEFAULT_FD_STEP, &cfg).map_err(err)?;
            worst[g - 1] = worst[g - 1].max(r.max_residual);
            pass &= r.pass;
        }
    }
    let hs = [1e-3, 5e-4, 2.5e-4];
    let mut slopes = Vec::new();
    for (g, n) in [(1, 4), (2, 3), (3, 2)] {
        let pts = sample_points(g, 10, 200 + g as u64, SampleRegion::default_for(g)).map_err(err)?;
        let rs = hs
            .iter()
            .map(|h| {
                pts.iter().try_fold(0.0f64, |acc, p| {
                    Ok::<_, CocycleError>(acc.max(alpha_residual_at(g, n, p, *h, &cfg)?.max_norm()))
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        slopes.push(slope(&hs, &rs));
    }
    let order_ok = slopes.iter().all(|s| (1.7..=2.3).contains(s));
    Ok(Check {
        pass: pass && order_ok,
        summary: format!(
            "max residual g=1: {:.2e} (tol 1e-6), g=2: {:.2e}, g=3: {:.2e} (tol 1e-5); FD order {:.3?}",
            worst[0], worst[1], worst[2], slopes
        ),
    })
}

fn u_section(g: usize, n: u32, k: MultiIndex) -> impl Fn(&[Complex64]) -> Result<FormValue, CocycleError> {
    move |s: &[Complex64]| {
        let branch: Vec<Complex64> = s.iter().map(|z| z.ln()).collect();
        let u = LogVector::basis(g, n, 0, BasisKind::U { branch }, k.clone())?;
        let w = to_omega(&u, Some(s))?;
        Ok(FormValue::from_section(&omega_to_e(&w, s)?))
    }
}

pub fn horizontality() -> Result<Check, String> {
    let n = 6;
    let mut symbolic_bad = Vec::new();
    let mut sections = 0;
    for g in 1..=3 {
        for k in MultiIndex::all_up_to(g, n) {
            sections += 1;
            if !nabla_u_symbolic(g, n, &k).is_empty() {
                symbolic_bad.push(format!("(g={g}, k={k})"));
            }
        }
    }
    let points = [
        Complex64::new(0.5, 0.6),
        Complex64::new(-0.8, 0.3),
        Complex64::new(1.7, -0.9),
        Complex64::new(0.3, -0.25),
    ];
    // u^k carries (2πi)^{|k|}, so residuals are measured relative to the
    // largest coefficient of the section
    let (mut absolute, mut relative) = (0.0f64, 0.0f64);
    for g in 1..=3 {
        for (i, _) in points.iter().enumerate() {
            let t: Vec<Complex64> = (0..g).map(|mu| points[(i + mu) % points.len()]).collect();
            PointSample::new(t.clone()).map_err(err)?;
            for k in MultiIndex::all_up_to(g, n) {
                let section = u_section(g, n, k);
                let size = section(&t).map_err(err)?.max_norm();
                let d = nabla_numeric(&section, &t, DEFAULT_FD_STEP).map_err(err)?.max_norm();
                absolute = absolute.max(d);
                relative = relative.max(d / size);
            }
        }
    }
    Ok(Check {
        pass: symbolic_bad.is_empty() && relative < 1e-7,
        summary: format!(
            "{sections} sections exact, symbolic failures {symbolic_bad:?}; \
             numeric max |∇u^k|/|u^k| {relative:.2e} (tol 1e-7), absolute {absolute:.2e}"
        ),
    })
}

pub fn residue_of_xi() -> Result<Check, String> {
    let mut bad = Vec::new();
    for g in 1..=3 {
        for n in 0..=6 {
            let r = residue(&ResidueForm::geometric(g, n)).map_err(err)?;
            let is_u0 =
                r.twist == 0 && r.coeffs.len() == 1 && r.coeffs.get(&MultiIndex::zero(g)).is_some_and(One::is_one);
            if !is_u0 {
                bad.push(format!("(g={g}, N={n})"));
            }
        }
    }
    Ok(Check {
        pass: bad.is_empty(),
        summary: format!("21 cases, exact mismatches {bad:?}"),
    })
}

pub fn specialization() -> Result<Check, String> {
    let cfg = EvalConfig::default();
    let (mut rows, mut identity, mut class, mut bad) = (0, 0.0f64, 0.0f64, Vec::new());
    for d in [2, 3, 4, 6, 12] {
        let r = verify_corollary(d, 8, 1e-11, &cfg).map_err(err)?;
        for row in &r.rows {
            rows += 1;
            identity = identity.max(row.identity_residual);
            class = class.max(row.class_residual);
            if !(row.identity_residual < 1e-11 && row.class_residual < 1e-10) {
                bad.push(format!("(d={d}, e={}, k={})", row.exponent, row.k));
            }
        }
    }
    Ok(Check {
        pass: bad.is_empty(),
        summary: format!(
            "{rows} (ζ, k) pairs; max identity residual {identity:.2e} (tol 1e-11), max class residual {class:.2e} (tol 1e-10); failures {bad:?}"
        ),
    })
}

fn random_form(rng: &mut ChaCha8Rng, g: usize, n: u32, degree: usize, terms: usize) -> Result<LogFormSymbolic, String> {
    let ks = MultiIndex::all_up_to(g, n);
    let is = FormIndex::all_of_size(g, degree);
    let mut f = LogFormSymbolic::zero(g, n, degree);
    for _ in 0..terms {
        let k = ks[rng.random_range(0..ks.len())].clone();
        let i = is[rng.random_range(0..is.len())];
        let a = MultiIndex::new((0..g).map(|_| rng.random_range(0..3)).collect());
        f.add_term(k, i, a, q(rng.random_range(-4..=4))).map_err(err)?;
    }
    Ok(f)
}

/// A combination of closed constant forms plus an exact form.
fn random_cocycle(rng: &mut ChaCha8Rng, g: usize, n: u32, m: usize) -> Result<LogFormSymbolic, String> {
    let s = build_slice(g, n, &MultiIndex::zero(g)).map_err(err)?;
    let mut v = vec![Q::zero(); s.level_dim(m)];
    for kv in s.differential(m).kernel_basis() {
        let c = q(rng.random_range(-3..=3));
        for (x, y) in v.iter_mut().zip(kv) {
            *x += &c * y;
        }
    }
    let mut xi = LogFormSymbolic::from_slice_vector(&s, m, &v);
    if m > 0 {
        xi = xi.add(&random_form(rng, g, n, m - 1, 6)?.nabla());
    }
    Ok(xi)
}

pub fn reduction() -> Result<Check, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut cases, mut bad) = (0, Vec::new());
    for g in 1..=2 {
        for n in 0..=3 {
            for m in 0..g {
                for _ in 0..20 {
                    let xi = random_cocycle(&mut rng, g, n, m)?;
                    let out = reduce_cocycle(&xi, m).map_err(err)?;
                    cases += 1;
                    if !cohomologous(&out, &xi).map_err(err)? {
                        bad.push(format!("(g={g}, N={n}, m={m})"));
                    }
                }
            }
        }
    }
    Ok(Check {
        pass: bad.is_empty(),
        summary: format!("{cases} random cocycles, class changed in {bad:?}"),
    })
}
