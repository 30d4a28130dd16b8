use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::triple::alpha_from_coords;
use super::{eta_at, nabla_eta, nabla_xi, xi_at, CocycleError, FormValue, PointSample};
use crate::derham::FormIndex;
use crate::specfun::EvalConfig;

pub const DEFAULT_FD_STEP: f64 = 1e-4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(a dt_μ + b dt̄_μ) ∧ f`.
fn wedge_one_form(f: &FormValue, mu: usize, a: Complex64, b: Complex64) -> FormValue {
    let mut one = FormValue::zero(f.g(), f.truncation(), 0);
    let k0 = crate::logsheaf::MultiIndex::zero(f.g());
    one.add(k0.clone(), FormIndex::from_members(&[mu]), FormIndex::empty(), a);
    one.add(k0, FormIndex::empty(), FormIndex::from_members(&[mu]), b);
    one.wedge(f)
}

/// Total covariant derivative of a section given pointwise in the e-basis:
/// central differences in `Re t_μ` and `Im t_μ` for the coefficients, plus
/// the connection term `Σ_μ e^{k+1_μ} ⊗ Im(dt_μ/t_μ) ∧ (-)`.
///
/// The step in coordinate μ is `h · min(1, |t_μ|, |t_μ - 1|)`, so it shrinks
/// with the distance to the singular loci where the coefficients vary
/// fastest.
pub fn nabla_numeric<F>(section: F, t: &[Complex64], h: f64) -> Result<FormValue, CocycleError>
where
    F: Fn(&[Complex64]) -> Result<FormValue, CocycleError>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(CocycleError::InvalidConfig(format!("finite-difference step {h}")));
    }
    let off = |reason: String| CocycleError::StencilOffDomain { t: t.to_vec(), reason };
    if h >= 0.5 {
        return Err(off(format!("step {h} reaches t_μ ∈ {{0, 1}}")));
    }
    let eval = |s: &[Complex64]| section(s).map_err(|e| off(e.to_string()));
    let base = eval(t)?;
    let mut out = FormValue::zero(base.g(), base.truncation(), base.twist());
    for mu in 0..t.len() {
        let step = h * t[mu].norm().min((t[mu] - 1.0).norm()).min(1.0);
        let shifted = |d: Complex64| {
            let mut s = t.to_vec();
            s[mu] += d;
            eval(&s)
        };
        let dx = shifted(Complex64::new(step, 0.0))?
            .minus(&shifted(Complex64::new(-step, 0.0))?)
            .scale(Complex64::new(0.5 / step, 0.0));
        let dy = shifted(Complex64::new(0.0, step))?
            .minus(&shifted(Complex64::new(0.0, -step))?)
            .scale(Complex64::new(0.5 / step, 0.0));
        let d_t = dx.minus(&dy.scale(I)).scale(Complex64::new(0.5, 0.0));
        let d_tbar = dx.plus(&dy.scale(I)).scale(Complex64::new(0.5, 0.0));
        let one = Complex64::new(1.0, 0.0);
        out = out
            .plus(&wedge_one_form(&d_t, mu, one, Complex64::default()))
            .plus(&wedge_one_form(&d_tbar, mu, Complex64::default(), one));
        let mut shifted_log = FormValue::zero(base.g(), base.truncation(), base.twist());
        for (k, hol, anti, c) in base.entries() {
            shifted_log.add(k.bump(mu), hol, anti, c);
        }
        let z = t[mu];
        out = out.plus(&wedge_one_form(
            &shifted_log,
            mu,
            1.0 / (2.0 * I * z),
            -1.0 / (2.0 * I * z.conj()),
        ));
    }
    Ok(out)
}

/// `∇α - (η - ξ)` at one point, with `∇α` by finite differences.
pub fn alpha_residual_at(
    g: usize,
    n: u32,
    p: &PointSample,
    h: f64,
    cfg: &EvalConfig,
) -> Result<FormValue, CocycleError> {
    p.expect_g(g)?;
    let nabla_alpha = nabla_numeric(|s| alpha_from_coords(g, n, s, cfg), p.coords(), h)?;
    let target = eta_at(g, n, p)?.minus(&xi_at(g, n, p)?);
    Ok(nabla_alpha.minus(&target))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub t: Vec<Complex64>,
    pub alpha: f64,
    pub eta: f64,
    pub xi: f64,
    pub max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub g: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub tol: f64,
    pub h: f64,
    pub points: usize,
    pub max_residual: f64,
    pub pass: bool,
    pub per_point: Vec<PointResidual>,
}

fn check_point(g: usize, n: u32, p: &PointSample, h: f64, cfg: &EvalConfig) -> PointResidual {
    let run = || -> Result<(f64, f64, f64), CocycleError> {
        Ok((
            alpha_residual_at(g, n, p, h, cfg)?.max_norm(),
            nabla_eta(g, n, p)?.max_norm(),
            nabla_xi(g, n, p)?.max_norm(),
        ))
    };
    match run() {
        Ok((alpha, eta, xi)) => PointResidual {
            t: p.coords().to_vec(),
            alpha,
            eta,
            xi,
            max: alpha.max(eta).max(xi),
            error: None,
        },
        Err(e) => PointResidual {
            t: p.coords().to_vec(),
            alpha: f64::INFINITY,
            eta: f64::INFINITY,
            xi: f64::INFINITY,
            max: f64::INFINITY,
            error: Some(e.to_string()),
        },
    }
}

/// Checks `∇α = η - ξ`, `∇η = 0` and `∇ξ = 0` at every point. Failures at
/// individual points are recorded in the report rather than returned.
pub fn verify_cocycle(
    g: usize,
    n: u32,
    points: &[PointSample],
    tol: f64,
    h: f64,
    cfg: &EvalConfig,
) -> Result<VerificationReport, CocycleError> {
    if points.is_empty() {
        return Err(CocycleError::NoPoints);
    }
    if g == 0 {
        return Err(CocycleError::InvalidConfig("g must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CocycleError::InvalidConfig(format!("tolerance {tol}")));
    }
    cfg.validate()?;
    for p in points {
        p.expect_g(g)?;
    }
    let per_point: Vec<PointResidual> = points.par_iter().map(|p| check_point(g, n, p, h, cfg)).collect();
    let max_residual = per_point.iter().map(|r| r.max).fold(0.0, f64::max);
    Ok(VerificationReport {
        g,
        n,
        tol,
        h,
        points: points.len(),
        max_residual,
        pass: per_point.iter().all(|r| r.max <= tol),
        per_point,
    })
}
