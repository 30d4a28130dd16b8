//! Polylogarithms `Li_k`, the modified functions `L_m`, and the
//! single-valued Bloch–Wigner–Ramakrishnan functions `D_m`.
//!
//! Branch conventions: `log` is principal with argument in `(-π, π]` and
//! `Li_k` is cut along `[1, ∞)`. A point whose imaginary part is exactly
//! zero and whose real part exceeds one is "on the cut"; evaluating `Li_k`
//! there requires an explicit [`CutSide`].

mod check;
mod polylog;
pub mod quadrature;
mod zeta;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{fe_check, fe_sample_points, FeReport, FeRow};
pub use polylog::{li_in_regime, li_integral};
pub use zeta::zeta_value;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Exactly on `(1, ∞)`.
    pub fn on_cut(self) -> bool {
        self.im == 0.0 && self.re > 1.0
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<f64> for ComplexPoint {
    fn from(x: f64) -> Self {
        Self::new(x, 0.0)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 || (self.im == 0.0 && self.im.is_sign_negative()) {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutSide {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub series_tol: f64,
    pub max_terms: usize,
    pub cut_side: Option<CutSide>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-16,
            max_terms: 2000,
            cut_side: None,
        }
    }
}

impl EvalConfig {
    pub fn with_cut_side(mut self, side: CutSide) -> Self {
        self.cut_side = Some(side);
        self
    }

    pub fn validate(&self) -> Result<(), SpecfunError> {
        if !(self.series_tol > 0.0 && self.series_tol < 1.0) {
            return Err(SpecfunError::InvalidConfig(format!(
                "series_tol must lie in (0, 1), got {}",
                self.series_tol
            )));
        }
        if self.max_terms < 64 {
            return Err(SpecfunError::InvalidConfig(format!(
                "max_terms must be at least 64, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }
}

/// Which evaluation method produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Zero,
    ClosedForm,
    ZetaValue,
    Series,
    NearOne,
    Inversion,
    Path,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Zero => "zero",
            Regime::ClosedForm => "closed-form",
            Regime::ZetaValue => "zeta-value",
            Regime::Series => "series",
            Regime::NearOne => "near-1",
            Regime::Inversion => "inversion",
            Regime::Path => "path",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("Li_1 has a pole at t = 1")]
    PoleAtOne,
    #[error("series for order {order} did not converge within {terms} terms")]
    NonConvergence { order: u32, terms: usize },
    #[error("t = {0} lies on the branch cut [1, ∞) and no cut side was chosen")]
    OnBranchCut(ComplexPoint),
    #[error("t = 0 is outside the domain (log|t| is singular)")]
    ZeroArgument,
    #[error("t = 1 is outside the domain of L_m and D_m")]
    ArgumentIsOne,
    #[error("order must be positive")]
    InvalidOrder,
    #[error("non-finite argument {0}")]
    NonFinite(ComplexPoint),
    #[error("invalid evaluation config: {0}")]
    InvalidConfig(String),
}

/// `Li_k(t)` on the principal branch.
pub fn li(k: u32, t: impl Into<ComplexPoint>, cfg: &EvalConfig) -> Result<Complex64, SpecfunError> {
    li_traced(k, t, cfg).map(|(v, _)| v)
}

/// `Li_k(t)` together with the regime that produced it.
pub fn li_traced(k: u32, t: impl Into<ComplexPoint>, cfg: &EvalConfig) -> Result<(Complex64, Regime), SpecfunError> {
    let t = t.into();
    cfg.validate()?;
    if k == 0 {
        return Err(SpecfunError::InvalidOrder);
    }
    if !t.is_finite() {
        return Err(SpecfunError::NonFinite(t));
    }
    polylog::li_dispatch(k, t, cfg)
}

fn check_log_domain(t: ComplexPoint) -> Result<(), SpecfunError> {
    if !t.is_finite() {
        return Err(SpecfunError::NonFinite(t));
    }
    if t.re == 0.0 && t.im == 0.0 {
        return Err(SpecfunError::ZeroArgument);
    }
    if t.re == 1.0 && t.im == 0.0 {
        return Err(SpecfunError::ArgumentIsOne);
    }
    Ok(())
}

/// `L_{m+1}(t) = Σ_{k=0}^{m} (-log|t|)^{m-k}/(m-k)! · Li_{k+1}(t)`.
pub fn l_big(m: u32, t: impl Into<ComplexPoint>, cfg: &EvalConfig) -> Result<Complex64, SpecfunError> {
    let t = t.into();
    check_log_domain(t)?;
    let minus_log_abs = -t.to_complex().norm().ln();
    let mut sum = Complex64::new(0.0, 0.0);
    // (−log|t|)^j / j! for j = m − k, built up from k = m downwards
    let mut weight = 1.0;
    for j in 0..=m {
        let k = m - j;
        if j > 0 {
            weight *= minus_log_abs / j as f64;
        }
        sum += li(k + 1, t, cfg)? * weight;
    }
    Ok(sum)
}

/// `D_m(t) = Im(i^m L_m(t))`. Points on the cut default to the upper side;
/// the value does not depend on the side.
pub fn d_bwr(m: u32, t: impl Into<ComplexPoint>, cfg: &EvalConfig) -> Result<f64, SpecfunError> {
    if m == 0 {
        return Err(SpecfunError::InvalidOrder);
    }
    let t = t.into();
    let mut cfg = *cfg;
    cfg.cut_side.get_or_insert(CutSide::Above);
    let l = l_big(m - 1, t, &cfg)?;
    Ok(im_of_i_pow(m, l))
}

/// `Im(i^m z)` without rounding from a complex multiplication.
pub(crate) fn im_of_i_pow(m: u32, z: Complex64) -> f64 {
    match m % 4 {
        0 => z.im,
        1 => z.re,
        2 => -z.im,
        _ => -z.re,
    }
}

/// `D_m(1/t) − D_m(t)`, minus `(log|t|)^m/m!` when `m` is odd.
pub fn functional_equation_residual(m: u32, t: impl Into<ComplexPoint>, cfg: &EvalConfig) -> Result<f64, SpecfunError> {
    let t = t.into();
    check_log_domain(t)?;
    let z = t.to_complex();
    let inv = ComplexPoint::from(z.inv());
    let mut residual = d_bwr(m, inv, cfg)? - d_bwr(m, t, cfg)?;
    if m % 2 == 1 {
        let log_abs = z.norm().ln();
        let mut corr = 1.0;
        for j in 1..=m {
            corr *= log_abs / j as f64;
        }
        residual -= corr;
    }
    Ok(residual)
}

/// Residual of the inversion relation that `D_m` actually satisfies:
/// `D_m(1/t) = -D_m(t)` for even `m` and
/// `D_m(1/t) = D_m(t) + (-1)^{(m-1)/2} (log|t|)^m/m!` for odd `m`.
///
/// [`functional_equation_residual`] tests the relation with both signs
/// positive; the two differ by `2 D_m(t)` for even `m` and by
/// `2 (log|t|)^m/m!` when `m ≡ 3 (mod 4)`.
pub fn inversion_relation_residual(m: u32, t: impl Into<ComplexPoint>, cfg: &EvalConfig) -> Result<f64, SpecfunError> {
    let t = t.into();
    check_log_domain(t)?;
    let z = t.to_complex();
    let inv = ComplexPoint::from(z.inv());
    let at_inv = d_bwr(m, inv, cfg)?;
    let at_t = d_bwr(m, t, cfg)?;
    if m.is_multiple_of(2) {
        return Ok(at_inv + at_t);
    }
    let log_abs = z.norm().ln();
    let mut corr = 1.0;
    for j in 1..=m {
        corr *= log_abs / j as f64;
    }
    if m % 4 == 3 {
        corr = -corr;
    }
    Ok(at_inv - at_t - corr)
}

/// Gap of `D_m` across the cut at `x > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutGap {
    /// `|D_m(x+iε) - D_m(x-iε)|`, which is `O(ε)` for a continuous function.
    pub raw: f64,
    /// `|2 g(ε/2) - g(ε)|` with `g` the signed gap: the jump across the cut
    /// with the linear term removed.
    pub limit: f64,
}

pub fn cut_gap(m: u32, x: f64, eps: f64, cfg: &EvalConfig) -> Result<CutGap, SpecfunError> {
    let gap = |e: f64| -> Result<f64, SpecfunError> {
        Ok(d_bwr(m, ComplexPoint::new(x, e), cfg)? - d_bwr(m, ComplexPoint::new(x, -e), cfg)?)
    };
    let g = gap(eps)?;
    let g_half = gap(0.5 * eps)?;
    Ok(CutGap {
        raw: g.abs(),
        limit: (2.0 * g_half - g).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.max_terms = 10;
        assert!(matches!(li(2, 0.3, &c), Err(SpecfunError::InvalidConfig(_))));
        c.max_terms = 64;
        c.series_tol = 1.0;
        assert!(matches!(li(2, 0.3, &c), Err(SpecfunError::InvalidConfig(_))));
    }

    #[test]
    fn domain_errors() {
        assert_eq!(li(1, 1.0, &cfg()), Err(SpecfunError::PoleAtOne));
        assert_eq!(li(0, 0.5, &cfg()), Err(SpecfunError::InvalidOrder));
        assert_eq!(l_big(2, 0.0, &cfg()), Err(SpecfunError::ZeroArgument));
        assert_eq!(d_bwr(3, 0.0, &cfg()), Err(SpecfunError::ZeroArgument));
        assert!(matches!(li(1, 3.0, &cfg()), Err(SpecfunError::OnBranchCut(_))));
        assert!(matches!(
            li(2, ComplexPoint::new(f64::NAN, 0.0), &cfg()),
            Err(SpecfunError::NonFinite(_))
        ));
    }

    #[test]
    fn im_of_i_pow_matches_multiplication() {
        let z = Complex64::new(0.3, -1.7);
        for m in 0..8 {
            let direct = (Complex64::i().powu(m) * z).im;
            assert!((im_of_i_pow(m, z) - direct).abs() < 1e-15);
        }
    }
}
