//! Pullback of the polylogarithm section to torsion points of `G_m` and
//! the resulting classes in `ℂ/(2πi)^n ℝ`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logsheaf::{splitting_pullback, BasisKind, LogSheafError, LogVector, MultiIndex};
use crate::specfun::{d_bwr, li, EvalConfig, SpecfunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecializationError {
    #[error("order d = {0} must be at least 2")]
    InvalidOrder(u32),
    #[error("the point is trivial (ζ = 1 lies outside U)")]
    TrivialPoint,
    #[error("twist must be at least 1")]
    InvalidTwist,
    #[error("classes with twists {0} and {1} are not comparable")]
    TwistMismatch(u32, u32),
    #[error("expected a point of G_m^{expected}, found G_m^{found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    LogSheaf(#[from] LogSheafError),
}

/// `i^n` without rounding.
fn i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A point `(ζ_1, …, ζ_g)` with `ζ_μ = exp(2πi e_μ/d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnityPoint {
    d: u32,
    exponents: Vec<u32>,
}

impl RootOfUnityPoint {
    /// Exponents are reduced mod `d`.
    pub fn new(d: u32, exponents: Vec<u32>) -> Result<Self, SpecializationError> {
        if d < 2 {
            return Err(SpecializationError::InvalidOrder(d));
        }
        if exponents.is_empty() {
            return Err(SpecializationError::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(Self {
            d,
            exponents: exponents.into_iter().map(|e| e % d).collect(),
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn g(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|e| *e == 0)
    }

    /// The point has exact order `d`.
    pub fn is_primitive(&self) -> bool {
        self.exponents.iter().fold(self.d, |acc, e| acc.gcd(e)) == 1
    }

    /// The coordinates, computed from `e/d` in lowest terms so that equal
    /// points give identical values; quarter turns are exact.
    pub fn zeta(&self) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|&e| {
                let c = e.gcd(&self.d);
                let (num, den) = (e / c, self.d / c);
                if 4 % den == 0 {
                    i_pow(num * 4 / den)
                } else {
                    Complex64::from_polar(1.0, 2.0 * PI * num as f64 / den as f64)
                }
            })
            .collect()
    }

    /// All nontrivial `d`-th roots of unity in one variable.
    pub fn nontrivial_roots(d: u32) -> Result<Vec<Self>, SpecializationError> {
        if d < 2 {
            return Err(SpecializationError::InvalidOrder(d));
        }
        (1..d).map(|e| Self::new(d, vec![e])).collect()
    }
}

impl fmt::Display for RootOfUnityPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|e| format!("{e}/{}", self.d)).collect();
        write!(f, "exp(2πi·({}))", parts.join(", "))
    }
}

/// A complex number standing for its class in `ℂ/(2πi)^n ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtClassRep {
    pub n: u32,
    pub value: Complex64,
}

pub fn ext_class(n: u32, v: Complex64) -> Result<ExtClassRep, SpecializationError> {
    if n == 0 {
        return Err(SpecializationError::InvalidTwist);
    }
    Ok(ExtClassRep { n, value: v })
}

impl ExtClassRep {
    /// Coordinate of the class along `i^{n+1} ℝ`, the line orthogonal to
    /// `(2πi)^n ℝ`.
    pub fn invariant(&self) -> f64 {
        (self.value * i_pow(self.n).conj()).im
    }

    /// The representative on the line `i^{n+1} ℝ`.
    pub fn representative(&self) -> Complex64 {
        i_pow(self.n + 1) * self.invariant()
    }

    /// Distance from `self - other` to the line `(2πi)^n ℝ`.
    pub fn distance(&self, other: &ExtClassRep) -> Result<f64, SpecializationError> {
        if self.n != other.n {
            return Err(SpecializationError::TwistMismatch(self.n, other.n));
        }
        Ok(((self.value - other.value) * i_pow(self.n).conj()).im.abs())
    }

    pub fn equivalent(&self, other: &ExtClassRep, tol: f64) -> Result<bool, SpecializationError> {
        Ok(self.distance(other)? <= tol)
    }
}

/// The section `Σ_{m <= N} D_{m+1}(ζ) e^m(1)` at a point of `G_m`.
pub fn alpha_section(zeta: &RootOfUnityPoint, n: u32, cfg: &EvalConfig) -> Result<LogVector, SpecializationError> {
    let z = one_variable(zeta)?;
    let coeffs = (0..=n)
        .map(|m| Ok((MultiIndex::new(vec![m]), Complex64::new(d_bwr(m + 1, z, cfg)?, 0.0))))
        .collect::<Result<Vec<_>, SpecializationError>>()?;
    Ok(LogVector::from_coeffs(1, n, 1, BasisKind::E, coeffs)?)
}

fn one_variable(zeta: &RootOfUnityPoint) -> Result<Complex64, SpecializationError> {
    if zeta.g() != 1 {
        return Err(SpecializationError::DimensionMismatch {
            expected: 1,
            found: zeta.g(),
        });
    }
    if zeta.is_trivial() {
        return Err(SpecializationError::TrivialPoint);
    }
    Ok(zeta.zeta()[0])
}

/// Entry `k` is the class of `D_{k+1}(ζ) e^k(1) = i^k D_{k+1}(ζ) ω^{k+1}` in
/// `ℂ ω^{k+1}/ℝ u^{k+1} ≅ ℂ/(2πi)^{k+1} ℝ`. Only the `R^0` component of the
/// triple survives at a point.
pub fn specialize_pol(
    zeta: &RootOfUnityPoint,
    kmax: u32,
    cfg: &EvalConfig,
) -> Result<Vec<ExtClassRep>, SpecializationError> {
    let z = one_variable(zeta)?;
    (0..=kmax)
        .map(|k| ext_class(k + 1, i_pow(k) * d_bwr(k + 1, z, cfg)?))
        .collect()
}

/// The same classes read off the fiber through the splitting
/// `i_ζ^* Log(1) ≅ Π_k ℝ(k+1)`.
pub fn specialize_via_splitting(
    zeta: &RootOfUnityPoint,
    kmax: u32,
    cfg: &EvalConfig,
) -> Result<Vec<ExtClassRep>, SpecializationError> {
    let split = splitting_pullback(&alpha_section(zeta, kmax, cfg)?, &zeta.zeta(), zeta.d())?;
    (0..=kmax)
        .map(|k| ext_class(k + 1, split.component(&MultiIndex::new(vec![k + 1]))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub d: u32,
    pub exponent: u32,
    pub zeta: Complex64,
    pub primitive: bool,
    pub k: u32,
    pub d_value: f64,
    pub li_value: Complex64,
    /// `|D_{k+1}(ζ) - Re(i^k Li_{k+1}(ζ))|`.
    pub identity_residual: f64,
    /// Quotient distance between the specialized class and `(-1)^k Li_{k+1}(ζ)`.
    pub class_residual: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub d: u32,
    pub kmax: u32,
    pub tol: f64,
    pub rows: Vec<CorollaryRow>,
    pub max_identity_residual: f64,
    pub max_class_residual: f64,
    pub primitive_pass: bool,
    /// `None` when every nontrivial root is primitive.
    pub non_primitive_pass: Option<bool>,
    pub pass: bool,
}

fn corollary_row(p: &RootOfUnityPoint, k: u32, tol: f64, cfg: &EvalConfig) -> CorollaryRow {
    let z = p.zeta()[0];
    let run = || -> Result<(f64, Complex64, f64), SpecializationError> {
        let dv = d_bwr(k + 1, z, cfg)?;
        let lv = li(k + 1, z, cfg)?;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let class = specialize_pol(p, k, cfg)?[k as usize];
        let target = ext_class(k + 1, lv * sign)?;
        Ok((dv, lv, class.distance(&target)?))
    };
    let mut row = CorollaryRow {
        d: p.d(),
        exponent: p.exponents()[0],
        zeta: z,
        primitive: p.is_primitive(),
        k,
        d_value: f64::NAN,
        li_value: Complex64::new(f64::NAN, f64::NAN),
        identity_residual: f64::INFINITY,
        class_residual: f64::INFINITY,
        pass: false,
        error: None,
    };
    match run() {
        Ok((dv, lv, class_residual)) => {
            row.d_value = dv;
            row.li_value = lv;
            row.identity_residual = (dv - (i_pow(k) * lv).re).abs();
            row.class_residual = class_residual;
            row.pass = row.identity_residual <= tol && class_residual <= tol;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Checks the identity and the class equality at every nontrivial `d`-th
/// root of unity for `k <= kmax`. Failures are listed per row.
pub fn verify_corollary(d: u32, kmax: u32, tol: f64, cfg: &EvalConfig) -> Result<CorollaryReport, SpecializationError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(SpecfunError::InvalidConfig(format!("tolerance {tol}")).into());
    }
    cfg.validate()?;
    let points = RootOfUnityPoint::nontrivial_roots(d)?;
    let jobs: Vec<(&RootOfUnityPoint, u32)> = points.iter().flat_map(|p| (0..=kmax).map(move |k| (p, k))).collect();
    let rows: Vec<CorollaryRow> = jobs.par_iter().map(|(p, k)| corollary_row(p, *k, tol, cfg)).collect();
    let all = |primitive: bool| {
        let mut it = rows.iter().filter(|r| r.primitive == primitive).peekable();
        it.peek().is_some().then(|| it.all(|r| r.pass))
    };
    let primitive_pass = all(true).unwrap_or(true);
    let non_primitive_pass = all(false);
    Ok(CorollaryReport {
        d,
        kmax,
        tol,
        max_identity_residual: rows.iter().map(|r| r.identity_residual).fold(0.0, f64::max),
        max_class_residual: rows.iter().map(|r| r.class_residual).fold(0.0, f64::max),
        pass: primitive_pass && non_primitive_pass.unwrap_or(true),
        primitive_pass,
        non_primitive_pass,
        rows,
    })
}
