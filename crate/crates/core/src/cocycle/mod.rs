//! Numerical verification of the explicit polylogarithm cocycle
//! `(α, η, ξ)` on `U = G_m^g ∖ ⋃ Z_μ`, where `Z_μ = {t_μ = 1}`.
//!
//! All forms are evaluated pointwise with coefficients in the e-basis of
//! `Log^N` and in the coordinate coframe `{dt_μ, dt̄_μ}`.

mod filtration;
mod form;
mod sample;
mod triple;
mod verify;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logsheaf::LogSheafError;
use crate::specfun::SpecfunError;

pub use filtration::{filtration_check, FiltrationCheck, FiltrationTerm, Label};
pub use form::FormValue;
pub use sample::{sample_points, SampleRegion};
pub use triple::{alpha_at, eta_at, nabla_eta, nabla_xi, xi_at, xi_bar_at};
pub use verify::{
    alpha_residual_at, nabla_numeric, verify_cocycle, PointResidual, VerificationReport, DEFAULT_FD_STEP,
};

/// Points closer than this to `t_μ ∈ {0, 1}` are rejected.
pub const MIN_MARGIN: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error("point {t:?} is within {margin} of a singular locus")]
    InvalidPoint { t: Vec<Complex64>, margin: f64 },
    #[error("finite-difference stencil around {t:?} leaves the domain: {reason}")]
    StencilOffDomain { t: Vec<Complex64>, reason: String },
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no sample points")]
    NoPoints,
    #[error("invalid parameter: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    LogSheaf(#[from] LogSheafError),
}

/// A point of `U` kept at distance at least `margin` from `t_μ = 0` and
/// `t_μ = 1` in every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    t: Vec<Complex64>,
}

impl PointSample {
    pub fn new(t: Vec<Complex64>) -> Result<Self, CocycleError> {
        Self::with_margin(t, MIN_MARGIN)
    }

    pub fn with_margin(t: Vec<Complex64>, margin: f64) -> Result<Self, CocycleError> {
        let ok = !t.is_empty()
            && t.iter()
                .all(|z| z.re.is_finite() && z.im.is_finite() && z.norm() >= margin && (z - 1.0).norm() >= margin);
        if !ok {
            return Err(CocycleError::InvalidPoint { t, margin });
        }
        Ok(Self { t })
    }

    pub fn g(&self) -> usize {
        self.t.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.t
    }

    fn expect_g(&self, g: usize) -> Result<(), CocycleError> {
        if self.g() != g {
            return Err(CocycleError::DimensionMismatch {
                expected: g,
                found: self.g(),
            });
        }
        Ok(())
    }
}
