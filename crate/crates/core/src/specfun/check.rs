use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{functional_equation_residual, inversion_relation_residual, ComplexPoint, EvalConfig, SpecfunError};

/// `count` points with `log|t|` uniform on `[-3, 3]` and uniform argument,
/// at distance at least `1e-3` from 1.
pub fn fe_sample_points(count: usize, seed: u64) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::from_polar(rng.random_range(-3.0f64..3.0).exp(), rng.random_range(-PI..PI));
        if (z - 1.0).norm() > 1e-3 {
            out.push(ComplexPoint::from(z));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeRow {
    pub m: u32,
    /// Largest `|functional_equation_residual|` over the samples.
    pub max_residual: f64,
    pub worst_t: ComplexPoint,
    /// Largest `|inversion_relation_residual|` over the samples.
    pub max_inversion_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeReport {
    pub m_max: u32,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub rows: Vec<FeRow>,
    /// Every row passes the stated relation.
    pub pass: bool,
    /// Every row passes the inversion relation.
    pub inversion_pass: bool,
}

/// Both inversion residuals for `m = 1..=m_max` at seeded sample points;
/// a row passes when the stated residual is below `tol` everywhere.
pub fn fe_check(m_max: u32, samples: usize, seed: u64, tol: f64, cfg: &EvalConfig) -> Result<FeReport, SpecfunError> {
    cfg.validate()?;
    if m_max == 0 {
        return Err(SpecfunError::InvalidOrder);
    }
    if tol.is_nan() || tol < 0.0 || samples == 0 {
        return Err(SpecfunError::InvalidConfig(format!("tol {tol}, samples {samples}")));
    }
    let points = fe_sample_points(samples, seed);
    let rows = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut row = FeRow {
                m,
                max_residual: 0.0,
                worst_t: points[0],
                max_inversion_residual: 0.0,
                pass: true,
            };
            for &t in &points {
                let r = functional_equation_residual(m, t, cfg)?.abs();
                if r.is_nan() || r > row.max_residual {
                    row.max_residual = r;
                    row.worst_t = t;
                }
                row.max_inversion_residual = row
                    .max_inversion_residual
                    .max(inversion_relation_residual(m, t, cfg)?.abs());
            }
            row.pass = row.max_residual < tol;
            Ok(row)
        })
        .collect::<Result<Vec<_>, SpecfunError>>()?;
    Ok(FeReport {
        m_max,
        samples,
        seed,
        tol,
        pass: rows.iter().all(|r| r.pass),
        inversion_pass: rows.iter().all(|r| r.max_inversion_residual < tol),
        rows,
    })
}
