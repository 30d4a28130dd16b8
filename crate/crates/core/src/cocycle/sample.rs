use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CocycleError, PointSample};

/// Each coordinate is drawn with `log|t|` uniform on `[ln r_min, ln r_max]`
/// and uniform argument, then rejected if it lies within `margin` of `0`,
/// of `1`, or (when `avoid_cut`) of the ray `[1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRegion {
    pub r_min: f64,
    pub r_max: f64,
    pub margin: f64,
    pub avoid_cut: bool,
}

impl SampleRegion {
    /// The annulus `0.1 < |t| < 0.9` for `g = 1`, `0.2 < |t| < 3` otherwise.
    pub fn default_for(g: usize) -> Self {
        if g == 1 {
            Self {
                r_min: 0.1,
                r_max: 0.9,
                margin: 0.05,
                avoid_cut: true,
            }
        } else {
            Self {
                r_min: 0.2,
                r_max: 3.0,
                margin: 0.05,
                avoid_cut: true,
            }
        }
    }

    fn accepts(&self, z: Complex64) -> bool {
        let cut_dist = if z.re >= 1.0 { z.im.abs() } else { (z - 1.0).norm() };
        z.norm() >= self.margin && (z - 1.0).norm() >= self.margin && (!self.avoid_cut || cut_dist >= self.margin)
    }
}

pub fn sample_points(
    g: usize,
    count: usize,
    seed: u64,
    region: SampleRegion,
) -> Result<Vec<PointSample>, CocycleError> {
    if !(region.r_min > 0.0 && region.r_max > region.r_min && region.margin > 0.0) {
        return Err(CocycleError::InvalidConfig(format!("sample region {region:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (region.r_min.ln(), region.r_max.ln());
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        let t: Vec<Complex64> = (0..g)
            .map(|_| loop {
                attempts += 1;
                let z = Complex64::from_polar(rng.random_range(lo..hi).exp(), rng.random_range(-PI..PI));
                if region.accepts(z) || attempts > 1_000_000 {
                    break z;
                }
            })
            .collect();
        if attempts > 1_000_000 {
            return Err(CocycleError::InvalidConfig(format!(
                "sample region {region:?} is empty"
            )));
        }
        out.push(PointSample::with_margin(t, region.margin)?);
    }
    Ok(out)
}
