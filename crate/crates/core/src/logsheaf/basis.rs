//! Change of basis between ω, u and e. Every transform is
//! `c · Σ_n s^{|n|} Π x_ν^{n_ν}/n_ν! · b^{k+n}` applied to the basis element
//! with index `k`, where the exponential of the nilpotent shifts truncates
//! exactly at `|k + n| = N`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{BasisKind, LogSheafError, LogVector, MultiIndex};

/// Tolerance for `exp(branch_ν) = t_ν`.
pub const BRANCH_TOL: f64 = 1e-10;

fn i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn unipotent(
    v: &LogVector,
    lead: impl Fn(u32) -> Complex64,
    step: Complex64,
    x: &[Complex64],
) -> BTreeMap<MultiIndex, Complex64> {
    let targets = MultiIndex::all_up_to(v.g, v.n);
    let mut out: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for (k, c) in &v.coeffs {
        let base = *c * lead(k.total());
        for m in &targets {
            if let Some(n) = m.checked_sub(k) {
                let w = base * step.powu(n.total()) * n.divided_power(x);
                *out.entry(m.clone()).or_default() += w;
            }
        }
    }
    out.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    out
}

fn log_abs(t: &[Complex64]) -> Vec<Complex64> {
    t.iter().map(|z| Complex64::new(z.norm().ln(), 0.0)).collect()
}

/// ω-coefficients to e-coefficients at the point `t`, using
/// `ω^k = (-i)^{|k|} exp(Σ log|t_ν| ω_ν) e^k` and `ω_μ e^k = -i e^{k+1_μ}`.
pub fn omega_to_e(v: &LogVector, t: &[Complex64]) -> Result<LogVector, LogSheafError> {
    v.expect_kind("omega")?;
    v.expect_point(t)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let coeffs = unipotent(v, |k| i_pow(3 * (k % 4)), minus_i, &log_abs(t));
    Ok(v.with_coeffs(BasisKind::E, coeffs))
}

/// e-coefficients to ω-coefficients: `e^k = i^{|k|} exp(-Σ log|t_ν| ω_ν) ω^k`.
pub fn e_to_omega(v: &LogVector, t: &[Complex64]) -> Result<LogVector, LogSheafError> {
    v.expect_kind("e")?;
    v.expect_point(t)?;
    let x: Vec<_> = log_abs(t).into_iter().map(|l| -l).collect();
    let coeffs = unipotent(v, i_pow, Complex64::new(1.0, 0.0), &x);
    Ok(v.with_coeffs(BasisKind::Omega, coeffs))
}

fn check_branch(t: &[Complex64], branch: &[Complex64]) -> Result<(), LogSheafError> {
    if branch.len() != t.len() {
        return Err(LogSheafError::DimensionMismatch {
            expected: t.len(),
            found: branch.len(),
        });
    }
    for (mu, (z, l)) in t.iter().zip(branch).enumerate() {
        let err = (l.exp() - z).norm();
        if err.is_nan() || err > BRANCH_TOL * z.norm().max(1.0) {
            return Err(LogSheafError::BranchMismatch { mu, err });
        }
    }
    Ok(())
}

/// ω-coefficients to u-coefficients for the branch `log t_ν = branch[ν]`:
/// `ω^k = (2πi)^{-|k|} exp(Σ log t_ν ω_ν) u^k`, `ω_μ u^k = (2πi)^{-1} u^{k+1_μ}`.
pub fn omega_to_u(v: &LogVector, t: &[Complex64], branch: &[Complex64]) -> Result<LogVector, LogSheafError> {
    v.expect_kind("omega")?;
    v.expect_point(t)?;
    check_branch(t, branch)?;
    let two_pi_i_inv = Complex64::new(0.0, 2.0 * PI).inv();
    let coeffs = unipotent(v, |k| two_pi_i_inv.powu(k), two_pi_i_inv, branch);
    Ok(v.with_coeffs(
        BasisKind::U {
            branch: branch.to_vec(),
        },
        coeffs,
    ))
}

/// u-coefficients to ω-coefficients: `u^k = (2πi)^{|k|} exp(-Σ log t_ν ω_ν) ω^k`.
/// Only the recorded branch is needed.
pub fn u_to_omega(v: &LogVector) -> Result<LogVector, LogSheafError> {
    let BasisKind::U { branch } = &v.kind else {
        return Err(LogSheafError::WrongKind {
            expected: "u",
            found: v.kind.name(),
        });
    };
    if branch.len() != v.g {
        return Err(LogSheafError::DimensionMismatch {
            expected: v.g,
            found: branch.len(),
        });
    }
    let x: Vec<_> = branch.iter().map(|l| -l).collect();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let coeffs = unipotent(v, |k| two_pi_i.powu(k), Complex64::new(1.0, 0.0), &x);
    Ok(v.with_coeffs(BasisKind::Omega, coeffs))
}

/// Re-expresses any vector in the ω-basis. `t` is only consulted for the
/// e-basis.
pub fn to_omega(v: &LogVector, t: Option<&[Complex64]>) -> Result<LogVector, LogSheafError> {
    match v.kind {
        BasisKind::Omega => Ok(v.clone()),
        BasisKind::U { .. } => u_to_omega(v),
        BasisKind::E => e_to_omega(v, t.ok_or(LogSheafError::PointRequired)?),
    }
}
