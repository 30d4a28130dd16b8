//! Residue of top forms with first-order poles along `t_μ = 1` at the point
//! `Z = (1, …, 1)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::DerhamError;
use crate::exact::{Polynomial, Q};
use crate::logsheaf::{BasisKind, LogSheafError, LogVector, MultiIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalFunction {
    pub fn polynomial(p: Polynomial) -> Self {
        let g = p.terms().next().map_or(0, |(e, _)| e.len());
        Self {
            num: p,
            den: Polynomial::constant(g, Q::one()),
        }
    }

    pub fn constant(g: usize, c: Q) -> Self {
        Self::polynomial(Polynomial::constant(g, c))
    }
}

/// `Σ_k f_k(t) ω^k ⊗ ∧_μ dt_μ/(t_μ - 1)`, a section of `Log^N(twist)`
/// tensored with top forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueForm {
    pub g: usize,
    pub n: u32,
    pub twist: i32,
    pub coeffs: BTreeMap<MultiIndex, RationalFunction>,
}

impl ResidueForm {
    /// The geometric class `ω^0 ⊗ ∧_μ dt_μ/(t_μ - 1)`, twisted by `g`.
    pub fn geometric(g: usize, n: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiIndex::zero(g), RationalFunction::constant(g, Q::one()));
        Self {
            g,
            n,
            twist: g as i32,
            coeffs,
        }
    }
}

/// Exact residue: coefficients in the ω-basis at `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueValue {
    pub g: usize,
    pub n: u32,
    pub twist: i32,
    pub coeffs: BTreeMap<MultiIndex, Q>,
}

impl ResidueValue {
    pub fn project(&self, m: u32) -> ResidueValue {
        ResidueValue {
            n: m.min(self.n),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.total() <= m)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_log_vector(&self) -> Result<LogVector, LogSheafError> {
        LogVector::from_coeffs(
            self.g,
            self.n,
            self.twist,
            BasisKind::Omega,
            self.coeffs
                .iter()
                .map(|(k, c)| (k.clone(), Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))),
        )
    }
}

pub fn residue(xi: &ResidueForm) -> Result<ResidueValue, DerhamError> {
    let mut coeffs = BTreeMap::new();
    for (k, f) in &xi.coeffs {
        if k.g() != xi.g || k.total() > xi.n {
            return Err(DerhamError::BadIndex(format!("ω^{k} in Log^{} on g = {}", xi.n, xi.g)));
        }
        let den = f.den.at_ones();
        if den.is_zero() {
            return Err(DerhamError::NotResiduePresentable { k: k.clone() });
        }
        let v = f.num.at_ones() / den;
        if !v.is_zero() {
            coeffs.insert(k.clone(), v);
        }
    }
    Ok(ResidueValue {
        g: xi.g,
        n: xi.n,
        twist: xi.twist - xi.g as i32,
        coeffs,
    })
}
