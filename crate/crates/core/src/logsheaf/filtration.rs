//! Weight and Hodge filtration bookkeeping on fibers, and the splitting at
//! torsion points.
//!
//! `W_{-2m}` is spanned by the basis elements with `|k| >= m` in any of the
//! three bases (the base changes only raise `|k|`). `F^{-p}` is spanned by
//! `ω^k` with `|k| <= p`; a twist by `n` shifts it to `F^{-p-n}`. The
//! reported `hodge` is the largest `p` with `v ∈ F^p`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::basis::to_omega;
use super::{BasisKind, LogSheafError, LogVector, MultiIndex};

/// Tolerance for `ζ^d = 1`.
pub const TORSION_TOL: f64 = 1e-10;

/// Coefficients below this fraction of the largest one are treated as
/// rounding noise from a base change.
const PRESENCE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiltrationDegree {
    /// Smallest `w` with `v ∈ W_w`.
    pub weight: i32,
    /// Largest `p` with `v ∈ F^p`; `None` when it cannot be decided without
    /// the evaluation point (e-basis).
    pub hodge: Option<i32>,
}

fn present(v: &LogVector) -> impl Iterator<Item = &MultiIndex> {
    let floor = v.max_norm() * PRESENCE_REL_TOL;
    v.iter().filter(move |(_, c)| c.norm() > floor).map(|(k, _)| k)
}

fn weight_of(v: &LogVector) -> Result<i32, LogSheafError> {
    let min = present(v).map(|k| k.total()).min().ok_or(LogSheafError::ZeroVector)?;
    Ok(-2 * min as i32 - 2 * v.twist())
}

fn hodge_of_omega(w: &LogVector) -> Result<i32, LogSheafError> {
    let max = present(w).map(|k| k.total()).max().ok_or(LogSheafError::ZeroVector)?;
    Ok(-(max as i32) - w.twist())
}

pub fn filtration_degree(v: &LogVector) -> Result<FiltrationDegree, LogSheafError> {
    let weight = weight_of(v)?;
    let hodge = match v.kind() {
        BasisKind::E => None,
        _ => Some(hodge_of_omega(&to_omega(v, None)?)?),
    };
    Ok(FiltrationDegree { weight, hodge })
}

/// As [`filtration_degree`], with the point available for the e-basis.
pub fn filtration_degree_at(v: &LogVector, t: &[Complex64]) -> Result<FiltrationDegree, LogSheafError> {
    let weight = weight_of(v)?;
    let hodge = Some(hodge_of_omega(&to_omega(v, Some(t))?)?);
    Ok(FiltrationDegree { weight, hodge })
}

/// `#{k ∈ ℕ^g : |k| = m} = binom(m+g-1, g-1)`, the rank of `Sym^m` of a
/// rank-`g` module.
pub fn graded_dimension(g: usize, m: u32) -> u64 {
    let (n, r) = (m as u64 + g as u64 - 1, g as u64 - 1);
    let mut acc = 1u64;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The fiber at a torsion point written in `Π_m Sym^m`, with `ω^k` sent to
/// the monomial `ω_1^{k_1}⋯ω_g^{k_g}`.
///
/// For `g = 1` a non-negative twist is absorbed into the degree
/// (`ω^m(n) ↦ ω^{m+n}`); for `g > 1` the twist is kept separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitVector {
    pub g: usize,
    pub twist: i32,
    pub pieces: BTreeMap<u32, BTreeMap<MultiIndex, Complex64>>,
}

impl SplitVector {
    pub fn component(&self, monomial: &MultiIndex) -> Complex64 {
        self.pieces
            .get(&monomial.total())
            .and_then(|p| p.get(monomial))
            .copied()
            .unwrap_or_default()
    }
}

pub fn splitting_pullback(v: &LogVector, zeta: &[Complex64], d: u32) -> Result<SplitVector, LogSheafError> {
    if zeta.len() != v.g() {
        return Err(LogSheafError::DimensionMismatch {
            expected: v.g(),
            found: zeta.len(),
        });
    }
    for (mu, z) in zeta.iter().enumerate() {
        if d == 0 || (z.powu(d) - 1.0).norm() > TORSION_TOL {
            return Err(LogSheafError::NotTorsion { mu, value: *z, d });
        }
    }
    let w = to_omega(v, Some(zeta))?;
    let absorb = w.g() == 1 && w.twist() >= 0;
    let shift = if absorb { w.twist() as u32 } else { 0 };
    let mut pieces: BTreeMap<u32, BTreeMap<MultiIndex, Complex64>> = BTreeMap::new();
    for (k, c) in w.iter() {
        let mono = if absorb {
            MultiIndex::new(vec![k.total() + shift])
        } else {
            k.clone()
        };
        pieces.entry(mono.total()).or_default().insert(mono, *c);
    }
    Ok(SplitVector {
        g: w.g(),
        twist: if absorb { 0 } else { w.twist() },
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn tate_twisted_unit() {
        for g in 1..=3 {
            let v = LogVector::basis(g, 3, g as i32, BasisKind::Omega, MultiIndex::zero(g)).unwrap();
            let f = filtration_degree(&v).unwrap();
            assert_eq!(f.weight, -2 * g as i32);
            assert_eq!(f.hodge, Some(-(g as i32)));
        }
    }

    #[test]
    fn weight_of_a_sum_is_governed_by_the_lowest_index() {
        let v = LogVector::from_coeffs(
            1,
            2,
            0,
            BasisKind::E,
            [(MultiIndex::new(vec![0]), one()), (MultiIndex::new(vec![2]), one())],
        )
        .unwrap();
        let f = filtration_degree(&v).unwrap();
        assert_eq!(f.weight, 0);
        assert_eq!(f.hodge, None);
        let e2 = LogVector::basis(1, 2, 0, BasisKind::E, MultiIndex::new(vec![2])).unwrap();
        assert_eq!(filtration_degree(&e2).unwrap().weight, -4);
        assert_eq!(
            filtration_degree(&LogVector::zero(1, 2, 0, BasisKind::E)),
            Err(LogSheafError::ZeroVector)
        );
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(graded_dimension(1, 7), 1);
        assert_eq!(graded_dimension(2, 3), 4);
        assert_eq!(graded_dimension(3, 2), 6);
        for g in 1..=4 {
            for m in 0..=6 {
                assert_eq!(MultiIndex::all_of_degree(g, m).len() as u64, graded_dimension(g, m));
            }
        }
    }

    #[test]
    fn splitting_relabels() {
        let zeta = [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)];
        let v = LogVector::basis(2, 2, 0, BasisKind::Omega, MultiIndex::new(vec![1, 1])).unwrap();
        let s = splitting_pullback(&v, &zeta, 4).unwrap();
        assert_eq!(s.pieces.len(), 1);
        assert_eq!(s.component(&MultiIndex::new(vec![1, 1])), one());
        assert!(matches!(
            splitting_pullback(&v, &[Complex64::new(0.5, 0.0), zeta[1]], 4),
            Err(LogSheafError::NotTorsion { mu: 0, .. })
        ));
        // g = 1: twist moves into the degree
        let w = LogVector::basis(1, 3, 1, BasisKind::Omega, MultiIndex::new(vec![2])).unwrap();
        let s = splitting_pullback(&w, &[Complex64::new(-1.0, 0.0)], 2).unwrap();
        assert_eq!(s.component(&MultiIndex::new(vec![3])), one());
        assert_eq!(s.twist, 0);
    }
}
