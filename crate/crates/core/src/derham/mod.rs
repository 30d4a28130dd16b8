//! Exact de Rham cohomology of `G_m^g` with coefficients in `Log^N`.
//!
//! Global sections of the logarithmic de Rham complex on `A^g` are
//! polynomial in `t`, and the differential preserves the monomial multidegree
//! `a` of the coefficients because `t_μ ∂/∂t_μ` does. Each multidegree gives a
//! finite Koszul complex over ℚ for the commuting operators `a_μ + ω_μ`,
//! which is what [`KoszulSlice`] stores.

mod form;
mod residue;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{q, SparseMatrix};
use crate::logsheaf::MultiIndex;

pub use form::{cohomologous, reduce_cocycle, LogFormSymbolic};
pub use residue::{residue, RationalFunction, ResidueForm, ResidueValue};

/// Monomial multidegree `a ∈ ℕ^g` of a polynomial coefficient `t^a`.
pub type MultiDegree = MultiIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DerhamError {
    #[error("need g >= 1")]
    ZeroRank,
    #[error("form degree {m} out of range for g = {g}")]
    InvalidDegree { m: usize, g: usize },
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("the form is not closed")]
    NotACocycle,
    #[error("no primitive at level {level} in multidegree {multidegree}")]
    SolveFailed { level: u32, multidegree: MultiDegree },
    #[error("coefficient of ω^{k} has a pole at t = (1, …, 1)")]
    NotResiduePresentable { k: MultiIndex },
}

/// Subset `I ⊆ {0, …, g-1}` naming the form `∧_{μ ∈ I} dt_μ/t_μ`, stored as
/// a bit mask. Members are wedged in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct FormIndex(u32);

impl FormIndex {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn full(g: usize) -> Self {
        Self((1u32 << g) - 1)
    }

    pub fn from_members(members: &[usize]) -> Self {
        Self(members.iter().fold(0, |m, &mu| m | (1 << mu)))
    }

    pub fn members(self) -> Vec<usize> {
        (0..32).filter(|mu| self.contains(*mu)).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, mu: usize) -> bool {
        self.0 >> mu & 1 == 1
    }

    /// `dlog t_μ ∧ dlog t_I = sign · dlog t_{I ∪ {μ}}`, or `None` if `μ ∈ I`.
    pub fn wedge_front(self, mu: usize) -> Option<(FormIndex, i64)> {
        if self.contains(mu) {
            return None;
        }
        let below = (self.0 & ((1u32 << mu) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1 } else { -1 };
        Some((Self(self.0 | 1 << mu), sign))
    }

    /// `dlog t_I ∧ dlog t_J = sign · dlog t_{I ∪ J}`, or `None` if they
    /// overlap.
    pub fn wedge(self, other: FormIndex) -> Option<(FormIndex, i64)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // one transposition for each pair (a in I, b in J) with a > b
        let inversions: u32 = other.members().iter().map(|b| (self.0 >> (b + 1)).count_ones()).sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((Self(self.0 | other.0), sign))
    }

    /// All subsets of size `m`, ordered by mask.
    pub fn all_of_size(g: usize, m: usize) -> Vec<FormIndex> {
        (0u32..1 << g)
            .filter(|s| s.count_ones() as usize == m)
            .map(Self)
            .collect()
    }
}

impl From<Vec<usize>> for FormIndex {
    fn from(v: Vec<usize>) -> Self {
        Self::from_members(&v)
    }
}

impl From<FormIndex> for Vec<usize> {
    fn from(i: FormIndex) -> Self {
        i.members()
    }
}

/// Basis element `t^a ω^k ⊗ dlog t_I` of a slice; `a` is implicit.
pub type SliceBasis = (MultiIndex, FormIndex);

/// The multidegree-`a` part of the polynomial logarithmic de Rham complex of
/// `Log^N` on `A^g`. Level `m` has basis `(k, I)` with `|k| <= N`, `|I| = m`,
/// ordered by `I` and then by `k`; `d[m]` maps level `m` to level `m + 1` and
/// acts on column vectors, so it has shape `dim(m+1) × dim(m)`.
#[derive(Debug, Clone)]
pub struct KoszulSlice {
    pub g: usize,
    pub n: u32,
    pub a: MultiDegree,
    levels: Vec<Vec<SliceBasis>>,
    d: Vec<SparseMatrix>,
}

impl KoszulSlice {
    pub fn level(&self, m: usize) -> &[SliceBasis] {
        &self.levels[m]
    }

    pub fn level_dim(&self, m: usize) -> usize {
        self.levels[m].len()
    }

    pub fn index_of(&self, k: &MultiIndex, i: FormIndex) -> Option<usize> {
        let m = i.len();
        self.levels
            .get(m)?
            .binary_search_by(|(kk, ii)| ii.cmp(&i).then_with(|| kk.cmp(k)))
            .ok()
    }

    /// `d^m`; for `m = g` this is the zero map to the zero space.
    pub fn differential(&self, m: usize) -> SparseMatrix {
        match self.d.get(m) {
            Some(d) => d.clone(),
            None => SparseMatrix::zeros(0, self.level_dim(m)),
        }
    }

    pub fn differentials(&self) -> &[SparseMatrix] {
        &self.d
    }

    /// `d^{m+1} d^m = 0` for every `m`.
    pub fn is_complex(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.d.iter().map(SparseMatrix::rank).collect()
    }

    /// `dim H^m` for `m = 0..=g`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks = self.ranks();
        (0..=self.g)
            .map(|m| {
                let out = ranks.get(m).copied().unwrap_or(0);
                let inc = if m == 0 { 0 } else { ranks[m - 1] };
                self.level_dim(m) - out - inc
            })
            .collect()
    }

    /// Alternating sum of level dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.g)
            .map(|m| if m % 2 == 0 { 1 } else { -1 } * self.level_dim(m) as i64)
            .sum()
    }
}

fn check_shape(g: usize, a: &MultiDegree) -> Result<(), DerhamError> {
    if g == 0 {
        return Err(DerhamError::ZeroRank);
    }
    if g > 16 {
        return Err(DerhamError::BadIndex(format!("g = {g} is too large")));
    }
    if a.g() != g {
        return Err(DerhamError::BadIndex(format!("multidegree {a} for g = {g}")));
    }
    Ok(())
}

pub fn build_slice(g: usize, n: u32, a: &MultiDegree) -> Result<KoszulSlice, DerhamError> {
    check_shape(g, a)?;
    let ks = MultiIndex::all_up_to(g, n);
    let levels: Vec<Vec<SliceBasis>> = (0..=g)
        .map(|m| {
            FormIndex::all_of_size(g, m)
                .into_iter()
                .flat_map(|i| ks.iter().map(move |k| (k.clone(), i)))
                .collect()
        })
        .collect();
    let mut slice = KoszulSlice {
        g,
        n,
        a: a.clone(),
        levels,
        d: Vec::with_capacity(g),
    };
    for m in 0..g {
        let mut d = SparseMatrix::zeros(slice.level_dim(m + 1), slice.level_dim(m));
        for (col, (k, i)) in slice.levels[m].iter().enumerate() {
            for mu in 0..g {
                let Some((j, sign)) = i.wedge_front(mu) else { continue };
                let a_mu = a.components()[mu] as i64;
                if a_mu != 0 {
                    let row = slice.index_of(k, j).expect("target in slice");
                    d.add_to(row, col, q(sign * a_mu));
                }
                if k.total() < n {
                    let row = slice.index_of(&k.bump(mu), j).expect("target in slice");
                    d.add_to(row, col, q(sign));
                }
            }
        }
        slice.d.push(d);
    }
    Ok(slice)
}

/// `dim H^m` of the `a = 0` slice.
pub fn cohomology_dim(g: usize, n: u32, m: usize) -> Result<usize, DerhamError> {
    if g == 0 {
        return Err(DerhamError::ZeroRank);
    }
    if m > g {
        return Err(DerhamError::InvalidDegree { m, g });
    }
    Ok(build_slice(g, n, &MultiIndex::zero(g))?.cohomology_dims()[m])
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// Closed form for `dim H^m(G_m^g, Log^N)`.
pub fn formula_dim(g: usize, n: u32, m: usize) -> u64 {
    let (g, n, m) = (g as u64, n as u64, m as u64);
    if m == g {
        1
    } else {
        binomial(n + g - 1 - m, g - 1 - m) * binomial(n + g, m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub g: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub m: usize,
    pub computed_dim: u64,
    pub formula_dim: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub g: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub rows: Vec<DimensionRow>,
}

impl DimensionReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn computed(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.computed_dim).collect()
    }
}

pub fn verify_dimension_formula(g: usize, n: u32) -> Result<DimensionReport, DerhamError> {
    if g == 0 {
        return Err(DerhamError::ZeroRank);
    }
    let dims = build_slice(g, n, &MultiIndex::zero(g))?.cohomology_dims();
    let rows = dims
        .into_iter()
        .enumerate()
        .map(|(m, computed)| {
            let formula = formula_dim(g, n, m);
            DimensionRow {
                g,
                n,
                m,
                computed_dim: computed as u64,
                formula_dim: formula,
                matches: computed as u64 == formula,
            }
        })
        .collect();
    Ok(DimensionReport { g, n, rows })
}

/// Every multidegree in the box `{0, …, max}^g`.
pub fn multidegree_box(g: usize, max: u32) -> Vec<MultiDegree> {
    let mut out = vec![Vec::new()];
    for _ in 0..g {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex::new).collect()
}

/// Per-slice result of [`survey_slices`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceSummary {
    pub a: MultiDegree,
    pub is_complex: bool,
    pub cohomology: Vec<usize>,
    pub euler_characteristic: i64,
}

/// Builds every slice in the box and computes its cohomology, in parallel
/// over multidegrees.
pub fn survey_slices(g: usize, n: u32, max: u32) -> Result<Vec<SliceSummary>, DerhamError> {
    multidegree_box(g, max)
        .into_par_iter()
        .map(|a| {
            let s = build_slice(g, n, &a)?;
            Ok(SliceSummary {
                is_complex: s.is_complex(),
                cohomology: s.cohomology_dims(),
                euler_characteristic: s.euler_characteristic(),
                a,
            })
        })
        .collect()
}
