//! The truncated logarithm sheaf `Log^N` on `G_m^g` as a finite free module.
//!
//! A fiber element is a [`LogVector`]: complex coefficients on the basis
//! elements indexed by multi-indices `k ∈ ℕ^g` with `|k| <= N`, in one of
//! three bases (ω, u, e) and with a Tate twist. The ω-basis is the
//! holomorphic frame, u is horizontal for a chosen branch of `log t`, and e
//! is the real-analytic frame adapted to the real structure.

mod basis;
mod connection;
mod filtration;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use basis::{e_to_omega, omega_to_e, omega_to_u, to_omega, u_to_omega, BRANCH_TOL};
pub use connection::{
    connection_matrix, nabla_symbolic, nabla_u_symbolic, u_section_symbolic, ConnectionMatrix, FormSymbol,
    LogPolynomial, ShiftEntry,
};
pub use filtration::{
    filtration_degree, filtration_degree_at, graded_dimension, splitting_pullback, FiltrationDegree, SplitVector,
    TORSION_TOL,
};

/// Exponent vector `k ∈ ℕ^g`. Ordered by total degree, then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        Self(components)
    }

    pub fn zero(g: usize) -> Self {
        Self(vec![0; g])
    }

    pub fn unit(g: usize, mu: usize) -> Self {
        let mut v = vec![0; g];
        v[mu] = 1;
        Self(v)
    }

    /// `m` in coordinate `mu`, zero elsewhere.
    pub fn along(g: usize, mu: usize, m: u32) -> Self {
        let mut v = vec![0; g];
        v[mu] = m;
        Self(v)
    }

    pub fn g(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn bump(&self, mu: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[mu] += 1;
        MultiIndex(v)
    }

    /// `self - other` if componentwise non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All `k ∈ ℕ^g` with `|k| <= n`, in the canonical order.
    pub fn all_up_to(g: usize, n: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for total in 0..=n {
            out.extend(Self::all_of_degree(g, total));
        }
        out
    }

    /// All `k ∈ ℕ^g` with `|k| = n`, in lexicographic order.
    pub fn all_of_degree(g: usize, n: u32) -> Vec<MultiIndex> {
        fn rec(g: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == g {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(g, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if g == 0 {
            return out;
        }
        rec(g, n, &mut Vec::with_capacity(g), &mut out);
        out
    }

    /// Multiplicative factor `Π x_ν^{k_ν} / k_ν!`.
    pub(crate) fn divided_power(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (&k, &xv) in self.0.iter().zip(x) {
            for j in 1..=k {
                acc *= xv / j as f64;
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum BasisKind {
    Omega,
    /// Horizontal basis for the branch `log t_ν = branch[ν]`.
    U {
        branch: Vec<Complex64>,
    },
    E,
}

impl BasisKind {
    pub fn name(&self) -> &'static str {
        match self {
            BasisKind::Omega => "omega",
            BasisKind::U { .. } => "u",
            BasisKind::E => "e",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogSheafError {
    #[error("coordinate t_{0} is zero")]
    ZeroCoordinate(usize),
    #[error("branch value for coordinate {mu} does not exponentiate to t_{mu} (|exp(log) - t| = {err:e})")]
    BranchMismatch { mu: usize, err: f64 },
    #[error("expected a vector in the {expected} basis, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("dimension mismatch: vector has g = {expected}, argument has {found} coordinates")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("multi-index {k} exceeds truncation N = {n} or has wrong length")]
    BadIndex { k: MultiIndex, n: u32 },
    #[error("the zero vector has no filtration degree")]
    ZeroVector,
    #[error("coordinate {mu} = {value} is not a {d}-th root of unity")]
    NotTorsion { mu: usize, value: Complex64, d: u32 },
    #[error("the e-basis filtration needs the evaluation point")]
    PointRequired,
}

/// Fiber element of `Log^N(n)` in a chosen basis. Absent keys are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::LogVectorRepr", into = "repr::LogVectorRepr")]
pub struct LogVector {
    g: usize,
    n: u32,
    twist: i32,
    kind: BasisKind,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl LogVector {
    pub fn zero(g: usize, n: u32, twist: i32, kind: BasisKind) -> Self {
        Self {
            g,
            n,
            twist,
            kind,
            coeffs: BTreeMap::new(),
        }
    }

    /// A single basis element with coefficient one.
    pub fn basis(g: usize, n: u32, twist: i32, kind: BasisKind, k: MultiIndex) -> Result<Self, LogSheafError> {
        let mut v = Self::zero(g, n, twist, kind);
        v.set(k, Complex64::new(1.0, 0.0))?;
        Ok(v)
    }

    pub fn from_coeffs(
        g: usize,
        n: u32,
        twist: i32,
        kind: BasisKind,
        coeffs: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self, LogSheafError> {
        let mut v = Self::zero(g, n, twist, kind);
        for (k, c) in coeffs {
            let prev = v.get(&k);
            v.set(k, prev + c)?;
        }
        Ok(v)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    pub fn twist(&self) -> i32 {
        self.twist
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn get(&self, k: &MultiIndex) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn set(&mut self, k: MultiIndex, c: Complex64) -> Result<(), LogSheafError> {
        if k.g() != self.g || k.total() > self.n {
            return Err(LogSheafError::BadIndex { k, n: self.n });
        }
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient modulus, 0 for the zero vector.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against a vector of the same shape.
    pub fn max_diff(&self, other: &LogVector) -> f64 {
        let keys: std::collections::BTreeSet<_> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter()
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }

    /// The nilpotent operator `ω_μ`, which sends the basis element with
    /// index `k` to the one with index `k + 1_μ` (zero past the truncation).
    /// In the e- and u-bases this is `ω_μ` up to the scalars `-i` and
    /// `(2πi)^{-1}`; the shift itself is basis-agnostic.
    pub fn shift(&self, mu: usize) -> LogVector {
        let mut out = Self::zero(self.g, self.n, self.twist, self.kind.clone());
        for (k, c) in &self.coeffs {
            let k1 = k.bump(mu);
            if k1.total() <= self.n {
                out.coeffs.insert(k1, *c);
            }
        }
        out
    }

    /// Projection `Log^N -> Log^M` for `M <= N` (drops `|k| > M`).
    pub fn project(&self, m: u32) -> LogVector {
        let mut out = Self::zero(self.g, m.min(self.n), self.twist, self.kind.clone());
        for (k, c) in &self.coeffs {
            if k.total() <= m {
                out.coeffs.insert(k.clone(), *c);
            }
        }
        out
    }

    pub(crate) fn with_coeffs(&self, kind: BasisKind, coeffs: BTreeMap<MultiIndex, Complex64>) -> LogVector {
        LogVector {
            g: self.g,
            n: self.n,
            twist: self.twist,
            kind,
            coeffs,
        }
    }

    fn expect_kind(&self, expected: &'static str) -> Result<(), LogSheafError> {
        if self.kind.name() != expected {
            return Err(LogSheafError::WrongKind {
                expected,
                found: self.kind.name(),
            });
        }
        Ok(())
    }

    fn expect_point(&self, t: &[Complex64]) -> Result<(), LogSheafError> {
        if t.len() != self.g {
            return Err(LogSheafError::DimensionMismatch {
                expected: self.g,
                found: t.len(),
            });
        }
        if let Some(mu) = t.iter().position(|z| z.norm() == 0.0) {
            return Err(LogSheafError::ZeroCoordinate(mu));
        }
        Ok(())
    }
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub(super) struct Entry {
        k: Vec<u32>,
        re: f64,
        im: f64,
    }

    #[derive(Serialize, Deserialize)]
    pub(super) struct LogVectorRepr {
        g: usize,
        #[serde(rename = "N")]
        n: u32,
        twist: i32,
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        branch: Option<Vec<[f64; 2]>>,
        entries: Vec<Entry>,
    }

    impl From<LogVector> for LogVectorRepr {
        fn from(v: LogVector) -> Self {
            let branch = match &v.kind {
                BasisKind::U { branch } => Some(branch.iter().map(|z| [z.re, z.im]).collect()),
                _ => None,
            };
            LogVectorRepr {
                g: v.g,
                n: v.n,
                twist: v.twist,
                kind: v.kind.name().to_string(),
                branch,
                entries: v
                    .coeffs
                    .into_iter()
                    .map(|(k, c)| Entry {
                        k: k.0,
                        re: c.re,
                        im: c.im,
                    })
                    .collect(),
            }
        }
    }

    impl TryFrom<LogVectorRepr> for LogVector {
        type Error = String;

        fn try_from(r: LogVectorRepr) -> Result<Self, Self::Error> {
            let kind = match (r.kind.as_str(), r.branch) {
                ("omega", None) => BasisKind::Omega,
                ("e", None) => BasisKind::E,
                ("u", Some(b)) => {
                    if b.len() != r.g {
                        return Err(format!("branch has {} entries, expected {}", b.len(), r.g));
                    }
                    BasisKind::U {
                        branch: b.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
                    }
                }
                ("u", None) => return Err("kind u requires a branch".into()),
                (k, Some(_)) if k == "omega" || k == "e" => return Err(format!("kind {k} does not take a branch")),
                (k, _) => return Err(format!("unknown basis kind {k:?}")),
            };
            LogVector::from_coeffs(
                r.g,
                r.n,
                r.twist,
                kind,
                r.entries
                    .into_iter()
                    .map(|e| (MultiIndex(e.k), Complex64::new(e.re, e.im))),
            )
            .map_err(|e| e.to_string())
        }
    }
}
