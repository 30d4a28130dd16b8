//! Connection matrices in the three bases, and the exact check that the
//! u-basis is horizontal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{BasisKind, MultiIndex};

/// Scalar 1-form attached to a connection entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FormSymbol {
    /// `dt_μ / t_μ`
    Dlog(usize),
    /// `Im(dt_μ / t_μ)`
    ImDlog(usize),
}

impl std::fmt::Display for FormSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormSymbol::Dlog(mu) => write!(f, "dt{}/t{}", mu + 1, mu + 1),
            FormSymbol::ImDlog(mu) => write!(f, "Im(dt{}/t{})", mu + 1, mu + 1),
        }
    }
}

/// `∇ b^{col} = Σ symbol · b^{row}` over the entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShiftEntry {
    pub row: usize,
    pub col: usize,
    pub symbol: FormSymbol,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionMatrix {
    pub kind: &'static str,
    pub basis: Vec<MultiIndex>,
    pub entries: Vec<ShiftEntry>,
}

impl ConnectionMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// 0/1 matrix of the entries carrying the given symbol.
    pub fn dense(&self, symbol: FormSymbol) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.dim()]; self.dim()];
        for e in self.entries.iter().filter(|e| e.symbol == symbol) {
            m[e.row][e.col] = 1;
        }
        m
    }
}

pub fn connection_matrix(kind: &BasisKind, g: usize, n: u32) -> ConnectionMatrix {
    let basis = MultiIndex::all_up_to(g, n);
    let position: BTreeMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let symbol = match kind {
        BasisKind::Omega => Some(FormSymbol::Dlog as fn(usize) -> FormSymbol),
        BasisKind::E => Some(FormSymbol::ImDlog as fn(usize) -> FormSymbol),
        BasisKind::U { .. } => None,
    };
    let mut entries = Vec::new();
    if let Some(symbol) = symbol {
        for (col, k) in basis.iter().enumerate() {
            for mu in 0..g {
                let k1 = k.bump(mu);
                if let Some(&row) = position.get(&k1) {
                    entries.push(ShiftEntry {
                        row,
                        col,
                        symbol: symbol(mu),
                    });
                }
            }
        }
    }
    ConnectionMatrix {
        kind: kind.name(),
        basis,
        entries,
    }
}

/// Polynomial in the branch logarithms `ℓ_ν = log t_ν` with exact rational
/// coefficients, keyed by exponent vector.
pub type LogPolynomial = BTreeMap<MultiIndex, BigRational>;

fn add_term(p: &mut LogPolynomial, mono: MultiIndex, c: BigRational) {
    let slot = p.entry(mono.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&mono);
    }
}

/// The section `u^k / (2πi)^{|k|} = Σ_m Π (-ℓ_ν)^{m_ν}/m_ν! · ω^{k+m}`.
pub fn u_section_symbolic(g: usize, n: u32, k: &MultiIndex) -> BTreeMap<MultiIndex, LogPolynomial> {
    let mut out = BTreeMap::new();
    if k.total() > n {
        return out;
    }
    let fact = |m: u32| -> BigInt { (1..=m).fold(BigInt::one(), |a, b| a * BigInt::from(b)) };
    for m in MultiIndex::all_up_to(g, n - k.total()) {
        let den = m.components().iter().fold(BigInt::one(), |a, &b| a * fact(b));
        let sign = if m.total() % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let mut p = LogPolynomial::new();
        p.insert(m.clone(), BigRational::new(sign, den));
        out.insert(k.add(&m), p);
    }
    out
}

/// `∇` of an ω-basis section whose coefficients are polynomials in the
/// branch logarithms, using `dℓ_μ = dt_μ/t_μ`. Keys are `(j, μ)` for the
/// component `ω^j ⊗ dt_μ/t_μ`; only nonzero components are returned.
pub fn nabla_symbolic(
    g: usize,
    n: u32,
    section: &BTreeMap<MultiIndex, LogPolynomial>,
) -> BTreeMap<(MultiIndex, usize), LogPolynomial> {
    let mut out: BTreeMap<(MultiIndex, usize), LogPolynomial> = BTreeMap::new();
    for (j, poly) in section {
        for (mono, c) in poly {
            for mu in 0..g {
                // derivative of the coefficient
                let e = mono.components()[mu];
                if e > 0 {
                    let mut lower = mono.components().to_vec();
                    lower[mu] -= 1;
                    let d = c * BigRational::from_integer(BigInt::from(e));
                    add_term(out.entry((j.clone(), mu)).or_default(), MultiIndex::new(lower), d);
                }
                // connection term
                if j.total() < n {
                    add_term(out.entry((j.bump(mu), mu)).or_default(), mono.clone(), c.clone());
                }
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// `∇(u^k)` in the ω-basis; horizontality is an empty map.
pub fn nabla_u_symbolic(g: usize, n: u32, k: &MultiIndex) -> BTreeMap<(MultiIndex, usize), LogPolynomial> {
    nabla_symbolic(g, n, &u_section_symbolic(g, n, k))
}
