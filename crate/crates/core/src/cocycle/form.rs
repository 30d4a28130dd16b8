use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::derham::FormIndex;
use crate::logsheaf::{LogVector, MultiIndex};

type Key = (MultiIndex, FormIndex, FormIndex);

/// Value at a point of a `Log^N(twist)`-valued differential form:
/// coefficient of `e^k ⊗ dt_H ∧ dt̄_A` for `k` with `|k| <= N`, where
/// `dt_H` wedges the `dt_μ` (μ ∈ H) in increasing order, followed likewise
/// by the `dt̄_ν` (ν ∈ A).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "repr::FormValueRepr", try_from = "repr::FormValueRepr")]
pub struct FormValue {
    g: usize,
    n: u32,
    twist: i32,
    entries: BTreeMap<Key, Complex64>,
}

impl FormValue {
    pub fn zero(g: usize, n: u32, twist: i32) -> Self {
        Self {
            g,
            n,
            twist,
            entries: BTreeMap::new(),
        }
    }

    /// A 0-form with the coefficients of an e-basis vector.
    pub fn from_section(v: &LogVector) -> Self {
        let mut f = Self::zero(v.g(), v.truncation(), v.twist());
        for (k, c) in v.iter() {
            f.add(k.clone(), FormIndex::empty(), FormIndex::empty(), *c);
        }
        f
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

    pub fn get(&self, k: &MultiIndex, hol: FormIndex, antihol: FormIndex) -> Complex64 {
        self.entries
            .get(&(k.clone(), hol, antihol))
            .copied()
            .unwrap_or_default()
    }

    /// Adds `c` to an entry; terms with `|k| > N` are dropped.
    pub fn add(&mut self, k: MultiIndex, hol: FormIndex, antihol: FormIndex, c: Complex64) {
        debug_assert_eq!(k.g(), self.g);
        if k.total() > self.n || c == Complex64::default() {
            return;
        }
        *self.entries.entry((k, hol, antihol)).or_default() += c;
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, FormIndex, FormIndex, Complex64)> {
        self.entries.iter().map(|((k, h, a), c)| (k, *h, *a, *c))
    }

    /// Form degrees `|H| + |A|` present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.entries.keys().map(|(_, h, a)| h.len() + a.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn plus(&self, other: &FormValue) -> FormValue {
        let mut out = self.clone();
        for (k, h, a, c) in other.entries() {
            out.add(k.clone(), h, a, c);
        }
        out
    }

    pub fn minus(&self, other: &FormValue) -> FormValue {
        self.plus(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> FormValue {
        FormValue {
            entries: self.entries.iter().map(|(key, c)| (key.clone(), c * s)).collect(),
            ..self.clone()
        }
    }

    /// `self ∧ other` with the Log parts multiplied as the external tensor
    /// product `e^k ⊗ e^l = e^{k+l}`. Meaningful when the two factors carry
    /// Log coefficients in disjoint sets of coordinates.
    pub fn wedge(&self, other: &FormValue) -> FormValue {
        let mut out = FormValue::zero(self.g, self.n.min(other.n), self.twist + other.twist);
        for ((k1, h1, a1), c1) in &self.entries {
            for ((k2, h2, a2), c2) in &other.entries {
                let Some((h, s1)) = h1.wedge(*h2) else { continue };
                let Some((a, s2)) = a1.wedge(*a2) else { continue };
                // move dt_{H2} left across dt̄_{A1}
                let s3 = if a1.len() * h2.len() % 2 == 0 { 1 } else { -1 };
                out.add(k1.add(k2), h, a, c1 * c2 * (s1 * s2 * s3) as f64);
            }
        }
        out
    }

    /// Complex conjugation for the real structure in which `e^k` is real and
    /// the twist `(n)` contributes `(2πi)^n`: coefficients are conjugated and
    /// multiplied by `(-1)^twist`, and `dt ↔ dt̄`.
    pub fn conj(&self) -> FormValue {
        let twist_sign = if self.twist.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let mut out = FormValue::zero(self.g, self.n, self.twist);
        for ((k, h, a), c) in &self.entries {
            // dt̄_H ∧ dt_A reordered to dt_A ∧ dt̄_H
            let reorder = if h.len() * a.len() % 2 == 0 { 1.0 } else { -1.0 };
            out.add(k.clone(), *a, *h, c.conj() * twist_sign * reorder);
        }
        out
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &FormValue) -> f64 {
        self.minus(other).max_norm()
    }

    /// Entries with `|k| < m`.
    pub fn below(&self, m: u32) -> FormValue {
        FormValue {
            entries: self
                .entries
                .iter()
                .filter(|((k, _, _), _)| k.total() < m)
                .map(|(key, c)| (key.clone(), *c))
                .collect(),
            ..self.clone()
        }
    }
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct Entry {
        k: MultiIndex,
        hol: FormIndex,
        antihol: FormIndex,
        re: f64,
        im: f64,
    }

    #[derive(Serialize, Deserialize)]
    pub struct FormValueRepr {
        g: usize,
        #[serde(rename = "N")]
        n: u32,
        twist: i32,
        entries: Vec<Entry>,
    }

    impl From<FormValue> for FormValueRepr {
        fn from(f: FormValue) -> Self {
            FormValueRepr {
                g: f.g,
                n: f.n,
                twist: f.twist,
                entries: f
                    .entries
                    .into_iter()
                    .map(|((k, hol, antihol), c)| Entry {
                        k,
                        hol,
                        antihol,
                        re: c.re,
                        im: c.im,
                    })
                    .collect(),
            }
        }
    }

    impl TryFrom<FormValueRepr> for FormValue {
        type Error = String;

        fn try_from(r: FormValueRepr) -> Result<Self, String> {
            let mut f = FormValue::zero(r.g, r.n, r.twist);
            for e in r.entries {
                let in_range = |i: FormIndex| i.members().iter().all(|mu| *mu < r.g);
                if e.k.g() != r.g || e.k.total() > r.n || !in_range(e.hol) || !in_range(e.antihol) {
                    return Err(format!("entry {} out of range", e.k));
                }
                f.add(e.k, e.hol, e.antihol, Complex64::new(e.re, e.im));
            }
            Ok(f)
        }
    }
}
