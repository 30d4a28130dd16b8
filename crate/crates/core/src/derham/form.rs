//! Polynomial logarithmic forms with `Log^N` coefficients and the inductive
//! reduction of cocycles to the top graded piece `|k| = N`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{DerhamError, FormIndex, MultiDegree};
use crate::exact::{q, SparseMatrix, Q};
use crate::logsheaf::MultiIndex;

/// `Σ c · t^a ω^k ⊗ dlog t_I` with all `|I| = degree`. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogFormSymbolic {
    g: usize,
    n: u32,
    degree: usize,
    terms: BTreeMap<(MultiIndex, FormIndex), BTreeMap<MultiDegree, Q>>,
}

impl LogFormSymbolic {
    pub fn zero(g: usize, n: u32, degree: usize) -> Self {
        Self {
            g,
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `c · t^a ω^k ⊗ dlog t_I`.
    pub fn add_term(&mut self, k: MultiIndex, i: FormIndex, a: MultiDegree, c: Q) -> Result<(), DerhamError> {
        if k.g() != self.g || a.g() != self.g || k.total() > self.n {
            return Err(DerhamError::BadIndex(format!(
                "ω^{k} t^{a} in Log^{} on g = {}",
                self.n, self.g
            )));
        }
        if i.len() != self.degree || i.members().iter().any(|mu| *mu >= self.g) {
            return Err(DerhamError::BadIndex(format!(
                "form index {:?} in degree {}",
                i.members(),
                self.degree
            )));
        }
        self.add_unchecked(k, i, a, c);
        Ok(())
    }

    fn add_unchecked(&mut self, k: MultiIndex, i: FormIndex, a: MultiDegree, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (k, i);
        let poly = self.terms.entry(key.clone()).or_default();
        let slot = poly.entry(a.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            poly.remove(&a);
            if poly.is_empty() {
                self.terms.remove(&key);
            }
        }
    }

    pub fn coefficient(&self, k: &MultiIndex, i: FormIndex, a: &MultiDegree) -> Q {
        self.terms
            .get(&(k.clone(), i))
            .and_then(|p| p.get(a))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Iterates over `(k, I, a, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, FormIndex, &MultiDegree, &Q)> {
        self.terms
            .iter()
            .flat_map(|((k, i), p)| p.iter().map(move |(a, c)| (k, *i, a, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest and smallest `|k|` present.
    pub fn levels(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|(k, _)| k.total());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    pub fn multidegrees(&self) -> Vec<MultiDegree> {
        let mut out: Vec<MultiDegree> = self.terms().map(|(_, _, a, _)| a.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn sub(&self, other: &LogFormSymbolic) -> LogFormSymbolic {
        let mut out = self.clone();
        for (k, i, a, c) in other.terms() {
            out.add_unchecked(k.clone(), i, a.clone(), -c.clone());
        }
        out
    }

    pub fn add(&self, other: &LogFormSymbolic) -> LogFormSymbolic {
        let mut out = self.clone();
        for (k, i, a, c) in other.terms() {
            out.add_unchecked(k.clone(), i, a.clone(), c.clone());
        }
        out
    }

    /// `∇ = d + Σ_μ ω_μ · dlog t_μ ∧ (-)`, both acting from the left.
    pub fn nabla(&self) -> LogFormSymbolic {
        let mut out = LogFormSymbolic::zero(self.g, self.n, self.degree + 1);
        if self.degree == self.g {
            return out;
        }
        for (k, i, a, c) in self.terms() {
            for mu in 0..self.g {
                let Some((j, sign)) = i.wedge_front(mu) else { continue };
                let a_mu = a.components()[mu];
                if a_mu != 0 {
                    out.add_unchecked(k.clone(), j, a.clone(), c * q(sign * a_mu as i64));
                }
                if k.total() < self.n {
                    out.add_unchecked(k.bump(mu), j, a.clone(), c * q(sign));
                }
            }
        }
        out
    }

    /// The part of multidegree `a` as a vector in the level-`degree` basis
    /// of the corresponding slice.
    pub fn slice_vector(&self, slice: &super::KoszulSlice) -> Vec<Q> {
        let mut v = vec![Q::zero(); slice.level_dim(self.degree)];
        for (k, i, a, c) in self.terms() {
            if *a == slice.a {
                v[slice.index_of(k, i).expect("term fits the slice")] += c;
            }
        }
        v
    }

    /// Inverse of [`slice_vector`](Self::slice_vector).
    pub fn from_slice_vector(slice: &super::KoszulSlice, degree: usize, v: &[Q]) -> LogFormSymbolic {
        let mut out = LogFormSymbolic::zero(slice.g, slice.n, degree);
        for ((k, i), c) in slice.level(degree).iter().zip(v) {
            out.add_unchecked(k.clone(), *i, slice.a.clone(), c.clone());
        }
        out
    }
}

/// Matrix of a linear map between spans of `(k, I)` basis elements, given
/// the image of each column element.
fn restricted_map<F>(cols: &[(MultiIndex, FormIndex)], rows: &[(MultiIndex, FormIndex)], image: F) -> SparseMatrix
where
    F: Fn(&MultiIndex, FormIndex) -> Vec<((MultiIndex, FormIndex), i64)>,
{
    let row_pos: BTreeMap<&(MultiIndex, FormIndex), usize> = rows.iter().enumerate().map(|(p, r)| (r, p)).collect();
    let mut m = SparseMatrix::zeros(rows.len(), cols.len());
    for (c, (k, i)) in cols.iter().enumerate() {
        for (target, v) in image(k, *i) {
            if let Some(r) = row_pos.get(&target) {
                m.add_to(*r, c, q(v));
            }
        }
    }
    m
}

fn level_basis(g: usize, level: u32, degree: usize) -> Vec<(MultiIndex, FormIndex)> {
    let ks = MultiIndex::all_of_degree(g, level);
    FormIndex::all_of_size(g, degree)
        .into_iter()
        .flat_map(|i| ks.iter().map(move |k| (k.clone(), i)))
        .collect()
}

/// Whether two closed forms differ by an exact form, decided slice by slice
/// as membership of the difference in the image of the previous
/// differential.
pub fn cohomologous(x: &LogFormSymbolic, y: &LogFormSymbolic) -> Result<bool, DerhamError> {
    if (x.g, x.n, x.degree) != (y.g, y.n, y.degree) {
        return Err(DerhamError::BadIndex(format!(
            "forms of shape (g, N, degree) = {:?} and {:?}",
            (x.g, x.n, x.degree),
            (y.g, y.n, y.degree)
        )));
    }
    let diff = x.sub(y);
    for a in diff.multidegrees() {
        let s = super::build_slice(x.g, x.n, &a)?;
        let v = diff.slice_vector(&s);
        let exact = if x.degree == 0 {
            v.iter().all(Zero::is_zero)
        } else {
            s.differential(x.degree - 1).solve(&v).is_some()
        };
        if !exact {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Image of a basis form under a scalar Koszul map, as signed target indices.
type ImageFn = Box<dyn Fn(&MultiIndex, FormIndex) -> Vec<((MultiIndex, FormIndex), i64)>>;

/// Reduces a closed form of degree `m < g` to a cohomologous one supported on
/// `|k| = N`.
///
/// Level by level from `|k| = 0`: the part of nonzero multidegree is
/// `(1⊗d)`-exact at that level and is removed by subtracting `∇η` with `η`
/// at the same level; what remains is constant and a cocycle for the ω-shift
/// Koszul complex, so it is the ω-image of a constant form `β` one level down
/// and is removed by subtracting `∇β`. Primitives are the minimal-support
/// solutions of the echelon form.
pub fn reduce_cocycle(xi: &LogFormSymbolic, m: usize) -> Result<LogFormSymbolic, DerhamError> {
    let g = xi.g;
    if xi.degree != m || m >= g {
        return Err(DerhamError::InvalidDegree { m, g });
    }
    if !xi.nabla().is_zero() {
        return Err(DerhamError::NotACocycle);
    }
    let mut cur = xi.clone();
    for level in 0..xi.n {
        let at_level: Vec<_> = cur
            .terms()
            .filter(|(k, _, _, _)| k.total() == level)
            .map(|(k, i, a, c)| (k.clone(), i, a.clone(), c.clone()))
            .collect();
        if at_level.is_empty() {
            continue;
        }
        let rows = level_basis(g, level, m);
        let mut by_degree: BTreeMap<MultiDegree, Vec<Q>> = BTreeMap::new();
        let row_pos: BTreeMap<(MultiIndex, FormIndex), usize> =
            rows.iter().cloned().enumerate().map(|(p, r)| (r, p)).collect();
        for (k, i, a, c) in at_level {
            by_degree.entry(a).or_insert_with(|| vec![Q::zero(); rows.len()])[row_pos[&(k, i)]] += c;
        }
        for (a, target) in by_degree {
            let fail = || DerhamError::SolveFailed {
                level,
                multidegree: a.clone(),
            };
            if m == 0 {
                // nothing maps into degree 0
                return Err(fail());
            }
            let (cols, image): (_, ImageFn) = if a.total() != 0 {
                let a2 = a.clone();
                (
                    level_basis(g, level, m - 1),
                    Box::new(move |k: &MultiIndex, i: FormIndex| {
                        (0..g)
                            .filter_map(|mu| {
                                let (j, s) = i.wedge_front(mu)?;
                                let a_mu = a2.components()[mu] as i64;
                                (a_mu != 0).then(|| ((k.clone(), j), s * a_mu))
                            })
                            .collect()
                    }),
                )
            } else if level > 0 {
                (
                    level_basis(g, level - 1, m - 1),
                    Box::new(move |k: &MultiIndex, i: FormIndex| {
                        (0..g)
                            .filter_map(|mu| {
                                let (j, s) = i.wedge_front(mu)?;
                                Some(((k.bump(mu), j), s))
                            })
                            .collect()
                    }),
                )
            } else {
                return Err(fail());
            };
            let map = restricted_map(&cols, &rows, image);
            let sol = map.solve(&target).ok_or_else(fail)?;
            let mut prim = LogFormSymbolic::zero(g, xi.n, m - 1);
            for ((k, i), c) in cols.into_iter().zip(sol) {
                prim.add_unchecked(k, i, a.clone(), c);
            }
            cur = cur.sub(&prim.nabla());
        }
        debug_assert!(cur.terms().all(|(k, _, _, _)| k.total() != level));
    }
    Ok(cur)
}
