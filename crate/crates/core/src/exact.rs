//! Exact rational linear algebra: sparse matrices over `BigRational`, rank
//! and linear solves by Gaussian elimination on connected blocks.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Row-major sparse matrix. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Q>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        if v.is_zero() {
            return;
        }
        let slot = self.data[r].entry(c).or_insert_with(Q::zero);
        *slot += v;
        if slot.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    out.add_to(r, *c, a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, x.len(), "shape mismatch in matrix-vector product");
        self.data
            .iter()
            .map(|row| row.iter().fold(Q::zero(), |acc, (c, v)| acc + v * &x[*c]))
            .collect()
    }

    /// Connected blocks of the bipartite row/column graph. Every nonzero
    /// entry lies inside one block, so ranks and solves split over them.
    fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        // union-find over rows 0..R and columns R..R+C
        let n = self.rows + self.cols;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (r, row) in self.data.iter().enumerate() {
            for c in row.keys() {
                let (a, b) = (find(&mut parent, r), find(&mut parent, self.rows + c));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for r in 0..self.rows {
            if !self.data[r].is_empty() {
                let root = find(&mut parent, r);
                groups.entry(root).or_default().0.push(r);
            }
        }
        for c in 0..self.cols {
            let root = find(&mut parent, self.rows + c);
            if let Some(g) = groups.get_mut(&root) {
                g.1.push(c);
            }
        }
        groups.into_values().collect()
    }

    fn dense_block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Q>> {
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        rows.iter()
            .map(|r| {
                let mut dense = vec![Q::zero(); cols.len()];
                for (c, v) in &self.data[*r] {
                    dense[col_pos[c]] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.blocks()
            .iter()
            .map(|(rows, _)| {
                let block: Vec<BTreeMap<usize, Q>> = rows.iter().map(|r| self.data[*r].clone()).collect();
                sparse_echelon_rank(block)
            })
            .sum()
    }

    /// Basis of the null space, one vector per free column of the reduced
    /// echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let all_rows: Vec<usize> = (0..self.rows).collect();
        let all_cols: Vec<usize> = (0..self.cols).collect();
        let mut m = self.dense_block(&all_rows, &all_cols);
        let pivots = rref(&mut m, None);
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        (0..self.cols)
            .filter(|c| !pivot_set.contains(c))
            .map(|free| {
                let mut v = vec![Q::zero(); self.cols];
                v[free] = Q::one();
                for (r, pc) in pivots.iter().enumerate() {
                    v[*pc] = -m[r][free].clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self · x = b`, or `None` if `b` is not in the image.
    /// Free variables are set to zero, so the support of `x` is contained in
    /// the pivot columns of the reduced echelon form.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut x = vec![Q::zero(); self.cols];
        let mut covered = vec![false; self.rows];
        for (rows, cols) in self.blocks() {
            for r in &rows {
                covered[*r] = true;
            }
            let mut m = self.dense_block(&rows, &cols);
            let mut rhs: Vec<Q> = rows.iter().map(|r| b[*r].clone()).collect();
            let pivots = rref(&mut m, Some(&mut rhs));
            // rows past the rank must have zero right-hand side
            if rhs[pivots.len()..].iter().any(|v| !v.is_zero()) {
                return None;
            }
            for (i, pc) in pivots.iter().enumerate() {
                x[cols[*pc]] = rhs[i].clone();
            }
        }
        // rows with no entries at all
        if b.iter().zip(&covered).any(|(v, c)| !c && !v.is_zero()) {
            return None;
        }
        Some(x)
    }
}

/// In-place reduced row echelon form; returns pivot columns. Row operations
/// are mirrored on `rhs` when given.
fn rref(m: &mut [Vec<Q>], mut rhs: Option<&mut Vec<Q>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // smallest-height pivot keeps numbers small
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| height(&m[i][c]))
        else {
            continue;
        };
        m.swap(r, p);
        if let Some(b) = rhs.as_deref_mut() {
            b.swap(r, p);
        }
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        if let Some(b) = rhs.as_deref_mut() {
            b[r] *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
                if let Some(b) = rhs.as_deref_mut() {
                    let t = &f * &b[r];
                    b[i] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn height(x: &Q) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Rank by incremental sparse row echelon form: each row is reduced against
/// the pivots found so far and becomes a new pivot if anything survives.
fn sparse_echelon_rank(mut rows: Vec<BTreeMap<usize, Q>>) -> usize {
    rows.sort_by_key(|r| r.len());
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
    for mut row in rows {
        while let Some((&lead, lv)) = row.iter().next() {
            let Some(p) = pivots.get(&lead) else {
                let inv = lv.recip();
                for v in row.values_mut() {
                    *v *= &inv;
                }
                pivots.insert(lead, row);
                break;
            };
            let f = lv.clone();
            for (c, pv) in p {
                let slot = row.entry(*c).or_insert_with(Q::zero);
                *slot -= &f * pv;
                if slot.is_zero() {
                    row.remove(c);
                }
            }
        }
    }
    pivots.len()
}

/// Multivariate polynomial with rational coefficients, keyed by exponent
/// vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(g: usize, c: Q) -> Self {
        Self::monomial(vec![0; g], c)
    }

    pub fn monomial(exponents: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, c);
        p
    }

    /// `t_mu - 1` in `g` variables.
    pub fn coordinate_minus_one(g: usize, mu: usize) -> Self {
        let mut e = vec![0; g];
        e[mu] = 1;
        let mut p = Self::monomial(e, Q::one());
        p.add_term(vec![0; g], -Q::one());
        p
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Polynomial {
        let mut out = Polynomial::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Value at `t = (1, …, 1)`: the sum of the coefficients.
    pub fn at_ones(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, c| a + c)
    }

    pub fn eval(&self, t: &[num_complex::Complex64]) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = num_complex::Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (z, k) in t.iter().zip(e) {
                term *= z.powu(*k);
            }
            acc += term;
        }
        acc
    }
}

/// Indices of the nonzero entries.
pub fn support(x: &[Q]) -> BTreeSet<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, _)| i)
        .collect()
}
