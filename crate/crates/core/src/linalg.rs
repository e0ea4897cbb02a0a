//! Exact rational linear algebra: incremental row echelon forms, nullspaces,
//! column-sparse operator matrices and parametrized linear solves.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::lincomb::LinComb;
use crate::scalar::Q;

/// Column-sparse matrix: `cols[j]` lists the nonzero `(row, value)` of column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// `M · v`.
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, c) in col {
                out[*i] += c * &v[j];
            }
        }
        out
    }

    /// `r · M` for a row vector `r`.
    pub fn row_mul(&self, r: &[Q]) -> Vec<Q> {
        self.cols
            .iter()
            .map(|col| {
                let mut acc = Q::zero();
                for (i, c) in col {
                    if !r[*i].is_zero() {
                        acc += &r[*i] * c;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ncols];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, c) in col {
                if *r == i {
                    out[j] = c.clone();
                }
            }
        }
        out
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                out[*i][j] = c.clone();
            }
        }
        out
    }
}

/// Reduced row echelon form maintained under insertion.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ncols: usize) -> Self {
        let mut e = Self::new(ncols);
        for i in 0..ncols {
            let mut r = vec![Q::zero(); ncols];
            r[i] = Q::one();
            e.rows.push(r);
            e.pivots.push(i);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Inserts `v`; returns `true` if it was independent of the stored rows.
    pub fn insert(&mut self, v: Vec<Q>) -> bool {
        if self.is_full() {
            return false;
        }
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Basis of `{x : row · x = 0 for every stored row}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.ncols];
                x[f] = Q::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    x[p] = -row[f].clone();
                }
                x
            })
            .collect()
    }
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Basis of the right nullspace `{x : A x = 0}`.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.kernel()
}

/// A linear form in the parameters of a solution family.
pub type LinForm = LinComb<usize>;

/// Allocator of fresh parameters for parametrized solves.
#[derive(Clone, Debug, Default)]
pub struct Params {
    count: usize,
}

impl Params {
    pub fn fresh(&mut self) -> LinForm {
        let p = self.count;
        self.count += 1;
        LinForm::basis(p)
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Solves `M X = R` for a `ncols × k` matrix `X` of linear forms, where each
/// equation row is `(m_row, r_row)` with `r_row` of length `k`.
///
/// Entries of `X` at free columns of `M` become fresh parameters; rows of `M`
/// that reduce to zero yield constraints `r = 0`, returned alongside.
pub fn solve_parametrized(
    ncols: usize,
    k: usize,
    equations: Vec<(Vec<Q>, Vec<LinForm>)>,
    params: &mut Params,
) -> (Vec<Vec<LinForm>>, Vec<LinForm>) {
    let mut pivot_rows: Vec<(usize, Vec<Q>, Vec<LinForm>)> = Vec::new();
    let mut constraints = Vec::new();
    for (mut m, mut r) in equations {
        for (p, pm, pr) in pivot_rows.iter() {
            if m[*p].is_zero() {
                continue;
            }
            let f = m[*p].clone();
            for (x, y) in m.iter_mut().zip(pm) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in r.iter_mut().zip(pr) {
                x.add_scaled(y, &-f.clone());
            }
        }
        match m.iter().position(|x| !x.is_zero()) {
            None => constraints.extend(r.into_iter().filter(|f| !f.is_zero())),
            Some(p) => {
                let inv = Q::one() / &m[p];
                for x in m.iter_mut() {
                    *x *= &inv;
                }
                r = r.into_iter().map(|f| f.scale(&inv)).collect();
                for (_, pm, pr) in pivot_rows.iter_mut() {
                    if pm[p].is_zero() {
                        continue;
                    }
                    let f = pm[p].clone();
                    for (x, y) in pm.iter_mut().zip(&m) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                    for (x, y) in pr.iter_mut().zip(&r) {
                        x.add_scaled(y, &-f.clone());
                    }
                }
                pivot_rows.push((p, m, r));
            }
        }
    }
    let pivots: Vec<usize> = pivot_rows.iter().map(|(p, _, _)| *p).collect();
    let mut x: Vec<Vec<LinForm>> = vec![vec![LinForm::zero(); k]; ncols];
    for c in 0..ncols {
        if !pivots.contains(&c) {
            for entry in x[c].iter_mut() {
                *entry = params.fresh();
            }
        }
    }
    for (p, m, r) in pivot_rows.iter() {
        for j in 0..k {
            let mut val = r[j].clone();
            for (c, coef) in m.iter().enumerate() {
                if c != *p && !coef.is_zero() {
                    let free = x[c][j].clone();
                    val.add_scaled(&free, &-coef.clone());
                }
            }
            x[*p][j] = val;
        }
    }
    (x, constraints)
}
