//! Dense matrices over a [`Field`] and Gaussian elimination.

use crate::gf::{Elem, Field};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            for v in self.row_mut(r) {
                *v = field.mul(*v, inv);
            }
            let pivot_row: Vec<Elem> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                let row = self.row_mut(i);
                for (v, &pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *v = field.sub(*v, field.mul(factor, pv));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }
}

/// Incrementally grown echelon basis of a row space.
///
/// Rows are kept with a pivot column each; a new vector is reduced against
/// them in insertion order.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    len: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, len: usize) -> EchelonBasis {
        EchelonBasis { field: field.clone(), len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.len);
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(row).skip(pc) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        w
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if it is independent of the current span; returns whether
    /// it was added.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

/// Indices of the first maximal independent subset of rows, in order.
pub fn independent_rows(field: &Field, m: &Matrix) -> Vec<usize> {
    let mut basis = EchelonBasis::new(field, m.cols());
    (0..m.rows()).filter(|&r| basis.insert(m.row(r))).collect()
}

/// Solves `a * x = b`; free variables are set to zero. `None` when the
/// system is inconsistent.
pub fn solve(field: &Field, a: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for r in 0..a.rows() {
        aug.row_mut(r)[..n].copy_from_slice(a.row(r));
        aug.set(r, n, b[r]);
    }
    let pivots = aug.rref(field);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Elem::ZERO; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n);
    }
    Some(x)
}

/// Solves `x * a = b` for a row vector `x`.
pub fn solve_left(field: &Field, a: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    solve(field, &a.transpose(), b)
}

/// `x * a` for a row vector `x`.
pub fn vec_mat(field: &Field, x: &[Elem], a: &Matrix) -> Vec<Elem> {
    assert_eq!(x.len(), a.rows());
    let mut out = vec![Elem::ZERO; a.cols()];
    for (r, &c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(a.row(r)) {
            *o = field.add(*o, field.mul(c, v));
        }
    }
    out
}
