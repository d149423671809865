//! Dense matrices over a [`Field`] with exact Gaussian elimination.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Felt, Field};

/// Row-major matrix of field elements. The matrix does not own its field;
/// every arithmetic operation takes the field explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Felt::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Felt::ONE);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Felt>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn from_indices(cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| Felt::from_index(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Felt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Felt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Felt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_indices(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(|r| r.iter().map(|v| v.index()).collect()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `self * other^T`, i.e. all pairwise Euclidean row products.
    pub fn mul_transpose(&self, other: &Matrix, f: &Field) -> Result<Matrix> {
        self.mul(&other.transpose(), f)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Felt], f: &Field) -> Result<Vec<Felt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok(self.row_iter().map(|r| dot(r, v, f)).collect())
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Felt], f: &Field) -> Result<Vec<Felt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} rows", v.len(), self.rows)));
        }
        let mut out = vec![Felt::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, self.row(i), f);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns the pivot column of each nonzero row.
    /// Zero rows are dropped from the result.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                m.set(r, j, f.mul(inv, m.get(r, j)));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..m.cols {
                    let v = f.add(m.get(i, j), f.mul(neg, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of `{v : self * v = 0}` as the rows of a `(cols - rank) x cols` matrix.
    pub fn null_space(&self, f: &Field) -> Matrix {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (row, &fc) in free.iter().enumerate() {
            out.set(row, fc, Felt::ONE);
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(row, pc, f.neg(r.get(pr, fc)));
            }
        }
        out
    }

    /// Whether the row space of `self` equals the row space of `other`.
    pub fn same_row_space(&self, other: &Matrix, f: &Field) -> bool {
        self.cols == other.cols && self.rref(f).0 == other.rref(f).0
    }

    /// Whether every row of `other` lies in the row space of `self`.
    pub fn row_space_contains(&self, other: &Matrix, f: &Field) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let base = self.rank(f);
        let mut stacked = self.clone();
        stacked.data.extend_from_slice(&other.data);
        stacked.rows += other.rows;
        stacked.rank(f) == base
    }

    /// Applies `g` to every entry.
    pub fn map(&self, g: impl Fn(Felt) -> Felt) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| g(v)).collect() }
    }
}

#[inline]
pub fn dot(a: &[Felt], b: &[Felt], f: &Field) -> Felt {
    a.iter().zip(b).fold(Felt::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `y += c * x`
#[inline]
pub fn axpy(y: &mut [Felt], c: Felt, x: &[Felt], f: &Field) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = f.add(*yi, f.mul(c, xi));
    }
}

pub fn weight(v: &[Felt]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Row-echelon basis that grows one vector at a time; used for greedy
/// independence filtering.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    len: usize,
    rows: Vec<(usize, Vec<Felt>)>,
}

impl IncrementalBasis {
    pub fn new(len: usize) -> Self {
        IncrementalBasis { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the residue.
    pub fn reduce(&self, v: &[Felt], f: &Field) -> Vec<Felt> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if !c.is_zero() {
                axpy(&mut v, f.neg(c), row, f);
            }
        }
        v
    }

    /// Adds `v` if it is independent of the current basis.
    pub fn insert(&mut self, v: &[Felt], f: &Field) -> bool {
        assert_eq!(v.len(), self.len);
        let r = self.reduce(v, f);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(r[pc]).expect("nonzero");
        let r: Vec<Felt> = r.iter().map(|&x| f.mul(inv, x)).collect();
        self.rows.push((pc, r));
        true
    }

    pub fn contains(&self, v: &[Felt], f: &Field) -> bool {
        self.reduce(v, f).iter().all(|x| x.is_zero())
    }
}
