use crate::linalg::{axpy, Matrix, SparseVec};
use crate::scalars::Scalar;

/// A matrix stored by columns; `cols[j]` is the image of the `j`-th basis
/// vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<SparseVec<Scalar>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for (j, c) in m.cols.iter_mut().enumerate() {
            c.insert(j, Scalar::one());
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        if v.is_zero() {
            self.cols[j].remove(&i);
        } else {
            self.cols[j].insert(i, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &SparseVec<Scalar>) -> SparseVec<Scalar> {
        let mut out = SparseVec::new();
        for (j, x) in v {
            axpy(&mut out, x, &self.cols[*j]);
        }
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix { nrows: self.nrows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                axpy(&mut c, &Scalar::one(), b);
                c
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    /// Kronecker product, index `i·other.nrows + k` by `j·other.ncols + l`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut c = SparseVec::new();
                for (i, x) in a {
                    for (k, y) in b {
                        c.insert(i * other.nrows + k, x * y);
                    }
                }
                cols.push(c);
            }
        }
        SparseMatrix { nrows: self.nrows * other.nrows, cols }
    }

    pub fn to_dense(&self) -> Matrix<Scalar> {
        let mut m = Matrix::zeros(self.nrows, self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn from_dense(m: &Matrix<Scalar>) -> Self {
        let mut s = SparseMatrix::zero(m.nrows, m.ncols);
        for i in 0..m.nrows {
            for j in 0..m.ncols {
                s.set(i, j, m.get(i, j).clone());
            }
        }
        s
    }
}
