//! Exact linear algebra over a field: sparse echelon bases (row spaces,
//! quotients, kernels) and small dense matrices.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero, and for nonzero elements the representation cannot invert.
    fn inv(&self) -> Option<Self>;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
}

pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn sparse_from_dense<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn dense_from_sparse<F: Field>(v: &SparseVec<F>, n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `v += f·w`, dropping cancelled entries.
pub fn axpy<F: Field>(v: &mut SparseVec<F>, f: &F, w: &SparseVec<F>) {
    for (i, x) in w {
        let add = f.mul(x);
        match v.get_mut(i) {
            Some(y) => {
                *y = y.add(&add);
                if y.is_zero() {
                    v.remove(i);
                }
            }
            None => {
                if !add.is_zero() {
                    v.insert(*i, add);
                }
            }
        }
    }
}

/// A row space in echelon form: every row has leading entry `1` at its pivot
/// column and all its other entries lie to the right.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(ncols: usize) -> Self {
        EchelonBasis { ncols, rows: BTreeMap::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVec<F>>>(ncols: usize, rows: I) -> Result<Self> {
        let mut b = Self::new(ncols);
        for r in rows {
            b.insert(r)?;
        }
        Ok(b)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect()
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        let mut cursor = 0;
        loop {
            let next = v.range(cursor..).map(|(c, _)| *c).find(|c| self.rows.contains_key(c));
            let Some(c) = next else { break };
            let f = v[&c].neg();
            axpy(&mut v, &f, &self.rows[&c]);
            cursor = c + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> Result<bool> {
        let mut v = self.reduce(v);
        let Some((&lead, x)) = v.iter().next() else { return Ok(false) };
        let inv = x.inv().ok_or(Error::NonUnitPivot(lead))?;
        for y in v.values_mut() {
            *y = y.mul(&inv);
        }
        // Keep the new row reduced against existing pivots on its right too.
        v = self.reduce(v);
        self.rows.insert(lead, v);
        Ok(true)
    }

    /// Reduced row echelon form: every pivot column is zero outside its row.
    pub fn fully_reduce(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for p in pivots {
            let row = self.rows.remove(&p).unwrap();
            let mut tail = row.clone();
            tail.remove(&p);
            let mut reduced = self.reduce(tail);
            reduced.insert(p, F::one());
            self.rows.insert(p, reduced);
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec<F>)> {
        self.rows.iter().map(|(c, r)| (*c, r))
    }

    /// Basis of `{x : row·x = 0 for every row}`.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        let mut rref = self.clone();
        rref.fully_reduce();
        rref.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = SparseVec::new();
                x.insert(f, F::one());
                for (p, row) in &rref.rows {
                    if let Some(v) = row.get(&f) {
                        x.insert(*p, v.neg());
                    }
                }
                x
            })
            .collect()
    }

    /// Whether two row spaces coincide.
    pub fn same_span(&self, other: &Self) -> bool {
        self.ncols == other.ncols
            && self.rank() == other.rank()
            && other.rows.values().all(|r| self.contains(r))
    }
}

/// Dense matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Vec<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, ncols, data: vec![vec![F::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { nrows, ncols, data: rows }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.ncols, other.nrows, "matrix product shape");
        let mut out: Matrix<F> = Matrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = out.data[i][j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.ncols, v.len());
        self.data
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(F::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(b))
                    }
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut out = Matrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        let data = self.data.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, data }
    }

    /// Kronecker product; index `(i, j)` of the factors maps to `i·dim_b + j`.
    pub fn kron(&self, other: &Matrix<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(self.nrows * other.nrows, self.ncols * other.ncols);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                let a = &self.data[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.nrows {
                    for l in 0..other.ncols {
                        let b = &other.data[k][l];
                        if !b.is_zero() {
                            out.data[i * other.nrows + k][j * other.ncols + l] = a.mul(b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn row_space(&self) -> Result<EchelonBasis<F>> {
        EchelonBasis::from_rows(self.ncols, self.data.iter().map(|r| sparse_from_dense(r)))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.row_space()?.rank())
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(self.nrows == self.ncols && self.rank()? == self.nrows)
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Result<Vec<Vec<F>>> {
        let basis = self.row_space()?;
        Ok(basis.kernel().iter().map(|v| dense_from_sparse(v, self.ncols)).collect())
    }

    pub fn determinant(&self) -> Result<F> {
        assert_eq!(self.nrows, self.ncols, "determinant of a non-square matrix");
        let n = self.nrows;
        let mut a = self.data.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Ok(F::zero()) };
            if p != c {
                a.swap(p, c);
                det = det.neg();
            }
            let inv = a[c][c].inv().ok_or(Error::NonUnitPivot(c))?;
            det = det.mul(&a[c][c]);
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].mul(&inv);
                for k in c..n {
                    let t = f.mul(&a[c][k]);
                    a[r][k] = a[r][k].sub(&t);
                }
            }
        }
        Ok(det)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect())
    }

    #[test]
    fn rank_and_kernel() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank().unwrap(), 2);
        let ker = m.kernel().unwrap();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(|x| Field::is_zero(x)));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(m.determinant().unwrap(), rat(18, 1));
        assert!(m.is_invertible().unwrap());
        assert!(!q(&[&[1, 2], &[2, 4]]).is_invertible().unwrap());
    }

    #[test]
    fn reduce_gives_quotient_coordinates() {
        let mut b = EchelonBasis::<Rational>::new(3);
        b.insert(sparse_from_dense(&[rat(1, 1), rat(-1, 1), rat(0, 1)])).unwrap();
        assert!(!b.insert(sparse_from_dense(&[rat(2, 1), rat(-2, 1), rat(0, 1)])).unwrap());
        // e0 ≡ e1 modulo the span.
        let r0 = b.reduce(sparse_from_dense(&[rat(1, 1), rat(0, 1), rat(0, 1)]));
        let r1 = b.reduce(sparse_from_dense(&[rat(0, 1), rat(1, 1), rat(0, 1)]));
        assert_eq!(r0, r1);
        assert_eq!(b.free_columns(), vec![1, 2]);
    }

    #[test]
    fn kron_indexing() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let b = q(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), &rat(1, 1));
        assert_eq!(k.get(3, 2), &rat(4, 1));
        assert_eq!(k.get(2, 1), &rat(3, 1));
    }

    #[test]
    fn same_span_ignores_basis_choice() {
        let a = q(&[&[1, 1, 0], &[0, 1, 1]]).row_space().unwrap();
        let b = q(&[&[1, 2, 1], &[1, 0, -1]]).row_space().unwrap();
        assert!(a.same_span(&b));
        let c = q(&[&[1, 0, 0], &[0, 1, 1]]).row_space().unwrap();
        assert!(!a.same_span(&c));
    }
}
