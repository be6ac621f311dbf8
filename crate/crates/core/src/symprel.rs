//! Linear symplectic spaces over Q and lagrangian relations between them.
//!
//! A relation `L: A → B` is a subspace of `A ⊕ B` carrying the form
//! `ω_A ⊕ (−ω_B)`; the zero-dimensional space plays the role of `1`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{sparse_from_dense, EchelonBasis, Matrix, SparseVec};
use crate::scalars::{rat, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct SympSpace {
    omega: Matrix<Rational>,
}

impl SympSpace {
    /// Validates that `omega` is skew-symmetric and nondegenerate.
    pub fn new(omega: Matrix<Rational>) -> Result<Self> {
        let n = omega.nrows;
        if omega.ncols != n || n % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("form must be square of even size, got {}×{}", n, omega.ncols)));
        }
        for i in 0..n {
            for j in 0..n {
                if *omega.get(i, j) != -omega.get(j, i).clone() {
                    return Err(Error::DimensionMismatch(format!("form is not skew at ({i}, {j})")));
                }
            }
        }
        if n > 0 && omega.determinant()?.is_zero() {
            return Err(Error::DimensionMismatch("form is degenerate".into()));
        }
        Ok(SympSpace { omega })
    }

    /// `R^{2k}` with `ω(e_i, f_i) = 1`, coordinates `(e_1..e_k, f_1..f_k)`.
    pub fn standard(k: usize) -> Self {
        let n = 2 * k;
        let mut omega = Matrix::zeros(n, n);
        for i in 0..k {
            omega.set(i, k + i, Rational::one());
            omega.set(k + i, i, -Rational::one());
        }
        SympSpace { omega }
    }

    pub fn zero() -> Self {
        SympSpace { omega: Matrix::zeros(0, 0) }
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows
    }

    pub fn omega(&self) -> &Matrix<Rational> {
        &self.omega
    }

    /// Same space with `−ω`.
    pub fn opposite(&self) -> Self {
        SympSpace { omega: self.omega.scale(&-Rational::one()) }
    }

    /// Block-diagonal form on `A ⊕ B`.
    pub fn direct_sum(&self, other: &SympSpace) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut omega = Matrix::zeros(a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                omega.set(i, j, self.omega.get(i, j).clone());
            }
        }
        for i in 0..b {
            for j in 0..b {
                omega.set(a + i, a + j, other.omega.get(i, j).clone());
            }
        }
        SympSpace { omega }
    }

    pub fn form(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                s += ui * self.omega.get(i, j) * vj;
            }
        }
        s
    }
}

/// A linear relation `A → B`, stored as a reduced echelon basis of a
/// subspace of `A ⊕ B`.
#[derive(Clone, Debug)]
pub struct LinRelation {
    source: SympSpace,
    target: SympSpace,
    span: EchelonBasis<Rational>,
}

impl PartialEq for LinRelation {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.span.same_span(&other.span)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFlags {
    pub isotropic: bool,
    pub coisotropic: bool,
    pub lagrangian: bool,
}

impl LinRelation {
    pub fn from_vectors(source: &SympSpace, target: &SympSpace, vectors: &[Vec<Rational>]) -> Result<Self> {
        let n = source.dim() + target.dim();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("vectors must have length {n}")));
        }
        let mut span = EchelonBasis::from_rows(n, vectors.iter().map(|v| sparse_from_dense(v)))?;
        span.fully_reduce();
        Ok(LinRelation { source: source.clone(), target: target.clone(), span })
    }

    pub fn source(&self) -> &SympSpace {
        &self.source
    }

    pub fn target(&self) -> &SympSpace {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.source.dim() + self.target.dim()
    }

    /// The canonical basis (reduced echelon rows) as dense vectors.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        let n = self.ambient_dim();
        self.span.rows().map(|(_, r)| crate::linalg::dense_from_sparse(r, n)).collect()
    }

    /// `A ⊕ B^op`, the space on which the relation is a subspace.
    pub fn ambient(&self) -> SympSpace {
        self.source.direct_sum(&self.target.opposite())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.span.contains(&sparse_from_dense(v))
    }

    /// `L^⊥` for `ω_A ⊕ (−ω_B)`.
    pub fn perp(&self) -> Result<LinRelation> {
        let amb = self.ambient();
        let n = self.ambient_dim();
        // v ∈ L^⊥ iff (Ωᵀ l)·v = 0 for every basis vector l, since ω(l, v) = lᵀ Ω v.
        let rows: Vec<SparseVec<Rational>> = self
            .basis()
            .iter()
            .map(|l| {
                let row: Vec<Rational> = (0..n)
                    .map(|j| (0..n).map(|i| &l[i] * amb.omega.get(i, j)).fold(Rational::zero(), |a, b| a + b))
                    .collect();
                sparse_from_dense(&row)
            })
            .collect();
        let eqs = EchelonBasis::from_rows(n, rows)?;
        let kernel: Vec<Vec<Rational>> =
            eqs.kernel().iter().map(|v| crate::linalg::dense_from_sparse(v, n)).collect();
        LinRelation::from_vectors(&self.source, &self.target, &kernel)
    }

    pub fn is_isotropic(&self) -> bool {
        let amb = self.ambient();
        let b = self.basis();
        b.iter().enumerate().all(|(i, u)| b[i + 1..].iter().all(|v| amb.form(u, v).is_zero()))
    }

    pub fn is_coisotropic(&self) -> Result<bool> {
        let perp = self.perp()?;
        Ok(perp.basis().iter().all(|v| self.contains(v)))
    }

    pub fn is_lagrangian(&self) -> bool {
        2 * self.dim() == self.ambient_dim() && self.is_isotropic()
    }

    pub fn flags(&self) -> Result<RelationFlags> {
        Ok(RelationFlags {
            isotropic: self.is_isotropic(),
            coisotropic: self.is_coisotropic()?,
            lagrangian: self.is_lagrangian(),
        })
    }

    /// `{(b, a) : (a, b) ∈ L}` as a relation `B → A`.
    pub fn transpose(&self) -> LinRelation {
        let (a, b) = (self.source.dim(), self.target.dim());
        let swapped: Vec<Vec<Rational>> =
            self.basis().into_iter().map(|v| v[a..a + b].iter().chain(&v[..a]).cloned().collect()).collect();
        LinRelation::from_vectors(&self.target, &self.source, &swapped).expect("same dimensions")
    }

    /// `{(a, c) : ∃ b, (a, b) ∈ L, (b, c) ∈ K}`.
    pub fn compose(&self, other: &LinRelation) -> Result<LinRelation> {
        if self.target != other.source {
            return Err(Error::MiddleMismatch("target of the first relation is not the source of the second".into()));
        }
        let (a, b, c) = (self.source.dim(), self.target.dim(), other.target.dim());
        let l = self.basis();
        let k = other.basis();
        let (nl, nk) = (l.len(), k.len());
        // Unknown coefficients (x, y) with Σ x_i b(l_i) − Σ y_j b(k_j) = 0.
        let rows: Vec<SparseVec<Rational>> = (0..b)
            .map(|r| {
                let row: Vec<Rational> =
                    l.iter().map(|v| v[a + r].clone()).chain(k.iter().map(|v| -v[r].clone())).collect();
                sparse_from_dense(&row)
            })
            .collect();
        let eqs = EchelonBasis::from_rows(nl + nk, rows)?;
        let mut out = Vec::new();
        for sol in eqs.kernel() {
            let mut v = vec![Rational::zero(); a + c];
            for (idx, coef) in &sol {
                if *idx < nl {
                    for t in 0..a {
                        v[t] += coef * &l[*idx][t];
                    }
                } else {
                    let kv = &k[*idx - nl];
                    for t in 0..c {
                        v[a + t] += coef * &kv[b + t];
                    }
                }
            }
            out.push(v);
        }
        LinRelation::from_vectors(&self.source, &other.target, &out)
    }

    /// `L ⊕ K : A ⊕ C → B ⊕ D`.
    pub fn direct_sum(&self, other: &LinRelation) -> LinRelation {
        let (a, b) = (self.source.dim(), self.target.dim());
        let (c, d) = (other.source.dim(), other.target.dim());
        let zero = |n| vec![Rational::zero(); n];
        let mut vs = Vec::new();
        for v in self.basis() {
            let mut w = v[..a].to_vec();
            w.extend(zero(c));
            w.extend_from_slice(&v[a..]);
            w.extend(zero(d));
            vs.push(w);
        }
        for v in other.basis() {
            let mut w = zero(a);
            w.extend_from_slice(&v[..c]);
            w.extend(zero(b));
            w.extend_from_slice(&v[c..]);
            vs.push(w);
        }
        LinRelation::from_vectors(
            &self.source.direct_sum(&other.source),
            &self.target.direct_sum(&other.target),
            &vs,
        )
        .expect("dimensions add up")
    }
}

/// `{(a, f a)}` for a `dim B × dim A` matrix.
pub fn graph_of_linear_map(f: &Matrix<Rational>, a: &SympSpace, b: &SympSpace) -> Result<LinRelation> {
    if f.ncols != a.dim() || f.nrows != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}×{}, spaces have dimensions {} and {}",
            f.nrows,
            f.ncols,
            a.dim(),
            b.dim()
        )));
    }
    let vs: Vec<Vec<Rational>> = (0..a.dim())
        .map(|i| {
            let mut v = vec![Rational::zero(); a.dim() + b.dim()];
            v[i] = Rational::one();
            for r in 0..b.dim() {
                v[a.dim() + r] = f.get(r, i).clone();
            }
            v
        })
        .collect();
    LinRelation::from_vectors(a, b, &vs)
}

/// The diagonal `S → S`.
pub fn identity_rel(s: &SympSpace) -> LinRelation {
    graph_of_linear_map(&Matrix::identity(s.dim()), s, s).expect("square")
}

/// `ev: S ⊕ S^op → 1`, the diagonal.
pub fn ev(s: &SympSpace) -> LinRelation {
    let n = s.dim();
    let vs: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); 2 * n];
            v[i] = Rational::one();
            v[n + i] = Rational::one();
            v
        })
        .collect();
    LinRelation::from_vectors(&s.direct_sum(&s.opposite()), &SympSpace::zero(), &vs).expect("dimensions")
}

/// `coev: 1 → S^op ⊕ S`, the diagonal.
pub fn coev(s: &SympSpace) -> LinRelation {
    ev(&s.opposite()).transpose()
}

/// The graph of `−id` read as a would-be evaluation `S ⊕ S^op → 1`.
pub fn mutated_ev(s: &SympSpace) -> LinRelation {
    let n = s.dim();
    let vs: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); 2 * n];
            v[i] = Rational::one();
            v[n + i] = -Rational::one();
            v
        })
        .collect();
    LinRelation::from_vectors(&s.direct_sum(&s.opposite()), &SympSpace::zero(), &vs).expect("dimensions")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigZagReport {
    /// `S → S⊕(S∨⊕S) → (S⊕S∨)⊕S → S` equals the diagonal.
    pub primal: bool,
    /// `S∨ → (S∨⊕S)⊕S∨ → S∨⊕(S⊕S∨) → S∨` equals the diagonal.
    pub dual: bool,
}

impl ZigZagReport {
    pub fn passed(&self) -> bool {
        self.primal && self.dual
    }
}

/// Both zig-zag composites built from the given `ev` and `coev`. Direct sums
/// are associative on the nose and `1` has dimension zero, so the middle
/// identifications are literal.
pub fn check_zigzag_with(s: &SympSpace, ev_rel: &LinRelation, coev_rel: &LinRelation) -> Result<ZigZagReport> {
    let dual = s.opposite();
    let id_s = identity_rel(s);
    let id_d = identity_rel(&dual);
    let primal = id_s.direct_sum(coev_rel).compose(&ev_rel.direct_sum(&id_s))?;
    let dual_side = coev_rel.direct_sum(&id_d).compose(&id_d.direct_sum(ev_rel))?;
    Ok(ZigZagReport { primal: primal == id_s, dual: dual_side == id_d })
}

pub fn check_zigzag(s: &SympSpace) -> Result<ZigZagReport> {
    check_zigzag_with(s, &ev(s), &coev(s))
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix<Rational> {
    loop {
        let m = Matrix::from_rows(
            (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-2i64..=2), 1)).collect()).collect(),
        );
        if m.is_invertible().unwrap_or(false) {
            return m;
        }
    }
}

/// `Pᵀ J P` for a random invertible integer matrix `P`.
pub fn random_symplectic_space<R: Rng>(rng: &mut R, dim: usize) -> SympSpace {
    assert!(dim % 2 == 0);
    let j = SympSpace::standard(dim / 2);
    let p = random_invertible(rng, dim);
    SympSpace::new(p.transpose().mul(j.omega()).mul(&p)).expect("congruent to the standard form")
}

/// A random lagrangian relation `A → B`, grown one vector at a time inside
/// the symplectic complement of what has been chosen.
pub fn random_lagrangian<R: Rng>(rng: &mut R, a: &SympSpace, b: &SympSpace) -> LinRelation {
    let n = a.dim() + b.dim();
    let mut current = LinRelation::from_vectors(a, b, &[]).expect("empty");
    while 2 * current.dim() < n {
        let perp = current.perp().expect("perp");
        let pb = perp.basis();
        loop {
            let mut v = vec![Rational::zero(); n];
            for w in &pb {
                let c = rat(rng.gen_range(-2i64..=2), 1);
                for t in 0..n {
                    v[t] += &c * &w[t];
                }
            }
            if !current.contains(&v) {
                let mut vs = current.basis();
                vs.push(v);
                current = LinRelation::from_vectors(a, b, &vs).expect("dimensions");
                break;
            }
        }
    }
    current
}

/// Whether `fᵀ ω_B f = ω_A`.
pub fn is_symplectic_map(f: &Matrix<Rational>, a: &SympSpace, b: &SympSpace) -> bool {
    f.nrows == b.dim() && f.ncols == a.dim() && f.transpose().mul(b.omega()).mul(f) == *a.omega()
}

/// Largest absolute numerator or denominator, for reporting sizes.
pub fn height(v: &[Rational]) -> num_bigint::BigInt {
    v.iter().flat_map(|x| [x.numer().abs(), x.denom().abs()]).max().unwrap_or_default()
}
