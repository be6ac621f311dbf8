use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sparse::SparseMatrix;
use crate::bibundle::Bibundle;
use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid, GroupoidMorphism, ObjId};
use crate::linalg::{EchelonBasis, SparseVec};
use crate::scalars::Scalar;

/// A finite-dimensional `A(G)`-`A(H)` bimodule. `act_left[g]` is the matrix
/// of `v ↦ δ_g·v`, `act_right[h]` the matrix of `v ↦ v·δ_h`, both acting on
/// column vectors.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left: Arc<FiniteGroupoid>,
    right: Arc<FiniteGroupoid>,
    basis: Vec<String>,
    act_left: Vec<SparseMatrix>,
    act_right: Vec<SparseMatrix>,
}

impl Bimodule {
    pub fn from_parts(
        left: Arc<FiniteGroupoid>,
        right: Arc<FiniteGroupoid>,
        basis: Vec<String>,
        act_left: Vec<SparseMatrix>,
        act_right: Vec<SparseMatrix>,
    ) -> Result<Self> {
        let d = basis.len();
        if act_left.len() != left.n_arrows() || act_right.len() != right.n_arrows() {
            return Err(Error::DimensionMismatch("one action matrix per arrow is required".into()));
        }
        if act_left.iter().chain(&act_right).any(|m| m.nrows != d || m.ncols() != d) {
            return Err(Error::DimensionMismatch(format!("action matrices must be {d}×{d}")));
        }
        Ok(Bimodule { left, right, basis, act_left, act_right })
    }

    pub fn left(&self) -> &Arc<FiniteGroupoid> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroupoid> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn act_left(&self, g: ArrowId) -> &SparseMatrix {
        &self.act_left[g]
    }

    pub fn act_right(&self, h: ArrowId) -> &SparseMatrix {
        &self.act_right[h]
    }

    pub fn act_left_mut(&mut self, g: ArrowId) -> &mut SparseMatrix {
        &mut self.act_left[g]
    }

    pub fn act_right_mut(&mut self, h: ArrowId) -> &mut SparseMatrix {
        &mut self.act_right[h]
    }

    /// Functions on the carrier: `δ_g·δ_m = δ_{g·m}`, `δ_m·δ_h = δ_{m·h}`,
    /// zero where the action is undefined.
    pub fn from_bibundle(m: &Bibundle) -> Result<Self> {
        let report = m.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidBibundle(format!("{} at {:?}", v.axiom, v.witness)));
        }
        let d = m.len();
        let mut act_left = vec![SparseMatrix::zero(d, d); m.left().n_arrows()];
        for (&(g, x), &y) in m.left_table() {
            act_left[g].set(y, x, Scalar::one());
        }
        let mut act_right = vec![SparseMatrix::zero(d, d); m.right().n_arrows()];
        for (&(x, h), &y) in m.right_table() {
            act_right[h].set(y, x, Scalar::one());
        }
        Ok(Bimodule {
            left: m.left().clone(),
            right: m.right().clone(),
            basis: m.carrier().to_vec(),
            act_left,
            act_right,
        })
    }

    /// `A(G)` as a bimodule over itself.
    pub fn regular(g: &Arc<FiniteGroupoid>) -> Self {
        Bimodule::from_bibundle(&Bibundle::identity(g)).expect("identity bibundle is valid")
    }

    /// Violated module axioms, each with a witness; empty when the actions
    /// are unital, multiplicative and commute.
    pub fn check_axioms(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (g, h) = (&*self.left, &*self.right);
        let id = SparseMatrix::identity(self.dim());
        let unit_sum = |grp: &FiniteGroupoid, act: &[SparseMatrix]| {
            (0..grp.n_objects()).fold(SparseMatrix::zero(self.dim(), self.dim()), |acc, x| acc.add(&act[grp.unit(x)]))
        };
        if unit_sum(g, &self.act_left) != id {
            out.push("left action is not unital".to_string());
        }
        if unit_sum(h, &self.act_right) != id {
            out.push("right action is not unital".to_string());
        }
        for a in 0..g.n_arrows() {
            for b in 0..g.n_arrows() {
                let prod = self.act_left[a].mul(&self.act_left[b]);
                let ok = match g.comp(a, b) {
                    Some(c) => prod == self.act_left[c],
                    None => prod.is_zero(),
                };
                if !ok {
                    out.push(format!("left action: δ_{}·δ_{}", g.arrow_label(a), g.arrow_label(b)));
                }
            }
        }
        for a in 0..h.n_arrows() {
            for b in 0..h.n_arrows() {
                let prod = self.act_right[b].mul(&self.act_right[a]);
                let ok = match h.comp(a, b) {
                    Some(c) => prod == self.act_right[c],
                    None => prod.is_zero(),
                };
                if !ok {
                    out.push(format!("right action: δ_{}·δ_{}", h.arrow_label(a), h.arrow_label(b)));
                }
            }
        }
        for a in 0..g.n_arrows() {
            for b in 0..h.n_arrows() {
                if self.act_left[a].mul(&self.act_right[b]) != self.act_right[b].mul(&self.act_left[a]) {
                    out.push(format!("actions of δ_{} and δ_{} do not commute", g.arrow_label(a), h.arrow_label(b)));
                }
            }
        }
        out
    }

    /// `P ⊗_B Q`: the tensor space modulo `p·b ⊗ q − p ⊗ b·q`. The quotient
    /// basis is the set of non-pivot columns of the relation space.
    pub fn tensor(&self, other: &Bimodule) -> Result<Bimodule> {
        if self.right != other.left {
            return Err(Error::MiddleMismatch("right algebra of P differs from left algebra of Q".into()));
        }
        let (dp, dq) = (self.dim(), other.dim());
        let t = |i: usize, j: usize| i * dq + j;
        let b = &*self.right;
        let mut rel = EchelonBasis::<Scalar>::new(dp * dq);
        for x in 0..b.n_arrows() {
            let rp = &self.act_right[x];
            let lq = &other.act_left[x];
            let active_j: Vec<usize> = (0..dq).filter(|&j| !lq.cols[j].is_empty()).collect();
            for i in 0..dp {
                let js: Vec<usize> = if rp.cols[i].is_empty() { active_j.clone() } else { (0..dq).collect() };
                for j in js {
                    let mut v = SparseVec::new();
                    for (k, c) in &rp.cols[i] {
                        v.insert(t(*k, j), c.clone());
                    }
                    for (l, c) in &lq.cols[j] {
                        let key = t(i, *l);
                        let cur = v.remove(&key).unwrap_or_else(Scalar::zero);
                        let new = &cur - c;
                        if !new.is_zero() {
                            v.insert(key, new);
                        }
                    }
                    if !v.is_empty() {
                        rel.insert(v)?;
                    }
                }
            }
        }
        let free = rel.free_columns();
        let position: HashMap<usize, usize> = free.iter().enumerate().map(|(q, &c)| (c, q)).collect();
        let n = free.len();
        let project = |v: SparseVec<Scalar>| -> SparseVec<Scalar> {
            rel.reduce(v).into_iter().map(|(c, x)| (position[&c], x)).collect()
        };
        let basis = free.iter().map(|&c| format!("{}⊗{}", self.basis[c / dq], other.basis[c % dq])).collect();
        let mut act_left = Vec::with_capacity(self.left.n_arrows());
        for a in 0..self.left.n_arrows() {
            let mut m = SparseMatrix::zero(n, n);
            for (q, &c) in free.iter().enumerate() {
                let (i, j) = (c / dq, c % dq);
                let col = &self.act_left[a].cols[i];
                if col.is_empty() {
                    continue;
                }
                m.cols[q] = project(col.iter().map(|(k, x)| (t(*k, j), x.clone())).collect());
            }
            act_left.push(m);
        }
        let mut act_right = Vec::with_capacity(other.right.n_arrows());
        for h in 0..other.right.n_arrows() {
            let mut m = SparseMatrix::zero(n, n);
            for (q, &c) in free.iter().enumerate() {
                let (i, j) = (c / dq, c % dq);
                let col = &other.act_right[h].cols[j];
                if col.is_empty() {
                    continue;
                }
                m.cols[q] = project(col.iter().map(|(l, x)| (t(i, *l), x.clone())).collect());
            }
            act_right.push(m);
        }
        Ok(Bimodule { left: self.left.clone(), right: other.right.clone(), basis, act_left, act_right })
    }

    /// External tensor `P ⊠ Q` over the product groupoids; basis index
    /// `i·dim Q + j`.
    pub fn external(&self, other: &Bimodule) -> Bimodule {
        let left = Arc::new(self.left.product(&other.left));
        let right = Arc::new(self.right.product(&other.right));
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for p in &self.basis {
            for q in &other.basis {
                basis.push(format!("({p},{q})"));
            }
        }
        let act_left =
            self.act_left.iter().flat_map(|a| other.act_left.iter().map(move |b| a.kron(b))).collect();
        let act_right =
            self.act_right.iter().flat_map(|a| other.act_right.iter().map(move |b| a.kron(b))).collect();
        Bimodule { left, right, basis, act_left, act_right }
    }

    /// Transports the left action along an isomorphism `φ: new_left → left`.
    pub fn reindex_left(&self, new_left: &Arc<FiniteGroupoid>, phi: &GroupoidMorphism) -> Result<Bimodule> {
        check_bijective(phi, new_left, &self.left)?;
        Ok(Bimodule {
            left: new_left.clone(),
            right: self.right.clone(),
            basis: self.basis.clone(),
            act_left: phi.on_arrows.iter().map(|&a| self.act_left[a].clone()).collect(),
            act_right: self.act_right.clone(),
        })
    }

    /// Transports the right action along an isomorphism `φ: new_right → right`.
    pub fn reindex_right(&self, new_right: &Arc<FiniteGroupoid>, phi: &GroupoidMorphism) -> Result<Bimodule> {
        check_bijective(phi, new_right, &self.right)?;
        Ok(Bimodule {
            left: self.left.clone(),
            right: new_right.clone(),
            basis: self.basis.clone(),
            act_left: self.act_left.clone(),
            act_right: phi.on_arrows.iter().map(|&a| self.act_right[a].clone()).collect(),
        })
    }

    /// An `A`-`A^op` bimodule from an `A`-`A` bimodule: `v·δ_h^op = v·(δ_h)*`,
    /// which on basis elements is `v·δ_{h⁻¹}`.
    pub fn twist_right_by_star(&self) -> Bimodule {
        let op = Arc::new(self.right.opposite());
        Bimodule {
            left: self.left.clone(),
            right: op,
            basis: self.basis.clone(),
            act_left: self.act_left.clone(),
            act_right: (0..self.right.n_arrows()).map(|h| self.act_right[self.right.inv(h)].clone()).collect(),
        }
    }

    /// `(lobj, robj)` of each basis vector when every basis vector is fixed
    /// by exactly one unit on each side.
    fn grading(&self) -> Option<Vec<(ObjId, ObjId)>> {
        let unit_of = |grp: &FiniteGroupoid, act: &[SparseMatrix], k: usize| {
            (0..grp.n_objects()).find(|&x| {
                let col = &act[grp.unit(x)].cols[k];
                col.len() == 1 && col.get(&k).is_some_and(|c| c.is_one())
            })
        };
        (0..self.dim())
            .map(|k| Some((unit_of(&self.left, &self.act_left, k)?, unit_of(&self.right, &self.act_right, k)?)))
            .collect()
    }
}

fn check_bijective(phi: &GroupoidMorphism, from: &FiniteGroupoid, to: &FiniteGroupoid) -> Result<()> {
    phi.check(from, to)?;
    let mut seen = vec![false; to.n_arrows()];
    for &a in &phi.on_arrows {
        if std::mem::replace(&mut seen[a], true) {
            return Err(Error::NotAFunctor("relabelling is not injective".into()));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::NotAFunctor("relabelling is not surjective".into()));
    }
    Ok(())
}

/// Basis of `Hom(P, Q)` as `dim Q × dim P` matrices, by solving the
/// intertwiner equations `T L^P_g = L^Q_g T`, `T R^P_h = R^Q_h T` exactly.
pub fn hom_space(p: &Bimodule, q: &Bimodule) -> Result<Vec<SparseMatrix>> {
    if p.left != q.left || p.right != q.right {
        return Err(Error::AlgebraMismatch("bimodules over different algebras".into()));
    }
    let (dp, dq) = (p.dim(), q.dim());
    let grades = p.grading().zip(q.grading());
    // Unknowns T[k][l], restricted to matching grades when both are graded.
    let mut var: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vars = Vec::new();
    let mut by_grade: HashMap<(ObjId, ObjId), Vec<usize>> = HashMap::new();
    if let Some((gp, gq)) = &grades {
        for (k, g) in gq.iter().enumerate() {
            by_grade.entry(*g).or_default().push(k);
        }
        for l in 0..dp {
            for &k in by_grade.get(&gp[l]).map(Vec::as_slice).unwrap_or(&[]) {
                var.insert((k, l), vars.len());
                vars.push((k, l));
            }
        }
    } else {
        for k in 0..dq {
            for l in 0..dp {
                var.insert((k, l), vars.len());
                vars.push((k, l));
            }
        }
    }
    let mut eqs = EchelonBasis::<Scalar>::new(vars.len());
    let all_q: Vec<usize> = (0..dq).collect();
    let mut add_equations = |mp: &SparseMatrix, mq: &SparseMatrix, l: usize, rows: &[usize]| -> Result<()> {
        // (T M^P)_{kl} − (M^Q T)_{kl} = 0
        for &k in rows {
            let mut v = SparseVec::new();
            for (m, c) in &mp.cols[l] {
                if let Some(&x) = var.get(&(k, *m)) {
                    v.insert(x, c.clone());
                }
            }
            for m in 0..dq {
                let Some(c) = mq.cols[m].get(&k) else { continue };
                let Some(&x) = var.get(&(m, l)) else { continue };
                let cur = v.remove(&x).unwrap_or_else(Scalar::zero);
                let new = &cur - c;
                if !new.is_zero() {
                    v.insert(x, new);
                }
            }
            if !v.is_empty() {
                eqs.insert(v)?;
            }
        }
        Ok(())
    };
    let (g, h) = (&*p.left, &*p.right);
    for l in 0..dp {
        match &grades {
            Some((gp, _)) => {
                let (x, y) = gp[l];
                for &a in g.arrows_into(x) {
                    let rows = by_grade.get(&(g.l(a), y)).map(Vec::as_slice).unwrap_or(&[]);
                    add_equations(&p.act_left[a], &q.act_left[a], l, rows)?;
                }
                for &b in h.arrows_from(y) {
                    let rows = by_grade.get(&(x, h.r(b))).map(Vec::as_slice).unwrap_or(&[]);
                    add_equations(&p.act_right[b], &q.act_right[b], l, rows)?;
                }
            }
            None => {
                for a in 0..g.n_arrows() {
                    add_equations(&p.act_left[a], &q.act_left[a], l, &all_q)?;
                }
                for b in 0..h.n_arrows() {
                    add_equations(&p.act_right[b], &q.act_right[b], l, &all_q)?;
                }
            }
        }
    }
    Ok(eqs
        .kernel()
        .into_iter()
        .map(|sol| {
            let mut t = SparseMatrix::zero(dq, dp);
            for (x, c) in sol {
                let (k, l) = vars[x];
                t.set(k, l, c);
            }
            t
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IsoOutcome {
    /// An invertible intertwiner, as a dense matrix of scalars.
    Isomorphic { intertwiner: Vec<Vec<Scalar>>, hom_dim: usize },
    NotIsomorphic { reason: String },
    /// No invertible combination found within the search budget.
    Undecided { reason: String, hom_dim: usize },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }
}

fn is_invertible(t: &SparseMatrix) -> Result<bool> {
    if t.nrows != t.ncols() {
        return Ok(false);
    }
    let mut span = EchelonBasis::<Scalar>::new(t.nrows);
    for c in &t.cols {
        if !span.insert(c.clone())? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn combine(basis: &[SparseMatrix], coeffs: &[i64]) -> SparseMatrix {
    let mut t = SparseMatrix::zero(basis[0].nrows, basis[0].ncols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let s = Scalar::from_int(c);
        for (j, col) in b.cols.iter().enumerate() {
            crate::linalg::axpy(&mut t.cols[j], &s, col);
        }
    }
    t
}

const RANDOM_TRIES: usize = 64;
const EXHAUSTIVE_CAP: usize = 4096;

/// Decides `P ≅ Q` by exhibiting an invertible intertwiner: the sum of the
/// Hom basis, then seeded random small-integer combinations, then all
/// combinations with coefficients in `{-1, 0, 1, 2}` while that stays under
/// the cap. Unequal `dim Hom(P, Q)` and `dim Hom(P, P)` prove `P ≇ Q`.
pub fn bimodule_iso(p: &Bimodule, q: &Bimodule) -> Result<IsoOutcome> {
    if p.left != q.left || p.right != q.right {
        return Ok(IsoOutcome::NotIsomorphic { reason: "different algebras".into() });
    }
    if p.dim() != q.dim() {
        return Ok(IsoOutcome::NotIsomorphic { reason: format!("dimensions {} and {}", p.dim(), q.dim()) });
    }
    if p.dim() == 0 {
        return Ok(IsoOutcome::Isomorphic { intertwiner: Vec::new(), hom_dim: 1 });
    }
    let basis = hom_space(p, q)?;
    let found = |t: SparseMatrix| IsoOutcome::Isomorphic {
        intertwiner: t.to_dense().data,
        hom_dim: basis.len(),
    };
    if basis.is_empty() {
        return Ok(IsoOutcome::NotIsomorphic { reason: "Hom(P, Q) = 0".into() });
    }
    let k = basis.len();
    let sum = combine(&basis, &vec![1; k]);
    if is_invertible(&sum)? {
        return Ok(found(sum));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..RANDOM_TRIES {
        let coeffs: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
        let t = combine(&basis, &coeffs);
        if is_invertible(&t)? {
            return Ok(found(t));
        }
    }
    let values = [-1i64, 0, 1, 2];
    if 4usize.checked_pow(k as u32).is_some_and(|n| n <= EXHAUSTIVE_CAP) {
        let mut coeffs = vec![0usize; k];
        loop {
            let c: Vec<i64> = coeffs.iter().map(|&i| values[i]).collect();
            let t = combine(&basis, &c);
            if is_invertible(&t)? {
                return Ok(found(t));
            }
            let mut pos = 0;
            while pos < k && coeffs[pos] == values.len() - 1 {
                coeffs[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
            coeffs[pos] += 1;
        }
    }
    let self_dim = hom_space(p, p)?.len();
    if self_dim != k {
        return Ok(IsoOutcome::NotIsomorphic {
            reason: format!("dim Hom(P, Q) = {k} but dim Hom(P, P) = {self_dim}"),
        });
    }
    Ok(IsoOutcome::Undecided { reason: "no invertible combination found".into(), hom_dim: k })
}
