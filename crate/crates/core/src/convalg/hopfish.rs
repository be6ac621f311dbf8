use std::sync::Arc;

use serde::Serialize;

use super::bimodule::{bimodule_iso, Bimodule, IsoOutcome};
use super::sparse::SparseMatrix;
use crate::bibundle::{associator, left_unitor, right_unitor, stacky_group_check, StackyData};
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism, ObjId};
use crate::scalars::{rat, Angle, Scalar};

/// Coproduct, counit and antipode bimodules of a finite stacky group.
#[derive(Clone, Debug)]
pub struct HopfishData {
    pub groupoid: Arc<FiniteGroupoid>,
    /// `(A⊗A)`-`A`, with `A(G×G)` read as `A(G)⊗A(G)` through
    /// `δ_(g,g') ↔ δ_g⊗δ_g'`.
    pub delta: Bimodule,
    /// `C`-`A`, where `C` is the algebra of the terminal groupoid.
    pub epsilon: Bimodule,
    /// `A`-`A^op`.
    pub antipode: Bimodule,
}

impl HopfishData {
    /// Functions on `Em`, `Ee`, `Einv`; the antipode's right action is
    /// twisted through the star. Fails with `AxiomsFailed` unless the
    /// stacky-group check passes.
    pub fn from_stacky(data: &StackyData) -> Result<Self> {
        let report = stacky_group_check(&data.g, &data.em, &data.ee, &data.einv)?;
        if let Some(f) = report.failures().next() {
            return Err(Error::AxiomsFailed(format!(
                "{}: {}",
                f.name,
                f.witness.clone().unwrap_or_default()
            )));
        }
        Ok(HopfishData {
            groupoid: data.g.clone(),
            delta: Bimodule::from_bibundle(&data.em)?,
            epsilon: Bimodule::from_bibundle(&data.ee)?,
            antipode: Bimodule::from_bibundle(&data.einv)?.twist_right_by_star(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopfishCheck {
    pub name: String,
    pub passed: bool,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub outcome: IsoOutcome,
}

fn outcome(name: &str, lhs: &Bimodule, rhs: &Bimodule) -> Result<HopfishCheck> {
    let outcome = bimodule_iso(lhs, rhs)?;
    Ok(HopfishCheck {
        name: name.into(),
        passed: outcome.is_isomorphic(),
        lhs_dim: lhs.dim(),
        rhs_dim: rhs.dim(),
        outcome,
    })
}

/// `(A ⊗ Δ) ⊗_{A⊗A} Δ ≅ (Δ ⊗ A) ⊗_{A⊗A} Δ`, the left sides compared over
/// `(A⊗A)⊗A` through the associator.
pub fn check_coassoc(d: &HopfishData) -> Result<HopfishCheck> {
    let a = Bimodule::regular(&d.groupoid);
    let g = &*d.groupoid;
    let lhs = a.external(&d.delta).tensor(&d.delta)?;
    let rhs = d.delta.external(&a).tensor(&d.delta)?;
    let lhs = lhs.reindex_left(rhs.left(), &associator(g, g, g))?;
    outcome("coassociativity", &lhs, &rhs)
}

/// `(ε ⊗ A) ⊗_{A⊗A} Δ ≅ A ≅ (A ⊗ ε) ⊗_{A⊗A} Δ`; both must hold.
pub fn check_counit(d: &HopfishData) -> Result<(HopfishCheck, HopfishCheck)> {
    let a = Bimodule::regular(&d.groupoid);
    let one = d.epsilon.left().clone();
    let left = d.epsilon.external(&a).tensor(&d.delta)?;
    let unit_left = a.reindex_left(left.left(), &left_unitor(&one, &d.groupoid))?;
    let right = a.external(&d.epsilon).tensor(&d.delta)?;
    let unit_right = a.reindex_left(right.left(), &right_unitor(&d.groupoid, &one))?;
    Ok((outcome("left counit", &left, &unit_left)?, outcome("right counit", &right, &unit_right)?))
}

fn check_right_module(t: &Bimodule, g: &FiniteGroupoid) -> Result<()> {
    if **t.right() != *g {
        return Err(Error::AlgebraMismatch("module is over a different algebra".into()));
    }
    if t.left().n_objects() != 1 || t.left().n_arrows() != 1 {
        return Err(Error::AlgebraMismatch("a right module has the scalars acting on the left".into()));
    }
    Ok(())
}

/// `T ⊗_Δ T' = (T ⊗ T') ⊗_{A⊗A} Δ`, returned with the scalars on the left.
pub fn module_tensor(t: &Bimodule, t2: &Bimodule, d: &HopfishData) -> Result<Bimodule> {
    check_right_module(t, &d.groupoid)?;
    check_right_module(t2, &d.groupoid)?;
    let out = t.external(t2).tensor(&d.delta)?;
    let one = Arc::new(FiniteGroupoid::terminal());
    out.reindex_left(&one, &GroupoidMorphism { on_objects: vec![0], on_arrows: vec![0] })
}

/// The one-dimensional module at an object with trivial isotropy and no
/// other arrows: `e·δ_h = e` for `h = 1_x`, else `0`.
pub fn point_module(g: &Arc<FiniteGroupoid>, x: ObjId) -> Result<Bimodule> {
    if x >= g.n_objects() {
        return Err(Error::UnknownObject(x));
    }
    if g.arrows_from(x).len() != 1 || g.arrows_into(x).len() != 1 {
        return Err(Error::AlgebraMismatch(format!("object {} carries non-unit arrows", g.object_label(x))));
    }
    let act_right = (0..g.n_arrows())
        .map(|h| if h == g.unit(x) { SparseMatrix::identity(1) } else { SparseMatrix::zero(1, 1) })
        .collect();
    Bimodule::from_parts(
        Arc::new(FiniteGroupoid::terminal()),
        g.clone(),
        vec![format!("ev_{}", g.object_label(x))],
        vec![SparseMatrix::identity(1)],
        act_right,
    )
}

/// The one-dimensional module `e·δ_h = χ(h) e` of a one-object groupoid.
pub fn character_module(g: &Arc<FiniteGroupoid>, chi: &[Scalar], name: &str) -> Result<Bimodule> {
    if g.n_objects() != 1 || chi.len() != g.n_arrows() {
        return Err(Error::AlgebraMismatch("a character needs one value per arrow of a group".into()));
    }
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            let ab = g.comp(a, b).expect("group");
            if &chi[a] * &chi[b] != chi[ab] {
                return Err(Error::AlgebraMismatch(format!(
                    "χ is not multiplicative at ({}, {})",
                    g.arrow_label(a),
                    g.arrow_label(b)
                )));
            }
        }
    }
    let act_right = chi
        .iter()
        .map(|c| {
            let mut m = SparseMatrix::zero(1, 1);
            m.set(0, 0, c.clone());
            m
        })
        .collect();
    Bimodule::from_parts(
        Arc::new(FiniteGroupoid::terminal()),
        g.clone(),
        vec![name.to_string()],
        vec![SparseMatrix::identity(1)],
        act_right,
    )
}

/// `χ_a(k) = ζ_n^{ak}` on `BZn` with arrows labelled `0..n`.
pub fn cyclic_character(g: &Arc<FiniteGroupoid>, n: usize, a: usize) -> Result<Bimodule> {
    let chi: Vec<Scalar> =
        (0..n).map(|k| Scalar::phase(&Angle::two_pi(rat(((a * k) % n) as i64, n as i64)))).collect();
    character_module(g, &chi, &format!("chi_{a}"))
}
