//! Bibundles between finite groupoids.
//!
//! A `G`-`H` bibundle `M` has moment maps `lM: M → G0`, `rM: M → H0`.
//! The left action `g·m` is defined iff `r(g) = lM(m)`; the right action
//! `m·h` is defined iff `l(h) = rM(m)`. A right principal `G`-`H` bibundle is
//! read as a morphism `G → H`.

mod families;
mod iso;
mod stacky;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{
    ArrowId, FiniteGroupoid, GroupSpec, GroupoidMorphism, ObjId, ValidationReport, Violation,
};
use crate::util::UnionFind;

pub use families::{cyclic_quotient_family, group_family, mutate_entry, trivial_group_family, StackyData};
pub use iso::{find_biequivariant_iso, BiequivariantMap};
pub use stacky::{stacky_group_check, CheckOutcome, StackyReport};

/// Orientation note attached to every report.
pub const CONVENTION: &str = "right principal G-H bibundle = morphism G -> H";

#[derive(Clone, Debug, PartialEq)]
pub struct Bibundle {
    left: Arc<FiniteGroupoid>,
    right: Arc<FiniteGroupoid>,
    carrier: Vec<String>,
    lm: Vec<ObjId>,
    rm: Vec<ObjId>,
    act_l: HashMap<(ArrowId, usize), usize>,
    act_r: HashMap<(usize, ArrowId), usize>,
}

/// Result of a principality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalityReport {
    pub principal: bool,
    pub witness: Option<String>,
}

impl PrincipalityReport {
    fn ok() -> Self {
        PrincipalityReport { principal: true, witness: None }
    }

    fn fail(w: String) -> Self {
        PrincipalityReport { principal: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub differences: Vec<String>,
    pub left_orbits: usize,
    pub right_orbits: usize,
    pub left_isotropy: Vec<String>,
    pub right_isotropy: Vec<String>,
}

impl Bibundle {
    /// Assembles a bibundle from tables; only index ranges are checked.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        left: Arc<FiniteGroupoid>,
        right: Arc<FiniteGroupoid>,
        carrier: Vec<String>,
        lm: Vec<ObjId>,
        rm: Vec<ObjId>,
        act_l: HashMap<(ArrowId, usize), usize>,
        act_r: HashMap<(usize, ArrowId), usize>,
    ) -> Result<Self> {
        let n = carrier.len();
        let bad = |m: &str| Err(Error::InvalidBibundle(m.to_string()));
        if lm.len() != n || rm.len() != n {
            return bad("moment maps do not cover the carrier");
        }
        if lm.iter().any(|&x| x >= left.n_objects()) || rm.iter().any(|&y| y >= right.n_objects()) {
            return bad("moment map points outside the object set");
        }
        if act_l.iter().any(|(&(g, m), &k)| g >= left.n_arrows() || m >= n || k >= n) {
            return bad("left action table out of range");
        }
        if act_r.iter().any(|(&(m, h), &k)| h >= right.n_arrows() || m >= n || k >= n) {
            return bad("right action table out of range");
        }
        Ok(Bibundle { left, right, carrier, lm, rm, act_l, act_r })
    }

    pub fn left(&self) -> &Arc<FiniteGroupoid> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroupoid> {
        &self.right
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn lm(&self, m: usize) -> ObjId {
        self.lm[m]
    }

    pub fn rm(&self, m: usize) -> ObjId {
        self.rm[m]
    }

    pub fn act_l(&self, g: ArrowId, m: usize) -> Option<usize> {
        self.act_l.get(&(g, m)).copied()
    }

    pub fn act_r(&self, m: usize, h: ArrowId) -> Option<usize> {
        self.act_r.get(&(m, h)).copied()
    }

    pub fn left_table(&self) -> &HashMap<(ArrowId, usize), usize> {
        &self.act_l
    }

    pub fn right_table(&self) -> &HashMap<(usize, ArrowId), usize> {
        &self.act_r
    }

    /// Decomposes into raw tables, the inverse of [`Bibundle::from_parts`].
    #[allow(clippy::type_complexity)]
    pub fn into_parts(
        self,
    ) -> (
        Arc<FiniteGroupoid>,
        Arc<FiniteGroupoid>,
        Vec<String>,
        Vec<ObjId>,
        Vec<ObjId>,
        HashMap<(ArrowId, usize), usize>,
        HashMap<(usize, ArrowId), usize>,
    ) {
        (self.left, self.right, self.carrier, self.lm, self.rm, self.act_l, self.act_r)
    }

    /// Checks definedness, moment compatibility, unit and associativity laws
    /// of both actions and that they commute.
    pub fn validate(&self) -> ValidationReport {
        let (g, h) = (&*self.left, &*self.right);
        let mut v = Vec::new();
        let c = |m: usize| self.carrier[m].clone();
        let ga = |a: ArrowId| g.arrow_label(a).to_string();
        let ha = |a: ArrowId| h.arrow_label(a).to_string();
        let mut push = |axiom: &str, witness: Vec<String>| v.push(Violation { axiom: axiom.into(), witness });

        let mut left: Vec<_> = self.act_l.iter().map(|(&(a, m), &k)| (a, m, k)).collect();
        left.sort_unstable();
        for (a, m, k) in left {
            if g.r(a) != self.lm[m] {
                push("left action defined only on composable pairs", vec![ga(a), c(m)]);
            } else if self.lm[k] != g.l(a) || self.rm[k] != self.rm[m] {
                push("left action moments", vec![ga(a), c(m), c(k)]);
            }
        }
        let mut right: Vec<_> = self.act_r.iter().map(|(&(m, a), &k)| (m, a, k)).collect();
        right.sort_unstable();
        for (m, a, k) in right {
            if h.l(a) != self.rm[m] {
                push("right action defined only on composable pairs", vec![c(m), ha(a)]);
            } else if self.rm[k] != h.r(a) || self.lm[k] != self.lm[m] {
                push("right action moments", vec![c(m), ha(a), c(k)]);
            }
        }
        for m in 0..self.len() {
            for &a in g.arrows_into(self.lm[m]) {
                if !self.act_l.contains_key(&(a, m)) {
                    push("left action defined", vec![ga(a), c(m)]);
                }
            }
            for &b in h.arrows_from(self.rm[m]) {
                if !self.act_r.contains_key(&(m, b)) {
                    push("right action defined", vec![c(m), ha(b)]);
                }
            }
            if self.act_l(g.unit(self.lm[m]), m) != Some(m) {
                push("left unit", vec![c(m)]);
            }
            if self.act_r(m, h.unit(self.rm[m])) != Some(m) {
                push("right unit", vec![c(m)]);
            }
        }
        for m in 0..self.len() {
            for &a2 in g.arrows_into(self.lm[m]) {
                let Some(m2) = self.act_l(a2, m) else { continue };
                for &a1 in g.arrows_into(g.l(a2)) {
                    let (Some(a12), Some(m1)) = (g.comp(a1, a2), self.act_l(a1, m2)) else { continue };
                    if self.act_l(a12, m) != Some(m1) {
                        push("left associativity", vec![ga(a1), ga(a2), c(m)]);
                    }
                }
            }
            for &b1 in h.arrows_from(self.rm[m]) {
                let Some(m1) = self.act_r(m, b1) else { continue };
                for &b2 in h.arrows_from(h.r(b1)) {
                    let (Some(b12), Some(m2)) = (h.comp(b1, b2), self.act_r(m1, b2)) else { continue };
                    if self.act_r(m, b12) != Some(m2) {
                        push("right associativity", vec![c(m), ha(b1), ha(b2)]);
                    }
                }
            }
            for &a in g.arrows_into(self.lm[m]) {
                for &b in h.arrows_from(self.rm[m]) {
                    let lhs = self.act_l(a, m).and_then(|am| self.act_r(am, b));
                    let rhs = self.act_r(m, b).and_then(|mb| self.act_l(a, mb));
                    if lhs != rhs {
                        push("actions commute", vec![ga(a), c(m), ha(b)]);
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidBibundle(format!("{} at {:?}", v.axiom, v.witness))),
        }
    }

    /// `lM` surjective and `h ↦ m·h` a bijection onto each `lM`-fiber.
    pub fn is_right_principal(&self) -> Result<PrincipalityReport> {
        self.require_valid()?;
        Ok(self.right_principality())
    }

    fn right_principality(&self) -> PrincipalityReport {
        let mut fibers = vec![Vec::new(); self.left.n_objects()];
        for m in 0..self.len() {
            fibers[self.lm[m]].push(m);
        }
        if let Some(x) = fibers.iter().position(|f| f.is_empty()) {
            return PrincipalityReport::fail(format!("object {} is not in the image of lM", self.left.object_label(x)));
        }
        for m in 0..self.len() {
            let fiber = &fibers[self.lm[m]];
            let mut hit: HashMap<usize, ArrowId> = HashMap::new();
            for &b in self.right.arrows_from(self.rm[m]) {
                let k = self.act_r[&(m, b)];
                if let Some(prev) = hit.insert(k, b) {
                    return PrincipalityReport::fail(format!(
                        "{}·{} = {}·{} = {}",
                        self.carrier[m],
                        self.right.arrow_label(prev),
                        self.carrier[m],
                        self.right.arrow_label(b),
                        self.carrier[k]
                    ));
                }
            }
            if let Some(&k) = fiber.iter().find(|k| !hit.contains_key(k)) {
                return PrincipalityReport::fail(format!(
                    "no h with {}·h = {}",
                    self.carrier[m], self.carrier[k]
                ));
            }
        }
        PrincipalityReport::ok()
    }

    /// `rM` surjective and `g ↦ g·m` a bijection onto each `rM`-fiber.
    pub fn is_left_principal(&self) -> Result<PrincipalityReport> {
        self.require_valid()?;
        Ok(self.left_principality())
    }

    fn left_principality(&self) -> PrincipalityReport {
        let mut fibers = vec![Vec::new(); self.right.n_objects()];
        for m in 0..self.len() {
            fibers[self.rm[m]].push(m);
        }
        if let Some(y) = fibers.iter().position(|f| f.is_empty()) {
            return PrincipalityReport::fail(format!("object {} is not in the image of rM", self.right.object_label(y)));
        }
        for m in 0..self.len() {
            let fiber = &fibers[self.rm[m]];
            let mut hit: HashMap<usize, ArrowId> = HashMap::new();
            for &a in self.left.arrows_into(self.lm[m]) {
                let k = self.act_l[&(a, m)];
                if let Some(prev) = hit.insert(k, a) {
                    return PrincipalityReport::fail(format!(
                        "{}·{} = {}·{} = {}",
                        self.left.arrow_label(prev),
                        self.carrier[m],
                        self.left.arrow_label(a),
                        self.carrier[m],
                        self.carrier[k]
                    ));
                }
            }
            if let Some(&k) = fiber.iter().find(|k| !hit.contains_key(k)) {
                return PrincipalityReport::fail(format!("no g with g·{} = {}", self.carrier[m], self.carrier[k]));
            }
        }
        PrincipalityReport::ok()
    }

    /// Carrier `G1`, both actions by composition.
    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        let mut act_l = HashMap::new();
        let mut act_r = HashMap::new();
        for (&(a, b), &ab) in g.comp_table() {
            act_l.insert((a, b), ab);
            act_r.insert((a, b), ab);
        }
        Bibundle {
            left: g.clone(),
            right: g.clone(),
            carrier: g.arrow_labels().to_vec(),
            lm: (0..g.n_arrows()).map(|a| g.l(a)).collect(),
            rm: (0..g.n_arrows()).map(|a| g.r(a)).collect(),
            act_l,
            act_r,
        }
    }

    /// Graph construction: carrier `{(x, h) : l(h) = φ(x)}`,
    /// `g·(x, h) = (l(g), φ(g)h)` and `(x, h)·h' = (x, hh')`.
    pub fn from_functor(g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>, phi: &GroupoidMorphism) -> Result<Self> {
        phi.check(g, h)?;
        let mut index = HashMap::new();
        let mut carrier = Vec::new();
        let mut lm = Vec::new();
        let mut rm = Vec::new();
        let mut pairs = Vec::new();
        for x in 0..g.n_objects() {
            for &b in h.arrows_from(phi.on_objects[x]) {
                index.insert((x, b), pairs.len());
                pairs.push((x, b));
                carrier.push(format!("({},{})", g.object_label(x), h.arrow_label(b)));
                lm.push(x);
                rm.push(h.r(b));
            }
        }
        let mut act_l = HashMap::new();
        let mut act_r = HashMap::new();
        for (m, &(x, b)) in pairs.iter().enumerate() {
            for &a in g.arrows_into(x) {
                let fb = h.comp(phi.on_arrows[a], b).expect("functor preserves endpoints");
                act_l.insert((a, m), index[&(g.l(a), fb)]);
            }
            for &b2 in h.arrows_from(h.r(b)) {
                let bb = h.comp(b, b2).expect("composable");
                act_r.insert((m, b2), index[&(x, bb)]);
            }
        }
        Ok(Bibundle { left: g.clone(), right: h.clone(), carrier, lm, rm, act_l, act_r })
    }

    /// `M ∘ N = (M ×_{H0} N)/H` with `(m, n)·h = (m·h, h⁻¹·n)`. Orbits are
    /// ordered by their least pair; each is labelled by that pair.
    pub fn compose(&self, other: &Bibundle) -> Result<Bibundle> {
        if self.right != other.left {
            return Err(Error::MiddleMismatch(format!(
                "right groupoid has {} arrows, left groupoid of the second factor has {}",
                self.right.n_arrows(),
                other.left.n_arrows()
            )));
        }
        self.require_valid()?;
        other.require_valid()?;
        let report = self.right_principality();
        if !report.principal {
            return Err(Error::NotPrincipal(report.witness.unwrap_or_default()));
        }
        let h = &*self.right;
        let mut n_fibers = vec![Vec::new(); h.n_objects()];
        for n in 0..other.len() {
            n_fibers[other.lm[n]].push(n);
        }
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for m in 0..self.len() {
            for &n in &n_fibers[self.rm[m]] {
                index.insert((m, n), pairs.len());
                pairs.push((m, n));
            }
        }
        let mut uf = UnionFind::new(pairs.len());
        for (i, &(m, n)) in pairs.iter().enumerate() {
            for &b in h.arrows_from(self.rm[m]) {
                let mb = self.act_r[&(m, b)];
                let bn = other.act_l[&(h.inv(b), n)];
                uf.union(i, index[&(mb, bn)]);
            }
        }
        let blocks = uf.blocks();
        let mut class = vec![0; pairs.len()];
        for (k, block) in blocks.iter().enumerate() {
            for &i in block {
                class[i] = k;
            }
        }
        let mut carrier = Vec::with_capacity(blocks.len());
        let mut lm = Vec::with_capacity(blocks.len());
        let mut rm = Vec::with_capacity(blocks.len());
        let mut act_l = HashMap::new();
        let mut act_r = HashMap::new();
        for (k, block) in blocks.iter().enumerate() {
            let (m, n) = pairs[block[0]];
            carrier.push(format!("[{},{}]", self.carrier[m], other.carrier[n]));
            lm.push(self.lm[m]);
            rm.push(other.rm[n]);
            for &a in self.left.arrows_into(self.lm[m]) {
                act_l.insert((a, k), class[index[&(self.act_l[&(a, m)], n)]]);
            }
            for &b in other.right.arrows_from(other.rm[n]) {
                act_r.insert((k, b), class[index[&(m, other.act_r[&(n, b)])]]);
            }
        }
        Ok(Bibundle { left: self.left.clone(), right: other.right.clone(), carrier, lm, rm, act_l, act_r })
    }

    /// Componentwise product; carrier index `m·|N| + n`.
    pub fn product(&self, other: &Bibundle) -> Bibundle {
        let left = Arc::new(self.left.product(&other.left));
        let right = Arc::new(self.right.product(&other.right));
        let nn = other.len();
        let (glo, gla) = (other.left.n_objects(), other.left.n_arrows());
        let (hro, hra) = (other.right.n_objects(), other.right.n_arrows());
        let mut carrier = Vec::with_capacity(self.len() * nn);
        let mut lm = Vec::with_capacity(self.len() * nn);
        let mut rm = Vec::with_capacity(self.len() * nn);
        for m in 0..self.len() {
            for n in 0..nn {
                carrier.push(format!("({},{})", self.carrier[m], other.carrier[n]));
                lm.push(self.lm[m] * glo + other.lm[n]);
                rm.push(self.rm[m] * hro + other.rm[n]);
            }
        }
        let mut act_l = HashMap::with_capacity(self.act_l.len() * other.act_l.len());
        for (&(a, m), &am) in &self.act_l {
            for (&(b, n), &bn) in &other.act_l {
                act_l.insert((a * gla + b, m * nn + n), am * nn + bn);
            }
        }
        let mut act_r = HashMap::with_capacity(self.act_r.len() * other.act_r.len());
        for (&(m, a), &ma) in &self.act_r {
            for (&(n, b), &nb) in &other.act_r {
                act_r.insert((m * nn + n, a * hra + b), ma * nn + nb);
            }
        }
        Bibundle { left, right, carrier, lm, rm, act_l, act_r }
    }

    /// Carrier `M ⊔ N` for bibundles over the same groupoids.
    pub fn disjoint_union(&self, other: &Bibundle) -> Result<Bibundle> {
        if self.left != other.left || self.right != other.right {
            return Err(Error::MiddleMismatch("disjoint union needs equal groupoids".into()));
        }
        let off = self.len();
        let mut carrier: Vec<String> = self.carrier.iter().map(|c| format!("{c}#0")).collect();
        carrier.extend(other.carrier.iter().map(|c| format!("{c}#1")));
        let lm = self.lm.iter().chain(&other.lm).copied().collect();
        let rm = self.rm.iter().chain(&other.rm).copied().collect();
        let mut act_l = self.act_l.clone();
        act_l.extend(other.act_l.iter().map(|(&(a, m), &k)| ((a, m + off), k + off)));
        let mut act_r = self.act_r.clone();
        act_r.extend(other.act_r.iter().map(|(&(m, b), &k)| ((m + off, b), k + off)));
        Ok(Bibundle { left: self.left.clone(), right: self.right.clone(), carrier, lm, rm, act_l, act_r })
    }

    /// Carrier relabelled by a permutation: element `m` becomes `perm[m]`.
    pub fn permute(&self, perm: &[usize]) -> Bibundle {
        let n = self.len();
        let mut carrier = vec![String::new(); n];
        let mut lm = vec![0; n];
        let mut rm = vec![0; n];
        for m in 0..n {
            carrier[perm[m]] = self.carrier[m].clone();
            lm[perm[m]] = self.lm[m];
            rm[perm[m]] = self.rm[m];
        }
        let act_l = self.act_l.iter().map(|(&(a, m), &k)| ((a, perm[m]), perm[k])).collect();
        let act_r = self.act_r.iter().map(|(&(m, b), &k)| ((perm[m], b), perm[k])).collect();
        Bibundle { left: self.left.clone(), right: self.right.clone(), carrier, lm, rm, act_l, act_r }
    }

    /// Transports the left action along an isomorphism `φ: new_left → left`.
    pub fn pull_left(&self, new_left: &Arc<FiniteGroupoid>, phi: &GroupoidMorphism) -> Result<Bibundle> {
        phi.check(new_left, &self.left)?;
        let inv_obj = invert(&phi.on_objects, self.left.n_objects())?;
        let inv_arr = invert(&phi.on_arrows, self.left.n_arrows())?;
        let lm = self.lm.iter().map(|&x| inv_obj[x]).collect();
        let act_l = self.act_l.iter().map(|(&(a, m), &k)| ((inv_arr[a], m), k)).collect();
        Ok(Bibundle {
            left: new_left.clone(),
            right: self.right.clone(),
            carrier: self.carrier.clone(),
            lm,
            rm: self.rm.clone(),
            act_l,
            act_r: self.act_r.clone(),
        })
    }

    /// Transports the right action along an isomorphism `ψ: right → new_right`.
    pub fn push_right(&self, new_right: &Arc<FiniteGroupoid>, psi: &GroupoidMorphism) -> Result<Bibundle> {
        psi.check(&self.right, new_right)?;
        invert(&psi.on_objects, new_right.n_objects())?;
        invert(&psi.on_arrows, new_right.n_arrows())?;
        let rm = self.rm.iter().map(|&y| psi.on_objects[y]).collect();
        let act_r = self.act_r.iter().map(|(&(m, b), &k)| ((m, psi.on_arrows[b]), k)).collect();
        Ok(Bibundle {
            left: self.left.clone(),
            right: new_right.clone(),
            carrier: self.carrier.clone(),
            lm: self.lm.clone(),
            rm,
            act_l: self.act_l.clone(),
            act_r,
        })
    }
}

fn invert(map: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; n];
    for (i, &j) in map.iter().enumerate() {
        if inv[j] != usize::MAX {
            return Err(Error::NotAFunctor("map is not injective".into()));
        }
        inv[j] = i;
    }
    if inv.contains(&usize::MAX) || map.len() != n {
        return Err(Error::NotAFunctor("map is not a bijection".into()));
    }
    Ok(inv)
}

/// Canonical `(G1 × G2) × G3 → G1 × (G2 × G3)`. Under the product indexing
/// both sides number `((a, b), c)` and `(a, (b, c))` alike, so the tables are
/// built explicitly rather than assumed.
pub fn associator(g1: &FiniteGroupoid, g2: &FiniteGroupoid, g3: &FiniteGroupoid) -> GroupoidMorphism {
    let (o2, o3) = (g2.n_objects(), g3.n_objects());
    let (a2, a3) = (g2.n_arrows(), g3.n_arrows());
    let mut on_objects = vec![0; g1.n_objects() * o2 * o3];
    for x in 0..g1.n_objects() {
        for y in 0..o2 {
            for z in 0..o3 {
                on_objects[(x * o2 + y) * o3 + z] = x * (o2 * o3) + (y * o3 + z);
            }
        }
    }
    let mut on_arrows = vec![0; g1.n_arrows() * a2 * a3];
    for a in 0..g1.n_arrows() {
        for b in 0..a2 {
            for c in 0..a3 {
                on_arrows[(a * a2 + b) * a3 + c] = a * (a2 * a3) + (b * a3 + c);
            }
        }
    }
    GroupoidMorphism { on_objects, on_arrows }
}

/// `1 × G → G`, `(*, g) ↦ g`.
pub fn left_unitor(one: &FiniteGroupoid, g: &FiniteGroupoid) -> GroupoidMorphism {
    let (no, na) = (g.n_objects(), g.n_arrows());
    GroupoidMorphism {
        on_objects: (0..one.n_objects() * no).map(|i| i % no).collect(),
        on_arrows: (0..one.n_arrows() * na).map(|i| i % na).collect(),
    }
}

/// `G × 1 → G`, `(g, *) ↦ g`.
pub fn right_unitor(g: &FiniteGroupoid, one: &FiniteGroupoid) -> GroupoidMorphism {
    GroupoidMorphism {
        on_objects: (0..g.n_objects() * one.n_objects()).map(|i| i / one.n_objects()).collect(),
        on_arrows: (0..g.n_arrows() * one.n_arrows()).map(|i| i / one.n_arrows()).collect(),
    }
}

fn isotropy_classes(g: &FiniteGroupoid) -> Result<Vec<GroupSpec>> {
    g.orbits().iter().map(|orbit| g.isotropy(orbit[0])).collect()
}

/// Compares Morita invariants: orbit count and the multiset of isotropy
/// classes. `None` does not prove equivalence.
pub fn morita_refute(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<Option<Obstruction>> {
    let gi = isotropy_classes(g)?;
    let hi = isotropy_classes(h)?;
    let mut differences = Vec::new();
    if gi.len() != hi.len() {
        differences.push(format!("orbit count {} vs {}", gi.len(), hi.len()));
    }
    let mut unmatched: Vec<&GroupSpec> = hi.iter().collect();
    let mut left_only = Vec::new();
    for a in &gi {
        match unmatched.iter().position(|b| a.is_isomorphic(b)) {
            Some(i) => {
                unmatched.remove(i);
            }
            None => left_only.push(a.summary()),
        }
    }
    let right_only: Vec<String> = unmatched.iter().map(|b| b.summary()).collect();
    if !left_only.is_empty() || !right_only.is_empty() {
        differences.push(format!(
            "isotropy classes {{{}}} vs {{{}}}",
            left_only.join(","),
            right_only.join(",")
        ));
    }
    if differences.is_empty() {
        return Ok(None);
    }
    Ok(Some(Obstruction {
        differences,
        left_orbits: gi.len(),
        right_orbits: hi.len(),
        left_isotropy: gi.iter().map(|x| x.summary()).collect(),
        right_isotropy: hi.iter().map(|x| x.summary()).collect(),
    }))
}

/// True iff `M` is a valid `G`-`H` bibundle that is both left and right
/// principal.
pub fn morita_verify(g: &FiniteGroupoid, h: &FiniteGroupoid, m: &Bibundle) -> Result<bool> {
    if *m.left != *g || *m.right != *h {
        return Err(Error::InvalidBibundle("bibundle is not over the given groupoids".into()));
    }
    m.require_valid()?;
    Ok(m.right_principality().principal && m.left_principality().principal)
}
