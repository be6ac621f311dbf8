//! Finite groupoids as explicit tables.
//!
//! Convention used everywhere downstream: `comp(g, h)` is defined iff
//! `r(g) = l(h)`, and then `l(gh) = l(g)`, `r(gh) = r(h)`.

mod group;
pub mod random;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::UnionFind;

pub use group::{GroupAction, GroupSpec, GroupViolation};

pub type ObjId = usize;
pub type ArrowId = usize;

#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    object_labels: Vec<String>,
    arrow_labels: Vec<String>,
    source: Vec<ObjId>,
    target: Vec<ObjId>,
    unit: Vec<ArrowId>,
    inv: Vec<ArrowId>,
    comp: HashMap<(ArrowId, ArrowId), ArrowId>,
    // Derived: arrows grouped by l and by r.
    by_source: Vec<Vec<ArrowId>>,
    by_target: Vec<Vec<ArrowId>>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.source == other.source
                && self.target == other.target
                && self.unit == other.unit
                && self.inv == other.inv
                && self.comp == other.comp)
    }
}

impl Eq for FiniteGroupoid {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    /// Arrow or object labels reproducing the failure.
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables. Only index ranges are checked
    /// here; the axioms are checked by [`FiniteGroupoid::validate`].
    pub fn from_parts(
        object_labels: Vec<String>,
        arrow_labels: Vec<String>,
        source: Vec<ObjId>,
        target: Vec<ObjId>,
        unit: Vec<ArrowId>,
        inv: Vec<ArrowId>,
        comp: HashMap<(ArrowId, ArrowId), ArrowId>,
    ) -> Result<Self> {
        let no = object_labels.len();
        let na = arrow_labels.len();
        let bad = |m: &str| Err(Error::InvalidGroupoid(m.to_string()));
        if source.len() != na || target.len() != na || inv.len() != na || unit.len() != no {
            return bad("table lengths disagree with the object/arrow counts");
        }
        if source.iter().chain(&target).any(|&x| x >= no) {
            return bad("l or r points outside the object set");
        }
        if unit.iter().chain(&inv).any(|&g| g >= na) {
            return bad("unit or inverse points outside the arrow set");
        }
        if comp.iter().any(|(&(g, h), &k)| g >= na || h >= na || k >= na) {
            return bad("composition table points outside the arrow set");
        }
        let mut by_source = vec![Vec::new(); no];
        let mut by_target = vec![Vec::new(); no];
        for g in 0..na {
            by_source[source[g]].push(g);
            by_target[target[g]].push(g);
        }
        Ok(FiniteGroupoid {
            object_labels,
            arrow_labels,
            source,
            target,
            unit,
            inv,
            comp,
            by_source,
            by_target,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrow_labels.len()
    }

    pub fn object_label(&self, x: ObjId) -> &str {
        &self.object_labels[x]
    }

    pub fn arrow_label(&self, g: ArrowId) -> &str {
        &self.arrow_labels[g]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.object_labels
    }

    pub fn arrow_labels(&self) -> &[String] {
        &self.arrow_labels
    }

    pub fn object_by_label(&self, s: &str) -> Option<ObjId> {
        self.object_labels.iter().position(|x| x == s)
    }

    pub fn arrow_by_label(&self, s: &str) -> Option<ArrowId> {
        self.arrow_labels.iter().position(|x| x == s)
    }

    /// Source map `l`.
    pub fn l(&self, g: ArrowId) -> ObjId {
        self.source[g]
    }

    /// Target map `r`.
    pub fn r(&self, g: ArrowId) -> ObjId {
        self.target[g]
    }

    pub fn unit(&self, x: ObjId) -> ArrowId {
        self.unit[x]
    }

    pub fn inv(&self, g: ArrowId) -> ArrowId {
        self.inv[g]
    }

    pub fn comp(&self, g: ArrowId, h: ArrowId) -> Option<ArrowId> {
        self.comp.get(&(g, h)).copied()
    }

    pub fn comp_table(&self) -> &HashMap<(ArrowId, ArrowId), ArrowId> {
        &self.comp
    }

    /// Arrows with `l(g) = x`.
    pub fn arrows_from(&self, x: ObjId) -> &[ArrowId] {
        &self.by_source[x]
    }

    /// Arrows with `r(g) = x`.
    pub fn arrows_into(&self, x: ObjId) -> &[ArrowId] {
        &self.by_target[x]
    }

    pub fn is_unit(&self, g: ArrowId) -> bool {
        self.unit[self.source[g]] == g
    }

    /// Exhaustive check of every groupoid axiom, with witnesses.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let a = |g: ArrowId| self.arrow_labels[g].clone();
        let o = |x: ObjId| self.object_labels[x].clone();
        let mut push = |axiom: &str, witness: Vec<String>| v.push(Violation { axiom: axiom.into(), witness });

        let mut sorted: Vec<_> = self.comp.iter().map(|(&(g, h), &k)| (g, h, k)).collect();
        sorted.sort_unstable();
        for &(g, h, gh) in &sorted {
            if self.target[g] != self.source[h] {
                push("composability", vec![a(g), a(h)]);
                continue;
            }
            if self.source[gh] != self.source[g] || self.target[gh] != self.target[h] {
                push("composite endpoints", vec![a(g), a(h), a(gh)]);
            }
        }
        for g in 0..self.n_arrows() {
            for &h in &self.by_source[self.target[g]] {
                if !self.comp.contains_key(&(g, h)) {
                    push("composition defined", vec![a(g), a(h)]);
                }
            }
        }
        for x in 0..self.n_objects() {
            let e = self.unit[x];
            if self.source[e] != x || self.target[e] != x {
                push("unit endpoints", vec![o(x), a(e)]);
            }
        }
        for g in 0..self.n_arrows() {
            let (lg, rg) = (self.source[g], self.target[g]);
            if self.comp(self.unit[lg], g) != Some(g) || self.comp(g, self.unit[rg]) != Some(g) {
                push("unit law", vec![a(g)]);
            }
            let gi = self.inv[g];
            if self.comp(g, gi) != Some(self.unit[lg]) || self.comp(gi, g) != Some(self.unit[rg]) {
                push("inverse law", vec![a(g), a(gi)]);
            }
        }
        for g in 0..self.n_arrows() {
            for &h in &self.by_source[self.target[g]] {
                let Some(gh) = self.comp(g, h) else { continue };
                for &k in &self.by_source[self.target[h]] {
                    let (Some(hk), Some(l)) = (self.comp(h, k), self.comp(gh, k)) else { continue };
                    if self.comp(g, hk) != Some(l) {
                        push("associativity", vec![a(g), a(h), a(k)]);
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// The group `Iso(x) = l⁻¹(x) ∩ r⁻¹(x)` under composition.
    pub fn isotropy(&self, x: ObjId) -> Result<GroupSpec> {
        if x >= self.n_objects() {
            return Err(Error::UnknownObject(x));
        }
        let elems: Vec<ArrowId> = self.by_source[x].iter().copied().filter(|&g| self.target[g] == x).collect();
        let pos = |g: ArrowId| elems.iter().position(|&h| h == g);
        let labels = elems.iter().map(|&g| self.arrow_labels[g].clone()).collect();
        let mut mul = Vec::with_capacity(elems.len());
        for &g in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for &h in &elems {
                let gh = self
                    .comp(g, h)
                    .and_then(pos)
                    .ok_or_else(|| Error::InvalidGroupoid(format!("isotropy at {} not closed", self.object_labels[x])))?;
                row.push(gh);
            }
            mul.push(row);
        }
        GroupSpec::from_table(labels, mul)
            .map_err(|e| Error::InvalidGroupoid(format!("isotropy at {}: {e}", self.object_labels[x])))
    }

    /// Orbit partition of the objects, blocks and members in increasing order.
    pub fn orbits(&self) -> Vec<Vec<ObjId>> {
        let mut uf = UnionFind::new(self.n_objects());
        for g in 0..self.n_arrows() {
            uf.union(self.source[g], self.target[g]);
        }
        uf.blocks()
    }

    // --- constructors --------------------------------------------------------

    /// Arrows `(a, p)` with `l = a·p`, `r = p`, and `(a, p)(a', p') = (aa', p')`
    /// whenever `p = a'·p'`.
    pub fn action_groupoid(action: &GroupAction) -> Result<Self> {
        action.validate()?;
        let group = &action.group;
        let n = group.order();
        let m = action.carrier.len();
        let id = |a: usize, p: usize| a * m + p;
        let mut arrow_labels = Vec::with_capacity(n * m);
        let mut source = Vec::with_capacity(n * m);
        let mut target = Vec::with_capacity(n * m);
        let mut inv = Vec::with_capacity(n * m);
        for a in 0..n {
            for p in 0..m {
                arrow_labels.push(format!("({},{})", group.label(a), action.carrier[p]));
                source.push(action.apply(a, p));
                target.push(p);
                inv.push(id(group.inverse(a), action.apply(a, p)));
            }
        }
        let unit = (0..m).map(|p| id(group.identity(), p)).collect();
        let mut comp = HashMap::new();
        for a in 0..n {
            for p in 0..m {
                for b in 0..n {
                    for q in 0..m {
                        if action.apply(b, q) == p {
                            comp.insert((id(a, p), id(b, q)), id(group.mul(a, b), q));
                        }
                    }
                }
            }
        }
        FiniteGroupoid::from_parts(action.carrier.clone(), arrow_labels, source, target, unit, inv, comp)
    }

    /// The one-object, one-arrow groupoid.
    pub fn terminal() -> Self {
        FiniteGroupoid::group_as_groupoid(&GroupSpec::trivial())
    }

    pub fn group_as_groupoid(group: &GroupSpec) -> Self {
        let n = group.order();
        let mut comp = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                comp.insert((a, b), group.mul(a, b));
            }
        }
        FiniteGroupoid::from_parts(
            vec!["*".into()],
            group.labels().to_vec(),
            vec![0; n],
            vec![0; n],
            vec![group.identity()],
            (0..n).map(|a| group.inverse(a)).collect(),
            comp,
        )
        .expect("group as groupoid")
    }

    /// Identities only over the given points.
    pub fn trivial_groupoid(points: &[String]) -> Self {
        let n = points.len();
        let comp = (0..n).map(|x| ((x, x), x)).collect();
        FiniteGroupoid::from_parts(
            points.to_vec(),
            points.iter().map(|p| format!("1_{p}")).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            comp,
        )
        .expect("trivial groupoid")
    }

    /// `X × X` with `(x, y)(y, z) = (x, z)`.
    pub fn pair_groupoid(points: &[String]) -> Self {
        let n = points.len();
        let id = |x: usize, y: usize| x * n + y;
        let mut arrow_labels = Vec::new();
        let mut source = Vec::new();
        let mut target = Vec::new();
        let mut inv = Vec::new();
        let mut comp = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                arrow_labels.push(format!("({},{})", points[x], points[y]));
                source.push(x);
                target.push(y);
                inv.push(id(y, x));
                for z in 0..n {
                    comp.insert((id(x, y), id(y, z)), id(x, z));
                }
            }
        }
        let unit = (0..n).map(|x| id(x, x)).collect();
        FiniteGroupoid::from_parts(points.to_vec(), arrow_labels, source, target, unit, inv, comp)
            .expect("pair groupoid")
    }

    /// Componentwise product; object `(x, y)` has id `x·|H0| + y`, arrow
    /// `(g, h)` has id `g·|H1| + h`.
    pub fn product(&self, other: &FiniteGroupoid) -> Self {
        let no = other.n_objects();
        let na = other.n_arrows();
        let obj = |x: ObjId, y: ObjId| x * no + y;
        let arr = |g: ArrowId, h: ArrowId| g * na + h;
        let mut object_labels = Vec::with_capacity(self.n_objects() * no);
        for x in &self.object_labels {
            for y in &other.object_labels {
                object_labels.push(format!("({x},{y})"));
            }
        }
        let mut arrow_labels = Vec::with_capacity(self.n_arrows() * na);
        let mut source = Vec::with_capacity(self.n_arrows() * na);
        let mut target = Vec::with_capacity(self.n_arrows() * na);
        let mut inv = Vec::with_capacity(self.n_arrows() * na);
        for g in 0..self.n_arrows() {
            for h in 0..na {
                arrow_labels.push(format!("({},{})", self.arrow_labels[g], other.arrow_labels[h]));
                source.push(obj(self.source[g], other.source[h]));
                target.push(obj(self.target[g], other.target[h]));
                inv.push(arr(self.inv[g], other.inv[h]));
            }
        }
        let mut unit = Vec::with_capacity(self.n_objects() * no);
        for x in 0..self.n_objects() {
            for y in 0..no {
                unit.push(arr(self.unit[x], other.unit[y]));
            }
        }
        let mut comp = HashMap::with_capacity(self.comp.len() * other.comp.len());
        for (&(g1, g2), &g) in &self.comp {
            for (&(h1, h2), &h) in &other.comp {
                comp.insert((arr(g1, h1), arr(g2, h2)), arr(g, h));
            }
        }
        FiniteGroupoid::from_parts(object_labels, arrow_labels, source, target, unit, inv, comp)
            .expect("product of groupoids")
    }

    /// Disjoint union; the second groupoid's ids are shifted past the first.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Self {
        let (no, na) = (self.n_objects(), self.n_arrows());
        let mut object_labels = self.object_labels.clone();
        object_labels.extend(other.object_labels.iter().map(|s| format!("{s}'")));
        let mut arrow_labels = self.arrow_labels.clone();
        arrow_labels.extend(other.arrow_labels.iter().map(|s| format!("{s}'")));
        let shift_o = |v: &[ObjId]| v.iter().map(|&x| x + no).collect::<Vec<_>>();
        let shift_a = |v: &[ArrowId]| v.iter().map(|&g| g + na).collect::<Vec<_>>();
        let mut source = self.source.clone();
        source.extend(shift_o(&other.source));
        let mut target = self.target.clone();
        target.extend(shift_o(&other.target));
        let mut unit = self.unit.clone();
        unit.extend(shift_a(&other.unit));
        let mut inv = self.inv.clone();
        inv.extend(shift_a(&other.inv));
        let mut comp = self.comp.clone();
        comp.extend(other.comp.iter().map(|(&(g, h), &k)| ((g + na, h + na), k + na)));
        FiniteGroupoid::from_parts(object_labels, arrow_labels, source, target, unit, inv, comp)
            .expect("disjoint union")
    }

    /// Same arrows with `l` and `r` swapped and composition reversed; its
    /// convolution algebra is the opposite algebra.
    pub fn opposite(&self) -> Self {
        let comp = self.comp.iter().map(|(&(g, h), &k)| ((h, g), k)).collect();
        FiniteGroupoid::from_parts(
            self.object_labels.clone(),
            self.arrow_labels.clone(),
            self.target.clone(),
            self.source.clone(),
            self.unit.clone(),
            self.inv.clone(),
            comp,
        )
        .expect("opposite groupoid")
    }
}

/// A functor between finite groupoids given by its object and arrow maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub on_objects: Vec<ObjId>,
    pub on_arrows: Vec<ArrowId>,
}

impl GroupoidMorphism {
    /// Checks that the maps respect `l`, `r`, units, inverses and composition.
    pub fn check(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> Result<()> {
        let fail = |m: String| Err(Error::NotAFunctor(m));
        if self.on_objects.len() != from.n_objects() || self.on_arrows.len() != from.n_arrows() {
            return fail("map sizes do not match the source groupoid".into());
        }
        if self.on_objects.iter().any(|&y| y >= to.n_objects()) || self.on_arrows.iter().any(|&h| h >= to.n_arrows()) {
            return fail("map lands outside the target groupoid".into());
        }
        for g in 0..from.n_arrows() {
            let h = self.on_arrows[g];
            if to.l(h) != self.on_objects[from.l(g)] || to.r(h) != self.on_objects[from.r(g)] {
                return fail(format!("endpoints of {} not preserved", from.arrow_label(g)));
            }
            if to.inv(h) != self.on_arrows[from.inv(g)] {
                return fail(format!("inverse of {} not preserved", from.arrow_label(g)));
            }
        }
        for x in 0..from.n_objects() {
            if self.on_arrows[from.unit(x)] != to.unit(self.on_objects[x]) {
                return fail(format!("unit at {} not preserved", from.object_label(x)));
            }
        }
        for (&(g, h), &gh) in from.comp_table() {
            if to.comp(self.on_arrows[g], self.on_arrows[h]) != Some(self.on_arrows[gh]) {
                return fail(format!(
                    "composite of {} and {} not preserved",
                    from.arrow_label(g),
                    from.arrow_label(h)
                ));
            }
        }
        Ok(())
    }

    /// All functors `G → H` in lexicographic order of their tables, at
    /// most `limit` of them.
    pub fn enumerate(g: &FiniteGroupoid, h: &FiniteGroupoid, limit: usize) -> Vec<GroupoidMorphism> {
        let mut out = Vec::new();
        let mut objs = vec![0; g.n_objects()];
        enumerate_objects(g, h, 0, &mut objs, limit, &mut out);
        out
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidMorphism { on_objects: (0..g.n_objects()).collect(), on_arrows: (0..g.n_arrows()).collect() }
    }

    /// `φ` then `ψ`.
    pub fn then(&self, next: &GroupoidMorphism) -> Self {
        GroupoidMorphism {
            on_objects: self.on_objects.iter().map(|&x| next.on_objects[x]).collect(),
            on_arrows: self.on_arrows.iter().map(|&g| next.on_arrows[g]).collect(),
        }
    }

    /// The unique functor to the terminal groupoid.
    pub fn to_terminal(g: &FiniteGroupoid) -> Self {
        GroupoidMorphism { on_objects: vec![0; g.n_objects()], on_arrows: vec![0; g.n_arrows()] }
    }

    /// `G → G × G`, `g ↦ (g, g)`.
    pub fn diagonal(g: &FiniteGroupoid) -> Self {
        let no = g.n_objects();
        let na = g.n_arrows();
        GroupoidMorphism {
            on_objects: (0..no).map(|x| x * no + x).collect(),
            on_arrows: (0..na).map(|a| a * na + a).collect(),
        }
    }

    /// Induced by a group homomorphism between groups viewed as groupoids.
    pub fn from_group_hom(map: Vec<usize>) -> Self {
        GroupoidMorphism { on_objects: vec![0], on_arrows: map }
    }

    /// `φ × ψ : G × G' → H × H'`.
    pub fn product(&self, other: &GroupoidMorphism, other_target: &FiniteGroupoid) -> Self {
        let no = other_target.n_objects();
        let na = other_target.n_arrows();
        let mut on_objects = Vec::new();
        for &x in &self.on_objects {
            for &y in &other.on_objects {
                on_objects.push(x * no + y);
            }
        }
        let mut on_arrows = Vec::new();
        for &g in &self.on_arrows {
            for &h in &other.on_arrows {
                on_arrows.push(g * na + h);
            }
        }
        GroupoidMorphism { on_objects, on_arrows }
    }
}

fn enumerate_objects(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    x: usize,
    objs: &mut Vec<ObjId>,
    limit: usize,
    out: &mut Vec<GroupoidMorphism>,
) {
    if out.len() >= limit {
        return;
    }
    if x == g.n_objects() {
        let mut arrows = vec![usize::MAX; g.n_arrows()];
        enumerate_arrows(g, h, 0, objs, &mut arrows, limit, out);
        return;
    }
    for y in 0..h.n_objects() {
        objs[x] = y;
        enumerate_objects(g, h, x + 1, objs, limit, out);
    }
}

fn enumerate_arrows(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    a: usize,
    objs: &[ObjId],
    arrows: &mut Vec<ArrowId>,
    limit: usize,
    out: &mut Vec<GroupoidMorphism>,
) {
    if out.len() >= limit {
        return;
    }
    if a == g.n_arrows() {
        let phi = GroupoidMorphism { on_objects: objs.to_vec(), on_arrows: arrows.clone() };
        if phi.check(g, h).is_ok() {
            out.push(phi);
        }
        return;
    }
    let (x, y) = (objs[g.l(a)], objs[g.r(a)]);
    for &b in h.arrows_from(x) {
        if h.r(b) != y || (g.is_unit(a) && b != h.unit(x)) {
            continue;
        }
        arrows[a] = b;
        // Prune on composites whose three arrows are already assigned.
        let consistent = (0..=a).all(|p| {
            g.arrows_from(g.r(p)).iter().all(|&q| {
                let Some(pq) = g.comp(p, q) else { return true };
                if q > a || pq > a {
                    return true;
                }
                h.comp(arrows[p], arrows[q]) == Some(arrows[pq])
            })
        });
        if consistent {
            enumerate_arrows(g, h, a + 1, objs, arrows, limit, out);
        }
    }
    arrows[a] = usize::MAX;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    /// Z2 acting on {o, a, b}: fixes o, swaps a and b.
    pub(crate) fn z2_swap() -> GroupAction {
        GroupAction::new(GroupSpec::cyclic(2), labels(&["o", "a", "b"]), vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap()
    }

    #[test]
    fn trivial_groupoid_is_valid() {
        let g = FiniteGroupoid::trivial_groupoid(&labels(&["x", "y", "z"]));
        assert!(g.validate().is_valid());
        assert_eq!(g.orbits(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn z2_swap_action_groupoid() {
        let g = FiniteGroupoid::action_groupoid(&z2_swap()).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.n_arrows(), 6);
        assert_eq!(g.orbits(), vec![vec![0], vec![1, 2]]);
        assert_eq!(g.isotropy(0).unwrap().order(), 2);
        assert_eq!(g.isotropy(1).unwrap().order(), 1);
        assert!(matches!(g.isotropy(7), Err(Error::UnknownObject(7))));
    }

    #[test]
    fn trivial_group_action_gives_trivial_groupoid() {
        let a = GroupAction::new(GroupSpec::trivial(), labels(&["p", "q"]), vec![vec![0, 1]]).unwrap();
        let g = FiniteGroupoid::action_groupoid(&a).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.n_arrows(), 2);
        assert_eq!(g.orbits().len(), 2);
    }

    #[test]
    fn free_transitive_action() {
        let g = FiniteGroupoid::action_groupoid(&GroupAction::cyclic_translation(3, 3, 1)).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.n_arrows(), 9);
        assert_eq!(g.orbits().len(), 1);
        for x in 0..3 {
            assert_eq!(g.isotropy(x).unwrap().order(), 1);
        }
    }

    #[test]
    fn composability_violation_reported() {
        let g = FiniteGroupoid::action_groupoid(&z2_swap()).unwrap();
        let mut comp = g.comp_table().clone();
        // (1,a) goes b -> a ; (0,b) goes b -> b. r((1,a)) = a ≠ b = l((0,b)).
        let one_a = g.arrow_by_label("(1,a)").unwrap();
        let zero_b = g.arrow_by_label("(0,b)").unwrap();
        comp.insert((one_a, zero_b), zero_b);
        let bad = FiniteGroupoid::from_parts(
            g.object_labels().to_vec(),
            g.arrow_labels().to_vec(),
            (0..6).map(|a| g.l(a)).collect(),
            (0..6).map(|a| g.r(a)).collect(),
            (0..3).map(|x| g.unit(x)).collect(),
            (0..6).map(|a| g.inv(a)).collect(),
            comp,
        )
        .unwrap();
        let report = bad.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "composability" && v.witness == vec!["(1,a)".to_string(), "(0,b)".to_string()]));
    }

    #[test]
    fn standard_constructors() {
        let t = FiniteGroupoid::terminal();
        assert_eq!((t.n_objects(), t.n_arrows()), (1, 1));
        let bz2 = FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(2));
        assert_eq!((bz2.n_objects(), bz2.n_arrows()), (1, 2));
        assert!(bz2.isotropy(0).unwrap().is_isomorphic(&GroupSpec::cyclic(2)));
        let pair = FiniteGroupoid::pair_groupoid(&labels(&["1", "2"]));
        assert!(pair.validate().is_valid());
        assert_eq!(pair.n_arrows(), 4);
        assert_eq!(pair.orbits(), vec![vec![0, 1]]);
        assert_eq!(pair.isotropy(1).unwrap().order(), 1);
    }

    #[test]
    fn product_sizes_and_isotropy() {
        let g = FiniteGroupoid::action_groupoid(&z2_swap()).unwrap();
        let h = FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(3));
        let p = g.product(&h);
        assert!(p.validate().is_valid());
        assert_eq!(p.n_arrows(), 6 * 3);
        let iso = p.isotropy(0).unwrap();
        assert!(iso.is_isomorphic(&g.isotropy(0).unwrap().product(&h.isotropy(0).unwrap())));
    }

    #[test]
    fn opposite_is_valid() {
        let g = FiniteGroupoid::action_groupoid(&z2_swap()).unwrap();
        assert!(g.opposite().validate().is_valid());
        assert_eq!(g.opposite().opposite(), g);
    }

    #[test]
    fn functor_checks() {
        let z4 = FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(4));
        let z2 = FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(2));
        let good = GroupoidMorphism::from_group_hom(vec![0, 1, 0, 1]);
        assert!(good.check(&z4, &z2).is_ok());
        let bad = GroupoidMorphism::from_group_hom(vec![0, 1, 1, 0]);
        assert!(matches!(bad.check(&z4, &z2), Err(Error::NotAFunctor(_))));
        let diag = GroupoidMorphism::diagonal(&z2);
        assert!(diag.check(&z2, &z2.product(&z2)).is_ok());
    }

    #[test]
    fn functor_enumeration_counts() {
        // Hom(Z4, Z2) has 2 elements, Hom(Z2, Z4) has 2, Hom(Z3, Z3) has 3.
        let z = |n| FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(n));
        assert_eq!(GroupoidMorphism::enumerate(&z(4), &z(2), 100).len(), 2);
        assert_eq!(GroupoidMorphism::enumerate(&z(2), &z(4), 100).len(), 2);
        assert_eq!(GroupoidMorphism::enumerate(&z(3), &z(3), 100).len(), 3);
        // Functors from the pair groupoid on 2 points into Z2: object map is
        // forced, and the arrow (1,2) may go to either element.
        let pair = FiniteGroupoid::pair_groupoid(&labels(&["1", "2"]));
        assert_eq!(GroupoidMorphism::enumerate(&pair, &z(2), 100).len(), 2);
    }

    #[test]
    fn disjoint_union_is_valid() {
        let g = FiniteGroupoid::action_groupoid(&z2_swap()).unwrap();
        let u = g.disjoint_union(&FiniteGroupoid::terminal());
        assert!(u.validate().is_valid());
        assert_eq!(u.orbits().len(), 3);
    }
}
