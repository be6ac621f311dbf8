use serde::Serialize;

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupViolation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

impl GroupSpec {
    /// Builds a group from a table, deriving identity and inverses. Fails if
    /// the table is not a group.
    pub fn from_table(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidAction("group table has the wrong shape".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| Error::InvalidAction("group table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| Error::InvalidAction(format!("element {} has no inverse", labels[a])))?;
        }
        let g = GroupSpec { labels, mul, identity, inverse };
        let violations = g.validate();
        if let Some(v) = violations.first() {
            return Err(Error::InvalidAction(format!("{} fails at {:?}", v.axiom, v.witness)));
        }
        Ok(g)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let labels = (0..n).map(|k| k.to_string()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupSpec::from_table(labels, mul).expect("cyclic group table")
    }

    pub fn trivial() -> Self {
        GroupSpec::cyclic(1)
    }

    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let m = other.order();
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let n = self.order() * m;
        let mul = (0..n)
            .map(|x| (0..n).map(|y| self.mul[x / m][y / m] * m + other.mul[x % m][y % m]).collect())
            .collect();
        GroupSpec::from_table(labels, mul).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// Exhaustive check of the group axioms.
    pub fn validate(&self) -> Vec<GroupViolation> {
        let n = self.order();
        let mut out = Vec::new();
        for a in 0..n {
            if self.mul[self.identity][a] != a || self.mul[a][self.identity] != a {
                out.push(GroupViolation { axiom: "identity".into(), witness: vec![a] });
            }
            let b = self.inverse[a];
            if self.mul[a][b] != self.identity || self.mul[b][a] != self.identity {
                out.push(GroupViolation { axiom: "inverse".into(), witness: vec![a] });
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        out.push(GroupViolation { axiom: "associativity".into(), witness: vec![a, b, c] });
                    }
                }
            }
        }
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Elements of the subgroup generated by `gens`.
    fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul[x][g];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        // Prefer high-order elements: fewer generators, smaller search.
        let mut order: Vec<usize> = (0..self.order()).collect();
        order.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        for a in order {
            if !span[a] {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// An isomorphism `self → other` as an element map, found by
    /// backtracking over images of a generating set.
    pub fn find_isomorphism(&self, other: &GroupSpec) -> Option<Vec<usize>> {
        if self.order() != other.order() || self.is_abelian() != other.is_abelian() {
            return None;
        }
        let mut self_orders: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        let mut other_orders: Vec<usize> = (0..other.order()).map(|a| other.element_order(a)).collect();
        let gens = self.greedy_generators();
        let gen_orders: Vec<usize> = gens.iter().map(|&g| self_orders[g]).collect();
        self_orders.sort_unstable();
        other_orders.sort_unstable();
        if self_orders != other_orders {
            return None;
        }
        let mut images = Vec::with_capacity(gens.len());
        self.search_iso(other, &gens, &gen_orders, &mut images)
    }

    fn search_iso(
        &self,
        other: &GroupSpec,
        gens: &[usize],
        gen_orders: &[usize],
        images: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self.extend_hom(other, gens, images);
        }
        let k = images.len();
        for cand in 0..other.order() {
            if other.element_order(cand) != gen_orders[k] {
                continue;
            }
            images.push(cand);
            if let Some(m) = self.search_iso(other, gens, gen_orders, images) {
                return Some(m);
            }
            images.pop();
        }
        None
    }

    fn extend_hom(&self, other: &GroupSpec, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[self.identity] = other.identity;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul[x][g];
                let fy = other.mul[map[x]][img];
                if map[y] == usize::MAX {
                    map[y] = fy;
                    stack.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v == usize::MAX || hit[v] {
                return None;
            }
            hit[v] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if map[self.mul[a][b]] != other.mul[map[a]][map[b]] {
                    return None;
                }
            }
        }
        Some(map)
    }

    pub fn is_isomorphic(&self, other: &GroupSpec) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Short description used in reports.
    pub fn summary(&self) -> String {
        let n = self.order();
        if n == 1 {
            return "1".into();
        }
        if (0..n).any(|a| self.element_order(a) == n) {
            return format!("Z{n}");
        }
        format!("order {n}{}", if self.is_abelian() { " abelian" } else { "" })
    }
}

/// A group acting on a finite set, `act[a][p] = a·p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub group: GroupSpec,
    pub carrier: Vec<String>,
    pub act: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: GroupSpec, carrier: Vec<String>, act: Vec<Vec<usize>>) -> Result<Self> {
        let a = GroupAction { group, carrier, act };
        a.validate()?;
        Ok(a)
    }

    /// `Z_n` acting on `Z_m` by translation through `k ↦ k·step mod m`.
    pub fn cyclic_translation(n: usize, m: usize, step: usize) -> Self {
        let group = GroupSpec::cyclic(n);
        let carrier = (0..m).map(|x| x.to_string()).collect();
        let act = (0..n).map(|a| (0..m).map(|p| (p + a * step) % m).collect()).collect();
        GroupAction::new(group, carrier, act).expect("translation action")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        let m = self.carrier.len();
        if self.act.len() != n || self.act.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(Error::InvalidAction("action table has the wrong shape".into()));
        }
        let e = self.group.identity();
        for p in 0..m {
            if self.act[e][p] != p {
                return Err(Error::InvalidAction(format!("identity moves point {}", self.carrier[p])));
            }
            for a in 0..n {
                for b in 0..n {
                    if self.act[a][self.act[b][p]] != self.act[self.group.mul(a, b)][p] {
                        return Err(Error::InvalidAction(format!(
                            "compatibility fails for ({}, {}, {})",
                            self.group.label(a),
                            self.group.label(b),
                            self.carrier[p]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, a: usize, p: usize) -> usize {
        self.act[a][p]
    }

    /// Elements fixing `p`, in increasing order.
    pub fn stabilizer_elements(&self, p: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&a| self.act[a][p] == p).collect()
    }

    pub fn stabilizer(&self, p: usize) -> GroupSpec {
        let elems = self.stabilizer_elements(p);
        let pos = |x: usize| elems.iter().position(|&y| y == x).unwrap();
        let labels = elems.iter().map(|&a| self.group.label(a).to_string()).collect();
        let mul = elems.iter().map(|&a| elems.iter().map(|&b| pos(self.group.mul(a, b))).collect()).collect();
        GroupSpec::from_table(labels, mul).expect("stabilizer is a subgroup")
    }
}
