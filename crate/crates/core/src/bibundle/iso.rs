use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::Bibundle;
use crate::error::{Error, Result};

/// Largest carrier accepted by the 2-isomorphism search.
pub const CARRIER_CAP: usize = 4096;

const DEFAULT_STEPS: u64 = 50_000_000;

/// A biequivariant bijection, `map[m]` is the image of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiequivariantMap {
    pub map: Vec<usize>,
}

impl BiequivariantMap {
    /// Independent check that the map is a bijection commuting with both
    /// moment maps and both actions.
    pub fn verify(&self, m: &Bibundle, n: &Bibundle) -> bool {
        if self.map.len() != m.len() || m.len() != n.len() {
            return false;
        }
        let mut seen = vec![false; n.len()];
        for &k in &self.map {
            if k >= n.len() || std::mem::replace(&mut seen[k], true) {
                return false;
            }
        }
        (0..m.len()).all(|x| {
            let y = self.map[x];
            m.lm(x) == n.lm(y)
                && m.rm(x) == n.rm(y)
                && m.left().arrows_into(m.lm(x)).iter().all(|&a| {
                    m.act_l(a, x).map(|ax| self.map[ax]) == n.act_l(a, y)
                })
                && m.right().arrows_from(m.rm(x)).iter().all(|&b| {
                    m.act_r(x, b).map(|xb| self.map[xb]) == n.act_r(y, b)
                })
        })
    }
}

fn step_budget() -> u64 {
    std::env::var("GROUPLIKE_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_STEPS)
}

struct Search<'a> {
    m: &'a Bibundle,
    n: &'a Bibundle,
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    trail: Vec<usize>,
    steps: u64,
    budget: u64,
}

const NONE: usize = usize::MAX;

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded(format!("more than {} search steps", self.budget)));
        }
        Ok(())
    }

    /// Assigns `x ↦ y` and everything forced by the two actions. Returns
    /// false on a conflict; the caller undoes via the trail.
    fn assign(&mut self, x: usize, y: usize) -> Result<bool> {
        let mut queue = VecDeque::from([(x, y)]);
        while let Some((x, y)) = queue.pop_front() {
            self.tick()?;
            if self.fwd[x] == y {
                continue;
            }
            if self.fwd[x] != NONE || self.bwd[y] != NONE {
                return Ok(false);
            }
            if self.m.lm(x) != self.n.lm(y) || self.m.rm(x) != self.n.rm(y) {
                return Ok(false);
            }
            self.fwd[x] = y;
            self.bwd[y] = x;
            self.trail.push(x);
            for &a in self.m.left().arrows_into(self.m.lm(x)) {
                match (self.m.act_l(a, x), self.n.act_l(a, y)) {
                    (Some(ax), Some(ay)) => queue.push_back((ax, ay)),
                    (None, None) => {}
                    _ => return Ok(false),
                }
            }
            for &b in self.m.right().arrows_from(self.m.rm(x)) {
                match (self.m.act_r(x, b), self.n.act_r(y, b)) {
                    (Some(xb), Some(yb)) => queue.push_back((xb, yb)),
                    (None, None) => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            self.bwd[self.fwd[x]] = NONE;
            self.fwd[x] = NONE;
        }
    }

    fn solve(&mut self, candidates: &HashMap<(usize, usize), Vec<usize>>) -> Result<bool> {
        let Some(x) = self.fwd.iter().position(|&y| y == NONE) else { return Ok(true) };
        let key = (self.m.lm(x), self.m.rm(x));
        for &y in &candidates[&key] {
            if self.bwd[y] != NONE {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(x, y)? && self.solve(candidates)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

/// Exact backtracking for a biequivariant bijection `M → N`, seeded by the
/// `(lM, rM)` fibers. Candidates are tried in increasing order, so the result
/// is the first solution in that order.
pub fn find_biequivariant_iso(m: &Bibundle, n: &Bibundle) -> Result<Option<BiequivariantMap>> {
    if m.left() != n.left() || m.right() != n.right() {
        return Ok(None);
    }
    if m.len().max(n.len()) > CARRIER_CAP {
        return Err(Error::BudgetExceeded(format!(
            "carrier of size {} exceeds the cap {CARRIER_CAP}",
            m.len().max(n.len())
        )));
    }
    if m.len() != n.len() {
        return Ok(None);
    }
    let mut candidates: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for y in 0..n.len() {
        candidates.entry((n.lm(y), n.rm(y))).or_default().push(y);
    }
    let mut sizes: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..m.len() {
        *sizes.entry((m.lm(x), m.rm(x))).or_default() += 1;
    }
    if sizes.len() != candidates.len() || sizes.iter().any(|(k, &c)| candidates.get(k).map(Vec::len) != Some(c)) {
        return Ok(None);
    }
    let mut s = Search {
        m,
        n,
        fwd: vec![NONE; m.len()],
        bwd: vec![NONE; n.len()],
        trail: Vec::new(),
        steps: 0,
        budget: step_budget(),
    };
    if s.solve(&candidates)? {
        Ok(Some(BiequivariantMap { map: s.fwd }))
    } else {
        Ok(None)
    }
}

/// First `(lM, rM)` fiber whose sizes differ, as a human-readable witness.
pub(crate) fn fiber_mismatch(m: &Bibundle, n: &Bibundle) -> Option<String> {
    let count = |b: &Bibundle| {
        let mut c: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
        for x in 0..b.len() {
            *c.entry((b.lm(x), b.rm(x))).or_default() += 1;
        }
        c
    };
    let (cm, cn) = (count(m), count(n));
    let keys: std::collections::BTreeSet<_> = cm.keys().chain(cn.keys()).copied().collect();
    keys.into_iter().find_map(|k| {
        let (a, b) = (cm.get(&k).copied().unwrap_or(0), cn.get(&k).copied().unwrap_or(0));
        (a != b).then(|| {
            format!(
                "fiber over ({}, {}) has {a} vs {b} elements",
                m.left().object_label(k.0),
                m.right().object_label(k.1)
            )
        })
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoid::{FiniteGroupoid, GroupAction, GroupSpec};

    fn sample() -> Bibundle {
        let a = GroupAction::new(
            GroupSpec::cyclic(2),
            vec!["o".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap();
        Bibundle::identity(&Arc::new(FiniteGroupoid::action_groupoid(&a).unwrap()))
    }

    #[test]
    fn self_iso_is_identity() {
        let m = sample();
        let f = find_biequivariant_iso(&m, &m).unwrap().unwrap();
        assert_eq!(f.map, (0..m.len()).collect::<Vec<_>>());
        assert!(f.verify(&m, &m));
    }

    #[test]
    fn relabelled_copy() {
        let m = sample();
        let perm = vec![3, 5, 0, 1, 4, 2];
        let n = m.permute(&perm);
        let f = find_biequivariant_iso(&m, &n).unwrap().unwrap();
        assert!(f.verify(&m, &n));
    }

    #[test]
    fn cardinality_mismatch() {
        let m = sample();
        let mm = m.disjoint_union(&m).unwrap();
        assert!(find_biequivariant_iso(&m, &mm).unwrap().is_none());
        assert!(fiber_mismatch(&m, &mm).is_some());
    }
}
