//! JSON file formats for groupoids, bibundles, stacky-group data, bimodules
//! and symplectic spaces.
//!
//! Arrows, objects and carrier points are referred to by label. Labels may
//! be written as strings or integers.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bibundle::{Bibundle, StackyData};
use crate::convalg::Bimodule;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupAction, GroupSpec};
use crate::linalg::Matrix;
use crate::scalars::{parse_rational, Rational};
use crate::symprel::{LinRelation, SympSpace};

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum Label {
    Str(String),
    Int(i64),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Str(s) => s.clone(),
            Label::Int(n) => n.to_string(),
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn index_of(labels: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut m = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if m.insert(l.clone(), i).is_some() {
            return Err(parse_err(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(m)
}

fn lookup(index: &HashMap<String, usize>, l: &Label, what: &str) -> Result<usize> {
    let key = l.text();
    index.get(&key).copied().ok_or_else(|| parse_err(format!("unknown {what} {key:?}")))
}

// --- groupoids ---------------------------------------------------------------

#[derive(Deserialize)]
struct ArrowJson {
    id: Label,
    l: Label,
    r: Label,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidJson {
    objects: Vec<Label>,
    arrows: Vec<ArrowJson>,
    units: BTreeMap<String, Label>,
    inv: BTreeMap<String, Label>,
    comp: Vec<[Label; 3]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupJson {
    Cyclic { cyclic: usize },
    Table { elements: Vec<Label>, table: Vec<Vec<Label>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionJson {
    group: GroupJson,
    carrier: Vec<Label>,
    act: Vec<[Label; 3]>,
}

fn group_from_json(g: &GroupJson) -> Result<GroupSpec> {
    match g {
        GroupJson::Cyclic { cyclic } if *cyclic > 0 => Ok(GroupSpec::cyclic(*cyclic)),
        GroupJson::Cyclic { .. } => Err(parse_err("cyclic group of order 0")),
        GroupJson::Table { elements, table } => {
            let labels: Vec<String> = elements.iter().map(Label::text).collect();
            let idx = index_of(&labels, "group element")?;
            let mul = table
                .iter()
                .map(|row| row.iter().map(|x| lookup(&idx, x, "group element")).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            GroupSpec::from_table(labels, mul)
        }
    }
}

/// The group action of an action-shorthand file, checked for the action
/// axioms; `InvalidAction` carries the witness.
fn action_from_json(a: &ActionJson) -> Result<GroupAction> {
    let group = group_from_json(&a.group)?;
    let carrier: Vec<String> = a.carrier.iter().map(Label::text).collect();
    let pidx = index_of(&carrier, "carrier point")?;
    let gidx = index_of(group.labels(), "group element")?;
    let mut act = vec![vec![usize::MAX; carrier.len()]; group.order()];
    for [g, p, gp] in &a.act {
        let (g, p, gp) = (lookup(&gidx, g, "group element")?, lookup(&pidx, p, "carrier point")?, lookup(&pidx, gp, "carrier point")?);
        act[g][p] = gp;
    }
    for (g, row) in act.iter().enumerate() {
        if let Some(p) = row.iter().position(|&x| x == usize::MAX) {
            return Err(parse_err(format!("action of {} on {} is missing", group.label(g), carrier[p])));
        }
    }
    GroupAction::new(group, carrier, act)
}

fn groupoid_from_full(j: &GroupoidJson) -> Result<FiniteGroupoid> {
    let objects: Vec<String> = j.objects.iter().map(Label::text).collect();
    let arrows: Vec<String> = j.arrows.iter().map(|a| a.id.text()).collect();
    let oidx = index_of(&objects, "object")?;
    let aidx = index_of(&arrows, "arrow")?;
    let source = j.arrows.iter().map(|a| lookup(&oidx, &a.l, "object")).collect::<Result<Vec<_>>>()?;
    let target = j.arrows.iter().map(|a| lookup(&oidx, &a.r, "object")).collect::<Result<Vec<_>>>()?;
    let mut unit = vec![usize::MAX; objects.len()];
    for (x, g) in &j.units {
        unit[lookup(&oidx, &Label::Str(x.clone()), "object")?] = lookup(&aidx, g, "arrow")?;
    }
    if let Some(x) = unit.iter().position(|&u| u == usize::MAX) {
        return Err(parse_err(format!("object {} has no unit", objects[x])));
    }
    let mut inv = vec![usize::MAX; arrows.len()];
    for (g, h) in &j.inv {
        inv[lookup(&aidx, &Label::Str(g.clone()), "arrow")?] = lookup(&aidx, h, "arrow")?;
    }
    if let Some(g) = inv.iter().position(|&u| u == usize::MAX) {
        return Err(parse_err(format!("arrow {} has no inverse", arrows[g])));
    }
    let mut comp = HashMap::new();
    for [g, h, gh] in &j.comp {
        comp.insert((lookup(&aidx, g, "arrow")?, lookup(&aidx, h, "arrow")?), lookup(&aidx, gh, "arrow")?);
    }
    FiniteGroupoid::from_parts(objects, arrows, source, target, unit, inv, comp)
}

/// Reads either the full groupoid format or the action shorthand.
pub fn groupoid_from_value(v: &Value) -> Result<FiniteGroupoid> {
    if v.get("group").is_some() {
        let a: ActionJson = serde_json::from_value(v.clone())?;
        FiniteGroupoid::action_groupoid(&action_from_json(&a)?)
    } else {
        let j: GroupoidJson = serde_json::from_value(v.clone())?;
        groupoid_from_full(&j)
    }
}

pub fn groupoid_to_value(g: &FiniteGroupoid) -> Value {
    let arrows: Vec<Value> = (0..g.n_arrows())
        .map(|a| json!({"id": g.arrow_label(a), "l": g.object_label(g.l(a)), "r": g.object_label(g.r(a))}))
        .collect();
    let units: BTreeMap<&str, &str> =
        (0..g.n_objects()).map(|x| (g.object_label(x), g.arrow_label(g.unit(x)))).collect();
    let inv: BTreeMap<&str, &str> = (0..g.n_arrows()).map(|a| (g.arrow_label(a), g.arrow_label(g.inv(a)))).collect();
    let mut comp: Vec<_> = g.comp_table().iter().map(|(&(a, b), &c)| (a, b, c)).collect();
    comp.sort_unstable();
    let comp: Vec<Value> =
        comp.into_iter().map(|(a, b, c)| json!([g.arrow_label(a), g.arrow_label(b), g.arrow_label(c)])).collect();
    json!({"objects": g.object_labels(), "arrows": arrows, "units": units, "inv": inv, "comp": comp})
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

/// A groupoid given inline or as a path relative to `base`.
fn groupoid_ref(v: &Value, base: Option<&Path>) -> Result<FiniteGroupoid> {
    match v {
        Value::String(p) => {
            let path = base.map(|b| b.join(p)).unwrap_or_else(|| PathBuf::from(p));
            groupoid_from_value(&read_json(&path)?)
        }
        _ => groupoid_from_value(v),
    }
}

// --- bibundles ---------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BibundleJson {
    left: Value,
    right: Value,
    carrier: Vec<Label>,
    #[serde(rename = "lM")]
    lm: BTreeMap<String, Label>,
    #[serde(rename = "rM")]
    rm: BTreeMap<String, Label>,
    #[serde(rename = "actL", default)]
    act_l: Vec<[Label; 3]>,
    #[serde(rename = "actR", default)]
    act_r: Vec<[Label; 3]>,
}

/// Reads a bibundle whose groupoids are inline or paths relative to `base`.
/// Groupoids equal to one of `known` are shared with it.
pub fn bibundle_from_value(v: &Value, base: Option<&Path>, known: &[Arc<FiniteGroupoid>]) -> Result<Bibundle> {
    let j: BibundleJson = serde_json::from_value(v.clone())?;
    let share = |g: FiniteGroupoid| known.iter().find(|k| ***k == g).cloned().unwrap_or_else(|| Arc::new(g));
    let left = share(groupoid_ref(&j.left, base)?);
    let right = share(groupoid_ref(&j.right, base)?);
    let carrier: Vec<String> = j.carrier.iter().map(Label::text).collect();
    let cidx = index_of(&carrier, "carrier point")?;
    let lobj = index_of(left.object_labels(), "object")?;
    let robj = index_of(right.object_labels(), "object")?;
    let larr = index_of(left.arrow_labels(), "arrow")?;
    let rarr = index_of(right.arrow_labels(), "arrow")?;
    let moment = |m: &BTreeMap<String, Label>, objs: &HashMap<String, usize>, side: &str| -> Result<Vec<usize>> {
        let mut out = vec![usize::MAX; carrier.len()];
        for (k, x) in m {
            out[lookup(&cidx, &Label::Str(k.clone()), "carrier point")?] = lookup(objs, x, "object")?;
        }
        if let Some(i) = out.iter().position(|&x| x == usize::MAX) {
            return Err(parse_err(format!("{side} moment map misses {}", carrier[i])));
        }
        Ok(out)
    };
    let lm = moment(&j.lm, &lobj, "left")?;
    let rm = moment(&j.rm, &robj, "right")?;
    let mut act_l = HashMap::new();
    for [g, m, gm] in &j.act_l {
        act_l.insert(
            (lookup(&larr, g, "left arrow")?, lookup(&cidx, m, "carrier point")?),
            lookup(&cidx, gm, "carrier point")?,
        );
    }
    let mut act_r = HashMap::new();
    for [m, h, mh] in &j.act_r {
        act_r.insert(
            (lookup(&cidx, m, "carrier point")?, lookup(&rarr, h, "right arrow")?),
            lookup(&cidx, mh, "carrier point")?,
        );
    }
    Bibundle::from_parts(left, right, carrier, lm, rm, act_l, act_r)
}

pub fn bibundle_to_value(b: &Bibundle) -> Value {
    let (l, r) = (b.left(), b.right());
    let lm: BTreeMap<&str, &str> = (0..b.len()).map(|m| (b.carrier()[m].as_str(), l.object_label(b.lm(m)))).collect();
    let rm: BTreeMap<&str, &str> = (0..b.len()).map(|m| (b.carrier()[m].as_str(), r.object_label(b.rm(m)))).collect();
    let mut act_l: Vec<_> = b.left_table().iter().map(|(&(g, m), &k)| (m, g, k)).collect();
    act_l.sort_unstable();
    let mut act_r: Vec<_> = b.right_table().iter().map(|(&(m, h), &k)| (m, h, k)).collect();
    act_r.sort_unstable();
    let c = |m: usize| b.carrier()[m].clone();
    json!({
        "left": groupoid_to_value(l),
        "right": groupoid_to_value(r),
        "carrier": b.carrier(),
        "lM": lm,
        "rM": rm,
        "actL": act_l.into_iter().map(|(m, g, k)| json!([l.arrow_label(g), c(m), c(k)])).collect::<Vec<_>>(),
        "actR": act_r.into_iter().map(|(m, h, k)| json!([c(m), r.arrow_label(h), c(k)])).collect::<Vec<_>>(),
    })
}

/// `{"groupoid": ..., "em": ..., "ee": ..., "einv": ...}`.
pub fn stacky_from_value(v: &Value, base: Option<&Path>) -> Result<StackyData> {
    let field = |k: &str| v.get(k).ok_or_else(|| parse_err(format!("missing field {k:?}")));
    let g = Arc::new(groupoid_ref(field("groupoid")?, base)?);
    let known = [g.clone()];
    let em = bibundle_from_value(field("em")?, base, &known)?;
    let ee = bibundle_from_value(field("ee")?, base, &known)?;
    let einv = bibundle_from_value(field("einv")?, base, &known)?;
    let name = v.get("name").and_then(Value::as_str).unwrap_or("file").to_string();
    Ok(StackyData { name, g, em, ee, einv })
}

pub fn stacky_to_value(d: &StackyData) -> Value {
    json!({
        "name": d.name,
        "groupoid": groupoid_to_value(&d.g),
        "em": bibundle_to_value(&d.em),
        "ee": bibundle_to_value(&d.ee),
        "einv": bibundle_to_value(&d.einv),
    })
}

// --- bimodules ---------------------------------------------------------------

/// Dense action matrices keyed by arrow label, entries as scalar JSON.
pub fn bimodule_to_value(m: &Bimodule) -> Value {
    let dense = |s: &crate::convalg::SparseMatrix| -> Vec<Vec<Value>> {
        (0..s.nrows)
            .map(|i| (0..s.ncols()).map(|j| serde_json::to_value(s.get(i, j)).expect("scalar")).collect())
            .collect()
    };
    let left: BTreeMap<&str, _> =
        (0..m.left().n_arrows()).map(|g| (m.left().arrow_label(g), dense(m.act_left(g)))).collect();
    let right: BTreeMap<&str, _> =
        (0..m.right().n_arrows()).map(|h| (m.right().arrow_label(h), dense(m.act_right(h)))).collect();
    json!({"dim": m.dim(), "basis": m.basis(), "actLeft": left, "actRight": right})
}

// --- symplectic spaces -------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
enum RatJson {
    Int(i64),
    Str(String),
}

fn rational(r: &RatJson) -> Result<Rational> {
    match r {
        RatJson::Int(n) => Ok(Rational::from_integer((*n).into())),
        RatJson::Str(s) => parse_rational(s),
    }
}

fn rational_rows(rows: &[Vec<RatJson>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter().map(|r| r.iter().map(rational).collect()).collect()
}

#[derive(Deserialize)]
struct RelationJson {
    #[serde(default)]
    name: Option<String>,
    source: String,
    target: String,
    basis: Vec<Vec<RatJson>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SympJson {
    dim: usize,
    omega: Vec<Vec<RatJson>>,
    #[serde(default)]
    relations: Vec<RelationJson>,
}

#[derive(Clone, Debug)]
pub struct SympFile {
    pub space: SympSpace,
    pub relations: Vec<(Option<String>, LinRelation)>,
}

/// Spaces are named `S`, `S^op`, `1` or sums such as `S+S^op`.
fn space_by_name(s: &SympSpace, name: &str) -> Result<SympSpace> {
    let mut out = SympSpace::zero();
    for part in name.split('+').map(str::trim) {
        let piece = match part {
            "S" => s.clone(),
            "S^op" => s.opposite(),
            "1" => SympSpace::zero(),
            other => return Err(parse_err(format!("unknown space {other:?}"))),
        };
        out = out.direct_sum(&piece);
    }
    Ok(out)
}

pub fn symp_from_value(v: &Value) -> Result<SympFile> {
    let j: SympJson = serde_json::from_value(v.clone())?;
    let rows = rational_rows(&j.omega)?;
    if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
        return Err(parse_err(format!("omega must be {0}×{0}", j.dim)));
    }
    let space = SympSpace::new(Matrix::from_rows(rows))?;
    let mut relations = Vec::new();
    for r in &j.relations {
        let src = space_by_name(&space, &r.source)?;
        let tgt = space_by_name(&space, &r.target)?;
        let rel = LinRelation::from_vectors(&src, &tgt, &rational_rows(&r.basis)?)?;
        relations.push((r.name.clone(), rel));
    }
    Ok(SympFile { space, relations })
}

pub fn symp_space_to_value(s: &SympSpace) -> Value {
    let omega: Vec<Vec<String>> =
        (0..s.dim()).map(|i| (0..s.dim()).map(|j| s.omega().get(i, j).to_string()).collect()).collect();
    json!({"dim": s.dim(), "omega": omega})
}

#[derive(Serialize)]
struct RelationOut {
    source_dim: usize,
    target_dim: usize,
    basis: Vec<Vec<String>>,
}

pub fn relation_to_value(r: &LinRelation) -> Value {
    serde_json::to_value(RelationOut {
        source_dim: r.source().dim(),
        target_dim: r.target().dim(),
        basis: r.basis().iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
    })
    .expect("plain data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bibundle::cyclic_quotient_family;

    fn z2_swap_json() -> Value {
        json!({"group": {"cyclic": 2}, "carrier": ["o", "a", "b"],
               "act": [[0, "o", "o"], [0, "a", "a"], [0, "b", "b"], [1, "o", "o"], [1, "a", "b"], [1, "b", "a"]]})
    }

    #[test]
    fn action_shorthand() {
        let g = groupoid_from_value(&z2_swap_json()).unwrap();
        assert_eq!((g.n_objects(), g.n_arrows()), (3, 6));
        assert!(g.validate().is_valid());
    }

    #[test]
    fn groupoid_roundtrip() {
        let g = groupoid_from_value(&z2_swap_json()).unwrap();
        let back = groupoid_from_value(&groupoid_to_value(&g)).unwrap();
        assert_eq!(g, back);
        assert_eq!(g.arrow_labels(), back.arrow_labels());
    }

    #[test]
    fn broken_composition_parses_but_fails_validation() {
        let mut v = groupoid_to_value(&groupoid_from_value(&z2_swap_json()).unwrap());
        v["comp"].as_array_mut().unwrap().pop();
        let g = groupoid_from_value(&v).unwrap();
        assert!(!g.validate().is_valid());
    }

    #[test]
    fn unknown_labels_are_parse_errors() {
        let mut v = z2_swap_json();
        v["act"][0][1] = json!("zz");
        assert!(matches!(groupoid_from_value(&v), Err(Error::Parse(_))));
        assert!(matches!(groupoid_from_value(&json!({"objects": []})), Err(Error::Parse(_))));
    }

    #[test]
    fn table_group() {
        let v = json!({"group": {"elements": ["e", "s"], "table": [["e", "s"], ["s", "e"]]},
                       "carrier": ["x"], "act": [["e", "x", "x"], ["s", "x", "x"]]});
        let g = groupoid_from_value(&v).unwrap();
        assert_eq!(g.isotropy(0).unwrap().order(), 2);
    }

    #[test]
    fn stacky_roundtrip() {
        let d = cyclic_quotient_family();
        let back = stacky_from_value(&stacky_to_value(&d), None).unwrap();
        assert_eq!(back.em, d.em);
        assert_eq!(back.einv, d.einv);
        assert!(Arc::ptr_eq(back.em.right(), &back.g));
    }

    #[test]
    fn symplectic_file() {
        let v = json!({"dim": 2, "omega": [[0, 1], [-1, 0]],
                       "relations": [{"name": "diag", "source": "S", "target": "S", "basis": [[1, 0, 1, 0], [0, 1, 0, 1]]},
                                     {"source": "S+S^op", "target": "1", "basis": [["1/2", 0, "1/2", 0]]}]});
        let f = symp_from_value(&v).unwrap();
        assert_eq!(f.space.dim(), 2);
        assert!(f.relations[0].1.is_lagrangian());
        assert_eq!(f.relations[1].1.ambient_dim(), 4);
        let bad = json!({"dim": 2, "omega": [[0, 1], [1, 0]]});
        assert!(symp_from_value(&bad).is_err());
    }
}
