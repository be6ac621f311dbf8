use std::path::Path;
use std::sync::Arc;

use grouplike::bibundle::{
    cyclic_quotient_family, group_family, morita_refute, morita_verify, mutate_entry, stacky_group_check,
    trivial_group_family, Bibundle, StackyData,
};
use grouplike::circlegeom::{
    compose_circles, default_alpha_samples, emit_plot, oracle_compare, oracle_sweep, PlotOptions, TorusCircle,
};
use grouplike::convalg::{
    bimodule_iso, check_coassoc, check_counit, cyclic_character, is_commutative, module_tensor, point_module,
    Bimodule, HopfishData,
};
use grouplike::format::{
    bibundle_from_value, bibundle_to_value, bimodule_to_value, groupoid_from_value, read_json, relation_to_value,
    stacky_from_value, symp_from_value, symp_space_to_value,
};
use grouplike::groupoid::{FiniteGroupoid, GroupSpec};
use grouplike::nctorus::{tensor_classify, ModuleClass};
use grouplike::scalars::Angle;
use grouplike::symprel::{check_zigzag, check_zigzag_with, random_symplectic_space, SympSpace};
use grouplike::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{ClassArgs, Command, FamilyArgs};

pub struct Report {
    pub json: Value,
    pub summary: String,
    pub code: u8,
}

impl Report {
    fn checked(passed: bool, json: Value, summary: impl Into<String>) -> Self {
        let status = if passed { "PASS" } else { "FAIL" };
        Report { json, summary: format!("{status}: {}", summary.into()), code: if passed { 0 } else { 1 } }
    }

    fn failure(json: Value, summary: impl Into<String>) -> Self {
        Report::checked(false, json, summary)
    }
}

/// Errors that are a failed check rather than bad input.
fn is_check_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotPrincipal(_) | Error::AxiomsFailed(_) | Error::InvalidAction(_) | Error::NotAFunctor(_)
    )
}

fn error_report(e: Error) -> Report {
    let json = json!({"status": "error", "error": e.to_string()});
    if is_check_failure(&e) {
        return Report::failure(json!({"status": "failed", "witness": e.to_string()}), e.to_string());
    }
    Report { json, summary: format!("error: {e}"), code: 2 }
}

pub fn run(cmd: &Command, seed: u64) -> Report {
    let out = match cmd {
        Command::Validate { path } => validate(path),
        Command::ComposeBibundles { first, second } => compose(first, second),
        Command::Morita { left, right, bibundle } => morita(left, right, bibundle.as_deref()),
        Command::StackyCheck { source, mutate } => stacky(source, *mutate),
        Command::Hopfish { source } => hopfish(source),
        Command::TensorMod { source, left, right, expect } => tensor_mod(source, left, right, expect.as_deref()),
        Command::NctTensor { classes } => nct_tensor(classes),
        Command::OracleCompare { sweep, p1, q1, alpha1, p2, q2, alpha2 } => match sweep {
            Some(b) => oracle_sweep_cmd(*b),
            None => match (p1, q1, p2, q2) {
                (Some(p1), Some(q1), Some(p2), Some(q2)) => oracle_single(&ClassArgs {
                    p1: *p1,
                    q1: *q1,
                    alpha1: alpha1.clone(),
                    p2: *p2,
                    q2: *q2,
                    alpha2: alpha2.clone(),
                }),
                _ => Err(Error::Parse("give --sweep B or all of --p1 --q1 --p2 --q2".into())),
            },
        },
        Command::Zigzag { file, dim, random } => zigzag(file.as_deref(), *dim, *random, seed),
        Command::Plot { circles, compose, svg, lambda } => plot(circles, *compose, svg, *lambda),
    };
    out.unwrap_or_else(error_report)
}

type Outcome = grouplike::Result<Report>;

fn base_dir(path: &Path) -> Option<&Path> {
    path.parent()
}

fn is_bibundle(v: &Value) -> bool {
    v.get("carrier").is_some() && v.get("lM").is_some()
}

fn load_groupoid(path: &Path) -> grouplike::Result<FiniteGroupoid> {
    groupoid_from_value(&read_json(path)?)
}

fn load_bibundle(path: &Path, known: &[Arc<FiniteGroupoid>]) -> grouplike::Result<Bibundle> {
    bibundle_from_value(&read_json(path)?, base_dir(path), known)
}

fn validate(path: &Path) -> Outcome {
    let v = read_json(path)?;
    if is_bibundle(&v) {
        let b = bibundle_from_value(&v, base_dir(path), &[])?;
        let report = b.validate();
        let right = b.is_right_principal()?;
        let left = b.is_left_principal()?;
        let valid = report.is_valid();
        let summary = match report.violations.first() {
            None => format!("bibundle with {} points satisfies the axioms", b.len()),
            Some(x) => format!("{} fails at {}", x.axiom, x.witness.join(", ")),
        };
        let json = json!({
            "kind": "bibundle",
            "valid": valid,
            "violations": report.violations,
            "rightPrincipal": right,
            "leftPrincipal": left,
        });
        return Ok(Report::checked(valid, json, summary));
    }
    let g = match groupoid_from_value(&v) {
        Ok(g) => g,
        Err(Error::InvalidAction(w)) => {
            let json = json!({"kind": "action", "valid": false, "violations": [{"axiom": "group action", "witness": [w]}]});
            return Ok(Report::failure(json, format!("group action fails: {w}")));
        }
        Err(e) => return Err(e),
    };
    let report = g.validate();
    let valid = report.is_valid();
    let summary = match report.violations.first() {
        None => format!("groupoid with {} objects and {} arrows satisfies the axioms", g.n_objects(), g.n_arrows()),
        Some(x) => format!("{} fails at {}", x.axiom, x.witness.join(", ")),
    };
    let mut json = json!({"kind": "groupoid", "valid": valid, "violations": report.violations});
    if valid {
        let orbits: Vec<Vec<&str>> =
            g.orbits().iter().map(|o| o.iter().map(|&x| g.object_label(x)).collect()).collect();
        let isotropy: Vec<String> =
            g.orbits().iter().map(|o| g.isotropy(o[0]).map(|s| s.summary())).collect::<grouplike::Result<_>>()?;
        json["orbits"] = json!(orbits);
        json["isotropy"] = json!(isotropy);
    }
    Ok(Report::checked(valid, json, summary))
}

fn compose(first: &Path, second: &Path) -> Outcome {
    let m = load_bibundle(first, &[])?;
    let known = [m.left().clone(), m.right().clone()];
    let n = load_bibundle(second, &known)?;
    let mn = m.compose(&n)?;
    let report = mn.validate();
    let valid = report.is_valid();
    let principal = mn.is_right_principal()?;
    let ok = valid && principal.principal;
    let json = json!({
        "valid": valid,
        "violations": report.violations,
        "rightPrincipal": principal,
        "size": mn.len(),
        "composite": bibundle_to_value(&mn),
    });
    Ok(Report::checked(ok, json, format!("composite has {} points", mn.len())))
}

fn morita(left: &Path, right: &Path, bibundle: Option<&Path>) -> Outcome {
    let g = Arc::new(load_groupoid(left)?);
    let h = Arc::new(load_groupoid(right)?);
    let obstruction = morita_refute(&g, &h)?;
    let mut json = json!({
        "obstruction": obstruction,
        "algebras": {
            "leftDim": g.n_arrows(),
            "rightDim": h.n_arrows(),
            "leftCommutative": is_commutative(&g),
            "rightCommutative": is_commutative(&h),
        },
    });
    let summary = match &obstruction {
        Some(o) => format!("not Morita equivalent: {}", o.differences.join("; ")),
        None => "no invariant separates the groupoids".to_string(),
    };
    let Some(path) = bibundle else {
        return Ok(Report::checked(true, json, summary));
    };
    let m = load_bibundle(path, &[g.clone(), h.clone()])?;
    let verified = morita_verify(&g, &h, &m)?;
    json["verified"] = json!(verified);
    Ok(Report::checked(verified, json, format!("{summary}; bibundle is biprincipal: {verified}")))
}

fn family(source: &FamilyArgs) -> grouplike::Result<StackyData> {
    if let Some(path) = &source.file {
        return stacky_from_value(&read_json(path)?, base_dir(path));
    }
    let spec = source.family.as_deref().unwrap_or("trivial:2");
    let order = |s: &str| -> grouplike::Result<usize> {
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Parse(format!("bad group order {s:?}"))),
        }
    };
    match spec.split_once(':') {
        Some(("trivial", n)) => Ok(trivial_group_family(&GroupSpec::cyclic(order(n)?))),
        Some(("bz", n)) => group_family(&GroupSpec::cyclic(order(n)?)),
        None if spec == "quotient" => Ok(cyclic_quotient_family()),
        _ => Err(Error::Parse(format!("unknown family {spec:?}; use trivial:N, bz:N or quotient"))),
    }
}

fn stacky(source: &FamilyArgs, mutate: Option<u64>) -> Outcome {
    let mut data = family(source)?;
    let mut mutation = None;
    if let Some(seed) = mutate {
        let (em, what) = mutate_entry(&data.em, seed)?;
        data.em = em;
        mutation = Some(what);
    }
    let report = stacky_group_check(&data.g, &data.em, &data.ee, &data.einv)?;
    let passed = report.passed();
    let summary = match report.failures().next() {
        None => format!("{}: all stacky-group diagrams commute", data.name),
        Some(f) => format!("{}: {} fails ({})", data.name, f.name, f.witness.clone().unwrap_or_default()),
    };
    let json = json!({"family": data.name, "mutation": mutation, "report": report});
    Ok(Report::checked(passed, json, summary))
}

fn hopfish(source: &FamilyArgs) -> Outcome {
    let data = family(source)?;
    let d = HopfishData::from_stacky(&data)?;
    let co = check_coassoc(&d)?;
    let (l, r) = check_counit(&d)?;
    let passed = co.passed && l.passed && r.passed;
    let json = json!({
        "family": data.name,
        "dims": {"algebra": d.groupoid.n_arrows(), "delta": d.delta.dim(), "epsilon": d.epsilon.dim(), "antipode": d.antipode.dim()},
        "checks": [co, l, r],
    });
    Ok(Report::checked(passed, json, format!("{}: coassociativity and counit", data.name)))
}

fn module(d: &HopfishData, spec: &str) -> grouplike::Result<Bimodule> {
    let bad = || Error::Parse(format!("module {spec:?}: use point:K or char:A"));
    let (kind, k) = spec.split_once(':').ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    match kind {
        "point" => point_module(&d.groupoid, k),
        "char" => cyclic_character(&d.groupoid, d.groupoid.n_arrows(), k % d.groupoid.n_arrows().max(1)),
        _ => Err(bad()),
    }
}

fn tensor_mod(source: &FamilyArgs, left: &str, right: &str, expect: Option<&str>) -> Outcome {
    let data = family(source)?;
    let d = HopfishData::from_stacky(&data)?;
    let t = module_tensor(&module(&d, left)?, &module(&d, right)?, &d)?;
    let mut json = json!({"family": data.name, "left": left, "right": right, "dim": t.dim(), "module": bimodule_to_value(&t)});
    let Some(e) = expect else {
        return Ok(Report::checked(true, json, format!("{left} ⊗ {right} has dimension {}", t.dim())));
    };
    let outcome = bimodule_iso(&t, &module(&d, e)?)?;
    let ok = outcome.is_isomorphic();
    json["expect"] = json!(e);
    json["outcome"] = json!(outcome);
    Ok(Report::checked(ok, json, format!("{left} ⊗ {right} ≅ {e}: {ok}")))
}

fn angle(s: &str) -> grouplike::Result<Angle> {
    s.parse()
}

fn classes(c: &ClassArgs) -> grouplike::Result<(ModuleClass, ModuleClass)> {
    Ok((ModuleClass::new(c.p1, c.q1, angle(&c.alpha1)?), ModuleClass::new(c.p2, c.q2, angle(&c.alpha2)?)))
}

fn class_json(c: &ModuleClass) -> Value {
    json!({"p": c.p, "q": c.q, "alpha": c.alpha.to_string()})
}

fn nct_tensor(args: &ClassArgs) -> Outcome {
    let (c1, c2) = classes(args)?;
    let r = tensor_classify(&c1, &c2)?;
    let canon = r.class.as_ref();
    let json = json!({
        "mult": r.multiplicity,
        "p": canon.map(|c| c.p),
        "q": canon.map(|c| c.q),
        "alpha": canon.map(|c| c.alpha.to_string()),
        "primitive": r.primitive,
        "raw": r.raw.as_ref().map(class_json),
        "canonical": canon.map(class_json),
    });
    let summary = match canon {
        Some(c) => format!("{c1} ⊗ {c2} ≅ {} · {c}", r.multiplicity),
        None => format!("{c1} ⊗ {c2} = 0"),
    };
    Ok(Report::checked(true, json, summary))
}

fn oracle_single(args: &ClassArgs) -> Outcome {
    let (c1, c2) = classes(args)?;
    let r = oracle_compare(&c1, &c2)?;
    let summary = format!("{c1} ⊗ {c2}: classifier and circles agree: {}", r.agree);
    Ok(Report::checked(r.agree, serde_json::to_value(&r)?, summary))
}

fn oracle_sweep_cmd(bound: i64) -> Outcome {
    if bound < 1 {
        return Err(Error::Parse("sweep bound must be positive".into()));
    }
    let r = oracle_sweep(bound, &default_alpha_samples())?;
    let summary = format!("{}/{} pairs agree over {} classes", r.agreed, r.pairs, r.classes);
    Ok(Report::checked(r.passed(), serde_json::to_value(&r)?, summary))
}

fn zigzag(file: Option<&Path>, dim: Option<usize>, random: Option<usize>, seed: u64) -> Outcome {
    let (space, relations) = match (file, dim, random) {
        (Some(path), _, _) => {
            let f = symp_from_value(&read_json(path)?)?;
            (f.space, f.relations)
        }
        (None, _, Some(d)) => {
            if d % 2 != 0 {
                return Err(Error::Parse("dimension must be even".into()));
            }
            (random_symplectic_space(&mut ChaCha8Rng::seed_from_u64(seed), d), Vec::new())
        }
        (None, Some(d), None) => {
            if d % 2 != 0 {
                return Err(Error::Parse("dimension must be even".into()));
            }
            (SympSpace::standard(d / 2), Vec::new())
        }
        (None, None, None) => (SympSpace::standard(1), Vec::new()),
    };
    let named = |n: &str| relations.iter().find(|(k, _)| k.as_deref() == Some(n)).map(|(_, r)| r);
    let report = match (named("ev"), named("coev")) {
        (Some(e), Some(c)) => check_zigzag_with(&space, e, c)?,
        _ => check_zigzag(&space)?,
    };
    let rels: Vec<Value> = relations
        .iter()
        .map(|(name, r)| {
            let flags = r.flags()?;
            Ok(json!({"name": name, "flags": flags, "relation": relation_to_value(r)}))
        })
        .collect::<grouplike::Result<_>>()?;
    let json = json!({"space": symp_space_to_value(&space), "zigzag": report, "relations": rels});
    Ok(Report::checked(report.passed(), json, format!("zig-zag in dimension {}", space.dim())))
}

fn parse_circle(s: &str) -> grouplike::Result<TorusCircle> {
    let bad = || Error::Parse(format!("circle {s:?}: expected p,q,alpha"));
    let mut it = s.splitn(3, ',');
    let p: i64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let q: i64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let alpha = angle(it.next().unwrap_or("0"))?;
    TorusCircle::new(p, q, alpha)
}

fn plot(specs: &[String], compose: bool, svg: &Path, lambda: Option<f64>) -> Outcome {
    let circles = specs.iter().map(|s| parse_circle(s)).collect::<grouplike::Result<Vec<_>>>()?;
    let drawn: Vec<TorusCircle> = if compose {
        let [a, b] = circles.as_slice() else {
            return Err(Error::Parse("--compose needs exactly two circles".into()));
        };
        compose_circles(a, b).into_iter().map(|c| c.circle).collect()
    } else {
        circles
    };
    let mut opts = PlotOptions::default();
    if let Some(l) = lambda {
        opts.lambda = l;
    }
    emit_plot(&drawn, svg, &opts)?;
    let json = json!({
        "svg": svg.display().to_string(),
        "lambdaStandIn": opts.lambda,
        "circles": drawn.iter().map(|c| json!({"p": c.p, "q": c.q, "alpha": c.alpha.to_string()})).collect::<Vec<_>>(),
    });
    Ok(Report::checked(true, json, format!("wrote {} circles to {}", drawn.len(), svg.display())))
}
