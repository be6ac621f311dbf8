//! Circles `pθ1 + qθ2 = α` on the torus and their composition in the
//! groupoid `T² ⇉ T¹` (source and target forget `θ1`, product adds `θ1`).
//!
//! Composition is computed by following solution branches around the `θ2`
//! circle, independently of the closed formulas in [`crate::nctorus`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nctorus::{class_canonicalize, tensor_classify, ModuleClass, TensorResult};
use crate::scalars::{angle_congruent, rat, Angle, Rational};

/// The locus `p·θ1 + q·θ2 = α` on `T²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCircle {
    pub p: i64,
    pub q: i64,
    pub alpha: Angle,
}

impl TorusCircle {
    pub fn new(p: i64, q: i64, alpha: Angle) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::ZeroClass);
        }
        Ok(TorusCircle { p, q, alpha })
    }

    pub fn class(&self) -> ModuleClass {
        ModuleClass::new(self.p, self.q, self.alpha.clone())
    }
}

impl From<&ModuleClass> for TorusCircle {
    fn from(c: &ModuleClass) -> Self {
        TorusCircle { p: c.p, q: c.q, alpha: c.alpha.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComposedComponent {
    pub circle: TorusCircle,
    /// How many times the component's parametrization runs around its
    /// primitive image.
    pub winding_multiplicity: u64,
}

fn lattice() -> [Angle; 2] {
    [Angle::lambda(rat(1, 1)), Angle::two_pi(rat(1, 1))]
}

/// `θ1` on branch `k` of `pθ1 + qθ2 = α` at `θ2 = 0`, i.e. `(α + 2πk)/p`.
fn branch_start(c: &TorusCircle, k: i64) -> Angle {
    (&c.alpha + &Angle::two_pi(rat(k, 1))).scale(&rat(1, c.p))
}

/// The roots `θ2 = (α + 2πj)/q` of a horizontal family `qθ2 = α`.
fn horizontal_roots(c: &TorusCircle) -> Vec<Angle> {
    (0..c.q.abs()).map(|j| (&c.alpha + &Angle::two_pi(rat(j, 1))).scale(&rat(1, c.q))).collect()
}

fn horizontal(theta2: Angle) -> ComposedComponent {
    ComposedComponent { circle: TorusCircle { p: 0, q: 1, alpha: theta2 }, winding_multiplicity: 1 }
}

/// `C1 ∘ C2 = {(θ1 + θ1', θ2) : (θ1, θ2) ∈ C1, (θ1', θ2) ∈ C2}`, split into
/// components.
pub fn compose_circles(c1: &TorusCircle, c2: &TorusCircle) -> Vec<ComposedComponent> {
    match (c1.p != 0, c2.p != 0) {
        (true, true) => compose_sloped(c1, c2),
        (false, true) => compose_mixed(c1, c2),
        (true, false) => compose_mixed(c2, c1),
        (false, false) => compose_horizontal(c1, c2),
    }
}

/// Branches `(k1, k2)`; going once around `θ2` sends `k_i ↦ k_i − q_i`.
/// Each monodromy orbit is one component, traced until it closes.
fn compose_sloped(c1: &TorusCircle, c2: &TorusCircle) -> Vec<ComposedComponent> {
    let (n1, n2) = (c1.p.abs(), c2.p.abs());
    let mut seen = vec![false; (n1 * n2) as usize];
    let mut out = Vec::new();
    for k1 in 0..n1 {
        for k2 in 0..n2 {
            if seen[(k1 * n2 + k2) as usize] {
                continue;
            }
            // Unreduced branch indices, so the lift of θ1 can be read off.
            let (mut u1, mut u2) = (k1, k2);
            let mut len = 0i64;
            loop {
                seen[(u1.rem_euclid(n1) * n2 + u2.rem_euclid(n2)) as usize] = true;
                u1 -= c1.q;
                u2 -= c2.q;
                len += 1;
                if u1.rem_euclid(n1) == k1 && u2.rem_euclid(n2) == k2 {
                    break;
                }
            }
            // Δθ1/2π over the closed loop: the 2π parts of the branch starts.
            let d1 = Rational::new((u1 - k1).into(), c1.p.into()) + Rational::new((u2 - k2).into(), c2.p.into());
            assert!(d1.is_integer(), "orbit does not close");
            let w1: i64 = d1.to_integer().try_into().expect("small winding");
            // Loop direction (w1, len); the equation's normal is (len, −w1).
            let (p, q) = (len, -w1);
            let theta1 = &branch_start(c1, k1) + &branch_start(c2, k2);
            out.push(ComposedComponent {
                circle: TorusCircle { p, q, alpha: theta1.scale_int(p) },
                winding_multiplicity: p.gcd(&q) as u64,
            });
        }
    }
    out
}

/// `C1` horizontal, `C2` sloped: over each root of `C1` the `θ1'` of every
/// branch of `C2` is swept along by the free `θ1`.
fn compose_mixed(flat: &TorusCircle, sloped: &TorusCircle) -> Vec<ComposedComponent> {
    let mut out = Vec::new();
    for root in horizontal_roots(flat) {
        for _branch in 0..sloped.p.abs() {
            out.push(horizontal(root.clone()));
        }
    }
    out
}

/// Both horizontal: roots of `C1` meeting a root of `C2` up to the
/// bisection translations `θ2 ↦ θ2 + λZ`.
fn compose_horizontal(c1: &TorusCircle, c2: &TorusCircle) -> Vec<ComposedComponent> {
    let gens = lattice();
    let r2 = horizontal_roots(c2);
    horizontal_roots(c1)
        .into_iter()
        .filter(|x| r2.iter().any(|y| angle_congruent(x, y, &gens)))
        .map(horizontal)
        .collect()
}

/// Translation by the bisection `m dθ1 + n dθ2`, which moves every point
/// by `(−λn, λm)`.
pub fn bisection_translate(c: &TorusCircle, m: i64, n: i64) -> TorusCircle {
    TorusCircle {
        p: c.p,
        q: c.q,
        alpha: &c.alpha + &Angle::lambda(rat(n * c.p - m * c.q, 1)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub inputs: (ModuleClass, ModuleClass),
    pub classifier: TensorResult,
    pub geometric: Vec<ComposedComponent>,
    pub agree: bool,
    pub witnesses: Vec<String>,
}

/// Runs the classifier and the circle composition and compares count,
/// winding vectors and offsets.
pub fn oracle_compare(c1: &ModuleClass, c2: &ModuleClass) -> Result<AgreementReport> {
    oracle_compare_with(c1, c2, &tensor_classify)
}

pub type Classifier<'a> = &'a dyn Fn(&ModuleClass, &ModuleClass) -> Result<TensorResult>;

pub fn oracle_compare_with(c1: &ModuleClass, c2: &ModuleClass, classify: Classifier<'_>) -> Result<AgreementReport> {
    let classifier = classify(c1, c2)?;
    let geometric = compose_circles(&TorusCircle::from(c1), &TorusCircle::from(c2));
    let mut witnesses = Vec::new();
    if geometric.len() as u64 != classifier.multiplicity {
        witnesses.push(format!(
            "{} components vs multiplicity {}",
            geometric.len(),
            classifier.multiplicity
        ));
    }
    if let Some(want) = &classifier.class {
        for (i, comp) in geometric.iter().enumerate() {
            let got = class_canonicalize(&comp.circle.class())?;
            if (got.p, got.q) != (want.p, want.q) {
                witnesses.push(format!("component {i}: winding vector ({}, {}) vs ({}, {})", got.p, got.q, want.p, want.q));
            } else if got.alpha != want.alpha {
                witnesses.push(format!("component {i}: offset {} vs {}", got.alpha, want.alpha));
            }
            let mult = got.p.gcd(&got.q) as u64;
            if comp.winding_multiplicity != mult {
                witnesses.push(format!("component {i}: winding multiplicity {} vs {mult}", comp.winding_multiplicity));
            }
        }
    }
    Ok(AgreementReport {
        inputs: (c1.clone(), c2.clone()),
        classifier,
        geometric,
        agree: witnesses.is_empty(),
        witnesses,
    })
}

/// Canonical `(p, q)` with `gcd = 1`, `|p|, |q| ≤ bound`.
pub fn canonical_coprime_classes(bound: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for p in 1..=bound {
        for q in -bound..=bound {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// `0, λ, λ/2, 2π/3` and the formal angles `a1`, `a2`.
pub fn default_alpha_samples() -> Vec<Angle> {
    ["0", "lam", "lam/2", "2*pi/3", "a1", "a2"].iter().map(|s| s.parse().unwrap()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub bound: i64,
    pub classes: usize,
    pub pairs: usize,
    pub agreed: usize,
    /// Pair counts per branch: both `p ≠ 0`, one `p = 0`, both `p = 0`.
    pub branches: BTreeMap<String, usize>,
    pub failures: Vec<AgreementReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.agreed == self.pairs
    }
}

/// Every ordered pair of canonical coprime classes with the given `α`
/// samples, split over worker threads with results merged in input order.
pub fn oracle_sweep(bound: i64, alphas: &[Angle]) -> Result<SweepReport> {
    let classes: Vec<ModuleClass> = canonical_coprime_classes(bound)
        .into_iter()
        .flat_map(|(p, q)| alphas.iter().map(move |a| ModuleClass::new(p, q, a.clone())))
        .collect();
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(16);
    let chunk = classes.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<AgreementReport>>> = std::thread::scope(|s| {
        let handles: Vec<_> = classes
            .chunks(chunk)
            .map(|part| {
                let classes = &classes;
                s.spawn(move || {
                    let mut out = Vec::with_capacity(part.len() * classes.len());
                    for c1 in part {
                        for c2 in classes {
                            out.push(oracle_compare(c1, c2)?);
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut report = SweepReport {
        bound,
        classes: classes.len(),
        pairs: 0,
        agreed: 0,
        branches: BTreeMap::new(),
        failures: Vec::new(),
    };
    for part in results {
        for r in part? {
            report.pairs += 1;
            let branch = match (r.inputs.0.p != 0, r.inputs.1.p != 0) {
                (true, true) => "sloped",
                (false, false) => "horizontal",
                _ => "mixed",
            };
            *report.branches.entry(branch.into()).or_default() += 1;
            if r.agree {
                report.agreed += 1;
            } else {
                report.failures.push(r);
            }
        }
    }
    Ok(report)
}

// --- SVG ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PlotOptions {
    /// Numeric stand-in for `λ`, used for drawing only.
    pub lambda: f64,
    /// Values for symbolic angles; unknown symbols are drawn at `0`.
    pub symbols: BTreeMap<String, f64>,
    pub size: u32,
}

/// `2π(√2 − 1)` rounded to six decimals.
pub fn default_lambda_stand_in() -> f64 {
    (std::f64::consts::TAU * (std::f64::consts::SQRT_2 - 1.0) * 1e6).round() / 1e6
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { lambda: default_lambda_stand_in(), symbols: BTreeMap::new(), size: 400 }
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];
const MARGIN: f64 = 40.0;

/// Polylines in `[0, 2π)²` tracing the locus, cut where it wraps.
fn polylines(c: &TorusCircle, opts: &PlotOptions) -> Vec<Vec<(f64, f64)>> {
    use std::f64::consts::{PI, TAU};
    let alpha = c.alpha.to_f64(opts.lambda, &|s| opts.symbols.get(s).copied().unwrap_or(0.0));
    let g = c.p.gcd(&c.q);
    let (p, q) = ((c.p / g) as f64, (c.q / g) as f64);
    let steps = 256 * (c.p / g).abs().max((c.q / g).abs()).max(1) as usize;
    let mut lines = Vec::new();
    for j in 0..g {
        let beta = (alpha + TAU * j as f64) / g as f64;
        let (x0, y0) = if p != 0.0 { (beta / p, 0.0) } else { (0.0, beta / q) };
        let mut line: Vec<(f64, f64)> = Vec::new();
        for s in 0..=steps {
            let t = TAU * s as f64 / steps as f64;
            let pt = ((x0 - q * t).rem_euclid(TAU), (y0 + p * t).rem_euclid(TAU));
            if let Some(&last) = line.last() {
                let last: (f64, f64) = last;
                if (pt.0 - last.0).abs() > PI || (pt.1 - last.1).abs() > PI {
                    lines.push(std::mem::take(&mut line));
                }
            }
            line.push(pt);
        }
        lines.push(line);
    }
    lines.retain(|l| l.len() > 1);
    lines
}

/// A deterministic SVG of the fundamental square with each circle in its
/// own colour.
pub fn render_svg(circles: &[TorusCircle], opts: &PlotOptions) -> String {
    use std::f64::consts::TAU;
    let size = opts.size as f64;
    let full = size + 2.0 * MARGIN;
    let px = |(x, y): (f64, f64)| (MARGIN + x / TAU * size, MARGIN + (1.0 - y / TAU) * size);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full:.0}" height="{full:.0}" viewBox="0 0 {full:.0} {full:.0}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{full:.0}" height="{full:.0}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN:.0}" y="{MARGIN:.0}" width="{size:.0}" height="{size:.0}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<text x="{:.0}" y="{:.0}" font-size="12" text-anchor="middle">θ1</text>"#, full / 2.0, full - 10.0);
    let _ = writeln!(s, r#"<text x="12" y="{:.0}" font-size="12">θ2</text>"#, full / 2.0);
    let _ = writeln!(s, r#"<text x="{MARGIN:.0}" y="{:.0}" font-size="10">0</text>"#, full - MARGIN + 14.0);
    let _ = writeln!(s, r#"<text x="{:.0}" y="{:.0}" font-size="10">2π</text>"#, full - MARGIN - 8.0, full - MARGIN + 14.0);
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN:.0}" y="16" font-size="10">rendering choice: λ drawn as {:.6}</text>"#,
        opts.lambda
    );
    for (i, c) in circles.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g stroke="{colour}" fill="none" stroke-width="1.5"><title>{}θ1 + {}θ2 = {}</title>"#, c.p, c.q, c.alpha);
        for line in polylines(c, opts) {
            let pts: Vec<String> = line
                .into_iter()
                .map(|pt| {
                    let (x, y) = px(pt);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_plot(circles: &[TorusCircle], path: &Path, opts: &PlotOptions) -> Result<()> {
    std::fs::write(path, render_svg(circles, opts))?;
    Ok(())
}
