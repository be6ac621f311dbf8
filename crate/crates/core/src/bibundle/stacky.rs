use std::sync::Arc;

use serde::Serialize;

use super::iso::fiber_mismatch;
use super::{associator, find_biequivariant_iso, left_unitor, right_unitor, Bibundle, CONVENTION};
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackyReport {
    pub convention: String,
    pub checks: Vec<CheckOutcome>,
}

impl StackyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Budget exhaustion is not a verdict, so it is passed on as an error.
fn outcome(name: &str, r: Result<Option<String>>) -> Result<CheckOutcome> {
    Ok(match r {
        Ok(None) => CheckOutcome { name: name.into(), passed: true, witness: None },
        Ok(Some(w)) => CheckOutcome { name: name.into(), passed: false, witness: Some(w) },
        Err(e @ Error::BudgetExceeded(_)) => return Err(e),
        Err(e) => CheckOutcome { name: name.into(), passed: false, witness: Some(e.to_string()) },
    })
}

/// `None` when a biequivariant bijection exists, otherwise a witness.
fn compare(lhs: &Bibundle, rhs: &Bibundle) -> Result<Option<String>> {
    if find_biequivariant_iso(lhs, rhs)?.is_some() {
        return Ok(None);
    }
    Ok(Some(fiber_mismatch(lhs, rhs).unwrap_or_else(|| {
        format!("no biequivariant bijection between carriers of sizes {} and {}", lhs.len(), rhs.len())
    })))
}

fn expect_groupoid(which: &str, side: &str, got: &FiniteGroupoid, want: &FiniteGroupoid) -> Result<()> {
    if got != want {
        return Err(Error::MiddleMismatch(format!("{which}: {side} groupoid does not match")));
    }
    Ok(())
}

/// Checks the group-object diagrams for `(Em, Ee, Einv)` up to biequivariant
/// isomorphism. Validity and right principality of the inputs are reported
/// as checks; groupoid mismatches are errors.
pub fn stacky_group_check(
    g: &Arc<FiniteGroupoid>,
    em: &Bibundle,
    ee: &Bibundle,
    einv: &Bibundle,
) -> Result<StackyReport> {
    let one = Arc::new(FiniteGroupoid::terminal());
    let gg = Arc::new(g.product(g));
    expect_groupoid("Em", "left", em.left(), &gg)?;
    expect_groupoid("Em", "right", em.right(), g)?;
    expect_groupoid("Ee", "left", ee.left(), &one)?;
    expect_groupoid("Ee", "right", ee.right(), g)?;
    expect_groupoid("Einv", "left", einv.left(), g)?;
    expect_groupoid("Einv", "right", einv.right(), g)?;

    let mut checks = Vec::new();
    let mut ready = true;
    for (name, b) in [("Em", em), ("Ee", ee), ("Einv", einv)] {
        let report = b.validate();
        let valid = report.is_valid();
        checks.push(outcome(
            &format!("{name} valid"),
            Ok(report.violations.first().map(|v| format!("{}: {}", v.axiom, v.witness.join(", ")))),
        )?);
        let principal = if valid {
            let p = b.right_principality();
            checks.push(outcome(&format!("{name} right principal"), Ok(p.witness.clone()))?);
            p.principal
        } else {
            false
        };
        ready &= valid && principal;
    }
    let diagrams = [
        "associativity",
        "left unit",
        "right unit",
        "left inverse",
        "right inverse",
    ];
    if !ready {
        for name in diagrams {
            checks.push(outcome(name, Ok(Some("not checked: inputs invalid or not principal".into())))?);
        }
        return Ok(StackyReport { convention: CONVENTION.into(), checks });
    }

    let id = Bibundle::identity(g);

    // (Em × Id) then Em versus (Id × Em) then Em, over (G×G)×G.
    checks.push(outcome("associativity", (|| {
        let lhs = em.product(&id).compose(em)?;
        let rhs = id.product(em).compose(em)?;
        let rhs = rhs.pull_left(lhs.left(), &associator(g, g, g))?;
        compare(&lhs, &rhs)
    })())?);

    checks.push(outcome("left unit", (|| {
        let lhs = ee.product(&id).compose(em)?;
        let unit = id.pull_left(lhs.left(), &left_unitor(&one, g))?;
        compare(&lhs, &unit)
    })())?);

    checks.push(outcome("right unit", (|| {
        let lhs = id.product(ee).compose(em)?;
        let unit = id.pull_left(lhs.left(), &right_unitor(g, &one))?;
        compare(&lhs, &unit)
    })())?);

    let diag = Bibundle::from_functor(g, &gg, &GroupoidMorphism::diagonal(g))?;
    let eta = Bibundle::from_functor(g, &one, &GroupoidMorphism::to_terminal(g))?;
    let counit = eta.compose(ee)?;

    checks.push(outcome("left inverse", (|| {
        let lhs = diag.compose(&einv.product(&id))?.compose(em)?;
        compare(&lhs, &counit)
    })())?);

    checks.push(outcome("right inverse", (|| {
        let lhs = diag.compose(&id.product(einv))?.compose(em)?;
        compare(&lhs, &counit)
    })())?);

    Ok(StackyReport { convention: CONVENTION.into(), checks })
}
