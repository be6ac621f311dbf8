//! Membership of an angle difference in the integer span of a set of angles.
//!
//! Angles are vectors over `Q` in the basis `{1, λ, 2π, symbols...}`, which is
//! assumed linearly independent. Clearing denominators turns the question into
//! integer-lattice membership, decided from an integer echelon form built with
//! extended-gcd row operations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::angle::Angle;

/// Echelon form over `Z` of the rows, by unimodular row operations.
pub fn integer_echelon(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[r][c].is_zero() {
                rows.swap(r, i);
                continue;
            }
            let a = rows[r][c].clone();
            let b = rows[i][c].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let ag = &a / &g;
            let bg = &b / &g;
            let (top, bottom): (Vec<BigInt>, Vec<BigInt>) = rows[r]
                .iter()
                .zip(rows[i].iter())
                .map(|(u, v)| (&x * u + &y * v, &ag * v - &bg * u))
                .unzip();
            rows[r] = top;
            rows[i] = bottom;
        }
        if !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Whether `target` lies in the integer row span of an echelon basis.
pub fn in_integer_span(echelon: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    let mut v = target.to_vec();
    for row in echelon {
        let c = row.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
        if v[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = v[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        if !q.is_zero() {
            for (x, y) in v.iter_mut().zip(row.iter()) {
                *x -= &q * y;
            }
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// `a − b ∈ Z·lattice_gens`, decided exactly under the independence of
/// `{1, λ, 2π}` and all symbols.
pub fn angle_congruent(a: &Angle, b: &Angle, lattice_gens: &[Angle]) -> bool {
    let diff = a - b;
    if diff.is_zero() {
        return true;
    }
    let mut names: BTreeSet<String> = diff.symbols().keys().cloned().collect();
    for g in lattice_gens {
        names.extend(g.symbols().keys().cloned());
    }
    let names: Vec<String> = names.into_iter().collect();
    let mut vectors: Vec<Vec<_>> = lattice_gens.iter().map(|g| g.coordinates(&names)).collect();
    vectors.push(diff.coordinates(&names));
    let mut denom = BigInt::one();
    for v in &vectors {
        for x in v {
            denom = denom.lcm(x.denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| (x * &denom).to_integer()).collect())
        .collect();
    let (target, gens) = scaled.split_last().unwrap();
    let echelon = integer_echelon(gens.to_vec());
    in_integer_span(&echelon, target)
}
