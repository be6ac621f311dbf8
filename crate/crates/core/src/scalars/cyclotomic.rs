//! Elements of cyclotomic fields `Q(ζ_n)`, stored in the power basis
//! `1, ζ, …, ζ^{φ(n)-1}` reduced modulo the cyclotomic polynomial `Φ_n`.
//!
//! Two values of different conductors are compared and combined inside
//! `Q(ζ_lcm)`, so roots-of-unity identities such as `1 + ω + ω² = 0` hold
//! exactly.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, Rational};

fn phi_cache() -> &'static Mutex<HashMap<u64, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            poly = exact_div_monic(&poly, &div);
        }
    }
    phi_cache().lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn totient(n: u64) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Reduces a polynomial in `ζ_n` modulo `Φ_n`.
fn reduce(mut poly: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    while poly.len() > deg {
        let top = poly.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = poly.len() - deg;
        for (j, pj) in phi.iter().enumerate().take(deg) {
            poly[shift + j] -= &top * Rational::from_integer(pj.clone());
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { order: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(r: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    /// `x + i·y`.
    pub fn gaussian(x: Rational, y: Rational) -> Self {
        if y.is_zero() {
            return Self::rational(x);
        }
        Cyclotomic { order: 4, coeffs: vec![x, y] }
    }

    pub fn i() -> Self {
        Self::gaussian(Rational::zero(), Rational::one())
    }

    /// `e^{2πi·r}` for rational `r`.
    pub fn root_of_unity(r: &Rational) -> Self {
        let f = super::angle::frac(r);
        let den = f.denom().clone();
        let num = f.numer().clone();
        let n: u64 = den.try_into().expect("root of unity order fits in u64");
        let k: usize = num.try_into().expect("root of unity exponent fits in usize");
        if n == 1 {
            return Self::one();
        }
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Cyclotomic { order: n, coeffs: reduce(poly, n) }.normalized()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `(re, im)` when the value lies in `Q(i)`.
    pub fn as_gaussian(&self) -> Option<(Rational, Rational)> {
        if let Some(r) = self.as_rational() {
            return Some((r, Rational::zero()));
        }
        let c = self.conj();
        let half = Cyclotomic::rational(rat(1, 2));
        let re = &(self + &c) * &half;
        let im = &(&(self - &c) * &half) * &(-&Cyclotomic::i());
        Some((re.as_rational()?, im.as_rational()?))
    }

    /// Power-basis coefficients: the value is `Σ c_k ζ_order^k`.
    pub fn power_coefficients(&self) -> (u64, &[Rational]) {
        (self.order, &self.coeffs)
    }

    fn normalized(mut self) -> Self {
        if self.order != 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            let c = self.coeffs.swap_remove(0);
            return Self::rational(c);
        }
        self
    }

    /// Same value written in `Q(ζ_m)`; `m` must be a multiple of the order.
    fn lift(&self, m: u64) -> Cyclotomic {
        if m == self.order {
            return self.clone();
        }
        debug_assert_eq!(m % self.order, 0);
        let step = (m / self.order) as usize;
        let mut poly = vec![Rational::zero(); step * (self.coeffs.len() - 1) + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Cyclotomic { order: m, coeffs: reduce(poly, m) }
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = a.order.lcm(&b.order);
        (a.lift(m), b.lift(m))
    }

    pub fn conj(&self) -> Cyclotomic {
        if self.order <= 2 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut poly = vec![Rational::zero(); n];
        poly[0] = self.coeffs[0].clone();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            poly[n - k] += c;
        }
        Cyclotomic { order: self.order, coeffs: reduce(poly, self.order) }
    }

    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::rational(r.recip()));
        }
        // Solve (self · x = 1) in the power basis.
        let d = self.coeffs.len();
        let mut cols = Vec::with_capacity(d);
        for k in 0..d {
            let mut basis = vec![Rational::zero(); k + 1];
            basis[k] = Rational::one();
            let e = Cyclotomic { order: self.order, coeffs: reduce(basis, self.order) };
            cols.push((self * &e).lift(self.order).coeffs);
        }
        // Augmented system rows: M x = e0 where M[i][k] = cols[k][i].
        let mut rows: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut r: Vec<Rational> = (0..d).map(|k| cols[k][i].clone()).collect();
                r.push(if i == 0 { Rational::one() } else { Rational::zero() });
                r
            })
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&r| !rows[r][c].is_zero())?;
            rows.swap(c, p);
            let inv = rows[c][c].recip();
            for x in rows[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..d {
                if r != c && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    let pivot = rows[c].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let x: Vec<Rational> = rows.into_iter().map(|r| r[d].clone()).collect();
        Some(Cyclotomic { order: self.order, coeffs: x }.normalized())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl std::ops::Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 && rhs.order == 1 {
            return Cyclotomic::rational(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (mut a, b) = Cyclotomic::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a.normalized()
    }
}

impl std::ops::Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 {
            let c = &self.coeffs[0];
            return Cyclotomic { order: rhs.order, coeffs: rhs.coeffs.iter().map(|x| x * c).collect() }
                .normalized();
        }
        if rhs.order == 1 {
            return rhs * self;
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        let mut poly = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Cyclotomic { order: a.order, coeffs: reduce(poly, a.order) }.normalized()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((x, y)) = self.as_gaussian() {
            return match (x.is_zero(), y.is_zero()) {
                (_, true) => write!(f, "{x}"),
                (true, false) => write!(f, "{y}i"),
                (false, false) => {
                    if y.is_negative() {
                        write!(f, "({x}-{}i)", -y)
                    } else {
                        write!(f, "({x}+{y}i)")
                    }
                }
            };
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                parts.push(if k == 0 { c.to_string() } else { format!("{c}·ζ{}^{k}", self.order) });
            }
        }
        write!(f, "({})", parts.join(" + "))
    }
}

/// `φ(n)`, exposed for tests and reports.
pub fn euler_phi(n: u64) -> usize {
    totient(n)
}
