use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::angle::Angle;
use super::cyclotomic::Cyclotomic;
use super::{rat, Rational};

/// `e^{i·exponent}`.
#[derive(Clone, Debug)]
pub struct Phase {
    pub exponent: Angle,
}

impl Phase {
    pub fn new(exponent: Angle) -> Self {
        Phase { exponent }
    }

    pub fn one() -> Self {
        Phase { exponent: Angle::zero() }
    }

    pub fn conj(&self) -> Phase {
        Phase { exponent: -&self.exponent }
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        Phase { exponent: &self.exponent + &other.exponent }
    }

    /// Canonical exponent: the `2π` coefficient reduced into `[0, 1)`.
    pub fn canonical(&self) -> Angle {
        let mut e = self.exponent.clone();
        e.rpi = super::angle::frac(&e.rpi);
        e
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        let d = &self.exponent - &other.exponent;
        d.r0.is_zero() && d.rlam.is_zero() && d.symbols().is_empty() && d.rpi.is_integer()
    }
}

impl Eq for Phase {}

/// Finite sums `Σ c_k e^{iθ_k}` where the `θ_k` are pairwise independent
/// "free" exponents (no `2π` part) and each `c_k` is a cyclotomic number.
///
/// Every torsion phase `e^{2πi·r}` is folded into the coefficient, so the
/// representation is canonical and the ring has no zero divisors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<Angle, Cyclotomic>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_cyclotomic(Cyclotomic::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::rational(rat(n, 1))
    }

    pub fn rational(r: Rational) -> Self {
        Scalar::from_cyclotomic(Cyclotomic::rational(r))
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Scalar::from_cyclotomic(Cyclotomic::gaussian(re, im))
    }

    pub fn i() -> Self {
        Scalar::from_cyclotomic(Cyclotomic::i())
    }

    pub fn from_cyclotomic(c: Cyclotomic) -> Self {
        let mut s = Scalar::zero();
        s.insert(Angle::zero(), c);
        s
    }

    /// `e^{iθ}`.
    pub fn phase(theta: &Angle) -> Self {
        let mut s = Scalar::zero();
        s.insert(theta.free_part(), Cyclotomic::root_of_unity(&theta.rpi));
        s
    }

    /// `c · e^{iθ}`.
    pub fn term(c: Cyclotomic, theta: &Angle) -> Self {
        &Scalar::from_cyclotomic(c) * &Scalar::phase(theta)
    }

    fn insert(&mut self, key: Angle, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Angle::zero()).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Pairs `(free exponent, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Angle, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value as a cyclotomic constant if no free phase occurs.
    pub fn as_cyclotomic(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero()),
            1 => self.terms.get(&Angle::zero()).cloned(),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_cyclotomic()?.as_rational()
    }

    pub fn conj(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (k, c) in &self.terms {
            out.insert(-k, c.conj());
        }
        out
    }

    /// Multiplicative inverse; only single-term scalars are units.
    pub fn inv(&self) -> Option<Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let mut out = Scalar::zero();
        out.insert(-k, c.inv()?);
        Some(out)
    }

    /// Coefficient of the constant phase `e^{i·0}`.
    pub fn constant_term(&self) -> Cyclotomic {
        self.terms.get(&Angle::zero()).cloned().unwrap_or_else(Cyclotomic::zero)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.insert(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_zero() {
                    c.to_string()
                } else if c.is_one() {
                    format!("e^(i*({k}))")
                } else {
                    format!("{c}*e^(i*({k}))")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

// --- JSON: list of {coeff_re, coeff_im, angle} --------------------------------

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff_re: String,
    coeff_im: String,
    angle: Angle,
}

impl Scalar {
    fn to_repr(&self) -> Vec<TermRepr> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            if let Some((re, im)) = c.as_gaussian() {
                out.push(TermRepr { coeff_re: re.to_string(), coeff_im: im.to_string(), angle: k.clone() });
                continue;
            }
            // Expand Σ c_j ζ_n^j into real-coefficient terms with torsion phases.
            let (n, coeffs) = c.power_coefficients();
            for (j, cj) in coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let angle = k + &Angle::two_pi(rat(j as i64, n as i64));
                out.push(TermRepr { coeff_re: cj.to_string(), coeff_im: "0".into(), angle });
            }
        }
        out
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut out = Scalar::zero();
        for t in terms {
            let re = super::parse_rational(&t.coeff_re).map_err(D::Error::custom)?;
            let im = super::parse_rational(&t.coeff_im).map_err(D::Error::custom)?;
            out = &out + &Scalar::term(Cyclotomic::gaussian(re, im), &t.angle);
        }
        Ok(out)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}
