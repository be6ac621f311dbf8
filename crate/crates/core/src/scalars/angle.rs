//! Angles as exact linear combinations of the formally independent periods
//! `1`, `λ`, `2π`, plus any number of named symbolic angles (`a1`, `a2`, ...).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, rat, Rational};
use crate::error::Error;

/// `r0 + rlam·λ + rpi·2π + Σ sym[k]·k`.
///
/// Equality is componentwise. The symbolic part is kept sparse: a zero
/// coefficient is never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle {
    pub r0: Rational,
    pub rlam: Rational,
    pub rpi: Rational,
    sym: BTreeMap<String, Rational>,
}

impl Angle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(r0: Rational, rlam: Rational, rpi: Rational) -> Self {
        Angle { r0, rlam, rpi, sym: BTreeMap::new() }
    }

    pub fn constant(r: Rational) -> Self {
        Angle { r0: r, ..Self::default() }
    }

    /// `c·λ`.
    pub fn lambda(c: Rational) -> Self {
        Angle { rlam: c, ..Self::default() }
    }

    /// `c·2π`.
    pub fn two_pi(c: Rational) -> Self {
        Angle { rpi: c, ..Self::default() }
    }

    pub fn symbol(name: &str) -> Self {
        let mut a = Self::default();
        a.sym.insert(name.to_string(), Rational::one());
        a
    }

    pub fn with_symbol(mut self, name: &str, c: Rational) -> Self {
        let entry = self.sym.entry(name.to_string()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.sym.remove(name);
        }
        self
    }

    pub fn symbols(&self) -> &BTreeMap<String, Rational> {
        &self.sym
    }

    pub fn is_zero(&self) -> bool {
        self.r0.is_zero() && self.rlam.is_zero() && self.rpi.is_zero() && self.sym.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Angle {
        if c.is_zero() {
            return Angle::zero();
        }
        Angle {
            r0: &self.r0 * c,
            rlam: &self.rlam * c,
            rpi: &self.rpi * c,
            sym: self.sym.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Angle {
        self.scale(&rat(k, 1))
    }

    /// Same angle with the `2π` part dropped.
    pub fn free_part(&self) -> Angle {
        Angle { rpi: Rational::zero(), ..self.clone() }
    }

    /// Reduces the `λ` and `2π` coefficients into `[0, 1)`, i.e. a normal form
    /// modulo the lattice `λZ + 2πZ`.
    pub fn reduce_mod_lambda_two_pi(&self) -> Angle {
        Angle {
            rlam: frac(&self.rlam),
            rpi: frac(&self.rpi),
            ..self.clone()
        }
    }

    /// Coordinates in the basis `[1, λ, 2π, symbols...]`.
    pub fn coordinates(&self, symbols: &[String]) -> Vec<Rational> {
        let mut v = vec![self.r0.clone(), self.rlam.clone(), self.rpi.clone()];
        for s in symbols {
            v.push(self.sym.get(s).cloned().unwrap_or_else(Rational::zero));
        }
        v
    }

    /// Numeric value for rendering only.
    pub fn to_f64(&self, lambda: f64, symbol_value: &dyn Fn(&str) -> f64) -> f64 {
        let f = |r: &Rational| r.numer().to_string().parse::<f64>().unwrap_or(0.0)
            / r.denom().to_string().parse::<f64>().unwrap_or(1.0);
        let mut x = f(&self.r0) + f(&self.rlam) * lambda + f(&self.rpi) * std::f64::consts::TAU;
        for (k, v) in &self.sym {
            x += f(v) * symbol_value(k);
        }
        x
    }
}

pub(crate) fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

impl Add<&Angle> for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(mut self, rhs: Angle) -> Angle {
        self += &rhs;
        self
    }
}

impl AddAssign<&Angle> for Angle {
    fn add_assign(&mut self, rhs: &Angle) {
        self.r0 += &rhs.r0;
        self.rlam += &rhs.rlam;
        self.rpi += &rhs.rpi;
        for (k, v) in &rhs.sym {
            let entry = self.sym.entry(k.clone()).or_insert_with(Rational::zero);
            *entry += v;
            if entry.is_zero() {
                self.sym.remove(k);
            }
        }
    }
}

impl SubAssign<&Angle> for Angle {
    fn sub_assign(&mut self, rhs: &Angle) {
        *self += &(-rhs);
    }
}

impl Sub<&Angle> for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(mut self, rhs: Angle) -> Angle {
        self -= &rhs;
        self
    }
}

impl Neg for &Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle {
            r0: -&self.r0,
            rlam: -&self.rlam,
            rpi: -&self.rpi,
            sym: self.sym.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        -&self
    }
}

fn write_term(out: &mut String, coeff: &Rational, atom: &str) {
    if coeff.is_zero() {
        return;
    }
    let neg = coeff.is_negative();
    if neg {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    let c = coeff.abs();
    let numer = c.numer().clone();
    let denom = c.denom().clone();
    if atom.is_empty() {
        out.push_str(&numer.to_string());
        if !denom.is_one() {
            out.push('/');
            out.push_str(&denom.to_string());
        }
        return;
    }
    if !numer.is_one() {
        out.push_str(&numer.to_string());
        out.push('*');
    }
    out.push_str(atom);
    if !denom.is_one() {
        out.push('/');
        out.push_str(&denom.to_string());
    }
}

/// Renders as a linear expression, e.g. `3*a1+2*a2`, `lam/2`, `2*pi/3`.
impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, v) in &self.sym {
            write_term(&mut out, v, k);
        }
        write_term(&mut out, &self.rlam, "lam");
        // Coefficient of π is twice the coefficient of 2π.
        write_term(&mut out, &(&self.rpi * rat(2, 1)), "pi");
        write_term(&mut out, &self.r0, "");
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

// --- expression parsing -----------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in angle expression {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn expr(&mut self) -> Result<Angle, Error> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Angle, Error> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = mul_linear(&acc, &rhs).ok_or_else(|| self.err("nonlinear product"))?;
                }
                b'/' => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let c = as_constant(&rhs).ok_or_else(|| self.err("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Angle, Error> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: Rational = parse_rational(digits)?;
                // `2pi`, `3lam` as implicit products.
                if let Some(c) = self.src.get(self.pos) {
                    if c.is_ascii_alphabetic() {
                        let atom = self.ident()?;
                        return Ok(atom.scale(&n));
                    }
                }
                Ok(Angle::constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            _ => Err(self.err("unexpected token")),
        }
    }

    fn ident(&mut self) -> Result<Angle, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(match name {
            "lam" | "lambda" => Angle::lambda(Rational::one()),
            "pi" => Angle::two_pi(rat(1, 2)),
            "tau" => Angle::two_pi(Rational::one()),
            "" => return Err(self.err("expected identifier")),
            other => Angle::symbol(other),
        })
    }
}

fn as_constant(a: &Angle) -> Option<Rational> {
    if a.rlam.is_zero() && a.rpi.is_zero() && a.sym.is_empty() {
        Some(a.r0.clone())
    } else {
        None
    }
}

fn mul_linear(a: &Angle, b: &Angle) -> Option<Angle> {
    if let Some(c) = as_constant(a) {
        Some(b.scale(&c))
    } else {
        as_constant(b).map(|c| a.scale(&c))
    }
}

/// Parses linear expressions over `lam`, `pi`, `tau` (= 2π), rational
/// constants and free identifiers (treated as symbolic angles).
impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let a = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(a)
    }
}

// --- JSON --------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct AngleRepr {
    r0: String,
    rlam: String,
    rpi: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    sym: BTreeMap<String, String>,
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AngleRepr {
            r0: self.r0.to_string(),
            rlam: self.rlam.to_string(),
            rpi: self.rpi.to_string(),
            sym: self.sym.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = AngleRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(D::Error::custom);
        let mut a = Angle::new(p(&repr.r0)?, p(&repr.rlam)?, p(&repr.rpi)?);
        for (k, v) in &repr.sym {
            a = a.with_symbol(k, p(v)?);
        }
        Ok(a)
    }
}
