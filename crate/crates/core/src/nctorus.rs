//! The noncommutative torus on the basis `a_{n,l}`, its simple modules
//! `T^α_{pq} = A/(e^{-iα} a_{pq} − 1)A`, and the tensor product classifier.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convalg::random_scalar;
use crate::error::{Error, Result};
use crate::scalars::{angle_congruent, rat, Angle, Scalar};

/// `e^{iλ·k}`.
fn lambda_phase(k: i64) -> Scalar {
    Scalar::phase(&Angle::lambda(rat(k, 1)))
}

/// A finite combination `Σ c_{n,l} a_{n,l}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NctElement {
    coeffs: BTreeMap<(i64, i64), Scalar>,
}

impl NctElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(0, 0)
    }

    pub fn basis(n: i64, l: i64) -> Self {
        Self::term(n, l, Scalar::one())
    }

    pub fn term(n: i64, l: i64, c: Scalar) -> Self {
        let mut x = Self::zero();
        x.add_at((n, l), &c);
        x
    }

    fn add_at(&mut self, key: (i64, i64), c: &Scalar) {
        let v = self.coeffs.get(&key).map(|x| x + c).unwrap_or_else(|| c.clone());
        if v.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, v);
        }
    }

    pub fn coeff(&self, n: i64, l: i64) -> Scalar {
        self.coeffs.get(&(n, l)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &Scalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &NctElement) -> NctElement {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_at(*k, c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> NctElement {
        let mut out = NctElement::zero();
        for (k, x) in &self.coeffs {
            out.add_at(*k, &(c * x));
        }
        out
    }

    /// `a_{n1 l1} ∗ a_{n2 l2} = e^{iλ n1 l2} a_{n1+n2, l1+l2}`, extended
    /// bilinearly.
    pub fn mul(&self, other: &NctElement) -> NctElement {
        let mut out = NctElement::zero();
        for (&(n1, l1), x) in &self.coeffs {
            for (&(n2, l2), y) in &other.coeffs {
                let c = &(x * y) * &lambda_phase(n1 * l2);
                out.add_at((n1 + n2, l1 + l2), &c);
            }
        }
        out
    }

    /// `a_{n,l}^* = e^{iλ n l} a_{−n,−l}`, extended conjugate-linearly.
    pub fn star(&self) -> NctElement {
        let mut out = NctElement::zero();
        for (&(n, l), c) in &self.coeffs {
            out.add_at((-n, -l), &(&c.conj() * &lambda_phase(n * l)));
        }
        out
    }
}

impl fmt::Display for NctElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|((n, l), c)| format!("({c})*a[{n},{l}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn random_nct_element<R: Rng>(rng: &mut R, radius: i64, max_terms: usize) -> NctElement {
    let k = rng.gen_range(0..=max_terms);
    let mut x = NctElement::zero();
    for _ in 0..k {
        let n = rng.gen_range(-radius..=radius);
        let l = rng.gen_range(-radius..=radius);
        x = x.add(&NctElement::term(n, l, random_scalar(rng)));
    }
    x
}

/// The module class `T^α_{pq}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleClass {
    pub p: i64,
    pub q: i64,
    pub alpha: Angle,
}

impl ModuleClass {
    pub fn new(p: i64, q: i64, alpha: Angle) -> Self {
        ModuleClass { p, q, alpha }
    }

    pub fn is_primitive(&self) -> bool {
        self.p.gcd(&self.q) == 1
    }

    pub fn is_canonical(&self) -> bool {
        (self.p > 0 || (self.p == 0 && self.q > 0)) && self.alpha == self.alpha.reduce_mod_lambda_two_pi()
    }

    fn check_coprime(&self) -> Result<()> {
        if self.p == 0 && self.q == 0 {
            return Err(Error::ZeroClass);
        }
        if !self.is_primitive() {
            return Err(Error::NotCoprime(self.p, self.q));
        }
        Ok(())
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{}]^({})", self.p, self.q, self.alpha)
    }
}

/// `(p,q,α) ~ (−p,−q,−α)` to make `p > 0` (or `p = 0, q > 0`), then `α`
/// reduced modulo `λZ + 2πZ`.
pub fn class_canonicalize(c: &ModuleClass) -> Result<ModuleClass> {
    if c.p == 0 && c.q == 0 {
        return Err(Error::ZeroClass);
    }
    let flip = c.p < 0 || (c.p == 0 && c.q < 0);
    let (p, q, alpha) = if flip { (-c.p, -c.q, -&c.alpha) } else { (c.p, c.q, c.alpha.clone()) };
    Ok(ModuleClass { p, q, alpha: alpha.reduce_mod_lambda_two_pi() })
}

/// Result of `T1 ⊗_Δ T2 ≅ multiplicity · class`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorResult {
    pub multiplicity: u64,
    /// Straight from the closed formulas, before canonicalization.
    pub raw: Option<ModuleClass>,
    pub class: Option<ModuleClass>,
    pub primitive: bool,
}

impl TensorResult {
    fn from_raw(multiplicity: u64, raw: ModuleClass) -> Result<Self> {
        let class = class_canonicalize(&raw)?;
        Ok(TensorResult { multiplicity, primitive: class.is_primitive(), raw: Some(raw), class: Some(class) })
    }

    fn vanishing() -> Self {
        TensorResult { multiplicity: 0, raw: None, class: None, primitive: true }
    }
}

/// Integers `(s1, s2)` with `s1 q2 − s2 q1 = gcd(q1, q2)`.
pub fn bezout(q1: i64, q2: i64) -> (i64, i64) {
    let e = q2.extended_gcd(&q1);
    let (mut s1, mut s2) = (e.x, -e.y);
    if e.gcd < 0 {
        s1 = -s1;
        s2 = -s2;
    }
    (s1, s2)
}

/// Tensor product of two coprime classes through the hopfish coproduct.
/// Inputs are canonicalized first.
pub fn tensor_classify(c1: &ModuleClass, c2: &ModuleClass) -> Result<TensorResult> {
    c1.check_coprime()?;
    c2.check_coprime()?;
    let c1 = class_canonicalize(c1)?;
    let c2 = class_canonicalize(c2)?;
    if c1.p != 0 || c2.p != 0 {
        let (p1, p2) = (c1.p, c2.p);
        let g = p1.gcd(&p2);
        let p = p1.lcm(&p2);
        let q = (p1 * c2.q + p2 * c1.q) / g;
        let alpha = (&c1.alpha.scale_int(p2) + &c2.alpha.scale_int(p1)).scale(&rat(1, g));
        return TensorResult::from_raw(g as u64, ModuleClass { p, q, alpha });
    }
    let s = bezout(c1.q, c2.q);
    Ok(zero_branch(&c1, &c2, s))
}

/// The `p1 = p2 = 0` branch with a chosen solution `s` of the Bezout
/// identity `(s1 q2 − s2 q1)/gcd(q1, q2) = 1`.
pub fn zero_branch(c1: &ModuleClass, c2: &ModuleClass, s: (i64, i64)) -> TensorResult {
    let (q1, q2) = (c1.q, c2.q);
    let g = q1.gcd(&q2);
    assert_eq!(s.0 * q2 - s.1 * q1, g, "not a Bezout solution");
    let lcm = q1.lcm(&q2);
    let lhs = &c1.alpha.scale_int(q2) - &c2.alpha.scale_int(q1);
    let lattice = [Angle::lambda(rat(g, 1)), Angle::two_pi(rat(lcm, 1))];
    if !angle_congruent(&lhs, &Angle::zero(), &lattice) {
        return TensorResult::vanishing();
    }
    let alpha = &c2.alpha.scale_int(s.0) - &c1.alpha.scale_int(s.1);
    TensorResult::from_raw(1, ModuleClass { p: 0, q: g, alpha }).expect("g > 0")
}

/// A finite window `[lo, hi]` of the simple module `T^α_{pq}`.
///
/// `Z²/Z(p,q) ≅ Z` through `t = q n − p l`; the coset `t` is represented by
/// `[a_{t·n0, t·l0}]` with `q n0 − p l0 = 1`.
#[derive(Clone, Debug)]
pub struct RealizedModule {
    pub class: ModuleClass,
    pub window: (i64, i64),
    rep: (i64, i64),
}

impl RealizedModule {
    pub fn dim(&self) -> usize {
        (self.window.1 - self.window.0 + 1).max(0) as usize
    }

    pub fn representative(&self, t: i64) -> (i64, i64) {
        (t * self.rep.0, t * self.rep.1)
    }

    /// `[a_{n,l}] = c·[rep(t)]`, returned as `(t, c)`, whether or not `t`
    /// is in the window.
    pub fn normal_form(&self, n: i64, l: i64) -> (i64, Scalar) {
        let ModuleClass { p, q, alpha } = &self.class;
        let t = q * n - p * l;
        let (rn, rl) = self.representative(t);
        let j = if *p != 0 { (n - rn) / p } else { (l - rl) / q };
        debug_assert_eq!((rn + j * p, rl + j * q), (n, l));
        // [a_{r + j(p,q)}] = e^{i(jα − λ p (j r_l + q j(j−1)/2))} [a_r]
        let exponent = &alpha.scale_int(j) - &Angle::lambda(rat(p * (j * rl + q * j * (j - 1) / 2), 1));
        (t, Scalar::phase(&exponent))
    }

    /// `[rep(t)] · a_{m,k}`, as a multiple of another window element.
    pub fn act(&self, t: i64, m: i64, k: i64) -> Result<(i64, Scalar)> {
        let (n, l) = self.representative(t);
        let (t2, c) = self.normal_form(n + m, l + k);
        if t2 < self.window.0 || t2 > self.window.1 {
            return Err(Error::WindowTooSmall(t2));
        }
        Ok((t2, &c * &lambda_phase(n * k)))
    }

    /// `v · x` for `v = Σ v_t [rep(t)]` in the window.
    pub fn act_element(&self, v: &BTreeMap<i64, Scalar>, x: &NctElement) -> Result<BTreeMap<i64, Scalar>> {
        let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (&t, vt) in v {
            for ((m, k), c) in x.terms() {
                let (t2, phase) = self.act(t, m, k)?;
                let add = &(vt * c) * &phase;
                let e = out.entry(t2).or_insert_with(Scalar::zero);
                *e = &*e + &add;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

/// Realizes the cosets `t ∈ [lo, hi]` of a primitive class.
pub fn realize_module(c: &ModuleClass, window: (i64, i64)) -> Result<RealizedModule> {
    c.check_coprime()?;
    // q n0 − p l0 = 1
    let e = c.q.extended_gcd(&(-c.p));
    let sign = e.gcd.signum();
    let rep = (sign * e.x, sign * e.y);
    debug_assert_eq!(c.q * rep.0 - c.p * rep.1, 1);
    Ok(RealizedModule { class: c.clone(), window, rep })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn class(p: i64, q: i64, alpha: &str) -> ModuleClass {
        ModuleClass::new(p, q, a(alpha))
    }

    #[test]
    fn basis_products() {
        let x = NctElement::basis(1, 0).mul(&NctElement::basis(0, 1));
        assert_eq!(x, NctElement::term(1, 1, lambda_phase(1)));
        assert_eq!(NctElement::basis(0, 1).mul(&NctElement::basis(1, 0)), NctElement::basis(1, 1));
        let y = NctElement::basis(3, -2);
        assert_eq!(NctElement::one().mul(&y), y);
        assert_eq!(y.mul(&NctElement::one()), y);
    }

    #[test]
    fn star_examples() {
        assert_eq!(NctElement::basis(4, 0).star(), NctElement::basis(-4, 0));
        assert_eq!(NctElement::basis(0, 3).star(), NctElement::basis(0, -3));
        // Basis elements are unitary.
        let u = NctElement::basis(2, 3);
        assert_eq!(u.mul(&u.star()), NctElement::one());
        assert_eq!(u.star().mul(&u), NctElement::one());
    }

    #[test]
    fn associativity_and_star_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let x = random_nct_element(&mut rng, 2, 3);
            let y = random_nct_element(&mut rng, 2, 3);
            let z = random_nct_element(&mut rng, 2, 3);
            assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            assert_eq!(x.mul(&y).star(), y.star().mul(&x.star()));
            let c = x.star().mul(&x).coeff(0, 0);
            assert_eq!(c.conj(), c);
        }
    }

    #[test]
    fn canonicalization() {
        assert_eq!(class_canonicalize(&class(-1, 0, "a1")).unwrap(), class(1, 0, "-a1"));
        assert_eq!(class_canonicalize(&class(1, 0, "a1+3*lam")).unwrap(), class(1, 0, "a1"));
        assert_eq!(class_canonicalize(&class(1, 0, "a1+tau")).unwrap(), class(1, 0, "a1"));
        assert_eq!(class_canonicalize(&class(0, -1, "lam/3")).unwrap(), class(0, 1, "2*lam/3"));
        assert_eq!(class_canonicalize(&class(0, 0, "0")), Err(Error::ZeroClass));
    }

    #[test]
    fn closed_form_examples() {
        let r = tensor_classify(&class(1, 0, "a1"), &class(1, 0, "a2")).unwrap();
        assert_eq!((r.multiplicity, r.class.unwrap(), r.primitive), (1, class(1, 0, "a1+a2"), true));
        let r = tensor_classify(&class(2, 1, "a1"), &class(3, 1, "a2")).unwrap();
        assert_eq!((r.multiplicity, r.class.unwrap(), r.primitive), (1, class(6, 5, "3*a1+2*a2"), true));
        let r = tensor_classify(&class(2, 1, "a1"), &class(2, 1, "a2")).unwrap();
        assert_eq!((r.multiplicity, r.class.unwrap(), r.primitive), (2, class(2, 2, "a1+a2"), false));
        let r = tensor_classify(&class(0, 1, "a1"), &class(0, 1, "a1+lam")).unwrap();
        assert_eq!((r.multiplicity, r.class.unwrap()), (1, class(0, 1, "a1")));
        let r = tensor_classify(&class(0, 1, "0"), &class(0, 1, "2*pi/3")).unwrap();
        assert_eq!((r.multiplicity, r.class), (0, None));
    }

    #[test]
    fn mixed_branch() {
        let r = tensor_classify(&class(0, 1, "a1"), &class(3, 2, "a2")).unwrap();
        assert_eq!((r.multiplicity, r.class.unwrap()), (3, class(0, 1, "a1")));
        let r = tensor_classify(&class(3, 2, "a2"), &class(0, 1, "a1")).unwrap();
        assert_eq!((r.multiplicity, r.class.unwrap()), (3, class(0, 1, "a1")));
    }

    #[test]
    fn refuses_non_coprime() {
        assert_eq!(tensor_classify(&class(2, 2, "0"), &class(1, 0, "0")), Err(Error::NotCoprime(2, 2)));
        assert_eq!(tensor_classify(&class(0, 0, "0"), &class(1, 0, "0")), Err(Error::ZeroClass));
        assert!(realize_module(&class(0, 2, "0"), (0, 3)).is_err());
    }

    #[test]
    fn bezout_identity() {
        for q1 in -6..=6i64 {
            for q2 in -6..=6i64 {
                if q1 == 0 && q2 == 0 {
                    continue;
                }
                let (s1, s2) = bezout(q1, q2);
                assert_eq!(s1 * q2 - s2 * q1, q1.gcd(&q2));
            }
        }
    }

    #[test]
    fn generator_eigenvector() {
        for c in [class(1, 0, "a1"), class(2, 3, "lam/2"), class(0, 1, "a2"), class(-3, 1, "2*pi/3")] {
            let m = realize_module(&c, (-4, 4)).unwrap();
            let (t, phase) = m.act(0, c.p, c.q).unwrap();
            assert_eq!(t, 0);
            assert_eq!(phase, Scalar::phase(&c.alpha), "{c}");
        }
    }

    #[test]
    fn window_exhaustion() {
        let m = realize_module(&class(1, 0, "a1"), (0, 2)).unwrap();
        // a_{0,1} shifts t = -l by one.
        assert!(m.act(0, 0, -1).is_ok());
        assert_eq!(m.act(2, 0, -1).unwrap_err(), Error::WindowTooSmall(3));
    }

    #[test]
    fn partial_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [class(1, 0, "a1"), class(2, 1, "lam/2"), class(0, 1, "a2"), class(3, -2, "a1+2*pi/3")] {
            let m = realize_module(&c, (-40, 40)).unwrap();
            for _ in 0..10 {
                let x = random_nct_element(&mut rng, 1, 2);
                let y = random_nct_element(&mut rng, 1, 2);
                for t in -3..=3 {
                    let v = BTreeMap::from([(t, Scalar::one())]);
                    let lhs = m.act_element(&m.act_element(&v, &x).unwrap(), &y).unwrap();
                    let rhs = m.act_element(&v, &x.mul(&y)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sign_flip_is_a_module_isomorphism() {
        // ψ sends the basis of T(−1,0,α) to normal forms in T(1,0,−α) and
        // must intertwine the generators.
        let m1 = realize_module(&class(-1, 0, "a1"), (-6, 6)).unwrap();
        let m2 = realize_module(&class(1, 0, "-a1"), (-6, 6)).unwrap();
        let psi = |t: i64| {
            let (n, l) = m1.representative(t);
            m2.normal_form(n, l)
        };
        for t in -5..=5 {
            for (m, k) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)] {
                let (t1, c1) = m1.act(t, m, k).unwrap();
                let (u1, d1) = psi(t1);
                let (u0, d0) = psi(t);
                let (u2, c2) = m2.act(u0, m, k).unwrap();
                assert_eq!(u1, u2);
                assert_eq!(&c1 * &d1, &d0 * &c2);
            }
        }
    }
}
